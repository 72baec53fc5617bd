//! Homomorphism domination exponents: closed forms for path pairs and the
//! polymatroid linear program for chordal sources.
//!
//! Subset functions on a target with `n` vertices are vectors of length `2^n`
//! indexed by vertex bitmasks.

use crate::cones::nullspace;
use crate::exactlp::rat::primitive_integer;
use crate::exactlp::{solve, verify_outcome, LinearProgram, LpError, LpOutcome, Rat};
use crate::graphs::{make_named, Graph, GraphError, Named};
use crate::pathprofile::{BinomialInequality, Family, IneqParseError};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HdeError {
    #[error("source component {0} is not chordal")]
    NotChordal(String),
    #[error("source component {0} is not connected")]
    Disconnected(String),
    #[error("negative multiplicity for component {0}")]
    NegativeMultiplicity(String),
    #[error("{what} has size {got}, limit {limit}")]
    TooLarge { what: &'static str, got: usize, limit: usize },
    #[error("vertex map {0:?} is not a homomorphism")]
    NotHomomorphism(Vec<usize>),
    #[error("unsupported term {0:?}")]
    Term(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Parse(#[from] IneqParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone)]
pub struct HdeOptions {
    /// Largest target vertex count.
    pub max_target_vertices: usize,
    /// Largest number of homomorphisms enumerated per component.
    pub hom_budget: usize,
}

impl Default for HdeOptions {
    fn default() -> Self {
        HdeOptions { max_target_vertices: 8, hom_budget: 1_000_000 }
    }
}

fn mask_of(vs: impl IntoIterator<Item = usize>) -> u64 {
    vs.into_iter().fold(0, |m, v| m | (1u64 << v))
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&i| mask >> i & 1 == 1)
}

pub fn fmt_set(mask: u64) -> String {
    let items: Vec<String> = bits(mask).map(|v| v.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn neighbor_masks(g: &Graph) -> Vec<u64> {
    (0..g.vertex_count()).map(|v| mask_of(g.neighbors(v).iter().copied())).collect()
}

/// Maximal cliques together with a chordality verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueReport {
    pub cliques: Vec<Vec<usize>>,
    pub chordal: bool,
    /// A perfect elimination ordering when the graph is chordal.
    pub elimination_order: Option<Vec<usize>>,
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    let pivot = bits(p | x).max_by_key(|&u| (p & adj[u]).count_ones()).unwrap_or(0);
    for v in bits(p & !adj[pivot]).collect::<Vec<_>>() {
        bron_kerbosch(adj, r | 1 << v, p & adj[v], x & adj[v], out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

fn perfect_elimination_order(adj: &[u64]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut alive: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut order = Vec::with_capacity(n);
    while alive != 0 {
        let v = bits(alive).find(|&v| {
            let nb = adj[v] & alive;
            bits(nb).all(|u| nb & !(1 << u) & !adj[u] == 0)
        })?;
        order.push(v);
        alive &= !(1 << v);
    }
    Some(order)
}

pub fn maximal_cliques(g: &Graph) -> Result<CliqueReport, HdeError> {
    let n = g.vertex_count();
    if n > 64 {
        return Err(HdeError::TooLarge { what: "graph", got: n, limit: 64 });
    }
    let adj = neighbor_masks(g);
    let mut masks = Vec::new();
    if n > 0 {
        bron_kerbosch(&adj, 0, mask_of(0..n), 0, &mut masks);
    }
    let mut cliques: Vec<Vec<usize>> = masks.into_iter().map(|m| bits(m).collect()).collect();
    cliques.sort();
    let elimination_order = perfect_elimination_order(&adj);
    Ok(CliqueReport { cliques, chordal: elimination_order.is_some(), elimination_order })
}

/// No `K_4` minor: repeatedly delete vertices of degree at most one and
/// suppress vertices of degree two.
pub fn is_series_parallel(g: &Graph) -> bool {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    loop {
        let Some(&v) = alive.iter().find(|&&v| adj[v].len() <= 2) else { break };
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for &u in &nb {
            adj[u].remove(&v);
        }
        if let [a, b] = nb[..] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        adj[v].clear();
        alive.remove(&v);
    }
    alive.is_empty()
}

/// One row over subset coordinates: `sum coeff * p(mask) (>= or =) rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetRow {
    pub label: String,
    pub terms: Vec<(u64, i64)>,
    pub rhs: i64,
    pub equality: bool,
}

impl SubsetRow {
    fn new(label: String, terms: &[(u64, i64)], rhs: i64, equality: bool) -> Self {
        let mut acc: BTreeMap<u64, i64> = BTreeMap::new();
        for &(m, c) in terms {
            *acc.entry(m).or_insert(0) += c;
        }
        acc.retain(|_, c| *c != 0);
        SubsetRow { label, terms: acc.into_iter().collect(), rhs, equality }
    }

    pub fn lhs(&self, p: &[Rat]) -> Rat {
        self.terms.iter().map(|&(m, c)| &p[m as usize] * Rat::from_integer(c.into())).sum()
    }

    pub fn holds(&self, p: &[Rat]) -> bool {
        let v = self.lhs(p);
        let rhs = Rat::from_integer(self.rhs.into());
        if self.equality {
            v == rhs
        } else {
            v >= rhs
        }
    }
}

/// The normalized polymatroid polytope of a target graph.
#[derive(Debug, Clone, Serialize)]
pub struct PolymatroidSystem {
    pub base_graph: Graph,
    pub rows: Vec<SubsetRow>,
}

impl PolymatroidSystem {
    pub fn vertex_count(&self) -> usize {
        self.base_graph.vertex_count()
    }

    pub fn coordinate_count(&self) -> usize {
        1 << self.vertex_count()
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        p.len() == self.coordinate_count() && self.rows.iter().all(|r| r.holds(p))
    }
}

/// Whether every path from `a` to `b` meets `sep`.
pub fn separates(adj: &[u64], sep: u64, a: u64, b: u64) -> bool {
    let mut seen = a & !sep;
    let mut frontier = seen;
    while frontier != 0 {
        let next = bits(frontier).fold(0, |m, v| m | adj[v]) & !sep & !seen;
        seen |= next;
        frontier = next;
    }
    seen & b == 0
}

pub fn polymatroid_system(f2: &Graph) -> Result<PolymatroidSystem, HdeError> {
    polymatroid_system_with(f2, &HdeOptions::default())
}

pub fn polymatroid_system_with(f2: &Graph, opts: &HdeOptions) -> Result<PolymatroidSystem, HdeError> {
    let n = f2.vertex_count();
    if n > opts.max_target_vertices.min(16) {
        return Err(HdeError::TooLarge { what: "target", got: n, limit: opts.max_target_vertices.min(16) });
    }
    let full = (1u64 << n) - 1;
    let adj = neighbor_masks(f2);
    let mut rows =
        vec![SubsetRow::new("empty".into(), &[(0, 1)], 0, true), SubsetRow::new("full".into(), &[(full, 1)], 1, true)];
    for a in 0..=full {
        for i in bits(full & !a) {
            rows.push(SubsetRow::new(format!("mono[A={},i={i}]", fmt_set(a)), &[(a | 1 << i, 1), (a, -1)], 0, false));
        }
    }
    for a in 0..=full {
        let rest: Vec<usize> = bits(full & !a).collect();
        for (x, &i) in rest.iter().enumerate() {
            for &j in &rest[x + 1..] {
                let (ai, aj) = (a | 1 << i, a | 1 << j);
                rows.push(SubsetRow::new(
                    format!("submod[A={},i={i},j={j}]", fmt_set(a)),
                    &[(ai, 1), (aj, 1), (ai | aj, -1), (a, -1)],
                    0,
                    false,
                ));
            }
        }
    }
    for a in 1..=full {
        for b in a + 1..=full {
            let meet = a & b;
            if meet == a || meet == b || !separates(&adj, meet, a & !b, b & !a) {
                continue;
            }
            rows.push(SubsetRow::new(
                format!("modular[A={},B={}]", fmt_set(a), fmt_set(b)),
                &[(meet, 1), (a | b, 1), (a, -1), (b, -1)],
                0,
                true,
            ));
        }
    }
    Ok(PolymatroidSystem { base_graph: f2.clone(), rows })
}

/// `p_i(S) = 1` iff `i` is in `S`.
pub fn indicator_point(n: usize, i: usize) -> Vec<Rat> {
    (0..1u64 << n).map(|s| if s >> i & 1 == 1 { Rat::one() } else { Rat::zero() }).collect()
}

/// The average of all indicator points: `p(S) = |S| / n`.
pub fn averaged_point(n: usize) -> Vec<Rat> {
    (0..1u64 << n).map(|s| Rat::new(BigInt::from(s.count_ones()), BigInt::from(n))).collect()
}

/// Connected chordal components with nonnegative multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpec {
    pub components: Vec<(Graph, Rat)>,
}

fn term_graph(family: Family, k: usize) -> Result<Graph, HdeError> {
    let named = match family {
        Family::Paths => Named::Path(k),
        Family::Stars => Named::Star(k),
        Family::Cliques => Named::Complete(k),
        Family::EvenCycles | Family::OddCycles => Named::Cycle(k),
    };
    Ok(make_named(named)?)
}

fn connected_components(g: &Graph) -> Vec<Graph> {
    let n = g.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut members = Vec::new();
        while let Some(v) = stack.pop() {
            members.push(v);
            for &u in g.neighbors(v) {
                if comp[u] == usize::MAX {
                    comp[u] = id;
                    stack.push(u);
                }
            }
        }
        members.sort();
        groups.push(members);
    }
    groups
        .iter()
        .map(|members| {
            let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let edges = g.edges().iter().filter(|(u, _)| pos.contains_key(u)).map(|&(u, v)| (pos[&u], pos[&v]));
            Graph::new(members.len(), edges).expect("induced subgraph is simple")
        })
        .collect()
}

impl SourceSpec {
    /// Validates components and merges identical ones.
    pub fn new(components: Vec<(Graph, Rat)>) -> Result<Self, HdeError> {
        let mut merged: Vec<(Graph, Rat)> = Vec::new();
        for (g, a) in components {
            let name = format!("{g:?}");
            if a.is_negative() {
                return Err(HdeError::NegativeMultiplicity(name));
            }
            if g.vertex_count() == 0 || !g.is_connected() {
                return Err(HdeError::Disconnected(name));
            }
            if !maximal_cliques(&g)?.chordal {
                return Err(HdeError::NotChordal(name));
            }
            match merged.iter_mut().find(|(h, _)| *h == g) {
                Some((_, b)) => *b += a,
                None => merged.push((g, a)),
            }
        }
        Ok(SourceSpec { components: merged })
    }

    /// Each connected component of `g` with multiplicity one.
    pub fn from_graph(g: &Graph) -> Result<Self, HdeError> {
        Self::new(connected_components(g).into_iter().map(|h| (h, Rat::one())).collect())
    }

    /// Term grammar of binomial inequalities, e.g. `P0^2*P5^3`.
    pub fn parse(text: &str) -> Result<Self, HdeError> {
        let ineq = BinomialInequality::parse(&format!("{text} >= 1"))?;
        let comps = ineq
            .lhs
            .iter()
            .map(|(&k, a)| Ok((term_graph(ineq.family, k)?, a.clone())))
            .collect::<Result<Vec<_>, HdeError>>()?;
        if comps.is_empty() {
            return Err(HdeError::Term(text.to_string()));
        }
        Self::new(comps)
    }
}

/// A single term such as `P4` or `K3` as a graph.
pub fn parse_target(text: &str) -> Result<Graph, HdeError> {
    let ineq = BinomialInequality::parse(&format!("{text} >= 1"))?;
    let one = Rat::one();
    match ineq.lhs.iter().collect::<Vec<_>>()[..] {
        [(&k, a)] if *a == one => term_graph(ineq.family, k),
        _ => Err(HdeError::Term(text.to_string())),
    }
}

/// All homomorphisms from a connected `h` into `g`, as vertex maps.
pub fn homomorphisms(h: &Graph, g: &Graph, budget: usize) -> Result<Vec<Vec<usize>>, HdeError> {
    let n = h.vertex_count();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for s in 0..n {
        if placed[s] {
            continue;
        }
        placed[s] = true;
        order.push(s);
        let mut i = order.len() - 1;
        while i < order.len() {
            for &u in h.neighbors(order[i]) {
                if !placed[u] {
                    placed[u] = true;
                    order.push(u);
                }
            }
            i += 1;
        }
    }
    let mut out = Vec::new();
    let mut phi = vec![usize::MAX; n];
    extend_hom(h, g, &order, 0, &mut phi, &mut out, budget)?;
    Ok(out)
}

fn extend_hom(
    h: &Graph,
    g: &Graph,
    order: &[usize],
    depth: usize,
    phi: &mut [usize],
    out: &mut Vec<Vec<usize>>,
    budget: usize,
) -> Result<(), HdeError> {
    if depth == order.len() {
        if out.len() == budget {
            return Err(HdeError::TooLarge { what: "homomorphism set", got: budget + 1, limit: budget });
        }
        out.push(phi.to_vec());
        return Ok(());
    }
    let v = order[depth];
    for x in 0..g.vertex_count() {
        if h.neighbors(v).iter().all(|&u| phi[u] == usize::MAX || g.has_edge(phi[u], x)) {
            phi[v] = x;
            extend_hom(h, g, order, depth + 1, phi, out, budget)?;
            phi[v] = usize::MAX;
        }
    }
    Ok(())
}

fn image(mask: u64, phi: &[usize]) -> u64 {
    bits(mask).fold(0, |m, v| m | 1 << phi[v])
}

fn collect_form(cliques: &[u64], start: usize, inter: u64, size: usize, phi: &[usize], acc: &mut BTreeMap<u64, i64>) {
    for (i, &c) in cliques.iter().enumerate().skip(start) {
        let x = inter & c;
        if x == 0 {
            continue;
        }
        *acc.entry(image(x, phi)).or_insert(0) += if size % 2 == 0 { 1 } else { -1 };
        collect_form(cliques, i + 1, x, size + 1, phi, acc);
    }
}

/// Inclusion-exclusion over maximal cliques as a linear form in the subset
/// function; subsets with empty intersection are skipped since `p(empty) = 0`.
pub fn c_phi_form(cliques: &[Vec<usize>], phi: &[usize]) -> BTreeMap<u64, i64> {
    let masks: Vec<u64> = cliques.iter().map(|c| mask_of(c.iter().copied())).collect();
    let mut acc = BTreeMap::new();
    collect_form(&masks, 0, u64::MAX, 0, phi, &mut acc);
    acc.retain(|_, c| *c != 0);
    acc
}

pub fn c_phi(h: &Graph, g: &Graph, phi: &[usize], p: &[Rat]) -> Result<Rat, HdeError> {
    let ok = phi.len() == h.vertex_count()
        && phi.iter().all(|&x| x < g.vertex_count())
        && h.edges().iter().all(|&(u, v)| g.has_edge(phi[u], phi[v]));
    if !ok {
        return Err(HdeError::NotHomomorphism(phi.to_vec()));
    }
    let cliques = maximal_cliques(h)?.cliques;
    Ok(c_phi_form(&cliques, phi).into_iter().map(|(m, c)| &p[m as usize] * Rat::from_integer(c.into())).sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HdeValue {
    Finite(Rat),
    NegInfinity,
}

impl HdeValue {
    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            HdeValue::Finite(r) => Some(r),
            HdeValue::NegInfinity => None,
        }
    }
}

impl fmt::Display for HdeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HdeValue::Finite(r) => write!(f, "{r}"),
            HdeValue::NegInfinity => write!(f, "-inf"),
        }
    }
}

impl Serialize for HdeValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HdeResult {
    pub value: HdeValue,
    /// The target has no `K_4` minor, so the program value is the exponent itself.
    pub series_parallel: bool,
    /// An optimal subset function when the value is finite.
    #[serde(serialize_with = "ser_point")]
    pub optimal_point: Option<Vec<Rat>>,
}

fn ser_point<S: Serializer>(p: &Option<Vec<Rat>>, s: S) -> Result<S::Ok, S::Error> {
    let strings: Option<Vec<String>> = p.as_ref().map(|v| v.iter().map(|x| x.to_string()).collect());
    strings.serialize(s)
}

/// The affine hull of the polytope, parametrized as `p = N z`.
struct Reduced {
    /// `columns[mask]` holds `(N_i[mask])_i`.
    columns: Vec<Vec<Rat>>,
    dim: usize,
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn to_mod(c: i64) -> u64 {
    (c.rem_euclid(PRIME as i64)) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

/// Indices of a maximal subset of `rows` independent modulo a large prime.
fn independent_rows(rows: &[&SubsetRow], dim: usize) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut keep = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut v = vec![0u64; dim];
        for &(m, c) in &row.terms {
            v[m as usize] = (v[m as usize] + to_mod(c)) % PRIME;
        }
        for (piv, b) in &basis {
            let f = v[*piv];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    if *y != 0 {
                        *x = (*x + PRIME - mulmod(f, *y)) % PRIME;
                    }
                }
            }
        }
        if let Some(piv) = v.iter().position(|&x| x != 0) {
            let inv = powmod(v[piv], PRIME - 2);
            for x in v.iter_mut() {
                *x = mulmod(*x, inv);
            }
            basis.push((piv, v));
            keep.push(idx);
        }
    }
    keep
}

fn dense(row: &SubsetRow, dim: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    for &(m, c) in &row.terms {
        v[m as usize] += Rat::from_integer(c.into());
    }
    v
}

fn reduce_equalities(system: &PolymatroidSystem) -> Reduced {
    let dim = system.coordinate_count();
    let homogeneous: Vec<&SubsetRow> = system.rows.iter().filter(|r| r.equality && r.rhs == 0).collect();
    let mut chosen: BTreeSet<usize> = independent_rows(&homogeneous, dim).into_iter().collect();
    loop {
        let mat: Vec<Vec<Rat>> = chosen.iter().map(|&i| dense(homogeneous[i], dim)).collect();
        let basis = nullspace(&mat, dim);
        let missed: Vec<usize> = homogeneous
            .iter()
            .enumerate()
            .filter(|(_, r)| basis.iter().any(|b| !r.lhs(b).is_zero()))
            .map(|(i, _)| i)
            .collect();
        if missed.is_empty() {
            let columns = (0..dim).map(|m| basis.iter().map(|b| b[m].clone()).collect()).collect();
            return Reduced { columns, dim: basis.len() };
        }
        chosen.extend(missed);
    }
}

impl Reduced {
    fn form(&self, terms: impl IntoIterator<Item = (u64, i64)>) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (m, c) in terms {
            let c = Rat::from_integer(c.into());
            for (o, x) in out.iter_mut().zip(&self.columns[m as usize]) {
                if !x.is_zero() {
                    *o += &c * x;
                }
            }
        }
        out
    }

    fn point(&self, z: &[Rat]) -> Vec<Rat> {
        self.columns.iter().map(|col| col.iter().zip(z).map(|(a, b)| a * b).sum()).collect()
    }
}

fn primitive_key(v: &[Rat]) -> Option<Vec<BigInt>> {
    (!v.iter().all(|x| x.is_zero())).then(|| primitive_integer(v))
}

struct Prepared {
    alpha: Rat,
    forms: Vec<BTreeMap<u64, i64>>,
}

fn prepare(source: &SourceSpec, f2: &Graph, opts: &HdeOptions) -> Result<Vec<Prepared>, HdeError> {
    source
        .components
        .iter()
        .filter(|(_, a)| a.is_positive())
        .map(|(h, a)| {
            let cliques = maximal_cliques(h)?.cliques;
            let homs = homomorphisms(h, f2, opts.hom_budget)?;
            let forms: BTreeSet<BTreeMap<u64, i64>> = homs.iter().map(|phi| c_phi_form(&cliques, phi)).collect();
            Ok(Prepared { alpha: a.clone(), forms: forms.into_iter().collect() })
        })
        .collect()
}

/// `sum_j alpha_j max_phi c_phi(p)`, or `None` when some component has no homomorphism.
pub fn max_c_phi(source: &SourceSpec, f2: &Graph, p: &[Rat]) -> Result<Option<Rat>, HdeError> {
    let mut total = Rat::zero();
    for comp in prepare(source, f2, &HdeOptions::default())? {
        let best = comp
            .forms
            .iter()
            .map(|f| f.iter().map(|(&m, &c)| &p[m as usize] * Rat::from_integer(c.into())).sum::<Rat>())
            .max();
        match best {
            Some(b) => total += &comp.alpha * b,
            None => return Ok(None),
        }
    }
    Ok(Some(total))
}

pub fn hde_lp(source: &SourceSpec, f2: &Graph) -> Result<HdeResult, HdeError> {
    hde_lp_with(source, f2, &HdeOptions::default())
}

/// `min over p in the polytope of sum_j alpha_j max_phi c_phi(p)`, with one
/// epigraph variable per component.
pub fn hde_lp_with(source: &SourceSpec, f2: &Graph, opts: &HdeOptions) -> Result<HdeResult, HdeError> {
    let series_parallel = is_series_parallel(f2);
    let system = polymatroid_system_with(f2, opts)?;
    let comps = prepare(source, f2, opts)?;
    let neg_inf = HdeResult { value: HdeValue::NegInfinity, series_parallel, optimal_point: None };
    if comps.iter().any(|c| c.forms.is_empty()) {
        return Ok(neg_inf);
    }
    let red = reduce_equalities(&system);
    let k = red.dim;
    let width = k + comps.len();
    let mut objective = vec![Rat::zero(); width];
    for (j, c) in comps.iter().enumerate() {
        objective[k + j] = c.alpha.clone();
    }
    let mut lp = LinearProgram::new(objective);
    let pad = |mut v: Vec<Rat>| {
        v.resize(width, Rat::zero());
        v
    };
    let mut seen = BTreeSet::new();
    for row in &system.rows {
        let f = red.form(row.terms.iter().copied());
        if row.equality && row.rhs == 0 {
            continue;
        }
        if row.equality {
            lp.add_eq(row.label.clone(), pad(f), Rat::from_integer(row.rhs.into()));
        } else if let Some(key) = primitive_key(&f) {
            if seen.insert(key) {
                lp.add_ge(row.label.clone(), pad(f), Rat::from_integer(row.rhs.into()));
            }
        }
    }
    for (j, c) in comps.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for (r, form) in c.forms.iter().enumerate() {
            let mut v: Vec<Rat> = red.form(form.iter().map(|(&m, &c)| (m, -c)));
            v.resize(width, Rat::zero());
            v[k + j] = Rat::one();
            if seen.insert(primitive_integer(&v)) {
                lp.add_ge(format!("hom[{j},{r}]"), v, Rat::zero());
            }
        }
    }
    let outcome = solve(&lp)?;
    if !verify_outcome(&lp, &outcome) {
        return Err(HdeError::Internal("linear program certificate failed to verify".into()));
    }
    match outcome {
        LpOutcome::Optimal { x, objective_value, .. } => {
            let p = red.point(&x[..k]);
            Ok(HdeResult { value: HdeValue::Finite(objective_value), series_parallel, optimal_point: Some(p) })
        }
        LpOutcome::Unbounded { .. } => Ok(neg_inf),
        LpOutcome::Infeasible { .. } => Err(HdeError::Internal("polymatroid polytope reported empty".into())),
    }
}

/// Closed form for `HDE(P_v; P_w)` with path lengths counted in edges.
pub fn hde_paths_closed_form(v: u64, w: u64) -> Rat {
    let r = |a: u64, b: u64| Rat::new(BigInt::from(a), BigInt::from(b));
    if v >= w {
        Rat::one()
    } else if v % 2 == 0 {
        r(v + 1, w + 1)
    } else if w % 2 == 0 {
        r(v + 1, w + 2)
    } else {
        let k = (w + 1).div_ceil(v + 1);
        r(k * (v + 1) - v, k * w + 2 * k - w - 1)
    }
}
