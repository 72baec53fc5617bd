//! Weighted paths, their blow-up graphs and the rays they realize.
//!
//! A weighted path assigns `p(v)` to each vertex and `p(vw)` to each edge of a
//! path with `2f + 1` edges. The blow-up `B_m` replaces `v` by a stable set of
//! about `m^{p(v)}` vertices and joins neighbouring sets by about `m^{p(vw)}`
//! edges, so that `log_m hom(P_i; B_m)` tends to the best weighted walk value.

use crate::exactlp::rat::{fmt_rat, parse_rat, serde_rat, serde_rat_vec, Rat};
use crate::graphs::{disjoint_union, make_named, tensor_product_with_limit, Graph, GraphError, Named};
use crate::pathprofile::rays::{
    decompose_unchecked, first_unit, ones, pivot, staircase, support_end, symmetrize_d, truncate_d, RFamilySpec,
    RayPart,
};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlowupError {
    #[error("spec condition violated: {0}")]
    Invariant(String),
    #[error("edge {edge} weight {weight} is outside [{lo}, {hi}]")]
    Inadmissible { edge: usize, weight: String, lo: String, hi: String },
    #[error("blow-up needs {needed} vertices, budget is {budget}")]
    Budget { needed: String, budget: usize },
    #[error("cannot parse spec: {0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Unrealizable(String),
}

fn two() -> Rat {
    Rat::from_integer(2.into())
}

fn sum(xs: &[Rat]) -> Rat {
    xs.iter().fold(Rat::zero(), |a, x| a + x)
}

/// Parameters of a weighted path with `2f + 1` edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpSpec {
    pub f: usize,
    #[serde(with = "serde_rat")]
    pub b: Rat,
    #[serde(with = "serde_rat")]
    pub s: Rat,
    #[serde(with = "serde_rat_vec")]
    pub d: Vec<Rat>,
}

impl BlowUpSpec {
    /// `f` defaults to the last nonzero index of `d`.
    pub fn new(b: Rat, s: Rat, d: Vec<Rat>) -> Self {
        let f = support_end(&d).unwrap_or(0);
        BlowUpSpec { f, b, s, d }
    }

    pub fn from_rfamily(spec: &RFamilySpec) -> Self {
        Self::new(spec.b.clone(), spec.s.clone(), spec.d.clone())
    }

    pub fn as_rfamily(&self) -> RFamilySpec {
        RFamilySpec::new(self.s.clone(), self.b.clone(), self.d.clone())
    }

    fn dv(&self, v: usize) -> Rat {
        self.d.get(v).cloned().unwrap_or_else(Rat::zero)
    }

    /// Largest `t <= f/2` with `d_t > 0`; zero when there is none.
    pub fn pivot(&self) -> usize {
        (0..=self.f / 2).rev().find(|&t| self.dv(t).is_positive()).unwrap_or(0)
    }

    /// Every defining condition, reporting the first failure.
    pub fn validate(&self) -> Result<(), BlowupError> {
        let fail = |m: &str| Err(BlowupError::Invariant(m.to_string()));
        if self.d.is_empty() {
            return fail("d is empty");
        }
        if self.s.is_negative() || self.b < self.s {
            return fail("need b >= s >= 0");
        }
        if self.d.iter().any(|x| x.is_negative()) {
            return fail("d has a negative entry");
        }
        if support_end(&self.d).is_some_and(|e| e > self.f) {
            return fail("d has nonzero entries beyond f");
        }
        if self.d[0] != &self.b - &self.s {
            return fail("d_0 must equal b - s");
        }
        if !crate::pathprofile::rays::prefix_dominant(&self.d) {
            return fail("prefix dominance");
        }
        let (f, t) = (self.f, self.pivot());
        if (0..t).any(|u| self.dv(u) != self.dv(f - u)) {
            return fail("d must mirror below the pivot");
        }
        if (t + 1..f.saturating_sub(t)).any(|u| !self.dv(u).is_zero()) {
            return fail("d must vanish strictly between the pivot and its mirror");
        }
        if self.dv(t) < self.dv(f - t) {
            return fail("d at the pivot must dominate its mirror");
        }
        if two() * sum(&self.d[1..]) > self.s {
            return fail("twice the tail sum of d exceeds s");
        }
        if t == 0 && self.s < self.d[0] {
            return fail("s >= d_0 is required when the pivot is zero");
        }
        Ok(())
    }

    /// The same spec with every parameter multiplied by `c`.
    pub fn scaled(&self, c: &Rat) -> Self {
        BlowUpSpec { f: self.f, b: &self.b * c, s: &self.s * c, d: self.d.iter().map(|x| x * c).collect() }
    }

    /// Text form `b=<rat> s=<rat> d=<rat>,<rat>,...` with an optional `f=<int>`.
    pub fn parse(text: &str) -> Result<Self, BlowupError> {
        let (mut b, mut s, mut d, mut f) = (None, None, None, None);
        let bad = |t: &str| BlowupError::Parse(t.to_string());
        for tok in text.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| bad(tok))?;
            match k {
                "b" => b = Some(parse_rat(v).map_err(|_| bad(tok))?),
                "s" => s = Some(parse_rat(v).map_err(|_| bad(tok))?),
                "f" => f = Some(v.parse::<usize>().map_err(|_| bad(tok))?),
                "d" => {
                    let xs: Result<Vec<Rat>, _> = v.split(',').map(parse_rat).collect();
                    d = Some(xs.map_err(|_| bad(tok))?);
                }
                _ => return Err(bad(tok)),
            }
        }
        let mut spec = BlowUpSpec::new(
            b.ok_or_else(|| bad("missing b"))?,
            s.ok_or_else(|| bad("missing s"))?,
            d.ok_or_else(|| bad("missing d"))?,
        );
        if let Some(f) = f {
            spec.f = f;
            if spec.d.len() <= f {
                spec.d.resize(f + 1, Rat::zero());
            }
        }
        Ok(spec)
    }

    pub fn to_text(&self) -> String {
        let d: Vec<String> = self.d.iter().map(fmt_rat).collect();
        format!("b={} s={} d={}", fmt_rat(&self.b), fmt_rat(&self.s), d.join(","))
    }
}

/// Vertex weights `p(v)` and edge weights `p({j, j+1})` of a path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedPath {
    #[serde(with = "serde_rat_vec")]
    pub vertex_weights: Vec<Rat>,
    #[serde(with = "serde_rat_vec")]
    pub edge_weights: Vec<Rat>,
}

impl WeightedPath {
    pub fn new(vertex_weights: Vec<Rat>, edge_weights: Vec<Rat>) -> Result<Self, BlowupError> {
        if edge_weights.len() + 1 != vertex_weights.len() {
            return Err(BlowupError::Invariant("a path needs one more vertex than edges".into()));
        }
        let w = WeightedPath { vertex_weights, edge_weights };
        w.check_admissible()?;
        Ok(w)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_weights.len()
    }

    /// `max(p(v), p(w)) <= p(vw) <= p(v) + p(w)` on every edge, all weights nonnegative.
    pub fn check_admissible(&self) -> Result<(), BlowupError> {
        if self.vertex_weights.iter().chain(&self.edge_weights).any(|x| x.is_negative()) {
            return Err(BlowupError::Invariant("negative weight".into()));
        }
        for (j, e) in self.edge_weights.iter().enumerate() {
            let (a, b) = (&self.vertex_weights[j], &self.vertex_weights[j + 1]);
            let lo = a.max(b).clone();
            let hi = a + b;
            if *e < lo || *e > hi {
                return Err(BlowupError::Inadmissible {
                    edge: j,
                    weight: fmt_rat(e),
                    lo: fmt_rat(&lo),
                    hi: fmt_rat(&hi),
                });
            }
        }
        Ok(())
    }
}

/// Weights of the path with `2f + 1` edges attached to a valid spec. For even `f`
/// the middle edge can exceed the sum of its endpoint weights; such paths still
/// give the limit ray as best walk value but have no blow-up graph.
pub fn weight_function(spec: &BlowUpSpec) -> Result<WeightedPath, BlowupError> {
    spec.validate()?;
    let f = spec.f;
    let (b, s, d0) = (&spec.b, &spec.s, spec.dv(0));
    let t = spec.pivot();
    let twist = spec.dv(f - t) - spec.dv(t);
    let nv = 2 * f + 2;
    let mut vw = vec![Rat::zero(); nv];
    vw[0] = b.clone();
    vw[1] = b - s;
    let mut acc = Rat::zero();
    for u in 1..=f.saturating_sub(1) / 2 {
        acc += spec.dv(u);
        vw[2 * u + 1] = &d0 + two() * &acc;
    }
    let mut acc = Rat::zero();
    for u in 1..=f / 2 {
        vw[2 * u] = s - &d0 - two() * &acc;
        acc += spec.dv(u);
    }
    for u in 0..=f {
        if 2 * f + 1 - u != 1 {
            vw[2 * f + 1 - u] = vw[u].clone();
        }
    }
    let mut ew = vec![s.clone(); 2 * f + 1];
    if f >= 1 {
        for u in 0..=(f - 1) / 2 {
            ew[2 * u] = s + spec.dv(u);
        }
    }
    ew[f] = if f % 2 == 0 { s + spec.dv(f / 2) + &twist } else { &vw[f] + &vw[f + 1] + &twist };
    for u in 0..f {
        ew[2 * f - u] = ew[u].clone();
    }
    if vw.iter().chain(&ew).any(|x| x.is_negative()) {
        return Err(BlowupError::Invariant("negative weight".into()));
    }
    Ok(WeightedPath { vertex_weights: vw, edge_weights: ew })
}

/// Whether the weights of a valid spec admit a blow-up graph.
pub fn is_admissible(spec: &BlowUpSpec) -> bool {
    weight_function(spec).is_ok_and(|p| p.check_admissible().is_ok())
}

/// Best weighted walk value `max_phi p(phi)` over homomorphisms of `P_i`.
pub fn max_weight_hom(p: &WeightedPath, i: usize) -> Rat {
    max_weight_vector(p, i).pop().expect("nonempty")
}

/// `max_weight_hom(p, k)` for `k = 0..=max_len`.
pub fn max_weight_vector(p: &WeightedPath, max_len: usize) -> Vec<Rat> {
    let n = p.vertex_count();
    let mut best = p.vertex_weights.clone();
    let mut out = vec![best.iter().max().cloned().unwrap_or_else(Rat::zero)];
    for _ in 0..max_len {
        let next: Vec<Rat> = (0..n)
            .map(|w| {
                let mut cand: Option<Rat> = None;
                for (v, e) in [(w.wrapping_sub(1), w.wrapping_sub(1)), (w + 1, w)] {
                    if v < n {
                        let val = &best[v] + &p.edge_weights[e] - &p.vertex_weights[v];
                        if cand.as_ref().is_none_or(|c| val > *c) {
                            cand = Some(val);
                        }
                    }
                }
                cand.unwrap_or_else(Rat::zero)
            })
            .collect();
        best = next;
        out.push(best.iter().max().cloned().unwrap_or_else(Rat::zero));
    }
    out
}

/// Closed-form limit ray `(r_0, ..., r_{2n+1})`.
pub fn limit_ray(spec: &BlowUpSpec, n: usize) -> Result<Vec<Rat>, BlowupError> {
    spec.validate()?;
    let mut d = spec.d.clone();
    d.resize((n + 1).max(d.len()), Rat::zero());
    let mut r = RFamilySpec::new(spec.s.clone(), spec.b.clone(), d).ray();
    r.truncate(2 * n + 2);
    Ok(r)
}

/// `round(m^p)`, halves rounded up, computed exactly.
pub fn round_power(m: u64, p: &Rat) -> Option<BigUint> {
    if p.is_negative() {
        return None;
    }
    let num = p.numer().to_u32()?;
    let den = p.denom().to_u32()?;
    let base = BigUint::from(m).pow(num);
    let k = base.nth_root(den);
    let lhs = (BigUint::from(2u32) * &k + 1u32).pow(den);
    let rhs = BigUint::from(2u32).pow(den) * &base;
    Some(if lhs <= rhs { k + 1u32 } else { k })
}

/// Sizes of the stable sets and edge counts of `B_m`, before construction.
pub fn blowup_sizes(p: &WeightedPath, m: u64) -> Option<(Vec<BigUint>, Vec<BigUint>)> {
    let parts: Option<Vec<_>> = p.vertex_weights.iter().map(|w| round_power(m, w)).collect();
    let edges: Option<Vec<_>> = p.edge_weights.iter().map(|w| round_power(m, w)).collect();
    Some((parts?, edges?))
}

/// Bipartite graph between `a` and `c` vertices in which every vertex of the
/// larger side has the same degree and the other side is as balanced as the
/// circulant layout allows.
fn circulant_join(edges: &mut Vec<(usize, usize)>, a0: usize, a: usize, c0: usize, c: usize, target: &BigUint) {
    let ((x0, x), (y0, y)) = if a >= c { ((a0, a), (c0, c)) } else { ((c0, c), (a0, a)) };
    let per = (target + BigUint::from(x / 2)) / BigUint::from(x);
    let delta = per.to_usize().unwrap_or(usize::MAX).clamp(1, y);
    for i in 0..x {
        for k in 0..delta {
            let j = (i * delta + k) % y;
            edges.push((x0 + i, y0 + j));
        }
    }
}

/// The finite blow-up graph at scale `m` within a vertex budget.
pub fn build_blowup_graph(p: &WeightedPath, m: u64, budget: usize) -> Result<Graph, BlowupError> {
    p.check_admissible()?;
    let (parts, edge_counts) =
        blowup_sizes(p, m).ok_or_else(|| BlowupError::Unrealizable("weights too large".into()))?;
    let total: BigUint = parts.iter().sum();
    let total = match total.to_usize() {
        Some(t) if t <= budget => t,
        _ => return Err(BlowupError::Budget { needed: total.to_string(), budget }),
    };
    let sizes: Vec<usize> = parts.iter().map(|x| x.to_usize().expect("within budget")).collect();
    let mut offsets = vec![0usize];
    for s in &sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    let mut edges = Vec::new();
    for (j, target) in edge_counts.iter().enumerate() {
        circulant_join(&mut edges, offsets[j], sizes[j], offsets[j + 1], sizes[j + 1], target);
    }
    Ok(Graph::new(total, edges)?)
}

/// `sum_phi m^{p(phi)}` over homomorphisms of `P_i`; equals `hom(P_i; B_m)` when
/// all weights are integers and every join is complete bipartite.
pub fn weighted_hom_sum(p: &WeightedPath, m: u64, max_len: usize) -> Option<Vec<BigUint>> {
    let n = p.vertex_count();
    let pow = |x: &Rat| -> Option<BigUint> {
        if !x.is_integer() || x.is_negative() {
            return None;
        }
        Some(BigUint::from(m).pow(x.to_integer().to_u32()?))
    };
    let mut cur: Vec<BigUint> = p.vertex_weights.iter().map(pow).collect::<Option<_>>()?;
    let mut out = vec![cur.iter().sum()];
    for _ in 0..max_len {
        let mut next = vec![BigUint::zero(); n];
        for v in 0..n {
            for (w, e) in [(v.wrapping_sub(1), v.wrapping_sub(1)), (v + 1, v)] {
                if w < n {
                    next[w] += &cur[v] * pow(&(&p.edge_weights[e] - &p.vertex_weights[v]))?;
                }
            }
        }
        cur = next;
        out.push(cur.iter().sum());
    }
    Some(out)
}

/// Number of homomorphisms of `P_i` into the weighted path itself.
pub fn path_self_hom_count(p: &WeightedPath, i: usize) -> BigUint {
    let n = p.vertex_count();
    let mut cur = vec![BigUint::one(); n];
    for _ in 0..i {
        cur = (0..n)
            .map(|w| {
                let mut acc = BigUint::zero();
                if w > 0 {
                    acc += &cur[w - 1];
                }
                if w + 1 < n {
                    acc += &cur[w + 1];
                }
                acc
            })
            .collect();
    }
    cur.iter().sum()
}

/// How a ray is realized by graphs whose log path counts tend to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Realizer {
    /// A blow-up of a weighted path.
    BlowUp { spec: BlowUpSpec },
    /// `K_N` with `N = m^c`: ray `c (1, 2, 3, ...)`.
    Clique {
        #[serde(with = "serde_rat")]
        c: Rat,
    },
    /// One edge plus isolated vertices, `m^c` vertices in total: ray `c (1, 0, 0, ...)`.
    UnitFirst {
        #[serde(with = "serde_rat")]
        c: Rat,
    },
    /// `m^c` disjoint edges: ray `c (1, 1, 1, ...)`.
    AllOnes {
        #[serde(with = "serde_rat")]
        c: Rat,
    },
    /// Sum of rays, realized by tensor products.
    Conic { terms: Vec<Realizer> },
    /// Coordinatewise maximum of rays, realized by disjoint unions.
    Max { terms: Vec<Realizer> },
}

/// How a symmetric R-family spec is realized: by its own blow-up, by a conic
/// combination with the all-ones ray, or as the maximum of its truncation and a
/// spec whose excess at the pivot moves to the middle index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RealizationTag {
    Direct,
    ConicWithOnes,
    Balanced,
}

impl Realizer {
    pub fn ray(&self, len: usize) -> Vec<Rat> {
        match self {
            Realizer::BlowUp { spec } => {
                let mut d = spec.d.clone();
                d.resize(len.div_ceil(2).max(d.len()), Rat::zero());
                let mut r = RFamilySpec::new(spec.s.clone(), spec.b.clone(), d).ray();
                r.truncate(len);
                r
            }
            Realizer::Clique { c } => staircase(len, c),
            Realizer::UnitFirst { c } => first_unit(len, c),
            Realizer::AllOnes { c } => ones(len, c),
            Realizer::Conic { terms } => terms
                .iter()
                .fold(vec![Rat::zero(); len], |acc, t| acc.iter().zip(t.ray(len)).map(|(a, b)| a + b).collect()),
            Realizer::Max { terms } => {
                let mut it = terms.iter().map(|t| t.ray(len));
                let first = it.next().unwrap_or_else(|| vec![Rat::zero(); len]);
                it.fold(first, |acc, r| acc.iter().zip(&r).map(|(a, b)| a.max(b).clone()).collect())
            }
        }
    }

    /// Upper estimate of the vertex count at scale `m`.
    pub fn vertex_estimate(&self, m: u64) -> Option<BigUint> {
        let at_least_two = |c: &Rat| round_power(m, c).map(|x| x.max(BigUint::from(2u32)));
        match self {
            Realizer::BlowUp { spec } => {
                let p = weight_function(spec).ok()?;
                Some(blowup_sizes(&p, m)?.0.iter().sum())
            }
            Realizer::Clique { c } | Realizer::UnitFirst { c } => at_least_two(c),
            Realizer::AllOnes { c } => round_power(m, c).map(|x| x * 2u32),
            Realizer::Conic { terms } => terms.iter().try_fold(BigUint::one(), |a, t| Some(a * t.vertex_estimate(m)?)),
            Realizer::Max { terms } => terms.iter().try_fold(BigUint::zero(), |a, t| Some(a + t.vertex_estimate(m)?)),
        }
    }

    /// Builds the graph at scale `m`.
    pub fn materialize(&self, m: u64, budget: usize) -> Result<Graph, BlowupError> {
        let est = self.vertex_estimate(m).ok_or_else(|| BlowupError::Unrealizable("weights too large".into()))?;
        if est > BigUint::from(budget) {
            return Err(BlowupError::Budget { needed: est.to_string(), budget });
        }
        let size = |c: &Rat| -> usize { round_power(m, c).and_then(|x| x.to_usize()).unwrap_or(usize::MAX).max(2) };
        Ok(match self {
            Realizer::BlowUp { spec } => build_blowup_graph(&weight_function(spec)?, m, budget)?,
            Realizer::Clique { c } => make_named(Named::Complete(size(c)))?,
            Realizer::UnitFirst { c } => Graph::new(size(c), [(0, 1)])?,
            Realizer::AllOnes { c } => {
                let k = round_power(m, c).and_then(|x| x.to_usize()).unwrap_or(usize::MAX);
                Graph::new(2 * k, (0..k).map(|i| (2 * i, 2 * i + 1)))?
            }
            Realizer::Conic { terms } => {
                let mut g = Graph::new(1, [])?;
                let mut first = true;
                for t in terms {
                    let h = t.materialize(m, budget)?;
                    g = if first { h } else { tensor_product_with_limit(&g, &h, budget)? };
                    first = false;
                }
                if first {
                    Graph::new(2, [(0, 1)])?
                } else {
                    g
                }
            }
            Realizer::Max { terms } => {
                let mut g = Graph::empty(0);
                for t in terms {
                    g = disjoint_union(&g, &t.materialize(m, budget)?);
                }
                g
            }
        })
    }
}

/// Tag for a symmetric pinned spec.
pub fn realization_tag(spec: &RFamilySpec) -> RealizationTag {
    let t = pivot(&spec.d).unwrap_or(0);
    let d0 = spec.d.first().cloned().unwrap_or_else(Rat::zero);
    if (t > 0 || spec.s >= d0) && is_admissible(&BlowUpSpec::from_rfamily(spec)) {
        RealizationTag::Direct
    } else if t == 0 {
        RealizationTag::ConicWithOnes
    } else {
        RealizationTag::Balanced
    }
}

fn conic(terms: Vec<Realizer>) -> Realizer {
    let mut kept: Vec<Realizer> = terms.into_iter().filter(|t| !is_zero_term(t)).collect();
    match kept.len() {
        0 => Realizer::AllOnes { c: Rat::zero() },
        1 => kept.pop().unwrap(),
        _ => Realizer::Conic { terms: kept },
    }
}

fn max_of(terms: Vec<Realizer>) -> Realizer {
    let mut kept: Vec<Realizer> = terms.into_iter().filter(|t| !is_zero_term(t)).collect();
    match kept.len() {
        0 => Realizer::AllOnes { c: Rat::zero() },
        1 => kept.pop().unwrap(),
        _ => Realizer::Max { terms: kept },
    }
}

fn is_zero_term(t: &Realizer) -> bool {
    match t {
        Realizer::Clique { c } | Realizer::UnitFirst { c } | Realizer::AllOnes { c } => c.is_zero(),
        Realizer::BlowUp { spec } => spec.b.is_zero() && spec.s.is_zero(),
        _ => false,
    }
}

/// Realizer for a symmetric pinned spec.
pub fn realize_symmetric(spec: &RFamilySpec) -> Result<(Realizer, RealizationTag), BlowupError> {
    let tag = realization_tag(spec);
    match tag {
        RealizationTag::Direct => {
            let b = BlowUpSpec::from_rfamily(spec);
            b.validate()?;
            Ok((Realizer::BlowUp { spec: b }, tag))
        }
        RealizationTag::ConicWithOnes => {
            let f = support_end(&spec.d).unwrap_or(0);
            let d0 = spec.d[0].clone();
            let df = if f == 0 { Rat::zero() } else { spec.d[f].clone() };
            let mut d = vec![Rat::zero(); spec.d.len()];
            d[0] = df.clone();
            d[f] = df.clone();
            let inner = BlowUpSpec::new(&spec.b - &d0 + &df, spec.s.clone(), d);
            inner.validate()?;
            Ok((conic(vec![Realizer::BlowUp { spec: inner }, Realizer::AllOnes { c: d0 - df }]), tag))
        }
        RealizationTag::Balanced => {
            let f = support_end(&spec.d).unwrap_or(0);
            let t = pivot(&spec.d).unwrap_or(0);
            let mut d = spec.d.clone();
            let excess = &d[t] - &d[f - t];
            d[t] = d[f - t].clone();
            d[f / 2] += excess;
            let balanced = BlowUpSpec::new(spec.b.clone(), spec.s.clone(), d);
            balanced.validate()?;
            if !is_admissible(&balanced) {
                return Err(BlowupError::Unrealizable(format!(
                    "balanced spec {} is not admissible",
                    balanced.to_text()
                )));
            }
            let truncated = truncate_d(&spec.d).map_err(|e| BlowupError::Unrealizable(e.to_string()))?;
            let lower = realize_pinned(&RFamilySpec::new(spec.s.clone(), spec.b.clone(), truncated))?;
            Ok((max_of(vec![lower, Realizer::BlowUp { spec: balanced }]), tag))
        }
    }
}

/// Realizer for a pinned spec, via the truncation chain of its `d`.
pub fn realize_pinned(spec: &RFamilySpec) -> Result<Realizer, BlowupError> {
    let mut d = spec.d.clone();
    let mut terms = Vec::new();
    loop {
        let sym = symmetrize_d(&d).map_err(|e| BlowupError::Unrealizable(e.to_string()))?;
        let (r, _) = realize_symmetric(&RFamilySpec::new(spec.s.clone(), spec.b.clone(), sym))?;
        terms.push(r);
        match support_end(&d) {
            Some(f) if f > 0 => d = truncate_d(&d).map_err(|e| BlowupError::Unrealizable(e.to_string()))?,
            _ => break,
        }
    }
    Ok(max_of(terms))
}

/// Realizer for any spec of the widest family.
pub fn realize_rfamily(spec: &RFamilySpec) -> Result<Realizer, BlowupError> {
    if !spec.check() {
        return Err(BlowupError::Invariant("not in the R-family".into()));
    }
    let d0 = spec.d[0].clone();
    let shift = &d0 + &spec.s - &spec.b;
    let s_bar = two() * &spec.b - &spec.s - two() * &d0;
    let b_bar = two() * &spec.b - &spec.s - &d0;
    let inner = realize_pinned(&RFamilySpec::new(s_bar, b_bar, spec.d.clone()))?;
    Ok(conic(vec![Realizer::Clique { c: shift }, inner]))
}

/// Realizer for a point of the projected path cone (not checked here).
pub fn realize_ray(r: &[Rat]) -> Result<Realizer, BlowupError> {
    if r.len() < 2 || r.len() % 2 != 0 {
        return Err(BlowupError::Unrealizable("ray length must be 2n+2".into()));
    }
    let mut terms = Vec::new();
    for part in decompose_unchecked(r) {
        match part {
            RayPart::Family { spec, .. } => terms.push(realize_rfamily(&spec)?),
            RayPart::Special { first, ones, .. } => {
                terms.push(conic(vec![Realizer::UnitFirst { c: first }, Realizer::AllOnes { c: ones }]))
            }
        }
    }
    let plan = max_of(terms);
    if plan.ray(r.len()) != r {
        return Err(BlowupError::Unrealizable("realization plan does not reproduce the ray".into()));
    }
    Ok(plan)
}

/// A graph for the ray scaled so that `r_0 = 1`, at scale `m`.
pub fn realize_graph(r: &[Rat], m: u64, budget: usize) -> Result<Graph, BlowupError> {
    let r0 = r.first().cloned().unwrap_or_else(Rat::zero);
    if !r0.is_positive() {
        return Err(BlowupError::Unrealizable("first coordinate must be positive".into()));
    }
    let scaled: Vec<Rat> = r.iter().map(|x| x / &r0).collect();
    realize_ray(&scaled)?.materialize(m, budget)
}

/// Exact `m^e` for integer `e >= 0`.
pub fn int_pow(m: u64, e: &Rat) -> Option<BigInt> {
    if !e.is_integer() || e.is_negative() {
        return None;
    }
    Some(BigInt::from(m).pow(e.to_integer().to_u32()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rat::{rat, rvec};
    use crate::graphs::path_hom_vector;

    fn example() -> BlowUpSpec {
        BlowUpSpec::new(rat(34), rat(30), rvec(&[4, 3, 3, 0, 1, 3, 4]))
    }

    const EXAMPLE_RAY: [i64; 14] = [34, 34, 64, 67, 94, 100, 124, 130, 154, 161, 184, 194, 214, 228];

    #[test]
    fn example_weights_and_ray() {
        let s = example();
        assert_eq!(s.pivot(), 2);
        let p = weight_function(&s).unwrap();
        assert_eq!(p.vertex_weights[..7], rvec(&[34, 4, 26, 10, 20, 16, 14])[..]);
        for u in 0..14 {
            assert_eq!(p.vertex_weights[13 - u], p.vertex_weights[u]);
        }
        assert_eq!(max_weight_vector(&p, 13), rvec(&EXAMPLE_RAY));
        assert_eq!(limit_ray(&s, 6).unwrap(), rvec(&EXAMPLE_RAY));
        assert_eq!(max_weight_hom(&p, 0), rat(34));
    }

    #[test]
    fn spec_text_round_trip() {
        let s = BlowUpSpec::parse("b=34 s=30 d=4,3,3,0,1,3,4").unwrap();
        assert_eq!(s, example());
        assert_eq!(BlowUpSpec::parse(&s.to_text()).unwrap(), s);
        assert!(BlowUpSpec::parse("b=1 s=1").is_err());
    }

    #[test]
    fn invalid_specs() {
        assert!(BlowUpSpec::new(rat(3), rat(1), rvec(&[1])).validate().is_err());
        assert!(BlowUpSpec::new(rat(5), rat(1), rvec(&[4])).validate().is_err());
        assert!(weight_function(&BlowUpSpec::new(rat(1), rat(2), rvec(&[0]))).is_err());
    }

    #[test]
    fn rounding_is_exact() {
        assert_eq!(round_power(4, &Rat::new(1.into(), 2.into())), Some(BigUint::from(2u32)));
        assert_eq!(round_power(10, &Rat::new(1.into(), 2.into())), Some(BigUint::from(3u32)));
        assert_eq!(round_power(12, &Rat::new(1.into(), 2.into())), Some(BigUint::from(3u32)));
        assert_eq!(round_power(13, &Rat::new(1.into(), 2.into())), Some(BigUint::from(4u32)));
        assert_eq!(round_power(7, &rat(0)), Some(BigUint::from(1u32)));
    }

    #[test]
    fn single_edge_blowup_is_a_star() {
        let s = BlowUpSpec::new(rat(1), rat(1), rvec(&[0]));
        let p = weight_function(&s).unwrap();
        for m in 2..6u64 {
            let g = build_blowup_graph(&p, m, 100).unwrap();
            assert_eq!(g.vertex_count() as u64, m + 1);
            let counts = path_hom_vector(&g, 6).counts;
            for (i, c) in counts.iter().enumerate() {
                let mb = BigUint::from(m);
                let expect =
                    if i % 2 == 0 { mb.pow(i as u32 / 2) * (m + 1) } else { mb.pow((i as u32 + 1) / 2) * 2u32 };
                assert_eq!(c, &expect);
            }
            assert_eq!(weighted_hom_sum(&p, m, 6).unwrap(), counts);
        }
    }

    #[test]
    fn realize_plan_reproduces_ray() {
        let r = rvec(&[14, 14, 24, 24, 34, 35, 44, 45, 55, 55, 66, 66]);
        let plan = realize_ray(&r).unwrap();
        assert_eq!(plan.ray(r.len()), r);
        let special = rvec(&[5, 1, 1, 1]);
        assert_eq!(realize_ray(&special).unwrap().ray(4), special);
    }

    #[test]
    fn conic_detour_tag() {
        let spec = RFamilySpec::new(rat(2), rat(7), rvec(&[5, 0, 1]));
        assert!(spec.is_symmetric());
        let (plan, tag) = realize_symmetric(&spec).unwrap();
        assert_eq!(tag, RealizationTag::ConicWithOnes);
        assert_eq!(plan.ray(6), spec.ray());
    }
}
