//! Simple graphs, exact homomorphism counting and the graph operations
//! (tensor product, disjoint union) that make profiles a semiring.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::fmt;

pub const DEFAULT_PATTERN_LIMIT: usize = 12;
pub const DEFAULT_PRODUCT_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    Duplicate(usize, usize),
    #[error("edge {0}-{1} out of range for {2} vertices")]
    OutOfRange(usize, usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("resource limit: {what} is {got}, limit {limit}")]
    ResourceLimit { what: &'static str, got: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Finite simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}; {:?})", self.n, self.edges)
    }
}

impl serde::Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Graph", 2)?;
        st.serialize_field("vertex_count", &self.n)?;
        st.serialize_field("edges", &self.edges)?;
        st.end()
    }
}

impl Graph {
    /// Builds a graph; rejects loops, duplicate edges and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange(u, v, n));
            }
            let e = (u.min(v), u.max(v));
            if !set.insert(e) {
                return Err(GraphError::Duplicate(e.0, e.1));
            }
        }
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Parses the text format: first line `n`, then `u v` per edge; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| GraphError::Parse { line: i + 1, msg: msg.to_string() };
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| bad("expected nonnegative integers")))
                .collect::<Result<_, _>>()?;
            match (n, nums.as_slice()) {
                (None, [k]) => n = Some(*k),
                (None, _) => return Err(bad("first line must hold the vertex count")),
                (Some(_), [u, v]) => {
                    if u >= v {
                        if u == v {
                            return Err(GraphError::Loop(*u));
                        }
                        return Err(bad("edges must be written as `u v` with u < v"));
                    }
                    edges.push((*u, *v));
                }
                (Some(_), _) => return Err(bad("expected `u v`")),
            }
        }
        let n = n.ok_or(GraphError::Parse { line: 0, msg: "missing vertex count".into() })?;
        Graph::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    fn adjacency_bits(&self) -> Vec<Vec<u64>> {
        let words = self.n.div_ceil(64).max(1);
        let mut bits = vec![vec![0u64; words]; self.n];
        for &(u, v) in &self.edges {
            bits[u][v / 64] |= 1 << (v % 64);
            bits[v][u / 64] |= 1 << (u % 64);
        }
        bits
    }
}

/// `counts[k]` is the number of homomorphisms from the path with `k` edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomCountVector {
    pub counts: Vec<BigUint>,
}

/// Counts homomorphisms `pattern -> target` by backtracking (pattern size limit 12).
pub fn hom_count(pattern: &Graph, target: &Graph) -> Result<BigUint, GraphError> {
    hom_count_with_limit(pattern, target, DEFAULT_PATTERN_LIMIT)
}

pub fn hom_count_with_limit(pattern: &Graph, target: &Graph, limit: usize) -> Result<BigUint, GraphError> {
    let k = pattern.vertex_count();
    if k == 0 {
        return Err(GraphError::InvalidParameter("pattern must have at least one vertex".into()));
    }
    if k > limit {
        return Err(GraphError::ResourceLimit { what: "pattern vertex count", got: k, limit });
    }
    // Order pattern vertices so that each one, where possible, follows a neighbor.
    let mut order = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    for start in 0..k {
        if placed[start] {
            continue;
        }
        placed[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in pattern.neighbors(u) {
                if !placed[w] {
                    placed[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let pos: Vec<usize> = {
        let mut p = vec![0; k];
        for (i, &u) in order.iter().enumerate() {
            p[u] = i;
        }
        p
    };
    let earlier: Vec<Vec<usize>> =
        order.iter().map(|&u| pattern.neighbors(u).iter().copied().filter(|&w| pos[w] < pos[u]).collect()).collect();
    if target.vertex_count() == 0 {
        return Ok(BigUint::zero());
    }
    let words = target.vertex_count().div_ceil(64);
    let mut all = vec![0u64; words];
    let mut with_edges = vec![0u64; words];
    for v in 0..target.vertex_count() {
        all[v / 64] |= 1 << (v % 64);
        if target.degree(v) > 0 {
            with_edges[v / 64] |= 1 << (v % 64);
        }
    }
    let mut search = HomSearch {
        order: &order,
        earlier: &earlier,
        pattern,
        bits: target.adjacency_bits(),
        all,
        with_edges,
        image: vec![0; k],
        acc: 0,
        total: BigUint::zero(),
    };
    search.descend(0);
    let HomSearch { acc, mut total, .. } = search;
    total += BigUint::from(acc);
    Ok(total)
}

struct HomSearch<'a> {
    order: &'a [usize],
    earlier: &'a [Vec<usize>],
    pattern: &'a Graph,
    bits: Vec<Vec<u64>>,
    all: Vec<u64>,
    with_edges: Vec<u64>,
    image: Vec<usize>,
    acc: u128,
    total: BigUint,
}

impl HomSearch<'_> {
    fn descend(&mut self, depth: usize) {
        let u = self.order[depth];
        // Degree pruning: a vertex with neighbors cannot land on an isolated vertex.
        let mut cand = if self.pattern.degree(u) > 0 { self.with_edges.clone() } else { self.all.clone() };
        for &w in &self.earlier[depth] {
            for (c, r) in cand.iter_mut().zip(&self.bits[self.image[w]]) {
                *c &= r;
            }
        }
        if depth + 1 == self.order.len() {
            self.acc += cand.iter().map(|x| x.count_ones() as u128).sum::<u128>();
            if self.acc > u64::MAX as u128 {
                self.total += BigUint::from(self.acc);
                self.acc = 0;
            }
            return;
        }
        for (wi, word) in cand.iter().enumerate() {
            let mut x = *word;
            while x != 0 {
                let b = x.trailing_zeros() as usize;
                x &= x - 1;
                self.image[u] = wi * 64 + b;
                self.descend(depth + 1);
            }
        }
    }
}

/// Path homomorphism numbers `hom(P_k; target)` for `k = 0..=max_len` via walk counting.
pub fn path_hom_vector(target: &Graph, max_len: usize) -> HomCountVector {
    let n = target.vertex_count();
    let mut w: Vec<BigUint> = vec![BigUint::one(); n];
    let mut counts = Vec::with_capacity(max_len + 1);
    counts.push(BigUint::from(n));
    for _ in 0..max_len {
        w = (0..n).map(|v| target.neighbors(v).iter().map(|&u| &w[u]).sum()).collect();
        counts.push(w.iter().sum());
    }
    HomCountVector { counts }
}

/// `hom(C_k; target)` as the trace of the k-th adjacency power.
pub fn cycle_hom(target: &Graph, k: usize) -> Result<BigUint, GraphError> {
    if k < 3 {
        return Err(GraphError::InvalidParameter(format!("cycle length {k} < 3")));
    }
    let n = target.vertex_count();
    let mut trace = BigUint::zero();
    for s in 0..n {
        let mut w: Vec<BigUint> = vec![BigUint::zero(); n];
        w[s] = BigUint::one();
        for _ in 0..k {
            w = (0..n).map(|v| target.neighbors(v).iter().map(|&u| &w[u]).sum()).collect();
        }
        trace += &w[s];
    }
    Ok(trace)
}

/// `hom(S_k; target)`: sum of k-th powers of degrees, with `0^0 = 1`.
pub fn star_hom(target: &Graph, k: usize) -> BigUint {
    (0..target.vertex_count()).map(|v| num_traits::pow(BigUint::from(target.degree(v)), k)).sum()
}

/// `hom(K_p; target)`: the number of ordered p-cliques.
pub fn clique_hom(target: &Graph, p: usize) -> Result<BigUint, GraphError> {
    clique_hom_with_limit(target, p, DEFAULT_PATTERN_LIMIT)
}

pub fn clique_hom_with_limit(target: &Graph, p: usize, limit: usize) -> Result<BigUint, GraphError> {
    if p == 0 {
        return Err(GraphError::InvalidParameter("clique size must be at least 1".into()));
    }
    if p > limit {
        return Err(GraphError::ResourceLimit { what: "clique size", got: p, limit });
    }
    fn extend(g: &Graph, cand: &[usize], need: usize) -> BigUint {
        if need == 0 {
            return BigUint::one();
        }
        let mut total = BigUint::zero();
        for (i, &v) in cand.iter().enumerate() {
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&w| g.has_edge(v, w)).collect();
            if next.len() + 1 >= need {
                total += extend(g, &next, need - 1);
            }
        }
        total
    }
    let all: Vec<usize> = (0..target.vertex_count()).collect();
    let unordered = extend(target, &all, p);
    let fact: BigUint = (1..=p).map(BigUint::from).product();
    Ok(unordered * fact)
}

/// Categorical product: `(a,b) ~ (c,d)` iff `a ~ c` and `b ~ d`. Vertex `(a,b)` is `a*|V2|+b`.
pub fn tensor_product(g1: &Graph, g2: &Graph) -> Result<Graph, GraphError> {
    tensor_product_with_limit(g1, g2, DEFAULT_PRODUCT_LIMIT)
}

pub fn tensor_product_with_limit(g1: &Graph, g2: &Graph, limit: usize) -> Result<Graph, GraphError> {
    let n2 = g2.vertex_count();
    let n = g1.vertex_count() * n2;
    if n > limit {
        return Err(GraphError::ResourceLimit { what: "product vertex count", got: n, limit });
    }
    let mut edges = Vec::new();
    for &(a, c) in g1.edges() {
        for &(b, d) in g2.edges() {
            edges.push((a * n2 + b, c * n2 + d));
            edges.push((a * n2 + d, c * n2 + b));
        }
    }
    Graph::new(n, edges)
}

/// Vertices of `g2` are shifted by `|V(g1)|`.
pub fn disjoint_union(g1: &Graph, g2: &Graph) -> Graph {
    let off = g1.vertex_count();
    let edges = g1.edges().iter().copied().chain(g2.edges().iter().map(|&(u, v)| (u + off, v + off)));
    Graph::new(off + g2.vertex_count(), edges).expect("union of simple graphs is simple")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Named {
    /// `K_n`
    Complete(usize),
    /// `C_n`, n >= 3
    Cycle(usize),
    /// path with the given number of edges
    Path(usize),
    /// star with the given number of leaves
    Star(usize),
    CompleteBipartite(usize, usize),
    /// complete `parts`-partite graph on `n` vertices with balanced parts
    Turan {
        n: usize,
        parts: usize,
    },
}

pub fn make_named(family: Named) -> Result<Graph, GraphError> {
    match family {
        Named::Complete(n) => Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))),
        Named::Cycle(n) => {
            if n < 3 {
                return Err(GraphError::InvalidParameter(format!("cycle length {n} < 3")));
            }
            Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Named::Path(k) => Graph::new(k + 1, (0..k).map(|i| (i, i + 1))),
        Named::Star(k) => Graph::new(k + 1, (1..=k).map(|i| (0, i))),
        Named::CompleteBipartite(a, b) => Graph::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))),
        Named::Turan { n, parts } => {
            if parts == 0 {
                return Err(GraphError::InvalidParameter("Turan graph needs at least one part".into()));
            }
            let part = |v: usize| v % parts;
            Graph::new(n, (0..n).flat_map(|u| (u + 1..n).filter(move |&v| part(u) != part(v)).map(move |v| (u, v))))
        }
    }
}

/// Canonical form: the lexicographically smallest adjacency bitmask over all
/// relabelings that list vertices by nondecreasing degree.
pub fn canonical_form(g: &Graph) -> (usize, Vec<u64>) {
    let n = g.vertex_count();
    let mut by_deg: Vec<usize> = (0..n).collect();
    by_deg.sort_by_key(|&v| g.degree(v));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &by_deg {
        match classes.last_mut() {
            Some(c) if g.degree(c[0]) == g.degree(v) => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best: Option<Vec<u64>> = None;
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    fn permute_classes(
        g: &Graph,
        classes: &[Vec<usize>],
        ci: usize,
        used: &mut Vec<bool>,
        perm: &mut Vec<usize>,
        best: &mut Option<Vec<u64>>,
    ) {
        if ci == classes.len() {
            let n = perm.len();
            let mut code = vec![0u64; (n * n).div_ceil(64).max(1)];
            for i in 0..n {
                for j in i + 1..n {
                    if g.has_edge(perm[i], perm[j]) {
                        let bit = i * n + j;
                        code[bit / 64] |= 1 << (63 - bit % 64);
                    }
                }
            }
            if best.as_ref().map_or(true, |b| code < *b) {
                *best = Some(code);
            }
            return;
        }
        let class = &classes[ci];
        let filled = perm.iter().filter(|&&v| class.contains(&v)).count();
        if filled == class.len() {
            permute_classes(g, classes, ci + 1, used, perm, best);
            return;
        }
        for &v in class {
            if !used[v] {
                used[v] = true;
                perm.push(v);
                permute_classes(g, classes, ci, used, perm, best);
                perm.pop();
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; n];
    permute_classes(g, &classes, 0, &mut used, &mut perm, &mut best);
    (n, best.unwrap_or_default())
}

/// All graphs on exactly `n` vertices up to isomorphism. `n <= 6`, or `n == 7` with `allow_seven`.
pub fn graphs_on(n: usize, allow_seven: bool) -> Result<Vec<Graph>, GraphError> {
    let limit = if allow_seven { 7 } else { 6 };
    if n > limit {
        return Err(GraphError::ResourceLimit { what: "enumeration vertex count", got: n, limit });
    }
    let mut level: Vec<Graph> = vec![Graph::empty(0)];
    for k in 1..=n {
        let mut seen = std::collections::BTreeMap::new();
        for g in &level {
            for mask in 0u32..(1 << (k - 1)) {
                let edges =
                    g.edges().iter().copied().chain((0..k - 1).filter(|i| mask >> i & 1 == 1).map(|i| (i, k - 1)));
                let h = Graph::new(k, edges)?;
                seen.entry(canonical_form(&h)).or_insert(h);
            }
        }
        level = seen.into_values().collect();
    }
    Ok(level)
}

/// All graphs with between 1 and `max_n` vertices, up to isomorphism.
pub fn graphs_up_to(max_n: usize, allow_seven: bool) -> Result<Vec<Graph>, GraphError> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(graphs_on(n, allow_seven)?);
    }
    Ok(out)
}

/// Erdos-Renyi graph `G(n, p)`: each pair is an edge independently with probability `p`.
pub fn random_graph<R: rand::Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p.clamp(0.0, 1.0))).collect();
    Graph::new(n, edges).expect("pairs are distinct and in range")
}
