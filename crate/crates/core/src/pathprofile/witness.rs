//! Exact evaluation of binomial inequalities on concrete graphs and the
//! search for violating graphs.

use super::ineq::{BinomialInequality, Family};
use super::PathError;
use crate::exactlp::rat::Rat;
use crate::graphs::{disjoint_union, graphs_up_to, make_named, path_hom_vector, Graph, Named};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessSource {
    CliqueUnion,
    Enumeration,
    BlowUp,
}

/// A graph on which `lhs^D < rhs^D`, with `D` clearing all exponent denominators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub graph: Graph,
    pub scale: u64,
    #[serde(serialize_with = "ser_big")]
    pub lhs: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub rhs: BigUint,
    pub source: WitnessSource,
}

fn ser_big<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Debug, Clone)]
pub struct WitnessOptions {
    /// Largest vertex count for the clique-union stage.
    pub clique_vertices: usize,
    /// Largest vertex count for exhaustive enumeration (at most 7).
    pub max_vertices: usize,
    /// Vertex budget for blow-up graphs; zero disables the stage.
    pub blowup_budget: usize,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { clique_vertices: 16, max_vertices: 7, blowup_budget: 20_000 }
    }
}

/// Common denominator of all exponents.
pub fn exponent_scale(ineq: &BinomialInequality) -> BigInt {
    ineq.lhs.values().chain(ineq.rhs.values()).fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
}

fn side_value(side: &BTreeMap<usize, Rat>, counts: &[BigUint], scale: &BigInt) -> Option<BigUint> {
    let mut acc = BigUint::one();
    for (&k, e) in side {
        let exp = (e * Rat::from_integer(scale.clone())).to_integer().to_u32()?;
        acc *= counts.get(k)?.pow(exp);
    }
    Some(acc)
}

/// Both sides raised to the common denominator, or `None` if an involved count is zero.
pub fn evaluate_scaled(ineq: &BinomialInequality, counts: &[BigUint]) -> Option<(BigUint, BigUint)> {
    if ineq.lhs.keys().chain(ineq.rhs.keys()).any(|&k| counts.get(k).is_none_or(|c| c.is_zero())) {
        return None;
    }
    let scale = exponent_scale(ineq);
    Some((side_value(&ineq.lhs, counts, &scale)?, side_value(&ineq.rhs, counts, &scale)?))
}

/// Some-true when the path inequality fails on `g` with all involved counts positive.
pub fn violation_on(ineq: &BinomialInequality, g: &Graph) -> Option<(BigUint, BigUint)> {
    let counts = path_hom_vector(g, ineq.max_index().unwrap_or(0)).counts;
    evaluate_scaled(ineq, &counts).filter(|(l, r)| l < r)
}

fn make_witness(ineq: &BinomialInequality, g: Graph, lhs: BigUint, rhs: BigUint, source: WitnessSource) -> Witness {
    let scale = exponent_scale(ineq).to_u64().unwrap_or(u64::MAX);
    Witness { graph: g, scale, lhs, rhs, source }
}

/// Partitions of `total` into parts of size at least 2, parts non-increasing.
fn partitions(total: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if total == 0 {
        out.push(prefix.clone());
        return;
    }
    for p in (2..=max_part.min(total)).rev() {
        if total - p == 1 {
            continue;
        }
        prefix.push(p);
        partitions(total - p, p, prefix, out);
        prefix.pop();
    }
}

fn clique_union(parts: &[usize]) -> Graph {
    parts.iter().fold(Graph::empty(0), |acc, &p| {
        disjoint_union(&acc, &make_named(Named::Complete(p)).expect("clique size >= 2"))
    })
}

/// Disjoint unions of cliques, smallest total first. Path counts use
/// `hom(P_k; K_m) = m (m-1)^k`.
pub fn search_clique_unions(ineq: &BinomialInequality, max_vertices: usize) -> Option<Witness> {
    let len = ineq.max_index().unwrap_or(0);
    for total in 2..=max_vertices {
        let mut parts = Vec::new();
        partitions(total, total, &mut Vec::new(), &mut parts);
        parts.reverse();
        for p in parts {
            let counts: Vec<BigUint> = (0..=len)
                .map(|k| p.iter().map(|&m| BigUint::from(m) * BigUint::from(m - 1).pow(k as u32)).sum())
                .collect();
            if let Some((l, r)) = evaluate_scaled(ineq, &counts).filter(|(l, r)| l < r) {
                return Some(make_witness(ineq, clique_union(&p), l, r, WitnessSource::CliqueUnion));
            }
        }
    }
    None
}

/// Every graph up to isomorphism with at least one edge and at most `max_vertices` vertices.
pub fn search_enumeration(ineq: &BinomialInequality, max_vertices: usize) -> Option<Witness> {
    let graphs = graphs_up_to(max_vertices.min(7), max_vertices >= 7).ok()?;
    graphs
        .into_iter()
        .filter(|g| g.edge_count() > 0)
        .find_map(|g| violation_on(ineq, &g).map(|(l, r)| make_witness(ineq, g, l, r, WitnessSource::Enumeration)))
}

/// Blow-up graphs realizing the violating ray at growing scales.
pub fn search_blowup(ineq: &BinomialInequality, ray: &[Rat], budget: usize) -> Option<Witness> {
    for m in 2..=64u64 {
        let g = match crate::blowup::realize_graph(ray, m, budget) {
            Ok(g) => g,
            Err(_) => break,
        };
        if let Some((l, r)) = violation_on(ineq, &g) {
            return Some(make_witness(ineq, g, l, r, WitnessSource::BlowUp));
        }
    }
    None
}

/// Clique unions, then exhaustive enumeration, then blow-ups of `ray` if given.
pub fn find_witness(
    ineq: &BinomialInequality,
    ray: Option<&[Rat]>,
    opts: &WitnessOptions,
) -> Result<Option<Witness>, PathError> {
    if ineq.family != Family::Paths {
        return Err(PathError::WrongFamily(ineq.family));
    }
    if let Some(w) = search_clique_unions(ineq, opts.clique_vertices) {
        return Ok(Some(w));
    }
    if let Some(w) = search_enumeration(ineq, opts.max_vertices) {
        return Ok(Some(w));
    }
    match ray {
        Some(r) if opts.blowup_budget > 0 => Ok(search_blowup(ineq, r, opts.blowup_budget)),
        _ => Ok(None),
    }
}
