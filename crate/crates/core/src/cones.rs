//! Polyhedral cones in exact arithmetic: double description, duality,
//! tropical sums, max-closure and double hull.

use crate::exactlp::rat::{dot, primitive_integer, serde_rat_vec, serde_rat_vecs, Rat};
use crate::exactlp::{solve, LinearProgram, LpOutcome};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub const DEFAULT_DIM_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error("dimension {got} exceeds the limit {limit}")]
    DimensionLimit { got: usize, limit: usize },
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("duplicate row label {0:?}")]
    DuplicateLabel(String),
    #[error("generator {0} has a negative coordinate")]
    NegativeGenerator(usize),
}

/// A labeled row `coeffs . y >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeRow {
    pub label: String,
    #[serde(with = "serde_rat_vec")]
    pub coeffs: Vec<Rat>,
}

/// Cone in half-space form `{ y : A y >= 0 }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeH {
    pub dim: usize,
    pub rows: Vec<ConeRow>,
}

impl ConeH {
    pub fn new(dim: usize, rows: Vec<(String, Vec<Rat>)>) -> Result<Self, ConeError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(rows.len());
        for (label, coeffs) in rows {
            if coeffs.len() != dim {
                return Err(ConeError::LengthMismatch { got: coeffs.len(), expected: dim });
            }
            if !seen.insert(label.clone()) {
                return Err(ConeError::DuplicateLabel(label));
            }
            out.push(ConeRow { label, coeffs });
        }
        Ok(ConeH { dim, rows: out })
    }

    /// Rows labeled `h0, h1, ...` in order.
    pub fn from_rows(dim: usize, rows: Vec<Vec<Rat>>) -> Result<Self, ConeError> {
        Self::new(dim, rows.into_iter().enumerate().map(|(i, r)| (format!("h{i}"), r)).collect())
    }

    pub fn row(&self, label: &str) -> Option<&ConeRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn contains(&self, point: &[Rat]) -> bool {
        point.len() == self.dim && self.rows.iter().all(|r| !dot(&r.coeffs, point).is_negative())
    }
}

/// Generators of a cone: extreme rays plus a basis of its lineality space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaySet {
    pub dim: usize,
    #[serde(with = "serde_rat_vecs")]
    pub rays: Vec<Vec<Rat>>,
    #[serde(with = "serde_rat_vecs", default)]
    pub lineality: Vec<Vec<Rat>>,
}

impl RaySet {
    /// Normalizes and deduplicates the given generators (no redundancy removal).
    pub fn new(dim: usize, rays: Vec<Vec<Rat>>) -> Result<Self, ConeError> {
        for r in &rays {
            if r.len() != dim {
                return Err(ConeError::LengthMismatch { got: r.len(), expected: dim });
            }
        }
        let set: BTreeSet<Vec<Rat>> = rays.iter().filter(|r| !is_zero_vec(r)).map(|r| normalize_ray(r)).collect();
        Ok(RaySet { dim, rays: set.into_iter().collect(), lineality: Vec::new() })
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }
}

fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Positive rescaling to coprime integers.
pub fn normalize_ray(v: &[Rat]) -> Vec<Rat> {
    primitive_integer(v).into_iter().map(Rat::from_integer).collect()
}

/// Rescaling to coprime integers with the first nonzero coordinate positive.
pub fn normalize_line(v: &[Rat]) -> Vec<Rat> {
    let r = normalize_ray(v);
    match r.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => r.into_iter().map(|x| -x).collect(),
        _ => r,
    }
}

/// Row-reduces `rows` in place and returns the pivot columns.
fn rref(rows: &mut Vec<Vec<Rat>>, dim: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rat::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..rows[r].len() {
                    if !rows[r][j].is_zero() {
                        let t = &f * &rows[r][j];
                        rows[i][j] -= t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rat>], dim: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, dim).len()
}

/// Basis of `{ y : A y = 0 }`.
pub fn nullspace(rows: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, dim);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); dim];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

fn solve_square(b: &[Vec<Rat>], rhs_col: usize) -> Vec<Rat> {
    // Solves B r = e_{rhs_col} for invertible B.
    let d = b.len();
    let mut m: Vec<Vec<Rat>> = b
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.push(if i == rhs_col { Rat::one() } else { Rat::zero() });
            r
        })
        .collect();
    rref(&mut m, d);
    m.iter().map(|row| row[d].clone()).collect()
}

struct DdRay {
    v: Vec<Rat>,
    tight: Vec<u64>,
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

/// Extreme rays and lineality basis of `{ y : A y >= 0 }` by the double description method.
pub fn extreme_rays(cone: &ConeH) -> Result<RaySet, ConeError> {
    extreme_rays_with_limit(cone, DEFAULT_DIM_LIMIT)
}

pub fn extreme_rays_with_limit(cone: &ConeH, limit: usize) -> Result<RaySet, ConeError> {
    let d = cone.dim;
    if d > limit {
        return Err(ConeError::DimensionLimit { got: d, limit });
    }
    let rows: Vec<Vec<Rat>> = cone.rows.iter().map(|r| r.coeffs.clone()).filter(|r| !is_zero_vec(r)).collect();
    let (rays, lineality) = double_description(&rows, d);
    Ok(RaySet { dim: d, rays, lineality })
}

fn double_description(rows: &[Vec<Rat>], d: usize) -> (Vec<Vec<Rat>>, Vec<Vec<Rat>>) {
    let mut lineality = nullspace(rows, d);
    if lineality.len() == d {
        let lin = (0..d)
            .map(|i| {
                let mut v = vec![Rat::zero(); d];
                v[i] = Rat::one();
                v
            })
            .collect();
        return (Vec::new(), lin);
    }
    {
        let mut basis = lineality.clone();
        rref(&mut basis, d);
        lineality = basis.iter().map(|v| normalize_line(v)).collect();
    }
    // Restrict to the orthogonal complement of the lineality space, then the cone is pointed.
    let mut aug: Vec<Vec<Rat>> = Vec::new();
    for l in &lineality {
        aug.push(l.clone());
        aug.push(l.iter().map(|x| -x.clone()).collect());
    }
    let mut sorted: Vec<Vec<Rat>> = rows.to_vec();
    sorted.sort_by_key(|r| r.iter().filter(|x| !x.is_zero()).count());
    aug.extend(sorted);
    let words = aug.len().div_ceil(64).max(1);

    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for (i, r) in aug.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(r.clone());
        if rank(&trial, d) == trial.len() {
            basis = trial;
            chosen.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    debug_assert_eq!(basis.len(), d);
    let mut rays: Vec<DdRay> = (0..d)
        .map(|k| {
            let v = solve_square(&basis, k);
            let mut tight = vec![0u64; words];
            for (j, &ci) in chosen.iter().enumerate() {
                if j != k {
                    bit_set(&mut tight, ci);
                }
            }
            DdRay { v: normalize_ray(&v), tight }
        })
        .collect();
    let mut processed: Vec<usize> = chosen.clone();

    for (i, a) in aug.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let vals: Vec<Rat> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, r) in rays.iter_mut().enumerate() {
                if vals[k].is_zero() {
                    bit_set(&mut r.tight, i);
                }
            }
            processed.push(i);
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let mut fresh: Vec<DdRay> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<u64> = rays[p].tight.iter().zip(&rays[q].tight).map(|(x, y)| x & y).collect();
                let count: u32 = common.iter().map(|w| w.count_ones()).sum();
                if (count as usize) + 2 < d {
                    continue;
                }
                let tight_rows: Vec<Vec<Rat>> = processed
                    .iter()
                    .filter(|&&j| common[j / 64] >> (j % 64) & 1 == 1)
                    .map(|&j| aug[j].clone())
                    .collect();
                if rank(&tight_rows, d) + 2 != d {
                    continue;
                }
                let v: Vec<Rat> =
                    rays[q].v.iter().zip(&rays[p].v).map(|(xn, xp)| &vals[p] * xn - &vals[q] * xp).collect();
                let mut tight = common;
                bit_set(&mut tight, i);
                fresh.push(DdRay { v: normalize_ray(&v), tight });
            }
        }
        let mut next: Vec<DdRay> = Vec::new();
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k].is_zero() {
                bit_set(&mut r.tight, i);
                next.push(r);
            } else if vals[k].is_positive() {
                next.push(r);
            }
        }
        next.extend(fresh);
        rays = next;
        processed.push(i);
    }
    let set: BTreeSet<Vec<Rat>> = rays.into_iter().map(|r| r.v).collect();
    (set.into_iter().collect(), lineality)
}

/// H-description of the cone generated by `rays` (and their lineality directions).
pub fn hull_to_h(rays: &RaySet) -> Result<ConeH, ConeError> {
    let dual = dual_cone_of_rays(rays)?;
    let g = extreme_rays(&dual)?;
    let mut rows = g.rays.clone();
    for l in &g.lineality {
        rows.push(l.clone());
        rows.push(l.iter().map(|x| -x.clone()).collect());
    }
    ConeH::from_rows(rays.dim, rows)
}

/// `{ x : r . x >= 0 }` for every generator `r` (both signs for lineality directions).
pub fn dual_cone_of_rays(rays: &RaySet) -> Result<ConeH, ConeError> {
    let mut rows = rays.rays.clone();
    for l in &rays.lineality {
        rows.push(l.clone());
        rows.push(l.iter().map(|x| -x.clone()).collect());
    }
    ConeH::from_rows(rays.dim, rows)
}

/// Generators of the dual cone, i.e. of the conic hull of the rows.
pub fn dual_cone(cone: &ConeH) -> Result<RaySet, ConeError> {
    let own = extreme_rays(cone)?;
    let h = dual_cone_of_rays(&own)?;
    extreme_rays(&h)
}

/// Irredundant H-description (facets plus lineality equations) of the same cone.
pub fn canonical_h(cone: &ConeH) -> Result<ConeH, ConeError> {
    hull_to_h(&extreme_rays(cone)?)
}

/// Coordinatewise maximum.
pub fn tropical_sum(x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>, ConeError> {
    if x.len() != y.len() {
        return Err(ConeError::LengthMismatch { got: y.len(), expected: x.len() });
    }
    Ok(x.iter().zip(y).map(|(a, b)| if a >= b { a.clone() } else { b.clone() }).collect())
}

/// Smallest max-closed cone containing the conic hull of nonnegative generators,
/// as the intersection over `i` of `cone(rays) + Q_i` where
/// `Q_i = { x : x_i <= 0, x_j >= 0 for j != i }`.
pub fn max_closure(rays: &[Vec<Rat>], dim: usize) -> Result<ConeH, ConeError> {
    if dim > DEFAULT_DIM_LIMIT {
        return Err(ConeError::DimensionLimit { got: dim, limit: DEFAULT_DIM_LIMIT });
    }
    for (k, r) in rays.iter().enumerate() {
        if r.len() != dim {
            return Err(ConeError::LengthMismatch { got: r.len(), expected: dim });
        }
        if r.iter().any(Signed::is_negative) {
            return Err(ConeError::NegativeGenerator(k));
        }
    }
    let gens: Vec<&Vec<Rat>> = rays.iter().filter(|r| !is_zero_vec(r)).collect();
    if gens.is_empty() {
        let mut rows = Vec::new();
        for i in 0..dim {
            let mut e = vec![Rat::zero(); dim];
            e[i] = Rat::one();
            rows.push(e.clone());
            rows.push(e.into_iter().map(|x| -x).collect());
        }
        return ConeH::from_rows(dim, rows);
    }
    let mut all_rows: BTreeSet<Vec<Rat>> = BTreeSet::new();
    for i in 0..dim {
        let mut g: Vec<Vec<Rat>> = gens.iter().map(|r| (*r).clone()).collect();
        for j in 0..dim {
            let mut e = vec![Rat::zero(); dim];
            e[j] = if j == i { -Rat::one() } else { Rat::one() };
            g.push(e);
        }
        let h = hull_to_h(&RaySet::new(dim, g)?)?;
        for r in h.rows {
            all_rows.insert(normalize_ray(&r.coeffs));
        }
    }
    let raw = ConeH::from_rows(dim, all_rows.into_iter().collect())?;
    canonical_h(&raw)
}

/// Smallest closed, max-closed convex cone containing the generators.
pub fn double_hull(rays: &[Vec<Rat>], dim: usize) -> Result<ConeH, ConeError> {
    max_closure(rays, dim)
}

/// Mutual inclusion, checked on generators.
pub fn cones_equal(a: &ConeH, b: &ConeH) -> Result<bool, ConeError> {
    if a.dim != b.dim {
        return Ok(false);
    }
    Ok(generators_inside(&extreme_rays(a)?, b) && generators_inside(&extreme_rays(b)?, a))
}

fn generators_inside(g: &RaySet, cone: &ConeH) -> bool {
    g.rays.iter().all(|r| cone.contains(r))
        && g.lineality.iter().all(|l| cone.rows.iter().all(|row| dot(&row.coeffs, l).is_zero()))
}

pub fn member(cone: &ConeH, point: &[Rat]) -> bool {
    cone.contains(point)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HullMembership {
    /// Nonnegative coefficients on `rays`, then free coefficients on `lineality`.
    Inside(Vec<Rat>),
    /// A row `h` with `h . r >= 0` on every generator and `h . point < 0`.
    Outside(Vec<Rat>),
}

pub fn member_hull(rays: &RaySet, point: &[Rat]) -> Result<HullMembership, ConeError> {
    let d = rays.dim;
    if point.len() != d {
        return Err(ConeError::LengthMismatch { got: point.len(), expected: d });
    }
    let nr = rays.rays.len();
    let gens: Vec<&Vec<Rat>> = rays.rays.iter().chain(&rays.lineality).collect();
    let mut lp = LinearProgram::new(vec![Rat::zero(); gens.len()]);
    for c in 0..d {
        lp.add_eq(format!("c{c}"), gens.iter().map(|g| g[c].clone()).collect(), point[c].clone());
    }
    for k in 0..nr {
        lp.set_lower(k, Some(Rat::zero()));
    }
    match solve(&lp).expect("well-formed membership program") {
        LpOutcome::Optimal { x, .. } => Ok(HullMembership::Inside(x)),
        LpOutcome::Infeasible { farkas } => {
            let h: Vec<Rat> = (0..d).map(|c| -farkas[&format!("c{c}")].clone()).collect();
            Ok(HullMembership::Outside(h))
        }
        LpOutcome::Unbounded { .. } => unreachable!("zero objective cannot be unbounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rat::rvec;

    fn ray_set(v: &[&[i64]]) -> BTreeSet<Vec<Rat>> {
        v.iter().map(|r| rvec(r)).collect()
    }

    fn got(c: &ConeH) -> BTreeSet<Vec<Rat>> {
        extreme_rays(c).unwrap().rays.into_iter().collect()
    }

    #[test]
    fn orthant_and_small_cones() {
        let orthant = ConeH::from_rows(2, vec![rvec(&[1, 0]), rvec(&[0, 1])]).unwrap();
        assert_eq!(got(&orthant), ray_set(&[&[1, 0], &[0, 1]]));
        let even3 = ConeH::from_rows(2, vec![rvec(&[-1, 1]), rvec(&[3, -2])]).unwrap();
        assert_eq!(got(&even3), ray_set(&[&[1, 1], &[2, 3]]));
        let cliques = ConeH::from_rows(3, vec![rvec(&[2, -1, 0]), rvec(&[0, 3, -2]), rvec(&[0, 0, 1])]).unwrap();
        assert_eq!(got(&cliques), ray_set(&[&[1, 0, 0], &[1, 2, 0], &[1, 2, 3]]));
    }

    #[test]
    fn lineality_is_split_off() {
        let half = ConeH::from_rows(2, vec![rvec(&[1, 1])]).unwrap();
        let g = extreme_rays(&half).unwrap();
        assert_eq!(g.lineality, vec![rvec(&[1, -1])]);
        assert_eq!(g.rays, vec![rvec(&[1, 1])]);
        let full = ConeH::from_rows(3, vec![]).unwrap();
        let g = extreme_rays(&full).unwrap();
        assert_eq!(g.lineality.len(), 3);
        assert!(g.rays.is_empty());
        assert!(dual_cone(&full).unwrap().rays.is_empty());
        assert!(dual_cone(&full).unwrap().lineality.is_empty());
    }

    #[test]
    fn duality() {
        let orthant = ConeH::from_rows(2, vec![rvec(&[1, 0]), rvec(&[0, 1])]).unwrap();
        assert_eq!(
            dual_cone(&orthant).unwrap().rays.into_iter().collect::<BTreeSet<_>>(),
            ray_set(&[&[1, 0], &[0, 1]])
        );
        let ray = RaySet::new(2, vec![rvec(&[1, 1])]).unwrap();
        let d = dual_cone_of_rays(&ray).unwrap();
        let back = dual_cone(&d).unwrap();
        assert_eq!(back.rays, vec![rvec(&[1, 1])]);
        assert!(back.lineality.is_empty());
    }

    #[test]
    fn tropical_sums() {
        assert_eq!(tropical_sum(&rvec(&[1, 1, 1]), &rvec(&[2, 3, 4])).unwrap(), rvec(&[2, 3, 4]));
        assert_eq!(tropical_sum(&rvec(&[3, 3, 3]), &rvec(&[2, 3, 4])).unwrap(), rvec(&[3, 3, 4]));
        assert!(tropical_sum(&rvec(&[1]), &rvec(&[1, 2])).is_err());
    }

    #[test]
    fn max_closure_examples() {
        let orthant = max_closure(&[rvec(&[1, 0]), rvec(&[0, 1])], 2).unwrap();
        let expected = ConeH::from_rows(2, vec![rvec(&[1, 0]), rvec(&[0, 1])]).unwrap();
        assert!(cones_equal(&orthant, &expected).unwrap());

        let gens = vec![rvec(&[1, 1, 1]), rvec(&[2, 3, 4])];
        let mc = max_closure(&gens, 3).unwrap();
        assert!(mc.contains(&rvec(&[3, 3, 4])));
        let hull = RaySet::new(3, gens).unwrap();
        assert!(matches!(member_hull(&hull, &rvec(&[3, 3, 4])).unwrap(), HullMembership::Outside(_)));

        let single = max_closure(&[rvec(&[1, 2])], 2).unwrap();
        assert_eq!(extreme_rays(&single).unwrap().rays, vec![rvec(&[1, 2])]);

        let zero = double_hull(&[], 3).unwrap();
        let g = extreme_rays(&zero).unwrap();
        assert!(g.rays.is_empty() && g.lineality.is_empty());

        assert!(matches!(max_closure(&[rvec(&[1, -1])], 2), Err(ConeError::NegativeGenerator(0))));
    }

    #[test]
    fn double_hull_matches_even_cycle_cones() {
        let dh = double_hull(&[rvec(&[1, 1]), rvec(&[2, 3])], 2).unwrap();
        let q3 = ConeH::from_rows(2, vec![rvec(&[-1, 1]), rvec(&[3, -2])]).unwrap();
        assert!(cones_equal(&dh, &q3).unwrap());
        let dh = double_hull(&[rvec(&[1, 1, 1]), rvec(&[2, 3, 4])], 3).unwrap();
        let q4 = ConeH::from_rows(3, vec![rvec(&[1, -2, 1]), rvec(&[-1, 1, 0]), rvec(&[0, 4, -3])]).unwrap();
        assert!(cones_equal(&dh, &q4).unwrap());
        assert!(q4.contains(&rvec(&[3, 3, 4])));
    }

    #[test]
    fn equality_and_membership() {
        let orthant = ConeH::from_rows(2, vec![rvec(&[1, 0]), rvec(&[0, 1])]).unwrap();
        let half = ConeH::from_rows(2, vec![rvec(&[1, 0])]).unwrap();
        assert!(cones_equal(&orthant, &orthant).unwrap());
        assert!(!cones_equal(&orthant, &half).unwrap());
        let hull = RaySet::new(2, vec![rvec(&[1, 1])]).unwrap();
        match member_hull(&hull, &rvec(&[1, 0])).unwrap() {
            HullMembership::Outside(h) => {
                assert!(!dot(&h, &rvec(&[1, 1])).is_negative());
                assert!(dot(&h, &rvec(&[1, 0])).is_negative());
            }
            other => panic!("{other:?}"),
        }
        assert!(member(&orthant, &rvec(&[0, 0])));
        assert!(matches!(member_hull(&hull, &rvec(&[0, 0])).unwrap(), HullMembership::Inside(_)));
    }

    #[test]
    fn dimension_limit() {
        let big = ConeH::from_rows(17, vec![]).unwrap();
        assert!(matches!(extreme_rays(&big), Err(ConeError::DimensionLimit { .. })));
    }
}
