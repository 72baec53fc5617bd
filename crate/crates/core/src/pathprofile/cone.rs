//! The lifted cone for path profiles and the LP-based inequality checker.
//!
//! Coordinate `i` of the cone carries `y_i = log hom(P_i; G)`. The cone for
//! parameter `n` lives in `R^{4n+4}` and its projection to the first `2n+2`
//! coordinates is the tropicalization of the profile of `P_0, ..., P_{2n+1}`.

use super::ineq::{BinomialInequality, Family};
use super::PathError;
use crate::cones::ConeH;
use crate::exactlp::rat::{dot, serde_rat, Rat};
use crate::exactlp::{solve, LinearProgram, LpOutcome};
use num_traits::{Signed, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathConeC {
    pub n: usize,
    pub cone: ConeH,
}

impl PathConeC {
    pub fn dim(&self) -> usize {
        4 * self.n + 4
    }

    /// Number of visible coordinates `y_0..y_{2n+1}`.
    pub fn visible(&self) -> usize {
        2 * self.n + 2
    }
}

/// Dense row from sparse `(index, coefficient)` pairs.
pub(crate) fn sparse_row(dim: usize, terms: &[(usize, i64)]) -> Vec<Rat> {
    let mut r = vec![Rat::zero(); dim];
    for &(i, c) in terms {
        r[i] += Rat::from_integer(c.into());
    }
    r
}

/// All defining rows of the lifted cone for parameter `n`.
pub fn build_cone_c(n: usize) -> PathConeC {
    let dim = 4 * n + 4;
    let top = 4 * n + 3;
    let mut rows: Vec<(String, Vec<Rat>)> = Vec::new();
    let mut push = |label: String, terms: &[(usize, i64)]| rows.push((label, sparse_row(dim, terms)));

    for u in 0..=2 * n {
        push(format!("logconv[u={u}]"), &[(2 * u, 1), (2 * u + 1, -2), (2 * u + 2, 1)]);
    }
    for u in 0..2 * n {
        push(format!("evenconv[u={u}]"), &[(2 * u, 1), (2 * u + 2, -2), (2 * u + 4, 1)]);
    }
    for u in 1..=2 * n + 1 {
        push(format!("mono[u={u}]"), &[(2 * u, -1), (2 * u + 1, 1)]);
    }
    for u in 0..=2 * n {
        for v in u..=2 * n {
            if 2 * u + 2 * v + 3 <= top {
                push(format!("incl[u={u},v={v}]"), &[(2 * u + 1, 1), (2 * v + 1, 1), (2 * u + 2 * v + 3, -1)]);
            }
        }
    }
    for v in 1..=2 * n + 1 {
        for u in 0..v {
            let (a, b) = ((2 * v + 1 - 2 * u) as i64, (2 * v - 1 - 2 * u) as i64);
            push(format!("es[u={u},v={v}]"), &[(2 * u, 2), (2 * v - 1, -a), (2 * v + 1, b)]);
        }
    }
    for u in 1..=2 * n + 1 {
        let k = (u + 1) as i64;
        push(format!("eoe[u={u}]"), &[(2 * u - 2, k), (2 * u, -k), (2 * u + 1, 1)]);
    }
    if 4 <= top {
        push("p0evenconv".to_string(), &[(1, 1), (2, -2), (4, 1)]);
    }
    for v in 2..=2 * n + 1 {
        let (a, b) = ((2 * v + 1) as i64, (2 * v - 1) as i64);
        push(format!("p0es[v={v}]"), &[(1, 2), (2 * v - 1, -a), (2 * v + 1, b)]);
    }
    push("p0logconv".to_string(), &[(1, -1), (2, 1)]);

    let cone = ConeH::new(dim, rows).expect("generated labels are unique");
    PathConeC { n, cone }
}

/// Smallest `n` with `2n + 1 >= max_index`.
pub fn lift_parameter(max_index: usize) -> usize {
    max_index / 2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateTerm {
    pub generator: String,
    #[serde(with = "serde_rat")]
    pub coeff: Rat,
}

/// Nonnegative combination of labeled cone rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Certificate {
    pub terms: Vec<CertificateTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathVerdict {
    Valid {
        n: usize,
        certificate: Certificate,
    },
    /// `ray` is a point of the projected cone on which the linear form is negative;
    /// `lift` is its completion inside the lifted cone.
    Invalid {
        n: usize,
        ray: Vec<Rat>,
        lift: Vec<Rat>,
    },
}

impl PathVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, PathVerdict::Valid { .. })
    }
}

fn require_paths(ineq: &BinomialInequality) -> Result<(), PathError> {
    if ineq.family != Family::Paths {
        return Err(PathError::WrongFamily(ineq.family));
    }
    Ok(())
}

/// Decides validity on the positive part of the path profile by minimizing the
/// log-linear form over the lifted cone.
pub fn check_path_inequality(ineq: &BinomialInequality) -> Result<PathVerdict, PathError> {
    require_paths(ineq)?;
    let n = lift_parameter(ineq.max_index().unwrap_or(0));
    let c = build_cone_c(n);
    let objective = ineq.linear_form(c.dim(), |k| k);
    let mut lp = LinearProgram::new(objective);
    for r in &c.cone.rows {
        lp.add_ge(r.label.clone(), r.coeffs.clone(), Rat::zero());
    }
    match solve(&lp)? {
        LpOutcome::Optimal { dual, .. } => {
            let terms = c
                .cone
                .rows
                .iter()
                .filter_map(|r| {
                    dual.get(&r.label)
                        .filter(|v| !v.is_zero())
                        .map(|v| CertificateTerm { generator: r.label.clone(), coeff: v.clone() })
                })
                .collect();
            Ok(PathVerdict::Valid { n, certificate: Certificate { terms } })
        }
        LpOutcome::Unbounded { improving_ray, .. } => {
            let ray = improving_ray[..c.visible()].to_vec();
            Ok(PathVerdict::Invalid { n, ray, lift: improving_ray })
        }
        LpOutcome::Infeasible { .. } => unreachable!("the zero vector lies in every cone"),
    }
}

/// Exact check that the certificate combines cone rows into the inequality's linear form.
pub fn verify_certificate(ineq: &BinomialInequality, cert: &Certificate) -> Result<bool, PathError> {
    require_paths(ineq)?;
    let n = lift_parameter(ineq.max_index().unwrap_or(0));
    let c = build_cone_c(n);
    let target = ineq.linear_form(c.dim(), |k| k);
    let mut sum = vec![Rat::zero(); c.dim()];
    for t in &cert.terms {
        let row = c.cone.row(&t.generator).ok_or_else(|| PathError::UnknownLabel(t.generator.clone()))?;
        if t.coeff.is_negative() {
            return Ok(false);
        }
        for (s, a) in sum.iter_mut().zip(&row.coeffs) {
            *s += &t.coeff * a;
        }
    }
    Ok(sum == target)
}

/// A completion of `r` (length `2n+2`) to a point of the lifted cone, if one exists.
pub fn lift_membership(r: &[Rat]) -> Result<Option<Vec<Rat>>, PathError> {
    if r.is_empty() || r.len() % 2 != 0 {
        return Err(PathError::Precondition(format!("vector length {} is not of the form 2n+2", r.len())));
    }
    let n = r.len() / 2 - 1;
    let c = build_cone_c(n);
    let dim = c.dim();
    let mut lp = LinearProgram::new(vec![Rat::zero(); dim]);
    for (i, v) in r.iter().enumerate() {
        let mut e = vec![Rat::zero(); dim];
        e[i] = Rat::from_integer(1.into());
        lp.add_eq(format!("fix[{i}]"), e, v.clone());
    }
    for row in &c.cone.rows {
        lp.add_ge(row.label.clone(), row.coeffs.clone(), Rat::zero());
    }
    match solve(&lp)? {
        LpOutcome::Optimal { x, .. } => Ok(Some(x)),
        _ => Ok(None),
    }
}

/// Checks a lifted vector against every row of the cone.
pub fn in_cone_c(y: &[Rat]) -> bool {
    if y.is_empty() || y.len() % 4 != 0 {
        return false;
    }
    let c = build_cone_c(y.len() / 4 - 1);
    c.cone.rows.iter().all(|r| !dot(&r.coeffs, y).is_negative())
}

/// Valid rows derived from the cone, as binomial inequalities in `P_0..P_{2n+1}`
/// (or up to `P_{2n+1}` for the even-power and extended families).
pub fn derived_inequality_rows(n: usize) -> Vec<(String, BinomialInequality)> {
    let top = 2 * n + 1;
    let mut out = Vec::new();
    let mut push = |label: String, lhs: Vec<(usize, i64)>, rhs: Vec<(usize, i64)>| {
        let lhs: Vec<_> = lhs.into_iter().filter(|t| t.1 != 0).collect();
        let rhs: Vec<_> = rhs.into_iter().filter(|t| t.1 != 0).collect();
        let ineq = BinomialInequality::from_terms(Family::Paths, &lhs, &rhs).expect("nonnegative exponents");
        out.push((label, ineq));
    };
    // P_{2u}^v >= P_v^{2u}, u <= v/2
    for v in 1..=top {
        for u in 1..=v / 2 {
            push(format!("evenpow[u={u},v={v}]"), vec![(2 * u, v as i64)], vec![(v, 2 * u as i64)]);
        }
    }
    // P_{2u}^{v-2u-1} P_v >= P_{2u+1}^{v-2u}, u <= (v-1)/2
    for v in 1..=top {
        for u in 0..=(v - 1) / 2 {
            push(
                format!("oddstep[u={u},v={v}]"),
                vec![(2 * u, (v - 2 * u - 1) as i64), (v, 1)],
                vec![(2 * u + 1, (v - 2 * u) as i64)],
            );
        }
    }
    // P_{2u+1}^{v-2t} P_{2t}^{2(u+1)} >= P_v^{2(u+1)}
    for v in 1..=top {
        for t in 0..=v / 2 {
            for u in 0..=(v - 1) / 2 {
                push(
                    format!("oddeven[t={t},u={u},v={v}]"),
                    vec![(2 * u + 1, (v - 2 * t) as i64), (2 * t, 2 * (u as i64 + 1))],
                    vec![(v, 2 * (u as i64 + 1))],
                );
            }
        }
    }
    // P_{2u}^{2v+1} >= P_{2v}^{2u+1}, u < v <= n
    for v in 1..=n {
        for u in 0..v {
            push(format!("evenroot[u={u},v={v}]"), vec![(2 * u, 2 * v as i64 + 1)], vec![(2 * v, 2 * u as i64 + 1)]);
        }
    }
    // P_{2u}^{2(l+1)} P_{2(v+l)+1}^{2v-1-2u} >= P_{2v-1}^{2v+2l+1-2u}, u < v, v + l <= n
    for v in 1..=n {
        for l in 0..=n - v {
            for u in 0..v {
                push(
                    format!("esgen[u={u},v={v},l={l}]"),
                    vec![(2 * u, 2 * (l as i64 + 1)), (2 * (v + l) + 1, (2 * v - 1 - 2 * u) as i64)],
                    vec![(2 * v - 1, (2 * v + 2 * l + 1 - 2 * u) as i64)],
                );
            }
        }
    }
    out
}

/// A defining row of the cone read back as a binomial inequality.
pub fn row_as_inequality(coeffs: &[Rat]) -> BinomialInequality {
    let mut lhs = std::collections::BTreeMap::new();
    let mut rhs = std::collections::BTreeMap::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_positive() {
            lhs.insert(i, c.clone());
        } else if c.is_negative() {
            rhs.insert(i, -c.clone());
        }
    }
    BinomialInequality::new(Family::Paths, lhs, rhs).expect("nonnegative exponents")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rat::{rat, rvec};
    use crate::pathprofile::ineq::BinomialInequality as B;

    #[test]
    fn row_counts() {
        let c0 = build_cone_c(0);
        let labels: Vec<&str> = c0.cone.rows.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, vec!["logconv[u=0]", "mono[u=1]", "incl[u=0,v=0]", "es[u=0,v=1]", "eoe[u=1]", "p0logconv"]);
        assert_eq!(build_cone_c(1).cone.rows.len(), 25);
    }

    #[test]
    fn constant_and_linear_points_lie_in_the_cone() {
        for n in 0..4 {
            let d = 4 * n + 4;
            assert!(in_cone_c(&vec![rat(1); d]));
            let lin: Vec<Rat> = (1..=d as i64).map(rat).collect();
            assert!(in_cone_c(&lin));
        }
    }

    #[test]
    fn goodman_style_certificate() {
        let i = B::parse("P0*P2 >= P1^2").unwrap();
        let v = check_path_inequality(&i).unwrap();
        match &v {
            PathVerdict::Valid { certificate, .. } => {
                assert_eq!(certificate.terms.len(), 1);
                assert_eq!(certificate.terms[0].generator, "logconv[u=0]");
                assert_eq!(certificate.terms[0].coeff, rat(1));
                assert!(verify_certificate(&i, certificate).unwrap());
                let mut bad = certificate.clone();
                bad.terms[0].coeff = rat(2);
                assert!(!verify_certificate(&i, &bad).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_gives_violating_lift() {
        let i = B::parse("P2^2 >= P0*P4").unwrap();
        match check_path_inequality(&i).unwrap() {
            PathVerdict::Invalid { ray, lift, .. } => {
                let c = i.linear_form(ray.len(), |k| k);
                assert!(dot(&c, &ray).is_negative());
                assert!(in_cone_c(&lift));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lifting() {
        assert!(lift_membership(&vec![rat(1); 6]).unwrap().is_some());
        assert!(lift_membership(&(1..=6).map(rat).collect::<Vec<_>>()).unwrap().is_some());
        assert!(lift_membership(&rvec(&[0, 1, 0, 0])).unwrap().is_none());
        assert!(lift_membership(&rvec(&[1, 1, 1])).is_err());
    }

    #[test]
    fn unknown_label() {
        let i = B::parse("P0*P2 >= P1^2").unwrap();
        let cert = Certificate { terms: vec![CertificateTerm { generator: "nope".into(), coeff: rat(1) }] };
        assert!(matches!(verify_certificate(&i, &cert), Err(PathError::UnknownLabel(_))));
    }
}
