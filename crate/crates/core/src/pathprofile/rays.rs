//! R-family rays and the decomposition of points of the projected path cone
//! into tropical sums of such rays.

use super::cone::lift_membership;
use super::PathError;
use crate::cones::tropical_sum;
use crate::exactlp::rat::{serde_rat, serde_rat_vec, Rat};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// Parameters `(s, b, d)` of a ray with `r_{2i} = is + b` and
/// `r_{2i+1} = (i+1)s + d_0 + ... + d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RFamilySpec {
    #[serde(with = "serde_rat")]
    pub s: Rat,
    #[serde(with = "serde_rat")]
    pub b: Rat,
    #[serde(with = "serde_rat_vec")]
    pub d: Vec<Rat>,
}

fn two() -> Rat {
    Rat::from_integer(2.into())
}

fn idx(i: usize) -> Rat {
    Rat::from_integer(i.into())
}

/// Every window sum `d_{v-u} + ... + d_v` is at most the prefix sum `d_0 + ... + d_u`.
pub fn prefix_dominant(d: &[Rat]) -> bool {
    let mut prefix = vec![Rat::zero()];
    for x in d {
        let next = prefix.last().unwrap() + x;
        prefix.push(next);
    }
    for v in 0..d.len() {
        for u in 0..v {
            let window = &prefix[v + 1] - &prefix[v - u];
            if window > prefix[u + 1] {
                return false;
            }
        }
    }
    true
}

/// Index of the last nonzero entry.
pub fn support_end(d: &[Rat]) -> Option<usize> {
    d.iter().rposition(|x| !x.is_zero())
}

/// Largest `t <= f/2` with `d_t > 0`, where `f` is the last nonzero index.
pub fn pivot(d: &[Rat]) -> Option<usize> {
    let f = support_end(d)?;
    (0..=f / 2).rev().find(|&t| d[t].is_positive())
}

impl RFamilySpec {
    pub fn new(s: Rat, b: Rat, d: Vec<Rat>) -> Self {
        RFamilySpec { s, b, d }
    }

    fn tail_sum(&self) -> Rat {
        self.d.iter().skip(1).fold(Rat::zero(), |a, x| a + x)
    }

    fn d0(&self) -> Rat {
        self.d.first().cloned().unwrap_or_else(Rat::zero)
    }

    /// Membership in the widest family: nonnegative `s`, `b`, `d`;
    /// `b - s <= d_0 <= (2b - s)/2`; prefix dominance; `2(d_1 + ...) <= 2b - s - 2d_0`,
    /// which is `<= s` and equals `s` when `d_0 = b - s`.
    pub fn check(&self) -> bool {
        if self.d.is_empty() || self.s.is_negative() || self.b.is_negative() {
            return false;
        }
        if self.d.iter().any(|x| x.is_negative()) {
            return false;
        }
        let d0 = self.d0();
        if d0 < &self.b - &self.s || two() * &d0 > two() * &self.b - &self.s {
            return false;
        }
        prefix_dominant(&self.d) && two() * self.tail_sum() <= two() * (&self.b - &d0) - &self.s
    }

    /// The family with `b >= s` and `d_0 = b - s` pinned.
    pub fn is_pinned(&self) -> bool {
        self.check() && self.b >= self.s && self.d0() == &self.b - &self.s
    }

    /// The pinned family with the near-symmetry conditions around the pivot.
    pub fn is_symmetric(&self) -> bool {
        if !self.is_pinned() {
            return false;
        }
        let (Some(f), Some(t)) = (support_end(&self.d), pivot(&self.d)) else {
            return true;
        };
        (0..t).all(|u| self.d[u] == self.d[f - u])
            && (t + 1..f.saturating_sub(t)).all(|u| self.d[u].is_zero())
            && self.d[t] >= self.d[f - t]
    }

    /// Coordinates `r_0 .. r_{2n+1}` with `n + 1 = d.len()`.
    pub fn ray(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(2 * self.d.len());
        let mut acc = Rat::zero();
        for (i, di) in self.d.iter().enumerate() {
            acc += di;
            out.push(idx(i) * &self.s + &self.b);
            out.push(idx(i + 1) * &self.s + &acc);
        }
        out
    }
}

pub fn rfamily_check(spec: &RFamilySpec) -> bool {
    spec.check()
}

/// Ray of length `2n + 2`; `d` is padded with zeros or must already fit.
pub fn rfamily_ray(spec: &RFamilySpec, n: usize) -> Result<Vec<Rat>, PathError> {
    if support_end(&spec.d).is_some_and(|f| f > n) {
        return Err(PathError::Precondition(format!("d has nonzero entries beyond index {n}")));
    }
    let mut d = spec.d.clone();
    d.resize(n + 1, Rat::zero());
    Ok(RFamilySpec { d, ..spec.clone() }.ray())
}

/// Zeroes the last nonzero entry of `d`.
pub fn truncate_d(d: &[Rat]) -> Result<Vec<Rat>, PathError> {
    check_bar_input(d)?;
    let mut out = d.to_vec();
    if let Some(f) = support_end(d) {
        out[f] = Rat::zero();
    }
    debug_assert!(prefix_dominant(&out));
    Ok(out)
}

fn check_bar_input(d: &[Rat]) -> Result<(), PathError> {
    if d.iter().any(|x| x.is_negative()) {
        return Err(PathError::Precondition("d has a negative entry".into()));
    }
    if !prefix_dominant(d) {
        return Err(PathError::Precondition("d violates prefix dominance".into()));
    }
    Ok(())
}

/// Nearly symmetric `d'` with the same total and the same entries before the
/// half-mass index `t`, whose prefix sums never exceed those of `d`.
pub fn symmetrize_d(d: &[Rat]) -> Result<Vec<Rat>, PathError> {
    check_bar_input(d)?;
    let Some(f) = support_end(d) else {
        return Ok(d.to_vec());
    };
    let total: Rat = d.iter().fold(Rat::zero(), |a, x| a + x);
    let mut prefix = Rat::zero();
    let mut t = 0;
    while two() * (&prefix + &d[t]) < total {
        prefix += &d[t];
        t += 1;
    }
    let rest = &total - two() * &prefix;
    let mut out = vec![Rat::zero(); d.len()];
    for w in 0..t {
        out[w] = d[w].clone();
        out[f - w] = d[w].clone();
    }
    if t == f - t {
        out[t] = rest;
    } else if rest >= d[t] {
        out[t] = d[t].clone();
        out[f - t] = &rest - &d[t];
    } else {
        let half = &rest / two();
        out[t] = half.clone();
        out[f - t] = half;
    }
    let mut pa = Rat::zero();
    let mut pb = Rat::zero();
    for (a, b) in d.iter().zip(&out) {
        pa += a;
        pb += b;
        if pb > pa {
            return Err(PathError::Precondition("symmetrized prefix exceeds the input".into()));
        }
    }
    if pa != pb || !prefix_dominant(&out) {
        return Err(PathError::Precondition("symmetrization failed its postconditions".into()));
    }
    Ok(out)
}

/// One summand of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RayPart {
    /// `r'_l`: agrees with the input at coordinate `l` and is dominated elsewhere.
    Family {
        l: usize,
        #[serde(with = "serde_rat")]
        slope: Rat,
        anchor: usize,
        spec: RFamilySpec,
        #[serde(with = "serde_rat_vec")]
        ray: Vec<Rat>,
    },
    /// `first * (1,0,...,0) + ones * (1,...,1)`, used when `r_1 < r_0`.
    Special {
        #[serde(with = "serde_rat")]
        first: Rat,
        #[serde(with = "serde_rat")]
        ones: Rat,
        #[serde(with = "serde_rat_vec")]
        ray: Vec<Rat>,
    },
}

impl RayPart {
    pub fn ray(&self) -> &[Rat] {
        match self {
            RayPart::Family { ray, .. } | RayPart::Special { ray, .. } => ray,
        }
    }
}

/// `r'_l` for odd `l = 2i + 1`.
pub fn odd_part(r: &[Rat], l: usize) -> RayPart {
    let i = (l - 1) / 2;
    let n = r.len() / 2 - 1;
    let mut best: Option<(Rat, usize)> = None;
    for j in 0..=i {
        let slope = two() * (&r[l] - &r[2 * j]) / idx(l - 2 * j);
        if best.as_ref().is_none_or(|(b, _)| slope > *b) {
            best = Some((slope, j));
        }
    }
    let (s, jp) = best.expect("nonempty range");
    let m: Vec<Rat> = (0..=i).map(|u| &r[2 * u + 1] - idx(u + 1) * &s).collect();
    let mut d = vec![Rat::zero(); n + 1];
    let mut acc = Rat::zero();
    for v in 0..=i {
        let mn = m[v..].iter().min().unwrap().clone();
        d[v] = &mn - &acc;
        acc = mn;
    }
    let b = &r[2 * jp] - idx(jp) * &s;
    let spec = RFamilySpec { s: s.clone(), b, d };
    let ray = spec.ray();
    RayPart::Family { l, slope: s, anchor: jp, spec, ray }
}

/// `r'_l` for even `l = 2i`.
pub fn even_part(r: &[Rat], l: usize) -> RayPart {
    let i = l / 2;
    let n = r.len() / 2 - 1;
    let mut best: Option<(Rat, usize)> = None;
    for j in 0..i {
        let slope = (&r[l] - &r[2 * j]) / idx(i - j);
        if best.as_ref().is_none_or(|(b, _)| slope > *b) {
            best = Some((slope, j));
        }
    }
    let (s, jp) = best.unwrap_or((Rat::zero(), i));
    let b = &r[2 * jp] - idx(jp) * &s;
    let mut d = vec![Rat::zero(); n + 1];
    if b > s {
        d[0] = &b - &s;
    }
    let spec = RFamilySpec { s: s.clone(), b, d };
    let ray = spec.ray();
    RayPart::Family { l, slope: s, anchor: jp, spec, ray }
}

fn decompose_monotone(r: &[Rat]) -> Vec<RayPart> {
    (0..r.len()).map(|l| if l % 2 == 1 { odd_part(r, l) } else { even_part(r, l) }).collect()
}

/// Writes a point of the projected cone as a tropical sum of R-family rays,
/// with one extra special part when `r_1 < r_0`.
pub fn decompose_ray(r: &[Rat]) -> Result<Vec<RayPart>, PathError> {
    if lift_membership(r)?.is_none() {
        return Err(PathError::Precondition("the vector does not lift into the path cone".into()));
    }
    Ok(decompose_unchecked(r))
}

/// Decomposition without the lifting precondition check.
pub fn decompose_unchecked(r: &[Rat]) -> Vec<RayPart> {
    if r[1] >= r[0] {
        return decompose_monotone(r);
    }
    let mut star = r.to_vec();
    star[0] = r[1].clone();
    let mut parts = decompose_monotone(&star);
    let mut ray = vec![r[1].clone(); r.len()];
    ray[0] = r[0].clone();
    parts.push(RayPart::Special { first: &r[0] - &r[1], ones: r[1].clone(), ray });
    parts
}

/// Coordinatewise maximum of all part rays.
pub fn recombine(parts: &[RayPart]) -> Option<Vec<Rat>> {
    let mut it = parts.iter();
    let mut acc = it.next()?.ray().to_vec();
    for p in it {
        acc = tropical_sum(&acc, p.ray()).ok()?;
    }
    Some(acc)
}

/// The all-ones ray scaled by `c`.
pub fn ones(len: usize, c: &Rat) -> Vec<Rat> {
    vec![c.clone(); len]
}

/// The ray `(1, 2, ..., len)` scaled by `c`.
pub fn staircase(len: usize, c: &Rat) -> Vec<Rat> {
    (1..=len).map(|k| idx(k) * c).collect()
}

/// The unit vector on the first coordinate scaled by `c`.
pub fn first_unit(len: usize, c: &Rat) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); len];
    v[0] = c.clone();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rat::{rat, ratio, rvec};

    fn example_a() -> Vec<Rat> {
        rvec(&[14, 14, 24, 24, 34, 35, 44, 45, 55, 55, 66, 66, 77, 79, 88, 89, 99, 99, 110, 110, 121, 121])
    }

    #[test]
    fn odd_example_thirteen() {
        let p = odd_part(&example_a(), 13);
        let RayPart::Family { slope, spec, ray, .. } = p else { panic!() };
        assert_eq!(slope, rat(10));
        assert_eq!(spec.d, rvec(&[4, 0, 1, 0, 0, 1, 3, 0, 0, 0, 0]));
        assert_eq!(
            ray,
            rvec(&[14, 14, 24, 24, 34, 35, 44, 45, 54, 55, 64, 66, 74, 79, 84, 89, 94, 99, 104, 109, 114, 119])
        );
        assert!(spec.check());
    }

    #[test]
    fn even_example_fourteen() {
        let RayPart::Family { slope, spec, ray, anchor, .. } = even_part(&example_a(), 14) else { panic!() };
        assert_eq!((slope, anchor, spec.b.clone()), (rat(11), 3, rat(11)));
        let expect: Vec<Rat> = (0..22).map(|k| rat(11 * (k / 2 + 1))).collect();
        assert_eq!(ray, expect);
    }

    #[test]
    fn even_example_twelve() {
        let r = rvec(&[11, 11, 19, 20, 27, 30, 36, 40, 45, 50, 55, 60, 65, 70, 75, 80]);
        let RayPart::Family { slope, spec, ray, .. } = even_part(&r, 12) else { panic!() };
        assert_eq!((slope, spec.b.clone()), (rat(10), rat(5)));
        assert_eq!(ray, (1..=16).map(|k| rat(5 * k)).collect::<Vec<_>>());
        assert!(spec.check());
    }

    #[test]
    fn odd_example_fifteen() {
        let r = rvec(&[16, 16, 24, 25, 32, 32, 40, 40, 49, 49, 58, 58, 67, 67, 76, 79, 85, 88]);
        let RayPart::Family { slope, anchor, spec, ray, .. } = odd_part(&r, 15) else { panic!() };
        assert_eq!((slope, anchor), (ratio(26, 3), 3));
        let t = |n: i64| ratio(n, 3);
        assert_eq!(spec.d, vec![t(16), t(0), t(0), t(0), t(1), t(1), t(1), t(10), t(0)]);
        let expect: Vec<Rat> = [42, 42, 68, 68, 94, 94, 120, 120, 146, 147, 172, 174, 198, 201, 224, 237, 250, 263]
            .iter()
            .map(|&x| t(x))
            .collect();
        assert_eq!(ray, expect);
    }

    #[test]
    fn symmetrize_chain() {
        let mut d = rvec(&[4, 3, 2, 1, 2, 4, 0]);
        let expected = [
            vec![4, 3, 2, 0, 3, 4, 0],
            vec![4, 3, 0, 1, 4, 0, 0],
            vec![4, 1, 1, 4, 0, 0, 0],
            vec![4, 1, 4, 0, 0, 0, 0],
            vec![4, 3, 0, 0, 0, 0, 0],
            vec![4, 0, 0, 0, 0, 0, 0],
        ];
        for e in expected {
            assert_eq!(symmetrize_d(&d).unwrap(), rvec(&e));
            d = truncate_d(&d).unwrap();
        }
        let sym = rvec(&[4, 1, 0, 1, 4]);
        assert_eq!(symmetrize_d(&sym).unwrap(), sym);
        assert_eq!(truncate_d(&rvec(&[4, 3, 0])).unwrap(), rvec(&[4, 0, 0]));
        assert!(symmetrize_d(&rvec(&[1, 3])).is_err());
    }

    #[test]
    fn chain_rays_match_listing() {
        let spec = RFamilySpec::new(rat(30), rat(34), rvec(&[4, 3, 2, 1, 2, 4, 0]));
        assert_eq!(spec.ray(), rvec(&[34, 34, 64, 67, 94, 99, 124, 130, 154, 162, 184, 196, 214, 226]));
        assert!(spec.is_pinned() && !spec.is_symmetric());
        let d5 = RFamilySpec::new(rat(30), rat(34), rvec(&[4, 3, 2, 0, 3, 4, 0]));
        assert!(d5.is_symmetric());
        assert_eq!(d5.ray(), rvec(&[34, 34, 64, 67, 94, 99, 124, 129, 154, 162, 184, 196, 214, 226]));
    }

    #[test]
    fn family_checks() {
        let good = RFamilySpec::new(rat(10), rat(14), rvec(&[4, 0, 1, 0, 0, 1, 3, 0, 0, 0, 0]));
        assert!(rfamily_check(&good));
        let bad = RFamilySpec::new(rat(10), rat(14), rvec(&[10, 0]));
        assert!(!rfamily_check(&bad));
        let flat = RFamilySpec::new(rat(3), rat(3), rvec(&[0, 0, 0]));
        assert_eq!(rfamily_ray(&flat, 2).unwrap(), rvec(&[3, 3, 6, 6, 9, 9]));
    }

    #[test]
    fn decreasing_start() {
        let r = rvec(&[5, 1, 1, 1]);
        let parts = decompose_ray(&r).unwrap();
        assert!(matches!(parts.last(), Some(RayPart::Special { .. })));
        assert_eq!(recombine(&parts).unwrap(), r);
    }
}
