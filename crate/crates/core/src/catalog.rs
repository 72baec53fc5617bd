//! Tropical cones of small homomorphism profiles: even and odd cycles, stars,
//! complete graphs, scaled f-vectors of simplicial complexes and of matroids.

use crate::cones::{cones_equal, double_hull, extreme_rays, normalize_ray, ConeError, ConeH};
use crate::exactlp::{rat, solve, LinearProgram, LpError, LpOutcome, Rat};
use crate::pathprofile::{BinomialInequality, Certificate, CertificateTerm, Family};
use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("invalid parameter for {family}: {msg}")]
    Parameter { family: &'static str, msg: String },
    #[error("unknown family selector {0:?}")]
    Selector(String),
    #[error("ray index {index} out of range ({count} stated rays)")]
    UnknownRay { index: usize, count: usize },
    #[error("graph {0} is outside the family's coordinates")]
    IndexOutOfRange(String),
    #[error("inequality family {0:?} does not match {1}")]
    FamilyMismatch(Family, String),
    #[error("face list is not closed under taking subsets: {0:?} lacks a subface")]
    NotAComplex(Vec<usize>),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "m", rename_all = "kebab-case")]
pub enum ProfileFamily {
    /// `C_4, C_6, ..., C_{2m}`
    EvenCycles(usize),
    /// `C_3, C_5, ..., C_{2m+1}`
    OddCycles(usize),
    /// `S_0, ..., S_m`
    Stars(usize),
    /// `K_1, ..., K_m`
    Cliques(usize),
    /// scaled f-vector entries `f_0, ..., f_m` of simplicial complexes
    SimplicialF(usize),
    /// scaled f-vector entries `f_0, ..., f_m` of matroid independence complexes
    MatroidF(usize),
}

impl ProfileFamily {
    pub fn m(self) -> usize {
        match self {
            ProfileFamily::EvenCycles(m)
            | ProfileFamily::OddCycles(m)
            | ProfileFamily::Stars(m)
            | ProfileFamily::Cliques(m)
            | ProfileFamily::SimplicialF(m)
            | ProfileFamily::MatroidF(m) => m,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ProfileFamily::EvenCycles(_) => "even-cycles",
            ProfileFamily::OddCycles(_) => "odd-cycles",
            ProfileFamily::Stars(_) => "stars",
            ProfileFamily::Cliques(_) => "cliques",
            ProfileFamily::SimplicialF(_) => "simplicial",
            ProfileFamily::MatroidF(_) => "matroid",
        }
    }

    fn min_m(self) -> usize {
        match self {
            ProfileFamily::EvenCycles(_) | ProfileFamily::Stars(_) => 2,
            _ => 1,
        }
    }

    pub fn validate(self) -> Result<(), CatalogError> {
        if self.m() < self.min_m() {
            return Err(CatalogError::Parameter {
                family: self.name(),
                msg: format!("m = {} is below the minimum {}", self.m(), self.min_m()),
            });
        }
        Ok(())
    }

    pub fn dim(self) -> usize {
        match self {
            ProfileFamily::EvenCycles(m) => m - 1,
            ProfileFamily::OddCycles(m) | ProfileFamily::Cliques(m) => m,
            ProfileFamily::Stars(m) | ProfileFamily::SimplicialF(m) | ProfileFamily::MatroidF(m) => m + 1,
        }
    }

    /// Coordinate of a graph term, if the family has one.
    pub fn coordinate(self, family: Family, k: usize) -> Result<usize, CatalogError> {
        if self.graph_family() != Some(family) {
            return Err(CatalogError::FamilyMismatch(family, self.to_string()));
        }
        let m = self.m();
        let idx = match self {
            ProfileFamily::EvenCycles(_) if k % 2 == 0 && (4..=2 * m).contains(&k) => Some(k / 2 - 2),
            ProfileFamily::OddCycles(_) if k % 2 == 1 && (3..=2 * m + 1).contains(&k) => Some(k / 2 - 1),
            ProfileFamily::Stars(_) if k <= m => Some(k),
            ProfileFamily::Cliques(_) if (1..=m).contains(&k) => Some(k - 1),
            _ => None,
        };
        idx.ok_or_else(|| CatalogError::IndexOutOfRange(format!("{}{k}", family.letter())))
    }

    fn graph_family(self) -> Option<Family> {
        match self {
            ProfileFamily::EvenCycles(_) => Some(Family::EvenCycles),
            ProfileFamily::OddCycles(_) => Some(Family::OddCycles),
            ProfileFamily::Stars(_) => Some(Family::Stars),
            ProfileFamily::Cliques(_) => Some(Family::Cliques),
            _ => None,
        }
    }
}

impl fmt::Display for ProfileFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name(), self.m())
    }
}

impl FromStr for ProfileFamily {
    type Err = CatalogError;

    /// Selectors `even-cycles:m`, `odd-cycles:m`, `stars:m`, `cliques:m`, `simplicial:m`, `matroid:m`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CatalogError::Selector(s.to_string());
        let (name, m) = s.trim().split_once(':').ok_or_else(bad)?;
        let m: usize = m.trim().parse().map_err(|_| bad())?;
        let fam = match name.trim() {
            "even-cycles" => ProfileFamily::EvenCycles(m),
            "odd-cycles" => ProfileFamily::OddCycles(m),
            "stars" => ProfileFamily::Stars(m),
            "cliques" => ProfileFamily::Cliques(m),
            "simplicial" => ProfileFamily::SimplicialF(m),
            "matroid" => ProfileFamily::MatroidF(m),
            _ => return Err(bad()),
        };
        fam.validate()?;
        Ok(fam)
    }
}

/// How the stated rays generate the cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HullKind {
    /// Closed, max-closed convex hull.
    Double,
    /// Ordinary conic hull.
    Conic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileCone {
    pub family: ProfileFamily,
    pub cone: ConeH,
    /// Generators in the order used by the realizers.
    pub stated_rays: Vec<Vec<Rat>>,
    pub hull: HullKind,
    /// The complete list of extreme rays of `cone`, where known in closed form.
    pub extreme_rays: Option<Vec<Vec<Rat>>>,
}

fn sparse(dim: usize, terms: &[(usize, i64)]) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    for &(i, c) in terms {
        v[i] += rat(c);
    }
    v
}

fn int_vec(xs: impl IntoIterator<Item = usize>) -> Vec<Rat> {
    xs.into_iter().map(|x| rat(x as i64)).collect()
}

pub fn profile_cone(family: ProfileFamily) -> Result<ProfileCone, CatalogError> {
    family.validate()?;
    let m = family.m();
    let d = family.dim();
    let mut rows: Vec<(String, Vec<Rat>)> = Vec::new();
    let (stated, hull, extreme) = match family {
        ProfileFamily::EvenCycles(_) => {
            // coordinate i - 2 holds C_{2i}
            let c = |i: usize| i - 2;
            if m == 2 {
                rows.push(("nonneg".into(), sparse(d, &[(0, 1)])));
            } else {
                for i in 3..m {
                    rows.push((format!("conv[i={i}]"), sparse(d, &[(c(i - 1), 1), (c(i), -2), (c(i + 1), 1)])));
                }
                rows.push(("mono".into(), sparse(d, &[(c(2), -1), (c(3), 1)])));
                rows.push(("top".into(), sparse(d, &[(c(m - 1), m as i64), (c(m), -(m as i64 - 1))])));
            }
            (vec![int_vec(vec![1; d]), int_vec(2..=m)], HullKind::Double, None)
        }
        ProfileFamily::OddCycles(_) => {
            rows.push(("nonneg".into(), sparse(d, &[(0, 1)])));
            for i in 2..=m {
                rows.push((format!("mono[i={i}]"), sparse(d, &[(i - 2, -1), (i - 1, 1)])));
            }
            let stairs: Vec<Vec<Rat>> = (1..=m).map(|i| int_vec((1..=m).map(|j| usize::from(j >= i)))).collect();
            (stairs.clone(), HullKind::Double, Some(stairs))
        }
        ProfileFamily::Stars(_) => {
            for i in 1..m {
                rows.push((format!("conv[i={i}]"), sparse(d, &[(i - 1, 1), (i, -2), (i + 1, 1)])));
            }
            rows.push(("mono".into(), sparse(d, &[(1, -1), (2, 1)])));
            rows.push(("tail".into(), sparse(d, &[(0, 1), (m - 1, 1), (m, -1)])));
            rows.push(("top".into(), sparse(d, &[(m - 1, m as i64), (m, -(m as i64 - 1))])));
            let ones = int_vec(vec![1; d]);
            let first = int_vec((0..=m).map(|j| usize::from(j == 0)));
            let shifted = int_vec((0..=m).map(|j| j.max(1)));
            let linear = int_vec(1..=m + 1);
            let mut ext = vec![first.clone(), linear.clone()];
            ext.extend((2..=m).map(|i| int_vec((0..=m).map(|j| j.max(i)))));
            ext.extend((1..m).map(|i| {
                int_vec((0..=m).map(|j| if j <= i { i + j * (i - 1) } else { i + i * (i - 1) + (j - i) * i }))
            }));
            (vec![ones, first, shifted, linear], HullKind::Double, Some(ext))
        }
        ProfileFamily::Cliques(_) | ProfileFamily::SimplicialF(_) => {
            // ratio rows `(j+1) y_{j-1} - j y_j`, with y indexed from zero
            for j in 1..d {
                let label = match family {
                    ProfileFamily::Cliques(_) => format!("ratio[i={}]", j + 1),
                    _ => format!("ratio[i={j}]"),
                };
                rows.push((label, sparse(d, &[(j - 1, j as i64 + 1), (j, -(j as i64))])));
            }
            rows.push(("nonneg".into(), sparse(d, &[(d - 1, 1)])));
            let rays: Vec<Vec<Rat>> = (1..=d).map(|i| int_vec((1..=d).map(|j| if j <= i { j } else { 0 }))).collect();
            (rays.clone(), HullKind::Double, Some(rays))
        }
        ProfileFamily::MatroidF(_) => {
            rows.push(("start".into(), sparse(d, &[(0, 2), (1, -1)])));
            for i in 1..m {
                rows.push((format!("concave[i={i}]"), sparse(d, &[(i - 1, -1), (i, 2), (i + 1, -1)])));
            }
            rows.push(("end".into(), sparse(d, &[(m - 1, -1), (m, 1)])));
            let rays: Vec<Vec<Rat>> = (1..=m + 1).map(|k| int_vec((0..=m).map(|j| (j + 1).min(k)))).collect();
            (rays.clone(), HullKind::Conic, Some(rays))
        }
    };
    Ok(ProfileCone { family, cone: ConeH::new(d, rows)?, stated_rays: stated, hull, extreme_rays: extreme })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub rays_in_cone: bool,
    /// The hull of the stated rays equals the half-space description.
    pub hull_matches: bool,
    /// The computed extreme rays equal the closed-form list, where one exists.
    pub extreme_rays_match: Option<bool>,
    pub passed: bool,
}

fn ray_set(rays: &[Vec<Rat>]) -> BTreeSet<Vec<Rat>> {
    rays.iter().map(|r| normalize_ray(r)).collect()
}

pub fn verify_family(family: ProfileFamily) -> Result<FamilyReport, CatalogError> {
    let pc = profile_cone(family)?;
    let d = family.dim();
    let rays_in_cone = pc.stated_rays.iter().all(|r| pc.cone.contains(r));
    let computed = extreme_rays(&pc.cone)?;
    let pointed_match = |list: &[Vec<Rat>]| computed.is_pointed() && ray_set(&computed.rays) == ray_set(list);
    let hull_matches = match pc.hull {
        HullKind::Double => cones_equal(&double_hull(&pc.stated_rays, d)?, &pc.cone)?,
        HullKind::Conic => pointed_match(&pc.stated_rays),
    };
    let extreme_rays_match = pc.extreme_rays.as_deref().map(pointed_match);
    let passed = rays_in_cone && hull_matches && extreme_rays_match.unwrap_or(true);
    Ok(FamilyReport { family: family.to_string(), rays_in_cone, hull_matches, extreme_rays_match, passed })
}

/// Exact counts of a realizing object and `ln(count) / ln(n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizerEval {
    pub n: u64,
    #[serde(serialize_with = "ser_bigs")]
    pub counts: Vec<BigUint>,
    pub log_ratios: Vec<f64>,
}

fn ser_bigs<S: serde::Serializer>(xs: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

/// Natural logarithm of a big integer; `-inf` for zero.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().map_or(f64::NEG_INFINITY, |v| (v as f64).ln());
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn falling(a: u64, j: u64) -> BigUint {
    (0..j).fold(BigUint::one(), |acc, t| if t < a { acc * big(a - t) } else { BigUint::zero() })
}

fn binom(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    falling(a, b) / falling(b, b)
}

/// `hom(C_l; C_k)`: closed walks of length `l` in `C_k`, whose net displacement is divisible by `k`.
pub fn cycle_hom_closed_form(l: u64, k: u64) -> BigUint {
    big(k)
        * (0..=l).filter(|&t| (l as i64 - 2 * t as i64).rem_euclid(k as i64) == 0).map(|t| binom(l, t)).sum::<BigUint>()
}

/// `(k+1)! e_{k+1}(sizes)` for `k = 0..=m`.
pub fn partition_matroid_f_vector(sizes: &[BigUint], m: usize) -> ScaledFVector {
    // e[j] = elementary symmetric polynomial of degree j
    let mut e = vec![BigUint::zero(); sizes.len() + 2];
    e[0] = BigUint::one();
    for s in sizes {
        for j in (1..e.len()).rev() {
            let add = &e[j - 1] * s;
            e[j] += add;
        }
    }
    let entries =
        (0..=m).map(|k| falling(k as u64 + 1, k as u64 + 1) * e.get(k + 1).cloned().unwrap_or_default()).collect();
    ScaledFVector { entries }
}

/// Evaluates the closed-form realizer of stated ray `ray_index` at scale `n >= 2`.
pub fn realizer_log_vector(family: ProfileFamily, ray_index: usize, n: u64) -> Result<RealizerEval, CatalogError> {
    let pc = profile_cone(family)?;
    let count = pc.stated_rays.len();
    if ray_index >= count {
        return Err(CatalogError::UnknownRay { index: ray_index, count });
    }
    if n < 2 {
        return Err(CatalogError::Parameter { family: family.name(), msg: "scale n must be at least 2".into() });
    }
    let m = family.m() as u64;
    let counts: Vec<BigUint> = match family {
        // K_2 for the all-ones ray, K_n otherwise: hom(C_{2i}; K_n) = (n-1)^{2i} + (n-1)
        ProfileFamily::EvenCycles(_) => {
            (2..=m).map(|i| if ray_index == 0 { big(2) } else { big(n - 1).pow(2 * i as u32) + big(n - 1) }).collect()
        }
        // n copies of C_{2i+1} and one triangle
        ProfileFamily::OddCycles(_) => {
            let i = ray_index as u64 + 1;
            (1..=m)
                .map(|j| big(n) * cycle_hom_closed_form(2 * j + 1, 2 * i + 1) + cycle_hom_closed_form(2 * j + 1, 3))
                .collect()
        }
        // hom(S_i; G) = sum of i-th powers of degrees
        ProfileFamily::Stars(_) => (0..=m)
            .map(|i| match ray_index {
                0 => big(2),
                1 if i == 0 => big(n + 2),
                1 => big(2),
                2 if i == 0 => big(n + 1),
                2 => big(n).pow(i as u32) + big(n),
                _ => big(n) * big(n - 1).pow(i as u32),
            })
            .collect(),
        // complete i-partite graph with parts of size n, plus a disjoint K_m
        ProfileFamily::Cliques(_) => {
            let i = ray_index as u64 + 1;
            (1..=m).map(|j| falling(i, j) * big(n).pow(j as u32) + falling(m, j)).collect()
        }
        // clique complex of the same graph with i+1 parts, plus a disjoint m-simplex
        ProfileFamily::SimplicialF(_) => {
            let i = ray_index as u64;
            (0..=m)
                .map(|k| falling(k + 1, k + 1) * (binom(i + 1, k + 1) * big(n).pow(k as u32 + 1) + binom(m + 1, k + 1)))
                .collect()
        }
        // partition matroid with ray_index+1 parts of size n and the rest singletons
        ProfileFamily::MatroidF(_) => {
            let sizes: Vec<BigUint> =
                (0..=m).map(|k| if k <= ray_index as u64 { big(n) } else { BigUint::one() }).collect();
            partition_matroid_f_vector(&sizes, m as usize).entries
        }
    };
    let ln_n = (n as f64).ln();
    let log_ratios = counts.iter().map(|c| ln_big(c) / ln_n).collect();
    Ok(RealizerEval { n, counts, log_ratios })
}

/// Entry `k` is `(k+1)!` times the number of faces with `k+1` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaledFVector {
    #[serde(serialize_with = "ser_bigs")]
    pub entries: Vec<BigUint>,
}

fn canonical_faces(faces: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    faces
        .iter()
        .map(|f| {
            let mut g = f.clone();
            g.sort_unstable();
            g.dedup();
            g
        })
        .filter(|f| !f.is_empty())
        .collect()
}

pub fn scaled_f_vector(faces: &[Vec<usize>]) -> Result<ScaledFVector, CatalogError> {
    let set = canonical_faces(faces);
    for f in &set {
        if f.len() > 1 {
            for skip in 0..f.len() {
                let sub: Vec<usize> = f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                if !set.contains(&sub) {
                    return Err(CatalogError::NotAComplex(f.clone()));
                }
            }
        }
    }
    let top = set.iter().map(Vec::len).max().unwrap_or(0);
    let mut counts = vec![0u64; top];
    for f in &set {
        counts[f.len() - 1] += 1;
    }
    let entries = counts.iter().enumerate().map(|(k, &c)| falling(k as u64 + 1, k as u64 + 1) * big(c)).collect();
    Ok(ScaledFVector { entries })
}

/// Entrywise product, truncated to the shorter vector.
pub fn f_tensor(a: &ScaledFVector, b: &ScaledFVector) -> ScaledFVector {
    ScaledFVector { entries: a.entries.iter().zip(&b.entries).map(|(x, y)| x * y).collect() }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    permutations(k - 1)
        .into_iter()
        .flat_map(|p| {
            (0..k).map(move |pos| {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                q
            })
        })
        .collect()
}

/// Faces of the tensor complex on `V(S) x V(T)`: bijections between equal-size faces.
/// Vertex `(a, b)` is encoded as `a * width + b`.
pub fn tensor_complex(s: &[Vec<usize>], t: &[Vec<usize>], width: usize) -> Vec<Vec<usize>> {
    let (fs, ft) = (canonical_faces(s), canonical_faces(t));
    let mut out = Vec::new();
    for a in &fs {
        for b in ft.iter().filter(|b| b.len() == a.len()) {
            for p in permutations(a.len()) {
                let mut face: Vec<usize> = a.iter().zip(&p).map(|(&x, &j)| x * width + b[j]).collect();
                face.sort_unstable();
                out.push(face);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FamilyVerdict {
    Valid {
        certificate: Certificate,
    },
    Invalid {
        #[serde(with = "crate::exactlp::rat::serde_rat_vec")]
        ray: Vec<Rat>,
    },
}

impl FamilyVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, FamilyVerdict::Valid { .. })
    }
}

fn family_form(family: ProfileFamily, ineq: &BinomialInequality) -> Result<Vec<Rat>, CatalogError> {
    let mut c = vec![Rat::zero(); family.dim()];
    for (&k, e) in &ineq.lhs {
        c[family.coordinate(ineq.family, k)?] += e;
    }
    for (&k, e) in &ineq.rhs {
        c[family.coordinate(ineq.family, k)?] -= e;
    }
    Ok(c)
}

/// Decides the inequality on the family's cone: a nonnegative row combination or a violating ray.
pub fn check_binomial_in_family(
    family: ProfileFamily,
    ineq: &BinomialInequality,
) -> Result<FamilyVerdict, CatalogError> {
    let pc = profile_cone(family)?;
    let objective = family_form(family, ineq)?;
    let mut lp = LinearProgram::new(objective);
    for r in &pc.cone.rows {
        lp.add_ge(r.label.clone(), r.coeffs.clone(), Rat::zero());
    }
    match solve(&lp)? {
        LpOutcome::Optimal { dual, .. } => {
            let terms = pc
                .cone
                .rows
                .iter()
                .filter_map(|r| {
                    dual.get(&r.label)
                        .filter(|v| !v.is_zero())
                        .map(|v| CertificateTerm { generator: r.label.clone(), coeff: v.clone() })
                })
                .collect();
            Ok(FamilyVerdict::Valid { certificate: Certificate { terms } })
        }
        LpOutcome::Unbounded { improving_ray, .. } => Ok(FamilyVerdict::Invalid { ray: normalize_ray(&improving_ray) }),
        LpOutcome::Infeasible { .. } => unreachable!("the zero vector lies in every cone"),
    }
}

/// Exact check that a certificate combines the family's rows into the inequality.
pub fn verify_family_certificate(
    family: ProfileFamily,
    ineq: &BinomialInequality,
    cert: &Certificate,
) -> Result<bool, CatalogError> {
    let pc = profile_cone(family)?;
    let target = family_form(family, ineq)?;
    let mut sum = vec![Rat::zero(); family.dim()];
    for t in &cert.terms {
        let Some(row) = pc.cone.row(&t.generator) else { return Ok(false) };
        if t.coeff.is_negative() {
            return Ok(false);
        }
        for (s, a) in sum.iter_mut().zip(&row.coeffs) {
            *s += &t.coeff * a;
        }
    }
    Ok(sum == target)
}
