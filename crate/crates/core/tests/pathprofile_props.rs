use homtrop::cones::tropical_sum;
use homtrop::exactlp::rat::dot;
use homtrop::exactlp::{rat, ratio, Rat};
use homtrop::graphs::{disjoint_union, graphs_up_to, path_hom_vector, random_graph, tensor_product, Graph};
use homtrop::pathprofile::cone::{derived_inequality_rows, row_as_inequality};
use homtrop::pathprofile::rays::{recombine, staircase};
use homtrop::pathprofile::witness::evaluate_scaled;
use homtrop::pathprofile::{
    build_cone_c, check_path_inequality, decompose_ray, in_cone_c, lift_membership, rfamily_check, verify_certificate,
    BinomialInequality, Family, PathVerdict, RFamilySpec, RayPart,
};
use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

const MAX_LEN: usize = 7;

fn small_corpus() -> Vec<Vec<BigUint>> {
    graphs_up_to(6, false)
        .unwrap()
        .iter()
        .filter(|g| g.edge_count() > 0)
        .map(|g| path_hom_vector(g, MAX_LEN).counts)
        .collect()
}

/// Seeded mix of random graphs on at most 10 vertices, tensor powers and disjoint unions.
fn random_corpus(count: usize, seed: u64) -> Vec<Vec<BigUint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g: Graph = match out.len() % 4 {
            0 | 1 => {
                let n = rng.gen_range(2..=10);
                let p = rng.gen_range(0.15..0.9);
                random_graph(&mut rng, n, p)
            }
            2 => {
                let n = rng.gen_range(2..=4);
                let base = random_graph(&mut rng, n, 0.6);
                let square = tensor_product(&base, &base).unwrap();
                if rng.gen_bool(0.5) {
                    tensor_product(&square, &base).unwrap()
                } else {
                    square
                }
            }
            _ => {
                let (na, nb) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
                let a = random_graph(&mut rng, na, 0.5);
                let b = random_graph(&mut rng, nb, 0.7);
                disjoint_union(&a, &b)
            }
        };
        if g.edge_count() > 0 {
            out.push(path_hom_vector(&g, MAX_LEN).counts);
        }
    }
    out
}

fn violations(ineq: &BinomialInequality, corpus: &[Vec<BigUint>]) -> usize {
    corpus.iter().filter(|c| evaluate_scaled(ineq, c).is_some_and(|(l, r)| l < r)).count()
}

#[test]
fn rows_of_the_first_cone_hold_on_small_graphs() {
    let corpus = small_corpus();
    let c = build_cone_c(1);
    assert_eq!(c.dim(), 8);
    for row in &c.cone.rows {
        let ineq = row_as_inequality(&row.coeffs);
        let checked = corpus.iter().filter(|cs| evaluate_scaled(&ineq, cs).is_some()).count();
        assert!(checked > 0, "{} never applies", row.label);
        assert_eq!(violations(&ineq, &corpus), 0, "{} = {ineq}", row.label);
    }
}

#[test]
fn rows_hold_with_isolated_vertices() {
    let corpus: Vec<Vec<BigUint>> = graphs_up_to(6, false)
        .unwrap()
        .iter()
        .filter(|g| g.edge_count() > 0 && (0..g.vertex_count()).any(|v| g.degree(v) == 0))
        .map(|g| path_hom_vector(g, MAX_LEN).counts)
        .collect();
    assert!(!corpus.is_empty());
    for row in build_cone_c(1).cone.rows.iter().filter(|r| r.label.starts_with("p0")) {
        assert_eq!(violations(&row_as_inequality(&row.coeffs), &corpus), 0, "{}", row.label);
    }
}

#[test]
fn derived_rows_are_certified_and_hold() {
    let corpus = small_corpus();
    for n in 1..=3 {
        for (label, ineq) in derived_inequality_rows(n) {
            match check_path_inequality(&ineq).unwrap() {
                PathVerdict::Valid { certificate, .. } => {
                    assert!(verify_certificate(&ineq, &certificate).unwrap(), "{label}")
                }
                PathVerdict::Invalid { .. } => panic!("{label}: {ineq} reported invalid"),
            }
            if ineq.max_index().unwrap_or(0) <= MAX_LEN {
                assert_eq!(violations(&ineq, &corpus), 0, "{label}");
            }
        }
    }
}

/// Random binomial inequalities in `P_0..P_7`: half are nonnegative row combinations of `C(n)`,
/// half have arbitrary small exponents.
fn random_inequalities(count: usize, seed: u64) -> Vec<BinomialInequality> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = build_cone_c(1);
    let mut out = Vec::new();
    while out.len() < count {
        let mut form = vec![Rat::zero(); 8];
        if out.len() % 2 == 0 {
            for _ in 0..rng.gen_range(1..=3) {
                let row = &c.cone.rows[rng.gen_range(0..c.cone.rows.len())];
                let w = rat(rng.gen_range(1..=3));
                for (f, a) in form.iter_mut().zip(&row.coeffs) {
                    *f += &w * a;
                }
            }
            if form[MAX_LEN + 1..].iter().any(|x| !x.is_zero()) {
                continue;
            }
        } else {
            for f in form.iter_mut() {
                *f = rat(rng.gen_range(-2..=2));
            }
        }
        let mut lhs = BTreeMap::new();
        let mut rhs = BTreeMap::new();
        for (k, x) in form.iter().enumerate().take(MAX_LEN + 1) {
            if x.is_positive() {
                lhs.insert(k, x.clone());
            } else if x.is_negative() {
                rhs.insert(k, -x.clone());
            }
        }
        if lhs.is_empty() && rhs.is_empty() {
            continue;
        }
        out.push(BinomialInequality::new(Family::Paths, lhs, rhs).unwrap());
    }
    out
}

#[test]
fn checker_verdicts_are_sound_on_ten_thousand_graphs() {
    let corpus = random_corpus(10_000, 0x5eed);
    let small = small_corpus();
    let (mut valid, mut invalid) = (0, 0);
    for ineq in random_inequalities(60, 11) {
        match check_path_inequality(&ineq).unwrap() {
            PathVerdict::Valid { certificate, .. } => {
                valid += 1;
                assert!(verify_certificate(&ineq, &certificate).unwrap(), "{ineq}");
                assert_eq!(violations(&ineq, &corpus), 0, "{ineq}");
                assert_eq!(violations(&ineq, &small), 0, "{ineq}");
            }
            PathVerdict::Invalid { n, ray, lift } => {
                invalid += 1;
                let form = ineq.linear_form(2 * n + 2, |k| k);
                assert!(dot(&form, &ray).is_negative(), "{ineq}");
                assert!(in_cone_c(&lift), "{ineq}");
                assert_eq!(&lift[..2 * n + 2], &ray[..]);
            }
        }
    }
    assert!(valid >= 20 && invalid >= 10, "valid {valid}, invalid {invalid}");
}

/// A random member of the widest R-family with `n + 1` entries in `d`.
fn random_rfamily(rng: &mut ChaCha8Rng, n: usize) -> RFamilySpec {
    loop {
        let s = rat(rng.gen_range(0..=12));
        let b = rat(rng.gen_range(0..=12));
        let lo = (&b - &s).max(rat(0));
        let hi = &b - &s / rat(2);
        if lo > hi {
            continue;
        }
        let steps = ((&hi - &lo) * rat(2)).to_integer();
        let k: i64 = rng.gen_range(0..=steps.try_into().unwrap_or(0i64));
        let d0 = &lo + ratio(k, 2);
        let mut d = vec![d0];
        for _ in 0..n {
            d.push(rat(rng.gen_range(0..=3)));
        }
        let spec = RFamilySpec::new(s, b, d);
        if rfamily_check(&spec) {
            return spec;
        }
    }
}

fn random_conic(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    let len = 2 * n + 2;
    let mut v = vec![Rat::zero(); len];
    for _ in 0..rng.gen_range(1..=3) {
        let w = rat(rng.gen_range(1..=3));
        let r = if rng.gen_bool(0.8) { random_rfamily(rng, n).ray() } else { staircase(len, &rat(1)) };
        for (x, y) in v.iter_mut().zip(r) {
            *x += &w * y;
        }
    }
    v
}

fn random_cone_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    let a = random_conic(rng, n);
    if rng.gen_bool(0.5) {
        let b = random_conic(rng, n);
        tropical_sum(&a, &b).unwrap()
    } else {
        a
    }
}

#[test]
fn two_hundred_random_points_decompose_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..200 {
        let n = 1 + i % 3;
        let point = random_cone_point(&mut rng, n);
        assert!(lift_membership(&point).unwrap().is_some(), "generator left the cone: {point:?}");
        let parts = decompose_ray(&point).unwrap();
        for p in &parts {
            if let RayPart::Family { spec, .. } = p {
                assert!(rfamily_check(spec), "{point:?}: {spec:?}");
            }
            assert!(p.ray().iter().zip(&point).all(|(a, b)| a <= b), "part exceeds the input");
        }
        assert_eq!(recombine(&parts).as_deref(), Some(&point[..]), "{point:?}");
    }
}
