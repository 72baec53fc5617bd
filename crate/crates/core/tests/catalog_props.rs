use homtrop::catalog::{
    check_binomial_in_family, f_tensor, partition_matroid_f_vector, profile_cone, realizer_log_vector, scaled_f_vector,
    tensor_complex, verify_family, verify_family_certificate, FamilyVerdict, ProfileFamily,
};
use homtrop::graphs::{clique_hom, graphs_up_to, star_hom};
use homtrop::pathprofile::BinomialInequality;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn all_families() -> Vec<ProfileFamily> {
    let mut v = Vec::new();
    v.extend((3..=6).map(ProfileFamily::EvenCycles));
    v.extend((2..=6).map(ProfileFamily::OddCycles));
    v.extend((2..=5).map(ProfileFamily::Stars));
    v.extend((2..=6).map(ProfileFamily::Cliques));
    v.extend((2..=5).map(ProfileFamily::SimplicialF));
    v.extend((2..=5).map(ProfileFamily::MatroidF));
    v
}

#[test]
fn every_family_verifies() {
    for f in all_families() {
        let r = verify_family(f).unwrap();
        assert!(r.passed, "{r:?}");
    }
}

fn direction_error(logs: &[f64], ray: &[f64]) -> f64 {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (norm(logs), norm(ray));
    logs.iter().zip(ray).map(|(x, y)| (x / a - y / b).abs()).fold(0.0, f64::max)
}

#[test]
fn even_cycle_clique_realizer_converges() {
    for m in 3..=6 {
        let f = ProfileFamily::EvenCycles(m);
        let ray: Vec<f64> = (2..=m).map(|i| i as f64).collect();
        let eval = realizer_log_vector(f, 1, 1 << 20).unwrap();
        assert!(direction_error(&eval.log_ratios, &ray) < 1e-4);
        for (i, x) in eval.log_ratios.iter().enumerate() {
            assert!((x - 2.0 * (i + 2) as f64).abs() < 1e-4);
        }
    }
}

#[test]
fn realizers_approach_their_rays() {
    for f in all_families() {
        let pc = profile_cone(f).unwrap();
        for (idx, ray) in pc.stated_rays.iter().enumerate() {
            let ray: Vec<f64> = ray.iter().map(|x| x.to_f64().unwrap()).collect();
            if ray.iter().all(|&x| x == 1.0) && matches!(f, ProfileFamily::EvenCycles(_) | ProfileFamily::Stars(_)) {
                // K_2 has constant counts 2, so the ratios are exactly ln 2 / ln n.
                let e = realizer_log_vector(f, idx, 1 << 20).unwrap();
                assert!(e.log_ratios.iter().all(|&x| (x - 0.05).abs() < 1e-12));
                continue;
            }
            let near = realizer_log_vector(f, idx, 1 << 20).unwrap();
            let far = realizer_log_vector(f, idx, 1 << 40).unwrap();
            // The realizer may trace a positive integer multiple of the stated ray.
            let top = ray.iter().cloned().fold(0.0, f64::max);
            let factor = (far.log_ratios.iter().cloned().fold(0.0, f64::max) / top).round();
            assert!(factor >= 1.0);
            let err = |logs: &[f64]| logs.iter().zip(&ray).map(|(a, b)| (a - factor * b).abs()).fold(0.0, f64::max);
            // Every count is a polynomial in n with leading exponent equal to the ray entry
            // and coefficients below 2^16, so the error is at most 16 / log2(n).
            assert!(err(&near.log_ratios) <= 16.0 / 20.0, "{f} ray {idx}: {:?}", near.log_ratios);
            assert!(err(&far.log_ratios) <= 16.0 / 40.0, "{f} ray {idx}: {:?}", far.log_ratios);
        }
    }
}

#[test]
fn example_combination_uses_the_three_row_types() {
    let f = ProfileFamily::EvenCycles(5);
    let i = BinomialInequality::parse("C4^3 * C10^2 >= C8^4").unwrap();
    let FamilyVerdict::Valid { certificate } = check_binomial_in_family(f, &i).unwrap() else { panic!("invalid") };
    assert!(verify_family_certificate(f, &i, &certificate).unwrap());
    for t in &certificate.terms {
        assert!(t.generator.starts_with("conv[") || t.generator == "mono" || t.generator == "top");
    }
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

#[test]
fn clique_count_rows_hold_on_small_graphs() {
    for g in graphs_up_to(6, false).unwrap() {
        let k: Vec<BigUint> = (1..=4).map(|p| clique_hom(&g, p).unwrap()).collect();
        for p in 2..=4usize {
            for q in p + 1..=4 {
                assert!(k[p - 1].pow(q as u32) >= k[q - 1].pow(p as u32), "{g:?}");
            }
        }
        assert!(k[0].pow(2) >= k[1]);
    }
}

#[test]
fn star_rows_hold_on_small_graphs() {
    for g in graphs_up_to(6, false).unwrap() {
        let s: Vec<BigUint> = (0..=5).map(|i| star_hom(&g, i)).collect();
        for m in 2..=5usize {
            for i in 1..m {
                assert!(&s[i - 1] * &s[i + 1] >= s[i].pow(2));
            }
            assert!(s[2] >= s[1]);
            assert!(&s[0] * &s[m - 1] >= s[m]);
            assert!(s[m - 1].pow(m as u32) >= s[m].pow(m as u32 - 1));
        }
    }
}

fn complex_from_facets(facets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for f in facets {
        for mask in 1u32..(1 << f.len()) {
            out.push(f.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_matroids_are_log_concave(sizes in prop::collection::vec(1u64..50, 1..6), m in 1usize..6) {
        let sizes: Vec<BigUint> = sizes.into_iter().map(big).collect();
        let f = partition_matroid_f_vector(&sizes, m).entries;
        for k in 1..m {
            prop_assert!(&f[k - 1] * &f[k + 1] <= f[k].pow(2));
        }
    }

    #[test]
    fn tensor_complex_multiplies_f_vectors(
        a in prop::collection::vec(prop::collection::btree_set(0usize..4, 1..4), 1..3),
        b in prop::collection::vec(prop::collection::btree_set(0usize..4, 1..4), 1..3),
    ) {
        let a: Vec<Vec<usize>> = a.into_iter().map(|s| s.into_iter().collect()).collect();
        let b: Vec<Vec<usize>> = b.into_iter().map(|s| s.into_iter().collect()).collect();
        let (s, t) = (complex_from_facets(&a), complex_from_facets(&b));
        let fs = scaled_f_vector(&s).unwrap();
        let ft = scaled_f_vector(&t).unwrap();
        let explicit = scaled_f_vector(&tensor_complex(&s, &t, 4)).unwrap();
        prop_assert_eq!(explicit, f_tensor(&fs, &ft));
    }
}
