use homtrop::blowup::{
    build_blowup_graph, is_admissible, limit_ray, max_weight_vector, path_self_hom_count, realize_ray,
    realize_symmetric, weight_function, weighted_hom_sum, BlowUpSpec, RealizationTag, Realizer,
};
use homtrop::exactlp::{rat, Rat};
use homtrop::pathprofile::rays::{rfamily_ray, symmetrize_d};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Valid specs with `f <= 4`, built by symmetrizing a random prefix-dominant `d`.
fn random_specs(count: usize, seed: u64) -> Vec<BlowUpSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let s = rng.gen_range(0..=10i64);
        let b = s + rng.gen_range(0..=6i64);
        let f = rng.gen_range(0..=4usize);
        let mut d = vec![rat(b - s)];
        d.extend((0..f).map(|_| rat(rng.gen_range(0..=3))));
        let Ok(sym) = symmetrize_d(&d) else { continue };
        let spec = BlowUpSpec::new(rat(b), rat(s), sym);
        if spec.validate().is_ok() {
            out.push(spec);
        }
    }
    out
}

#[test]
fn closed_form_matches_the_max_weight_walks() {
    let specs = random_specs(100, 99);
    let mut pivots = std::collections::BTreeSet::new();
    for spec in &specs {
        pivots.insert((spec.f, spec.pivot()));
        let p = weight_function(spec).unwrap();
        assert_eq!(p.vertex_count(), 2 * spec.f + 2);
        let n = spec.f + 2;
        assert_eq!(limit_ray(spec, n).unwrap(), max_weight_vector(&p, 2 * n + 1), "{}", spec.to_text());
    }
    assert!(pivots.len() >= 5, "generator covers too few shapes: {pivots:?}");
    assert!(specs.iter().any(|s| !is_admissible(s)), "no spec exercises the middle-edge excess");
}

#[test]
fn weights_scale_linearly() {
    for spec in random_specs(30, 5) {
        let c = Rat::new(3.into(), 2.into());
        let p = weight_function(&spec).unwrap();
        let q = weight_function(&spec.scaled(&c)).unwrap();
        let scaled: Vec<Rat> = p.vertex_weights.iter().map(|x| x * &c).collect();
        assert_eq!(q.vertex_weights, scaled);
        let n = spec.f + 1;
        let r: Vec<Rat> = limit_ray(&spec, n).unwrap().iter().map(|x| x * &c).collect();
        assert_eq!(limit_ray(&spec.scaled(&c), n).unwrap(), r);
    }
}

/// `m^{r_i} <= sum_phi m^{p(phi)} <= |Hom(P_i; P)| m^{r_i}`, so the log ratio tends to `r_i`.
#[test]
fn weighted_counts_are_sandwiched_by_the_limit_ray() {
    let specs: Vec<BlowUpSpec> = random_specs(200, 17)
        .into_iter()
        .filter(|s| is_admissible(s) && weight_function(s).unwrap().vertex_weights.iter().all(|w| w.is_integer()))
        .take(40)
        .collect();
    assert!(specs.len() >= 20);
    for spec in &specs {
        let p = weight_function(spec).unwrap();
        let len = 2 * spec.f + 3;
        let ray = max_weight_vector(&p, len);
        if p.edge_weights.iter().any(|w| !w.is_integer()) {
            continue;
        }
        for m in [2u64, 3, 10] {
            let sums = weighted_hom_sum(&p, m, len).unwrap();
            for (i, (count, r)) in sums.iter().zip(&ray).enumerate() {
                let low = BigUint::from(m).pow(r.to_integer().to_u32().unwrap());
                assert!(*count >= low, "{} i={i} m={m}", spec.to_text());
                assert!(*count <= &low * path_self_hom_count(&p, i), "{} i={i} m={m}", spec.to_text());
            }
        }
    }
}

#[test]
fn self_hom_counts_are_walk_counts() {
    // walks with i steps on a path with k vertices
    let spec = BlowUpSpec::new(rat(1), rat(1), vec![Rat::zero()]);
    let p = weight_function(&spec).unwrap();
    assert_eq!((0..5).map(|i| path_self_hom_count(&p, i)).collect::<Vec<_>>(), vec![BigUint::from(2u32); 5]);
}

#[test]
fn realization_plans_reproduce_family_rays() {
    for spec in random_specs(60, 3) {
        let n = spec.f + 1;
        let r = limit_ray(&spec, n).unwrap();
        if r.iter().all(|x| x.is_zero()) {
            continue;
        }
        let plan = realize_ray(&r).unwrap();
        assert_eq!(plan.ray(r.len()), r, "{}", spec.to_text());
    }
}

fn blowup_leaves<'a>(r: &'a Realizer, out: &mut Vec<&'a BlowUpSpec>) {
    match r {
        Realizer::BlowUp { spec } => out.push(spec),
        Realizer::Conic { terms } | Realizer::Max { terms } => terms.iter().for_each(|t| blowup_leaves(t, out)),
        _ => {}
    }
}

#[test]
fn every_symmetric_spec_has_an_admissible_plan() {
    let mut tags = std::collections::BTreeMap::new();
    for spec in random_specs(3000, 41) {
        let admissible = is_admissible(&spec);
        let p = weight_function(&spec).unwrap();
        if !admissible {
            assert!(build_blowup_graph(&p, 2, 1 << 20).is_err());
        }
        let (plan, tag) = realize_symmetric(&spec.as_rfamily()).unwrap();
        *tags.entry(format!("{tag:?}/{admissible}")).or_insert(0) += 1;
        assert_eq!(admissible, tag == RealizationTag::Direct);
        assert_eq!(
            plan.ray(2 * spec.f + 4),
            rfamily_ray(&spec.as_rfamily(), spec.f + 1).unwrap(),
            "{}",
            spec.to_text()
        );
        let mut leaves = Vec::new();
        blowup_leaves(&plan, &mut leaves);
        for leaf in leaves {
            assert!(is_admissible(leaf), "{} uses {}", spec.to_text(), leaf.to_text());
        }
    }
    for tag in ["Direct/true", "ConicWithOnes/false", "Balanced/false"] {
        assert!(tags.contains_key(tag), "{tags:?}");
    }
}
