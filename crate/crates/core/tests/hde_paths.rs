use homtrop::exactlp::{ratio, Rat};
use homtrop::graphs::{graphs_up_to, make_named, path_hom_vector, Named};
use homtrop::hde::{
    averaged_point, hde_lp, hde_paths_closed_form, max_c_phi, polymatroid_system, HdeValue, SourceSpec,
};
use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive};

fn path(k: usize) -> homtrop::graphs::Graph {
    make_named(Named::Path(k)).unwrap()
}

fn lp(source: &str, target: usize) -> HdeValue {
    hde_lp(&SourceSpec::parse(source).unwrap(), &path(target)).unwrap().value
}

#[test]
fn lp_matches_closed_form_off_the_zero_target() {
    for v in 0..=6u64 {
        for w in 0..=6u64 {
            let got = lp(&format!("P{v}"), w as usize);
            if w == 0 && v > 0 {
                // No homomorphism from an edge into a single vertex.
                assert_eq!(got, HdeValue::NegInfinity);
            } else {
                assert_eq!(got, HdeValue::Finite(hde_paths_closed_form(v, w)), "v={v} w={w}");
            }
        }
    }
}

#[test]
fn three_edge_table() {
    for u in 1..=2u64 {
        let vals = [
            ratio(1, u as i64),
            ratio(2, 2 * u as i64 + 1),
            ratio(4 * u as i64 + 1, (4 * u * u + 3 * u + 1) as i64),
            ratio(1, u as i64 + 1),
        ];
        for (i, want) in vals.into_iter().enumerate() {
            let w = 4 * u + i as u64 - 1;
            if w <= 7 {
                assert_eq!(hde_paths_closed_form(3, w), want, "w={w}");
            }
        }
    }
}

#[test]
fn closed_form_is_monotone_in_target() {
    for v in 0..=20 {
        for w in 0..20 {
            assert!(hde_paths_closed_form(v, w + 1) <= hde_paths_closed_form(v, w));
        }
    }
}

#[test]
fn averaged_point_gives_upper_bounds() {
    for v in 1..=4usize {
        let n = 2 * v;
        for u in 0..v {
            let src = SourceSpec::parse(&format!("P{}^2*P{}^{}", 2 * u, 2 * v + 1, 2 * v - 1 - 2 * u)).unwrap();
            let got = max_c_phi(&src, &path(n - 1), &averaged_point(n)).unwrap().unwrap();
            assert_eq!(got, Rat::from_integer((2 * v + 1 - 2 * u).into()), "u={u} v={v}");
        }
    }
    for u in 1..=4usize {
        let src = SourceSpec::parse(&format!("P{}^{}*P{}", 2 * u - 2, u + 1, 2 * u + 1)).unwrap();
        let n = 2 * u + 1;
        if n <= 8 {
            assert!(polymatroid_system(&path(2 * u)).unwrap().contains(&averaged_point(n)));
        }
        let got = max_c_phi(&src, &path(2 * u), &averaged_point(n)).unwrap().unwrap();
        assert_eq!(got, Rat::from_integer((u + 1).into()), "u={u}");
    }
}

#[test]
fn closed_form_holds_on_small_graphs() {
    let graphs = graphs_up_to(6, false).unwrap();
    let counts: Vec<Vec<BigUint>> = graphs.iter().map(|g| path_hom_vector(g, 6).counts).collect();
    for v in 0..=6usize {
        for w in 0..=6usize {
            if w == 0 && v > 0 {
                continue;
            }
            let c = hde_paths_closed_form(v as u64, w as u64);
            let (num, den) = (c.numer().to_u32().unwrap(), c.denom().to_u32().unwrap());
            assert!(!c.is_negative());
            for h in &counts {
                if h[w] >= BigUint::from(2u32) && h[v] > BigUint::from(0u32) {
                    assert!(h[v].pow(den) >= h[w].pow(num), "v={v} w={w} counts={h:?}");
                }
            }
        }
    }
}

#[test]
fn vertex_count_is_not_dominated_by_walks() {
    // An isolated vertex beside an edge: hom(P_v) = 2 < 3 = hom(P_0).
    let g = homtrop::graphs::Graph::new(3, [(0, 1)]).unwrap();
    let h = path_hom_vector(&g, 6).counts;
    for v in 1..=6 {
        assert!(h[v] < h[0]);
        assert_eq!(hde_paths_closed_form(v as u64, 0), Rat::from_integer(1.into()));
    }
}
