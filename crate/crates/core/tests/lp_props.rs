use homtrop::exactlp::{rat, solve, verify_outcome, LinearProgram, LpOutcome, Rat};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// Inequality system `a x >= b` with the box `-BOX <= x_i <= BOX` written as rows.
struct Polytope {
    rows: Vec<(Vec<Rat>, Rat)>,
}

const BOX: i64 = 5;

fn boxed(n: usize, rows: &[(Vec<i64>, i64)]) -> Polytope {
    let mut out: Vec<(Vec<Rat>, Rat)> =
        rows.iter().map(|(a, b)| (a.iter().map(|&x| rat(x)).collect(), rat(*b))).collect();
    for i in 0..n {
        for sign in [1, -1] {
            let mut a = vec![rat(0); n];
            a[i] = rat(sign);
            out.push((a, rat(-BOX)));
        }
    }
    Polytope { rows: out }
}

/// Solves a square system by Gauss-Jordan elimination; `None` if singular.
fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = b.len();
    let mut m: Vec<Vec<Rat>> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=n {
                    let v = &m[col][c] * &f;
                    m[r][c] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Minimum of `c . x` over the polytope by enumerating all vertices.
fn vertex_oracle(poly: &Polytope, c: &[Rat]) -> Option<Rat> {
    let n = c.len();
    let k = poly.rows.len();
    let mut best: Option<Rat> = None;
    let mut pick = Vec::with_capacity(n);
    fn rec(
        start: usize,
        pick: &mut Vec<usize>,
        n: usize,
        k: usize,
        poly: &Polytope,
        c: &[Rat],
        best: &mut Option<Rat>,
    ) {
        if pick.len() == n {
            let a: Vec<Vec<Rat>> = pick.iter().map(|&i| poly.rows[i].0.clone()).collect();
            let b: Vec<Rat> = pick.iter().map(|&i| poly.rows[i].1.clone()).collect();
            if let Some(x) = solve_square(&a, &b) {
                let feasible = poly.rows.iter().all(|(r, rhs)| {
                    let lhs: Rat = r.iter().zip(&x).map(|(p, q)| p * q).sum();
                    lhs >= *rhs
                });
                if feasible {
                    let v: Rat = c.iter().zip(&x).map(|(p, q)| p * q).sum();
                    if best.as_ref().is_none_or(|b| v < *b) {
                        *best = Some(v);
                    }
                }
            }
            return;
        }
        for i in start..k {
            if k - i < n - pick.len() {
                break;
            }
            pick.push(i);
            rec(i + 1, pick, n, k, poly, c, best);
            pick.pop();
        }
    }
    rec(0, &mut pick, n, k, poly, c, &mut best);
    best
}

fn program(n: usize, rows: &[(Vec<i64>, i64)], c: &[i64]) -> LinearProgram {
    let mut lp = LinearProgram::new(c.iter().map(|&x| rat(x)).collect());
    for (i, (a, b)) in rows.iter().enumerate() {
        lp.add_ge(format!("r{i}"), a.iter().map(|&x| rat(x)).collect(), rat(*b));
    }
    for i in 0..n {
        lp.set_lower(i, Some(rat(-BOX)));
        lp.set_upper(i, Some(rat(BOX)));
    }
    lp
}

fn lp_case() -> impl Strategy<Value = (usize, Vec<(Vec<i64>, i64)>, Vec<i64>)> {
    (1usize..=6).prop_flat_map(|n| {
        let row = (prop::collection::vec(-3i64..=3, n), -6i64..=6);
        let rows_max = if n >= 5 { 4 } else { 10 };
        (Just(n), prop::collection::vec(row, 1..=rows_max), prop::collection::vec(-4i64..=4, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boxed_programs_match_vertex_enumeration((n, rows, c) in lp_case()) {
        let lp = program(n, &rows, &c);
        let out = solve(&lp).unwrap();
        prop_assert!(verify_outcome(&lp, &out));
        prop_assert_eq!(&solve(&lp).unwrap(), &out);
        let cr: Vec<Rat> = c.iter().map(|&x| rat(x)).collect();
        match (vertex_oracle(&boxed(n, &rows), &cr), &out) {
            (Some(v), LpOutcome::Optimal { objective_value, x, .. }) => {
                prop_assert_eq!(&v, objective_value);
                let at_x: Rat = cr.iter().zip(x).map(|(p, q)| p * q).sum();
                prop_assert_eq!(&at_x, objective_value);
            }
            (None, LpOutcome::Infeasible { .. }) => {}
            (oracle, got) => prop_assert!(false, "oracle {:?} vs solver {:?}", oracle, got),
        }
    }

    #[test]
    fn free_programs_round_trip((n, rows, c) in lp_case()) {
        let mut lp = LinearProgram::new(c.iter().map(|&x| rat(x)).collect());
        for (i, (a, b)) in rows.iter().enumerate() {
            lp.add_ge(format!("r{i}"), a.iter().map(|&x| rat(x)).collect(), rat(*b));
        }
        let out = solve(&lp).unwrap();
        prop_assert!(verify_outcome(&lp, &out));
        prop_assert_eq!(&solve(&lp).unwrap(), &out);
        if let LpOutcome::Unbounded { improving_ray, .. } = &out {
            let slope: Rat = lp.objective.iter().zip(improving_ray).map(|(p, q)| p * q).sum();
            prop_assert!(slope.is_negative());
        }
        prop_assert_eq!(n, lp.num_vars());
    }
}

#[test]
fn strong_duality_on_a_diet_problem() {
    // min 2x + 3y, x + y >= 4, x + 3y >= 6, x, y >= 0: optimum (3, 1) with value 9
    let mut lp = LinearProgram::new(vec![rat(2), rat(3)]);
    lp.add_ge("a", vec![rat(1), rat(1)], rat(4));
    lp.add_ge("b", vec![rat(1), rat(3)], rat(6));
    lp.nonneg();
    let out = solve(&lp).unwrap();
    assert!(verify_outcome(&lp, &out));
    match out {
        LpOutcome::Optimal { x, objective_value, dual } => {
            assert_eq!(x, vec![rat(3), rat(1)]);
            assert_eq!(objective_value, rat(9));
            let dual_value = &dual["a"] * rat(4) + &dual["b"] * rat(6);
            assert_eq!(dual_value, rat(9));
        }
        other => panic!("expected optimum, got {other:?}"),
    }
}

#[test]
fn equality_rows_and_bounds() {
    // min y + 2z on x + y + z = 3, x - y >= 1, x, y, z in [0, 5]
    let mut lp = LinearProgram::new(vec![rat(0), rat(1), rat(2)]);
    lp.add_eq("sum", vec![rat(1), rat(1), rat(1)], rat(3));
    lp.add_ge("gap", vec![rat(1), rat(-1), rat(0)], rat(1));
    for i in 0..3 {
        lp.set_lower(i, Some(rat(0)));
        lp.set_upper(i, Some(rat(5)));
    }
    let out = solve(&lp).unwrap();
    assert!(verify_outcome(&lp, &out));
    // optimum puts all mass on x
    assert_eq!(out.value(), Some(&rat(0)));
}
