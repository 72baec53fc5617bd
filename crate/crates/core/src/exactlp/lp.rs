//! Exact two-phase simplex with certificates.
//!
//! The solver works on the dual of the user's program, which is already in
//! equality standard form (one equation per primal variable). This keeps the
//! tableau narrow when there are many more rows than variables, which is the
//! common shape here, and gives all three certificates directly:
//! dual-unbounded means primal-infeasible (Farkas vector), phase-one failure
//! means a primal improving ray exists, and the optimal simplex multipliers
//! are the primal solution.

use super::rat::{dot, serde_rat, serde_rat_map, serde_rat_vec, Rat};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("row {label:?} has {got} coefficients, expected {expected}")]
    DimensionMismatch { label: String, got: usize, expected: usize },
    #[error("bound vectors have length {got}, expected {expected}")]
    BoundLength { got: usize, expected: usize },
    #[error("duplicate row label {0:?}")]
    DuplicateLabel(String),
}

/// A labeled linear row `coeffs . x (>= or =) rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    #[serde(with = "serde_rat_vec")]
    pub coeffs: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub rhs: Rat,
}

impl Row {
    pub fn new(label: impl Into<String>, coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Row { label: label.into(), coeffs, rhs }
    }

    pub fn slack(&self, x: &[Rat]) -> Rat {
        dot(&self.coeffs, x) - &self.rhs
    }
}

/// `minimize objective . x` subject to labeled `>=` rows, `=` rows and optional bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rat>,
    pub ge_rows: Vec<Row>,
    pub eq_rows: Vec<Row>,
    pub lower: Vec<Option<Rat>>,
    pub upper: Vec<Option<Rat>>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rat>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            ge_rows: Vec::new(),
            eq_rows: Vec::new(),
            lower: vec![None; n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_ge(&mut self, label: impl Into<String>, coeffs: Vec<Rat>, rhs: Rat) -> &mut Self {
        self.ge_rows.push(Row::new(label, coeffs, rhs));
        self
    }

    pub fn add_eq(&mut self, label: impl Into<String>, coeffs: Vec<Rat>, rhs: Rat) -> &mut Self {
        self.eq_rows.push(Row::new(label, coeffs, rhs));
        self
    }

    pub fn set_lower(&mut self, var: usize, value: Option<Rat>) -> &mut Self {
        self.lower[var] = value;
        self
    }

    pub fn set_upper(&mut self, var: usize, value: Option<Rat>) -> &mut Self {
        self.upper[var] = value;
        self
    }

    /// Marks every variable as nonnegative.
    pub fn nonneg(&mut self) -> &mut Self {
        for l in self.lower.iter_mut() {
            *l = Some(Rat::zero());
        }
        self
    }

    /// All inequality rows including those generated by bounds (`lb[i]`, `ub[i]`).
    pub fn all_ge_rows(&self) -> Vec<Row> {
        let n = self.num_vars();
        let mut rows = self.ge_rows.clone();
        let unit = |i: usize, v: Rat| {
            let mut a = vec![Rat::zero(); n];
            a[i] = v;
            a
        };
        for i in 0..n {
            if let Some(l) = self.lower.get(i).cloned().flatten() {
                rows.push(Row::new(format!("lb[{i}]"), unit(i, Rat::one()), l));
            }
            if let Some(u) = self.upper.get(i).cloned().flatten() {
                rows.push(Row::new(format!("ub[{i}]"), unit(i, -Rat::one()), -u));
            }
        }
        rows
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        for side in [&self.lower, &self.upper] {
            if side.len() != n {
                return Err(LpError::BoundLength { got: side.len(), expected: n });
            }
        }
        let mut seen = BTreeSet::new();
        for row in self.all_ge_rows().iter().chain(&self.eq_rows) {
            if row.coeffs.len() != n {
                return Err(LpError::DimensionMismatch {
                    label: row.label.clone(),
                    got: row.coeffs.len(),
                    expected: n,
                });
            }
            if !seen.insert(row.label.clone()) {
                return Err(LpError::DuplicateLabel(row.label.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LpOutcome {
    Optimal {
        #[serde(with = "serde_rat_vec")]
        x: Vec<Rat>,
        #[serde(with = "serde_rat")]
        objective_value: Rat,
        #[serde(with = "serde_rat_map")]
        dual: BTreeMap<String, Rat>,
    },
    Unbounded {
        #[serde(with = "serde_rat_vec")]
        feasible_point: Vec<Rat>,
        #[serde(with = "serde_rat_vec")]
        improving_ray: Vec<Rat>,
    },
    Infeasible {
        #[serde(with = "serde_rat_map")]
        farkas: BTreeMap<String, Rat>,
    },
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn value(&self) -> Option<&Rat> {
        match self {
            LpOutcome::Optimal { objective_value, .. } => Some(objective_value),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    cost_row: Vec<Rat>,
    basis: Vec<usize>,
    width: usize,
}

enum Run {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rat {
        &self.rows[r][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x /= &p;
                }
            }
        }
        let prow = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..=self.width).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        }
        let f = self.cost_row[c].clone();
        if !f.is_zero() {
            for &j in &nz {
                self.cost_row[j] -= &f * &prow[j];
            }
        }
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    fn price(&mut self, costs: &[Rat]) {
        let mut cr: Vec<Rat> = costs.to_vec();
        cr.push(Rat::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, x) in self.rows[r].iter().enumerate() {
                if !x.is_zero() {
                    cr[j] -= cb * x;
                }
            }
        }
        self.cost_row = cr;
    }

    /// Maximizes with Bland's rule over columns accepted by `allowed`.
    fn run(&mut self, allowed: &dyn Fn(usize) -> bool) -> Run {
        loop {
            let entering = (0..self.width).find(|&j| allowed(j) && self.cost_row[j].is_positive());
            let Some(c) = entering else { return Run::Optimal };
            let mut best: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                best = match best {
                    None => Some((r, ratio)),
                    Some((br, bv)) => {
                        if ratio < bv || (ratio == bv && self.basis[r] < self.basis[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, bv))
                        }
                    }
                };
            }
            match best {
                None => return Run::Unbounded(c),
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn column_values(&self, ncols: usize) -> Vec<Rat> {
        let mut w = vec![Rat::zero(); ncols];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < ncols {
                w[b] = self.rhs(r).clone();
            }
        }
        w
    }
}

/// Solves the program exactly; deterministic for a fixed input order.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let ge = lp.all_ge_rows();
    let eq = &lp.eq_rows;
    let n = lp.num_vars();
    let mg = ge.len();
    let me = eq.len();
    // Dual columns: y_k (ge rows), z+_k, z-_k (eq rows), then one artificial per variable.
    let ncols = mg + 2 * me;
    let width = ncols + n;
    let mut flip = vec![false; n];
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let neg = lp.objective[i].is_negative();
        flip[i] = neg;
        let s = |x: &Rat| if neg { -x.clone() } else { x.clone() };
        let mut row = Vec::with_capacity(width + 1);
        for g in &ge {
            row.push(s(&g.coeffs[i]));
        }
        for e in eq {
            row.push(s(&e.coeffs[i]));
        }
        for e in eq {
            row.push(-s(&e.coeffs[i]));
        }
        for a in 0..n {
            row.push(if a == i { Rat::one() } else { Rat::zero() });
        }
        row.push(s(&lp.objective[i]));
        rows.push(row);
    }
    let mut t = Tableau { rows, cost_row: Vec::new(), basis: (ncols..width).collect(), width };

    let mut phase1 = vec![Rat::zero(); width];
    for c in phase1.iter_mut().skip(ncols) {
        *c = -Rat::one();
    }
    t.price(&phase1);
    let run = t.run(&|j| j < width);
    debug_assert!(matches!(run, Run::Optimal));
    let phase1_value = -t.cost_row[width].clone();
    if phase1_value.is_negative() {
        // Multipliers of phase one give a direction d with G d >= 0, E d = 0, c.d < 0.
        let ray: Vec<Rat> = (0..n)
            .map(|i| {
                let pi = -Rat::one() - &t.cost_row[ncols + i];
                if flip[i] {
                    -pi
                } else {
                    pi
                }
            })
            .collect();
        let mut zero_obj = lp.clone();
        zero_obj.objective = vec![Rat::zero(); n];
        return match solve(&zero_obj)? {
            LpOutcome::Optimal { x, .. } => Ok(LpOutcome::Unbounded { feasible_point: x, improving_ray: ray }),
            other => Ok(other),
        };
    }

    for r in 0..n {
        if t.basis[r] >= ncols {
            if let Some(c) = (0..ncols).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, c);
            }
        }
    }
    let mut phase2 = vec![Rat::zero(); width];
    for (k, g) in ge.iter().enumerate() {
        phase2[k] = g.rhs.clone();
    }
    for (k, e) in eq.iter().enumerate() {
        phase2[mg + k] = e.rhs.clone();
        phase2[mg + me + k] = -e.rhs.clone();
    }
    t.price(&phase2);
    match t.run(&|j| j < ncols) {
        Run::Unbounded(c) => {
            let mut w = vec![Rat::zero(); ncols];
            w[c] = Rat::one();
            for (r, &b) in t.basis.iter().enumerate() {
                if b < ncols {
                    w[b] = -t.rows[r][c].clone();
                }
            }
            let mut farkas = BTreeMap::new();
            for (k, g) in ge.iter().enumerate() {
                farkas.insert(g.label.clone(), w[k].clone());
            }
            for (k, e) in eq.iter().enumerate() {
                farkas.insert(e.label.clone(), &w[mg + k] - &w[mg + me + k]);
            }
            Ok(LpOutcome::Infeasible { farkas })
        }
        Run::Optimal => {
            let x: Vec<Rat> = (0..n)
                .map(|i| {
                    let pi = -t.cost_row[ncols + i].clone();
                    if flip[i] {
                        -pi
                    } else {
                        pi
                    }
                })
                .collect();
            let w = t.column_values(ncols);
            let mut dual = BTreeMap::new();
            for (k, g) in ge.iter().enumerate() {
                dual.insert(g.label.clone(), w[k].clone());
            }
            for (k, e) in eq.iter().enumerate() {
                dual.insert(e.label.clone(), &w[mg + k] - &w[mg + me + k]);
            }
            let objective_value = dot(&lp.objective, &x);
            Ok(LpOutcome::Optimal { x, objective_value, dual })
        }
    }
}

fn feasible(ge: &[Row], eq: &[Row], x: &[Rat]) -> bool {
    ge.iter().all(|r| !r.slack(x).is_negative()) && eq.iter().all(|r| r.slack(x).is_zero())
}

/// Re-checks every identity the outcome claims, independently of the solver.
pub fn verify_outcome(lp: &LinearProgram, outcome: &LpOutcome) -> bool {
    if lp.validate().is_err() {
        return false;
    }
    let n = lp.num_vars();
    let ge = lp.all_ge_rows();
    let eq = &lp.eq_rows;
    match outcome {
        LpOutcome::Optimal { x, objective_value, dual } => {
            if x.len() != n || !feasible(&ge, eq, x) || dot(&lp.objective, x) != *objective_value {
                return false;
            }
            let labels: BTreeSet<&String> = ge.iter().chain(eq).map(|r| &r.label).collect();
            if dual.keys().any(|k| !labels.contains(k)) {
                return false;
            }
            let zero = Rat::zero();
            let mut combo = vec![Rat::zero(); n];
            let mut dual_value = Rat::zero();
            for r in &ge {
                let y = dual.get(&r.label).unwrap_or(&zero);
                if y.is_negative() {
                    return false;
                }
                if !y.is_zero() && !r.slack(x).is_zero() {
                    return false;
                }
                for (c, a) in combo.iter_mut().zip(&r.coeffs) {
                    *c += y * a;
                }
                dual_value += y * &r.rhs;
            }
            for r in eq {
                let z = dual.get(&r.label).unwrap_or(&zero);
                for (c, a) in combo.iter_mut().zip(&r.coeffs) {
                    *c += z * a;
                }
                dual_value += z * &r.rhs;
            }
            combo == lp.objective && dual_value == *objective_value
        }
        LpOutcome::Unbounded { feasible_point, improving_ray } => {
            if feasible_point.len() != n || improving_ray.len() != n || !feasible(&ge, eq, feasible_point) {
                return false;
            }
            ge.iter().all(|r| !dot(&r.coeffs, improving_ray).is_negative())
                && eq.iter().all(|r| dot(&r.coeffs, improving_ray).is_zero())
                && dot(&lp.objective, improving_ray).is_negative()
        }
        LpOutcome::Infeasible { farkas } => {
            let labels: BTreeSet<&String> = ge.iter().chain(eq).map(|r| &r.label).collect();
            if farkas.keys().any(|k| !labels.contains(k)) {
                return false;
            }
            let zero = Rat::zero();
            let mut combo = vec![Rat::zero(); n];
            let mut rhs = Rat::zero();
            for r in &ge {
                let w = farkas.get(&r.label).unwrap_or(&zero);
                if w.is_negative() {
                    return false;
                }
                for (c, a) in combo.iter_mut().zip(&r.coeffs) {
                    *c += w * a;
                }
                rhs += w * &r.rhs;
            }
            for r in eq {
                let w = farkas.get(&r.label).unwrap_or(&zero);
                for (c, a) in combo.iter_mut().zip(&r.coeffs) {
                    *c += w * a;
                }
                rhs += w * &r.rhs;
            }
            combo.iter().all(Zero::is_zero) && rhs.is_positive()
        }
    }
}
