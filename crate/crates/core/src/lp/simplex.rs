//! Bounded revised simplex on `A x + s = b`, `l ≤ (x, s) ≤ u`.
//!
//! Internally always maximises. Every row owns a logical column `s_i` whose
//! bounds encode the row relation. The basis inverse is kept explicitly and
//! rebuilt every [`REFACTOR_EVERY`] pivots.
//!
//! After [`STALL_LIMIT`] consecutive degenerate pivots the primal widens the
//! bounds of the basic columns (the dual shifts nonbasic costs) by a tiny
//! column-dependent amount. The originals are restored once the perturbed
//! problem is solved and the final basis is cleaned up from there. A second
//! stall in the same solve falls back to Bland's rule.

use alloc::vec;
use alloc::vec::Vec;

use super::{LpError, LpModel, LpSolution, LpStatus, Relation, Sense};

const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-11;
const RATIO_TIE: f64 = 1e-12;
const REFACTOR_EVERY: usize = 100;
const STALL_LIMIT: usize = 50;
const PERTURBATION: f64 = 1e-7;
const PERTURBED_ROUNDS: usize = 3;
const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    Numerical,
}

#[derive(Debug, Clone)]
pub(crate) struct Simplex {
    m: usize,
    nstruct: usize,
    ncols: usize,
    col_start: Vec<usize>,
    col_row: Vec<usize>,
    col_val: Vec<f64>,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    /// Model variable → (column, column of the negative part for free variables).
    var_map: Vec<(usize, Option<usize>)>,
    sign: f64,
    basis: Vec<usize>,
    pos: Vec<usize>,
    at_upper: Vec<bool>,
    x: Vec<f64>,
    binv: Vec<f64>,
    since_refactor: usize,
    iterations: u64,
    budget_end: u64,
    stall: usize,
    bland: bool,
    allow_perturb: bool,
    saved_bounds: Option<(Vec<f64>, Vec<f64>)>,
    saved_cost: Option<Vec<f64>>,
}

impl Simplex {
    pub(crate) fn new(model: &LpModel) -> Result<Self, LpError> {
        let m = model.num_constraints();
        let sign = match model.sense() {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        };
        let mut var_map = Vec::with_capacity(model.num_vars());
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut cost = Vec::new();
        for j in 0..model.num_vars() {
            let (l, u) = model.bounds(j);
            let c = sign * model.objective()[j];
            if l.is_finite() || u.is_finite() {
                var_map.push((lower.len(), None));
                lower.push(l);
                upper.push(u);
                cost.push(c);
            } else {
                let plus = lower.len();
                var_map.push((plus, Some(plus + 1)));
                lower.extend([0.0, 0.0]);
                upper.extend([f64::INFINITY, f64::INFINITY]);
                cost.extend([c, -c]);
            }
        }
        let nstruct = lower.len();
        let ncols = nstruct + m;

        let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nstruct];
        for (i, con) in model.constraints().iter().enumerate() {
            for &(j, a) in &con.terms {
                let (plus, minus) = var_map[j];
                columns[plus].push((i, a));
                if let Some(minus) = minus {
                    columns[minus].push((i, -a));
                }
            }
        }
        let mut col_start = Vec::with_capacity(ncols + 1);
        let mut col_row = Vec::new();
        let mut col_val = Vec::new();
        for col in &mut columns {
            col.sort_by_key(|e| e.0);
            col_start.push(col_row.len());
            for &(i, a) in col.iter() {
                if let Some(last) = col_row.last() {
                    if *last == i && col_row.len() > *col_start.last().unwrap() {
                        *col_val.last_mut().unwrap() += a;
                        continue;
                    }
                }
                col_row.push(i);
                col_val.push(a);
            }
        }
        let mut rhs = Vec::with_capacity(m);
        for (i, con) in model.constraints().iter().enumerate() {
            col_start.push(col_row.len());
            col_row.push(i);
            col_val.push(1.0);
            cost.push(0.0);
            let (l, u) = match con.relation {
                Relation::Le => (0.0, f64::INFINITY),
                Relation::Ge => (f64::NEG_INFINITY, 0.0),
                Relation::Eq => (0.0, 0.0),
            };
            lower.push(l);
            upper.push(u);
            rhs.push(con.rhs);
        }
        col_start.push(col_row.len());

        let at_upper = (0..ncols).map(|j| !lower[j].is_finite()).collect();
        let mut s = Simplex {
            m,
            nstruct,
            ncols,
            col_start,
            col_row,
            col_val,
            cost,
            lower,
            upper,
            rhs,
            var_map,
            sign,
            basis: Vec::new(),
            pos: Vec::new(),
            at_upper,
            x: vec![0.0; ncols],
            binv: Vec::new(),
            since_refactor: 0,
            iterations: 0,
            budget_end: u64::MAX,
            stall: 0,
            bland: false,
            allow_perturb: false,
            saved_bounds: None,
            saved_cost: None,
        };
        s.slack_basis();
        Ok(s)
    }

    fn slack_basis(&mut self) {
        let m = self.m;
        self.basis = (self.nstruct..self.ncols).collect();
        self.pos = vec![NONE; self.ncols];
        for (p, &j) in self.basis.iter().enumerate() {
            self.pos[j] = p;
        }
        for j in 0..self.nstruct {
            self.at_upper[j] = !self.lower[j].is_finite();
        }
        self.binv = vec![0.0; m * m];
        for p in 0..m {
            self.binv[p * m + p] = 1.0;
        }
        self.since_refactor = 0;
        self.compute_primal();
    }

    pub(crate) fn iterations(&self) -> u64 {
        self.iterations
    }

    /// Allows `limit` more iterations from now.
    pub(crate) fn set_iteration_budget(&mut self, limit: u64) {
        self.budget_end = self.iterations.saturating_add(limit);
    }

    fn column(&self, j: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.col_start[j], self.col_start[j + 1]);
        (&self.col_row[a..b], &self.col_val[a..b])
    }

    fn col_dot(&self, j: usize, v: &[f64]) -> f64 {
        let (rows, vals) = self.column(j);
        rows.iter().zip(vals).map(|(&i, &a)| a * v[i]).sum()
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        if self.at_upper[j] {
            self.upper[j]
        } else if self.lower[j].is_finite() {
            self.lower[j]
        } else {
            0.0
        }
    }

    fn compute_primal(&mut self) {
        let m = self.m;
        let mut r = self.rhs.clone();
        for j in 0..self.ncols {
            if self.pos[j] != NONE {
                continue;
            }
            let v = self.nonbasic_value(j);
            self.x[j] = v;
            if v != 0.0 {
                let (rows, vals) = self.column(j);
                for (&i, &a) in rows.iter().zip(vals) {
                    r[i] -= a * v;
                }
            }
        }
        for p in 0..m {
            let row = &self.binv[p * m..(p + 1) * m];
            let v: f64 = row.iter().zip(&r).map(|(b, r)| b * r).sum();
            self.x[self.basis[p]] = v;
        }
    }

    fn compute_pi(&self, cb: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut pi = vec![0.0; m];
        for (p, &c) in cb.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let row = &self.binv[p * m..(p + 1) * m];
            for (k, b) in row.iter().enumerate() {
                pi[k] += c * b;
            }
        }
        pi
    }

    fn basic_costs(&self) -> Vec<f64> {
        self.basis.iter().map(|&j| self.cost[j]).collect()
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let (rows, vals) = self.column(j);
        let mut alpha = vec![0.0; m];
        for (p, out) in alpha.iter_mut().enumerate() {
            let row = &self.binv[p * m..(p + 1) * m];
            *out = rows.iter().zip(vals).map(|(&i, &a)| row[i] * a).sum();
        }
        alpha
    }

    /// Rebuilds `B⁻¹` by block elimination: logical basic columns are unit
    /// vectors, so only the square block of structural columns against the
    /// rows whose logical is nonbasic needs a dense inverse. Returns false and
    /// falls back to the slack basis if that block is singular.
    fn refactor(&mut self) -> bool {
        let m = self.m;
        let mut row_in_r = vec![NONE; m];
        let mut r_rows = Vec::new();
        for i in 0..m {
            if self.pos[self.nstruct + i] == NONE {
                row_in_r[i] = r_rows.len();
                r_rows.push(i);
            }
        }
        let t_pos: Vec<usize> = (0..m).filter(|&p| self.basis[p] < self.nstruct).collect();
        let t = t_pos.len();
        if t != r_rows.len() {
            self.slack_basis();
            return false;
        }
        // K0[ri][a] = A[r_rows[ri]][basis[t_pos[a]]]
        let mut k = vec![0.0; t * t];
        for (a, &p) in t_pos.iter().enumerate() {
            let (rows, vals) = self.column(self.basis[p]);
            for (&i, &v) in rows.iter().zip(vals) {
                if row_in_r[i] != NONE {
                    k[row_in_r[i] * t + a] = v;
                }
            }
        }
        let Some(kinv) = invert(&mut k, t) else {
            self.slack_basis();
            return false;
        };
        // kinv[a][ri] with kinv · K0 = I.
        let mut binv = vec![0.0; m * m];
        for (a, &p) in t_pos.iter().enumerate() {
            for (ri, &i) in r_rows.iter().enumerate() {
                binv[p * m + i] = kinv[a * t + ri];
            }
        }
        for p in 0..m {
            let j = self.basis[p];
            if j >= self.nstruct {
                binv[p * m + (j - self.nstruct)] = 1.0;
            }
        }
        for (a, &pa) in t_pos.iter().enumerate() {
            let (rows, vals) = self.column(self.basis[pa]);
            for (&s, &v) in rows.iter().zip(vals) {
                let ps = self.pos[self.nstruct + s];
                if ps == NONE {
                    continue;
                }
                for (ri, &i) in r_rows.iter().enumerate() {
                    binv[ps * m + i] -= v * kinv[a * t + ri];
                }
            }
        }
        self.binv = binv;
        self.since_refactor = 0;
        true
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[f64]) {
        let m = self.m;
        let piv = alpha[r];
        let mut row_r: Vec<f64> = self.binv[r * m..(r + 1) * m].iter().map(|v| v / piv).collect();
        for v in row_r.iter_mut() {
            if v.abs() < 1e-300 {
                *v = 0.0;
            }
        }
        let nz: Vec<usize> = (0..m).filter(|&k| row_r[k] != 0.0).collect();
        for p in 0..m {
            if p == r {
                continue;
            }
            let f = alpha[p];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.binv[p * m..(p + 1) * m];
            for &k in &nz {
                row[k] -= f * row_r[k];
            }
        }
        self.binv[r * m..(r + 1) * m].copy_from_slice(&row_r);
        let leaving = self.basis[r];
        self.pos[leaving] = NONE;
        self.basis[r] = q;
        self.pos[q] = r;
        self.since_refactor += 1;
        if self.since_refactor >= REFACTOR_EVERY {
            self.refactor();
            self.compute_primal();
        }
    }

    /// Deterministic size in `[1, 2)·PERTURBATION` for column `j`.
    fn perturbation(j: usize) -> f64 {
        let h = (j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 54;
        PERTURBATION * (1.0 + h as f64 / 1024.0)
    }

    /// Widens the bounds of every basic column. The current point stays
    /// where it is, so feasibility is unaffected.
    fn perturb_bounds(&mut self) -> bool {
        if !self.allow_perturb || self.saved_bounds.is_some() {
            return false;
        }
        self.saved_bounds = Some((self.lower.clone(), self.upper.clone()));
        for &j in &self.basis {
            let d = Self::perturbation(j);
            if self.lower[j].is_finite() {
                self.lower[j] -= d * (1.0 + self.lower[j].abs());
            }
            if self.upper[j].is_finite() {
                self.upper[j] += d * (1.0 + self.upper[j].abs());
            }
        }
        true
    }

    /// Moves nonbasic costs away from their dual-feasibility boundary.
    fn perturb_costs(&mut self) -> bool {
        if !self.allow_perturb || self.saved_cost.is_some() {
            return false;
        }
        self.saved_cost = Some(self.cost.clone());
        for j in 0..self.ncols {
            if self.pos[j] != NONE || self.is_fixed(j) {
                continue;
            }
            let d = Self::perturbation(j) * (1.0 + self.cost[j].abs());
            if self.at_upper[j] {
                self.cost[j] += d;
            } else {
                self.cost[j] -= d;
            }
        }
        true
    }

    /// Puts back any perturbed data; returns whether there was any.
    fn restore(&mut self) -> bool {
        let mut any = false;
        if let Some((lower, upper)) = self.saved_bounds.take() {
            self.lower = lower;
            self.upper = upper;
            any = true;
        }
        if let Some(cost) = self.saved_cost.take() {
            self.cost = cost;
            any = true;
        }
        if any {
            self.compute_primal();
        }
        any
    }

    fn note_step(&mut self, degenerate: bool) {
        self.iterations += 1;

        if degenerate {
            self.stall += 1;
        } else {
            self.stall = 0;
            self.bland = false;
        }
    }

    fn infeasibility(&self, j: usize) -> f64 {
        let v = self.x[j];
        if v < self.lower[j] - PRIMAL_TOL {
            self.lower[j] - v
        } else if v > self.upper[j] + PRIMAL_TOL {
            v - self.upper[j]
        } else {
            0.0
        }
    }

    fn primal_feasible(&self) -> bool {
        self.basis.iter().all(|&j| self.infeasibility(j) == 0.0)
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.lower[j] == self.upper[j]
    }

    fn dual_feasible(&self, pi: &[f64]) -> bool {
        for j in 0..self.ncols {
            if self.pos[j] != NONE || self.is_fixed(j) {
                continue;
            }
            let d = self.cost[j] - self.col_dot(j, pi);
            if (!self.at_upper[j] && d > DUAL_TOL) || (self.at_upper[j] && d < -DUAL_TOL) {
                return false;
            }
        }
        true
    }

    /// Composite primal simplex. In phase 1 the objective is to reduce the
    /// total bound violation of the basic variables.
    fn primal(&mut self, phase1: bool) -> Status {
        let m = self.m;
        let mut cb = vec![0.0; m];
        loop {
            if self.iterations >= self.budget_end {
                return Status::IterationLimit;
            }
            let mut any_infeasible = false;
            for p in 0..m {
                let j = self.basis[p];
                cb[p] = if phase1 {
                    let v = self.x[j];
                    if v < self.lower[j] - PRIMAL_TOL {
                        any_infeasible = true;
                        1.0
                    } else if v > self.upper[j] + PRIMAL_TOL {
                        any_infeasible = true;
                        -1.0
                    } else {
                        0.0
                    }
                } else {
                    self.cost[j]
                };
            }
            if phase1 && !any_infeasible {
                return Status::Optimal;
            }
            if self.stall >= STALL_LIMIT && !self.bland {
                self.stall = 0;
                if !self.perturb_bounds() {
                    self.bland = true;
                }
            }
            let pi = self.compute_pi(&cb);

            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.ncols {
                if self.pos[j] != NONE || self.is_fixed(j) {
                    continue;
                }
                let c = if phase1 { 0.0 } else { self.cost[j] };
                let d = c - self.col_dot(j, &pi);
                let eligible = if self.at_upper[j] { d < -DUAL_TOL } else { d > DUAL_TOL };
                if !eligible {
                    continue;
                }
                if self.bland {
                    entering = Some((j, d));
                    break;
                }
                if entering.is_none_or(|(_, bd)| d.abs() > bd.abs()) {
                    entering = Some((j, d));
                }
            }
            let Some((q, dq)) = entering else {
                return if phase1 { Status::Infeasible } else { Status::Optimal };
            };
            let dir = if dq > 0.0 { 1.0 } else { -1.0 };
            let alpha = self.ftran(q);

            let mut step = self.upper[q] - self.lower[q];
            let mut leave: Option<(usize, f64, bool)> = None;
            let mut leave_piv = 0.0_f64;
            for p in 0..m {
                let a = alpha[p] * dir;
                if a.abs() < PIVOT_TOL {
                    continue;
                }
                let j = self.basis[p];
                let v = self.x[j];
                let (l, u) = (self.lower[j], self.upper[j]);
                let below = v < l - PRIMAL_TOL;
                let above = v > u + PRIMAL_TOL;
                // x_j moves by −a·t.
                let (limit, target, to_upper) = if a > 0.0 {
                    if phase1 && above {
                        ((v - u) / a, u, true)
                    } else if phase1 && below {
                        continue;
                    } else if l.is_finite() {
                        ((v - l) / a, l, false)
                    } else {
                        continue;
                    }
                } else if phase1 && below {
                    ((l - v) / -a, l, false)
                } else if phase1 && above {
                    continue;
                } else if u.is_finite() {
                    ((u - v) / -a, u, true)
                } else {
                    continue;
                };
                let limit = limit.max(0.0);
                let better = match leave {
                    None => limit < step - RATIO_TIE,
                    Some((lp, _, _)) => {
                        limit < step - RATIO_TIE
                            || (limit <= step + RATIO_TIE
                                && if self.bland { j < self.basis[lp] } else { a.abs() > leave_piv })
                    }
                };
                if better {
                    step = if leave.is_none() || limit < step { limit } else { step };
                    leave = Some((p, target, to_upper));
                    leave_piv = a.abs();
                }
            }
            if leave.is_none() && !step.is_finite() {
                return if phase1 { Status::Numerical } else { Status::Unbounded };
            }
            if step != 0.0 {
                for p in 0..m {
                    if alpha[p] != 0.0 {
                        let j = self.basis[p];
                        self.x[j] -= alpha[p] * dir * step;
                    }
                }
                self.x[q] += dir * step;
            }
            self.note_step(step <= RATIO_TIE);
            match leave {
                None => {
                    self.at_upper[q] = !self.at_upper[q];
                    self.x[q] = self.nonbasic_value(q);
                }
                Some((p, target, to_upper)) => {
                    let j = self.basis[p];
                    self.x[j] = target;
                    self.at_upper[j] = to_upper;
                    self.pivot(p, q, &alpha);
                }
            }
        }
    }

    /// Bounded dual simplex; requires a dual feasible basis.
    fn dual(&mut self) -> Status {
        let m = self.m;
        loop {
            if self.iterations >= self.budget_end {
                return Status::IterationLimit;
            }
            let mut leave: Option<(usize, f64, bool)> = None;
            for p in 0..m {
                let j = self.basis[p];
                let inf = self.infeasibility(j);
                if inf == 0.0 {
                    continue;
                }
                let below = self.x[j] < self.lower[j];
                let better = match leave {
                    None => true,
                    Some((lp, li, _)) => {
                        if self.bland {
                            j < self.basis[lp]
                        } else {
                            inf > li
                        }
                    }
                };
                if better {
                    leave = Some((p, inf, below));
                }
            }
            let Some((r, _, below)) = leave else {
                return Status::Optimal;
            };
            if self.stall >= STALL_LIMIT && !self.bland {
                self.stall = 0;
                if !self.perturb_costs() {
                    self.bland = true;
                }
            }
            let pi = self.compute_pi(&self.basic_costs());
            let rho: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();

            let mut entering: Option<(usize, f64, f64)> = None;
            for j in 0..self.ncols {
                if self.pos[j] != NONE || self.is_fixed(j) {
                    continue;
                }
                let a = self.col_dot(j, &rho);
                if a.abs() < PIVOT_TOL {
                    continue;
                }
                let up = self.at_upper[j];
                let eligible = if below {
                    (!up && a < 0.0) || (up && a > 0.0)
                } else {
                    (!up && a > 0.0) || (up && a < 0.0)
                };
                if !eligible {
                    continue;
                }
                let d = self.cost[j] - self.col_dot(j, &pi);
                let ratio = (d / a).abs();
                let better = match entering {
                    None => true,
                    Some((bj, br, ba)) => {
                        ratio < br - RATIO_TIE
                            || (ratio <= br + RATIO_TIE && if self.bland { j < bj } else { a.abs() > ba })
                    }
                };
                if better {
                    entering = Some((j, ratio, a.abs()));
                }
            }
            let Some((q, ratio, _)) = entering else {
                return Status::Infeasible;
            };
            let alpha = self.ftran(q);
            let piv = alpha[r];
            if piv.abs() < PIVOT_TOL {
                if !self.refactor() {
                    return Status::Numerical;
                }
                self.compute_primal();
                self.iterations += 1;
                continue;
            }
            let jl = self.basis[r];
            let target = if below { self.lower[jl] } else { self.upper[jl] };
            let delta = (self.x[jl] - target) / piv;
            for p in 0..m {
                if alpha[p] != 0.0 {
                    let j = self.basis[p];
                    self.x[j] -= alpha[p] * delta;
                }
            }
            self.x[q] += delta;
            self.note_step(ratio <= RATIO_TIE);
            self.x[jl] = target;
            self.at_upper[jl] = !below;
            self.pivot(r, q, &alpha);
        }
    }

    /// Solves from the current basis.
    pub(crate) fn optimize(&mut self) -> Status {
        // On a singular basis refactor() installs the slack basis instead.
        self.refactor();
        self.compute_primal();
        self.run()
    }

    fn run(&mut self) -> Status {
        let mut round = 0;
        loop {
            self.allow_perturb = round < PERTURBED_ROUNDS;
            round += 1;
            let status = self.run_once();
            let perturbed_costs = self.saved_cost.is_some();
            if !self.restore() {
                return status;
            }
            match status {
                // Optimal: clean up against the original data.
                Status::Optimal => {}
                // Perturbed costs can open a ray the original costs do not.
                Status::Unbounded if perturbed_costs => {}
                // Widened bounds only relax the problem.
                other => return other,
            }
        }
    }

    fn run_once(&mut self) -> Status {
        self.stall = 0;
        self.bland = false;
        let mut status = Status::Numerical;
        for _ in 0..3 {
            if !self.primal_feasible() {
                let pi = self.compute_pi(&self.basic_costs());
                if self.dual_feasible(&pi) {
                    match self.dual() {
                        Status::Optimal => {}
                        Status::Infeasible => {
                            if self.confirm_infeasible() {
                                return Status::Infeasible;
                            }
                        }
                        other => return other,
                    }
                }
                match self.primal(true) {
                    Status::Optimal => {}
                    Status::Infeasible => {
                        if self.confirm_infeasible() {
                            return Status::Infeasible;
                        }
                        continue;
                    }
                    other => return other,
                }
            }
            status = self.primal(false);
            if status != Status::Optimal {
                return status;
            }
            self.refactor();
            self.compute_primal();
            if self.primal_feasible() {
                let pi = self.compute_pi(&self.basic_costs());
                if self.dual_feasible(&pi) {
                    return Status::Optimal;
                }
            }
        }
        status
    }

    /// Recomputes the primal point from a fresh factorisation and checks
    /// the infeasibility survives it.
    fn confirm_infeasible(&mut self) -> bool {
        if self.since_refactor == 0 {
            return true;
        }
        self.refactor();
        self.compute_primal();
        !self.primal_feasible()
    }

    /// Changes the bounds of structural model variable `var` (not free).
    pub(crate) fn set_var_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        let (col, _) = self.var_map[var];
        self.lower[col] = lower;
        self.upper[col] = upper;
    }

    pub(crate) fn var_bounds(&self, var: usize) -> (f64, f64) {
        let (col, _) = self.var_map[var];
        (self.lower[col], self.upper[col])
    }

    /// Re-optimises after bound changes, starting from the current basis.
    /// Nonbasic boxed columns are first moved to the bound their reduced
    /// cost prefers, which keeps the basis dual feasible.
    pub(crate) fn reoptimize(&mut self) -> Status {
        if self.since_refactor > REFACTOR_EVERY / 2 {
            self.refactor();
        }
        let pi = self.compute_pi(&self.basic_costs());
        for j in 0..self.ncols {
            if self.pos[j] != NONE {
                continue;
            }
            if self.is_fixed(j) {
                self.at_upper[j] = false;
            } else if !self.lower[j].is_finite() {
                self.at_upper[j] = true;
            } else if !self.upper[j].is_finite() {
                self.at_upper[j] = false;
            } else {
                let d = self.cost[j] - self.col_dot(j, &pi);
                if d > DUAL_TOL {
                    self.at_upper[j] = true;
                } else if d < -DUAL_TOL {
                    self.at_upper[j] = false;
                }
            }
        }
        self.compute_primal();
        self.run()
    }

    /// Internal (maximised) objective of the current point.
    pub(crate) fn internal_objective(&self) -> f64 {
        (0..self.nstruct).map(|j| self.cost[j] * self.x[j]).sum()
    }

    pub(crate) fn model_values(&self) -> Vec<f64> {
        self.var_map.iter().map(|&(plus, minus)| self.x[plus] - minus.map_or(0.0, |mi| self.x[mi])).collect()
    }

    pub(crate) fn solution(&self, model: &LpModel) -> LpSolution {
        let values = self.model_values();
        let pi = self.compute_pi(&self.basic_costs());
        let duals: Vec<f64> = pi.iter().map(|p| self.sign * p).collect();
        let mut reduced_costs = model.objective().to_vec();
        for (i, con) in model.constraints().iter().enumerate() {
            for &(j, a) in &con.terms {
                reduced_costs[j] -= duals[i] * a;
            }
        }
        LpSolution {
            status: LpStatus::Optimal,
            objective_value: model.objective_value(&values),
            values,
            iterations: self.iterations,
            nodes_explored: 0,
            duals,
            reduced_costs,
        }
    }
}

/// Gauss–Jordan inverse of the `t×t` row-major matrix `a` (destroyed).
fn invert(a: &mut [f64], t: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; t * t];
    for i in 0..t {
        inv[i * t + i] = 1.0;
    }
    for c in 0..t {
        let mut best = c;
        for r in c + 1..t {
            if a[r * t + c].abs() > a[best * t + c].abs() {
                best = r;
            }
        }
        if a[best * t + c].abs() < SINGULAR_TOL {
            return None;
        }
        if best != c {
            for k in 0..t {
                a.swap(c * t + k, best * t + k);
                inv.swap(c * t + k, best * t + k);
            }
        }
        let p = a[c * t + c];
        for k in 0..t {
            a[c * t + k] /= p;
            inv[c * t + k] /= p;
        }
        for r in 0..t {
            if r == c {
                continue;
            }
            let f = a[r * t + c];
            if f == 0.0 {
                continue;
            }
            for k in 0..t {
                a[r * t + k] -= f * a[c * t + k];
                inv[r * t + k] -= f * inv[c * t + k];
            }
        }
    }
    Some(inv)
}
