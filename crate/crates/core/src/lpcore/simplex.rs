//! Bounded-variable primal revised simplex.
//!
//! Every row `i` gets a logical column `s_i` with `a_i x - s_i = 0` and
//! `s_i` bounded by the row's activity range, so the start basis is all
//! logicals and no artificial columns are needed. Phase 1 minimizes the sum of
//! bound infeasibilities of the basic variables from whatever basis it is
//! given, which also makes warm starts from a neighbouring model's basis work
//! after bound changes.
//!
//! Pricing is normalized Dantzig (reduced cost over static column norm) with a
//! Harris two-pass ratio test. After `STALL_LIMIT` consecutive degenerate
//! pivots the solver switches to Bland's rule until the objective moves again.
//!
//! When the start basis can be made dual feasible by moving boxed nonbasic
//! columns to their other bound (always the case after bound changes on an
//! optimal basis, and for the all-logical basis of a model with nonnegative
//! costs), a dual simplex phase runs first. It picks the leaving row by dual
//! steepest edge and works on slightly perturbed costs so that the many
//! zero-cost flow columns do not tie. The primal loop always runs last, on the
//! true costs, and certifies the result.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lu::{factor, LuFactors};
use super::{Basis, LpError, LpModel, LpSolution, LpStatus, VarStatus};

pub const FEAS_TOL: f64 = 1e-8;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const HARRIS_DELTA: f64 = 5e-9;
const REFACTOR_EVERY: usize = 80;
const STALL_LIMIT: usize = 60;
/// Consecutive dual-degenerate pivots after which the dual phase hands over
/// to the primal loop.
const DUAL_STALL_LIMIT: usize = 300;
const WEIGHT_FLOOR: f64 = 1e-6;
const PERTURB_ABS: f64 = 1e-7;
const PERTURB_REL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic,
    Lower,
    Upper,
    /// Nonbasic free column held at zero.
    Zero,
}

struct Standard {
    /// Structural column count.
    n: usize,
    /// Row count after empty rows are dropped.
    m: usize,
    cols: Vec<Vec<(usize, f64)>>,
    norms: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
}

impl Standard {
    fn from_model(model: &LpModel) -> Result<Self, LpStatus> {
        let n = model.num_vars();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut row_lo = Vec::new();
        let mut row_hi = Vec::new();
        for row in model.rows() {
            let (lo, hi) = row.activity_bounds();
            if row.coeffs.iter().all(|&(_, a)| a == 0.0) {
                // empty row: only its feasibility matters
                if lo > FEAS_TOL || hi < -FEAS_TOL {
                    return Err(LpStatus::Infeasible);
                }
                continue;
            }
            let r = row_lo.len();
            for &(v, a) in &row.coeffs {
                if a != 0.0 {
                    cols[v.0].push((r, a));
                }
            }
            row_lo.push(lo);
            row_hi.push(hi);
        }
        let m = row_lo.len();
        // merge duplicate entries within a column
        for col in &mut cols {
            col.sort_by_key(|e| e.0);
            col.dedup_by(|b, a| {
                if a.0 == b.0 {
                    a.1 += b.1;
                    true
                } else {
                    false
                }
            });
            col.retain(|e| e.1 != 0.0);
        }
        let norms = cols
            .iter()
            .map(|c| (1.0 + c.iter().map(|e| e.1 * e.1).sum::<f64>()).sqrt())
            .chain(std::iter::repeat_n(2f64.sqrt(), m))
            .collect();
        let mut lower: Vec<f64> = model.vars().iter().map(|v| v.lower).collect();
        let mut upper: Vec<f64> = model.vars().iter().map(|v| v.upper).collect();
        lower.extend(row_lo);
        upper.extend(row_hi);
        let mut cost: Vec<f64> = model.vars().iter().map(|v| v.objective).collect();
        cost.extend(std::iter::repeat_n(0.0, m));
        Ok(Standard { n, m, cols, norms, lower, upper, cost })
    }

    fn column(&self, j: usize) -> Vec<(usize, f64)> {
        if j < self.n {
            self.cols[j].clone()
        } else {
            vec![(j - self.n, -1.0)]
        }
    }

    /// `y^T a_j`
    fn dot(&self, y: &[f64], j: usize) -> f64 {
        if j < self.n {
            self.cols[j].iter().map(|&(r, a)| a * y[r]).sum()
        } else {
            -y[j - self.n]
        }
    }

    fn scatter(&self, j: usize, scale: f64, out: &mut [f64]) {
        if j < self.n {
            for &(r, a) in &self.cols[j] {
                out[r] += scale * a;
            }
        } else {
            out[j - self.n] -= scale;
        }
    }
}

/// Options for [`solve_with`].
#[derive(Debug, Clone, Default)]
pub struct SolveOptions<'a> {
    /// Basis of a model with the same shape (typically the same model with
    /// different bounds). Ignored when the shapes do not match.
    pub warm_start: Option<&'a Basis>,
    /// Overrides the default iteration limit.
    pub iteration_limit: Option<usize>,
}

struct Simplex<'a> {
    sf: &'a Standard,
    basis: Vec<usize>,
    state: Vec<State>,
    x: Vec<f64>,
    lu: LuFactors,
    iterations: usize,
    /// Working costs; perturbed during the dual phase.
    cost: Vec<f64>,
}

fn nonbasic_state(lower: f64, upper: f64) -> (State, f64) {
    if lower.is_finite() {
        (State::Lower, lower)
    } else if upper.is_finite() {
        (State::Upper, upper)
    } else {
        (State::Zero, 0.0)
    }
}

impl<'a> Simplex<'a> {
    fn new(sf: &'a Standard, warm: Option<&Basis>) -> Result<Self, LpError> {
        let total = sf.n + sf.m;
        let mut state = vec![State::Lower; total];
        let mut x = vec![0.0; total];
        let warm = warm.filter(|b| {
            b.status.len() == total && b.status.iter().filter(|s| **s == VarStatus::Basic).count() == sf.m
        });
        let mut basis = Vec::with_capacity(sf.m);
        for j in 0..total {
            let (lo, hi) = (sf.lower[j], sf.upper[j]);
            let wanted = match warm {
                Some(b) => b.status[j],
                None if j >= sf.n => VarStatus::Basic,
                None => VarStatus::AtLower,
            };
            let (st, val) = match wanted {
                VarStatus::Basic => (State::Basic, 0.0),
                VarStatus::AtUpper if hi.is_finite() => (State::Upper, hi),
                VarStatus::AtLower if lo.is_finite() => (State::Lower, lo),
                _ => nonbasic_state(lo, hi),
            };
            if st == State::Basic {
                basis.push(j);
            }
            state[j] = st;
            x[j] = val;
        }
        let lu = LuFactors::placeholder(sf.m);
        let mut s = Simplex { sf, basis, state, x, lu, iterations: 0, cost: sf.cost.clone() };
        s.refactor()?;
        Ok(s)
    }

    /// Refactors the basis, repairing singularity with logical columns, and
    /// recomputes the basic values from the nonbasic ones.
    fn refactor(&mut self) -> Result<(), LpError> {
        for _ in 0..=self.sf.m {
            let cols: Vec<Vec<(usize, f64)>> = self.basis.iter().map(|&j| self.sf.column(j)).collect();
            match factor(self.sf.m, &cols) {
                Ok(lu) => {
                    self.lu = lu;
                    self.recompute_basic();
                    return Ok(());
                }
                Err(sing) => {
                    for (pos, row) in sing.pairs {
                        let out = self.basis[pos];
                        let logical = self.sf.n + row;
                        // park the dropped column at the bound nearest its value
                        let (st, val) = nearest_bound(self.x[out], self.sf.lower[out], self.sf.upper[out])
                            .unwrap_or((State::Zero, 0.0));
                        self.state[out] = st;
                        self.x[out] = val;
                        self.basis[pos] = logical;
                        self.state[logical] = State::Basic;
                    }
                }
            }
        }
        Err(LpError::Numerical("basis repair did not converge".into()))
    }

    fn recompute_basic(&mut self) {
        let mut rhs = vec![0.0; self.sf.m];
        for j in 0..self.sf.n + self.sf.m {
            if self.state[j] != State::Basic && self.x[j] != 0.0 {
                self.sf.scatter(j, -self.x[j], &mut rhs);
            }
        }
        let xb = self.lu.ftran(&mut rhs);
        for (pos, &j) in self.basis.iter().enumerate() {
            self.x[j] = xb[pos];
        }
    }

    fn reduced_cost(&self, y: &[f64], j: usize) -> f64 {
        self.cost[j] - self.sf.dot(y, j)
    }

    fn phase_two_duals(&self) -> Vec<f64> {
        let mut cb: Vec<f64> = self.basis.iter().map(|&j| self.cost[j]).collect();
        self.lu.btran(&mut cb)
    }

    /// Moves boxed nonbasic columns to the bound their reduced cost prefers.
    /// Returns false when an unboxed column has a wrong-signed reduced cost.
    fn make_dual_feasible(&mut self) -> bool {
        let y = self.phase_two_duals();
        let mut moved = false;
        for j in 0..self.sf.n + self.sf.m {
            let (lo, hi) = (self.sf.lower[j], self.sf.upper[j]);
            if self.state[j] == State::Basic || lo == hi {
                continue;
            }
            let d = self.reduced_cost(&y, j);
            match self.state[j] {
                State::Lower if d < -DUAL_TOL => {
                    if !hi.is_finite() {
                        return false;
                    }
                    self.state[j] = State::Upper;
                    self.x[j] = hi;
                    moved = true;
                }
                State::Upper if d > DUAL_TOL => {
                    if !lo.is_finite() {
                        return false;
                    }
                    self.state[j] = State::Lower;
                    self.x[j] = lo;
                    moved = true;
                }
                State::Zero if d.abs() > DUAL_TOL => return false,
                _ => {}
            }
        }
        if moved {
            self.recompute_basic();
        }
        true
    }

    /// Shifts every nonbasic cost away from zero reduced cost in the
    /// direction its bound already prefers, breaking the dual ties that flow
    /// columns with zero cost otherwise produce.
    fn perturb_costs(&mut self) {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for j in 0..self.sf.n + self.sf.m {
            let delta = (PERTURB_ABS + PERTURB_REL * self.cost[j].abs()) * (1.0 + rng.random::<f64>());
            match self.state[j] {
                State::Lower => self.cost[j] += delta,
                State::Upper => self.cost[j] -= delta,
                _ => {}
            }
        }
    }

    /// Dual simplex from a dual feasible basis. Returns `Some(Infeasible)`
    /// on a proof of primal infeasibility and `None` when primal feasibility
    /// is reached or the phase gives up; the primal loop finishes either way.
    fn run_dual(&mut self, limit: usize) -> Result<Option<LpStatus>, LpError> {
        let total = self.sf.n + self.sf.m;
        let mut degenerate_run = 0usize;
        let mut fresh = false;
        // reference weights start at 1 and become exact for each row as it
        // is chosen
        let mut weights = vec![1.0; self.sf.m];
        loop {
            if self.iterations >= limit {
                return Err(LpError::IterationLimit(limit));
            }
            if self.lu.num_etas() >= REFACTOR_EVERY {
                self.refactor()?;
                fresh = true;
            }

            // leaving row: dual steepest edge on the bound violation
            let mut leave: Option<(usize, f64)> = None;
            let mut best_score = 0.0;
            for (pos, &j) in self.basis.iter().enumerate() {
                let v = self.x[j];
                let (lo, hi) = (self.sf.lower[j], self.sf.upper[j]);
                let (viol, sign) = if lo - v > FEAS_TOL {
                    (lo - v, 1.0)
                } else if v - hi > FEAS_TOL {
                    (v - hi, -1.0)
                } else {
                    continue;
                };
                let score = viol * viol / weights[pos];
                if score > best_score {
                    best_score = score;
                    leave = Some((pos, sign));
                }
            }
            let Some((r, sign)) = leave else {
                return Ok(None);
            };

            let y = self.phase_two_duals();
            let mut unit = vec![0.0; self.sf.m];
            unit[r] = 1.0;
            let rho = self.lu.btran(&mut unit);
            weights[r] = rho.iter().map(|v| v * v).sum::<f64>().max(WEIGHT_FLOOR);

            struct Cand {
                j: usize,
                a: f64,
                ratio: f64,
            }
            let mut cands = Vec::new();
            let mut relaxed_min = f64::INFINITY;
            for j in 0..total {
                let st = self.state[j];
                if st == State::Basic || self.sf.lower[j] == self.sf.upper[j] {
                    continue;
                }
                let a = self.sf.dot(&rho, j);
                if a.abs() <= PIVOT_TOL {
                    continue;
                }
                let d = self.reduced_cost(&y, j);
                let slack = match st {
                    State::Lower if sign * a < 0.0 => d,
                    State::Upper if sign * a > 0.0 => -d,
                    State::Zero => 0.0,
                    _ => continue,
                }
                .max(0.0);
                relaxed_min = relaxed_min.min((slack + HARRIS_DELTA) / a.abs());
                cands.push(Cand { j, a, ratio: slack / a.abs() });
            }
            if cands.is_empty() {
                if !fresh {
                    self.refactor()?;
                    fresh = true;
                    continue;
                }
                return Ok(Some(LpStatus::Infeasible));
            }
            let mut best: Option<&Cand> = None;
            for c in cands.iter().filter(|c| c.ratio <= relaxed_min) {
                if best.is_none_or(|b| c.a.abs() > b.a.abs()) {
                    best = Some(c);
                }
            }
            let chosen = best.unwrap_or_else(|| cands.iter().min_by(|a, b| a.ratio.total_cmp(&b.ratio)).expect("non-empty"));
            let (q, a_rq, dual_step) = (chosen.j, chosen.a, chosen.ratio);

            let mut col = vec![0.0; self.sf.m];
            self.sf.scatter(q, 1.0, &mut col);
            let alpha = self.lu.ftran(&mut col);
            if (alpha[r] - a_rq).abs() > 1e-7 * (1.0 + a_rq.abs()) || alpha[r].abs() <= PIVOT_TOL {
                if fresh {
                    // row and column disagree on a fresh factorization
                    return Ok(None);
                }
                self.refactor()?;
                fresh = true;
                continue;
            }

            let mut tau = rho.clone();
            let tau = self.lu.ftran(&mut tau);
            let (ar, wr) = (alpha[r], weights[r]);
            for (pos, w) in weights.iter_mut().enumerate() {
                let a = alpha[pos];
                if pos != r && a != 0.0 {
                    let k = a / ar;
                    *w = (*w - 2.0 * k * tau[pos] + k * k * wr).max(WEIGHT_FLOOR);
                }
            }
            weights[r] = (wr / (ar * ar)).max(WEIGHT_FLOOR);

            let out = self.basis[r];
            let bound = if sign > 0.0 { self.sf.lower[out] } else { self.sf.upper[out] };
            let theta = (self.x[out] - bound) / alpha[r];
            self.x[q] += theta;
            for (pos, &j) in self.basis.iter().enumerate() {
                if alpha[pos] != 0.0 {
                    self.x[j] -= theta * alpha[pos];
                }
            }
            self.state[out] = if sign > 0.0 { State::Lower } else { State::Upper };
            self.x[out] = bound;
            self.basis[r] = q;
            self.state[q] = State::Basic;
            self.lu.push_eta(r, &alpha);
            self.iterations += 1;
            fresh = false;

            if dual_step <= 1e-12 {
                degenerate_run += 1;
                if degenerate_run > DUAL_STALL_LIMIT {
                    return Ok(None);
                }
            } else {
                degenerate_run = 0;
            }
        }
    }

    fn infeasibility(&self, j: usize) -> f64 {
        let v = self.x[j];
        (self.sf.lower[j] - v).max(v - self.sf.upper[j]).max(0.0)
    }

    fn run(&mut self, limit: usize) -> Result<LpStatus, LpError> {
        let total = self.sf.n + self.sf.m;
        let mut degenerate_run = 0usize;
        let mut bland = false;
        loop {
            if self.iterations >= limit {
                return Err(LpError::IterationLimit(limit));
            }
            if self.lu.num_etas() >= REFACTOR_EVERY {
                self.refactor()?;
            }

            // phase selection from current basic values
            let mut cb = vec![0.0; self.sf.m];
            let mut phase_one = false;
            for (pos, &j) in self.basis.iter().enumerate() {
                let v = self.x[j];
                if v < self.sf.lower[j] - FEAS_TOL {
                    cb[pos] = -1.0;
                    phase_one = true;
                } else if v > self.sf.upper[j] + FEAS_TOL {
                    cb[pos] = 1.0;
                    phase_one = true;
                }
            }
            if !phase_one {
                for (pos, &j) in self.basis.iter().enumerate() {
                    cb[pos] = self.cost[j];
                }
            }
            let y = self.lu.btran(&mut cb);

            // pricing
            let mut entering: Option<(usize, f64)> = None;
            let mut best_score = 0.0;
            for j in 0..total {
                let st = self.state[j];
                if st == State::Basic || self.sf.lower[j] == self.sf.upper[j] {
                    continue;
                }
                let c = if phase_one { 0.0 } else { self.cost[j] };
                let d = c - self.sf.dot(&y, j);
                let eligible = match st {
                    State::Lower => d < -DUAL_TOL,
                    State::Upper => d > DUAL_TOL,
                    State::Zero => d.abs() > DUAL_TOL,
                    State::Basic => false,
                };
                if !eligible {
                    continue;
                }
                if bland {
                    entering = Some((j, d));
                    break;
                }
                let score = d.abs() / self.sf.norms[j];
                if score > best_score {
                    best_score = score;
                    entering = Some((j, d));
                }
            }

            let Some((q, dq)) = entering else {
                if self.lu.num_etas() > 0 {
                    // confirm on a fresh factorization before stopping
                    self.refactor()?;
                    continue;
                }
                if phase_one {
                    return Ok(LpStatus::Infeasible);
                }
                return Ok(LpStatus::Optimal);
            };

            let mut col = vec![0.0; self.sf.m];
            self.sf.scatter(q, 1.0, &mut col);
            let alpha = self.lu.ftran(&mut col);
            let dir = match self.state[q] {
                State::Lower => 1.0,
                State::Upper => -1.0,
                _ => {
                    if dq < 0.0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };

            let (leave, theta) = self.ratio_test(&alpha, dir, phase_one, bland);
            let span = self.sf.upper[q] - self.sf.lower[q];
            self.iterations += 1;

            let flip = match leave {
                Some(_) => span <= theta,
                None => span.is_finite(),
            };
            if leave.is_none() && !flip {
                if phase_one {
                    // a phase-1 ray means the factorization drifted
                    self.refactor()?;
                    degenerate_run = 0;
                    continue;
                }
                return Ok(LpStatus::Unbounded);
            }
            let step = if flip { span } else { theta };

            if step > 0.0 {
                self.x[q] += dir * step;
                for (pos, &j) in self.basis.iter().enumerate() {
                    if alpha[pos] != 0.0 {
                        self.x[j] -= dir * step * alpha[pos];
                    }
                }
            }
            if flip {
                self.state[q] = if dir > 0.0 { State::Upper } else { State::Lower };
                self.x[q] = if dir > 0.0 { self.sf.upper[q] } else { self.sf.lower[q] };
            } else {
                let (pos, at_upper) = leave.expect("pivot row");
                let out = self.basis[pos];
                if at_upper {
                    self.state[out] = State::Upper;
                    self.x[out] = self.sf.upper[out];
                } else {
                    self.state[out] = State::Lower;
                    self.x[out] = self.sf.lower[out];
                }
                self.basis[pos] = q;
                self.state[q] = State::Basic;
                self.lu.push_eta(pos, &alpha);
            }

            if step * dq.abs() <= 1e-12 {
                degenerate_run += 1;
                if degenerate_run > STALL_LIMIT {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
                bland = false;
            }
        }
    }

    /// Returns the blocking basis position (and whether it leaves at its upper
    /// bound) together with the step length.
    fn ratio_test(&self, alpha: &[f64], dir: f64, phase_one: bool, bland: bool) -> (Option<(usize, bool)>, f64) {
        struct Cand {
            pos: usize,
            exact: f64,
            at_upper: bool,
            mag: f64,
        }
        let mut cands = Vec::new();
        let mut relaxed_min = f64::INFINITY;
        for (pos, &j) in self.basis.iter().enumerate() {
            let a = alpha[pos];
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let rate = -dir * a;
            let v = self.x[j];
            let (lo, hi) = (self.sf.lower[j], self.sf.upper[j]);
            let below = v < lo - FEAS_TOL;
            let above = v > hi + FEAS_TOL;
            let hit = if phase_one && below {
                // moves toward feasibility: stop on entering the box
                (rate > 0.0).then(|| ((lo - v) / rate, false, (lo - v) / rate))
            } else if phase_one && above {
                (rate < 0.0).then(|| ((hi - v) / rate, true, (hi - v) / rate))
            } else if rate < 0.0 {
                lo.is_finite().then(|| ((v - lo) / -rate, false, (v - lo + HARRIS_DELTA) / -rate))
            } else {
                hi.is_finite().then(|| ((hi - v) / rate, true, (hi - v + HARRIS_DELTA) / rate))
            };
            if let Some((exact, at_upper, relaxed)) = hit {
                let exact = exact.max(0.0);
                relaxed_min = relaxed_min.min(relaxed);
                cands.push(Cand { pos, exact, at_upper, mag: a.abs() });
            }
        }
        if cands.is_empty() {
            return (None, f64::INFINITY);
        }
        if bland {
            let min = cands.iter().map(|c| c.exact).fold(f64::INFINITY, f64::min);
            let chosen = cands
                .iter()
                .filter(|c| c.exact <= min + 1e-12)
                .min_by_key(|c| self.basis[c.pos])
                .expect("non-empty");
            return (Some((chosen.pos, chosen.at_upper)), chosen.exact);
        }
        let mut best: Option<&Cand> = None;
        for c in cands.iter().filter(|c| c.exact <= relaxed_min) {
            if best.is_none_or(|b| c.mag > b.mag) {
                best = Some(c);
            }
        }
        let chosen = best.unwrap_or_else(|| {
            cands
                .iter()
                .min_by(|a, b| a.exact.total_cmp(&b.exact))
                .expect("non-empty")
        });
        (Some((chosen.pos, chosen.at_upper)), chosen.exact)
    }
}

fn nearest_bound(v: f64, lo: f64, hi: f64) -> Option<(State, f64)> {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => Some(if (v - lo).abs() <= (hi - v).abs() { (State::Lower, lo) } else { (State::Upper, hi) }),
        (true, false) => Some((State::Lower, lo)),
        (false, true) => Some((State::Upper, hi)),
        (false, false) => None,
    }
}

impl LuFactors {
    fn placeholder(m: usize) -> Self {
        factor(m, &(0..m).map(|r| vec![(r, 1.0)]).collect::<Vec<_>>()).expect("identity factors")
    }
}

pub fn solve_with(model: &LpModel, opts: &SolveOptions<'_>) -> Result<LpSolution, LpError> {
    model.validate()?;
    let start = Instant::now();
    let sf = match Standard::from_model(model) {
        Ok(sf) => sf,
        Err(status) => {
            return Ok(LpSolution {
                status,
                objective: f64::NAN,
                values: vec![0.0; model.num_vars()],
                iterations: 0,
                wall_time: start.elapsed(),
                basis: None,
            });
        }
    };
    let limit = opts.iteration_limit.unwrap_or(50 * (sf.n + sf.m) + 10_000);
    let mut simplex = Simplex::new(&sf, opts.warm_start)?;
    let mut status = None;
    if simplex.make_dual_feasible() {
        simplex.perturb_costs();
        status = simplex.run_dual(limit)?;
        simplex.cost.copy_from_slice(&sf.cost);
    }
    let status = match status {
        Some(s) => s,
        None => simplex.run(limit)?,
    };
    let mut values: Vec<f64> = simplex.x[..sf.n].to_vec();
    let objective = if status == LpStatus::Optimal {
        for (j, v) in values.iter_mut().enumerate() {
            // clamp rounding residue inside the box
            if simplex.infeasibility(j) <= FEAS_TOL {
                *v = v.clamp(sf.lower[j], sf.upper[j]);
            }
        }
        model.objective_value(&values)
    } else {
        f64::NAN
    };
    let basis = Basis {
        status: simplex
            .state
            .iter()
            .map(|s| match s {
                State::Basic => VarStatus::Basic,
                State::Lower => VarStatus::AtLower,
                State::Upper => VarStatus::AtUpper,
                State::Zero => VarStatus::Free,
            })
            .collect(),
    };
    Ok(LpSolution {
        status,
        objective,
        values,
        iterations: simplex.iterations,
        wall_time: start.elapsed(),
        basis: Some(basis),
    })
}
