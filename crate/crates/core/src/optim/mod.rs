//! Power allocation across HARQ rounds minimizing the high-SNR outage
//! under average- and peak-power constraints, plus throughput maximization
//! by linear search over the rate.
//!
//! The chase-combining problem keeps its concave budget terms and is
//! driven by successive convex approximation: each outer pass linearizes
//! `sqrt(P~_1)` and `log(P~_j)` around the current point and solves the
//! resulting convex subproblem with the log-barrier solver. Because the
//! tangent of a concave function lies above it, every surrogate-feasible
//! point is feasible for the true constraints, and the true objective is
//! used unaltered, so the objective sequence is non-increasing.
//!
//! The incremental-redundancy problem becomes convex outright under
//! `u_j = ln P_j`: the objective turns linear and the budget a sum of
//! exponentials of affine forms, so a single barrier solve suffices.

mod barrier;

pub use barrier::{
    solve as solve_convex_subproblem_raw, BarrierOutcome, BarrierSettings, ConvexProgram,
};

use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::harq::{
    outage_exact_per_round, throughput, AsymptoticCoefficients, HarqConfig, PowerAllocation, Scheme,
};
use crate::real::Real;
use crate::special::SeriesControl;

/// Operating point for one optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptConfig<R> {
    pub scheme: Scheme,
    pub channel: ChannelModel<R>,
    /// First-round rate R (bits/s/Hz).
    pub rate: R,
    /// Rounds J.
    pub rounds: usize,
    /// Average power budget P0 (W).
    pub avg_power: R,
    /// Peak per-round power Pmax (W).
    pub peak_power: R,
    /// Capacity-gap constant c.
    pub capacity_constant: R,
}

impl<R: Real> OptConfig<R> {
    pub fn validate(&self) -> Result<()> {
        if !(self.avg_power > R::zero()) {
            return Err(Error::invalid("avg_power", "must be > 0"));
        }
        if !(self.peak_power > R::zero()) {
            return Err(Error::invalid("peak_power", "must be > 0"));
        }
        if self.rounds == 0 {
            return Err(Error::invalid("rounds", "must be >= 1"));
        }
        self.harq_config().map(|_| ())
    }

    pub fn harq_config(&self) -> Result<HarqConfig<R>> {
        HarqConfig::new(self.scheme, self.rounds, self.rate)?
            .with_capacity_constant(self.capacity_constant)
    }

    pub fn with_rate(&self, rate: R) -> Self {
        let mut c = self.clone();
        c.rate = rate;
        c
    }

    fn coefficients(&self) -> Result<AsymptoticCoefficients<R>> {
        AsymptoticCoefficients::compute(&self.harq_config()?, &self.channel, self.rounds)
    }
}

/// Stopping rules of the outer SCA loop and the inner convex solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaSettings<R> {
    /// Outer stop: squared step norm `||P~_d - P~_{d-1}||^2 <= epsilon`.
    pub epsilon: R,
    /// Outer iteration cap delta_max.
    pub max_outer: usize,
    /// Duality-gap tolerance of the inner barrier solves.
    pub inner_tolerance: R,
}

impl<R: Real> Default for ScaSettings<R> {
    fn default() -> Self {
        ScaSettings {
            epsilon: R::of(1e-5),
            max_outer: 50,
            inner_tolerance: R::of(1e-9),
        }
    }
}

/// Outcome of one power-allocation run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult<R> {
    pub allocation: PowerAllocation<R>,
    /// High-SNR outage objective at round J for the returned allocation,
    /// unclamped (high-SNR validity is the caller's concern at low SNR).
    pub objective: R,
    pub outer_iterations: usize,
    pub converged: bool,
    /// Budget headroom `P0 - (asymptotic average power)` at the solution.
    pub constraint_slack: R,
    /// Objective value after each outer iteration.
    pub trajectory: Vec<R>,
}

/// Asymptotic average power `P_1 + sum_j P_j * OPa_{j-1}` with the same
/// unclamped coefficients the optimizers constrain against.
pub fn asymptotic_average_power<R: Real>(
    powers: &[R],
    coeffs: &AsymptoticCoefficients<R>,
    scheme: Scheme,
) -> R {
    let mut total = powers[0];
    for j in 2..=powers.len() {
        let op_prev = match scheme {
            Scheme::Cc => coeffs.op_cc_raw(&powers[..j - 1]),
            Scheme::Ir => coeffs.op_ir_raw(&powers[..j - 1]),
        };
        total += powers[j - 1] * op_prev;
    }
    total
}

// ---------------------------------------------------------------------------
// Feasibility restoration
// ---------------------------------------------------------------------------

/// Log of the marginal budget cost per watt of round `r` (1-based, r >= 2)
/// given the earlier rounds: `ln(OPa_{r-1}(P_1..P_{r-1}))`.
fn ln_cost_coefficient<R: Real>(
    powers: &[R],
    r: usize,
    coeffs: &AsymptoticCoefficients<R>,
    scheme: Scheme,
) -> R {
    match scheme {
        Scheme::Cc => {
            let sum_sq: R = powers[..r - 1].iter().map(|&p| p * p).sum();
            coeffs.psi_r.ln() - coeffs.k * R::of(0.5) * sum_sq.ln()
        }
        Scheme::Ir => {
            let ln_sum: R = powers[..r - 1].iter().map(|&p| p.ln()).sum();
            coeffs.theta_rj[r - 2].ln() - coeffs.k / R::of_usize(r - 1) * ln_sum
        }
    }
}

/// Find a strictly feasible allocation for the asymptotic budget.
///
/// Tries the equal-split family `P_j = min(s P0/J, Pmax)` over a scale
/// sweep (the budget is not monotone in the scale: shrinking the powers
/// inflates the outage weights, so pure down-scaling can never restore
/// feasibility; the sweep covers both directions). Falls back to a
/// sequential greedy fill in log space: round 1 takes most of the budget,
/// each later round at most half of the remaining slack at its marginal
/// cost. Retransmission powers can come out many orders of magnitude
/// apart; that is the true shape of the feasible set when the outage
/// weights are large.
fn restore_feasible<R: Real>(
    cfg: &OptConfig<R>,
    coeffs: &AsymptoticCoefficients<R>,
) -> Result<Vec<R>> {
    let j = cfg.rounds;
    let p0 = cfg.avg_power;
    let pmax = cfg.peak_power;
    let margin = R::of(1.0 - 1e-6);

    let budget = |powers: &[R]| asymptotic_average_power(powers, coeffs, cfg.scheme);

    let equal = (p0 / R::of_usize(j)).min(pmax);
    let mut best: Option<Vec<R>> = None;
    let mut best_sum = R::neg_infinity();
    let mut s = R::of(1e-3);
    let s_hi = pmax / equal;
    while s <= s_hi * R::of(1.0 + 1e-9) {
        let powers: Vec<R> = vec![(equal * s).min(pmax * R::of(1.0 - 1e-9)); j];
        if budget(&powers) <= p0 * margin {
            let total: R = powers.iter().copied().sum();
            if total > best_sum {
                best_sum = total;
                best = Some(powers);
            }
        }
        s *= R::of(1.06);
    }
    if let Some(p) = best {
        return Ok(p);
    }

    // greedy fill; keep powers representable (and their squares normal)
    // even when the cascade of cost coefficients pushes later rounds
    // dozens of decades down
    let ln_pmax = (pmax * R::of(1.0 - 1e-9)).ln();
    let ln_floor = ln_pmax + R::min_positive_value().ln() * R::of(0.4);
    let mut powers = vec![R::zero(); j];
    powers[0] = (p0 * R::of(0.95)).min(pmax * R::of(1.0 - 1e-9));
    let mut slack = p0 * margin - powers[0];
    for round in 2..=j {
        let ln_c = ln_cost_coefficient(&powers, round, coeffs, cfg.scheme);
        let ln_p = if slack > R::zero() {
            ((slack * R::of(0.5)).ln() - ln_c)
                .min(ln_pmax)
                .max(ln_floor)
        } else {
            ln_floor
        };
        powers[round - 1] = ln_p.exp();
        slack -= (ln_p + ln_c).exp();
    }
    if budget(&powers) <= p0 * margin {
        Ok(powers)
    } else {
        Err(Error::Infeasible(format!(
            "no allocation satisfies the asymptotic average-power budget {p0} \
             (best attempt used {})",
            budget(&powers)
        )))
    }
}

// ---------------------------------------------------------------------------
// Chase combining: SCA subproblem
// ---------------------------------------------------------------------------

/// The convex subproblem produced by linearizing the chase-combining
/// constraints around an expansion point, in variables
/// `x = (P~_1..P~_J, t_2..t_J)` with `P~_j = P_j^2`.
#[derive(Debug, Clone)]
pub struct CcSubproblem<R> {
    /// Expansion point (squared powers), strictly positive.
    pub expansion: Vec<R>,
    pub ln_psi: R,
    pub diversity: R,
    pub p0: R,
    pub pmax_sq: R,
}

impl<R: Real> CcSubproblem<R> {
    fn rounds(&self) -> usize {
        self.expansion.len()
    }

    /// Tangent of `sqrt(p1)` at the expansion point.
    pub fn surrogate_sqrt_p1(&self, p1: R) -> R {
        let p10 = self.expansion[0];
        p10.sqrt() + (p1 - p10) / (R::of(2.0) * p10.sqrt())
    }

    /// Tangent of `ln(p_j)` at the expansion point.
    pub fn surrogate_ln_pj(&self, round: usize, pj: R) -> R {
        let pj0 = self.expansion[round - 1];
        pj0.ln() + (pj - pj0) / pj0
    }
}

/// Build the SCA subproblem around `point` (squared powers). Every entry
/// of the expansion point must be strictly positive for the logarithmic
/// linearization to exist.
pub fn build_cc_subproblem<R: Real>(point: &[R], cfg: &OptConfig<R>) -> Result<CcSubproblem<R>> {
    cfg.validate()?;
    if point.len() != cfg.rounds {
        return Err(Error::invalid("point", "length must equal rounds"));
    }
    if point.iter().any(|&p| !(p > R::zero())) {
        return Err(Error::domain(
            "build_cc_subproblem",
            "expansion point must be strictly positive in every round",
        ));
    }
    let coeffs = cfg.coefficients()?;
    Ok(CcSubproblem {
        expansion: point.to_vec(),
        ln_psi: coeffs.psi_r.ln(),
        diversity: coeffs.k,
        p0: cfg.avg_power,
        pmax_sq: cfg.peak_power * cfg.peak_power,
    })
}

impl<R: Real> ConvexProgram<R> for CcSubproblem<R> {
    fn dim(&self) -> usize {
        2 * self.rounds() - 1
    }

    fn num_constraints(&self) -> usize {
        // budget + (J-1) cost couplings + J lower/upper boxes + (J-1) t >= 0
        4 * self.rounds() - 1
    }

    fn objective(&self, x: &[R], grad: &mut [R], hess: &mut [R]) -> R {
        let j = self.rounds();
        let n = self.dim();
        let s: R = x[..j].iter().copied().sum();
        let half_k = self.diversity * R::of(0.5);
        for i in 0..j {
            grad[i] = -half_k / s;
            for l in 0..j {
                hess[i * n + l] = half_k / (s * s);
            }
        }
        -half_k * s.ln()
    }

    fn constraint(&self, index: usize, x: &[R], grad: &mut [R], hess: &mut [R]) -> R {
        let j = self.rounds();
        let n = self.dim();
        let t_base = j; // t_2 lives at index j, t_j at j + (j'-2)
        if index == 0 {
            // linearized budget
            let p10 = self.expansion[0];
            grad[0] = R::one() / (R::of(2.0) * p10.sqrt());
            let mut v = self.surrogate_sqrt_p1(x[0]) - self.p0;
            for ti in t_base..n {
                grad[ti] = R::one();
                v += x[ti];
            }
            return v;
        }
        if index < j {
            // cost coupling of round r = index + 1
            let r = index + 1;
            let pr0 = self.expansion[r - 1];
            let t = x[t_base + r - 2];
            let sigma: R = x[..r - 1].iter().copied().sum();
            let half = R::of(0.5);
            let half_k = self.diversity * half;
            grad[r - 1] = half / pr0;
            for i in 0..r - 1 {
                grad[i] = -half_k / sigma;
                for l in 0..r - 1 {
                    hess[i * n + l] = half_k / (sigma * sigma);
                }
            }
            grad[t_base + r - 2] = -R::one() / t;
            hess[(t_base + r - 2) * n + (t_base + r - 2)] = R::one() / (t * t);
            return self.ln_psi + half * self.surrogate_ln_pj(r, x[r - 1])
                - t.ln()
                - half_k * sigma.ln();
        }
        let rest = index - j;
        if rest < j {
            // lower box -p_r <= 0
            grad[rest] = -R::one();
            return -x[rest];
        }
        let rest = rest - j;
        if rest < j {
            // upper box p_r <= pmax^2
            grad[rest] = R::one();
            return x[rest] - self.pmax_sq;
        }
        // t_r >= 0
        let ti = t_base + (rest - j);
        grad[ti] = -R::one();
        -x[ti]
    }
}

/// Solve a prepared convex subproblem from a strictly feasible interior
/// start derived from its own expansion point.
pub fn solve_convex_subproblem<R: Real>(sub: &CcSubproblem<R>, tol: R) -> Result<Vec<R>> {
    let j = sub.rounds();
    let n = 2 * j - 1;
    // start at the expansion point, where surrogates equal the true terms
    let mut x0 = vec![R::zero(); n];
    x0[..j].copy_from_slice(&sub.expansion);
    // shrink squared powers slightly off the boxes
    for v in x0[..j].iter_mut() {
        *v = (*v).min(sub.pmax_sq * R::of(1.0 - 1e-9));
    }
    // minimal t consistent with the coupling constraints, padded
    let half = R::of(0.5);
    let half_k = sub.diversity * half;
    let mut t_min_total = R::zero();
    for r in 2..=j {
        let sigma: R = x0[..r - 1].iter().copied().sum();
        let t_min =
            (sub.ln_psi + half * sub.surrogate_ln_pj(r, x0[r - 1]) - half_k * sigma.ln()).exp();
        x0[j + r - 2] = t_min;
        t_min_total += t_min;
    }
    let slack = sub.p0 - (sub.surrogate_sqrt_p1(x0[0]) + t_min_total);
    if !(slack > R::zero()) {
        return Err(Error::Solver {
            outer_iteration: 0,
            message: format!("expansion point violates the surrogate budget (slack {slack})"),
        });
    }
    // spread part of the slack over the t's to move strictly inside
    let pad = slack * R::of(0.25) / R::of_usize(j.max(2) - 1);
    for r in 2..=j {
        x0[j + r - 2] += pad;
    }
    let outcome = barrier::solve(sub, x0, &BarrierSettings::with_tolerance(tol))?;
    Ok(outcome.x)
}

/// Power allocation for HARQ-CC by successive convex approximation.
pub fn optimize_cc<R: Real>(
    cfg: &OptConfig<R>,
    sca: &ScaSettings<R>,
    initial: Option<&[R]>,
) -> Result<OptResult<R>> {
    cfg.validate()?;
    let coeffs = cfg.coefficients()?;
    if let Some(result) = degenerate_allocation(cfg, &coeffs) {
        return Ok(result);
    }

    let mut p_tilde: Vec<R> = match initial {
        Some(p) => {
            if p.len() != cfg.rounds {
                return Err(Error::invalid("initial", "length must equal rounds"));
            }
            if asymptotic_average_power(p, &coeffs, Scheme::Cc) > cfg.avg_power {
                return Err(Error::Infeasible(
                    "supplied initial allocation violates the asymptotic budget".into(),
                ));
            }
            p.iter().map(|&v| v * v).collect()
        }
        None => restore_feasible(cfg, &coeffs)?
            .iter()
            .map(|&v| v * v)
            .collect(),
    };
    let objective = |pt: &[R]| {
        coeffs.psi_r * (-coeffs.k * R::of(0.5) * pt.iter().copied().sum::<R>().ln()).exp()
    };

    let mut trajectory = vec![objective(&p_tilde)];
    let mut converged = false;
    let mut outer = 0;
    while outer < sca.max_outer {
        outer += 1;
        let sub = build_cc_subproblem_from_sq(&p_tilde, cfg, &coeffs);
        let x = solve_convex_subproblem(&sub, sca.inner_tolerance).map_err(|e| match e {
            Error::Solver { message, .. } => Error::Solver {
                outer_iteration: outer,
                message,
            },
            other => other,
        })?;
        let new_pt = x[..cfg.rounds].to_vec();
        let step: R = new_pt
            .iter()
            .zip(&p_tilde)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum();
        p_tilde = new_pt;
        trajectory.push(objective(&p_tilde));
        if step <= sca.epsilon {
            converged = true;
            break;
        }
    }

    let powers: Vec<R> = p_tilde.iter().map(|&p| p.max(R::zero()).sqrt()).collect();
    let slack = cfg.avg_power - asymptotic_average_power(&powers, &coeffs, Scheme::Cc);
    Ok(OptResult {
        objective: *trajectory.last().expect("non-empty trajectory"),
        allocation: PowerAllocation::new(powers),
        outer_iterations: outer,
        converged,
        constraint_slack: slack,
        trajectory,
    })
}

fn build_cc_subproblem_from_sq<R: Real>(
    point: &[R],
    cfg: &OptConfig<R>,
    coeffs: &AsymptoticCoefficients<R>,
) -> CcSubproblem<R> {
    CcSubproblem {
        expansion: point.to_vec(),
        ln_psi: coeffs.psi_r.ln(),
        diversity: coeffs.k,
        p0: cfg.avg_power,
        pmax_sq: cfg.peak_power * cfg.peak_power,
    }
}

/// Single-round and saturated-budget shortcuts shared by both schemes.
fn degenerate_allocation<R: Real>(
    cfg: &OptConfig<R>,
    coeffs: &AsymptoticCoefficients<R>,
) -> Option<OptResult<R>> {
    let raw_objective = |powers: &[R]| match cfg.scheme {
        Scheme::Cc => coeffs.op_cc_raw(powers),
        Scheme::Ir => coeffs.op_ir_raw(powers),
    };
    if cfg.rounds == 1 {
        // outage decreases monotonically in P_1, so the budget binds
        let p = cfg.avg_power.min(cfg.peak_power);
        let powers = vec![p];
        let objective = raw_objective(&powers);
        return Some(OptResult {
            objective,
            constraint_slack: cfg.avg_power - p,
            allocation: PowerAllocation::new(powers),
            outer_iterations: 0,
            converged: true,
            trajectory: vec![objective],
        });
    }
    if cfg.avg_power >= R::of_usize(cfg.rounds) * cfg.peak_power {
        // every round can run at peak irrespective of the outage weights
        let powers = vec![cfg.peak_power; cfg.rounds];
        let objective = raw_objective(&powers);
        let slack = cfg.avg_power - asymptotic_average_power(&powers, coeffs, cfg.scheme);
        return Some(OptResult {
            objective,
            constraint_slack: slack,
            allocation: PowerAllocation::new(powers),
            outer_iterations: 0,
            converged: true,
            trajectory: vec![objective],
        });
    }
    None
}

// ---------------------------------------------------------------------------
// Incremental redundancy: convex in log-power variables
// ---------------------------------------------------------------------------

/// Problem data for the HARQ-IR allocation in `u_j = ln P_j` variables.
///
/// Objective `-(k/J) sum u_j` is linear; the budget
/// `e^{u_1} + sum_j theta_{j-1} exp(u_j - k/(j-1) sum_{i<j} u_i) <= P0`
/// is a sum of exponentials of affine forms, hence convex; upper boxes
/// bound `u_j <= ln Pmax`. No lower boxes are needed: the objective grows
/// without bound as any `u_j` falls, so minimizers stay finite even when
/// the budget forces some rounds many decades below the others.
#[derive(Debug, Clone)]
pub struct IrLogProblem<R> {
    rounds: usize,
    diversity: R,
    ln_theta: Vec<R>,
    p0: R,
    ln_pmax: R,
}

impl<R: Real> IrLogProblem<R> {
    fn new(cfg: &OptConfig<R>, coeffs: &AsymptoticCoefficients<R>) -> Self {
        IrLogProblem {
            rounds: cfg.rounds,
            diversity: coeffs.k,
            ln_theta: coeffs.theta_rj.iter().map(|&t| t.ln()).collect(),
            p0: cfg.avg_power,
            ln_pmax: cfg.peak_power.ln(),
        }
    }

    /// Exponents of the budget terms as affine forms `a^T u + b`.
    fn budget_terms(&self, u: &[R]) -> Vec<(R, Vec<R>)> {
        let j = self.rounds;
        let mut terms = Vec::with_capacity(j);
        // round 1: e^{u_1}
        let mut a = vec![R::zero(); j];
        a[0] = R::one();
        terms.push((u[0], a));
        for r in 2..=j {
            let mut a = vec![R::zero(); j];
            a[r - 1] = R::one();
            let ratio = self.diversity / R::of_usize(r - 1);
            for coef in a.iter_mut().take(r - 1) {
                *coef = -ratio;
            }
            let phi: R =
                self.ln_theta[r - 2] + u[r - 1] - ratio * u[..r - 1].iter().copied().sum::<R>();
            terms.push((phi, a));
        }
        terms
    }
}

impl<R: Real> ConvexProgram<R> for IrLogProblem<R> {
    fn dim(&self) -> usize {
        self.rounds
    }

    fn num_constraints(&self) -> usize {
        1 + self.rounds
    }

    fn objective(&self, x: &[R], grad: &mut [R], _hess: &mut [R]) -> R {
        let w = -self.diversity / R::of_usize(self.rounds);
        for g in grad.iter_mut() {
            *g = w;
        }
        // log of the outage objective up to the constant ln(theta_J)
        w * x.iter().copied().sum::<R>()
    }

    fn constraint(&self, index: usize, x: &[R], grad: &mut [R], hess: &mut [R]) -> R {
        let n = self.rounds;
        if index == 0 {
            let mut v = -self.p0;
            for (phi, a) in self.budget_terms(x) {
                let e = phi.exp();
                v += e;
                for i in 0..n {
                    if a[i] != R::zero() {
                        grad[i] += e * a[i];
                        for l in 0..n {
                            hess[i * n + l] += e * a[i] * a[l];
                        }
                    }
                }
            }
            return v;
        }
        let r = index - 1;
        grad[r] = R::one();
        x[r] - self.ln_pmax
    }
}

/// Power allocation for HARQ-IR: one barrier solve of the log-variable
/// convex reformulation.
pub fn optimize_ir<R: Real>(cfg: &OptConfig<R>, tol: R) -> Result<OptResult<R>> {
    cfg.validate()?;
    let coeffs = cfg.coefficients()?;
    if let Some(result) = degenerate_allocation(cfg, &coeffs) {
        return Ok(result);
    }
    let problem = IrLogProblem::new(cfg, &coeffs);

    let start = restore_feasible(cfg, &coeffs)?;
    let hi = cfg.peak_power.ln() - R::of(1e-9);
    let u0: Vec<R> = start.iter().map(|&p| p.ln().min(hi)).collect();
    let outcome = barrier::solve(&problem, u0, &BarrierSettings::with_tolerance(tol))?;
    let powers: Vec<R> = outcome.x.iter().map(|&u| u.exp()).collect();
    let objective = coeffs.op_ir_raw(&powers);
    let slack = cfg.avg_power - asymptotic_average_power(&powers, &coeffs, Scheme::Ir);
    Ok(OptResult {
        objective,
        constraint_slack: slack,
        allocation: PowerAllocation::new(powers),
        outer_iterations: 1,
        converged: true,
        trajectory: vec![objective],
    })
}

/// Run the configured scheme's allocator.
pub fn optimize<R: Real>(cfg: &OptConfig<R>, sca: &ScaSettings<R>) -> Result<OptResult<R>> {
    match cfg.scheme {
        Scheme::Cc => optimize_cc(cfg, sca, None),
        Scheme::Ir => optimize_ir(cfg, sca.inner_tolerance),
    }
}

// ---------------------------------------------------------------------------
// Throughput maximization over the rate grid
// ---------------------------------------------------------------------------

/// One grid point of the throughput search.
#[derive(Debug, Clone)]
pub struct ThroughputPoint<R> {
    pub rate: R,
    /// Delivered bits per channel use at the optimized allocation,
    /// evaluated with the closed-form per-round outages.
    pub omega_optimized: Option<R>,
    /// Same metric at the equal-split benchmark `P_j = P0/J`.
    pub omega_equal_split: R,
    pub allocation: Option<PowerAllocation<R>>,
    pub converged: bool,
    pub error: Option<String>,
}

/// Result of the linear search over the rate grid.
#[derive(Debug, Clone)]
pub struct ThroughputScan<R> {
    pub points: Vec<ThroughputPoint<R>>,
    pub best_rate: R,
    pub best_result: OptResult<R>,
    pub best_omega: R,
}

/// Default rate grid 0.1..=6.0 step 0.1.
pub fn default_rate_grid<R: Real>() -> Vec<R> {
    (1..=60).map(|i| R::of(i as f64 * 0.1)).collect()
}

/// Closed-form throughput of an allocation at a given rate.
pub fn throughput_of_allocation<R: Real>(
    powers: &[R],
    cfg: &OptConfig<R>,
    rate: R,
    ctrl: &SeriesControl<R>,
) -> Result<R> {
    let harq = cfg.with_rate(rate).harq_config()?;
    let outages = outage_exact_per_round(powers, &harq, &cfg.channel, ctrl)?;
    Ok(throughput(rate, &outages.per_round))
}

/// Maximize throughput by a linear search on the rate: each grid rate gets
/// the scheme's outage-minimizing allocation, the closed-form Eq.-style
/// throughput is evaluated there, and the best grid point wins (ties break
/// toward the smaller rate). Failed grid points are recorded and skipped;
/// the search errs only when every point fails.
pub fn optimize_throughput<R: Real>(
    cfg: &OptConfig<R>,
    rate_grid: &[R],
    sca: &ScaSettings<R>,
    ctrl: &SeriesControl<R>,
) -> Result<ThroughputScan<R>> {
    if rate_grid.is_empty() {
        return Err(Error::invalid("rate_grid", "must be non-empty"));
    }
    let equal = PowerAllocation::uniform(
        cfg.rounds,
        (cfg.avg_power / R::of_usize(cfg.rounds)).min(cfg.peak_power),
    );
    let mut points = Vec::with_capacity(rate_grid.len());
    let mut best: Option<(R, OptResult<R>, R)> = None;
    for &rate in rate_grid {
        let point_cfg = cfg.with_rate(rate);
        let omega_equal = throughput_of_allocation(&equal.powers, cfg, rate, ctrl)?;
        match optimize(&point_cfg, sca) {
            Ok(result) => {
                let omega = throughput_of_allocation(&result.allocation.powers, cfg, rate, ctrl)?;
                let better = match &best {
                    Some((_, _, best_omega)) => omega > *best_omega,
                    None => true,
                };
                points.push(ThroughputPoint {
                    rate,
                    omega_optimized: Some(omega),
                    omega_equal_split: omega_equal,
                    allocation: Some(result.allocation.clone()),
                    converged: result.converged,
                    error: None,
                });
                if better {
                    best = Some((rate, result, omega));
                }
            }
            Err(e) => {
                points.push(ThroughputPoint {
                    rate,
                    omega_optimized: None,
                    omega_equal_split: omega_equal,
                    allocation: None,
                    converged: false,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    match best {
        Some((best_rate, best_result, best_omega)) => Ok(ThroughputScan {
            points,
            best_rate,
            best_result,
            best_omega,
        }),
        None => Err(Error::Infeasible(
            "every rate grid point failed to optimize".into(),
        )),
    }
}

#[cfg(test)]
mod tests;
