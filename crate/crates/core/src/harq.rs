//! Closed-form and high-SNR outage probabilities, accumulated mutual
//! information, average power, and throughput for the two HARQ schemes.
//!
//! Conventions: SNR thresholds use the large-`xi2` average SNR (the exact
//! `xi2/(xi2+1)` form is available through [`SnrForm::Exact`] for
//! sensitivity checks, but the closed forms below cancel `A0^2 h_l^2`
//! exactly only under the simplified convention). High-SNR expressions can
//! exceed 1 at low SNR; the public operations clamp to [0, 1] while the
//! raw values remain reachable through [`AsymptoticCoefficients`].

use crate::channel::{ChannelModel, SnrForm};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::special::{gg_pe_fade_cdf, guard_fade_params, ln_abs_gamma, SeriesControl};

/// HARQ retransmission scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Chase combining: identical codeword each round, SNRs add.
    Cc,
    /// Incremental redundancy: new parity each round, mutual information adds.
    Ir,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Cc => "cc",
            Scheme::Ir => "ir",
        }
    }
}

/// Capacity-gap constant for IM/DD with both average- and peak-power
/// constraints: `1 / (2 pi e)`.
pub fn default_capacity_constant<R: Real>() -> R {
    R::one() / (R::of(2.0) * R::PI() * R::E())
}

/// Scheme, round budget, first-round rate, and capacity-gap constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarqConfig<R> {
    pub scheme: Scheme,
    /// Maximum number of transmission rounds J.
    pub max_rounds: usize,
    /// First-round rate R in bits/s/Hz.
    pub rate: R,
    /// Capacity-gap constant c.
    pub capacity_constant: R,
}

impl<R: Real> HarqConfig<R> {
    pub fn new(scheme: Scheme, max_rounds: usize, rate: R) -> Result<Self> {
        let cfg = HarqConfig {
            scheme,
            max_rounds,
            rate,
            capacity_constant: default_capacity_constant(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_capacity_constant(mut self, c: R) -> Result<Self> {
        self.capacity_constant = c;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_rounds == 0 {
            return Err(Error::invalid("max_rounds", "must be >= 1"));
        }
        if !(self.rate > R::zero()) {
            return Err(Error::invalid("rate", "must be > 0"));
        }
        if !(self.capacity_constant > R::zero() && self.capacity_constant <= R::one()) {
            return Err(Error::invalid("capacity_constant", "must be in (0, 1]"));
        }
        Ok(())
    }

    /// `2^(2R) - 1`, the SNR-like decoding threshold.
    pub fn rate_threshold(&self) -> R {
        (R::of(2.0) * self.rate).exp2() - R::one()
    }
}

/// Per-round optical transmit powers `P_1..P_J` in watts.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation<R> {
    pub powers: Vec<R>,
}

impl<R: Real> PowerAllocation<R> {
    pub fn new(powers: Vec<R>) -> Self {
        PowerAllocation { powers }
    }

    /// Equal power in every round.
    pub fn uniform(rounds: usize, power: R) -> Self {
        PowerAllocation {
            powers: vec![power; rounds],
        }
    }

    pub fn validate(&self, rounds: usize, peak: R) -> Result<()> {
        if self.powers.len() != rounds {
            return Err(Error::invalid(
                "powers",
                format!("expected {rounds} entries, got {}", self.powers.len()),
            ));
        }
        for (i, &p) in self.powers.iter().enumerate() {
            if p < R::zero() || p > peak * (R::one() + R::of(1e-12)) {
                return Err(Error::invalid(
                    "powers",
                    format!("P_{} = {p} outside [0, {peak}]", i + 1),
                ));
            }
        }
        Ok(())
    }
}

/// How an outage figure was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutageMethod {
    /// Closed form. For HARQ-IR the closed form is an approximation that
    /// tightly upper-bounds the true outage rather than matching it.
    Exact,
    Asymptotic,
    MonteCarlo,
}

/// Outage probability after each round 1..=J.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageResult<R> {
    pub per_round: Vec<R>,
    pub method: OutageMethod,
}

/// Accumulated mutual information for chase combining after `gammas.len()`
/// rounds: `(1/2j) log2(1 + c * sum(gammas))`.
pub fn mutual_info_cc<R: Real>(gammas: &[R], c: R) -> R {
    assert!(!gammas.is_empty(), "at least one round required");
    let j = R::of_usize(gammas.len());
    let total: R = gammas.iter().copied().sum();
    (R::one() + c * total).log2() / (R::of(2.0) * j)
}

/// Accumulated mutual information for incremental redundancy:
/// `(1/2j) sum(log2(1 + c * gamma_i))`.
pub fn mutual_info_ir<R: Real>(gammas: &[R], c: R) -> R {
    assert!(!gammas.is_empty(), "at least one round required");
    let j = R::of_usize(gammas.len());
    let total: R = gammas.iter().map(|&g| (R::one() + c * g).log2()).sum();
    total / (R::of(2.0) * j)
}

fn check_prefix<R: Real>(powers: &[R]) -> Result<()> {
    if powers.is_empty() {
        return Err(Error::domain("outage", "power prefix must be non-empty"));
    }
    if powers.iter().any(|p| !(*p >= R::zero()) || !p.is_finite()) {
        return Err(Error::domain("outage", "powers must be finite and >= 0"));
    }
    Ok(())
}

/// Exact outage probability of HARQ-CC after `powers.len()` rounds.
///
/// All-zero powers mean certain outage and return 1.
pub fn outage_cc_exact<R: Real>(
    powers: &[R],
    cfg: &HarqConfig<R>,
    model: &ChannelModel<R>,
    ctrl: &SeriesControl<R>,
) -> Result<R> {
    check_prefix(powers)?;
    let sum_sq: R = powers.iter().map(|&p| p * p).sum();
    if sum_sq == R::zero() {
        return Ok(R::one());
    }
    let gamma_bar = model.average_snr(SnrForm::LargeXi2);
    let u_th = (cfg.rate_threshold() / (cfg.capacity_constant * gamma_bar * sum_sq)).sqrt();
    gg_pe_fade_cdf(
        u_th,
        model.turbulence.alpha,
        model.turbulence.beta,
        model.pointing.xi2,
        ctrl,
    )
}

/// Closed-form outage of HARQ-IR after `powers.len()` rounds. A tight
/// upper bound on the true outage; exact at j = 1 where it coincides with
/// the chase-combining expression.
pub fn outage_ir_exact<R: Real>(
    powers: &[R],
    cfg: &HarqConfig<R>,
    model: &ChannelModel<R>,
    ctrl: &SeriesControl<R>,
) -> Result<R> {
    check_prefix(powers)?;
    if powers.iter().any(|&p| p == R::zero()) {
        // product threshold diverges
        return Ok(R::one());
    }
    let j = R::of_usize(powers.len());
    let c_gamma = cfg.capacity_constant * model.average_snr(SnrForm::LargeXi2);
    let ln_prod_sq: R = powers.iter().map(|&p| R::of(2.0) * p.ln()).sum();
    let u_th = (-c_gamma.ln() / R::of(2.0)
        + (cfg.rate_threshold().ln() - ln_prod_sq) / (R::of(2.0) * j))
        .exp();
    gg_pe_fade_cdf(
        u_th,
        model.turbulence.alpha,
        model.turbulence.beta,
        model.pointing.xi2,
        ctrl,
    )
}

/// The high-SNR constants of both schemes for one `(channel, rate, c)`
/// operating point: diversity numbers, `V_R`, `U_{R,j}`, `psi_R`,
/// `theta_{R,j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticCoefficients<R> {
    /// `min(alpha, beta)`.
    pub q: R,
    /// Diversity exponent `min(xi2, alpha, beta)`.
    pub k: R,
    /// The constant `C(alpha, beta)` of the dominant-pole branch.
    pub c_ab: R,
    /// `alpha^2 beta^2 (2^(2R) - 1) / (c gamma_bar)`.
    pub v_r: R,
    /// `(alpha^2 beta^2 / (c gamma_bar))^j (2^(2R) - 1)` for j = 1..=J.
    pub u_rj: Vec<R>,
    /// Chase-combining constant `psi_R`.
    pub psi_r: R,
    /// Incremental-redundancy constants `theta_{R,j}` for j = 1..=J.
    pub theta_rj: Vec<R>,
}

impl<R: Real> AsymptoticCoefficients<R> {
    /// Evaluate the high-SNR constants for `rounds` rounds.
    pub fn compute(cfg: &HarqConfig<R>, model: &ChannelModel<R>, rounds: usize) -> Result<Self> {
        cfg.validate()?;
        let p = guard_fade_params(
            model.turbulence.alpha,
            model.turbulence.beta,
            model.pointing.xi2,
        )?;
        let (alpha, beta, xi2) = (p.alpha, p.beta, p.xi2);
        let q = alpha.min(beta);
        let k = q.min(xi2);
        let gamma_bar = model.average_snr(SnrForm::LargeXi2);
        let c_gamma = cfg.capacity_constant * gamma_bar;
        let thr = cfg.rate_threshold();
        let ab2 = alpha * alpha * beta * beta;
        let v_r = ab2 * thr / c_gamma;

        // C(alpha, beta) = Gamma(|beta - alpha|) /
        //   ((1 - q/xi2) Gamma(q + 1) Gamma(max(alpha, beta)))
        let (lg_diff, s_diff) = ln_abs_gamma((beta - alpha).abs());
        let (lg_q1, _) = ln_abs_gamma(q + R::one());
        let (lg_max, _) = ln_abs_gamma(alpha.max(beta));
        let scale = R::one() - q / xi2;
        let c_ab = s_diff * scale.signum() * (lg_diff - scale.abs().ln() - lg_q1 - lg_max).exp();

        let half = R::of(0.5);
        let psi_r = if xi2 < q {
            // sub-threshold pointing: Gamma(alpha - xi2) Gamma(beta - xi2) /
            // (Gamma(alpha) Gamma(beta)) * V_R^(xi2/2)
            let (l1, s1) = ln_abs_gamma(alpha - xi2);
            let (l2, s2) = ln_abs_gamma(beta - xi2);
            let (la, _) = ln_abs_gamma(alpha);
            let (lb, _) = ln_abs_gamma(beta);
            s1 * s2 * (l1 + l2 - la - lb + xi2 * half * v_r.ln()).exp()
        } else {
            c_ab * (q * half * v_r.ln()).exp()
        };

        let mut u_rj = Vec::with_capacity(rounds);
        let mut theta_rj = Vec::with_capacity(rounds);
        for j in 1..=rounds {
            let jr = R::of_usize(j);
            let ln_u = jr * (ab2 / c_gamma).ln() + thr.ln();
            u_rj.push(ln_u.exp());
            let exponent = if xi2 < q { xi2 } else { q };
            let theta = if xi2 < q {
                let (l1, s1) = ln_abs_gamma(alpha - xi2);
                let (l2, s2) = ln_abs_gamma(beta - xi2);
                let (la, _) = ln_abs_gamma(alpha);
                let (lb, _) = ln_abs_gamma(beta);
                s1 * s2 * (l1 + l2 - la - lb + exponent / (R::of(2.0) * jr) * ln_u).exp()
            } else {
                c_ab * (exponent / (R::of(2.0) * jr) * ln_u).exp()
            };
            theta_rj.push(theta);
        }

        Ok(AsymptoticCoefficients {
            q,
            k,
            c_ab,
            v_r,
            u_rj,
            psi_r,
            theta_rj,
        })
    }

    /// Unclamped high-SNR HARQ-CC outage `psi_R (sum P_i^2)^(-k/2)`.
    pub fn op_cc_raw(&self, powers: &[R]) -> R {
        let sum_sq: R = powers.iter().map(|&p| p * p).sum();
        if sum_sq == R::zero() {
            return R::infinity();
        }
        self.psi_r * (-self.k * R::of(0.5) * sum_sq.ln()).exp()
    }

    /// Unclamped high-SNR HARQ-IR outage `theta_{R,j} (prod P_i)^(-k/j)`
    /// after `powers.len()` rounds.
    pub fn op_ir_raw(&self, powers: &[R]) -> R {
        let j = powers.len();
        assert!(
            (1..=self.theta_rj.len()).contains(&j),
            "round prefix outside the computed coefficient range"
        );
        if powers.iter().any(|&p| p <= R::zero()) {
            return R::infinity();
        }
        let ln_prod: R = powers.iter().map(|&p| p.ln()).sum();
        self.theta_rj[j - 1] * (-self.k / R::of_usize(j) * ln_prod).exp()
    }
}

/// High-SNR HARQ-CC outage after `powers.len()` rounds, clamped to [0, 1].
pub fn outage_cc_asymptotic<R: Real>(
    powers: &[R],
    cfg: &HarqConfig<R>,
    model: &ChannelModel<R>,
) -> Result<R> {
    check_prefix(powers)?;
    let coeffs = AsymptoticCoefficients::compute(cfg, model, powers.len())?;
    Ok(coeffs.op_cc_raw(powers).min(R::one()))
}

/// High-SNR HARQ-IR outage after `powers.len()` rounds, clamped to [0, 1].
pub fn outage_ir_asymptotic<R: Real>(
    powers: &[R],
    cfg: &HarqConfig<R>,
    model: &ChannelModel<R>,
) -> Result<R> {
    check_prefix(powers)?;
    let coeffs = AsymptoticCoefficients::compute(cfg, model, powers.len())?;
    Ok(coeffs.op_ir_raw(powers).min(R::one()))
}

/// Closed-form per-round outage curve for the configured scheme.
///
/// Adding a round can only add information, so the true outage is
/// non-increasing in j and any prefix's closed form bounds every later
/// round. The chase-combining expression respects this on its own
/// (`sum P_i^2` grows); the incremental-redundancy approximation does not
/// once an allocation carries near-zero rounds (its threshold involves
/// `(prod P_i^2)^(-1/2j)`), so the curve takes the running minimum over
/// prefixes, which is the tighter and still valid bound.
pub fn outage_exact_per_round<R: Real>(
    powers: &[R],
    cfg: &HarqConfig<R>,
    model: &ChannelModel<R>,
    ctrl: &SeriesControl<R>,
) -> Result<OutageResult<R>> {
    let mut per_round = Vec::with_capacity(powers.len());
    let mut running = R::one();
    for j in 1..=powers.len() {
        let p = match cfg.scheme {
            Scheme::Cc => outage_cc_exact(&powers[..j], cfg, model, ctrl)?,
            Scheme::Ir => outage_ir_exact(&powers[..j], cfg, model, ctrl)?,
        };
        running = running.min(p);
        per_round.push(running);
    }
    Ok(OutageResult {
        per_round,
        method: OutageMethod::Exact,
    })
}

/// High-SNR per-round outage curve, prefix-monotonized like
/// [`outage_exact_per_round`] and clamped to [0, 1].
pub fn outage_asymptotic_per_round<R: Real>(
    powers: &[R],
    cfg: &HarqConfig<R>,
    model: &ChannelModel<R>,
) -> Result<OutageResult<R>> {
    let coeffs = AsymptoticCoefficients::compute(cfg, model, powers.len())?;
    let mut per_round = Vec::with_capacity(powers.len());
    let mut running = R::one();
    for j in 1..=powers.len() {
        let p = match cfg.scheme {
            Scheme::Cc => coeffs.op_cc_raw(&powers[..j]),
            Scheme::Ir => coeffs.op_ir_raw(&powers[..j]),
        };
        running = running.min(p);
        per_round.push(running.min(R::one()));
    }
    Ok(OutageResult {
        per_round,
        method: OutageMethod::Asymptotic,
    })
}

/// Average consumed optical power `P_1 + sum_{j>=2} P_j * Pout_{j-1}`.
///
/// `outage_prefix` holds the per-round outage probabilities of rounds
/// 1..=J-1 (one fewer entry than `powers`); round `j` transmits only when
/// round `j - 1` has failed.
pub fn average_power<R: Real>(powers: &[R], outage_prefix: &[R]) -> R {
    assert_eq!(
        outage_prefix.len() + 1,
        powers.len(),
        "need one outage per retransmission round"
    );
    let mut total = powers[0];
    for (j, &p) in powers.iter().enumerate().skip(1) {
        total += p * outage_prefix[j - 1];
    }
    total
}

/// Long-run delivered bits per channel use,
/// `R (1 - Pout_J) / (1 + sum_{j<J} Pout_j)`.
pub fn throughput<R: Real>(rate: R, outages: &[R]) -> R {
    assert!(!outages.is_empty(), "need at least one round");
    let j = outages.len();
    let denom = R::one() + outages[..j - 1].iter().copied().sum::<R>();
    rate * (R::one() - outages[j - 1]) / denom
}
