//! Log-gamma, truncated generalized hypergeometric series, and the
//! composite turbulence + pointing fade CDF.
//!
//! The fade CDF is the only place the analysis needs a Meijer G-function,
//! and only for one fixed sub-family, so no general Meijer G evaluator
//! exists here. Instead the CDF is computed through its three-term residue
//! expansion: terms with leading exponents `xi2`, `alpha`, `beta`, each
//! multiplying a 2F3 factor (the `xi2` term's factor is identically 1
//! because one of its numerator parameters vanishes). All gamma-ratio
//! prefactors are evaluated in log space with explicit sign tracking since
//! arguments like `alpha - xi2` are negative and their gammas alternate
//! sign.
//!
//! The 2F3 argument is `z = alpha*beta*u` itself, not `-z` and not `z^2`;
//! this was settled empirically against an independent quadrature oracle
//! and a reference Meijer-G evaluation rather than read off the typeset
//! expansion.
//!
//! Accuracy of `gg_pe_fade_cdf` in `f64`: better than 1e-9 absolute for
//! `z <= 30`, better than ~1e-7 up to the series cutoff `z = 45`. Beyond
//! the cutoff the value is within `3e-4` of the true CDF (which is itself
//! within `3e-4` of 1 there), reaching 1e-12 agreement once the tail bound
//! certifies saturation. Every regime the outage analysis operates in
//! stays far below the cutoff.

use crate::error::{Error, Result};
use crate::real::Real;

/// Truncation control for hypergeometric series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl<R> {
    /// Stop once a term's magnitude drops below this fraction of the
    /// partial sum. Must be positive.
    pub rel_tolerance: R,
    /// Hard cap on the number of summed terms. Must be at least 1.
    pub max_terms: usize,
}

impl<R: Real> Default for SeriesControl<R> {
    fn default() -> Self {
        SeriesControl {
            rel_tolerance: R::of(1e-12),
            max_terms: 500,
        }
    }
}

impl<R: Real> SeriesControl<R> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tolerance > R::zero()) {
            return Err(Error::invalid("rel_tolerance", "must be > 0"));
        }
        if self.max_terms == 0 {
            return Err(Error::invalid("max_terms", "must be >= 1"));
        }
        Ok(())
    }
}

/// Lanczos coefficients (g = 607/128), full `f64` accuracy for x > 0.
/// The shift below is g + 1/2 = 671/128.
const LANCZOS_SHIFT: f64 = 5.242_187_5;
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_140_8e-5,
    3.689_918_265_953_162_5e-6,
];

/// Natural log of the gamma function for strictly positive argument.
///
/// Relative error is below 1e-12 for x in [0.1, 100] at `f64` (tighter in
/// practice; the Lanczos fit is good to ~1e-15). Non-positive arguments,
/// including the poles at 0, -1, -2, ..., are rejected; callers that need
/// gammas of negative arguments go through [`ln_abs_gamma`].
pub fn ln_gamma<R: Real>(x: R) -> Result<R> {
    if !(x > R::zero()) {
        return Err(Error::domain(
            "ln_gamma",
            format!("argument must be > 0, got {x}"),
        ));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos<R: Real>(x: R) -> R {
    let mut ser = R::of(0.999_999_999_999_997_1);
    let mut y = x;
    for &c in &LANCZOS_COEF {
        y += R::one();
        ser += R::of(c) / y;
    }
    let tmp = x + R::of(LANCZOS_SHIFT);
    let half = R::of(0.5);
    (x + half) * tmp.ln() - tmp + (R::of(2.506_628_274_631_000_5) * ser / x).ln()
}

/// `(ln |Gamma(x)|, sign of Gamma(x))` for any non-pole real x.
///
/// Negative arguments go through the reflection formula. At a pole of the
/// gamma function the returned sign is 0 and the log magnitude is +inf.
pub fn ln_abs_gamma<R: Real>(x: R) -> (R, R) {
    if x > R::zero() {
        return (ln_gamma_pos(x), R::one());
    }
    if x == x.floor() {
        // pole at 0, -1, -2, ...
        return (R::infinity(), R::zero());
    }
    // Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    let sin_pi_x = (R::PI() * x).sin();
    let ln_abs = R::PI().ln() - sin_pi_x.abs().ln() - ln_gamma_pos(R::one() - x);
    (ln_abs, sin_pi_x.signum())
}

fn near_nonpositive_integer<R: Real>(x: R, tol: R) -> bool {
    if x > tol {
        return false;
    }
    (x - x.round()).abs() < tol
}

/// Truncated generalized hypergeometric series `pFq(a; b; z)`.
///
/// Terms are accumulated through the ratio recurrence; summation stops when
/// a term's magnitude falls below `rel_tolerance` times the partial sum (or
/// the series terminates exactly, which happens when a numerator parameter
/// is a non-positive integer). Exceeding `max_terms` yields a convergence
/// error carrying the partial sum and the last term magnitude.
pub fn hyp_pfq<R: Real>(a: &[R], b: &[R], z: R, ctrl: &SeriesControl<R>) -> Result<R> {
    ctrl.validate()?;
    let tol = R::of(1e-9);
    for &bj in b {
        if near_nonpositive_integer(bj, tol) {
            return Err(Error::domain(
                "hyp_pfq",
                format!("denominator parameter {bj} is (close to) a non-positive integer"),
            ));
        }
    }
    if z == R::zero() {
        return Ok(R::one());
    }

    let mut sum = R::one();
    let mut term = R::one();
    for k in 0..ctrl.max_terms {
        let kr = R::of_usize(k);
        let mut ratio = z / (kr + R::one());
        for &ai in a {
            ratio *= ai + kr;
        }
        for &bj in b {
            ratio /= bj + kr;
        }
        term *= ratio;
        if term == R::zero() {
            // terminating series (some (a_i)_k hit zero) or underflow
            return Ok(sum);
        }
        sum += term;
        if !term.is_finite() || !sum.is_finite() {
            return Err(Error::Convergence {
                context: "hyp_pfq",
                max_terms: ctrl.max_terms,
                partial_sum: sum.to_f64_lossy(),
                last_term: term.abs().to_f64_lossy(),
            });
        }
        if term.abs() <= ctrl.rel_tolerance * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        context: "hyp_pfq",
        max_terms: ctrl.max_terms,
        partial_sum: sum.to_f64_lossy(),
        last_term: term.abs().to_f64_lossy(),
    })
}

/// Largest `z = alpha*beta*u` at which the three-term expansion is summed
/// directly; beyond it the terms cancel too heavily in double precision.
const SERIES_Z_MAX: f64 = 45.0;

/// Fade parameters after the collision guard, plus whether a perturbation
/// was applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuardedFadeParams<R> {
    pub alpha: R,
    pub beta: R,
    pub xi2: R,
    pub perturbed: bool,
}

/// Resolve parameter collisions that would make the expansion's gamma
/// factors singular: `alpha == beta` and `xi2 == min(alpha, beta)` are
/// nudged by +1e-5; any remaining collision (an integer difference landing
/// a gamma argument or a 2F3 denominator parameter on a pole) is a domain
/// error.
pub fn guard_fade_params<R: Real>(alpha: R, beta: R, xi2: R) -> Result<GuardedFadeParams<R>> {
    if !(alpha > R::zero()) || !(beta > R::zero()) || !(xi2 > R::zero()) {
        return Err(Error::domain(
            "gg_pe_fade_cdf",
            format!("alpha, beta, xi2 must be > 0 (got {alpha}, {beta}, {xi2})"),
        ));
    }
    let eps_detect = R::of(1e-6);
    let nudge = R::of(1e-5);
    let mut beta = beta;
    let mut xi2 = xi2;
    let mut perturbed = false;
    if (alpha - beta).abs() < eps_detect {
        beta += nudge;
        perturbed = true;
    }
    if (xi2 - alpha.min(beta)).abs() < eps_detect {
        xi2 += nudge;
        perturbed = true;
    }

    // Every gamma argument and 2F3 denominator parameter the expansion uses.
    let pole_tol = R::of(1e-9);
    let candidates = [
        alpha - xi2,
        beta - xi2,
        alpha - beta,
        beta - alpha,
        R::one() + alpha - xi2,
        R::one() + beta - xi2,
        R::one() + alpha - beta,
        R::one() + beta - alpha,
    ];
    for c in candidates {
        if near_nonpositive_integer(c, pole_tol) {
            return Err(Error::domain(
                "gg_pe_fade_cdf",
                format!(
                    "parameter collision: alpha={alpha}, beta={beta}, xi2={xi2} put a gamma \
                     factor on a pole (offending argument {c})"
                ),
            ));
        }
    }
    Ok(GuardedFadeParams {
        alpha,
        beta,
        xi2,
        perturbed,
    })
}

/// CDF of the normalized composite fade `u = h / (A0 h_l)`, i.e. the
/// Gamma-Gamma scintillation times the pointing-loss fraction.
///
/// Implemented as the three-term residue expansion described in the module
/// docs, evaluated in log space, clamped to [0, 1]. For arguments deep in
/// the saturated tail (certified by a Chernoff-style moment bound on
/// `Pr{XY > u}`) the value is pinned to 1 up to the bound itself, keeping
/// the function monotone across the series cutoff.
pub fn gg_pe_fade_cdf<R: Real>(
    u: R,
    alpha: R,
    beta: R,
    xi2: R,
    ctrl: &SeriesControl<R>,
) -> Result<R> {
    if u < R::zero() || !u.is_finite() {
        return Err(Error::domain(
            "gg_pe_fade_cdf",
            format!("normalized fade must be >= 0 and finite, got {u}"),
        ));
    }
    if u == R::zero() {
        return Ok(R::zero());
    }
    let p = guard_fade_params(alpha, beta, xi2)?;
    let (alpha, beta, xi2) = (p.alpha, p.beta, p.xi2);

    let z = alpha * beta * u;
    if z <= R::of(SERIES_Z_MAX) {
        let v = fade_cdf_series(z, alpha, beta, xi2, ctrl)?;
        return Ok(v.max(R::zero()).min(R::one()));
    }

    // Past the series cutoff: lower-bound the CDF by 1 - Pr{XY > u} bound,
    // floored at the series value on the cutoff itself so the seam cannot
    // step downward.
    let bound = product_gamma_tail_bound(u, alpha, beta);
    let at_cutoff = R::of(SERIES_Z_MAX * (1.0 - 1e-12));
    let floor = fade_cdf_series(at_cutoff, alpha, beta, xi2, ctrl)?;
    Ok((R::one() - bound).max(floor).min(R::one()))
}

/// The three-term expansion at argument `z = alpha*beta*u`.
fn fade_cdf_series<R: Real>(z: R, alpha: R, beta: R, xi2: R, ctrl: &SeriesControl<R>) -> Result<R> {
    let one = R::one();
    let ln_z = z.ln();
    let (lg_a, _) = ln_abs_gamma(alpha);
    let (lg_b, _) = ln_abs_gamma(beta);

    // Leading exponent xi2; its 2F3 factor is exactly 1.
    let (l1, s1) = ln_abs_gamma(alpha - xi2);
    let (l2, s2) = ln_abs_gamma(beta - xi2);
    let term_xi2 = s1 * s2 * (l1 + l2 - lg_a - lg_b + xi2 * ln_z).exp();

    // Leading exponent alpha.
    let term_alpha = {
        let (lg, sg) = ln_abs_gamma(beta - alpha);
        let scale = one - alpha / xi2;
        let f = hyp_pfq(
            &[alpha, alpha - xi2],
            &[one + alpha - xi2, one + alpha - beta, one + alpha],
            z,
            ctrl,
        )?;
        let (lg_a1, _) = ln_abs_gamma(alpha + one);
        sg * scale.signum() * (lg - scale.abs().ln() - lg_a1 - lg_b + alpha * ln_z).exp() * f
    };

    // Leading exponent beta.
    let term_beta = {
        let (lg, sg) = ln_abs_gamma(alpha - beta);
        let scale = one - beta / xi2;
        let f = hyp_pfq(
            &[beta, beta - xi2],
            &[one + beta - xi2, one + beta - alpha, one + beta],
            z,
            ctrl,
        )?;
        let (lg_b1, _) = ln_abs_gamma(beta + one);
        sg * scale.signum() * (lg - scale.abs().ln() - lg_b1 - lg_a + beta * ln_z).exp() * f
    };

    Ok(term_xi2 + term_alpha + term_beta)
}

/// Chernoff-style upper bound on `Pr{XY > u}` for unit-mean Gamma factors
/// with shapes `alpha`, `beta`: `min_m E[(XY)^m] / u^m`, with the moments
/// written through log-gammas. Valid (if loose) for every `u > 0`.
fn product_gamma_tail_bound<R: Real>(u: R, alpha: R, beta: R) -> R {
    let ln_zu = (alpha * beta * u).ln();
    let (lg_a, _) = ln_abs_gamma(alpha);
    let (lg_b, _) = ln_abs_gamma(beta);
    let mut best = R::infinity();
    let mut rising = 0;
    for m in 1..=512usize {
        let mr = R::of_usize(m);
        let v = ln_gamma_pos(alpha + mr) + ln_gamma_pos(beta + mr) - lg_a - lg_b - mr * ln_zu;
        if v < best {
            best = v;
            rising = 0;
        } else {
            rising += 1;
            if rising > 4 {
                break;
            }
        }
    }
    best.exp().min(R::one())
}
