//! FSO channel model: composite fade `h = h_l * h_s * h_g`, electrical SNR,
//! and exact sampling of the fade for Monte Carlo runs.
//!
//! The scintillation factor `h_s` is the product of two unit-mean Gamma
//! variables (shapes `alpha`, `beta`, scales `1/alpha`, `1/beta`); the
//! pointing loss `h_g` follows `Pr{h_g <= x} = (x / A0)^(xi2)` on
//! `(0, A0]` and is sampled exactly through its inverse CDF
//! `A0 * U^(1/xi2)`. One fade is drawn per packet and held constant over
//! all of its HARQ rounds; packets are independent.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::rng::SubstreamRng;

/// Gamma-Gamma scintillation shape parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurbulenceParams<R> {
    pub alpha: R,
    pub beta: R,
}

impl<R: Real> TurbulenceParams<R> {
    pub fn new(alpha: R, beta: R) -> Result<Self> {
        if !(alpha > R::zero() && beta > R::zero()) {
            return Err(Error::invalid("turbulence", "alpha and beta must be > 0"));
        }
        Ok(TurbulenceParams { alpha, beta })
    }

    /// Table values for moderate turbulence conditions.
    pub fn moderate() -> Self {
        TurbulenceParams {
            alpha: R::of(2.296),
            beta: R::of(1.822),
        }
    }

    /// Table values for strong turbulence conditions.
    pub fn strong() -> Self {
        TurbulenceParams {
            alpha: R::of(2.064),
            beta: R::of(1.342),
        }
    }
}

/// Pointing-error (misalignment) parameters.
///
/// `xi2` is the squared ratio of the equivalent beam radius at the receiver
/// to the jitter standard deviation; `a0` is the fraction of power
/// collected at the detector center. The raw geometry inputs can be stored
/// for documentation but `xi2`/`a0` are the sufficient statistics; no
/// conversion from geometry is attempted because that would need a beam
/// waist the parameter set does not carry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointingParams<R> {
    pub xi2: R,
    pub a0: R,
    /// Receiver radius in meters, informational only.
    pub receiver_radius_m: Option<R>,
    /// Jitter standard deviation in meters, informational only.
    pub jitter_std_m: Option<R>,
}

impl<R: Real> PointingParams<R> {
    pub fn new(xi2: R, a0: R) -> Result<Self> {
        if !(xi2 > R::zero()) {
            return Err(Error::invalid("pointing.xi2", "must be > 0"));
        }
        if !(a0 > R::zero() && a0 <= R::one()) {
            return Err(Error::invalid("pointing.a0", "must be in (0, 1]"));
        }
        Ok(PointingParams {
            xi2,
            a0,
            receiver_radius_m: None,
            jitter_std_m: None,
        })
    }
}

/// Deterministic link parameters: path loss, receiver noise, responsivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams<R> {
    /// Path-loss gain in (0, 1].
    pub h_l: R,
    /// Noise standard deviation at the receiver (A).
    pub sigma_n: R,
    /// Receiver responsivity; unity throughout the analysis.
    pub responsivity: R,
    /// Attenuation coefficient in 1/km, informational only.
    pub attenuation_per_km: Option<R>,
    /// Link range in km, informational only.
    pub length_km: Option<R>,
}

impl<R: Real> LinkParams<R> {
    pub fn new(h_l: R, sigma_n: R) -> Result<Self> {
        if !(h_l > R::zero() && h_l <= R::one()) {
            return Err(Error::invalid("link.h_l", "must be in (0, 1]"));
        }
        if !(sigma_n > R::zero()) {
            return Err(Error::invalid("link.sigma_n", "must be > 0"));
        }
        Ok(LinkParams {
            h_l,
            sigma_n,
            responsivity: R::one(),
            attenuation_per_km: None,
            length_km: None,
        })
    }

    /// Build from the Beer-Lambert inputs, keeping them for reference.
    pub fn from_attenuation(attenuation_per_km: R, length_km: R, sigma_n: R) -> Result<Self> {
        let mut link = Self::new(path_loss_gain(attenuation_per_km, length_km)?, sigma_n)?;
        link.attenuation_per_km = Some(attenuation_per_km);
        link.length_km = Some(length_km);
        Ok(link)
    }
}

/// Beer-Lambert path-loss gain `exp(-d_a * length)` for an attenuation
/// coefficient in 1/km and a range in km.
pub fn path_loss_gain<R: Real>(attenuation_per_km: R, length_km: R) -> Result<R> {
    if attenuation_per_km < R::zero() || length_km < R::zero() {
        return Err(Error::domain(
            "path_loss_gain",
            "attenuation coefficient and range must be >= 0",
        ));
    }
    Ok((-attenuation_per_km * length_km).exp())
}

/// Which form of the average-SNR expression to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnrForm {
    /// `A0^2 h_l^2 xi2 / (sigma_n^2 (xi2 + 1))`.
    Exact,
    /// The large-`xi2` simplification `A0^2 h_l^2 / sigma_n^2`. This is the
    /// form the outage expressions assume; it makes their `A0^2 h_l^2`
    /// factors cancel exactly.
    #[default]
    LargeXi2,
}

/// Full channel description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel<R> {
    pub turbulence: TurbulenceParams<R>,
    pub pointing: PointingParams<R>,
    pub link: LinkParams<R>,
}

impl<R: Real> ChannelModel<R> {
    pub fn new(
        turbulence: TurbulenceParams<R>,
        pointing: PointingParams<R>,
        link: LinkParams<R>,
    ) -> Self {
        ChannelModel {
            turbulence,
            pointing,
            link,
        }
    }

    /// Average received electrical SNR.
    pub fn average_snr(&self, form: SnrForm) -> R {
        let a0hl = self.pointing.a0 * self.link.h_l;
        let base = a0hl * a0hl / (self.link.sigma_n * self.link.sigma_n);
        match form {
            SnrForm::Exact => base * self.pointing.xi2 / (self.pointing.xi2 + R::one()),
            SnrForm::LargeXi2 => base,
        }
    }

    /// Rebuild the model with `sigma_n` chosen so that the large-`xi2`
    /// average SNR equals `gamma_bar`. This is how SNR sweeps are realized:
    /// `A0 h_l` stays fixed and the noise floor moves.
    pub fn with_average_snr(&self, gamma_bar: R) -> Result<Self> {
        if !(gamma_bar > R::zero()) {
            return Err(Error::invalid("gamma_bar", "must be > 0"));
        }
        let mut m = *self;
        m.link.sigma_n = self.pointing.a0 * self.link.h_l / gamma_bar.sqrt();
        Ok(m)
    }

    /// One composite fade draw `h = h_l * h_s * h_g`.
    pub fn sample_fade(&self, rng: &mut SubstreamRng) -> R {
        let alpha = self.turbulence.alpha.to_f64_lossy();
        let beta = self.turbulence.beta.to_f64_lossy();
        let xi2 = self.pointing.xi2.to_f64_lossy();
        let h_s = rng.gamma(alpha) / alpha * (rng.gamma(beta) / beta);
        let h_g = rng.uniform().powf(1.0 / xi2);
        self.link.h_l * self.pointing.a0 * R::of(h_s * h_g)
    }

    /// The fade normalized by its deterministic gains, `h / (A0 h_l)`;
    /// this is the variable whose CDF `gg_pe_fade_cdf` evaluates.
    pub fn sample_normalized_fade(&self, rng: &mut SubstreamRng) -> R {
        self.sample_fade(rng) / (self.pointing.a0 * self.link.h_l)
    }
}

/// Instantaneous electrical SNR `(responsivity * P * h / sigma_n)^2` with
/// unit responsivity.
pub fn instantaneous_snr<R: Real>(power: R, fade: R, sigma_n: R) -> R {
    let s = power * fade / sigma_n;
    s * s
}

/// Linear-scale SNR from a dB value (`10 log10` convention).
pub fn snr_from_db<R: Real>(db: R) -> R {
    R::of(10.0).powf(db / R::of(10.0))
}

/// dB value of a linear-scale SNR.
pub fn snr_to_db<R: Real>(linear: R) -> R {
    R::of(10.0) * linear.log10()
}
