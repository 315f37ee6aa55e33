//! Counter-based random streams for reproducible parallel simulation.
//!
//! Each packet gets its own stream keyed by `(seed, packet_index)`, so
//! results do not depend on how packets are split across threads or chunks,
//! only on the seed and the packet count.

/// SplitMix64 output mix.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// A deterministic stream of draws derived from `(seed, substream index)`.
///
/// Internally a SplitMix64 generator whose initial state is a double mix of
/// the key, which decorrelates adjacent substream indices.
#[derive(Debug, Clone)]
pub struct SubstreamRng {
    state: u64,
    spare_normal: Option<f64>,
}

impl SubstreamRng {
    pub fn new(seed: u64, substream: u64) -> Self {
        let key = mix64(seed ^ mix64(substream.wrapping_mul(GOLDEN_GAMMA) ^ 0x5851_f42d_4c95_7f2d));
        SubstreamRng {
            state: key,
            spare_normal: None,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform draw strictly inside (0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (((self.next_u64() >> 11) as f64) + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal via Box-Muller; the paired draw is cached.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Gamma draw with the given shape and unit scale (Marsaglia-Tsang).
    ///
    /// Exact rejection sampling; shapes below 1 go through the
    /// `Gamma(shape + 1) * U^(1/shape)` boost.
    pub fn gamma(&mut self, shape: f64) -> f64 {
        debug_assert!(shape > 0.0, "gamma shape must be positive");
        if shape < 1.0 {
            let boost = self.uniform().powf(1.0 / shape);
            return self.gamma(shape + 1.0) * boost;
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.normal();
            let t = 1.0 + c * x;
            if t <= 0.0 {
                continue;
            }
            let v = t * t * t;
            let u = self.uniform();
            if u.ln() < 0.5 * x * x + d - d * v + d * v.ln() {
                return d * v;
            }
        }
    }
}
