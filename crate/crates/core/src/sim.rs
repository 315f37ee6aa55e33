//! Block-fading Monte Carlo simulation of both HARQ schemes and an
//! independent quadrature oracle for the composite fade CDF.
//!
//! Packets are embarrassingly parallel: packet `i` draws all of its
//! randomness from a substream keyed by `(seed, i)`, so the report depends
//! only on `(seed, num_packets)` and never on the chunk count or thread
//! schedule. Chunk accumulators are integer counts, which makes the merge
//! exact regardless of order.
//!
//! Thread use is capped by the `HARQ_FSO_THREADS` environment variable
//! (default: available parallelism), and never exceeds `parallel_chunks`.

use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::harq::{HarqConfig, Scheme};
use crate::real::Real;
use crate::rng::SubstreamRng;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Size and reproducibility controls for a simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimSettings {
    pub num_packets: u64,
    pub seed: u64,
    /// Number of independent work chunks; affects scheduling only, never
    /// the result.
    pub parallel_chunks: usize,
}

impl SimSettings {
    pub fn new(num_packets: u64, seed: u64) -> Self {
        SimSettings {
            num_packets,
            seed,
            parallel_chunks: 64,
        }
    }
}

/// A point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<R> {
    pub value: R,
    pub std_error: R,
}

/// Monte Carlo outage and throughput estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport<R> {
    /// Fraction of packets still undecoded after round j, for j = 1..=J.
    pub per_round_outage: Vec<Estimate<R>>,
    /// Delivered bits per channel use.
    pub throughput_estimate: Estimate<R>,
    pub packets_simulated: u64,
    pub seed_used: u64,
}

impl<R: Real> SimReport<R> {
    /// The per-round point estimates as an outage curve tagged with the
    /// Monte Carlo method.
    pub fn outage_result(&self) -> crate::harq::OutageResult<R> {
        crate::harq::OutageResult {
            per_round: self.per_round_outage.iter().map(|e| e.value).collect(),
            method: crate::harq::OutageMethod::MonteCarlo,
        }
    }
}

/// First round at which one packet decodes, or `None` if all `J` rounds
/// fail. Outage after round j is the event "accumulated mutual information
/// <= R / j"; success is the strict complement.
pub fn packet_success_round<R: Real>(
    packet_index: u64,
    powers: &[R],
    cfg: &HarqConfig<R>,
    model: &ChannelModel<R>,
    seed: u64,
) -> Option<usize> {
    let mut rng = SubstreamRng::new(seed, packet_index);
    let h = model.sample_fade(&mut rng);
    let c = cfg.capacity_constant;
    let sigma_n = model.link.sigma_n;
    let two_r = R::of(2.0) * cfg.rate;

    // success at round j <=> 2j * I_j > 2R, i.e. accumulated log2 mass > 2R
    let mut acc = R::zero();
    let mut sum_gamma = R::zero();
    for (j, &p) in powers.iter().enumerate() {
        let gamma = crate::channel::instantaneous_snr(p, h, sigma_n);
        match cfg.scheme {
            Scheme::Cc => {
                sum_gamma += gamma;
                acc = (R::one() + c * sum_gamma).log2();
            }
            Scheme::Ir => {
                acc += (R::one() + c * gamma).log2();
            }
        }
        if acc > two_r {
            return Some(j + 1);
        }
    }
    None
}

struct ChunkAccum {
    /// failed_after[j] = packets still undecoded after round j+1
    failed_after: Vec<u64>,
    successes: u64,
    rounds_used: u64,
    rounds_used_sq: u64,
    rounds_at_success: u64,
}

impl ChunkAccum {
    fn new(rounds: usize) -> Self {
        ChunkAccum {
            failed_after: vec![0; rounds],
            successes: 0,
            rounds_used: 0,
            rounds_used_sq: 0,
            rounds_at_success: 0,
        }
    }

    fn merge(&mut self, other: &ChunkAccum) {
        for (a, b) in self.failed_after.iter_mut().zip(&other.failed_after) {
            *a += b;
        }
        self.successes += other.successes;
        self.rounds_used += other.rounds_used;
        self.rounds_used_sq += other.rounds_used_sq;
        self.rounds_at_success += other.rounds_at_success;
    }
}

fn resolve_worker_count(chunks: usize) -> usize {
    let hw = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let cap = std::env::var("HARQ_FSO_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(hw);
    cap.min(chunks).max(1)
}

/// Simulate `sim.num_packets` packets of the configured scheme and report
/// per-round outage and throughput estimates.
///
/// One fade per packet, held constant over all of its rounds. Throughput
/// charges j channel-use units to a packet resolved (or abandoned) at
/// round j and credits R bits on success; the idle period between packets
/// is not counted.
pub fn simulate_harq<R: Real>(
    powers: &[R],
    cfg: &HarqConfig<R>,
    model: &ChannelModel<R>,
    sim: &SimSettings,
) -> Result<SimReport<R>> {
    cfg.validate()?;
    if sim.num_packets == 0 {
        return Err(Error::invalid("num_packets", "must be >= 1"));
    }
    if powers.is_empty() {
        return Err(Error::invalid("powers", "must be non-empty"));
    }
    let rounds = powers.len();
    let chunks = sim
        .parallel_chunks
        .max(1)
        .min((sim.num_packets as usize).max(1));
    let workers = resolve_worker_count(chunks);

    let run_chunk = |chunk_id: usize| -> ChunkAccum {
        let lo = sim.num_packets * chunk_id as u64 / chunks as u64;
        let hi = sim.num_packets * (chunk_id as u64 + 1) / chunks as u64;
        let mut acc = ChunkAccum::new(rounds);
        for idx in lo..hi {
            let outcome = packet_success_round(idx, powers, cfg, model, sim.seed);
            let used = outcome.unwrap_or(rounds) as u64;
            acc.rounds_used += used;
            acc.rounds_used_sq += used * used;
            match outcome {
                Some(round) => {
                    acc.successes += 1;
                    acc.rounds_at_success += round as u64;
                    for j in 0..round - 1 {
                        acc.failed_after[j] += 1;
                    }
                }
                None => {
                    for j in 0..rounds {
                        acc.failed_after[j] += 1;
                    }
                }
            }
        }
        acc
    };

    let mut total = ChunkAccum::new(rounds);
    if workers <= 1 {
        for chunk_id in 0..chunks {
            total.merge(&run_chunk(chunk_id));
        }
    } else {
        let next = AtomicUsize::new(0);
        let results: Mutex<Vec<Option<ChunkAccum>>> =
            Mutex::new((0..chunks).map(|_| None).collect());
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let chunk_id = next.fetch_add(1, Ordering::Relaxed);
                    if chunk_id >= chunks {
                        break;
                    }
                    let acc = run_chunk(chunk_id);
                    results.lock().unwrap()[chunk_id] = Some(acc);
                });
            }
        });
        for acc in results.into_inner().unwrap() {
            total.merge(&acc.expect("every chunk completes"));
        }
    }

    let n = R::of(sim.num_packets as f64);
    let per_round_outage = total
        .failed_after
        .iter()
        .map(|&f| {
            let p = R::of(f as f64) / n;
            Estimate {
                value: p,
                std_error: (p * (R::one() - p) / n).sqrt(),
            }
        })
        .collect();

    // ratio estimator: omega = R * mean(success) / mean(rounds); delta-method
    // standard error from the per-packet moments
    let s_bar = R::of(total.successes as f64) / n;
    let t_bar = R::of(total.rounds_used as f64) / n;
    let t2_bar = R::of(total.rounds_used_sq as f64) / n;
    let st_bar = R::of(total.rounds_at_success as f64) / n;
    let omega = cfg.rate * s_bar / t_bar;
    let var_s = s_bar * (R::one() - s_bar);
    let var_t = t2_bar - t_bar * t_bar;
    let cov_st = st_bar - s_bar * t_bar;
    let ratio = s_bar / t_bar;
    let var_ratio =
        (var_s - R::of(2.0) * ratio * cov_st + ratio * ratio * var_t) / (t_bar * t_bar * n);
    let omega_se = cfg.rate * var_ratio.max(R::zero()).sqrt();

    Ok(SimReport {
        per_round_outage,
        throughput_estimate: Estimate {
            value: omega,
            std_error: omega_se,
        },
        packets_simulated: sim.num_packets,
        seed_used: sim.seed,
    })
}

// ---------------------------------------------------------------------------
// Quadrature oracle
// ---------------------------------------------------------------------------

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrate `f` over `[lo, hi]` with the supplied rule.
fn integrate<F: FnMut(f64) -> f64>(rule: &(Vec<f64>, Vec<f64>), lo: f64, hi: f64, mut f: F) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let c = 0.5 * (hi + lo);
    let h = 0.5 * (hi - lo);
    let mut sum = 0.0;
    for (&x, &w) in rule.0.iter().zip(&rule.1) {
        sum += w * f(c + h * x);
    }
    sum * h
}

/// Independent quadrature evaluation of the composite fade CDF
/// `Pr{X Y W <= u}` with `X ~ Gamma(alpha, 1/alpha)`,
/// `Y ~ Gamma(beta, 1/beta)`, `W = U^(1/xi2)`.
///
/// Uses the identity `F(u) = E[min(1, (u/(XY))^xi2)]`: for each outer node
/// in X the inner expectation splits at `y* = u/x` into the Gamma CDF piece
/// (where the min saturates at 1) and a smooth damped-power integral mapped
/// onto [0, 1]. Everything is plain nested Gauss-Legendre; no shared code
/// with the series evaluation beyond `ln_gamma`. Absolute error is below
/// 1e-8 at `nodes = 256` for the turbulence regimes of interest.
pub fn gg_pe_cdf_quadrature<R: Real>(u: R, alpha: R, beta: R, xi2: R, nodes: usize) -> Result<R> {
    if u < R::zero() || !u.is_finite() {
        return Err(Error::domain(
            "gg_pe_cdf_quadrature",
            format!("normalized fade must be >= 0 and finite, got {u}"),
        ));
    }
    if !(alpha > R::zero() && beta > R::zero() && xi2 > R::zero()) {
        return Err(Error::domain(
            "gg_pe_cdf_quadrature",
            "alpha, beta, xi2 must be > 0",
        ));
    }
    if nodes < 64 {
        return Err(Error::domain(
            "gg_pe_cdf_quadrature",
            format!("need at least 64 nodes, got {nodes}"),
        ));
    }
    if u == R::zero() {
        return Ok(R::zero());
    }

    let u = u.to_f64_lossy();
    let alpha = alpha.to_f64_lossy();
    let beta = beta.to_f64_lossy();
    let xi2 = xi2.to_f64_lossy();

    let rule = gauss_legendre(nodes);
    let ln_gamma_a: f64 = crate::special::ln_gamma(alpha).expect("alpha > 0");
    let ln_gamma_b: f64 = crate::special::ln_gamma(beta).expect("beta > 0");
    // log prefactors of the unit-mean Gamma densities
    let log_ca = alpha * alpha.ln() - ln_gamma_a;
    let log_cb = beta * beta.ln() - ln_gamma_b;

    // conditional expectation over Y given X = x
    let inner = |x: f64| -> f64 {
        let y_star = u / x;
        // Pr{Y <= y*}: substitute y = s^2 to soften the origin power
        let y_hi = y_star.min(40.0 / beta.min(1.0));
        let p1 = integrate(&rule, 0.0, y_hi.sqrt(), |s| {
            let y = s * s;
            2.0 * s * (log_cb + (beta - 1.0) * y.ln() - beta * y).exp()
        });
        // (u/x)^xi2 E[Y^(-xi2); Y > y*] reduces to y*^beta *
        // beta^beta/Gamma(beta) * int_0^1 w^(xi2-beta-1) exp(-beta y*/w) dw
        let damp = beta * y_star;
        let p2_scale = (beta * y_star.ln() + log_cb).exp();
        let p2 = p2_scale
            * integrate(&rule, 0.0, 1.0, |w| {
                ((xi2 - beta - 1.0) * w.ln() - damp / w).exp()
            });
        p1 + p2
    };

    // outer expectation over X, again with x = v^2
    let x_max = 40.0 / alpha.min(1.0);
    let v_edges = [0.0, 1.0, 2.0, x_max.sqrt()];
    let mut total = 0.0;
    for pair in v_edges.windows(2) {
        total += integrate(&rule, pair[0], pair[1], |v| {
            let x = v * v;
            let fx = (log_ca + (alpha - 1.0) * x.ln() - alpha * x).exp();
            2.0 * v * fx * inner(x)
        });
    }
    Ok(R::of(total.clamp(0.0, 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{path_loss_gain, LinkParams, PointingParams, TurbulenceParams};
    use crate::special::{gg_pe_fade_cdf, SeriesControl};

    fn model_at(gamma_bar_db: f64, strong: bool) -> ChannelModel<f64> {
        let turb = if strong {
            TurbulenceParams::strong()
        } else {
            TurbulenceParams::moderate()
        };
        ChannelModel::new(
            turb,
            PointingParams::new(16.0, 1.0).unwrap(),
            LinkParams::new(path_loss_gain(0.1, 1.0).unwrap(), 1e-7).unwrap(),
        )
        .with_average_snr(crate::channel::snr_from_db(gamma_bar_db))
        .unwrap()
    }

    #[test]
    fn quadrature_zero_at_origin() {
        let v: f64 = gg_pe_cdf_quadrature(0.0, 2.296, 1.822, 16.0, 128).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn quadrature_agrees_with_series_on_grid() {
        let ctrl = SeriesControl::default();
        for &(a, b) in &[(2.296_f64, 1.822_f64), (2.064, 1.342)] {
            for &u in &[1e-4, 1e-3, 0.01, 0.05, 0.2, 0.5, 1.0] {
                let q: f64 = gg_pe_cdf_quadrature(u, a, b, 16.0, 256).unwrap();
                let s = gg_pe_fade_cdf(u, a, b, 16.0, &ctrl).unwrap();
                assert!(
                    (q - s).abs() <= 1e-6,
                    "u={u} ({a},{b}): quad {q} vs series {s}"
                );
            }
        }
    }

    #[test]
    fn quadrature_self_consistent_under_node_doubling() {
        let q1: f64 = gg_pe_cdf_quadrature(0.05, 2.296, 1.822, 16.0, 256).unwrap();
        let q2: f64 = gg_pe_cdf_quadrature(0.05, 2.296, 1.822, 16.0, 512).unwrap();
        assert!((q1 - q2).abs() <= 1e-9, "Q(256)={q1} Q(512)={q2}");
    }

    #[test]
    fn quadrature_rejects_low_order_and_bad_args() {
        assert!(gg_pe_cdf_quadrature(0.1_f64, 2.296, 1.822, 16.0, 32).is_err());
        assert!(gg_pe_cdf_quadrature(-1.0_f64, 2.296, 1.822, 16.0, 128).is_err());
        assert!(gg_pe_cdf_quadrature(0.1_f64, -2.0, 1.822, 16.0, 128).is_err());
    }

    #[test]
    fn quadrature_large_xi2_reduces_to_gamma_gamma() {
        // against a direct Monte Carlo of Pr{XY <= u}
        let (a, b) = (2.296_f64, 1.822_f64);
        let u = 0.4;
        let q: f64 = gg_pe_cdf_quadrature(u, a, b, 1e6, 256).unwrap();
        let n = 2_000_000_u64;
        let mut hits = 0u64;
        for i in 0..n {
            let mut rng = SubstreamRng::new(1234, i);
            let xy = rng.gamma(a) / a * (rng.gamma(b) / b);
            if xy <= u {
                hits += 1;
            }
        }
        let p = hits as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!(
            (q - p).abs() <= 4.0 * se,
            "quad {q} vs empirical gamma-gamma {p} (se {se})"
        );
    }

    fn table_cfg(scheme: Scheme, j: usize, rate: f64) -> HarqConfig<f64> {
        HarqConfig::new(scheme, j, rate).unwrap()
    }

    #[test]
    fn simulation_is_deterministic_and_chunk_invariant() {
        let model = model_at(45.0, false);
        let cfg = table_cfg(Scheme::Cc, 4, 2.0);
        let powers = [0.35; 4];
        let base = SimSettings {
            num_packets: 100_000,
            seed: 99,
            parallel_chunks: 64,
        };
        let r1 = simulate_harq(&powers, &cfg, &model, &base).unwrap();
        let r2 = simulate_harq(&powers, &cfg, &model, &base).unwrap();
        assert_eq!(r1, r2);
        let curve = r1.outage_result();
        assert_eq!(curve.method, crate::harq::OutageMethod::MonteCarlo);
        assert_eq!(curve.per_round.len(), 4);
        let serial = SimSettings {
            parallel_chunks: 1,
            ..base
        };
        let r3 = simulate_harq(&powers, &cfg, &model, &serial).unwrap();
        assert_eq!(r1, r3);
        let odd = SimSettings {
            parallel_chunks: 7,
            ..base
        };
        let r4 = simulate_harq(&powers, &cfg, &model, &odd).unwrap();
        assert_eq!(r1, r4);
    }

    #[test]
    fn different_seed_changes_the_report() {
        let model = model_at(45.0, false);
        let cfg = table_cfg(Scheme::Cc, 4, 2.0);
        let powers = [0.35; 4];
        let a = simulate_harq(&powers, &cfg, &model, &SimSettings::new(50_000, 1)).unwrap();
        let b = simulate_harq(&powers, &cfg, &model, &SimSettings::new(50_000, 2)).unwrap();
        assert_ne!(a.per_round_outage, b.per_round_outage);
    }

    #[test]
    fn vanishing_rate_always_succeeds_first_round() {
        let model = model_at(40.0, false);
        let cfg = table_cfg(Scheme::Ir, 4, 1e-9);
        let powers = [0.35; 4];
        let r = simulate_harq(&powers, &cfg, &model, &SimSettings::new(20_000, 5)).unwrap();
        for e in &r.per_round_outage {
            assert_eq!(e.value, 0.0);
        }
        assert!((r.throughput_estimate.value - 1e-9).abs() < 1e-15);
    }

    #[test]
    fn unreachable_rate_always_fails() {
        let model = model_at(40.0, false);
        for scheme in [Scheme::Cc, Scheme::Ir] {
            let cfg = table_cfg(scheme, 4, 1e3);
            let powers = [0.35; 4];
            let r = simulate_harq(&powers, &cfg, &model, &SimSettings::new(20_000, 5)).unwrap();
            for e in &r.per_round_outage {
                assert_eq!(e.value, 1.0);
            }
            assert_eq!(r.throughput_estimate.value, 0.0);
        }
    }

    #[test]
    fn cc_simulation_matches_closed_form() {
        let ctrl = SeriesControl::default();
        let model = model_at(55.0, false);
        let cfg = table_cfg(Scheme::Cc, 4, 2.0);
        let powers = [0.35; 4];
        let sim = SimSettings::new(500_000, 2024);
        let r = simulate_harq(&powers, &cfg, &model, &sim).unwrap();
        for j in 1..=4 {
            let exact = crate::harq::outage_cc_exact(&powers[..j], &cfg, &model, &ctrl).unwrap();
            let est = r.per_round_outage[j - 1];
            let se = (exact * (1.0 - exact) / sim.num_packets as f64)
                .sqrt()
                .max(1e-9);
            assert!(
                (est.value - exact).abs() <= 3.0 * se,
                "round {j}: MC {} vs exact {exact} (se {se})",
                est.value
            );
        }
    }

    #[test]
    fn ir_simulation_upper_bounded_by_closed_form() {
        let ctrl = SeriesControl::default();
        let model = model_at(50.0, false);
        let cfg = table_cfg(Scheme::Ir, 4, 2.0);
        let powers = [0.35; 4];
        let sim = SimSettings::new(500_000, 77);
        let r = simulate_harq(&powers, &cfg, &model, &sim).unwrap();
        for j in 2..=4 {
            let bound = crate::harq::outage_ir_exact(&powers[..j], &cfg, &model, &ctrl).unwrap();
            let est = r.per_round_outage[j - 1];
            assert!(
                est.value <= bound + 3.0 * est.std_error.max(1e-9),
                "round {j}: MC {} above closed-form bound {bound}",
                est.value
            );
        }
    }

    #[test]
    fn cc_success_implies_ir_success_per_packet() {
        let model = model_at(48.0, true);
        let cc = table_cfg(Scheme::Cc, 4, 2.0);
        let ir = table_cfg(Scheme::Ir, 4, 2.0);
        let powers = [0.2, 0.35, 0.1, 0.3];
        for idx in 0..20_000u64 {
            let rc = packet_success_round(idx, &powers, &cc, &model, 31);
            let ri = packet_success_round(idx, &powers, &ir, &model, 31);
            match (rc, ri) {
                (Some(jc), Some(ji)) => assert!(ji <= jc, "packet {idx}: IR {ji} after CC {jc}"),
                (Some(jc), None) => panic!("packet {idx}: CC decoded at {jc} but IR never did"),
                _ => {}
            }
        }
    }

    #[test]
    fn empirical_fade_cdf_matches_series() {
        let ctrl = SeriesControl::default();
        let model = model_at(40.0, false);
        let n = 1_000_000_u64;
        let grid = [0.05_f64, 0.2, 0.5, 1.0, 2.0];
        let mut counts = [0u64; 5];
        for i in 0..n {
            let mut rng = SubstreamRng::new(555, i);
            let u = model.sample_normalized_fade(&mut rng);
            for (slot, &g) in counts.iter_mut().zip(&grid) {
                if u <= g {
                    *slot += 1;
                }
            }
        }
        for (&g, &cnt) in grid.iter().zip(&counts) {
            let emp = cnt as f64 / n as f64;
            let cdf = gg_pe_fade_cdf(g, 2.296, 1.822, 16.0, &ctrl).unwrap();
            let se = (cdf * (1.0 - cdf) / n as f64).sqrt();
            assert!(
                (emp - cdf).abs() <= 4.0 * se,
                "u={g}: empirical {emp} vs series {cdf} (se {se})"
            );
        }
    }

    #[test]
    fn kolmogorov_smirnov_distance_below_critical() {
        // KS distance of 1e6 sampled normalized fades against the series
        // CDF, compared to the 1% critical value 1.628 / sqrt(n)
        let ctrl = SeriesControl::default();
        let model = model_at(40.0, true);
        let n = 1_000_000_usize;
        let mut fades: Vec<f64> = (0..n as u64)
            .map(|i| {
                let mut rng = SubstreamRng::new(9_090, i);
                model.sample_normalized_fade(&mut rng)
            })
            .collect();
        fades.sort_unstable_by(f64::total_cmp);
        let mut ks = 0.0_f64;
        for (i, &u) in fades.iter().enumerate() {
            let cdf = gg_pe_fade_cdf(u, 2.064, 1.342, 16.0, &ctrl).unwrap();
            ks = ks
                .max(cdf - i as f64 / n as f64)
                .max((i + 1) as f64 / n as f64 - cdf);
        }
        let critical = 1.628 / (n as f64).sqrt();
        assert!(ks < critical, "KS distance {ks} vs 1% critical {critical}");
    }
}
