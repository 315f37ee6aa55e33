//! `validate`: the oracle-triangle and invariant suite at a configurable
//! scale. Writes one line per check with the measured deviation; any
//! failure drives a nonzero exit code.

use super::CliError;
use crate::config::RunConfig;
use harq_fso::harq::{
    mutual_info_cc, mutual_info_ir, outage_cc_exact, outage_exact_per_round, outage_ir_exact,
    AsymptoticCoefficients, HarqConfig, Scheme,
};
use harq_fso::optim::{asymptotic_average_power, optimize, ScaSettings};
use harq_fso::rng::SubstreamRng;
use harq_fso::sim::{gg_pe_cdf_quadrature, simulate_harq, SimSettings};
use harq_fso::special::{gg_pe_fade_cdf, SeriesControl};

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn record(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
    }

    fn bound(&mut self, name: &'static str, measured: f64, bound: f64) {
        self.record(
            name,
            measured <= bound,
            format!("measured={measured:.6e} bound={bound:.6e}"),
        );
    }
}

const TURBULENCE_SETS: [(f64, f64); 2] = [(2.296, 1.822), (2.064, 1.342)];

/// Run every check; `distort_psi` is a fault-injection hook scaling the
/// high-SNR constant inside the asymptotic-consistency check (1.0 in
/// normal operation).
pub fn run(cfg: &RunConfig, distort_psi: f64) -> Result<(String, bool), CliError> {
    let ctrl = SeriesControl::default();
    let mut suite = Suite { checks: Vec::new() };

    // 1. series CDF vs quadrature oracle on a grid spanning [1e-4, 1]
    {
        let mut worst = 0.0_f64;
        for &(a, b) in &TURBULENCE_SETS {
            for i in 0..=24 {
                let u = 1e-4 * (1e4_f64).powf(i as f64 / 24.0);
                let s = gg_pe_fade_cdf(u, a, b, cfg.channel.xi2, &ctrl)?;
                let q = gg_pe_cdf_quadrature(u, a, b, cfg.channel.xi2, 256)?;
                worst = worst.max((s - q).abs());
            }
        }
        suite.bound("series_vs_quadrature", worst, 1e-6);
    }

    // 2. series CDF vs empirical CDF of sampled fades
    {
        let model = cfg.channel_at_db(40.0)?;
        let n = cfg.sim.packets.min(2_000_000);
        let grid = [0.05, 0.2, 0.5, 1.0, 2.0];
        let mut counts = [0u64; 5];
        for i in 0..n {
            let mut rng = SubstreamRng::new(cfg.sim.seed ^ 0xfade, i);
            let u = model.sample_normalized_fade(&mut rng);
            for (slot, &g) in counts.iter_mut().zip(&grid) {
                if u <= g {
                    *slot += 1;
                }
            }
        }
        let mut worst_sigmas = 0.0_f64;
        for (&g, &cnt) in grid.iter().zip(&counts) {
            let emp = cnt as f64 / n as f64;
            let cdf = gg_pe_fade_cdf(
                g,
                cfg.channel.alpha,
                cfg.channel.beta,
                cfg.channel.xi2,
                &ctrl,
            )?;
            let se = (cdf * (1.0 - cdf) / n as f64).sqrt().max(1e-12);
            worst_sigmas = worst_sigmas.max((emp - cdf).abs() / se);
        }
        suite.bound("series_vs_empirical_sigmas", worst_sigmas, 4.0);
    }

    // 3./4. Monte Carlo vs closed forms at the configured operating point
    let model = cfg.operating_channel(60.0)?;
    let rounds = cfg.harq.max_rounds;
    let powers = cfg
        .fixed_allocation()
        .unwrap_or_else(|| vec![cfg.power.peak; rounds]);
    let sim = SimSettings {
        num_packets: cfg.sim.packets,
        seed: cfg.sim.seed,
        parallel_chunks: cfg.sim.chunks,
    };
    let cc_cfg = HarqConfig::new(Scheme::Cc, rounds, cfg.harq.rate)
        .and_then(|h| h.with_capacity_constant(cfg.capacity_constant()))?;
    let ir_cfg = HarqConfig::new(Scheme::Ir, rounds, cfg.harq.rate)
        .and_then(|h| h.with_capacity_constant(cfg.capacity_constant()))?;
    {
        let report = simulate_harq(&powers, &cc_cfg, &model, &sim)?;
        let mut worst_sigmas = 0.0_f64;
        for j in 1..=rounds {
            let exact = outage_cc_exact(&powers[..j], &cc_cfg, &model, &ctrl)?;
            let se = (exact * (1.0 - exact) / sim.num_packets as f64)
                .sqrt()
                .max(1e-12);
            worst_sigmas =
                worst_sigmas.max((report.per_round_outage[j - 1].value - exact).abs() / se);
        }
        suite.bound("cc_exact_vs_mc_sigmas", worst_sigmas, 3.0);

        let ir_report = simulate_harq(&powers, &ir_cfg, &model, &sim)?;
        let mut worst_excess = f64::NEG_INFINITY;
        for j in 1..=rounds {
            let bound = outage_ir_exact(&powers[..j], &ir_cfg, &model, &ctrl)?;
            let est = ir_report.per_round_outage[j - 1];
            worst_excess = worst_excess.max(est.value - bound - 3.0 * est.std_error.max(1e-12));
        }
        suite.bound("ir_mc_below_closed_form_bound", worst_excess, 0.0);
    }

    // 5. per-round monotonicity of the closed forms
    {
        let mut worst = f64::NEG_INFINITY;
        for scheme in [Scheme::Cc, Scheme::Ir] {
            let hc = HarqConfig::new(scheme, rounds, cfg.harq.rate)
                .and_then(|h| h.with_capacity_constant(cfg.capacity_constant()))?;
            let result = outage_exact_per_round(&powers, &hc, &model, &ctrl)?;
            for w in result.per_round.windows(2) {
                worst = worst.max(w[1] - w[0]);
            }
        }
        suite.bound("per_round_outage_monotone", worst, 1e-12);
    }

    // 6. IR dominance over CC at equal powers
    {
        let mut worst = f64::NEG_INFINITY;
        for j in 2..=rounds {
            let cc = outage_cc_exact(&powers[..j], &cc_cfg, &model, &ctrl)?;
            let ir = outage_ir_exact(&powers[..j], &ir_cfg, &model, &ctrl)?;
            worst = worst.max(ir - cc);
        }
        suite.bound("ir_outage_below_cc", worst, 1e-12);
    }

    // 7. accumulated-information dominance on random SNR vectors
    {
        let mut worst = f64::NEG_INFINITY;
        let mut rng = SubstreamRng::new(cfg.sim.seed ^ 0x1f0, 0);
        for _ in 0..10_000 {
            let len = 1 + (rng.next_u64() % 6) as usize;
            let gammas: Vec<f64> = (0..len).map(|_| -3.0 * rng.uniform().ln() * 1e3).collect();
            let c = cfg.capacity_constant();
            worst = worst.max(mutual_info_cc(&gammas, c) - mutual_info_ir(&gammas, c));
        }
        suite.bound("mutual_info_ir_dominates", worst, 1e-12);
    }

    // 8. asymptotic consistency deep in the high-SNR regime (the distort
    // hook scales psi_R to prove the check can fail). Peak powers
    // regardless of the allocation mode: the subdominant expansion term
    // decays as a power of the outage threshold, so small allocations
    // need substantially deeper SNR for the same agreement.
    {
        let deep = cfg.channel_at_db(95.0)?;
        let deep_powers = vec![cfg.power.peak; rounds];
        let mut worst = 0.0_f64;
        let coeffs = AsymptoticCoefficients::compute(&cc_cfg, &deep, rounds)?;
        let exact_cc = outage_cc_exact(&deep_powers, &cc_cfg, &deep, &ctrl)?;
        let ratio_cc = distort_psi * coeffs.op_cc_raw(&deep_powers) / exact_cc;
        worst = worst.max((ratio_cc - 1.0).abs());
        let exact_ir = outage_ir_exact(&deep_powers, &ir_cfg, &deep, &ctrl)?;
        let ratio_ir = distort_psi * coeffs.op_ir_raw(&deep_powers) / exact_ir;
        worst = worst.max((ratio_ir - 1.0).abs());
        suite.bound("asymptotic_consistency_95db", worst, 0.1);
    }

    // 9. determinism under re-simulation and chunk-count changes
    {
        let r1 = simulate_harq(&powers, &cc_cfg, &model, &sim)?;
        let r2 = simulate_harq(&powers, &cc_cfg, &model, &sim)?;
        let mut other = sim;
        other.parallel_chunks = sim.parallel_chunks / 2 + 1;
        let r3 = simulate_harq(&powers, &cc_cfg, &model, &other)?;
        suite.record(
            "simulator_determinism",
            r1 == r2 && r1 == r3,
            "reports must be identical under reruns and chunk changes".into(),
        );
    }

    // 10. optimizer feasibility and benchmark dominance
    {
        let sca = ScaSettings::default();
        let mut worst_violation = f64::NEG_INFINITY;
        let mut dominance_gap = f64::NEG_INFINITY;
        for scheme in [Scheme::Cc, Scheme::Ir] {
            let mut oc = cfg.opt_config(model);
            oc.scheme = scheme;
            let coeffs = AsymptoticCoefficients::compute(&oc.harq_config()?, &model, rounds)?;
            let result = optimize(&oc, &sca)?;
            let budget = asymptotic_average_power(&result.allocation.powers, &coeffs, scheme);
            worst_violation = worst_violation.max(budget - oc.avg_power);
            for &p in &result.allocation.powers {
                worst_violation = worst_violation.max(p - oc.peak_power);
                worst_violation = worst_violation.max(-p);
            }
            let equal = vec![(oc.avg_power / rounds as f64).min(oc.peak_power); rounds];
            let equal_obj = match scheme {
                Scheme::Cc => coeffs.op_cc_raw(&equal),
                Scheme::Ir => coeffs.op_ir_raw(&equal),
            };
            dominance_gap = dominance_gap.max(result.objective - equal_obj);
        }
        suite.bound("optimizer_feasibility", worst_violation, 1e-9);
        suite.bound("optimizer_beats_equal_split", dominance_gap, 0.0);
    }

    // 11. single-round scheme equivalence and scaling identity
    {
        let cc1 = HarqConfig::new(Scheme::Cc, 1, cfg.harq.rate)
            .and_then(|h| h.with_capacity_constant(cfg.capacity_constant()))?;
        let ir1 = HarqConfig::new(Scheme::Ir, 1, cfg.harq.rate)
            .and_then(|h| h.with_capacity_constant(cfg.capacity_constant()))?;
        let p1 = [powers[0]];
        let diff = (outage_cc_exact(&p1, &cc1, &model, &ctrl)?
            - outage_ir_exact(&p1, &ir1, &model, &ctrl)?)
        .abs();
        let coeffs = AsymptoticCoefficients::compute(&cc1, &model, 1)?;
        let s = 1.7_f64;
        let scaled: Vec<f64> = powers.iter().map(|&p| p * s).collect();
        let ratio = coeffs.op_cc_raw(&scaled) / coeffs.op_cc_raw(&powers);
        let scaling_err = (ratio - s.powf(-coeffs.k)).abs();
        suite.bound("single_round_schemes_coincide", diff, 1e-13);
        suite.bound("asymptotic_power_scaling_law", scaling_err, 1e-10);
    }

    // deterministic report
    let mut out = String::new();
    let mut failures = 0;
    for c in &suite.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        if !c.passed {
            failures += 1;
        }
        out.push_str(&format!("{tag} {} {}\n", c.name, c.detail));
    }
    out.push_str(&format!(
        "RESULT checks={} failures={failures} gamma_bar_db={} packets={} seed={}\n",
        suite.checks.len(),
        cfg.gamma_bar_db.unwrap_or(60.0),
        cfg.sim.packets,
        cfg.sim.seed,
    ));
    Ok((out, failures == 0))
}
