use super::*;
use crate::channel::{path_loss_gain, snr_from_db, LinkParams, PointingParams, TurbulenceParams};
use crate::harq::default_capacity_constant;
use approx::assert_relative_eq;

fn table_config(scheme: Scheme, gamma_bar_db: f64, rounds: usize, rate: f64) -> OptConfig<f64> {
    let channel = ChannelModel::new(
        TurbulenceParams::moderate(),
        PointingParams::new(16.0, 1.0).unwrap(),
        LinkParams::new(path_loss_gain(0.1, 1.0).unwrap(), 1e-7).unwrap(),
    )
    .with_average_snr(snr_from_db(gamma_bar_db))
    .unwrap();
    OptConfig {
        scheme,
        channel,
        rate,
        rounds,
        avg_power: 0.2,
        peak_power: 0.35,
        capacity_constant: default_capacity_constant(),
    }
}

#[test]
fn single_round_binds_the_budget() {
    for scheme in [Scheme::Cc, Scheme::Ir] {
        let cfg = table_config(scheme, 60.0, 1, 2.0);
        let r = optimize(&cfg, &ScaSettings::default()).unwrap();
        assert_eq!(r.allocation.powers, vec![0.2]);
        assert!(r.converged);
        let coeffs = cfg.coefficients().unwrap();
        assert_relative_eq!(
            r.objective,
            coeffs.psi_r * 0.2_f64.powf(-coeffs.k),
            max_relative = 1e-12
        );
    }
}

#[test]
fn saturated_budget_runs_all_rounds_at_peak() {
    for scheme in [Scheme::Cc, Scheme::Ir] {
        let mut cfg = table_config(scheme, 60.0, 4, 2.0);
        cfg.avg_power = 4.0 * cfg.peak_power + 0.1;
        let r = optimize(&cfg, &ScaSettings::default()).unwrap();
        assert_eq!(r.allocation.powers, vec![0.35; 4]);
    }
}

#[test]
fn surrogates_are_exact_at_expansion_and_majorize() {
    let cfg = table_config(Scheme::Cc, 60.0, 3, 2.0);
    let point = [0.01, 0.02, 0.005];
    let sub = build_cc_subproblem(&point, &cfg).unwrap();
    assert_relative_eq!(
        sub.surrogate_sqrt_p1(0.01),
        0.01_f64.sqrt(),
        epsilon = 1e-15
    );
    assert_relative_eq!(sub.surrogate_ln_pj(2, 0.02), 0.02_f64.ln(), epsilon = 1e-15);
    // tangents of concave functions stay above them
    for &p in &[1e-4, 5e-3, 0.05, 0.1, 0.1225] {
        assert!(sub.surrogate_sqrt_p1(p) >= p.sqrt() - 1e-15);
        assert!(sub.surrogate_ln_pj(2, p) >= p.ln() - 1e-15);
        assert!(sub.surrogate_ln_pj(3, p) >= p.ln() - 1e-15);
    }
}

#[test]
fn build_rejects_zero_expansion() {
    let cfg = table_config(Scheme::Cc, 60.0, 2, 2.0);
    assert!(build_cc_subproblem(&[0.0, 0.01], &cfg).is_err());
    assert!(build_cc_subproblem(&[0.01], &cfg).is_err());
}

#[test]
fn subproblem_with_slack_budget_fills_the_boxes() {
    // budget far from active: maximizing sum(P~) pushes every round to
    // Pmax^2
    let mut cfg = table_config(Scheme::Cc, 60.0, 3, 2.0);
    cfg.avg_power = 1e6;
    let sub = build_cc_subproblem(&[0.05, 0.05, 0.05], &cfg).unwrap();
    let x = solve_convex_subproblem(&sub, 1e-10).unwrap();
    for (j, &p) in x[..3].iter().enumerate() {
        assert!(
            (p - 0.1225).abs() < 1e-5,
            "round {j}: P~ = {p} should sit at Pmax^2"
        );
    }
}

#[test]
fn subproblem_solution_matches_fine_grid_on_two_rounds() {
    // the J = 2 subproblem built at the equal split (P0/2 per round, a
    // feasible expansion point here); t_2 is eliminated at its coupling
    // minimum and (P~_1, P~_2) brute-forced with three refinement stages
    let cfg = table_config(Scheme::Cc, 60.0, 2, 2.0);
    let expansion = [0.01_f64, 0.01];
    let sub = build_cc_subproblem(&expansion, &cfg).unwrap();
    let solved = solve_convex_subproblem(&sub, 1e-11).unwrap();
    let solved_value = -sub.diversity / 2.0 * (solved[0] + solved[1]).ln();

    // for fixed P~_1 the binding budget yields the optimal P~_2 in closed
    // form: t_2,min is exp(A + c P~_2) with the linearized log, so the
    // 2-D search reduces to a fine 1-D scan (the (P~_1, P~_2) objective
    // ridge runs nearly parallel to the budget curve, which defeats
    // window-refined 2-D grids)
    let best_p2_for = |p1: f64| -> Option<f64> {
        if p1 <= 0.0 {
            return None;
        }
        let room = sub.p0 - sub.surrogate_sqrt_p1(p1);
        if room <= 0.0 {
            return None;
        }
        let p20 = sub.expansion[1];
        let a = sub.ln_psi + 0.5 * (p20.ln() - 1.0) - sub.diversity / 2.0 * p1.ln();
        let c = 0.5 / p20;
        Some(((room.ln() - a) / c).clamp(0.0, 0.1225))
    };
    let mut best = (0.0_f64, 0.0_f64, f64::NEG_INFINITY);
    let n1 = 4_000_000_usize;
    for i in 0..=n1 {
        let p1 = 0.1225 * i as f64 / n1 as f64;
        if let Some(p2) = best_p2_for(p1) {
            if p1 + p2 > best.2 {
                best = (p1, p2, p1 + p2);
            }
        }
    }
    let grid_value = -sub.diversity / 2.0 * best.2.ln();
    assert!(
        (solved_value - grid_value).abs() <= 1e-6,
        "subproblem value {solved_value} vs grid {grid_value} at ({}, {})",
        best.0,
        best.1
    );
}

#[test]
fn barrier_certifies_the_requested_kkt_tolerance() {
    let cfg = table_config(Scheme::Cc, 60.0, 3, 2.0);
    let expansion = [0.005_f64, 0.004, 0.003];
    let sub = build_cc_subproblem(&expansion, &cfg).unwrap();
    // the raw solver exposes the duality-gap certificate the wrapper
    // relies on
    let j = 3;
    let mut x0 = vec![0.0; 2 * j - 1];
    x0[..j].copy_from_slice(&expansion);
    let half_k = sub.diversity * 0.5;
    for r in 2..=j {
        let sigma: f64 = x0[..r - 1].iter().sum();
        x0[j + r - 2] =
            (sub.ln_psi + 0.5 * x0[r - 1].ln() - half_k * sigma.ln()).exp() * 1.02 + 1e-9;
    }
    let out =
        solve_convex_subproblem_raw(&sub, x0, &BarrierSettings::with_tolerance(1e-9)).unwrap();
    assert!(
        out.kkt_residual <= 1e-9,
        "duality gap {} above tolerance",
        out.kkt_residual
    );
}

/// Two-stage refined brute force for the J = 2 chase-combining problem:
/// maximize P1^2 + P2^2 subject to the asymptotic budget and boxes.
fn cc_grid_oracle(cfg: &OptConfig<f64>) -> (f64, f64, f64) {
    let coeffs = cfg.coefficients().unwrap();
    let feasible_objective = |p1: f64, p2: f64| -> Option<f64> {
        if p1 <= 0.0 {
            return None;
        }
        let budget = p1 + p2 * coeffs.psi_r / (p1 * p1).powf(coeffs.k / 2.0);
        (budget <= cfg.avg_power).then_some(p1 * p1 + p2 * p2)
    };
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    let mut lo1 = 0.0;
    let mut hi1 = cfg.peak_power;
    let mut lo2 = 0.0;
    let mut hi2 = cfg.peak_power;
    let mut step = 1e-3 * cfg.peak_power;
    for _stage in 0..3 {
        let n1 = ((hi1 - lo1) / step).ceil() as usize + 1;
        let n2 = ((hi2 - lo2) / step).ceil() as usize + 1;
        for i in 0..n1 {
            let p1 = (lo1 + i as f64 * step).min(cfg.peak_power);
            for l in 0..n2 {
                let p2 = (lo2 + l as f64 * step).min(cfg.peak_power);
                if let Some(v) = feasible_objective(p1, p2) {
                    if v > best.2 {
                        best = (p1, p2, v);
                    }
                }
            }
        }
        lo1 = (best.0 - 2.0 * step).max(0.0);
        hi1 = (best.0 + 2.0 * step).min(cfg.peak_power);
        lo2 = (best.1 - 2.0 * step).max(0.0);
        hi2 = (best.1 + 2.0 * step).min(cfg.peak_power);
        step *= 4.0 / 1000.0;
    }
    let obj = coeffs.psi_r * best.2.powf(-coeffs.k / 2.0);
    (best.0, best.1, obj)
}

/// Outer stopping rule tight enough to reach the SCA fixpoint; the
/// Table-I epsilon measures raw squared-watt steps and stops ~0.1% early
/// on the flat budget ridge, which is fine for the figure sweeps but not
/// for oracle comparisons.
fn tight_sca() -> ScaSettings<f64> {
    ScaSettings {
        epsilon: 1e-14,
        max_outer: 200,
        inner_tolerance: 1e-11,
    }
}

#[test]
fn cc_optimizer_matches_grid_search_at_two_rounds() {
    let cfg = table_config(Scheme::Cc, 60.0, 2, 2.0);
    let (g1, g2, grid_obj) = cc_grid_oracle(&cfg);
    let r = optimize_cc(&cfg, &tight_sca(), None).unwrap();
    assert!(
        (r.objective - grid_obj).abs() <= 1e-3 * grid_obj,
        "optimizer {} vs grid {} at ({g1}, {g2}) vs {:?}",
        r.objective,
        grid_obj,
        r.allocation.powers
    );
}

/// Refined brute force for the J = 2 incremental-redundancy problem:
/// minimize theta_2 (P1 P2)^(-k/2) subject to the asymptotic budget.
fn ir_grid_oracle(cfg: &OptConfig<f64>) -> f64 {
    let coeffs = cfg.coefficients().unwrap();
    let feasible_objective = |p1: f64, p2: f64| -> Option<f64> {
        if p1 <= 0.0 || p2 <= 0.0 {
            return None;
        }
        let budget = p1 + p2 * coeffs.theta_rj[0] / p1.powf(coeffs.k);
        (budget <= cfg.avg_power).then_some(p1 * p2)
    };
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    let mut lo1 = 0.0;
    let mut hi1 = cfg.peak_power;
    let mut lo2 = 0.0;
    let mut hi2 = cfg.peak_power;
    let mut step = 1e-3 * cfg.peak_power;
    for _stage in 0..3 {
        let n1 = ((hi1 - lo1) / step).ceil() as usize + 1;
        let n2 = ((hi2 - lo2) / step).ceil() as usize + 1;
        for i in 0..n1 {
            let p1 = (lo1 + i as f64 * step).min(cfg.peak_power);
            for l in 0..n2 {
                let p2 = (lo2 + l as f64 * step).min(cfg.peak_power);
                if let Some(v) = feasible_objective(p1, p2) {
                    if v > best.2 {
                        best = (p1, p2, v);
                    }
                }
            }
        }
        lo1 = (best.0 - 2.0 * step).max(0.0);
        hi1 = (best.0 + 2.0 * step).min(cfg.peak_power);
        lo2 = (best.1 - 2.0 * step).max(0.0);
        hi2 = (best.1 + 2.0 * step).min(cfg.peak_power);
        step *= 4.0 / 1000.0;
    }
    coeffs.theta_rj[1] * best.2.powf(-coeffs.k / 2.0)
}

#[test]
fn ir_optimizer_matches_grid_search_at_two_rounds() {
    let cfg = table_config(Scheme::Ir, 60.0, 2, 2.0);
    let grid_obj = ir_grid_oracle(&cfg);
    let r = optimize_ir(&cfg, 1e-9).unwrap();
    assert!(
        (r.objective - grid_obj).abs() <= 1e-3 * grid_obj,
        "optimizer {} vs grid {} at {:?}",
        r.objective,
        grid_obj,
        r.allocation.powers
    );
}

#[test]
fn returned_allocations_are_feasible() {
    for scheme in [Scheme::Cc, Scheme::Ir] {
        for &db in &[45.0, 60.0, 75.0] {
            let cfg = table_config(scheme, db, 4, 2.0);
            let coeffs = cfg.coefficients().unwrap();
            let r = optimize(&cfg, &ScaSettings::default()).unwrap();
            let budget = asymptotic_average_power(&r.allocation.powers, &coeffs, scheme);
            assert!(
                budget <= cfg.avg_power + 1e-9,
                "{scheme:?} at {db} dB: budget {budget} > {}",
                cfg.avg_power
            );
            for &p in &r.allocation.powers {
                assert!(p >= 0.0 && p <= cfg.peak_power + 1e-12);
            }
            assert!(r.constraint_slack >= -1e-9);
        }
    }
}

#[test]
fn optimized_beats_equal_split_at_table_point() {
    for scheme in [Scheme::Cc, Scheme::Ir] {
        let cfg = table_config(scheme, 60.0, 4, 2.0);
        let coeffs = cfg.coefficients().unwrap();
        let equal = vec![0.05; 4];
        let equal_obj = match scheme {
            Scheme::Cc => coeffs.op_cc_raw(&equal),
            Scheme::Ir => coeffs.op_ir_raw(&equal),
        };
        let r = optimize(&cfg, &ScaSettings::default()).unwrap();
        assert!(
            r.objective <= equal_obj,
            "{scheme:?}: optimized {} vs equal split {equal_obj}",
            r.objective
        );
    }
}

#[test]
fn sca_trajectory_is_monotone_and_terminates() {
    let cfg = table_config(Scheme::Cc, 60.0, 4, 2.0);
    let sca = ScaSettings::default();
    let r = optimize_cc(&cfg, &sca, None).unwrap();
    assert!(r.outer_iterations <= sca.max_outer);
    assert!(r.converged);
    for w in r.trajectory.windows(2) {
        assert!(
            w[1] <= w[0] * (1.0 + 1e-7) + 1e-15,
            "trajectory not monotone: {:?}",
            r.trajectory
        );
    }
}

#[test]
fn doubling_the_budget_never_hurts() {
    for scheme in [Scheme::Cc, Scheme::Ir] {
        let cfg = table_config(scheme, 60.0, 4, 2.0);
        let r1 = optimize(&cfg, &ScaSettings::default()).unwrap();
        let mut wide = cfg.clone();
        wide.avg_power *= 2.0;
        wide.peak_power *= 2.0;
        let r2 = optimize(&wide, &ScaSettings::default()).unwrap();
        assert!(
            r2.objective <= r1.objective * (1.0 + 1e-6),
            "{scheme:?}: {} -> {}",
            r1.objective,
            r2.objective
        );
    }
}

#[test]
fn low_snr_ir_still_produces_a_feasible_point() {
    // at 30 dB the asymptotic outage weights make retransmission power
    // nearly unaffordable; the solver must cope with the cascade rather
    // than fail
    let cfg = table_config(Scheme::Ir, 30.0, 4, 2.0);
    let coeffs = cfg.coefficients().unwrap();
    let r = optimize_ir(&cfg, 1e-9).unwrap();
    let budget = asymptotic_average_power(&r.allocation.powers, &coeffs, Scheme::Ir);
    assert!(budget <= cfg.avg_power + 1e-9, "budget {budget}");
    assert!(r.allocation.powers[0] > 0.1, "{:?}", r.allocation.powers);
}

#[test]
fn infeasible_initial_point_is_reported() {
    let cfg = table_config(Scheme::Cc, 45.0, 4, 2.0);
    // full peak power in every round wildly violates the 45 dB budget
    let r = optimize_cc(&cfg, &ScaSettings::default(), Some(&[0.35; 4]));
    assert!(matches!(r, Err(Error::Infeasible(_))));
}

#[test]
fn throughput_single_point_grid() {
    let cfg = table_config(Scheme::Cc, 60.0, 4, 2.0);
    let ctrl = SeriesControl::default();
    let scan = optimize_throughput(&cfg, &[2.0], &ScaSettings::default(), &ctrl).unwrap();
    assert_eq!(scan.points.len(), 1);
    assert_eq!(scan.best_rate, 2.0);
    assert!(scan.best_omega > 0.0);
}

#[test]
fn throughput_best_attains_grid_maximum() {
    let cfg = table_config(Scheme::Ir, 40.0, 4, 2.0);
    let ctrl = SeriesControl::default();
    let grid: Vec<f64> = (1..=12).map(|i| i as f64 * 0.5).collect();
    let scan = optimize_throughput(&cfg, &grid, &ScaSettings::default(), &ctrl).unwrap();
    let max_from_points = scan
        .points
        .iter()
        .filter_map(|p| p.omega_optimized)
        .fold(f64::NEG_INFINITY, f64::max);
    assert_relative_eq!(scan.best_omega, max_from_points, epsilon = 1e-12);
    // argmax rate is the first that attains the maximum
    let first = scan
        .points
        .iter()
        .find(|p| p.omega_optimized == Some(max_from_points))
        .unwrap();
    assert_eq!(first.rate, scan.best_rate);
}

#[test]
fn default_grid_covers_both_figure_ranges() {
    let grid: Vec<f64> = default_rate_grid();
    assert_eq!(grid.len(), 60);
    assert_relative_eq!(grid[0], 0.1);
    assert_relative_eq!(grid[59], 6.0);
}

