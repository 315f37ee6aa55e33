//! `op-curve`: outage probability of both schemes over an average-SNR
//! sweep, with optional Monte Carlo columns.

use super::CliError;
use crate::config::RunConfig;
use crate::output::{cell, csv_table, OutputFormat};
use harq_fso::harq::{outage_asymptotic_per_round, outage_exact_per_round, HarqConfig, Scheme};
use harq_fso::optim::optimize;
use harq_fso::sim::simulate_harq;
use harq_fso::special::SeriesControl;
use serde::Serialize;

#[derive(Debug, Serialize)]
struct Row {
    gamma_bar_db: f64,
    op_cc_exact: f64,
    op_cc_asym: f64,
    op_ir_exact: f64,
    op_ir_asym: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    op_cc_mc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    op_cc_mc_stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    op_ir_mc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    op_ir_mc_stderr: Option<f64>,
}

pub fn run(cfg: &RunConfig, format: OutputFormat) -> Result<String, CliError> {
    let ctrl = SeriesControl::default();
    let rounds = cfg.harq.max_rounds;
    let c = cfg.capacity_constant();
    let cc_cfg = HarqConfig::new(Scheme::Cc, rounds, cfg.harq.rate)
        .and_then(|h| h.with_capacity_constant(c))?;
    let ir_cfg = HarqConfig::new(Scheme::Ir, rounds, cfg.harq.rate)
        .and_then(|h| h.with_capacity_constant(c))?;

    let fixed = cfg.fixed_allocation();
    let mut rows = Vec::new();
    for db in cfg.snr_sweep_values() {
        let model = cfg.channel_at_db(db)?;
        let (powers_cc, powers_ir) = match &fixed {
            Some(p) => (p.clone(), p.clone()),
            None => {
                // optimized mode: each scheme gets its own allocation
                let mut occ = cfg.opt_config(model);
                occ.scheme = Scheme::Cc;
                let mut oir = occ.clone();
                oir.scheme = Scheme::Ir;
                let sca = cfg.sca_settings();
                (
                    optimize(&occ, &sca)?.allocation.powers,
                    optimize(&oir, &sca)?.allocation.powers,
                )
            }
        };

        // per-round curves so that skewed (optimized) allocations keep the
        // protocol's round monotonicity in every column
        let last = |r: harq_fso::OutageResult| *r.per_round.last().expect("rounds >= 1");
        let mut row = Row {
            gamma_bar_db: db,
            op_cc_exact: last(outage_exact_per_round(&powers_cc, &cc_cfg, &model, &ctrl)?),
            op_cc_asym: last(outage_asymptotic_per_round(&powers_cc, &cc_cfg, &model)?),
            op_ir_exact: last(outage_exact_per_round(&powers_ir, &ir_cfg, &model, &ctrl)?),
            op_ir_asym: last(outage_asymptotic_per_round(&powers_ir, &ir_cfg, &model)?),
            op_cc_mc: None,
            op_cc_mc_stderr: None,
            op_ir_mc: None,
            op_ir_mc_stderr: None,
        };
        if cfg.sim.enabled {
            let sim = cfg.sim_settings();
            let mc_cc = simulate_harq(&powers_cc, &cc_cfg, &model, &sim)?;
            let mc_ir = simulate_harq(&powers_ir, &ir_cfg, &model, &sim)?;
            let last_cc = mc_cc.per_round_outage.last().expect("rounds >= 1");
            let last_ir = mc_ir.per_round_outage.last().expect("rounds >= 1");
            row.op_cc_mc = Some(last_cc.value);
            row.op_cc_mc_stderr = Some(last_cc.std_error);
            row.op_ir_mc = Some(last_ir.value);
            row.op_ir_mc_stderr = Some(last_ir.std_error);
        }
        rows.push(row);
    }

    Ok(match format {
        OutputFormat::Json => {
            serde_json::to_string_pretty(&rows).expect("serializable rows") + "\n"
        }
        OutputFormat::Csv => {
            let mut header = vec![
                "gamma_bar_db",
                "op_cc_exact",
                "op_cc_asym",
                "op_ir_exact",
                "op_ir_asym",
            ];
            if cfg.sim.enabled {
                header.extend(["op_cc_mc", "op_cc_mc_stderr", "op_ir_mc", "op_ir_mc_stderr"]);
            }
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut v = vec![
                        cell(r.gamma_bar_db),
                        cell(r.op_cc_exact),
                        cell(r.op_cc_asym),
                        cell(r.op_ir_exact),
                        cell(r.op_ir_asym),
                    ];
                    if cfg.sim.enabled {
                        v.push(cell(r.op_cc_mc.unwrap_or(f64::NAN)));
                        v.push(cell(r.op_cc_mc_stderr.unwrap_or(f64::NAN)));
                        v.push(cell(r.op_ir_mc.unwrap_or(f64::NAN)));
                        v.push(cell(r.op_ir_mc_stderr.unwrap_or(f64::NAN)));
                    }
                    v
                })
                .collect();
            csv_table(&header, &body)
        }
    })
}
