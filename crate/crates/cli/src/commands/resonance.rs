//! `mbhl resonance-report`: roots table, identity sweeps, region samples.

use crate::config::Config;
use crate::report::{fmt, write_csv, RunDir};
use anyhow::Result;
use mb_halfline::analysis::{
    region_classify, resonance_identity_residual, resonance_roots, ResonanceIdentity,
};
use rand::{Rng, SeedableRng};
use serde_json::json;

pub fn run(cfg: &Config, out: &RunDir, seed: u64, threads: usize, strict: bool) -> Result<()> {
    let section = cfg.resonance.clone().unwrap_or_default();

    // roots and Vieta residuals
    let mut root_rows = Vec::new();
    for &alpha in &section.alphas {
        let r = resonance_roots(alpha)?;
        let (v_sum, v_prod) = r.vieta_residuals();
        root_rows.push(vec![
            fmt(alpha),
            fmt(r.r1),
            fmt(r.r2),
            fmt(v_sum),
            fmt(v_prod),
            fmt(r.max_window_ratio()),
        ]);
    }
    write_csv(
        &out.file("roots.csv"),
        &[
            "alpha [1]",
            "r1 [1]",
            "r2 [1]",
            "vieta_sum_residual [1]",
            "vieta_prod_residual [1]",
            "max_window_ratio [1]",
        ],
        &root_rows,
    )?;

    // identity sweeps
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut sweep_rows = Vec::new();
    let mut worst_overall: f64 = 0.0;
    for &alpha in &section.alphas {
        for variant in [ResonanceIdentity::SelfInteraction, ResonanceIdentity::CrossInteraction] {
            let mut worst: f64 = 0.0;
            let mut mean = 0.0;
            for _ in 0..section.sweep_points {
                let xi1 = 40.0 * (rng.gen::<f64>() - 0.5);
                let xi2 = 40.0 * (rng.gen::<f64>() - 0.5);
                let tau1 = 200.0 * (rng.gen::<f64>() - 0.5);
                let tau2 = 200.0 * (rng.gen::<f64>() - 0.5);
                let res = resonance_identity_residual(alpha, xi1, xi2, tau1, tau2, variant)?;
                let rel = res / ((xi1 + xi2).abs().powi(3) + xi1.abs().powi(3) + 1.0);
                worst = worst.max(rel);
                mean += rel;
            }
            mean /= section.sweep_points.max(1) as f64;
            worst_overall = worst_overall.max(worst);
            let vname = match variant {
                ResonanceIdentity::SelfInteraction => "self",
                ResonanceIdentity::CrossInteraction => "cross",
            };
            sweep_rows.push(vec![fmt(alpha), vname.to_string(), fmt(worst), fmt(mean)]);
        }
    }
    write_csv(
        &out.file("identity_residuals.csv"),
        &["alpha [1]", "identity [label]", "max_rel_residual [1]", "mean_rel_residual [1]"],
        &sweep_rows,
    )?;

    // region classification samples
    let mut region_rows = Vec::new();
    for &alpha in &section.alphas {
        let roots = resonance_roots(alpha)?;
        let c = section.window_ratio.min(0.99 * roots.max_window_ratio()).max(1.01);
        for i in 0..40 {
            let xi1 = 2.0;
            let xi = -12.0 + 24.0 * (i as f64) / 39.0;
            let region = region_classify(xi, xi1, alpha, c)?;
            region_rows.push(vec![
                fmt(alpha),
                fmt(c),
                fmt(xi),
                fmt(xi1),
                format!("{region:?}"),
            ]);
        }
    }
    write_csv(
        &out.file("regions.csv"),
        &["alpha [1]", "c [1]", "xi [frequency]", "xi1 [frequency]", "region [label]"],
        &region_rows,
    )?;

    out.finish(
        "resonance-report",
        seed,
        threads,
        strict,
        cfg,
        &json!({
            "alphas": section.alphas,
            "sweep_points": section.sweep_points,
            "max_rel_identity_residual": worst_overall,
        }),
    )?;
    println!(
        "resonance-report: {} couplings, worst relative identity residual {worst_overall:.3e}",
        section.alphas.len()
    );
    Ok(())
}
