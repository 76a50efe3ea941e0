//! `mbhl probe-bilinear` and `mbhl verify-linear`: ensemble ratio probes.

use crate::config::Config;
use crate::report::{fmt, write_csv, RunDir};
use anyhow::{anyhow, bail, Result};
use mb_halfline::analysis::{
    bilinear_ratio_probe, linear_estimate_probe, BilinearEstimate, LinearEstimate, ProbeConfig,
};

fn probe_config(cfg: &Config, seed: u64) -> Result<(String, ProbeConfig)> {
    let p = cfg
        .probe
        .as_ref()
        .ok_or_else(|| anyhow!("this subcommand requires a [probe] section"))?;
    Ok((
        p.estimate.clone(),
        ProbeConfig {
            s: p.s,
            b: p.b,
            gamma: p.gamma,
            alpha: p.alpha,
            ensemble: p.ensemble,
            seed,
            nx: p.nx,
            lx: p.lx,
            nt: p.nt,
            t_horizon: p.t_horizon,
        },
    ))
}

fn write_ratio_table(
    out: &RunDir,
    stats: &mb_halfline::analysis::ProbeStats,
) -> Result<()> {
    let rows: Vec<Vec<String>> = stats
        .ratios
        .iter()
        .enumerate()
        .map(|(i, r)| vec![i.to_string(), fmt(*r)])
        .collect();
    write_csv(&out.file("ratios.csv"), &["member [1]", "ratio [1]"], &rows)
}

pub fn run_bilinear(
    cfg: &Config,
    out: &RunDir,
    seed: u64,
    threads: usize,
    strict: bool,
) -> Result<()> {
    let (name, pc) = probe_config(cfg, seed)?;
    let kind = match name.as_str() {
        "bil1" => BilinearEstimate::VSquaredXsb,
        "bil2" => BilinearEstimate::UvXsbAlpha,
        "bil3" => BilinearEstimate::VSquaredTimeTrace,
        "bil4" => BilinearEstimate::UvTimeTrace,
        other => bail!("unknown bilinear estimate {other:?}: expected bil1..bil4"),
    };
    let stats = bilinear_ratio_probe(kind, &pc)?;
    write_ratio_table(out, &stats)?;
    out.finish("probe-bilinear", seed, threads, strict, cfg, &stats)?;
    if strict && stats.boundary_exponent {
        bail!("strict mode: probe ran on the admissible-boundary exponent b = 7/16");
    }
    println!(
        "probe-bilinear {name}: max ratio {:.6} (member {}), mean {:.6}, {} valid samples",
        stats.max_ratio, stats.argmax_member, stats.mean_ratio, stats.n_valid
    );
    Ok(())
}

pub fn run_linear(
    cfg: &Config,
    out: &RunDir,
    seed: u64,
    threads: usize,
    strict: bool,
) -> Result<()> {
    let (name, pc) = probe_config(cfg, seed)?;
    let theta = cfg.probe.as_ref().map(|p| p.theta).unwrap_or(0.0);
    let p_exp = cfg.probe.as_ref().map(|p| p.p).unwrap_or(4.0);
    let kind = match name.as_str() {
        "kato" => LinearEstimate::KatoSmoothing,
        "kato-trace" => LinearEstimate::KatoTimeTrace,
        "strichartz4" => LinearEstimate::Strichartz4 { theta },
        "sobolev-time" => LinearEstimate::SobolevTime,
        "kato-p" => LinearEstimate::KatoP { p: p_exp },
        other => bail!(
            "unknown linear estimate {other:?}: expected kato, kato-trace, strichartz4, \
             sobolev-time, or kato-p"
        ),
    };
    let stats = linear_estimate_probe(kind, &pc)?;
    write_ratio_table(out, &stats)?;
    out.finish("verify-linear", seed, threads, strict, cfg, &stats)?;
    println!(
        "verify-linear {name}: max ratio {:.6} (member {}), mean {:.6}, {} valid samples",
        stats.max_ratio, stats.argmax_member, stats.mean_ratio, stats.n_valid
    );
    Ok(())
}
