//! Experiment dispatch, output files and the run manifest.
//!
//! Output schemas:
//!
//! | file | columns / content |
//! |------|-------------------|
//! | `trace.csv` | `t,kappa,log_norm_increment` |
//! | `eigenfunction.csv`, `w_final.csv` | `x,value` |
//! | `per_omega.csv` | `index,estimate,phase_1..phase_k` |
//! | `sweep.csv` | `beta,lambda_hat,lambda_inf,lambda_sup,lambda_random,dispersion,gap,verdict,error` |
//! | `*.json` | estimates and comparison reports |
//! | `manifest.json` | config echo, version, wall clock, sha256 of every other output |
//!
//! Everything except the wall-clock field of the manifest is a pure
//! function of (config, seed, build).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{Experiment, ExperimentConfig};
use crate::averaging::{
    build_averaged, compare, principal_eigenpair, CompareOptions, ComparisonReport, RunKind,
    Verdict,
};
use crate::error::{Error, Result};
use crate::grid::DiscreteField;
use crate::spectrum::{
    estimate_lyapunov_random, estimate_spectrum_interval, track_principal, write_profile_csv,
    RandomRunOptions, TrackOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATED: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub verdict: Option<Verdict>,
    /// Output files in write order; the manifest is last.
    pub files: Vec<PathBuf>,
    pub summary: String,
}

#[derive(Debug, Serialize)]
struct OutputEntry {
    file: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    version: &'static str,
    experiment: &'static str,
    seed: u64,
    config: &'a ExperimentConfig,
    wall_clock_seconds: f64,
    outputs: Vec<OutputEntry>,
}

struct Outputs {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Outputs {
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes)?;
        self.files.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    fn remove_all(&self) {
        for f in &self.files {
            let _ = fs::remove_file(f);
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Runs `experiment` and writes its outputs under `out_dir`. On error every
/// file written so far is removed.
pub fn run(
    config: &ExperimentConfig,
    experiment: Experiment,
    out_dir: &Path,
) -> Result<RunOutcome> {
    config.validate_for(experiment)?;
    fs::create_dir_all(out_dir)?;
    let mut out = Outputs {
        dir: out_dir.to_path_buf(),
        files: Vec::new(),
    };
    let clock = Instant::now();
    match dispatch(config, experiment, &mut out) {
        Ok((verdict, summary)) => {
            let mut outputs = Vec::with_capacity(out.files.len());
            for f in &out.files {
                let bytes = fs::read(f)?;
                outputs.push(OutputEntry {
                    file: f.file_name().unwrap().to_string_lossy().into_owned(),
                    sha256: hex::encode(Sha256::digest(&bytes)),
                });
            }
            let manifest = RunManifest {
                version: env!("CARGO_PKG_VERSION"),
                experiment: experiment.name(),
                seed: config.seed,
                config,
                wall_clock_seconds: clock.elapsed().as_secs_f64(),
                outputs,
            };
            if let Err(e) = out.json("manifest.json", &manifest) {
                out.remove_all();
                return Err(e);
            }
            let exit_code = if verdict == Some(Verdict::Violated) {
                EXIT_VIOLATED
            } else {
                EXIT_OK
            };
            Ok(RunOutcome {
                exit_code,
                verdict,
                files: out.files,
                summary,
            })
        }
        Err(e) => {
            out.remove_all();
            Err(e)
        }
    }
}

fn compare_options(config: &ExperimentConfig) -> CompareOptions {
    let (horizon, burn_in) = match config.run_kind {
        RunKind::Nonautonomous => (config.spectrum.horizon, config.spectrum.burn_in),
        RunKind::Random => (config.lyapunov.horizon, config.lyapunov.burn_in),
    };
    CompareOptions {
        horizon,
        burn_in,
        ladder: config.spectrum.ladder.clone(),
        n_omega: config.lyapunov.n_omega,
        seed: config.seed,
        tolerances: config.tolerances,
    }
}

fn dispatch(
    config: &ExperimentConfig,
    experiment: Experiment,
    out: &mut Outputs,
) -> Result<(Option<Verdict>, String)> {
    let field = config.build_field()?;
    let driver = config.build_driver()?;
    let cfg = config.stepper_config();
    let grid = field.grid().clone();
    match experiment {
        Experiment::Eigen => {
            let avg = build_averaged(&field, &driver, config.eigen_mode)?;
            let (lambda_hat, phi) = principal_eigenpair(&avg.operator)?;
            #[derive(Serialize)]
            struct EigenOut {
                lambda_hat: f64,
                mode: crate::averaging::AveragingMode,
                d_hat_left: f64,
                d_hat_right: f64,
                n_interior: usize,
                length: f64,
            }
            out.json(
                "eigen.json",
                &EigenOut {
                    lambda_hat,
                    mode: avg.mode,
                    d_hat_left: avg.d_hat_left,
                    d_hat_right: avg.d_hat_right,
                    n_interior: grid.n_interior(),
                    length: grid.length(),
                },
            )?;
            let mut buf = Vec::new();
            write_profile_csv(&grid, &phi, "value", &mut buf)?;
            out.write("eigenfunction.csv", &buf)?;
            Ok((None, format!("lambda_hat = {lambda_hat}")))
        }
        Experiment::Spectrum => {
            let s = &config.spectrum;
            let u0 = DiscreteField::constant(&grid, field.bc().dofs(), 1.0);
            let trace = track_principal(
                &u0,
                &field,
                &driver,
                &cfg,
                &TrackOptions::new(s.horizon, s.burn_in),
            )?;
            let est = estimate_spectrum_interval(&trace, &s.ladder)?;
            #[derive(Serialize)]
            struct SpectrumOut<'a> {
                #[serde(flatten)]
                estimate: &'a crate::spectrum::SpectrumEstimate,
                growth_rate: f64,
                kappa_mean: f64,
                horizon: f64,
            }
            out.json(
                "spectrum.json",
                &SpectrumOut {
                    estimate: &est,
                    growth_rate: trace.growth_rate(),
                    kappa_mean: trace.kappa_mean(),
                    horizon: s.horizon,
                },
            )?;
            let mut buf = Vec::new();
            trace.write_csv(&mut buf)?;
            out.write("trace.csv", &buf)?;
            let mut buf = Vec::new();
            write_profile_csv(&grid, &trace.final_profile, "value", &mut buf)?;
            out.write("w_final.csv", &buf)?;
            Ok((
                None,
                format!(
                    "[lambda_inf, lambda_sup] = [{}, {}]",
                    est.lambda_inf_hat, est.lambda_sup_hat
                ),
            ))
        }
        Experiment::Lyapunov => {
            let l = &config.lyapunov;
            let est = estimate_lyapunov_random(
                &field,
                &driver,
                &cfg,
                &RandomRunOptions {
                    n_omega: l.n_omega,
                    horizon: l.horizon,
                    burn_in: l.burn_in,
                    seed: config.seed,
                },
            )?;
            out.json("lyapunov.json", &est)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["index".to_string(), "estimate".to_string()];
            header.extend((1..=driver.k()).map(|j| format!("phase_{j}")));
            w.write_record(&header).map_err(csv_err)?;
            for s in &est.per_omega {
                let mut row = vec![s.index.to_string(), s.estimate.to_string()];
                row.extend(s.phase.iter().map(f64::to_string));
                w.write_record(&row).map_err(csv_err)?;
            }
            let buf = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            out.write("per_omega.csv", &buf)?;
            Ok((
                None,
                format!(
                    "lambda = {} (dispersion {})",
                    est.lambda_hat, est.dispersion
                ),
            ))
        }
        Experiment::Compare => {
            let report = compare(
                &field,
                &driver,
                config.run_kind,
                &cfg,
                &compare_options(config),
            )?;
            out.json("report.json", &report)?;
            Ok((Some(report.verdict), summary_line(&report)))
        }
        Experiment::Sweep => {
            let sweep = config.sweep.as_ref().expect("validated");
            let opts = compare_options(config);
            let cells: Vec<(f64, Result<ComparisonReport>)> = sweep
                .values
                .par_iter()
                .map(|&beta| {
                    let r = field
                        .with_scaled_c_term(sweep.term, beta)
                        .and_then(|f| compare(&f, &driver, config.run_kind, &cfg, &opts));
                    (beta, r)
                })
                .collect();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "beta",
                "lambda_hat",
                "lambda_inf",
                "lambda_sup",
                "lambda_random",
                "dispersion",
                "gap",
                "verdict",
                "error",
            ])
            .map_err(csv_err)?;
            let mut worst = Verdict::HoldsWithEquality;
            let mut reports = Vec::new();
            for (beta, r) in &cells {
                match r {
                    Ok(rep) => {
                        let verdict = serde_json::to_value(rep.verdict).unwrap();
                        w.write_record([
                            beta.to_string(),
                            rep.lambda_hat.to_string(),
                            opt(rep.lambda_inf),
                            opt(rep.lambda_sup),
                            opt(rep.lambda_random),
                            opt(rep.dispersion),
                            rep.gap.to_string(),
                            verdict.as_str().unwrap().to_string(),
                            String::new(),
                        ])
                        .map_err(csv_err)?;
                        worst = match (worst, rep.verdict) {
                            (_, Verdict::Violated) | (Verdict::Violated, _) => Verdict::Violated,
                            (_, Verdict::Holds) | (Verdict::Holds, _) => Verdict::Holds,
                            _ => Verdict::HoldsWithEquality,
                        };
                        reports.push(serde_json::to_value(rep).unwrap());
                    }
                    Err(e) => {
                        let mut row = vec![beta.to_string()];
                        row.extend(std::iter::repeat_n(String::new(), 7));
                        row.push(e.to_string());
                        w.write_record(&row).map_err(csv_err)?;
                        reports.push(serde_json::json!({ "beta": beta, "error": e.to_string() }));
                    }
                }
            }
            let buf = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            out.write("sweep.csv", &buf)?;
            out.json("sweep_reports.json", &reports)?;
            let gaps: Vec<String> = cells
                .iter()
                .map(|(b, r)| match r {
                    Ok(rep) => format!("gap({b}) = {:.6}", rep.gap),
                    Err(_) => format!("gap({b}) = error"),
                })
                .collect();
            Ok((Some(worst), gaps.join(", ")))
        }
    }
}

pub fn summary_line(r: &ComparisonReport) -> String {
    let verdict = serde_json::to_value(r.verdict).unwrap();
    format!(
        "{}: lambda_hat = {:.8}, gap = {:.3e} (tol_eq {:.0e}, tol_ineq {:.0e})",
        verdict.as_str().unwrap(),
        r.lambda_hat,
        r.gap,
        r.tolerances.eq,
        r.tolerances.ineq
    )
}
