//! Command-line front end: training, bound calculators, sample-complexity
//! inversion, Gaussian simulations, rate experiments, the degree search,
//! and the tumor-table pipeline.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (I/O or parsing),
//! 3 numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use statlearn::bounds::{
    info_complexity_asymptotic, info_complexity_numeric, plug_in_min_risk, plug_in_tau,
    vapnik_relative_bound, VapnikBoundInputs,
};
use statlearn::config::ConfigMap;
use statlearn::data::{load_csv, load_wisconsin, reproduce_table_on, ExperimentConfig};
use statlearn::error::Error;
use statlearn::experiments::{
    scale_search, squared_excess_rate, lifted_class_risk_bound, DecompositionReport, ExperimentParams,
    SquaredRateConfig,
};
use statlearn::gaussian::{
    algorithmic_error_estimate, bayes_quadratic_surface, precision_difference_norm, sample_pair,
    squared_risk_minimizer, weighted_risk_mc, GaussianClass, GaussianPair, MatrixNorm,
};
use statlearn::model::LossSpec;
use statlearn::solver::{train_linear, train_polynomial, SolverConfig};

#[derive(Parser)]
#[command(
    name = "statlearn",
    about = "SVM-style training, generalization bounds, and Gaussian experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum LossArg {
    Hinge,
    Squared,
}

impl From<LossArg> for LossSpec {
    fn from(value: LossArg) -> Self {
        match value {
            LossArg::Hinge => LossSpec::Hinge,
            LossArg::Squared => LossSpec::Squared,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit a separator to a CSV dataset (header x1,...,xd,y) and print a
    /// one-line summary; optionally serialize the model.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value = "hinge")]
        loss: LossArg,
        /// Polynomial degree; 1 trains an affine separator.
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long)]
        seed: Option<u64>,
        /// Solver configuration file (key = value lines).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the trained model in the text model format.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the relative generalization bound.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long = "J")]
        min_risk: f64,
    },
    /// Invert the bound into a sample complexity, numerically and via the
    /// closed asymptotic formula.
    Complexity {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        d: u32,
        #[arg(long = "J")]
        min_risk: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        p: f64,
    },
    /// Two-Gaussian pipeline: covariance criterion, optimal-surface risk,
    /// and optionally the approximation error of a polynomial class.
    GaussSim {
        /// Pair definition (dim, mean1, cov1, mean2, cov2, beta1, beta2).
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        n_mc: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also estimate the approximation error of this degree.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = 50_000)]
        n_train: usize,
        /// Write the optimal quadratic surface to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Squared-loss excess-risk decay rate on a two-Gaussian problem.
    Rates {
        /// Optional pair definition; defaults to symmetric unit-variance
        /// classes at ±1 in one dimension.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Write the CSV table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Error decomposition for degrees 1..=k_max at a fixed sample size.
    Scale {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k_max: u32,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 20_000)]
        n_mc: usize,
        #[arg(long, default_value_t = 40_000)]
        ref_train: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Paired three-pipeline comparison on the tumor dataset.
    Wisconsin {
        #[arg(long)]
        config: PathBuf,
        /// Dataset path override.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write per-run confusion counts as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version requests are successes, everything else is usage
            let benign = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if benign {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Parse { .. } => 2,
        Error::InvalidInput(_) => 1,
        _ => 3,
    }
}

fn write_or_print(out: Option<&Path>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(Error::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Train {
            data,
            loss,
            degree,
            seed,
            config,
            out,
        } => {
            let dataset = load_csv(&data)?;
            let mut solver = SolverConfig::default();
            if let Some(path) = config {
                solver = ConfigMap::from_file(&path)?.solver_config(solver)?;
            }
            if let Some(s) = seed {
                solver.seed = s;
            }
            let loss = LossSpec::from(loss);
            let model = if degree <= 1 {
                train_linear(&dataset, &loss, &solver)?
            } else {
                train_polynomial(&dataset, degree, &loss, &solver)?
            };
            println!("{}", model.summary_line());
            if let Some(path) = out {
                std::fs::write(path, model.separator.to_text())?;
            }
            Ok(())
        }
        Command::Bounds {
            n,
            h,
            delta,
            p,
            tau,
            min_risk,
        } => {
            let report = vapnik_relative_bound(&VapnikBoundInputs {
                n,
                h,
                delta,
                p,
                tau,
                min_risk,
            })?;
            println!("{}", report.summary_line());
            Ok(())
        }
        Command::Complexity {
            eps,
            delta,
            d,
            min_risk,
            tau,
            p,
        } => {
            let h = statlearn::bounds::vc_dim_hinge_loss_family(d);
            let numeric = info_complexity_numeric(eps, delta, h, min_risk, tau, p)?;
            match info_complexity_asymptotic(eps, delta, d, min_risk, tau, p) {
                Ok(asymptotic) => println!(
                    "numeric_n={numeric} asymptotic={asymptotic:.6e} ratio={:.6}",
                    numeric as f64 / asymptotic
                ),
                Err(Error::OutOfRegime(note)) => {
                    println!("numeric_n={numeric} asymptotic=out-of-regime ({note})")
                }
                Err(other) => return Err(other),
            }
            Ok(())
        }
        Command::GaussSim {
            config,
            n_mc,
            seed,
            k,
            n_train,
            out,
        } => {
            let pair = ConfigMap::from_file(&config)?.gaussian_pair()?;
            let criterion = precision_difference_norm(&pair, MatrixNorm::Frobenius)?;
            let spectral = precision_difference_norm(&pair, MatrixNorm::Spectral)?;
            println!("criterion_frobenius={criterion:.6e} criterion_spectral={spectral:.6e}");
            let surface = bayes_quadratic_surface(&pair)?;
            let risk = weighted_risk_mc(&pair, &surface, n_mc, seed)?;
            println!(
                "bayes_risk={:.6e} se={:.6e} n_mc={n_mc}",
                risk.estimate, risk.standard_error
            );
            if let Some(k) = k {
                let solver = SolverConfig {
                    max_iterations: 2_000,
                    ..SolverConfig::default()
                };
                let est = algorithmic_error_estimate(&pair, k, n_train, n_mc, seed, &solver)?;
                println!(
                    "e_alg k={k} estimate={:.6e} raw={:.6e} se={:.6e} model_risk={:.6e}",
                    est.estimate, est.raw, est.standard_error, est.model_risk.estimate
                );
            }
            if let Some(path) = out {
                std::fs::write(path, surface.to_text())?;
            }
            Ok(())
        }
        Command::Rates {
            config,
            seed,
            trials,
            out,
        } => {
            let pair = match config {
                Some(path) => ConfigMap::from_file(&path)?.gaussian_pair()?,
                None => GaussianPair::new(
                    GaussianClass::new(vec![1.0], vec![vec![1.0]])?,
                    GaussianClass::new(vec![-1.0], vec![vec![1.0]])?,
                    0.5,
                    0.5,
                )?,
            };
            let cfg = SquaredRateConfig {
                trials,
                seed,
                ..SquaredRateConfig::default()
            };
            let report = squared_excess_rate(&pair, &cfg)?;

            // plug-in constants for the bound column, shared across rows
            let eval = sample_pair(&pair, 4_096, seed ^ 0x5EED)?;
            let (minimizer, _) = squared_risk_minimizer(&pair)?;
            let candidates = vec![minimizer];
            let tau = plug_in_tau(&eval, &candidates, &LossSpec::Squared, 4.0)?;
            let j = plug_in_min_risk(&eval, &candidates, &LossSpec::Squared)?;

            let mut csv = String::from(DecompositionReport::CSV_HEADER);
            csv.push('\n');
            for (i, &(n, err)) in report.fit.points.iter().enumerate() {
                let se = report.point_se[i];
                let bound = lifted_class_risk_bound(pair.dim(), n, 1, 0.05, 4.0, tau, j, 0.0, None)?;
                let row = DecompositionReport {
                    n: n as usize,
                    k: 1,
                    e_inf: err,
                    e_inf_se: se,
                    e_alg: 0.0,
                    e_alg_se: 0.0,
                    e_total: err,
                    e_total_se: se,
                    bound_rhs: bound,
                };
                csv.push_str(&row.csv_row());
                csv.push('\n');
            }
            csv.push_str(&format!(
                "# exponent={:.6} r_squared={:.6} (excess over the in-class optimum; e_alg not estimated)\n",
                report.fit.exponent, report.fit.r_squared
            ));
            write_or_print(out.as_deref(), &csv)
        }
        Command::Scale {
            config,
            n,
            k_max,
            trials,
            n_mc,
            ref_train,
            seed,
            out,
        } => {
            let pair = ConfigMap::from_file(&config)?.gaussian_pair()?;
            let params = ExperimentParams {
                trials,
                n_mc,
                ref_train_n: ref_train,
                solver: SolverConfig {
                    max_iterations: 1_500,
                    ..SolverConfig::default()
                },
                ..ExperimentParams::default()
            };
            let report = scale_search(&pair, &LossSpec::Hinge, n, k_max, &params, seed)?;
            let mut csv = String::from(DecompositionReport::CSV_HEADER);
            csv.push('\n');
            for row in &report.table {
                csv.push_str(&row.csv_row());
                csv.push('\n');
            }
            csv.push_str(&format!("# best_k={}\n", report.best_k));
            write_or_print(out.as_deref(), &csv)
        }
        Command::Wisconsin {
            config,
            data,
            seed,
            out,
        } => {
            let map = ConfigMap::from_file(&config)?;
            let mut cfg: ExperimentConfig = map.experiment_config(data.as_deref())?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let load = load_wisconsin(&cfg.dataset_path)?;
            let report = reproduce_table_on(&load, &cfg)?;
            println!("{report}");
            if let Some(path) = out {
                let mut csv = String::from(
                    "rep,pipeline,false_pos,false_neg,true_pos,true_neg,errors,error_rate\n",
                );
                for run in &report.runs {
                    for (name, c) in [
                        ("linear_full", &run.full_linear),
                        ("linear_reduced", &run.reduced_linear),
                        ("quadratic_reduced", &run.reduced_quadratic),
                    ] {
                        csv.push_str(&format!(
                            "{},{},{},{},{},{},{},{:.16e}\n",
                            run.repetition,
                            name,
                            c.false_pos,
                            c.false_neg,
                            c.true_pos,
                            c.true_neg,
                            c.error_count(),
                            c.error_rate()
                        ));
                    }
                }
                std::fs::write(path, csv)?;
            }
            Ok(())
        }
    }
}
