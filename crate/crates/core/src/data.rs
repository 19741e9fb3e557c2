//! Dataset ingestion (the UCI tumor-classification file format and generic
//! CSV), seeded train/test splitting, and the three-pipeline error-rate
//! comparison table.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{confusion, ConfusionCounts, Dataset, LabeledSample, LossSpec};
use crate::seed::derive_seed;
use crate::solver::{select_features, train_linear, train_polynomial, SolverConfig};

/// Loaded dataset plus ingestion accounting.
#[derive(Debug, Clone)]
pub struct WisconsinLoad {
    pub data: Dataset,
    /// Non-blank records read, including dropped ones.
    pub raw_records: usize,
    /// Records dropped for a `?` (missing attribute) field.
    pub dropped_missing: usize,
}

/// Parse the 11-field comma-separated tumor file: id, nine integer
/// features in 1..=10, and a class code (2 → label −1, 4 → label +1).
/// Records containing `?` are dropped and counted; the id is discarded.
pub fn load_wisconsin(path: &Path) -> Result<WisconsinLoad> {
    let text = std::fs::read_to_string(path)?;
    parse_wisconsin(&text)
}

pub fn parse_wisconsin(text: &str) -> Result<WisconsinLoad> {
    let mut samples = Vec::new();
    let mut raw_records = 0usize;
    let mut dropped_missing = 0usize;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        raw_records += 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 11 comma-separated fields, got {}", fields.len()),
            });
        }
        if fields.iter().any(|f| f.trim() == "?") {
            dropped_missing += 1;
            continue;
        }
        fields[0].trim().parse::<i64>().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad id field {:?}", fields[0]),
        })?;
        let mut features = Vec::with_capacity(9);
        for f in &fields[1..10] {
            let v: i64 = f.trim().parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad feature field {f:?}"),
            })?;
            if !(1..=10).contains(&v) {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("feature value {v} outside 1..=10"),
                });
            }
            features.push(v as f64);
        }
        let label = match fields[10].trim() {
            "2" => -1.0,
            "4" => 1.0,
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("class code {other:?} is neither 2 nor 4"),
                })
            }
        };
        samples.push(LabeledSample::new(features, label)?);
    }
    if samples.is_empty() {
        return Err(Error::invalid("no usable records in file"));
    }
    Ok(WisconsinLoad {
        data: Dataset::new(samples, 9)?,
        raw_records,
        dropped_missing,
    })
}

/// Generic CSV with header `x1,...,xd,y` and one numeric row per sample.
pub fn load_csv(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text)
}

pub fn parse_csv(text: &str) -> Result<Dataset> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Parse {
        line: 1,
        msg: "empty CSV".into(),
    })?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() < 2 || cols.last() != Some(&"y") {
        return Err(Error::Parse {
            line: 1,
            msg: "expected header x1,...,xd,y".into(),
        });
    }
    let d = cols.len() - 1;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let vals: Vec<f64> = line
            .split(',')
            .map(|t| {
                t.trim().parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad number {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if vals.len() != d + 1 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected {} values, got {}", d + 1, vals.len()),
            });
        }
        ys.push(vals[d]);
        xs.push(vals[..d].to_vec());
    }
    Dataset::from_parts(xs, ys)
}

/// A seeded train/test split.
#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub train: Dataset,
    pub test: Dataset,
    /// Samples beyond train plus test (test takes at most `n_train`).
    pub discarded: usize,
}

/// Shuffle with the seed, take the first `n_train` samples as the training
/// set and the next `min(n_train, remainder)` as the test set; anything
/// beyond that is discarded and counted.
pub fn split(data: &Dataset, n_train: usize, seed: u64) -> Result<SplitOutcome> {
    if n_train == 0 || n_train >= data.len() {
        return Err(Error::invalid(format!(
            "n_train must lie in 1..{} (need a non-empty test set), got {n_train}",
            data.len()
        )));
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    {
        use rand::seq::SliceRandom;
        let mut rng = crate::seed::rng_from(seed);
        order.shuffle(&mut rng);
    }
    let n_test = n_train.min(data.len() - n_train);
    let train = data.subset(&order[..n_train])?;
    let test = data.subset(&order[n_train..n_train + n_test])?;
    Ok(SplitOutcome {
        train,
        test,
        discarded: data.len() - n_train - n_test,
    })
}

/// Settings for the three-pipeline comparison on the tumor data.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub dataset_path: PathBuf,
    pub seed: u64,
    pub n_train: usize,
    pub feature_count: usize,
    pub folds: usize,
    pub repetitions: usize,
    pub loss: LossSpec,
    pub solver: SolverConfig,
}

impl ExperimentConfig {
    pub fn new(dataset_path: impl Into<PathBuf>) -> Self {
        Self {
            dataset_path: dataset_path.into(),
            seed: 0,
            n_train: 349,
            feature_count: 3,
            folds: 5,
            repetitions: 10,
            loss: LossSpec::Hinge,
            // the solver equilibrates feature columns internally, so the
            // default step scale works for the 1..10 integer range
            solver: SolverConfig {
                max_iterations: 4_000,
                ..SolverConfig::default()
            },
        }
    }
}

/// One repetition's outcomes. The same split feeds all three pipelines so
/// the comparison is paired.
#[derive(Debug, Clone)]
pub struct TableRun {
    pub repetition: usize,
    pub selected_features: Vec<usize>,
    pub full_linear: ConfusionCounts,
    pub reduced_linear: ConfusionCounts,
    pub reduced_quadratic: ConfusionCounts,
}

/// Aggregated comparison report.
#[derive(Debug, Clone)]
pub struct TableReport {
    pub runs: Vec<TableRun>,
    pub raw_records: usize,
    pub dropped_missing: usize,
    pub usable_records: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub discarded_per_split: usize,
    pub median_full_linear: f64,
    pub median_reduced_linear: f64,
    pub median_reduced_quadratic: f64,
    /// `err(reduced quadratic) < err(full linear) < err(reduced linear)`
    /// on the medians.
    pub ordering_holds: bool,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Run the paired three-pipeline comparison: a full-feature affine model,
/// an affine model on greedily selected features, and a degree-2
/// polynomial model on the same selected features.
pub fn reproduce_table(cfg: &ExperimentConfig) -> Result<TableReport> {
    let load = load_wisconsin(&cfg.dataset_path)?;
    reproduce_table_on(&load, cfg)
}

/// Same as [`reproduce_table`] but on an already-loaded dataset.
pub fn reproduce_table_on(load: &WisconsinLoad, cfg: &ExperimentConfig) -> Result<TableReport> {
    if cfg.repetitions == 0 {
        return Err(Error::invalid("at least one repetition required"));
    }
    if cfg.n_train >= load.data.len() {
        return Err(Error::invalid(format!(
            "n_train = {} but only {} usable records",
            cfg.n_train,
            load.data.len()
        )));
    }
    let mut runs = Vec::with_capacity(cfg.repetitions);
    let mut split_info = (0usize, 0usize);
    for rep in 0..cfg.repetitions {
        let rep_seed = derive_seed(cfg.seed, rep as u64);
        let parts = split(&load.data, cfg.n_train, rep_seed)?;
        split_info = (parts.test.len(), parts.discarded);

        let solver_a = cfg.solver.with_derived_seed(rep_seed ^ 0xA);
        let model_a = train_linear(&parts.train, &cfg.loss, &solver_a)?;
        let full_linear = confusion(&parts.test, &model_a.separator)?;

        let solver_sel = cfg.solver.with_derived_seed(rep_seed ^ 0xB);
        let selected = select_features(
            &parts.train,
            cfg.feature_count,
            &cfg.loss,
            &solver_sel,
            cfg.folds,
        )?;
        let train_sel = parts.train.select_columns(&selected)?;
        let test_sel = parts.test.select_columns(&selected)?;

        let solver_b = cfg.solver.with_derived_seed(rep_seed ^ 0xC);
        let model_b = train_linear(&train_sel, &cfg.loss, &solver_b)?;
        let reduced_linear = confusion(&test_sel, &model_b.separator)?;

        let solver_c = cfg.solver.with_derived_seed(rep_seed ^ 0xD);
        let model_c = train_polynomial(&train_sel, 2, &cfg.loss, &solver_c)?;
        let reduced_quadratic = confusion(&test_sel, &model_c.separator)?;

        runs.push(TableRun {
            repetition: rep,
            selected_features: selected,
            full_linear,
            reduced_linear,
            reduced_quadratic,
        });
    }

    let mut full: Vec<f64> = runs.iter().map(|r| r.full_linear.error_rate()).collect();
    let mut reduced: Vec<f64> = runs.iter().map(|r| r.reduced_linear.error_rate()).collect();
    let mut quad: Vec<f64> = runs
        .iter()
        .map(|r| r.reduced_quadratic.error_rate())
        .collect();
    let median_full_linear = median(&mut full);
    let median_reduced_linear = median(&mut reduced);
    let median_reduced_quadratic = median(&mut quad);

    Ok(TableReport {
        raw_records: load.raw_records,
        dropped_missing: load.dropped_missing,
        usable_records: load.data.len(),
        n_train: cfg.n_train,
        n_test: split_info.0,
        discarded_per_split: split_info.1,
        median_full_linear,
        median_reduced_linear,
        median_reduced_quadratic,
        ordering_holds: median_reduced_quadratic < median_full_linear
            && median_full_linear < median_reduced_linear,
        runs,
    })
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "records: {} read, {} dropped for missing values, {} usable",
            self.raw_records, self.dropped_missing, self.usable_records
        )?;
        writeln!(
            f,
            "split per repetition: {} train / {} test ({} discarded)",
            self.n_train, self.n_test, self.discarded_per_split
        )?;
        writeln!(
            f,
            "Machine \\ Error rate            FP    FN    TP    TN   ERR   %ERR"
        )?;
        let row = |f: &mut fmt::Formatter<'_>, name: &str, c: &ConfusionCounts| {
            writeln!(
                f,
                "{name:<28} {:>5} {:>5} {:>5} {:>5} {:>5}  {:.4}",
                c.false_pos,
                c.false_neg,
                c.true_pos,
                c.true_neg,
                c.error_count(),
                c.error_rate()
            )
        };
        for run in &self.runs {
            writeln!(
                f,
                "run {} (selected features: {:?})",
                run.repetition, run.selected_features
            )?;
            row(f, "  9-variable linear", &run.full_linear)?;
            row(f, "  3-variable linear", &run.reduced_linear)?;
            row(f, "  3-variable quadratic", &run.reduced_quadratic)?;
        }
        writeln!(
            f,
            "median %ERR: full linear {:.4} | reduced linear {:.4} | reduced quadratic {:.4}",
            self.median_full_linear, self.median_reduced_linear, self.median_reduced_quadratic
        )?;
        writeln!(
            f,
            "ordering err(quad-reduced) < err(linear-full) < err(linear-reduced): {}",
            self.ordering_holds
        )
    }
}
