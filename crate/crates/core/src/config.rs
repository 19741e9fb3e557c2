//! Line-oriented `key = value` configuration files with `#` comments.

use std::collections::BTreeMap;
use std::path::Path;

use crate::data::ExperimentConfig;
use crate::error::{Error, Result};
use crate::gaussian::{GaussianClass, GaussianPair};
use crate::model::LossSpec;
use crate::solver::SolverConfig;

/// Parsed key/value configuration.
#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                msg: format!("expected key = value, got {line:?}"),
            })?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.parse_with(key, |s| s.parse::<f64>().ok())
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>> {
        self.parse_with(key, |s| s.parse::<u64>().ok())
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.parse_with(key, |s| s.parse::<usize>().ok())
    }

    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.parse_with(key, |s| {
            s.split(',')
                .map(|t| t.trim().parse::<f64>().ok())
                .collect::<Option<Vec<f64>>>()
        })
    }

    fn parse_with<T>(&self, key: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => parse(raw)
                .map(Some)
                .ok_or_else(|| Error::invalid(format!("bad value for {key}: {raw:?}"))),
        }
    }

    fn require<T>(&self, key: &str, value: Option<T>) -> Result<T> {
        value.ok_or_else(|| Error::invalid(format!("missing required config key {key}")))
    }

    /// Solver settings; any omitted key keeps the supplied default.
    pub fn solver_config(&self, base: SolverConfig) -> Result<SolverConfig> {
        let mut cfg = base;
        if let Some(v) = self.usize("max_iterations")? {
            cfg.max_iterations = v;
        }
        if let Some(v) = self.f64("step_scale")? {
            cfg.step_scale = v;
        }
        if let Some(v) = self.f64("l1_bound")? {
            cfg.l1_bound = Some(v);
        }
        if let Some(v) = self.u64("seed")? {
            cfg.seed = v;
        }
        if let Some(v) = self.f64("tolerance")? {
            cfg.tolerance = v;
        }
        if let Some(v) = self.usize("lift_dim_cap")? {
            cfg.lift_dim_cap = v;
        }
        Ok(cfg)
    }

    pub fn loss(&self) -> Result<LossSpec> {
        match self.get("loss").unwrap_or("hinge") {
            "hinge" => Ok(LossSpec::Hinge),
            "squared" => Ok(LossSpec::Squared),
            other => Err(Error::invalid(format!(
                "loss must be hinge or squared in config files, got {other:?}"
            ))),
        }
    }

    /// Two-Gaussian setup: `dim`, `mean1`, `cov1` (row-major), `mean2`,
    /// `cov2`, `beta1`, `beta2`, and optional `prior1`/`prior2`.
    pub fn gaussian_pair(&self) -> Result<GaussianPair> {
        let dim = self.require("dim", self.usize("dim")?)?;
        let class = |mean_key: &str, cov_key: &str| -> Result<GaussianClass> {
            let mean = self.require(mean_key, self.f64_list(mean_key)?)?;
            let cov_flat = self.require(cov_key, self.f64_list(cov_key)?)?;
            if mean.len() != dim || cov_flat.len() != dim * dim {
                return Err(Error::invalid(format!(
                    "{mean_key}/{cov_key} must have lengths {dim} and {}",
                    dim * dim
                )));
            }
            let rows: Vec<Vec<f64>> = cov_flat.chunks(dim).map(<[f64]>::to_vec).collect();
            GaussianClass::new(mean, rows)
        };
        let pos = class("mean1", "cov1")?;
        let neg = class("mean2", "cov2")?;
        let beta1 = self.f64("beta1")?.unwrap_or(0.5);
        let beta2 = self.f64("beta2")?.unwrap_or(1.0 - beta1);
        match (self.f64("prior1")?, self.f64("prior2")?) {
            (None, None) => GaussianPair::new(pos, neg, beta1, beta2),
            (p1, p2) => {
                let prior1 = p1.unwrap_or_else(|| 1.0 - p2.unwrap_or(0.5));
                let prior2 = p2.unwrap_or(1.0 - prior1);
                GaussianPair::with_priors(pos, neg, beta1, beta2, prior1, prior2)
            }
        }
    }

    /// Tumor-table experiment settings; `dataset` is required unless a
    /// path override is supplied by the caller.
    pub fn experiment_config(&self, dataset_override: Option<&Path>) -> Result<ExperimentConfig> {
        let path = match dataset_override {
            Some(p) => p.to_path_buf(),
            None => self
                .get("dataset")
                .ok_or_else(|| Error::invalid("missing required config key dataset"))?
                .into(),
        };
        let mut cfg = ExperimentConfig::new(path);
        if let Some(v) = self.u64("seed")? {
            cfg.seed = v;
        }
        if let Some(v) = self.usize("n_train")? {
            cfg.n_train = v;
        }
        if let Some(v) = self.usize("feature_count")? {
            cfg.feature_count = v;
        }
        if let Some(v) = self.usize("folds")? {
            cfg.folds = v;
        }
        if let Some(v) = self.usize("repetitions")? {
            cfg.repetitions = v;
        }
        cfg.loss = self.loss()?;
        cfg.solver = self.solver_config(cfg.solver)?;
        Ok(cfg)
    }
}
