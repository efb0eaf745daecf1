//! Run configuration: a flat key = value text format with exactly the keys
//! below, no silent typo tolerance. The quadratic coupling comes either as a
//! rotation frequency `omega` or as the direct pair `lambda1`/`lambda2`;
//! specifying both routes is an error.

use std::path::PathBuf;

use kerrmodes::ModelParams;

use crate::CliError;

/// Resolved run configuration with defaults for every key.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub omega1: f64,
    pub omega2: f64,
    /// Rotation frequency when set explicitly.
    pub omega: Option<f64>,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub beta1: f64,
    pub beta2: f64,
    pub alpha1_re: f64,
    pub alpha1_im: f64,
    pub alpha2_re: f64,
    pub alpha2_im: f64,
    pub m_cut: usize,
    pub edge_weight_threshold: f64,
    pub truncation_weight_threshold: f64,
    pub t_max: f64,
    pub n_points: usize,
    pub csv_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            omega1: 1.0,
            omega2: 0.5,
            omega: None,
            lambda1: None,
            lambda2: None,
            beta1: 0.1,
            beta2: 0.1,
            alpha1_re: 1.0,
            alpha1_im: 0.0,
            alpha2_re: 1.0,
            alpha2_im: 0.0,
            m_cut: 20,
            edge_weight_threshold: 1e-8,
            truncation_weight_threshold: 1e-8,
            t_max: 30.0,
            n_points: 601,
            csv_path: None,
            svg_path: None,
        }
    }
}

/// Rotation frequency used when neither coupling route is given explicitly.
pub const DEFAULT_ROTATION: f64 = 0.15;

pub const KNOWN_KEYS: &[&str] = &[
    "omega1",
    "omega2",
    "omega",
    "lambda1",
    "lambda2",
    "beta1",
    "beta2",
    "alpha1_re",
    "alpha1_im",
    "alpha2_re",
    "alpha2_im",
    "m_cut",
    "edge_weight_threshold",
    "truncation_weight_threshold",
    "t_max",
    "n_points",
    "csv_path",
    "svg_path",
];

impl RunConfig {
    /// Apply one key = value assignment.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        let parse_f64 = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| CliError::Config(format!("key '{key}': '{v}' is not a number")))
        };
        let parse_usize = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| CliError::Config(format!("key '{key}': '{v}' is not a nonnegative integer")))
        };
        match key {
            "omega1" => self.omega1 = parse_f64(value)?,
            "omega2" => self.omega2 = parse_f64(value)?,
            "omega" => self.omega = Some(parse_f64(value)?),
            "lambda1" => self.lambda1 = Some(parse_f64(value)?),
            "lambda2" => self.lambda2 = Some(parse_f64(value)?),
            "beta1" => self.beta1 = parse_f64(value)?,
            "beta2" => self.beta2 = parse_f64(value)?,
            "alpha1_re" => self.alpha1_re = parse_f64(value)?,
            "alpha1_im" => self.alpha1_im = parse_f64(value)?,
            "alpha2_re" => self.alpha2_re = parse_f64(value)?,
            "alpha2_im" => self.alpha2_im = parse_f64(value)?,
            "m_cut" => self.m_cut = parse_usize(value)?,
            "edge_weight_threshold" => self.edge_weight_threshold = parse_f64(value)?,
            "truncation_weight_threshold" => self.truncation_weight_threshold = parse_f64(value)?,
            "t_max" => self.t_max = parse_f64(value)?,
            "n_points" => self.n_points = parse_usize(value)?,
            "csv_path" => {
                self.csv_path = if value.is_empty() {
                    None
                } else {
                    Some(PathBuf::from(value))
                }
            }
            "svg_path" => {
                self.svg_path = if value.is_empty() {
                    None
                } else {
                    Some(PathBuf::from(value))
                }
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown configuration key '{other}' (known keys: {})",
                    KNOWN_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Parse a config file body: blank lines and lines starting with '#' are
    /// skipped, everything else must be `key = value`.
    pub fn apply_file(&mut self, body: &str, origin: &str) -> Result<(), CliError> {
        for (lineno, raw) in body.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "{origin}:{}: expected 'key = value', got '{line}'",
                    lineno + 1
                )));
            };
            self.apply(key.trim(), value)
                .map_err(|e| match e {
                    CliError::Config(msg) => {
                        CliError::Config(format!("{origin}:{}: {msg}", lineno + 1))
                    }
                    other => other,
                })?;
        }
        Ok(())
    }

    /// Apply a `--set key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), CliError> {
        let Some((key, value)) = assignment.split_once('=') else {
            return Err(CliError::Config(format!(
                "--set expects key=value, got '{assignment}'"
            )));
        };
        self.apply(key.trim(), value)
    }

    /// Resolve the coupling route into model parameters.
    pub fn params(&self) -> Result<ModelParams, CliError> {
        let lambda_given = self.lambda1.is_some() || self.lambda2.is_some();
        let build = match (self.omega, lambda_given) {
            (Some(_), true) => {
                return Err(CliError::Config(
                    "specify the coupling either as omega or as lambda1/lambda2, not both".into(),
                ))
            }
            (Some(w), false) => {
                ModelParams::from_rotation(self.omega1, self.omega2, w, self.beta1, self.beta2)
            }
            (None, true) => ModelParams::from_couplings(
                self.omega1,
                self.omega2,
                self.lambda1.unwrap_or(0.0),
                self.lambda2.unwrap_or(0.0),
                self.beta1,
                self.beta2,
            ),
            (None, false) => ModelParams::from_rotation(
                self.omega1,
                self.omega2,
                DEFAULT_ROTATION,
                self.beta1,
                self.beta2,
            ),
        };
        build.map_err(|e| CliError::Config(e.to_string()))
    }

    /// Grid and numeric sanity shared by every command.
    pub fn validate_numerics(&self) -> Result<(), CliError> {
        if self.n_points < 2 {
            return Err(CliError::Config(format!(
                "n_points must be at least 2, got {}",
                self.n_points
            )));
        }
        if self.t_max <= 0.0 || self.t_max.is_nan() {
            return Err(CliError::Config(format!(
                "t_max must be positive, got {}",
                self.t_max
            )));
        }
        if self.truncation_weight_threshold < 0.0 || self.edge_weight_threshold < 0.0 {
            return Err(CliError::Config("thresholds must be nonnegative".into()));
        }
        Ok(())
    }

    /// The key = value echo placed at the top of every emitted file,
    /// in the fixed KNOWN_KEYS order with the coupling keys resolved.
    pub fn echo_entries(&self, params: &ModelParams) -> Vec<(String, String)> {
        let path_str = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default()
        };
        let mut rows: Vec<(String, String)> = Vec::new();
        rows.push(("omega1".into(), crate::csvout::fmt_f64(self.omega1)));
        rows.push(("omega2".into(), crate::csvout::fmt_f64(self.omega2)));
        match params.rotation() {
            Some(w) => rows.push(("omega".into(), crate::csvout::fmt_f64(w))),
            None => rows.push(("omega".into(), String::new())),
        }
        rows.push(("lambda1".into(), crate::csvout::fmt_f64(params.lambda1())));
        rows.push(("lambda2".into(), crate::csvout::fmt_f64(params.lambda2())));
        rows.push(("beta1".into(), crate::csvout::fmt_f64(self.beta1)));
        rows.push(("beta2".into(), crate::csvout::fmt_f64(self.beta2)));
        for (key, value) in [
            ("alpha1_re", self.alpha1_re),
            ("alpha1_im", self.alpha1_im),
            ("alpha2_re", self.alpha2_re),
            ("alpha2_im", self.alpha2_im),
        ] {
            rows.push((key.into(), crate::csvout::fmt_f64(value)));
        }
        rows.push(("m_cut".into(), self.m_cut.to_string()));
        rows.push((
            "edge_weight_threshold".into(),
            crate::csvout::fmt_f64(self.edge_weight_threshold),
        ));
        rows.push((
            "truncation_weight_threshold".into(),
            crate::csvout::fmt_f64(self.truncation_weight_threshold),
        ));
        rows.push(("t_max".into(), crate::csvout::fmt_f64(self.t_max)));
        rows.push(("n_points".into(), self.n_points.to_string()));
        rows.push(("csv_path".into(), path_str(&self.csv_path)));
        rows.push(("svg_path".into(), path_str(&self.svg_path)));
        rows
    }
}
