//! Run report: resolved parameters, truncation diagnostics, eigensolver
//! certificates, output paths and wall time, emitted for every run. The
//! report goes to stdout when the CSV went to a file, to stderr when the CSV
//! occupied stdout.

use std::time::Instant;

use kerrmodes::model::NormalModes;
use kerrmodes::ModelParams;

use crate::csvout::{fmt_f64, version_string};

pub struct RunReport {
    command: String,
    entries: Vec<(String, String)>,
    started: Instant,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            entries: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.entries.push((key.to_string(), value.into()));
    }

    pub fn push_f64(&mut self, key: &str, value: f64) {
        self.push(key, fmt_f64(value));
    }

    pub fn push_params(&mut self, params: &ModelParams, normal: &NormalModes) {
        self.push_f64("omega1", params.omega1());
        self.push_f64("omega2", params.omega2());
        match params.rotation() {
            Some(w) => self.push_f64("omega", w),
            None => self.push("omega", ""),
        }
        self.push_f64("lambda1", params.lambda1());
        self.push_f64("lambda2", params.lambda2());
        self.push_f64("beta1", params.beta1());
        self.push_f64("beta2", params.beta2());
        self.push("omega_plus", fmt_complex(normal.omega_plus));
        self.push("omega_minus", fmt_complex(normal.omega_minus));
        self.push("delta", fmt_complex(normal.delta));
        self.push("stable", normal.stable.to_string());
    }

    /// Print the report, with the final status and wall time attached.
    pub fn emit(mut self, status: &str, to_stderr: bool) {
        self.push("status", status);
        let wall = self.started.elapsed().as_secs_f64();
        self.push("wall_time_s", format!("{wall:.3}"));
        let mut text = String::new();
        text.push_str(&format!("---- run report: {} ----\n", self.command));
        text.push_str(&format!("version = {}\n", version_string()));
        for (key, value) in &self.entries {
            text.push_str(&format!("{key} = {value}\n"));
        }
        if to_stderr {
            eprint!("{text}");
        } else {
            print!("{text}");
        }
    }
}

pub fn fmt_complex(z: num_complex::Complex64) -> String {
    if z.im == 0.0 {
        fmt_f64(z.re)
    } else {
        format!("{}{}{}i", fmt_f64(z.re), if z.im < 0.0 { "-" } else { "+" }, fmt_f64(z.im.abs()))
    }
}
