//! Flat key-value configuration files: one `key = value` per line,
//! `#` comments, unknown keys rejected. This is the format `hyper`
//! emits and `fit --config` consumes; command-line flags override file
//! values.

use bdc::likelihood::{LikelihoodConfig, Mode};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    pub delta1: f64,
    pub delta2: f64,
    pub mu: f64,
    pub beta: f64,
    pub zeta: f64,
    pub gamma_rate: f64,
    pub theta_rate: f64,
    pub mode: Mode,
    pub repulsion: bool,
    /// elbow-selected K recorded for reproducibility (optional)
    pub k_elbow: Option<usize>,
}

impl ConfigFile {
    pub fn from_selection(cfg: &LikelihoodConfig, k_elbow: Option<usize>) -> ConfigFile {
        ConfigFile {
            delta1: cfg.delta1,
            delta2: cfg.delta2,
            mu: cfg.mu,
            beta: cfg.beta,
            zeta: cfg.zeta,
            gamma_rate: cfg.gamma_rate,
            theta_rate: cfg.theta_rate,
            mode: cfg.mode,
            repulsion: cfg.repulsion,
            k_elbow,
        }
    }

    pub fn to_likelihood_config(&self) -> Result<LikelihoodConfig, CliError> {
        LikelihoodConfig::new(
            self.delta1,
            self.delta2,
            self.mu,
            self.beta,
            self.zeta,
            self.gamma_rate,
            self.theta_rate,
            self.mode,
            self.repulsion,
        )
        .map_err(|e| CliError::Data(format!("invalid likelihood configuration: {e}")))
    }

    pub fn render(&self) -> String {
        let mut s = String::from("# bdc likelihood configuration\n");
        let _ = writeln!(s, "delta1 = {}", self.delta1);
        let _ = writeln!(s, "delta2 = {}", self.delta2);
        let _ = writeln!(s, "mu = {}", self.mu);
        let _ = writeln!(s, "beta = {}", self.beta);
        let _ = writeln!(s, "zeta = {}", self.zeta);
        let _ = writeln!(s, "gamma_rate = {}", self.gamma_rate);
        let _ = writeln!(s, "theta_rate = {}", self.theta_rate);
        let _ = writeln!(s, "mode = {}", match self.mode {
            Mode::Quadratic => "quadratic",
            Mode::Linear => "linear",
        });
        let _ = writeln!(s, "repulsion = {}", self.repulsion);
        if let Some(k) = self.k_elbow {
            let _ = writeln!(s, "k_elbow = {k}");
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.render())
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    }

    pub fn read(path: &Path) -> Result<ConfigFile, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Data(format!(
                    "{}:{}: expected 'key = value'",
                    path.display(),
                    lineno + 1
                )));
            };
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        let mut take_f64 = |key: &str| -> Result<f64, CliError> {
            map.remove(key)
                .ok_or_else(|| CliError::Data(format!("{}: missing key '{key}'", path.display())))?
                .parse::<f64>()
                .map_err(|_| CliError::Data(format!("{}: key '{key}' is not a number", path.display())))
        };
        let delta1 = take_f64("delta1")?;
        let delta2 = take_f64("delta2")?;
        let mu = take_f64("mu")?;
        let beta = take_f64("beta")?;
        let zeta = take_f64("zeta")?;
        let gamma_rate = take_f64("gamma_rate")?;
        let theta_rate = take_f64("theta_rate")?;
        let mode = match map.remove("mode").as_deref() {
            Some("quadratic") => Mode::Quadratic,
            Some("linear") | None => Mode::Linear,
            Some(other) => {
                return Err(CliError::Data(format!(
                    "{}: unknown mode '{other}'",
                    path.display()
                )))
            }
        };
        let repulsion = match map.remove("repulsion").as_deref() {
            Some("true") | None => true,
            Some("false") => false,
            Some(other) => {
                return Err(CliError::Data(format!(
                    "{}: repulsion must be true or false, got '{other}'",
                    path.display()
                )))
            }
        };
        let k_elbow = match map.remove("k_elbow") {
            Some(v) => Some(v.parse::<usize>().map_err(|_| {
                CliError::Data(format!("{}: k_elbow is not an integer", path.display()))
            })?),
            None => None,
        };
        if let Some(key) = map.keys().next() {
            return Err(CliError::Data(format!("{}: unknown key '{key}'", path.display())));
        }
        Ok(ConfigFile {
            delta1,
            delta2,
            mu,
            beta,
            zeta,
            gamma_rate,
            theta_rate,
            mode,
            repulsion,
            k_elbow,
        })
    }
}
