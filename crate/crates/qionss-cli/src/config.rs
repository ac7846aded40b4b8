//! Config ingestion: flat `section.key = value` text, or JSON when the file
//! starts with `{`. Both flatten to dotted keys; unknown keys are rejected so
//! typos surface as parse errors.

use std::collections::BTreeMap;
use std::path::Path;

use qionss::openqsys::{markov_kappa, Convention, CouplingParams, ModelParams, StateSpaceModel};
use qionss::quantize_lc::{resonant_frequency, LCParams};
use qionss::tline::{char_impedance, TLineParams};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
enum Scalar {
    Number(f64),
    Text(String),
}

#[derive(Debug)]
pub struct Config {
    entries: BTreeMap<String, Scalar>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::parse(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    pub fn from_str(text: &str) -> Result<Self, CliError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_flat(text)
        }
    }

    fn from_flat(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::parse(format!("config line {lineno}: expected `key = value`"))
            })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(CliError::parse(format!(
                    "config line {lineno}: empty key or value"
                )));
            }
            let scalar = match value.parse::<f64>() {
                Ok(x) if x.is_finite() => Scalar::Number(x),
                Ok(x) => {
                    return Err(CliError::parse(format!(
                        "config line {lineno}: field {key}: non-finite number {x}"
                    )))
                }
                Err(_) => Scalar::Text(value.to_string()),
            };
            if entries.insert(key.to_string(), scalar).is_some() {
                return Err(CliError::parse(format!(
                    "config line {lineno}: duplicate field {key}"
                )));
            }
        }
        Ok(Config { entries })
    }

    fn from_json(text: &str) -> Result<Self, CliError> {
        let root: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CliError::parse(format!("config: invalid JSON: {e}")))?;
        let obj = root
            .as_object()
            .ok_or_else(|| CliError::parse("config: JSON root must be an object"))?;

        let mut entries = BTreeMap::new();
        for (section, value) in obj {
            match value {
                serde_json::Value::Object(fields) => {
                    for (name, v) in fields {
                        let key = format!("{section}.{name}");
                        entries.insert(key.clone(), json_scalar(&key, v)?);
                    }
                }
                other => {
                    entries.insert(section.clone(), json_scalar(section, other)?);
                }
            }
        }
        Ok(Config { entries })
    }

    fn take(&mut self, key: &str) -> Option<Scalar> {
        self.entries.remove(key)
    }

    pub fn take_f64(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(Scalar::Number(x)) => Ok(Some(x)),
            Some(Scalar::Text(t)) => Err(CliError::parse(format!(
                "config: field {key}: expected a number, got {t:?}"
            ))),
        }
    }

    pub fn require_f64(&mut self, key: &str) -> Result<f64, CliError> {
        self.take_f64(key)?
            .ok_or_else(|| CliError::parse(format!("config: missing required field {key}")))
    }

    pub fn take_string(&mut self, key: &str) -> Result<Option<String>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(Scalar::Text(t)) => Ok(Some(t)),
            Some(Scalar::Number(x)) => Err(CliError::parse(format!(
                "config: field {key}: expected a word, got number {x}"
            ))),
        }
    }

    pub fn take_usize(&mut self, key: &str) -> Result<Option<usize>, CliError> {
        match self.take_f64(key)? {
            None => Ok(None),
            Some(x) if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 => Ok(Some(x as usize)),
            Some(x) => Err(CliError::parse(format!(
                "config: field {key}: expected a non-negative integer, got {x}"
            ))),
        }
    }

    /// Reject unknown keys so typos do not silently change a run. Keys from
    /// known blocks a subcommand does not use are fine: one config file can
    /// serve model/freq/time alike.
    pub fn finish(self) -> Result<(), CliError> {
        for key in self.entries.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::parse(format!("config: unknown field {key}")));
            }
        }
        Ok(())
    }
}

const KNOWN_KEYS: &[&str] = &[
    "circuit.L",
    "circuit.C",
    "circuit.Cc",
    "circuit.Z0",
    "circuit.Lprime",
    "circuit.Cprime",
    "circuit.ell",
    "drive.Omega",
    "drive.beta_re",
    "drive.beta_im",
    "drive.kind",
    "drive.omega_mod",
    "drive.t_on",
    "drive.t_off",
    "drive.noise_amplitude",
    "sim.t_end",
    "sim.dt",
    "sim.n_traj",
    "sim.seed",
    "sim.a0_re",
    "sim.a0_im",
    "sweep.omega_min",
    "sweep.omega_max",
    "sweep.n_points",
    "sweep.scale",
    "convention",
    "model.kappa",
];

fn json_scalar(key: &str, v: &serde_json::Value) -> Result<Scalar, CliError> {
    match v {
        serde_json::Value::Number(n) => n
            .as_f64()
            .filter(|x| x.is_finite())
            .map(Scalar::Number)
            .ok_or_else(|| CliError::parse(format!("config: field {key}: invalid number"))),
        serde_json::Value::String(s) => Ok(Scalar::Text(s.clone())),
        other => Err(CliError::parse(format!(
            "config: field {key}: expected a number or string, got {other}"
        ))),
    }
}

/// The resolved physical model shared by every subcommand.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub kappa: f64,
    pub delta: f64,
    pub carrier: f64,
    pub convention: Convention,
    pub params: ModelParams,
    pub warning: Option<String>,
}

impl ModelSpec {
    pub fn state_space(&self) -> StateSpaceModel {
        qionss::openqsys::build_state_space_with(&self.params, self.convention)
    }
}

/// Resolve the circuit/drive blocks into (κ, Δ) and the convention.
///
/// κ comes from the Markov formula unless `model.kappa` overrides it;
/// Ω defaults to ω_R (drive at resonance).
pub fn resolve_model(cfg: &mut Config) -> Result<ModelSpec, CliError> {
    let l = cfg.require_f64("circuit.L")?;
    let c = cfg.require_f64("circuit.C")?;
    let lc = LCParams::new(l, c).map_err(CliError::physics)?;
    let omega_r = resonant_frequency(&lc);

    let z0 = match cfg.take_f64("circuit.Z0")? {
        Some(z0) => Some(z0),
        None => {
            let lp = cfg.take_f64("circuit.Lprime")?;
            let cp = cfg.take_f64("circuit.Cprime")?;
            match (lp, cp) {
                (Some(lp), Some(cp)) => {
                    let ell = cfg.take_f64("circuit.ell")?.unwrap_or(1.0);
                    let t = TLineParams::new(lp, cp, ell).map_err(CliError::physics)?;
                    Some(char_impedance(&t))
                }
                (None, None) => None,
                _ => {
                    return Err(CliError::parse(
                        "config: circuit.Lprime and circuit.Cprime must be given together",
                    ))
                }
            }
        }
    };
    // ell is legitimate circuit metadata even when Z0 is given directly
    let _ = cfg.take_f64("circuit.ell")?;

    let carrier = cfg.take_f64("drive.Omega")?.unwrap_or(omega_r);
    let delta = qionss::openqsys::detuning(carrier, omega_r);

    let kappa_override = cfg.take_f64("model.kappa")?;
    let cc = cfg.take_f64("circuit.Cc")?;
    let (kappa, warning) = match kappa_override {
        Some(kappa) => (kappa, None),
        None => {
            let cc = cc.ok_or_else(|| {
                CliError::parse("config: missing required field circuit.Cc (or model.kappa)")
            })?;
            let z0 = z0.ok_or_else(|| {
                CliError::parse(
                    "config: missing circuit.Z0 (or circuit.Lprime/Cprime) needed for kappa",
                )
            })?;
            let cp = CouplingParams::new(cc, z0, c, omega_r, Some(carrier))
                .map_err(CliError::physics)?;
            (markov_kappa(&cp), cp.coupling_warning())
        }
    };

    let convention = match cfg.take_string("convention")? {
        None => Convention::Paper,
        Some(word) => word.parse::<Convention>().map_err(CliError::parse)?,
    };

    let params = ModelParams::new(kappa, delta).map_err(CliError::physics)?;
    Ok(ModelSpec {
        kappa,
        delta,
        carrier,
        convention,
        params,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLAT: &str = "\
# worked example
circuit.L = 1.01321183642338e-9
circuit.C = 1e-12
circuit.Cc = 1e-15
circuit.Z0 = 50
";

    #[test]
    fn flat_config_resolves() {
        let mut cfg = Config::from_str(FLAT).unwrap();
        let model = resolve_model(&mut cfg).unwrap();
        cfg.finish().unwrap();
        assert!(model.kappa > 40.0 && model.kappa < 50.0);
        assert_eq!(model.convention, Convention::Paper);
    }

    #[test]
    fn json_config_resolves() {
        let text = r#"{"circuit": {"L": 1e-9, "C": 1e-12, "Cc": 1e-15, "Z0": 50},
                       "convention": "gardiner"}"#;
        let mut cfg = Config::from_str(text).unwrap();
        let model = resolve_model(&mut cfg).unwrap();
        cfg.finish().unwrap();
        assert_eq!(model.convention, Convention::Gardiner);
        assert_eq!(model.delta, 0.0);
    }

    #[test]
    fn missing_field_is_parse_error() {
        let mut cfg = Config::from_str("circuit.C = 1e-12\n").unwrap();
        let err = resolve_model(&mut cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.message().contains("circuit.L"));
    }

    #[test]
    fn strong_coupling_is_physics_error() {
        let text = "circuit.L = 1e-9\ncircuit.C = 1e-12\ncircuit.Cc = 5e-13\ncircuit.Z0 = 50\n";
        let mut cfg = Config::from_str(text).unwrap();
        let err = resolve_model(&mut cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn unknown_field_rejected() {
        let mut cfg = Config::from_str(&format!("{FLAT}circuit.Q = 3\n")).unwrap();
        resolve_model(&mut cfg).unwrap();
        assert!(cfg.finish().is_err());
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = Config::from_str("circuit.L 1e-9\n").unwrap_err();
        assert!(err.message().contains("line 1"));
    }

    #[test]
    fn kappa_override_skips_coupling_block() {
        let text = "circuit.L = 1e-9\ncircuit.C = 1e-12\nmodel.kappa = 10\n";
        let mut cfg = Config::from_str(text).unwrap();
        let model = resolve_model(&mut cfg).unwrap();
        assert_eq!(model.kappa, 10.0);
    }

    #[test]
    fn impedance_from_line_constants() {
        let text = "circuit.L = 1e-9\ncircuit.C = 1e-12\ncircuit.Cc = 1e-15\n\
                    circuit.Lprime = 2.5e-7\ncircuit.Cprime = 1e-10\ncircuit.ell = 1\n";
        let mut cfg = Config::from_str(text).unwrap();
        let with_lp = resolve_model(&mut cfg).unwrap();

        let text = "circuit.L = 1e-9\ncircuit.C = 1e-12\ncircuit.Cc = 1e-15\ncircuit.Z0 = 50\n";
        let mut cfg = Config::from_str(text).unwrap();
        let with_z0 = resolve_model(&mut cfg).unwrap();
        assert!((with_lp.kappa - with_z0.kappa).abs() <= 1e-12 * with_z0.kappa);
    }
}
