//! Number formatting and output plumbing.
//!
//! Every numeric value is printed with 17 significant digits (`{:.16e}`),
//! which round-trips f64 exactly, so identical configs and seeds produce
//! byte-identical output.

use std::io::Write;
use std::path::PathBuf;

use crate::CliError;

/// 17-significant-digit scientific notation, round-trip exact for f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON value: a number or `null`.
pub fn num_or_null(x: Option<f64>) -> String {
    match x {
        Some(x) => num(x),
        None => "null".to_string(),
    }
}

/// Where a command's data table goes.
pub enum Sink {
    Stdout,
    File(PathBuf),
}

impl Sink {
    pub fn from_flag(out: Option<PathBuf>) -> Self {
        match out {
            Some(path) => Sink::File(path),
            None => Sink::Stdout,
        }
    }

    pub fn description(&self) -> String {
        match self {
            Sink::Stdout => "stdout".to_string(),
            Sink::File(path) => path.display().to_string(),
        }
    }

    pub fn writer(&self) -> Result<Box<dyn Write>, CliError> {
        match self {
            Sink::Stdout => Ok(Box::new(std::io::BufWriter::new(std::io::stdout()))),
            Sink::File(path) => {
                let file = std::fs::File::create(path).map_err(|e| {
                    CliError::parse(format!("cannot write {}: {e}", path.display()))
                })?;
                Ok(Box::new(std::io::BufWriter::new(file)))
            }
        }
    }
}

pub fn write_line(w: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(w, "{line}").map_err(|e| CliError::parse(format!("write failed: {e}")))
}

/// One-line result envelope on stderr: the resolved model echo plus
/// provenance, so every data table is self-describing without polluting the
/// byte-exact stdout contract.
pub fn envelope(model_json: &str, data_ref: &str, seed: Option<u64>) {
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let seed = match seed {
        Some(s) => s.to_string(),
        None => "null".to_string(),
    };
    eprintln!(
        "{{\"model\":{model_json},\"data\":\"{data_ref}\",\"provenance\":{{\"version\":\"{}\",\"seed\":{seed},\"timestamp\":{timestamp}}}}}",
        env!("CARGO_PKG_VERSION"),
    );
}

pub fn model_echo_json(spec: &crate::config::ModelSpec) -> String {
    let (a, b, c, d) = spec.state_space().scalars().expect("single-port model");
    format!(
        "{{\"kappa\":{},\"delta\":{},\"A_re\":{},\"A_im\":{},\"B\":{},\"C\":{},\"D\":{},\"convention\":\"{}\"}}",
        num(spec.kappa),
        num(spec.delta),
        num(a.re),
        num(a.im),
        num(b.re),
        num(c.re),
        num(d.re),
        spec.convention.as_str(),
    )
}
