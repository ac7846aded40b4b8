//! Command-line front end for the single-port quantum network model.
//!
//! Exit codes: 0 success, 1 verification failure, 2 config/usage error,
//! 3 physics precondition error.

mod config;
mod emit;
mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use qionss::response::{
    freq_response, simulate_mean, simulate_stochastic, transfer_function, InputSignal, TimeGrid,
};
use qionss::rosetta::{
    boson_to_phasor, phasor_to_boson, photon_number, pozar_wave, Direction, Phasor, WaveContext,
};

use config::{resolve_model, Config, ModelSpec};
use emit::{envelope, model_echo_json, num, num_or_null, write_line, Sink};

/// Error with the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Config or usage problem (exit 2).
    Parse(String),
    /// A physics precondition failed (exit 3).
    Physics(String),
}

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        CliError::Parse(msg.into())
    }

    pub fn physics(err: impl std::fmt::Display) -> Self {
        CliError::Physics(err.to_string())
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Physics(m) => m,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Physics(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qionss",
    version,
    about = "Single-port quantum microwave network: model, sweeps, simulation, conversions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the resolved model (kappa, delta, A, B, C, D, pole, zero) as JSON
    Model {
        /// Config file (flat `section.key = value` text, or JSON)
        config: PathBuf,
    },
    /// Sweep H(i omega') over the sweep block and emit CSV
    Freq {
        config: PathBuf,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate the mean path (and optionally a stochastic ensemble) as CSV
    Time {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a voltage phasor to boson and Pozar wave amplitudes
    Rosetta(RosettaArgs),
    /// Run the self-verification suite and report each check
    Verify {
        /// Test-harness hook: flip the sign of B to prove the suite notices
        #[arg(long, hide = true)]
        inject_b_sign_flip: bool,
    },
}

#[derive(Args)]
struct RosettaArgs {
    /// Peak phasor as MAG,PHASE (volts, radians)
    #[arg(long, value_name = "MAG,PHASE")]
    v0: String,
    /// Angular frequency in rad/s
    #[arg(long)]
    omega: f64,
    /// Line capacitance per length in F/m
    #[arg(long)]
    cprime: f64,
    /// Quantization length in m
    #[arg(long)]
    ell: f64,
    /// Characteristic impedance in ohm
    #[arg(long)]
    z0: f64,
    /// Propagation direction: right or left
    #[arg(long, default_value = "right")]
    direction: String,
    /// Also convert back and report the recovered phasor
    #[arg(long)]
    invert: bool,
}

fn main() {
    let cli = Cli::parse();
    init_threads();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    };
    std::process::exit(code);
}

/// QIONSS_THREADS caps the worker pool; 0 or unset means automatic.
fn init_threads() {
    if let Ok(raw) = std::env::var("QIONSS_THREADS") {
        match raw.trim().parse::<usize>() {
            Ok(0) => {}
            Ok(n) => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            Err(_) => eprintln!("warning: ignoring non-numeric QIONSS_THREADS={raw:?}"),
        }
    }
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Model { config } => cmd_model(&config).map(|()| 0),
        Command::Freq { config, out } => cmd_freq(&config, Sink::from_flag(out)).map(|()| 0),
        Command::Time { config, out } => cmd_time(&config, Sink::from_flag(out)).map(|()| 0),
        Command::Rosetta(args) => cmd_rosetta(&args).map(|()| 0),
        Command::Verify { inject_b_sign_flip } => cmd_verify(inject_b_sign_flip),
    }
}

fn load_model(path: &std::path::Path) -> Result<(Config, ModelSpec), CliError> {
    let mut cfg = Config::load(path)?;
    let model = resolve_model(&mut cfg)?;
    if let Some(warning) = &model.warning {
        eprintln!("warning: {warning}");
    }
    Ok((cfg, model))
}

fn cmd_model(path: &std::path::Path) -> Result<(), CliError> {
    let (cfg, model) = load_model(path)?;
    cfg.finish()?;

    let ssm = model.state_space();
    let (a, b, c, d) = ssm.scalars().map_err(CliError::physics)?;
    let tf = transfer_function(&ssm).map_err(CliError::physics)?;
    let (poles, zeros) = tf.poles_zeros().map_err(CliError::physics)?;
    let pole = poles.first();
    let zero = zeros.first();

    println!("{{");
    println!("  \"kappa\": {},", num(model.kappa));
    println!("  \"delta\": {},", num(model.delta));
    println!("  \"A_re\": {},", num(a.re));
    println!("  \"A_im\": {},", num(a.im));
    println!("  \"B\": {},", num(b.re));
    println!("  \"C\": {},", num(c.re));
    println!("  \"D\": {},", num(d.re));
    println!("  \"pole_re\": {},", num_or_null(pole.map(|p| p.re)));
    println!("  \"pole_im\": {},", num_or_null(pole.map(|p| p.im)));
    println!("  \"zero_re\": {},", num_or_null(zero.map(|z| z.re)));
    println!("  \"zero_im\": {}", num_or_null(zero.map(|z| z.im)));
    println!("}}");

    envelope(&model_echo_json(&model), "stdout", None);
    Ok(())
}

fn cmd_freq(path: &std::path::Path, sink: Sink) -> Result<(), CliError> {
    let (mut cfg, model) = load_model(path)?;
    let omega_min = cfg.require_f64("sweep.omega_min")?;
    let omega_max = cfg.require_f64("sweep.omega_max")?;
    if omega_min >= omega_max {
        return Err(CliError::parse(format!(
            "config: sweep.omega_min ({omega_min}) must be below sweep.omega_max ({omega_max})"
        )));
    }
    let n_points = cfg.take_usize("sweep.n_points")?.unwrap_or(401);
    if n_points == 0 {
        return Err(CliError::parse("config: sweep.n_points must be >= 1"));
    }
    let scale = cfg
        .take_string("sweep.scale")?
        .unwrap_or_else(|| "log".to_string());
    let grid = build_sweep_grid(omega_min, omega_max, n_points, &scale)?;
    cfg.finish()?;

    let tf = transfer_function(&model.state_space()).map_err(CliError::physics)?;
    let points = freq_response(&tf, &grid).map_err(CliError::physics)?;

    let mut w = sink.writer()?;
    write_line(
        w.as_mut(),
        "omega_offset,omega_abs,H_re,H_im,mag,phase_rad,group_delay_s",
    )?;
    for p in &points {
        write_line(
            w.as_mut(),
            &format!(
                "{},{},{},{},{},{},{}",
                num(p.omega),
                num(model.carrier + p.omega),
                num(p.response.re),
                num(p.response.im),
                num(p.magnitude),
                num(p.phase),
                num(p.group_delay)
            ),
        )?;
    }
    w.flush()
        .map_err(|e| CliError::parse(format!("write failed: {e}")))?;

    envelope(&model_echo_json(&model), &sink.description(), None);
    Ok(())
}

fn build_sweep_grid(
    omega_min: f64,
    omega_max: f64,
    n_points: usize,
    scale: &str,
) -> Result<Vec<f64>, CliError> {
    if n_points == 1 {
        return Ok(vec![omega_min]);
    }
    let step = 1.0 / (n_points - 1) as f64;
    match scale {
        "linear" => Ok((0..n_points)
            .map(|i| omega_min + (omega_max - omega_min) * (i as f64 * step))
            .collect()),
        "log" => {
            if omega_min <= 0.0 {
                return Err(CliError::parse(
                    "config: log sweeps need sweep.omega_min > 0 (use scale = linear)",
                ));
            }
            let (lo, hi) = (omega_min.ln(), omega_max.ln());
            Ok((0..n_points)
                .map(|i| (lo + (hi - lo) * (i as f64 * step)).exp())
                .collect())
        }
        other => Err(CliError::parse(format!(
            "config: unknown sweep.scale {other:?} (use linear|log)"
        ))),
    }
}

fn resolve_input(cfg: &mut Config) -> Result<InputSignal, CliError> {
    let beta = Complex64::new(
        cfg.take_f64("drive.beta_re")?.unwrap_or(0.0),
        cfg.take_f64("drive.beta_im")?.unwrap_or(0.0),
    );
    let kind = cfg
        .take_string("drive.kind")?
        .unwrap_or_else(|| "constant_coherent".to_string());
    let u = match kind.as_str() {
        "constant_coherent" => InputSignal::constant(beta),
        "sinusoid" => {
            let omega_mod = cfg.require_f64("drive.omega_mod")?;
            InputSignal::sinusoid(beta, omega_mod).map_err(CliError::physics)?
        }
        "pulse" => {
            let t_on = cfg.require_f64("drive.t_on")?;
            let t_off = cfg.require_f64("drive.t_off")?;
            InputSignal::pulse(beta, t_on, t_off).map_err(CliError::physics)?
        }
        "vacuum" => InputSignal::vacuum(),
        other => {
            return Err(CliError::parse(format!(
                "config: unknown drive.kind {other:?} \
                 (use constant_coherent|sinusoid|pulse|vacuum)"
            )))
        }
    };
    match cfg.take_f64("drive.noise_amplitude")? {
        Some(amp) => u.with_noise_amplitude(amp).map_err(CliError::physics),
        None => Ok(u),
    }
}

const MAX_GRID_POINTS: usize = 20_000_000;

fn cmd_time(path: &std::path::Path, sink: Sink) -> Result<(), CliError> {
    let (mut cfg, model) = load_model(path)?;
    let dt = cfg.require_f64("sim.dt")?;
    let t_end = cfg.require_f64("sim.t_end")?;
    if dt.is_nan() || dt <= 0.0 || t_end.is_nan() || t_end <= 0.0 {
        return Err(CliError::parse(
            "config: sim.dt and sim.t_end must be positive",
        ));
    }
    let grid = TimeGrid::from_duration(dt, t_end)
        .map_err(|e| CliError::parse(format!("config: invalid sim grid: {e}")))?;
    if grid.len() > MAX_GRID_POINTS {
        return Err(CliError::parse(format!(
            "config: sim grid has {} points, limit is {MAX_GRID_POINTS}",
            grid.len()
        )));
    }
    let seed = cfg.take_usize("sim.seed")?.unwrap_or(1) as u64;
    let n_traj = cfg.take_usize("sim.n_traj")?;
    if n_traj == Some(0) {
        return Err(CliError::parse("config: sim.n_traj must be >= 1"));
    }
    let a0 = Complex64::new(
        cfg.take_f64("sim.a0_re")?.unwrap_or(0.0),
        cfg.take_f64("sim.a0_im")?.unwrap_or(0.0),
    );
    let u = resolve_input(&mut cfg)?;
    cfg.finish()?;

    let ssm = model.state_space();
    let (a_series, bout) = simulate_mean(&ssm, &u, &grid, a0).map_err(CliError::physics)?;
    let ensemble = match n_traj {
        Some(n) => {
            Some(simulate_stochastic(&ssm, &u, &grid, n, seed, a0).map_err(CliError::physics)?)
        }
        None => None,
    };
    let stats = ensemble.as_ref().map(|e| (e.mean(), e.variance()));

    let mut w = sink.writer()?;
    let header = match &stats {
        None => "t,a_re,a_im,bin_re,bin_im,bout_re,bout_im".to_string(),
        Some(_) => "t,a_re,a_im,bin_re,bin_im,bout_re,bout_im,bout_mean_re,bout_mean_im,bout_var"
            .to_string(),
    };
    write_line(w.as_mut(), &header)?;
    for (i, t) in grid.times().enumerate() {
        let a = a_series.values()[i];
        let b_in = u.mean_value(t);
        let b_out = bout.values()[i];
        let mut row = format!(
            "{},{},{},{},{},{},{}",
            num(t),
            num(a.re),
            num(a.im),
            num(b_in.re),
            num(b_in.im),
            num(b_out.re),
            num(b_out.im)
        );
        if let Some((mean, var)) = &stats {
            let m = mean.values()[i];
            row = format!("{row},{},{},{}", num(m.re), num(m.im), num(var[i]));
        }
        write_line(w.as_mut(), &row)?;
    }
    w.flush()
        .map_err(|e| CliError::parse(format!("write failed: {e}")))?;

    envelope(&model_echo_json(&model), &sink.description(), Some(seed));
    Ok(())
}

fn cmd_rosetta(args: &RosettaArgs) -> Result<(), CliError> {
    let (mag, phase) = args
        .v0
        .split_once(',')
        .and_then(|(m, p)| Some((m.trim().parse::<f64>().ok()?, p.trim().parse::<f64>().ok()?)))
        .ok_or_else(|| {
            CliError::parse(format!(
                "--v0 expects MAG,PHASE (two numbers), got {:?}",
                args.v0
            ))
        })?;
    let direction: Direction = args.direction.parse().map_err(CliError::parse)?;

    let ctx = WaveContext::new(args.cprime, args.ell, args.z0).map_err(CliError::physics)?;
    let phasor = Phasor::new(mag, phase, args.omega, direction).map_err(CliError::physics)?;

    let boson = phasor_to_boson(&phasor, &ctx);
    let n = photon_number(&phasor, &ctx);
    let a = pozar_wave(&phasor, &ctx);

    let mut fields = vec![
        ("boson_re", boson.value().re),
        ("boson_im", boson.value().im),
        ("photon_number", n),
        ("pozar_a_re", a.re),
        ("pozar_a_im", a.im),
    ];
    if args.invert {
        let back = boson_to_phasor(&boson, &ctx);
        fields.push(("v0_mag", back.magnitude()));
        fields.push(("v0_phase", back.phase()));
    }
    println!("{{");
    for (i, (key, value)) in fields.iter().enumerate() {
        let comma = if i + 1 < fields.len() { "," } else { "" };
        println!("  \"{key}\": {}{comma}", num(*value));
    }
    println!("}}");

    let echo = format!(
        "{{\"omega\":{},\"cprime\":{},\"ell\":{},\"z0\":{},\"direction\":\"{}\"}}",
        num(args.omega),
        num(args.cprime),
        num(args.ell),
        num(args.z0),
        direction.as_str()
    );
    envelope(&echo, "stdout", None);
    Ok(())
}

fn cmd_verify(inject_b_sign_flip: bool) -> Result<i32, CliError> {
    let checks = verify::run_all(&verify::VerifyOptions { inject_b_sign_flip });
    let mut stdout = std::io::stdout();
    let ok = verify::report(&checks, &mut stdout)
        .map_err(|e| CliError::parse(format!("write failed: {e}")))?;
    Ok(if ok { 0 } else { 1 })
}
