//! Self-verification suite: every invariant the model promises, run as named
//! checks with measured error against tolerance.
//!
//! The `inject_b_sign_flip` hook flips the sign of B after model construction
//! so the harness can confirm the suite actually detects a broken model
//! (all-pass, full reflection, and steady-state checks must then fail).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use qionss::openqsys::{
    build_state_space, markov_kappa, CouplingParams, ModelParams, StateSpaceModel,
};
use qionss::operator::{commutator, CanonicalOp, ModeLabel};
use qionss::quantize_lc::{
    classical_energy, classical_normal_modes, flux_charge_from_ladder, lc_ladder_ops,
    ClassicalState, LCParams,
};
use qionss::response::{
    eval_tf, simulate_mean, simulate_stochastic, steady_state, transfer_function, InputSignal,
    TimeGrid,
};
use qionss::rosetta::{
    boson_to_phasor, phasor_to_boson, photon_number, pozar_wave, Direction, Phasor, WaveContext,
};
use qionss::tline::{
    phase_velocity, rotate_mode, tline_mode_ops, voltage_wave, CoherentModeAmplitude, ModeSpec,
    TLineParams,
};
use qionss::HBAR;

/// One named check: passes when `error <= tolerance`.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub error: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: &'static str, error: f64, tolerance: f64) -> Self {
        Check {
            name,
            error,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Test-harness hook: flip the sign of B in every constructed model.
    pub inject_b_sign_flip: bool,
}

const KAPPA_ORACLE: f64 = 44.311346272637901;

fn build(mp: &ModelParams, opts: &VerifyOptions) -> StateSpaceModel {
    let ssm = build_state_space(mp);
    if opts.inject_b_sign_flip {
        let (a, b, c, d) = ssm.scalars().expect("single-port");
        StateSpaceModel::single_port(a, -b, c, d)
    } else {
        ssm
    }
}

fn random_lc(rng: &mut ChaCha12Rng) -> LCParams {
    let l = 10f64.powf(rng.gen_range(-12.0..-3.0));
    let c = 10f64.powf(rng.gen_range(-15.0..-6.0));
    LCParams::new(l, c).unwrap()
}

/// Run the full suite. Deterministic: seeds are fixed.
pub fn run_all(opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = Vec::new();

    // -- operator algebra -----------------------------------------------
    let mut rng = ChaCha12Rng::seed_from_u64(201);
    let mut worst_unit = 0.0f64;
    let mut worst_ih = 0.0f64;
    let mut worst_rt = 0.0f64;
    for _ in 0..100 {
        let p = random_lc(&mut rng);
        let (a, a_dag) = lc_ladder_ops(&p);
        worst_unit =
            worst_unit.max((commutator(&a, &a_dag).unwrap() - Complex64::new(1.0, 0.0)).norm());

        let (phi, q) = flux_charge_from_ladder(&p);
        worst_ih =
            worst_ih.max((commutator(&phi, &q).unwrap() - Complex64::new(0.0, HBAR)).norm() / HBAR);

        let phi_op = CanonicalOp::flux(ModeLabel::lc());
        let q_op = CanonicalOp::charge(ModeLabel::lc());
        worst_rt = worst_rt.max((phi.coeff(&phi_op) - Complex64::new(1.0, 0.0)).norm());
        worst_rt = worst_rt.max((q.coeff(&q_op) - Complex64::new(1.0, 0.0)).norm());
        worst_rt = worst_rt.max(phi.coeff(&q_op).norm() / phi.coeff(&phi_op).norm());
    }
    checks.push(Check::new("lc-ladder-commutator", worst_unit, 1e-12));
    checks.push(Check::new("flux-charge-commutator", worst_ih, 1e-12));
    checks.push(Check::new("ladder-round-trip", worst_rt, 1e-14));

    // -- classical energy identity --------------------------------------
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = random_lc(&mut rng);
        let s =
            ClassicalState::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)).unwrap();
        let (a, a_star) = classical_normal_modes(&s, &p);
        let direct = classical_energy(&s, &p);
        if direct > 0.0 {
            worst = worst.max((a.norm_sqr() + a_star.norm_sqr() - direct).abs() / direct);
        }
    }
    checks.push(Check::new("classical-energy-identity", worst, 1e-12));

    // -- transmission line ----------------------------------------------
    let t = TLineParams::new(2.5e-7, 1e-10, 1.0).unwrap();
    let mut worst_mode = 0.0f64;
    let mut worst_rot = 0.0f64;
    for n in 1..=50i64 {
        let m = ModeSpec::from_index(&t, n).unwrap();
        let (b, b_dag) = tline_mode_ops(&t, &m);
        worst_mode =
            worst_mode.max((commutator(&b, &b_dag).unwrap() - Complex64::new(1.0, 0.0)).norm());
        let other = ModeSpec::from_index(&t, n + 50).unwrap();
        let (_, other_dag) = tline_mode_ops(&t, &other);
        worst_mode = worst_mode.max(commutator(&b, &other_dag).unwrap().norm());

        let bp = rotate_mode(b);
        worst_rot = worst_rot
            .max((commutator(&bp, &bp.dagger()).unwrap() - Complex64::new(1.0, 0.0)).norm());
    }
    checks.push(Check::new("tline-mode-commutators", worst_mode, 1e-12));
    checks.push(Check::new(
        "rotation-commutator-invariance",
        worst_rot,
        1e-12,
    ));

    let vp = phase_velocity(&t);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let m = ModeSpec::from_index(&t, rng.gen_range(1..40)).unwrap();
        let beta = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let amps = [CoherentModeAmplitude::new(m, beta)];
        let (z, time, dt) = (
            rng.gen_range(-2.0..2.0),
            rng.gen_range(0.0..1e-8),
            rng.gen_range(0.0..1e-8),
        );
        let v0 = voltage_wave(&t, &amps, z, time).unwrap();
        let v1 = voltage_wave(&t, &amps, z + vp * dt, time + dt).unwrap();
        let scale = (HBAR * m.angular_frequency() / 2e-10).sqrt() * beta.norm();
        worst = worst.max((v0 - v1).abs() / scale.max(1e-300));
    }
    checks.push(Check::new("traveling-wave-shift", worst, 1e-10));

    // -- rosetta ----------------------------------------------------------
    let ctx = WaveContext::new(1e-10, 1.0, 50.0).unwrap();
    let mut worst_rt = 0.0f64;
    let mut worst_pozar = 0.0f64;
    for _ in 0..1000 {
        let mag = rng.gen_range(1e-9..1e-5);
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let omega = 10f64.powf(rng.gen_range(8.0..12.0));
        let p = Phasor::new(mag, phase, omega, Direction::Right).unwrap();
        let b = phasor_to_boson(&p, &ctx);
        let back = boson_to_phasor(&b, &ctx);
        worst_rt = worst_rt.max((back.magnitude() - mag).abs() / mag);
        let dp = (back.phase() - p.phase()).rem_euclid(std::f64::consts::TAU);
        worst_rt = worst_rt.max(dp.min(std::f64::consts::TAU - dp));

        let a = pozar_wave(&p, &ctx);
        let scale = (2.0 * HBAR * omega * ctx.phase_velocity() / ctx.length()).sqrt();
        let expected = b.value() * scale * Complex64::new(0.0, -1.0);
        worst_pozar = worst_pozar.max((a - expected).norm() / expected.norm());
    }
    checks.push(Check::new("rosetta-round-trip", worst_rt, 1e-12));
    checks.push(Check::new("pozar-consistency", worst_pozar, 1e-12));

    let omega = 2.0 * std::f64::consts::PI * 5e9;
    let one_photon = (2.0 * HBAR * omega / 1e-10).sqrt();
    let p = Phasor::new(one_photon, 0.0, omega, Direction::Right).unwrap();
    checks.push(Check::new(
        "one-photon-occupancy",
        (photon_number(&p, &ctx) - 1.0).abs(),
        1e-10,
    ));

    // -- Markov kappa ------------------------------------------------------
    let cp = CouplingParams::new(1e-15, 50.0, 1e-12, omega, None).unwrap();
    checks.push(Check::new(
        "markov-kappa-example",
        (markov_kappa(&cp) - KAPPA_ORACLE).abs() / KAPPA_ORACLE,
        1e-10,
    ));

    // -- transfer function --------------------------------------------------
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let kappa = rng.gen_range(0.1..200.0);
        let delta = rng.gen_range(-1e5..1e5);
        let mp = ModelParams::new(kappa, delta).unwrap();
        let tf = transfer_function(&build_state_space(&mp)).unwrap();
        let half_k2 = kappa * kappa / 2.0;
        let scale = half_k2.hypot(delta).max(1.0);
        worst = worst.max((tf.num()[0] - Complex64::new(-half_k2, delta)).norm() / scale);
        worst = worst.max((tf.den()[0] - Complex64::new(half_k2, delta)).norm() / scale);
        worst = worst.max((tf.num()[1] - Complex64::new(1.0, 0.0)).norm());
        worst = worst.max((tf.den()[1] - Complex64::new(1.0, 0.0)).norm());
    }
    checks.push(Check::new("transfer-function-identity", worst, 1e-14));

    // -- all-pass / reflection (sensitive to the injected B fault) ---------
    let mp = ModelParams::new(KAPPA_ORACLE, 0.0).unwrap();
    let ssm = build(&mp, opts);
    let tf = transfer_function(&ssm).unwrap();
    let k2 = KAPPA_ORACLE * KAPPA_ORACLE;
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let w = -1e3 * k2 + i as f64 * (2e3 * k2 / 999.0);
        let h = eval_tf(&tf, Complex64::new(0.0, w)).unwrap();
        worst = worst.max((h.norm() - 1.0).abs());
    }
    checks.push(Check::new("all-pass-sweep", worst, 1e-12));

    let h0 = eval_tf(&tf, Complex64::new(0.0, 0.0)).unwrap();
    checks.push(Check::new(
        "resonant-full-reflection",
        (h0 - Complex64::new(-1.0, 0.0)).norm(),
        1e-12,
    ));

    let mut worst = 0.0f64;
    for _ in 0..100 {
        let kappa = rng.gen_range(0.5..100.0);
        let delta = rng.gen_range(-1e4..1e4);
        let beta = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let mp = ModelParams::new(kappa, delta).unwrap();
        let ssm = build(&mp, opts);
        let (a_ss, b_ss) = steady_state(&ssm, beta).unwrap();
        let expected = -kappa * beta / Complex64::new(kappa * kappa / 2.0, delta);
        worst = worst.max((a_ss - expected).norm() / expected.norm().max(1e-300));
        worst = worst.max((b_ss.norm() - beta.norm()).abs() / beta.norm().max(1e-300));
    }
    checks.push(Check::new("steady-state-oracle", worst, 1e-10));

    // -- time domain --------------------------------------------------------
    let mp = ModelParams::new(KAPPA_ORACLE, 2.0e2).unwrap();
    let ssm = build(&mp, opts);
    let beta = Complex64::new(0.8, -0.3);
    let u = InputSignal::constant(beta);
    let grid = TimeGrid::new(0.0, 1e-5, 400).unwrap();
    let zero = Complex64::new(0.0, 0.0);
    let (a_series, bout) = simulate_mean(&ssm, &u, &grid, zero).unwrap();
    let (_, _, c_coef, d_coef) = ssm.scalars().unwrap();
    let mut worst = 0.0f64;
    for ((t, a_val), out) in a_series.times().zip(a_series.values()).zip(bout.values()) {
        let recomputed = c_coef * a_val + d_coef * u.mean_value(t);
        worst = worst.max((out - recomputed).norm() / beta.norm());
    }
    checks.push(Check::new("input-output-identity", worst, 1e-15));

    // sinusoidal steady state against H(iω) on the same (possibly injected)
    // model: three random triples
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let kappa = rng.gen_range(20.0..80.0);
        let half_k2 = kappa * kappa / 2.0;
        let delta = rng.gen_range(-2.0..2.0) * half_k2;
        let omega_mod = rng.gen_range(-2.0..2.0) * half_k2;
        let mp = ModelParams::new(kappa, delta).unwrap();
        let ssm = build(&mp, opts);
        let tf = transfer_function(&ssm).unwrap();
        let expected = eval_tf(&tf, Complex64::new(0.0, omega_mod)).unwrap();

        let rate = half_k2.hypot(delta).max(omega_mod.abs());
        let grid = TimeGrid::from_duration(2e-5 / rate, 20.0 / half_k2).unwrap();
        let u = InputSignal::sinusoid(Complex64::new(1.0, 0.0), omega_mod).unwrap();
        let (_, bout) = simulate_mean(&ssm, &u, &grid, zero).unwrap();
        let t_last = grid.t0() + (grid.len() - 1) as f64 * grid.dt();
        let gain = bout.values().last().unwrap() / u.mean_value(t_last);
        worst = worst.max((gain - expected).norm() / expected.norm());
    }
    checks.push(Check::new("time-frequency-consistency", worst, 1e-4));

    // group delay peak 4/κ² at ω = −Δ
    let delta = 1.7e5;
    let mp = ModelParams::new(KAPPA_ORACLE, delta).unwrap();
    let tf = transfer_function(&build_state_space(&mp)).unwrap();
    let pts = qionss::response::freq_response(&tf, &[-delta]).unwrap();
    let expected = 4.0 / (KAPPA_ORACLE * KAPPA_ORACLE);
    checks.push(Check::new(
        "group-delay-peak",
        (pts[0].group_delay - expected).abs() / expected,
        1e-6,
    ));

    // -- stochastic ----------------------------------------------------------
    let mp = ModelParams::new(KAPPA_ORACLE, 0.0).unwrap();
    let ssm = build_state_space(&mp);
    let half_k2 = KAPPA_ORACLE * KAPPA_ORACLE / 2.0;
    let grid = TimeGrid::new(0.0, 1e-2 / half_k2, 200).unwrap();
    let vacuum = InputSignal::vacuum();
    let rms = |n: usize, seed: u64| {
        let ens = simulate_stochastic(&ssm, &vacuum, &grid, n, seed, zero).unwrap();
        let mean = ens.mean();
        let sum: f64 = mean.values().iter().map(|m| m.norm_sqr()).sum();
        (sum / mean.len() as f64).sqrt()
    };
    let (e1, e2, e3) = (rms(50, 11), rms(200, 12), rms(800, 13));
    let (r1, r2) = (e1 / e2, e2 / e3);
    // n^(−1/2) scaling: each quadrupling should halve the error (ratio 2,
    // accepted window [1.6, 2.6] expressed as distance from its midpoint)
    let ratio_err = (r1 - 2.1).abs().max((r2 - 2.1).abs());
    checks.push(Check::new("stochastic-convergence", ratio_err, 0.5));

    let u = InputSignal::constant(Complex64::new(0.5, 0.0))
        .with_noise_amplitude(0.0)
        .unwrap();
    let dt = 5e-7 / half_k2;
    let fine = TimeGrid::from_duration(dt, 1.0 / half_k2).unwrap();
    let ens = simulate_stochastic(&ssm, &u, &fine, 1, 14, zero).unwrap();
    let (_, bout) = simulate_mean(&ssm, &u, &fine, zero).unwrap();
    let mut worst = 0.0f64;
    for (e, m) in ens.trajectories()[0].values().iter().zip(bout.values()) {
        worst = worst.max((e - m).norm() / 0.5);
    }
    checks.push(Check::new("noise-free-trajectory", worst, 1e-6));

    checks
}

/// Print the report; true iff every check passed.
pub fn report(checks: &[Check], out: &mut dyn std::io::Write) -> std::io::Result<bool> {
    writeln!(out, "qionss self-verification ({} checks)", checks.len())?;
    let mut ok = true;
    for check in checks {
        let status = if check.passed() { "ok  " } else { "FAIL" };
        ok &= check.passed();
        writeln!(
            out,
            "  {status} {:32} error {:>10.3e}  tolerance {:>10.3e}",
            check.name, check.error, check.tolerance
        )?;
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(
        out,
        "{} checks, {} ok, {} failed",
        checks.len(),
        checks.len() - failed,
        failed
    )?;
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_suite_passes() {
        let checks = run_all(&VerifyOptions::default());
        assert!(checks.len() >= 10, "suite must have at least 10 checks");
        for check in &checks {
            assert!(
                check.passed(),
                "{}: error {:.3e} > tolerance {:.3e}",
                check.name,
                check.error,
                check.tolerance
            );
        }
    }

    #[test]
    fn injected_b_sign_fault_is_detected() {
        let checks = run_all(&VerifyOptions {
            inject_b_sign_flip: true,
        });
        let failed: Vec<&str> = checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name)
            .collect();
        assert!(failed.contains(&"all-pass-sweep"), "failed: {failed:?}");
        assert!(failed.contains(&"resonant-full-reflection"));
        assert!(failed.contains(&"steady-state-oracle"));
    }
}
