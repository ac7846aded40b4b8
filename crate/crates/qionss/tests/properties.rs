//! Property tests for the algebraic invariants of the model.

use num_complex::Complex64;
use proptest::prelude::*;

use qionss::openqsys::{build_state_space, markov_kappa, CouplingParams, ModelParams};
use qionss::operator::{commutator, LinearOpExpr, ModeLabel};
use qionss::quantize_lc::{classical_energy, classical_normal_modes, ClassicalState, LCParams};
use qionss::response::transfer_function;
use qionss::rosetta::{
    boson_to_phasor, phasor_to_boson, photon_number, pozar_wave, BosonAmplitude, Direction, Phasor,
    WaveContext,
};
use qionss::tline::{phase_velocity, voltage_wave, CoherentModeAmplitude, ModeSpec, TLineParams};
use qionss::HBAR;

fn complex() -> impl Strategy<Value = Complex64> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

/// A random expression over a small shared set of canonical pairs.
fn expr() -> impl Strategy<Value = LinearOpExpr> {
    (complex(), complex(), complex(), complex()).prop_map(|(c1, c2, c3, s)| {
        LinearOpExpr::flux(ModeLabel::lc()) * c1
            + LinearOpExpr::charge(ModeLabel::lc()) * c2
            + LinearOpExpr::flux(ModeLabel::named("aux")) * c3
            + s
    })
}

fn rel_close(a: Complex64, b: Complex64, rel: f64, abs: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()) + abs
}

proptest! {
    #[test]
    fn commutator_is_antisymmetric(x in expr(), y in expr()) {
        let xy = commutator(&x, &y).unwrap();
        let yx = commutator(&y, &x).unwrap();
        prop_assert!(rel_close(xy, -yx, 1e-12, 1e-12 * HBAR));
    }

    #[test]
    fn commutator_is_bilinear(x in expr(), y in expr(), z in expr(), alpha in complex()) {
        let lhs = commutator(&(x.clone() * alpha + z.clone()), &y).unwrap();
        let rhs = alpha * commutator(&x, &y).unwrap() + commutator(&z, &y).unwrap();
        prop_assert!(rel_close(lhs, rhs, 1e-11, 1e-11 * HBAR));
    }

    #[test]
    fn classical_energy_identity(
        log_l in -9.0..0.0f64,
        log_c in -12.0..0.0f64,
        current in -10.0..10.0f64,
        voltage in -10.0..10.0f64,
    ) {
        let p = LCParams::new(10f64.powf(log_l), 10f64.powf(log_c)).unwrap();
        let s = ClassicalState::new(current, voltage).unwrap();
        let (a, a_star) = classical_normal_modes(&s, &p);
        let from_modes = a.norm_sqr() + a_star.norm_sqr();
        let direct = classical_energy(&s, &p);
        prop_assert!((from_modes - direct).abs() <= 1e-12 * direct.abs().max(1e-300));
    }

    #[test]
    fn ladder_commutator_unity_for_all_params(log_l in -12.0..-3.0f64, log_c in -15.0..-6.0f64) {
        let p = LCParams::new(10f64.powf(log_l), 10f64.powf(log_c)).unwrap();
        let (a, a_dag) = qionss::quantize_lc::lc_ladder_ops(&p);
        let c = commutator(&a, &a_dag).unwrap();
        prop_assert!((c - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn rosetta_round_trip_both_orders(
        mag in 0.0..1e-5f64,
        phase in -20.0..20.0f64,
        log_omega in 8.0..12.0f64,
        right in any::<bool>(),
    ) {
        let ctx = WaveContext::new(1e-10, 1.0, 50.0).unwrap();
        let dir = if right { Direction::Right } else { Direction::Left };
        let omega = 10f64.powf(log_omega);

        let p = Phasor::new(mag, phase, omega, dir).unwrap();
        let back = boson_to_phasor(&phasor_to_boson(&p, &ctx), &ctx);
        prop_assert!((back.magnitude() - p.magnitude()).abs() <= 1e-15 * p.magnitude().max(1e-300));
        prop_assert_eq!(back.direction(), p.direction());
        // compare phases on the circle
        let dp = (back.phase() - p.phase()).rem_euclid(std::f64::consts::TAU);
        prop_assert!(dp.min(std::f64::consts::TAU - dp) <= 1e-12);

        let b = BosonAmplitude::new(Complex64::from_polar(mag * 1e5, phase), omega, dir).unwrap();
        let back = phasor_to_boson(&boson_to_phasor(&b, &ctx), &ctx);
        prop_assert!((back.value() - b.value()).norm() <= 1e-15 * b.value().norm().max(1e-300));
    }

    #[test]
    fn photon_number_matches_boson_norm(
        mag in 0.0..1e-5f64,
        phase in 0.0..std::f64::consts::TAU,
        log_omega in 8.0..12.0f64,
    ) {
        let ctx = WaveContext::new(1e-10, 1.0, 50.0).unwrap();
        let p = Phasor::new(mag, phase, 10f64.powf(log_omega), Direction::Right).unwrap();
        let n = photon_number(&p, &ctx);
        let b = phasor_to_boson(&p, &ctx);
        prop_assert!((n - b.value().norm_sqr()).abs() <= 1e-12 * n.max(1e-300));
    }

    #[test]
    fn pozar_consistency(
        re in -3.0..3.0f64,
        im in -3.0..3.0f64,
        log_omega in 8.0..12.0f64,
    ) {
        // a = V₀/√Z₀ equals √(2ħω v_p/ℓ) b† e^{−iπ/2} after substituting
        // Z₀ = √(L'/C') and v_p = 1/√(L'C').
        let t = TLineParams::new(2.5e-7, 1e-10, 1.0).unwrap();
        let ctx = WaveContext::from_tline(&t);
        let omega = 10f64.powf(log_omega);
        let b = BosonAmplitude::new(Complex64::new(re, im), omega, Direction::Right).unwrap();
        let p = boson_to_phasor(&b, &ctx);
        let a = pozar_wave(&p, &ctx);
        let scale = (2.0 * HBAR * omega * ctx.phase_velocity() / ctx.length()).sqrt();
        let expected = b.value() * scale * Complex64::new(0.0, -1.0);
        prop_assert!(rel_close(a, expected, 1e-12, 1e-300));
    }

    #[test]
    fn traveling_wave_shift_invariance(
        n in 1i64..30,
        re in -3.0..3.0f64,
        im in -3.0..3.0f64,
        z in -5.0..5.0f64,
        time in 0.0..1e-8f64,
        dt in 0.0..1e-8f64,
    ) {
        let t = TLineParams::new(2.5e-7, 1e-10, 1.0).unwrap();
        let vp = phase_velocity(&t);
        let m = ModeSpec::from_index(&t, n).unwrap();
        let amps = [CoherentModeAmplitude::new(m, Complex64::new(re, im))];
        let v0 = voltage_wave(&t, &amps, z, time).unwrap();
        let v1 = voltage_wave(&t, &amps, z + vp * dt, time + dt).unwrap();
        let scale = (HBAR * m.angular_frequency() / (2.0 * 1e-10)).sqrt()
            * Complex64::new(re, im).norm();
        prop_assert!((v0 - v1).abs() <= 1e-10 * scale.max(1e-300));
    }

    #[test]
    fn all_pass_for_random_models(
        kappa in 0.1..100.0f64,
        delta in -1e4..1e4f64,
        omega in -1e6..1e6f64,
    ) {
        let tf = transfer_function(&build_state_space(&ModelParams::new(kappa, delta).unwrap()))
            .unwrap();
        let h = tf.eval(Complex64::new(0.0, omega)).unwrap();
        prop_assert!((h.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn kappa_monotone_in_every_argument(
        cc in 1e-16..1e-14f64,
        z0 in 10.0..100.0f64,
        csys in 1e-12..1e-11f64,
        omega_r in 1e9..1e11f64,
        bump in 1.01..2.0f64,
    ) {
        let k = |cc, z0, csys, wr, w| {
            markov_kappa(&CouplingParams::new(cc, z0, csys, wr, Some(w)).unwrap())
        };
        let base = k(cc, z0, csys, omega_r, omega_r);
        prop_assert!(k(cc * bump, z0, csys, omega_r, omega_r) > base);
        prop_assert!(k(cc, z0 * bump, csys, omega_r, omega_r) > base);
        prop_assert!(k(cc, z0, csys * bump, omega_r, omega_r) < base);
        prop_assert!(k(cc, z0, csys, omega_r * bump, omega_r) > base);
        prop_assert!(k(cc, z0, csys, omega_r, omega_r * bump) > base);
    }
}
