//! Classical and quantum normal modes of the lumped LC oscillator.
//!
//! The classical normal mode is `a = ½√L (I + iωCV)` with `|a|² + |a*|²`
//! equal to the stored energy `½(CV² + LI²)`. Quantization promotes the
//! node flux Φ and node charge Q to a canonical pair with `[Φ, Q] = iħ`,
//! and the ladder operators
//!
//! ```text
//! â  = Φ/√(2Lħω) + iQ/√(2Cħω)
//! â† = Φ/√(2Lħω) − iQ/√(2Cħω)
//! ```
//!
//! satisfy `[â, â†] = 1` for every valid (L, C).

use num_complex::Complex64;

use crate::error::{check_finite, check_positive, Result};
use crate::operator::{LinearOpExpr, ModeLabel};
use crate::HBAR;

/// Lumped-element values of the LC oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LCParams {
    inductance: f64,
    capacitance: f64,
}

impl LCParams {
    /// Inductance in henry and capacitance in farad; both must be positive.
    pub fn new(inductance: f64, capacitance: f64) -> Result<Self> {
        check_positive("inductance", inductance)?;
        check_positive("capacitance", capacitance)?;
        Ok(LCParams {
            inductance,
            capacitance,
        })
    }

    pub fn inductance(&self) -> f64 {
        self.inductance
    }

    pub fn capacitance(&self) -> f64 {
        self.capacitance
    }
}

/// Instantaneous classical state of the oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    current: f64,
    voltage: f64,
}

impl ClassicalState {
    pub fn new(current: f64, voltage: f64) -> Result<Self> {
        check_finite("current", current)?;
        check_finite("voltage", voltage)?;
        Ok(ClassicalState { current, voltage })
    }

    pub fn current(&self) -> f64 {
        self.current
    }

    pub fn voltage(&self) -> f64 {
        self.voltage
    }
}

/// Resonant angular frequency ω = 1/√(LC) in rad/s.
pub fn resonant_frequency(p: &LCParams) -> f64 {
    1.0 / (p.inductance * p.capacitance).sqrt()
}

/// Classical normal-mode amplitudes `(a, a*)` with `a = ½√L (I + iωCV)`.
///
/// These carry units of √energy: `|a|² + |a*|²` is the stored energy.
pub fn classical_normal_modes(s: &ClassicalState, p: &LCParams) -> (Complex64, Complex64) {
    let omega = resonant_frequency(p);
    let half_sqrt_l = 0.5 * p.inductance.sqrt();
    let a = Complex64::new(
        half_sqrt_l * s.current,
        half_sqrt_l * omega * p.capacitance * s.voltage,
    );
    (a, a.conj())
}

/// Total stored energy ½(CV² + LI²) in joule.
pub fn classical_energy(s: &ClassicalState, p: &LCParams) -> f64 {
    0.5 * (p.capacitance * s.voltage * s.voltage + p.inductance * s.current * s.current)
}

/// Ladder operators (â, â†) of the quantized oscillator over the SI basis.
pub fn lc_ladder_ops(p: &LCParams) -> (LinearOpExpr, LinearOpExpr) {
    lc_ladder_ops_with_hbar(p, HBAR)
}

/// Ladder operators over a basis with an explicit ħ (ħ = 1 is handy for
/// checking that the circuit constants cancel symbolically).
pub fn lc_ladder_ops_with_hbar(p: &LCParams, hbar: f64) -> (LinearOpExpr, LinearOpExpr) {
    let omega = resonant_frequency(p);
    let phi_coeff = 1.0 / (2.0 * p.inductance * hbar * omega).sqrt();
    let q_coeff = 1.0 / (2.0 * p.capacitance * hbar * omega).sqrt();

    let a = LinearOpExpr::flux_with_hbar(ModeLabel::lc(), hbar) * phi_coeff
        + LinearOpExpr::charge_with_hbar(ModeLabel::lc(), hbar) * Complex64::new(0.0, q_coeff);
    let a_dag = a.dagger();
    (a, a_dag)
}

/// Flux and charge rebuilt from the ladder operators:
/// `Φ = √(Lħω/2)(â + â†)`, `Q = −i√(Cħω/2)(â − â†)`.
///
/// Expanding through [`lc_ladder_ops`] and back is the identity on
/// coefficients, so the returned expressions are (numerically) the pure
/// canonical Φ and Q.
pub fn flux_charge_from_ladder(p: &LCParams) -> (LinearOpExpr, LinearOpExpr) {
    flux_charge_from_ladder_with_hbar(p, HBAR)
}

pub fn flux_charge_from_ladder_with_hbar(p: &LCParams, hbar: f64) -> (LinearOpExpr, LinearOpExpr) {
    let omega = resonant_frequency(p);
    let (a, a_dag) = lc_ladder_ops_with_hbar(p, hbar);

    let phi_scale = (p.inductance * hbar * omega / 2.0).sqrt();
    let q_scale = (p.capacitance * hbar * omega / 2.0).sqrt();

    let phi = (a.clone() + a_dag.clone()) * phi_scale;
    let q = (a - a_dag) * Complex64::new(0.0, -q_scale);
    (phi, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{commutator, CanonicalOp};

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(a.abs()).max(f64::MIN_POSITIVE)
    }

    #[test]
    fn resonant_frequency_unit_values() {
        let p = LCParams::new(1.0, 1.0).unwrap();
        assert_eq!(resonant_frequency(&p), 1.0);
    }

    #[test]
    fn resonant_frequency_nanohenry_picofarad() {
        // 1/sqrt(1e-9 * 1e-12), reference value from 60-digit arithmetic
        let p = LCParams::new(1e-9, 1e-12).unwrap();
        assert!(close(resonant_frequency(&p), 3.1622776601683793e10, 1e-14));
    }

    #[test]
    fn non_positive_params_rejected() {
        assert!(LCParams::new(1e-9, 0.0).is_err());
        assert!(LCParams::new(-1.0, 1.0).is_err());
        assert!(LCParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn normal_modes_zero_state() {
        let p = LCParams::new(1.0, 1.0).unwrap();
        let s = ClassicalState::new(0.0, 0.0).unwrap();
        let (a, a_star) = classical_normal_modes(&s, &p);
        assert_eq!(a, Complex64::new(0.0, 0.0));
        assert_eq!(a_star, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn normal_modes_pure_current() {
        let p = LCParams::new(1.0, 1.0).unwrap();
        let s = ClassicalState::new(1.0, 0.0).unwrap();
        let (a, a_star) = classical_normal_modes(&s, &p);
        assert_eq!(a, Complex64::new(0.5, 0.0));
        let energy = a.norm_sqr() + a_star.norm_sqr();
        assert!(close(energy, 0.5, 1e-15));
        assert!(close(classical_energy(&s, &p), 0.5, 1e-15));
    }

    #[test]
    fn normal_modes_mixed_state() {
        // L=2, C=0.5 gives omega = 1; a = (sqrt(2)/2)(1 + i), energy = 2.
        let p = LCParams::new(2.0, 0.5).unwrap();
        let s = ClassicalState::new(1.0, 2.0).unwrap();
        let (a, a_star) = classical_normal_modes(&s, &p);
        assert!(close(a.re, std::f64::consts::FRAC_1_SQRT_2, 1e-15));
        assert!(close(a.im, std::f64::consts::FRAC_1_SQRT_2, 1e-15));
        let energy = a.norm_sqr() + a_star.norm_sqr();
        assert!(close(energy, 2.0, 1e-13));
        assert!(close(classical_energy(&s, &p), 2.0, 1e-15));
    }

    #[test]
    fn classical_energy_si_example() {
        let p = LCParams::new(1e-9, 1e-12).unwrap();
        let s = ClassicalState::new(1e-3, 1.0).unwrap();
        assert!(close(classical_energy(&s, &p), 5.005e-13, 1e-14));
    }

    #[test]
    fn ladder_commutator_is_unity() {
        let p = LCParams::new(1e-9, 1e-12).unwrap();
        let (a, a_dag) = lc_ladder_ops(&p);
        let c = commutator(&a, &a_dag).unwrap();
        assert!(close(c.re, 1.0, 1e-12));
        assert!(c.im.abs() <= 1e-12);
        assert_eq!(
            commutator(&a, &a).unwrap(),
            Complex64::new(0.0, 0.0),
            "[a, a] must vanish exactly"
        );
    }

    #[test]
    fn ladder_flux_coefficient() {
        // 1/sqrt(2 * 1e-9 * hbar * omega), reference from 60-digit arithmetic
        let p = LCParams::new(1e-9, 1e-12).unwrap();
        let (a, _) = lc_ladder_ops(&p);
        let coeff = a.coeff(&CanonicalOp::flux(ModeLabel::lc()));
        assert!(close(coeff.re, 1.2244665393024933e16, 1e-12));
        assert_eq!(coeff.im, 0.0);
        let q_coeff = a.coeff(&CanonicalOp::charge(ModeLabel::lc()));
        assert!(close(q_coeff.im, 3.8721031828599613e17, 1e-12));
        assert_eq!(q_coeff.re, 0.0);
    }

    #[test]
    fn flux_charge_commutator_is_i_hbar() {
        let p = LCParams::new(1e-9, 1e-12).unwrap();
        let (phi, q) = flux_charge_from_ladder(&p);
        let c = commutator(&phi, &q).unwrap();
        assert!(close(c.im, HBAR, 1e-12));
        assert!(c.re.abs() <= 1e-12 * HBAR);
    }

    #[test]
    fn round_trip_recovers_canonical_operators() {
        let p = LCParams::new(3.3e-9, 4.7e-13).unwrap();
        let (phi, q) = flux_charge_from_ladder(&p);
        let phi_op = CanonicalOp::flux(ModeLabel::lc());
        let q_op = CanonicalOp::charge(ModeLabel::lc());

        assert!(close(phi.coeff(&phi_op).re, 1.0, 1e-14));
        assert!(phi.coeff(&phi_op).im.abs() <= 1e-15);
        assert!(phi.coeff(&q_op).norm() <= 1e-15 * phi.coeff(&phi_op).norm());

        assert!(close(q.coeff(&q_op).re, 1.0, 1e-14));
        assert!(q.coeff(&phi_op).norm() <= 1e-15);
    }

    #[test]
    fn voltage_coefficient_from_charge() {
        // V = Q/C = −i√(ħω/(2C))(â − â†); check the â coefficient.
        let p = LCParams::new(1e-9, 1e-12).unwrap();
        let (_, q) = flux_charge_from_ladder(&p);
        let (a, _) = lc_ladder_ops(&p);

        // Project Q/C onto the ladder basis: coefficient of â in V equals
        // [V, â†] since [â, â†] = 1 and cross terms vanish.
        let (_, a_dag) = lc_ladder_ops(&p);
        let v = q * (1.0 / p.capacitance());
        let proj = commutator(&v, &a_dag).unwrap();
        let expected = -1.2912879032079322e-6; // −√(ħω/(2C)), 60-digit reference
        assert!(close(proj.im, expected, 1e-12));
        assert!(proj.re.abs() <= 1e-12 * expected.abs());
        // and â itself projects to 1
        let unit = commutator(&a, &a_dag).unwrap();
        assert!(close(unit.re, 1.0, 1e-12));
    }

    #[test]
    fn hbar_one_basis_gives_clean_symbols() {
        let p = LCParams::new(2.0, 0.125).unwrap();
        let (a, a_dag) = lc_ladder_ops_with_hbar(&p, 1.0);
        let c = commutator(&a, &a_dag).unwrap();
        assert!(close(c.re, 1.0, 1e-14));
    }
}
