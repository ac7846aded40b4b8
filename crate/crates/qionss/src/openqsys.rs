//! Open-quantum-system model of the capacitively coupled single port.
//!
//! Under the rotating-wave and Markov approximations the LC mode obeys the
//! Heisenberg-Langevin equation `ȧ = −(iΔ + κ²/2) a − κ b_in` with the
//! input-output relation `b_out = κ a + b_in`, which is the single-port
//! state-space model A = −(iΔ + κ²/2), B = −κ, C = κ, D = 1. The coupling
//! strength is `κ = √(2π) (C_c/4π) √(Z₀ω_R/C) √Ω` in s^(−1/2).

use num_complex::Complex64;

use crate::error::{check_finite, check_non_negative, check_positive, Error, Result};
use crate::HBAR;

/// Physical constants fixing the Markov coupling strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    coupling_c: f64,
    z0: f64,
    system_c: f64,
    omega_r: f64,
    carrier: f64,
}

/// Ratio Cc/C above which the weak-coupling expansion is rejected outright.
pub const COUPLING_RATIO_LIMIT: f64 = 0.1;

/// Ratio Cc/C above which the expansion is still accepted but questionable.
pub const COUPLING_RATIO_WARN: f64 = 0.01;

impl CouplingParams {
    /// Coupling capacitance Cc and system capacitance C in farad, Z₀ in ohm,
    /// resonator frequency ω_R in rad/s, and optional carrier frequency Ω
    /// (defaults to ω_R, i.e. driving at resonance).
    ///
    /// The model assumes C ≫ Cc; Cc/C above 0.1 is rejected.
    pub fn new(
        coupling_c: f64,
        z0: f64,
        system_c: f64,
        omega_r: f64,
        carrier: Option<f64>,
    ) -> Result<Self> {
        check_positive("coupling capacitance", coupling_c)?;
        check_positive("characteristic impedance", z0)?;
        check_positive("system capacitance", system_c)?;
        check_positive("resonator frequency", omega_r)?;
        let carrier = match carrier {
            Some(w) => check_positive("carrier frequency", w)?,
            None => omega_r,
        };
        let ratio = coupling_c / system_c;
        if ratio > COUPLING_RATIO_LIMIT {
            return Err(Error::CouplingTooStrong { ratio });
        }
        Ok(CouplingParams {
            coupling_c,
            z0,
            system_c,
            omega_r,
            carrier,
        })
    }

    pub fn coupling_c(&self) -> f64 {
        self.coupling_c
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn system_c(&self) -> f64 {
        self.system_c
    }

    pub fn omega_r(&self) -> f64 {
        self.omega_r
    }

    pub fn carrier(&self) -> f64 {
        self.carrier
    }

    pub fn coupling_ratio(&self) -> f64 {
        self.coupling_c / self.system_c
    }

    /// A human-readable caution when Cc/C is large enough that the
    /// weak-coupling expansion starts to strain, yet still accepted.
    pub fn coupling_warning(&self) -> Option<String> {
        let ratio = self.coupling_ratio();
        (ratio > COUPLING_RATIO_WARN).then(|| {
            format!(
                "coupling ratio Cc/C = {ratio:.3e} exceeds {COUPLING_RATIO_WARN}; \
                 the weak-coupling approximation may be strained"
            )
        })
    }
}

/// Markov coupling strength κ in s^(−1/2):
/// `κ = √(2π) (C_c/4π) √(Z₀ω_R/C) √Ω`.
pub fn markov_kappa(cp: &CouplingParams) -> f64 {
    let two_pi = std::f64::consts::TAU;
    two_pi.sqrt()
        * (cp.coupling_c / (2.0 * two_pi))
        * (cp.z0 * cp.omega_r / cp.system_c).sqrt()
        * cp.carrier.sqrt()
}

/// Detuning Δ = ω − ω_R in rad/s.
pub fn detuning(omega: f64, omega_r: f64) -> f64 {
    omega - omega_r
}

/// Sign convention of the state-space drive terms.
///
/// Both choices leave H(s), its poles/zeros, and b_out unchanged (H depends
/// on the product CB); they differ only in the sign of the internal state
/// mean relative to the input, which is what varies across texts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// B = −κ, C = +κ (as derived here).
    #[default]
    Paper,
    /// B = +κ, C = −κ (drive term enters with a plus sign).
    Gardiner,
}

impl Convention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::Paper => "paper",
            Convention::Gardiner => "gardiner",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "paper" => Ok(Convention::Paper),
            "gardiner" => Ok(Convention::Gardiner),
            other => Err(format!("unknown convention {other:?} (use paper|gardiner)")),
        }
    }
}

/// Rotating-frame model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    kappa: f64,
    delta: f64,
}

impl ModelParams {
    /// κ ≥ 0 in s^(−1/2), Δ finite in rad/s. κ may be set directly instead
    /// of going through [`markov_kappa`].
    pub fn new(kappa: f64, delta: f64) -> Result<Self> {
        check_non_negative("coupling strength kappa", kappa)?;
        check_finite("detuning", delta)?;
        Ok(ModelParams { kappa, delta })
    }

    pub fn from_coupling(cp: &CouplingParams) -> Self {
        ModelParams {
            kappa: markov_kappa(cp),
            delta: detuning(cp.carrier(), cp.omega_r()),
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Complex state-space model `ẋ = Ax + Bu, y = Cx + Du`.
///
/// Matrices are stored row-major; this network is 1x1 but the dimensions are
/// kept explicit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceModel {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    c: Vec<Complex64>,
    d: Vec<Complex64>,
    states: usize,
    ports: usize,
}

impl StateSpaceModel {
    /// General constructor; `a` is states x states, `b` states x ports,
    /// `c` ports x states, `d` ports x ports, all row-major.
    pub fn new(
        a: Vec<Complex64>,
        b: Vec<Complex64>,
        c: Vec<Complex64>,
        d: Vec<Complex64>,
        states: usize,
        ports: usize,
    ) -> Result<Self> {
        let expect = |name: &str, len: usize, want: usize| {
            if len == want {
                Ok(())
            } else {
                Err(Error::DimensionMismatch(format!(
                    "{name} has {len} entries, expected {want}"
                )))
            }
        };
        expect("A", a.len(), states * states)?;
        expect("B", b.len(), states * ports)?;
        expect("C", c.len(), ports * states)?;
        expect("D", d.len(), ports * ports)?;
        Ok(StateSpaceModel {
            a,
            b,
            c,
            d,
            states,
            ports,
        })
    }

    pub fn single_port(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        StateSpaceModel {
            a: vec![a],
            b: vec![b],
            c: vec![c],
            d: vec![d],
            states: 1,
            ports: 1,
        }
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn ports(&self) -> usize {
        self.ports
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn b(&self) -> &[Complex64] {
        &self.b
    }

    pub fn c(&self) -> &[Complex64] {
        &self.c
    }

    pub fn d(&self) -> &[Complex64] {
        &self.d
    }

    /// The scalar (A, B, C, D) of a single-port model.
    pub fn scalars(&self) -> Result<(Complex64, Complex64, Complex64, Complex64)> {
        if self.states == 1 && self.ports == 1 {
            Ok((self.a[0], self.b[0], self.c[0], self.d[0]))
        } else {
            Err(Error::NotSinglePort {
                states: self.states,
                ports: self.ports,
            })
        }
    }
}

/// Single-port model for the coupled LC:
/// `A = −(iΔ + κ²/2), B = −κ, C = κ, D = 1` (paper convention).
pub fn build_state_space(mp: &ModelParams) -> StateSpaceModel {
    build_state_space_with(mp, Convention::Paper)
}

pub fn build_state_space_with(mp: &ModelParams, convention: Convention) -> StateSpaceModel {
    let a = Complex64::new(-mp.kappa * mp.kappa / 2.0, -mp.delta);
    let (b, c) = match convention {
        Convention::Paper => (-mp.kappa, mp.kappa),
        Convention::Gardiner => (mp.kappa, -mp.kappa),
    };
    StateSpaceModel::single_port(
        a,
        Complex64::new(b, 0.0),
        Complex64::new(c, 0.0),
        Complex64::new(1.0, 0.0),
    )
}

/// Coefficient record of the three Hamiltonian pieces after the RWA and
/// Markov steps.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSummary {
    /// ħΔ, the coefficient of a†a in H_sys (joule).
    pub h_sys_coeff: f64,
    /// ħκ/√(2π), the integrand coefficient of the post-RWA H_int (J·s^(1/2)).
    pub h_int_coeff: f64,
    /// Shape of the bath term, shifted by the carrier it rotates against.
    pub bath_detuning_form: String,
}

pub fn hamiltonian_summary(cp: &CouplingParams, mp: &ModelParams) -> HamiltonianSummary {
    HamiltonianSummary {
        h_sys_coeff: HBAR * mp.delta,
        h_int_coeff: HBAR * mp.kappa / std::f64::consts::TAU.sqrt(),
        bath_detuning_form: format!(
            "hbar * Int (omega - Omega) b'(omega) b(omega) d omega, Omega = {:e} rad/s",
            cp.carrier()
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(a.abs()).max(f64::MIN_POSITIVE)
    }

    fn worked_example() -> CouplingParams {
        CouplingParams::new(1e-15, 50.0, 1e-12, 2.0 * PI * 5e9, None).unwrap()
    }

    #[test]
    fn kappa_worked_example() {
        // √(2π)(1e-15/4π)√(50·2π·5e9/1e-12)√(2π·5e9); 60-digit reference.
        let kappa = markov_kappa(&worked_example());
        assert!(close(kappa, 44.311346272637901, 1e-12));
    }

    #[test]
    fn kappa_vanishes_with_coupling() {
        let cp = CouplingParams::new(1e-25, 50.0, 1e-12, 2.0 * PI * 5e9, None).unwrap();
        assert!(markov_kappa(&cp) < 1e-8);
    }

    #[test]
    fn kappa_linear_in_coupling_capacitance() {
        let cp1 = worked_example();
        let cp2 = CouplingParams::new(2e-15, 50.0, 1e-12, 2.0 * PI * 5e9, None).unwrap();
        assert!(close(markov_kappa(&cp2), 2.0 * markov_kappa(&cp1), 1e-13));
    }

    #[test]
    fn kappa_monotonicity() {
        let base = worked_example();
        let k0 = markov_kappa(&base);
        let up = |cc: f64, z0: f64, c: f64, wr: f64, w: f64| {
            markov_kappa(&CouplingParams::new(cc, z0, c, wr, Some(w)).unwrap())
        };
        let (cc, z0, c, wr) = (1e-15, 50.0, 1e-12, 2.0 * PI * 5e9);
        assert!(up(cc * 1.5, z0, c, wr, wr) > k0);
        assert!(up(cc, z0 * 1.5, c, wr, wr) > k0);
        assert!(up(cc, z0, c * 1.5, wr, wr) < k0);
        assert!(up(cc, z0, c, wr * 1.5, wr) > k0);
        assert!(up(cc, z0, c, wr, wr * 1.5) > k0);
    }

    #[test]
    fn strong_coupling_rejected_and_marginal_warned() {
        let err = CouplingParams::new(2e-13, 50.0, 1e-12, 2.0 * PI * 5e9, None);
        assert!(matches!(err, Err(Error::CouplingTooStrong { .. })));

        let marginal = CouplingParams::new(5e-14, 50.0, 1e-12, 2.0 * PI * 5e9, None).unwrap();
        assert!(marginal.coupling_warning().is_some());
        assert!(worked_example().coupling_warning().is_none());
    }

    #[test]
    fn detuning_values() {
        assert_eq!(detuning(1.0, 1.0), 0.0);
        assert_eq!(detuning(1e6 + 5.0, 5.0), 1e6);
        // 2π·5.001 GHz vs 2π·5 GHz = 2π·1 MHz; 60-digit reference.
        let d = detuning(2.0 * PI * 5.001e9, 2.0 * PI * 5e9);
        assert!(close(d, 6283185.3071795865, 1e-9));
    }

    #[test]
    fn state_space_decoupled_mirror() {
        let mp = ModelParams::new(0.0, 0.0).unwrap();
        let ssm = build_state_space(&mp);
        let (a, b, c, d) = ssm.scalars().unwrap();
        assert_eq!(a, Complex64::new(0.0, 0.0));
        assert_eq!(b, Complex64::new(0.0, 0.0));
        assert_eq!(c, Complex64::new(0.0, 0.0));
        assert_eq!(d, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn state_space_worked_example() {
        // κ of the worked example gives κ²/2 = 981.74770424681039
        // (60-digit reference).
        let kappa = markov_kappa(&worked_example());
        let mp = ModelParams::new(kappa, 0.0).unwrap();
        let (a, b, c, d) = build_state_space(&mp).scalars().unwrap();
        assert!(close(a.re, -981.74770424681039, 1e-12));
        assert_eq!(a.im, 0.0);
        assert!(close(b.re, -44.311346272637901, 1e-12));
        assert!(close(c.re, 44.311346272637901, 1e-12));
        assert_eq!(d, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn state_space_with_detuning() {
        let kappa = markov_kappa(&worked_example());
        let mp = ModelParams::new(kappa, 1e6).unwrap();
        let (a, _, _, _) = build_state_space(&mp).scalars().unwrap();
        assert!(close(a.re, -981.74770424681039, 1e-12));
        assert_eq!(a.im, -1e6);
    }

    #[test]
    fn stability_and_sign_structure() {
        let mp = ModelParams::new(44.3, -2.5e5).unwrap();
        let (a, b, c, d) = build_state_space(&mp).scalars().unwrap();
        assert!(a.re < 0.0);
        assert!(close(a.re, -mp.kappa() * mp.kappa() / 2.0, 1e-15));
        assert_eq!(a.im, -mp.delta());
        assert_eq!(b, -c);
        assert_eq!(d.re, 1.0);
    }

    #[test]
    fn gardiner_convention_flips_drive_sign_only() {
        let mp = ModelParams::new(10.0, 3.0).unwrap();
        let paper = build_state_space_with(&mp, Convention::Paper);
        let gard = build_state_space_with(&mp, Convention::Gardiner);
        let (ap, bp, cp, dp) = paper.scalars().unwrap();
        let (ag, bg, cg, dg) = gard.scalars().unwrap();
        assert_eq!(ap, ag);
        assert_eq!(bp, -bg);
        assert_eq!(cp, -cg);
        assert_eq!(dp, dg);
        // the transfer-function product CB is invariant
        assert_eq!(bp * cp, bg * cg);
    }

    #[test]
    fn hamiltonian_summary_coefficients() {
        let cp = worked_example();
        let mp = ModelParams::from_coupling(&cp);
        let h = hamiltonian_summary(&cp, &mp);
        // Ω defaults to ω_R, so Δ = 0
        assert_eq!(h.h_sys_coeff, 0.0);
        // ħκ/√(2π); 60-digit reference.
        assert!(close(h.h_int_coeff, 1.8642372076222971e-33, 1e-12));
        assert!(h.bath_detuning_form.contains("omega - Omega"));
        assert!(h
            .bath_detuning_form
            .contains(&format!("{:e}", cp.carrier())));

        // definitional round trip: κ/√(2π) reproduces (Cc/4π)√(Z₀ω_R/C)√Ω
        let lhs = mp.kappa() / std::f64::consts::TAU.sqrt();
        let rhs = cp.coupling_c() / (4.0 * PI)
            * (cp.z0() * cp.omega_r() / cp.system_c()).sqrt()
            * cp.carrier().sqrt();
        assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn model_params_validation() {
        assert!(ModelParams::new(-1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, f64::NAN).is_err());
        assert!(ModelParams::new(0.0, -1e6).is_ok());
    }

    #[test]
    fn dimension_checks() {
        let z = Complex64::new(0.0, 0.0);
        assert!(StateSpaceModel::new(vec![z; 4], vec![z; 2], vec![z; 2], vec![z], 2, 1).is_ok());
        assert!(StateSpaceModel::new(vec![z; 3], vec![z; 2], vec![z; 2], vec![z], 2, 1).is_err());
        let two = StateSpaceModel::new(vec![z; 4], vec![z; 2], vec![z; 2], vec![z], 2, 1).unwrap();
        assert!(matches!(
            two.scalars(),
            Err(Error::NotSinglePort {
                states: 2,
                ports: 1
            })
        ));
    }
}
