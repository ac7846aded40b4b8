//! Quantization of the lossless transmission line.
//!
//! Discrete bosonic modes live on a quantization length ℓ with the periodic
//! spectrum `k_n = 2πn/ℓ` and `ω_k = v_p |k|`. Each mode owns an independent
//! canonical pair `(Φ_k, Q_k)`, and
//!
//! ```text
//! b̂_k = √(ω_k C′ℓ/2ħ) Φ_k + i √(1/(2C′ℓħω_k)) Q_k
//! ```
//!
//! satisfies `[b̂_k, b̂†_k] = 1` with all cross-mode commutators vanishing.
//! Field evaluation is semiclassical: a complex amplitude β stands in for the
//! rotated mode operator b̂′_k = i b̂_k, and β* for b̂′†_k.

use num_complex::Complex64;

use crate::error::{check_positive, Error, Result};
use crate::operator::{LinearOpExpr, ModeLabel};
use crate::HBAR;

/// Per-length line constants and the quantization length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TLineParams {
    inductance_per_m: f64,
    capacitance_per_m: f64,
    length: f64,
}

impl TLineParams {
    /// L′ in H/m, C′ in F/m, quantization length ℓ in m; all positive.
    pub fn new(inductance_per_m: f64, capacitance_per_m: f64, length: f64) -> Result<Self> {
        check_positive("inductance per length", inductance_per_m)?;
        check_positive("capacitance per length", capacitance_per_m)?;
        check_positive("quantization length", length)?;
        Ok(TLineParams {
            inductance_per_m,
            capacitance_per_m,
            length,
        })
    }

    pub fn inductance_per_m(&self) -> f64 {
        self.inductance_per_m
    }

    pub fn capacitance_per_m(&self) -> f64 {
        self.capacitance_per_m
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

/// Phase velocity v_p = 1/√(L′C′) in m/s.
pub fn phase_velocity(t: &TLineParams) -> f64 {
    1.0 / (t.inductance_per_m * t.capacitance_per_m).sqrt()
}

/// Characteristic impedance Z₀ = √(L′/C′) in ohm.
pub fn char_impedance(t: &TLineParams) -> f64 {
    (t.inductance_per_m / t.capacitance_per_m).sqrt()
}

/// One discrete line mode. The sign of `k` is the propagation direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    k: f64,
    omega_k: f64,
}

impl ModeSpec {
    /// Mode at signed wavenumber `k` (1/m); `ω_k = v_p |k|` must be positive.
    pub fn from_wavenumber(t: &TLineParams, k: f64) -> Result<Self> {
        if !k.is_finite() || k == 0.0 {
            return Err(Error::InvalidMode(format!(
                "wavenumber must be finite and non-zero, got {k}"
            )));
        }
        Ok(ModeSpec {
            k,
            omega_k: phase_velocity(t) * k.abs(),
        })
    }

    /// Mode `n` of the periodic spectrum, k_n = 2πn/ℓ (n ≠ 0).
    pub fn from_index(t: &TLineParams, n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMode("mode index must be non-zero".into()));
        }
        Self::from_wavenumber(t, 2.0 * std::f64::consts::PI * n as f64 / t.length)
    }

    pub fn wavenumber(&self) -> f64 {
        self.k
    }

    pub fn angular_frequency(&self) -> f64 {
        self.omega_k
    }

    pub fn is_right_moving(&self) -> bool {
        self.k > 0.0
    }

    pub fn label(&self) -> ModeLabel {
        ModeLabel::line(self.k)
    }
}

/// A mode with a semiclassical amplitude β substituted for b̂′_k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentModeAmplitude {
    pub mode: ModeSpec,
    pub beta: Complex64,
}

impl CoherentModeAmplitude {
    pub fn new(mode: ModeSpec, beta: Complex64) -> Self {
        CoherentModeAmplitude { mode, beta }
    }
}

/// Ladder operators (b̂_k, b̂†_k) of one line mode over the SI basis.
pub fn tline_mode_ops(t: &TLineParams, m: &ModeSpec) -> (LinearOpExpr, LinearOpExpr) {
    tline_mode_ops_with_hbar(t, m, HBAR)
}

pub fn tline_mode_ops_with_hbar(
    t: &TLineParams,
    m: &ModeSpec,
    hbar: f64,
) -> (LinearOpExpr, LinearOpExpr) {
    let cl = t.capacitance_per_m * t.length;
    let phi_coeff = (m.omega_k * cl / (2.0 * hbar)).sqrt();
    let q_coeff = 1.0 / (2.0 * cl * hbar * m.omega_k).sqrt();

    let b = LinearOpExpr::flux_with_hbar(m.label(), hbar) * phi_coeff
        + LinearOpExpr::charge_with_hbar(m.label(), hbar) * Complex64::new(0.0, q_coeff);
    let b_dag = b.dagger();
    (b, b_dag)
}

/// Apply the π/2 phase offset that aligns the mode with microwave
/// conventions: b̂′ = e^{iπ/2} b̂ = i b̂. Commutators are preserved.
pub fn rotate_mode(b: LinearOpExpr) -> LinearOpExpr {
    b * Complex64::new(0.0, 1.0)
}

fn check_single_direction(amps: &[CoherentModeAmplitude]) -> Result<()> {
    let mut dirs = amps.iter().map(|a| a.mode.is_right_moving());
    if let Some(first) = dirs.next() {
        if dirs.any(|d| d != first) {
            return Err(Error::MixedDirections);
        }
    }
    Ok(())
}

/// Phase argument ω_k t − k z; with signed k this covers both directions.
fn phase(m: &ModeSpec, z: f64, time: f64) -> f64 {
    m.omega_k * time - m.k * z
}

fn field_sum<F>(amps: &[CoherentModeAmplitude], z: f64, time: f64, term: F) -> Result<Complex64>
where
    F: Fn(&CoherentModeAmplitude, Complex64, Complex64) -> Complex64,
{
    check_single_direction(amps)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for amp in amps {
        let theta = phase(&amp.mode, z, time);
        let e_minus = Complex64::from_polar(1.0, -theta);
        let e_plus = Complex64::from_polar(1.0, theta);
        sum += term(amp, e_minus, e_plus);
    }
    Ok(sum)
}

fn voltage_sum(
    t: &TLineParams,
    amps: &[CoherentModeAmplitude],
    z: f64,
    time: f64,
) -> Result<Complex64> {
    let cl = t.capacitance_per_m * t.length;
    field_sum(amps, z, time, |amp, e_minus, e_plus| {
        let pref = (HBAR * amp.mode.omega_k / (2.0 * cl)).sqrt();
        (amp.beta * e_minus + amp.beta.conj() * e_plus) * pref
    })
}

fn current_sum(
    t: &TLineParams,
    amps: &[CoherentModeAmplitude],
    z: f64,
    time: f64,
) -> Result<Complex64> {
    let cl = t.capacitance_per_m * t.length;
    let ll = t.inductance_per_m * t.length;
    field_sum(amps, z, time, |amp, e_minus, e_plus| {
        let pref = (HBAR / (2.0 * amp.mode.omega_k * cl)).sqrt() / ll;
        Complex64::new(0.0, 1.0) * (amp.beta.conj() * e_plus - amp.beta * e_minus) * pref
    })
}

fn flux_sum(
    t: &TLineParams,
    amps: &[CoherentModeAmplitude],
    z: f64,
    time: f64,
) -> Result<Complex64> {
    let cl = t.capacitance_per_m * t.length;
    field_sum(amps, z, time, |amp, e_minus, e_plus| {
        let pref = (HBAR / (2.0 * amp.mode.omega_k * cl)).sqrt();
        let i = Complex64::new(0.0, 1.0);
        (i * amp.beta * e_minus + (i * amp.beta).conj() * e_plus) * pref
    })
}

/// Semiclassical traveling voltage wave, V(z,t) in volt:
/// `Σ_k √(ħω_k/2C′ℓ) (β_k e^{−i(ω_k t − kz)} + c.c.)`.
///
/// All modes must propagate in the same direction; evaluate each direction
/// separately and add.
pub fn voltage_wave(
    t: &TLineParams,
    amps: &[CoherentModeAmplitude],
    z: f64,
    time: f64,
) -> Result<f64> {
    voltage_sum(t, amps, z, time).map(|v| v.re)
}

/// Semiclassical traveling current wave, I(z,t) in ampere:
/// `(1/L′ℓ) Σ_k √(ħ/2ω_k C′ℓ) i (β*_k e^{i(ω_k t − kz)} − β_k e^{−i(ω_k t − kz)})`.
pub fn current_wave(
    t: &TLineParams,
    amps: &[CoherentModeAmplitude],
    z: f64,
    time: f64,
) -> Result<f64> {
    current_sum(t, amps, z, time).map(|v| v.re)
}

/// Semiclassical flux wave Φ(z,t) in weber, defined as the time integral of
/// [`voltage_wave`] so that V = ∂Φ/∂t holds identically.
pub fn flux_wave(
    t: &TLineParams,
    amps: &[CoherentModeAmplitude],
    z: f64,
    time: f64,
) -> Result<f64> {
    flux_sum(t, amps, z, time).map(|v| v.re)
}

/// Central-difference residual of the flux wave equation,
/// `v_p² ∂²Φ/∂z² − ∂²Φ/∂t²`, with spatial step `h` and temporal step
/// `h/(2v_p)`. Second-order accurate: the residual shrinks as O(h²).
pub fn wave_equation_residual(
    t: &TLineParams,
    amps: &[CoherentModeAmplitude],
    z: f64,
    time: f64,
    h: f64,
) -> Result<f64> {
    check_positive("finite-difference step", h)?;
    let vp = phase_velocity(t);
    // An asymmetric temporal step: with dt = h/v_p the two truncation errors
    // cancel identically for a single mode and the O(h²) law disappears.
    let dt = 0.5 * h / vp;

    let f = |zz: f64, tt: f64| flux_wave(t, amps, zz, tt);
    let d2z = (f(z + h, time)? - 2.0 * f(z, time)? + f(z - h, time)?) / (h * h);
    let d2t = (f(z, time + dt)? - 2.0 * f(z, time)? + f(z, time - dt)?) / (dt * dt);
    Ok(vp * vp * d2z - d2t)
}

/// Normalization factor `2π (L′C′ℓ²)^{−1/4}` mapping a discrete rotated mode
/// b̂′_k to the continuum field b̂(ω) whose commutator is `2πδ(ω − ω′)`.
pub fn continuum_norm(t: &TLineParams) -> f64 {
    2.0 * std::f64::consts::PI
        * (t.inductance_per_m * t.capacitance_per_m * t.length * t.length).powf(-0.25)
}
