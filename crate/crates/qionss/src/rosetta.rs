//! Conversions between microwave traveling-wave quantities and bosonic mode
//! amplitudes.
//!
//! A peak voltage phasor `V₀ = |V₀| e^{iφ}` of a single-frequency traveling
//! wave maps to the (semiclassical) raising-operator amplitude through
//!
//! ```text
//! b† = √(C′ℓ/2ħω) V₀ e^{iπ/2}        V₀ = √(2ħω/C′ℓ) b† e^{−iπ/2}
//! ```
//!
//! and Pozar's power-normalized wave is `a = V₀/√Z₀`. Left-movers use the
//! same magnitudes; direction is carried as metadata rather than a signed
//! wavenumber.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::error::{check_finite, check_non_negative, check_positive, Result};
use crate::tline::{char_impedance, phase_velocity, TLineParams};
use crate::HBAR;

/// Propagation direction of a traveling wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Right,
    Left,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Right => "right",
            Direction::Left => "left",
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "right" => Ok(Direction::Right),
            "left" => Ok(Direction::Left),
            other => Err(format!("unknown direction {other:?} (use right|left)")),
        }
    }
}

/// Peak voltage phasor of a single-mode traveling wave,
/// `V(z,t) = |V₀| cos(ωt ∓ kz + φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phasor {
    magnitude: f64,
    phase: f64,
    omega: f64,
    direction: Direction,
}

impl Phasor {
    /// Peak magnitude in volt (≥ 0), phase in radian (wrapped to [0, 2π)),
    /// angular frequency in rad/s (> 0).
    pub fn new(magnitude: f64, phase: f64, omega: f64, direction: Direction) -> Result<Self> {
        check_non_negative("phasor magnitude", magnitude)?;
        check_finite("phasor phase", phase)?;
        check_positive("angular frequency", omega)?;
        Ok(Phasor {
            magnitude,
            phase: phase.rem_euclid(TAU),
            omega,
            direction,
        })
    }

    fn from_complex(v: Complex64, omega: f64, direction: Direction) -> Result<Self> {
        Self::new(v.norm(), v.arg(), omega, direction)
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    /// Phase in [0, 2π).
    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// The complex amplitude `|V₀| e^{iφ}`.
    pub fn complex_amplitude(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }
}

/// Semiclassical raising-operator amplitude of a traveling mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonAmplitude {
    value: Complex64,
    omega: f64,
    direction: Direction,
}

impl BosonAmplitude {
    pub fn new(value: Complex64, omega: f64, direction: Direction) -> Result<Self> {
        check_finite("boson amplitude (re)", value.re)?;
        check_finite("boson amplitude (im)", value.im)?;
        check_positive("angular frequency", omega)?;
        Ok(BosonAmplitude {
            value,
            omega,
            direction,
        })
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }
}

/// Line constants a conversion happens against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveContext {
    capacitance_per_m: f64,
    length: f64,
    z0: f64,
    vp: f64,
}

impl WaveContext {
    /// C′ in F/m, quantization length ℓ in m, Z₀ in ohm. The phase velocity
    /// is fixed by these: v_p = 1/(Z₀C′).
    pub fn new(capacitance_per_m: f64, length: f64, z0: f64) -> Result<Self> {
        check_positive("capacitance per length", capacitance_per_m)?;
        check_positive("quantization length", length)?;
        check_positive("characteristic impedance", z0)?;
        Ok(WaveContext {
            capacitance_per_m,
            length,
            z0,
            vp: 1.0 / (z0 * capacitance_per_m),
        })
    }

    pub fn from_tline(t: &TLineParams) -> Self {
        WaveContext {
            capacitance_per_m: t.capacitance_per_m(),
            length: t.length(),
            z0: char_impedance(t),
            vp: phase_velocity(t),
        }
    }

    pub fn capacitance_per_m(&self) -> f64 {
        self.capacitance_per_m
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn char_impedance(&self) -> f64 {
        self.z0
    }

    pub fn phase_velocity(&self) -> f64 {
        self.vp
    }

    fn boson_scale(&self, omega: f64) -> f64 {
        (self.capacitance_per_m * self.length / (2.0 * HBAR * omega)).sqrt()
    }
}

/// Map a voltage phasor to its boson amplitude:
/// `value = √(C′ℓ/2ħω) V₀ e^{iπ/2}`. Direction is preserved.
pub fn phasor_to_boson(p: &Phasor, ctx: &WaveContext) -> BosonAmplitude {
    let rot = Complex64::from_polar(1.0, FRAC_PI_2);
    BosonAmplitude {
        value: p.complex_amplitude() * ctx.boson_scale(p.omega) * rot,
        omega: p.omega,
        direction: p.direction,
    }
}

/// Inverse of [`phasor_to_boson`]: `V₀ = √(2ħω/C′ℓ) value e^{−iπ/2}`.
pub fn boson_to_phasor(b: &BosonAmplitude, ctx: &WaveContext) -> Phasor {
    let rot = Complex64::from_polar(1.0, -FRAC_PI_2);
    let v0 = b.value / ctx.boson_scale(b.omega) * rot;
    Phasor::from_complex(v0, b.omega, b.direction)
        .expect("finite boson amplitude maps to a valid phasor")
}

/// Pozar's power-normalized wave amplitude `a = V₀/√Z₀` in √watt.
///
/// Its boson form is `√(2ħω v_p/ℓ) b† e^{−iπ/2}`, which this equals after
/// substituting Z₀ = √(L′/C′) and v_p = 1/√(L′C′).
pub fn pozar_wave(p: &Phasor, ctx: &WaveContext) -> Complex64 {
    p.complex_amplitude() / ctx.z0.sqrt()
}

/// Semiclassical photon occupancy `N = C′ℓ|V₀|²/(2ħω) = |b†|²`.
pub fn photon_number(p: &Phasor, ctx: &WaveContext) -> f64 {
    let s = ctx.boson_scale(p.omega);
    s * s * p.magnitude * p.magnitude
}
