//! Symbolic algebra over canonical mode operators.
//!
//! Every operator handled by this crate is a linear combination of canonical
//! flux/charge pairs plus a scalar. For such expressions the commutator of any
//! two operators is a c-number, fixed entirely by `[Φ_m, Q_m'] = iħ δ_mm'`, so
//! no Hilbert-space truncation is ever needed: commutators are evaluated
//! exactly (up to floating-point rounding in the coefficients).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::HBAR;

/// Which member of a canonical conjugate pair an operator is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quadrature {
    /// Node flux Φ (the position-like coordinate).
    Flux,
    /// Node charge Q (the momentum conjugate to flux).
    Charge,
}

/// Names one canonical pair (one mode).
///
/// Distinct labels are independent pairs: all cross commutators vanish.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel(Repr);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Repr {
    /// The lumped LC oscillator pair.
    Lc,
    /// A transmission-line mode keyed by the exact wavenumber bits, so two
    /// labels are the same pair iff they were built from the same `f64`.
    Line(u64),
    Named(String),
}

impl ModeLabel {
    pub fn lc() -> Self {
        ModeLabel(Repr::Lc)
    }

    /// Label for the transmission-line mode with (signed) wavenumber `k`.
    pub fn line(k: f64) -> Self {
        ModeLabel(Repr::Line(k.to_bits()))
    }

    pub fn named(name: impl Into<String>) -> Self {
        ModeLabel(Repr::Named(name.into()))
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Lc => write!(f, "lc"),
            Repr::Line(bits) => write!(f, "k={}", f64::from_bits(*bits)),
            Repr::Named(name) => write!(f, "{name}"),
        }
    }
}

/// One canonical operator: the flux or charge member of a named pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalOp {
    pub mode: ModeLabel,
    pub quadrature: Quadrature,
}

impl CanonicalOp {
    pub fn flux(mode: ModeLabel) -> Self {
        CanonicalOp {
            mode,
            quadrature: Quadrature::Flux,
        }
    }

    pub fn charge(mode: ModeLabel) -> Self {
        CanonicalOp {
            mode,
            quadrature: Quadrature::Charge,
        }
    }

    fn conjugate_partner(&self) -> CanonicalOp {
        let quadrature = match self.quadrature {
            Quadrature::Flux => Quadrature::Charge,
            Quadrature::Charge => Quadrature::Flux,
        };
        CanonicalOp {
            mode: self.mode.clone(),
            quadrature,
        }
    }
}

impl fmt::Display for CanonicalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.quadrature {
            Quadrature::Flux => write!(f, "Phi[{}]", self.mode),
            Quadrature::Charge => write!(f, "Q[{}]", self.mode),
        }
    }
}

/// A linear combination of canonical operators plus a complex scalar.
///
/// The value of ħ is part of the basis: expressions built over different ħ
/// belong to different basis registries and cannot be combined. Pure scalars
/// are basis-agnostic and combine with anything.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOpExpr {
    hbar: Option<f64>,
    coeffs: BTreeMap<CanonicalOp, Complex64>,
    scalar: Complex64,
}

impl LinearOpExpr {
    /// The zero operator.
    pub fn zero() -> Self {
        LinearOpExpr {
            hbar: None,
            coeffs: BTreeMap::new(),
            scalar: Complex64::new(0.0, 0.0),
        }
    }

    /// A pure scalar (c-number) expression.
    pub fn constant(value: Complex64) -> Self {
        LinearOpExpr {
            hbar: None,
            coeffs: BTreeMap::new(),
            scalar: value,
        }
    }

    /// The flux operator Φ of `mode`, over the SI basis (ħ = [`HBAR`]).
    pub fn flux(mode: ModeLabel) -> Self {
        Self::flux_with_hbar(mode, HBAR)
    }

    /// The charge operator Q of `mode`, over the SI basis (ħ = [`HBAR`]).
    pub fn charge(mode: ModeLabel) -> Self {
        Self::charge_with_hbar(mode, HBAR)
    }

    pub fn flux_with_hbar(mode: ModeLabel, hbar: f64) -> Self {
        Self::canonical(CanonicalOp::flux(mode), hbar)
    }

    pub fn charge_with_hbar(mode: ModeLabel, hbar: f64) -> Self {
        Self::canonical(CanonicalOp::charge(mode), hbar)
    }

    fn canonical(op: CanonicalOp, hbar: f64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(op, Complex64::new(1.0, 0.0));
        LinearOpExpr {
            hbar: Some(hbar),
            coeffs,
            scalar: Complex64::new(0.0, 0.0),
        }
    }

    /// Coefficient of a canonical operator (zero when absent).
    pub fn coeff(&self, op: &CanonicalOp) -> Complex64 {
        self.coeffs
            .get(op)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// The c-number part of the expression.
    pub fn scalar_part(&self) -> Complex64 {
        self.scalar
    }

    /// The value of ħ this expression is quantized against, if it carries
    /// any canonical content.
    pub fn hbar(&self) -> Option<f64> {
        self.hbar
    }

    /// Iterate over the non-zero canonical terms.
    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalOp, Complex64)> {
        self.coeffs.iter().map(|(op, &c)| (op, c))
    }

    /// True when the expression has no canonical content.
    pub fn is_scalar(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Hermitian conjugate. Valid because the canonical Φ and Q are
    /// Hermitian, so conjugation acts on coefficients alone.
    pub fn dagger(&self) -> LinearOpExpr {
        LinearOpExpr {
            hbar: self.hbar,
            coeffs: self
                .coeffs
                .iter()
                .map(|(op, c)| (op.clone(), c.conj()))
                .collect(),
            scalar: self.scalar.conj(),
        }
    }

    /// Drop coefficients that cancelled to exactly zero.
    fn prune(mut self) -> Self {
        self.coeffs.retain(|_, c| c.re != 0.0 || c.im != 0.0);
        if self.coeffs.is_empty() {
            self.hbar = None;
        }
        self
    }

    fn merge_hbar(a: Option<f64>, b: Option<f64>) -> Option<f64> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => {
                assert!(
                    x.to_bits() == y.to_bits(),
                    "cannot combine operator expressions over mismatched canonical bases \
                     (hbar = {x} vs hbar = {y})"
                );
                Some(x)
            }
        }
    }
}

impl Add for LinearOpExpr {
    type Output = LinearOpExpr;

    fn add(self, rhs: LinearOpExpr) -> LinearOpExpr {
        let hbar = Self::merge_hbar(self.hbar, rhs.hbar);
        let mut coeffs = self.coeffs;
        for (op, c) in rhs.coeffs {
            *coeffs.entry(op).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        LinearOpExpr {
            hbar,
            coeffs,
            scalar: self.scalar + rhs.scalar,
        }
        .prune()
    }
}

impl Sub for LinearOpExpr {
    type Output = LinearOpExpr;

    fn sub(self, rhs: LinearOpExpr) -> LinearOpExpr {
        self + (-rhs)
    }
}

impl Neg for LinearOpExpr {
    type Output = LinearOpExpr;

    fn neg(self) -> LinearOpExpr {
        LinearOpExpr {
            hbar: self.hbar,
            coeffs: self.coeffs.into_iter().map(|(op, c)| (op, -c)).collect(),
            scalar: -self.scalar,
        }
    }
}

impl Mul<Complex64> for LinearOpExpr {
    type Output = LinearOpExpr;

    fn mul(self, z: Complex64) -> LinearOpExpr {
        LinearOpExpr {
            hbar: self.hbar,
            coeffs: self.coeffs.into_iter().map(|(op, c)| (op, c * z)).collect(),
            scalar: self.scalar * z,
        }
        .prune()
    }
}

impl Mul<f64> for LinearOpExpr {
    type Output = LinearOpExpr;

    fn mul(self, x: f64) -> LinearOpExpr {
        self * Complex64::new(x, 0.0)
    }
}

impl Mul<LinearOpExpr> for Complex64 {
    type Output = LinearOpExpr;

    fn mul(self, expr: LinearOpExpr) -> LinearOpExpr {
        expr * self
    }
}

impl Mul<LinearOpExpr> for f64 {
    type Output = LinearOpExpr;

    fn mul(self, expr: LinearOpExpr) -> LinearOpExpr {
        expr * self
    }
}

impl Add<Complex64> for LinearOpExpr {
    type Output = LinearOpExpr;

    fn add(mut self, z: Complex64) -> LinearOpExpr {
        self.scalar += z;
        self
    }
}

impl Sub<Complex64> for LinearOpExpr {
    type Output = LinearOpExpr;

    fn sub(mut self, z: Complex64) -> LinearOpExpr {
        self.scalar -= z;
        self
    }
}

/// Commutator `[x, y]` of two linear operator expressions.
///
/// For linear combinations of canonical pairs the result is always a pure
/// scalar: `[x, y] = iħ Σ_m (x_Φm y_Qm − x_Qm y_Φm)`. It is bilinear and
/// antisymmetric, and scalars commute with everything.
///
/// Fails when the two expressions carry canonical content quantized against
/// different values of ħ.
pub fn commutator(x: &LinearOpExpr, y: &LinearOpExpr) -> Result<Complex64> {
    let hbar = match (x.hbar, y.hbar) {
        (Some(a), Some(b)) if a.to_bits() != b.to_bits() => {
            return Err(Error::BasisMismatch { left: a, right: b })
        }
        (Some(a), _) => a,
        (_, Some(b)) => b,
        (None, None) => return Ok(Complex64::new(0.0, 0.0)),
    };

    let mut sum = Complex64::new(0.0, 0.0);
    for (op, &cx) in &x.coeffs {
        let cy = y.coeff(&op.conjugate_partner());
        match op.quadrature {
            Quadrature::Flux => sum += cx * cy,
            Quadrature::Charge => sum -= cx * cy,
        }
    }
    Ok(Complex64::new(0.0, hbar) * sum)
}
