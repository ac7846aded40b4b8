//! Transfer function, frequency response, and time-domain simulation of the
//! single-port model.
//!
//! For the coupled LC the transfer function is the first-order all-pass
//!
//! ```text
//! H(s) = (s − κ²/2 + iΔ)/(s + κ²/2 + iΔ),   Re{s} > −κ²/2
//! ```
//!
//! with `|H(iω)| = 1` for all real ω — the lossless port reflects all power
//! and only rearranges phase. Deterministic means evolve by the exact
//! piecewise-constant-input LTI propagator; stochastic trajectories use
//! Euler-Maruyama with complex Wiener increments at vacuum scaling.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{check_finite, check_non_negative, check_positive, Error, Result};
use crate::openqsys::StateSpaceModel;

// ─── Rational transfer function ─────────────────────────────────────────────

/// Rational function of `s`, stored as ascending complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

fn trim(mut poly: Vec<Complex64>) -> Vec<Complex64> {
    while poly.len() > 1 && poly.last() == Some(&Complex64::new(0.0, 0.0)) {
        poly.pop();
    }
    if poly.is_empty() {
        poly.push(Complex64::new(0.0, 0.0));
    }
    poly
}

fn poly_eval(poly: &[Complex64], s: Complex64) -> Complex64 {
    poly.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

fn poly_derivative(poly: &[Complex64]) -> Vec<Complex64> {
    if poly.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

fn linear_roots(poly: &[Complex64]) -> Result<Vec<Complex64>> {
    match poly.len() {
        0 | 1 => Ok(Vec::new()),
        2 => Ok(vec![-poly[0] / poly[1]]),
        n => Err(Error::UnsupportedDegree(n - 1)),
    }
}

impl TransferFunction {
    /// Build from ascending numerator and denominator coefficients. The
    /// rational function must be proper and the denominator non-zero.
    pub fn new(num: Vec<Complex64>, den: Vec<Complex64>) -> Result<Self> {
        let num = trim(num);
        let den = trim(den);
        if den.iter().all(|c| c.norm_sqr() == 0.0) {
            return Err(Error::ZeroDenominator);
        }
        if num.len() > den.len() {
            return Err(Error::ImproperRational {
                num: num.len() - 1,
                den: den.len() - 1,
            });
        }
        Ok(TransferFunction { num, den })
    }

    /// Ascending numerator coefficients.
    pub fn num(&self) -> &[Complex64] {
        &self.num
    }

    /// Ascending denominator coefficients.
    pub fn den(&self) -> &[Complex64] {
        &self.den
    }

    /// Evaluate `num(s)/den(s)`.
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let d = poly_eval(&self.den, s);
        if d.norm_sqr() == 0.0 {
            return Err(Error::PoleEvaluation { s });
        }
        Ok(poly_eval(&self.num, s) / d)
    }

    /// Poles and zeros. Constant numerator/denominator contribute none.
    pub fn poles_zeros(&self) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let poles = linear_roots(&self.den)?;
        let zeros = linear_roots(&self.num)?;
        Ok((poles, zeros))
    }

    /// Abscissa of convergence: the region of validity is
    /// `Re(s) > max Re(poles)`; `None` when there are no poles.
    pub fn convergence_abscissa(&self) -> Result<Option<f64>> {
        let (poles, _) = self.poles_zeros()?;
        Ok(poles
            .iter()
            .map(|p| p.re)
            .fold(None, |acc, re| Some(acc.map_or(re, |a: f64| a.max(re)))))
    }

    /// True when every pole lies in the open left half-plane.
    pub fn is_stable(&self) -> Result<bool> {
        let (poles, _) = self.poles_zeros()?;
        Ok(poles.iter().all(|p| p.re < 0.0))
    }
}

/// Closed-form transfer function `H(s) = C(sI − A)^{−1}B + D` of a
/// single-port model. A decoupled model (CB = 0) reduces to the constant D.
pub fn transfer_function(ssm: &StateSpaceModel) -> Result<TransferFunction> {
    let (a, b, c, d) = ssm.scalars()?;
    let one = Complex64::new(1.0, 0.0);
    let cb = c * b;
    if cb.norm_sqr() == 0.0 {
        return TransferFunction::new(vec![d], vec![one]);
    }
    TransferFunction::new(vec![cb - d * a, d], vec![-a, one])
}

/// Evaluate a transfer function at a complex frequency.
pub fn eval_tf(tf: &TransferFunction, s: Complex64) -> Result<Complex64> {
    tf.eval(s)
}

/// Poles and zeros of a transfer function.
pub fn poles_zeros(tf: &TransferFunction) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    tf.poles_zeros()
}

/// One row of a frequency sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreqPoint {
    /// Rotating-frame offset frequency ω′ in rad/s.
    pub omega: f64,
    /// H(iω′).
    pub response: Complex64,
    pub magnitude: f64,
    /// Phase in radians, unwrapped along the grid by nearest-branch
    /// continuation.
    pub phase: f64,
    /// Group delay −dφ/dω in seconds.
    pub group_delay: f64,
}

fn analytic_group_delay(tf: &TransferFunction, omega: f64) -> Option<f64> {
    let s = Complex64::new(0.0, omega);
    let n = poly_eval(&tf.num, s);
    let d = poly_eval(&tf.den, s);
    if n.norm_sqr() == 0.0 || d.norm_sqr() == 0.0 {
        return None;
    }
    let np = poly_eval(&poly_derivative(&tf.num), s);
    let dp = poly_eval(&poly_derivative(&tf.den), s);
    Some((dp / d - np / n).re)
}

fn numeric_group_delay(tf: &TransferFunction, omega: f64, span: f64) -> Result<f64> {
    let h = if span > 0.0 {
        span / 1e4
    } else {
        omega.abs().max(1.0) * 1e-8
    };
    let hp = tf.eval(Complex64::new(0.0, omega + h))?;
    let hm = tf.eval(Complex64::new(0.0, omega - h))?;
    // principal angle of the ratio sidesteps branch cuts for small h
    Ok(-(hp / hm).arg() / (2.0 * h))
}

/// Evaluate H on `s = iω′` over a grid of rotating-frame offsets, producing
/// magnitude, unwrapped phase, and group delay per point.
pub fn freq_response(tf: &TransferFunction, grid: &[f64]) -> Result<Vec<FreqPoint>> {
    let span = match (grid.first(), grid.last()) {
        (Some(a), Some(b)) => (b - a).abs(),
        _ => 0.0,
    };
    let mut points = Vec::with_capacity(grid.len());
    let mut prev_phase: Option<f64> = None;
    for &omega in grid {
        let response = tf.eval(Complex64::new(0.0, omega))?;
        let raw = response.arg();
        let phase = match prev_phase {
            None => raw,
            Some(prev) => {
                let turns = ((prev - raw) / std::f64::consts::TAU).round();
                raw + turns * std::f64::consts::TAU
            }
        };
        prev_phase = Some(phase);
        let group_delay = match analytic_group_delay(tf, omega) {
            Some(gd) => gd,
            None => numeric_group_delay(tf, omega, span)?,
        };
        points.push(FreqPoint {
            omega,
            response,
            magnitude: response.norm(),
            phase,
            group_delay,
        });
    }
    Ok(points)
}

// ─── Time grid and signals ──────────────────────────────────────────────────

/// Uniform time grid `t_n = t0 + n·dt`, n = 0..len.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    dt: f64,
    len: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, len: usize) -> Result<Self> {
        check_finite("grid start", t0)?;
        check_positive("grid step", dt)?;
        if len == 0 {
            return Err(Error::InvalidGrid);
        }
        Ok(TimeGrid { t0, dt, len })
    }

    /// Grid from 0 to at least `t_end` in steps of `dt`.
    pub fn from_duration(dt: f64, t_end: f64) -> Result<Self> {
        check_positive("grid step", dt)?;
        check_positive("end time", t_end)?;
        let len = (t_end / dt).floor() as usize + 1;
        TimeGrid::new(0.0, dt, len)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |i| self.t0 + i as f64 * self.dt)
    }
}

/// Uniformly gridded complex signal.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    t0: f64,
    dt: f64,
    values: Vec<Complex64>,
}

impl TimeSeries {
    pub fn new(grid: &TimeGrid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        TimeSeries {
            t0: grid.t0(),
            dt: grid.dt(),
            values,
        }
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |i| self.t0 + i as f64 * self.dt)
    }
}

/// Mean shape of the input field b_in(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignalKind {
    /// Constant coherent drive β.
    ConstantCoherent,
    /// β e^{iω_mod t}: a drive offset by ω_mod in the rotating frame.
    Sinusoid { omega_mod: f64 },
    /// β between t_on (inclusive) and t_off (exclusive), zero outside.
    Pulse { t_on: f64, t_off: f64 },
    /// Zero mean; fluctuations only.
    Vacuum,
}

/// Input field: a mean part plus (for the stochastic integrator) vacuum
/// fluctuations scaled by `noise_amplitude` (1 = physical vacuum, 0 = none).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputSignal {
    kind: SignalKind,
    beta: Complex64,
    noise_amplitude: f64,
}

impl InputSignal {
    pub fn constant(beta: Complex64) -> Self {
        InputSignal {
            kind: SignalKind::ConstantCoherent,
            beta,
            noise_amplitude: 1.0,
        }
    }

    pub fn sinusoid(beta: Complex64, omega_mod: f64) -> Result<Self> {
        check_finite("modulation frequency", omega_mod)?;
        Ok(InputSignal {
            kind: SignalKind::Sinusoid { omega_mod },
            beta,
            noise_amplitude: 1.0,
        })
    }

    pub fn pulse(beta: Complex64, t_on: f64, t_off: f64) -> Result<Self> {
        check_finite("pulse start", t_on)?;
        check_finite("pulse end", t_off)?;
        Ok(InputSignal {
            kind: SignalKind::Pulse { t_on, t_off },
            beta,
            noise_amplitude: 1.0,
        })
    }

    pub fn vacuum() -> Self {
        InputSignal {
            kind: SignalKind::Vacuum,
            beta: Complex64::new(0.0, 0.0),
            noise_amplitude: 1.0,
        }
    }

    /// Scale the vacuum fluctuations (0 disables noise entirely).
    pub fn with_noise_amplitude(mut self, amplitude: f64) -> Result<Self> {
        check_non_negative("noise amplitude", amplitude)?;
        self.noise_amplitude = amplitude;
        Ok(self)
    }

    pub fn kind(&self) -> SignalKind {
        self.kind
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn noise_amplitude(&self) -> f64 {
        self.noise_amplitude
    }

    /// Mean value ⟨b_in(t)⟩.
    pub fn mean_value(&self, t: f64) -> Complex64 {
        match self.kind {
            SignalKind::ConstantCoherent => self.beta,
            SignalKind::Sinusoid { omega_mod } => {
                self.beta * Complex64::from_polar(1.0, omega_mod * t)
            }
            SignalKind::Pulse { t_on, t_off } => {
                if t >= t_on && t < t_off {
                    self.beta
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            SignalKind::Vacuum => Complex64::new(0.0, 0.0),
        }
    }
}

// ─── Deterministic simulation ───────────────────────────────────────────────

/// (e^z − 1)/z, series-expanded near zero so the A → 0 limit is exact.
fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-2 {
        // 1 + z/2 + z²/6 + ... + z⁶/5040; truncation below f64 rounding
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..=7 {
            term = term * z / k as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Evolve the mean state by the exact LTI propagator with the input held
/// constant over each step:
///
/// ```text
/// a_{n+1} = e^{A dt} a_n + dt φ1(A dt) B β(t_n)
/// ```
///
/// and return the state series ⟨a(t)⟩ together with the output series
/// `b_out = C a + D b_in`. Exact for constant inputs; O(dt) sampling bias
/// for time-varying ones.
pub fn simulate_mean(
    ssm: &StateSpaceModel,
    u: &InputSignal,
    grid: &TimeGrid,
    a0: Complex64,
) -> Result<(TimeSeries, TimeSeries)> {
    let (a, b, c, d) = ssm.scalars()?;
    let dt = grid.dt();
    let propagator = (a * dt).exp();
    let drive = phi1(a * dt) * dt * b;

    let mut states = Vec::with_capacity(grid.len());
    let mut outputs = Vec::with_capacity(grid.len());
    let mut x = a0;
    for t in grid.times() {
        let u_t = u.mean_value(t);
        states.push(x);
        outputs.push(c * x + d * u_t);
        x = propagator * x + drive * u_t;
    }
    Ok((
        TimeSeries::new(grid, states),
        TimeSeries::new(grid, outputs),
    ))
}

/// Classical RK4 cross-check of [`simulate_mean`], sampling the input at the
/// substep times. Requires `dt·|A| < 0.1`.
pub fn simulate_mean_rk4(
    ssm: &StateSpaceModel,
    u: &InputSignal,
    grid: &TimeGrid,
    a0: Complex64,
) -> Result<(TimeSeries, TimeSeries)> {
    let (a, b, c, d) = ssm.scalars()?;
    let dt = grid.dt();
    let stiffness = dt * a.norm();
    if stiffness >= 0.1 {
        return Err(Error::UnstableStep(stiffness));
    }

    let f = |t: f64, x: Complex64| a * x + b * u.mean_value(t);
    let mut states = Vec::with_capacity(grid.len());
    let mut outputs = Vec::with_capacity(grid.len());
    let mut x = a0;
    for t in grid.times() {
        states.push(x);
        outputs.push(c * x + d * u.mean_value(t));
        let k1 = f(t, x);
        let k2 = f(t + dt / 2.0, x + k1 * (dt / 2.0));
        let k3 = f(t + dt / 2.0, x + k2 * (dt / 2.0));
        let k4 = f(t + dt, x + k3 * dt);
        x += (k1 + (k2 + k3) * 2.0 + k4) * (dt / 6.0);
    }
    Ok((
        TimeSeries::new(grid, states),
        TimeSeries::new(grid, outputs),
    ))
}

/// Closed-form fixed point of the mean dynamics:
/// `a_ss = −A^{−1}Bβ`, `b_out,ss = C a_ss + D β`.
///
/// Fails when A = 0 (κ = 0 and Δ = 0): the mode is undamped and never
/// settles.
pub fn steady_state(ssm: &StateSpaceModel, beta: Complex64) -> Result<(Complex64, Complex64)> {
    let (a, b, c, d) = ssm.scalars()?;
    if a.norm_sqr() == 0.0 {
        return Err(Error::NoSteadyState);
    }
    let a_ss = -b * beta / a;
    Ok((a_ss, c * a_ss + d * beta))
}

// ─── Stochastic simulation ──────────────────────────────────────────────────

/// A seeded ensemble of output trajectories on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEnsemble {
    trajectories: Vec<TimeSeries>,
    seed: u64,
    dw_variance: f64,
}

impl TrajectoryEnsemble {
    pub fn trajectories(&self) -> &[TimeSeries] {
        &self.trajectories
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Variance of each complex Wiener increment (= the grid dt).
    pub fn dw_variance(&self) -> f64 {
        self.dw_variance
    }

    /// Pointwise ensemble mean.
    pub fn mean(&self) -> TimeSeries {
        let first = &self.trajectories[0];
        let n = self.trajectories.len() as f64;
        let mut acc = vec![Complex64::new(0.0, 0.0); first.len()];
        for traj in &self.trajectories {
            for (s, v) in acc.iter_mut().zip(traj.values()) {
                *s += v;
            }
        }
        TimeSeries {
            t0: first.t0(),
            dt: first.dt(),
            values: acc.into_iter().map(|s| s / n).collect(),
        }
    }

    /// Pointwise ensemble variance `E|x − ⟨x⟩|²`.
    pub fn variance(&self) -> Vec<f64> {
        let mean = self.mean();
        let n = self.trajectories.len() as f64;
        let mut acc = vec![0.0; mean.len()];
        for traj in &self.trajectories {
            for ((s, v), m) in acc.iter_mut().zip(traj.values()).zip(mean.values()) {
                *s += (v - m).norm_sqr();
            }
        }
        acc.into_iter().map(|s| s / n).collect()
    }

    /// Pointwise standard error of the ensemble mean.
    pub fn std_error(&self) -> Vec<f64> {
        let n = self.trajectories.len() as f64;
        self.variance()
            .into_iter()
            .map(|v| (v / n).sqrt())
            .collect()
    }
}

/// Euler-Maruyama integration of `da = (A a + B β)dt + B dW` with complex
/// Wiener increments `dW = √(dt/2)(ξ₁ + iξ₂)` (variance dt/2 per quadrature,
/// the symmetrized vacuum level), returning the ensemble of output
/// trajectories `b_out = C a + D(β + dW/dt)`.
///
/// Each trajectory draws from an independent ChaCha stream keyed by
/// `(seed, trajectory index)`, so results are reproducible and independent
/// of scheduling order.
pub fn simulate_stochastic(
    ssm: &StateSpaceModel,
    u: &InputSignal,
    grid: &TimeGrid,
    n_traj: usize,
    seed: u64,
    a0: Complex64,
) -> Result<TrajectoryEnsemble> {
    if n_traj == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let (a, b, c, d) = ssm.scalars()?;
    let dt = grid.dt();
    let noise_scale = u.noise_amplitude() * (dt / 2.0).sqrt();

    let trajectories: Vec<TimeSeries> = (0..n_traj as u64)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(index);
            let normal = StandardNormal;

            let mut outputs = Vec::with_capacity(grid.len());
            let mut x = a0;
            for t in grid.times() {
                let mean_in = u.mean_value(t);
                let dw = if noise_scale > 0.0 {
                    let xi1: f64 = normal.sample(&mut rng);
                    let xi2: f64 = normal.sample(&mut rng);
                    Complex64::new(xi1, xi2) * noise_scale
                } else {
                    Complex64::new(0.0, 0.0)
                };
                outputs.push(c * x + d * (mean_in + dw / dt));
                x += (a * x + b * mean_in) * dt + b * dw;
            }
            TimeSeries::new(grid, outputs)
        })
        .collect();

    Ok(TrajectoryEnsemble {
        trajectories,
        seed,
        dw_variance: dt,
    })
}
