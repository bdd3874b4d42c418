//! The dynamical map `Φ(t)` built from time-integrated relaxation rates.
//!
//! Under the master equation the Bloch coordinates evolve as
//!
//! ```text
//! ẋ = −Γ x + ω y,   ẏ = −ω x − Γ y,   ż = −γ₊ z + γ₋
//! ```
//!
//! so `Φ(t)` depends only on the integrals `γ̃₊, γ̃₋, Γ̃, ω̃` and on `s(t)`,
//! the solution of `ṡ = −γ₊ s + γ₋` with `s(0) = 0`.

use num_complex::Complex64;

use crate::bloch::HermitianOp2;
use crate::error::{Error, Result};
use crate::rates::RateModel;

/// Instantaneous master-equation coefficients at time `t`.
///
/// No sign constraints: rates go negative in non-Markovian models, and may be
/// non-finite where a model diverges.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateSample {
    pub t: f64,
    /// `γ₊ = γ₁₂ + γ₂₁`.
    pub gamma_plus: f64,
    /// `γ₋ = γ₁₂ − γ₂₁`.
    pub gamma_minus: f64,
    /// Decoherence rate `Γ`.
    pub decoherence: f64,
    /// Frequency `ω` of the `−(ω/2)σ_z` Hamiltonian.
    pub omega: f64,
}

impl RateSample {
    pub const fn new(t: f64, gamma_plus: f64, gamma_minus: f64, decoherence: f64, omega: f64) -> Self {
        Self {
            t,
            gamma_plus,
            gamma_minus,
            decoherence,
            omega,
        }
    }

    /// Builds a sample from the Lindblad weights of the `σ₊`, `σ₋` and `σ_z/√2` channels.
    pub fn from_channel_rates(t: f64, gamma_1: f64, gamma_2: f64, gamma_3: f64, omega: f64) -> Self {
        let gamma_plus = gamma_1 + gamma_2;
        Self::new(t, gamma_plus, gamma_1 - gamma_2, gamma_3 + 0.5 * gamma_plus, omega)
    }

    /// Lindblad weights `(γ₁, γ₂, γ₃) = (γ₁₂, γ₂₁, Γ − γ₊/2)`.
    pub fn channel_rates(&self) -> (f64, f64, f64) {
        (
            0.5 * (self.gamma_plus + self.gamma_minus),
            0.5 * (self.gamma_plus - self.gamma_minus),
            self.decoherence - 0.5 * self.gamma_plus,
        )
    }

    pub fn is_finite(&self) -> bool {
        self.gamma_plus.is_finite()
            && self.gamma_minus.is_finite()
            && self.decoherence.is_finite()
            && self.omega.is_finite()
    }

    /// `z_fp = γ₋/γ₊`; `None` when `γ₊ = 0` and the fixed point is not unique.
    pub fn fixed_point(&self) -> Option<f64> {
        instantaneous_fixed_point(self)
    }
}

/// Accumulated integrals that fully determine `Φ(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegratedRates {
    pub t: f64,
    /// `γ̃₊(t) = ∫₀ᵗ γ₊`.
    pub gamma_plus: f64,
    /// `γ̃₋(t) = ∫₀ᵗ γ₋`.
    pub gamma_minus: f64,
    /// `Γ̃(t) = ∫₀ᵗ Γ`.
    pub decoherence: f64,
    /// `ω̃(t) = ∫₀ᵗ ω`.
    pub omega: f64,
    pub s: f64,
}

impl IntegratedRates {
    /// The identity map at `t = 0`.
    pub const fn identity() -> Self {
        Self {
            t: 0.0,
            gamma_plus: 0.0,
            gamma_minus: 0.0,
            decoherence: 0.0,
            omega: 0.0,
            s: 0.0,
        }
    }

    fn as_array(&self) -> [f64; 5] {
        [self.gamma_plus, self.gamma_minus, self.decoherence, self.omega, self.s]
    }

    fn from_array(t: f64, v: [f64; 5]) -> Self {
        Self {
            t,
            gamma_plus: v[0],
            gamma_minus: v[1],
            decoherence: v[2],
            omega: v[3],
            s: v[4],
        }
    }
}

fn derivative(rs: &RateSample, s: f64) -> [f64; 5] {
    [
        rs.gamma_plus,
        rs.gamma_minus,
        rs.decoherence,
        rs.omega,
        -rs.gamma_plus * s + rs.gamma_minus,
    ]
}

fn checked_sample<M: RateModel + ?Sized>(model: &M, t: f64) -> Result<RateSample> {
    let rs = model.sample(t);
    if rs.is_finite() {
        Ok(rs)
    } else {
        Err(Error::NonFiniteRate { t })
    }
}

fn rk4_step<M: RateModel + ?Sized>(model: &M, t: f64, h: f64, y: [f64; 5]) -> Result<[f64; 5]> {
    let r0 = checked_sample(model, t)?;
    let rm = checked_sample(model, t + 0.5 * h)?;
    let r1 = checked_sample(model, t + h)?;
    let k1 = derivative(&r0, y[4]);
    let k2 = derivative(&rm, y[4] + 0.5 * h * k1[4]);
    let k3 = derivative(&rm, y[4] + 0.5 * h * k2[4]);
    let k4 = derivative(&r1, y[4] + h * k3[4]);
    let mut out = y;
    for i in 0..5 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

fn validate_step(from: f64, to: f64, step: f64) -> Result<()> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::param("step", format!("must be positive and finite, got {step}")));
    }
    if !(to >= from && to.is_finite() && from >= 0.0) {
        return Err(Error::param("t", format!("need 0 ≤ {from} ≤ {to}")));
    }
    Ok(())
}

/// Advances `start` to time `to` with classic RK4 on a uniform mesh no coarser than `step`.
pub fn integrate_from<M: RateModel + ?Sized>(
    model: &M,
    start: IntegratedRates,
    to: f64,
    step: f64,
) -> Result<IntegratedRates> {
    validate_step(start.t, to, step)?;
    let span = to - start.t;
    if span == 0.0 {
        return Ok(start);
    }
    let n = (span / step).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut y = start.as_array();
    for k in 0..n {
        y = rk4_step(model, start.t + k as f64 * h, h, y)?;
    }
    Ok(IntegratedRates::from_array(to, y))
}

/// Integrates the rates on `[0, t]`, co-integrating `ṡ = −γ₊ s + γ₋`.
///
/// A non-finite rate anywhere on the mesh aborts with [`Error::NonFiniteRate`]
/// carrying the offending time.
pub fn integrate_rates<M: RateModel + ?Sized>(model: &M, t: f64, step: f64) -> Result<IntegratedRates> {
    integrate_from(model, IntegratedRates::identity(), t, step)
}

/// Like [`integrate_rates`], also returning the largest component change when
/// the step is halved.
pub fn integrate_rates_with_estimate<M: RateModel + ?Sized>(
    model: &M,
    t: f64,
    step: f64,
) -> Result<(IntegratedRates, f64)> {
    let coarse = integrate_rates(model, t, step)?;
    let fine = integrate_rates(model, t, 0.5 * step)?;
    let err = coarse
        .as_array()
        .iter()
        .zip(fine.as_array())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok((fine, err))
}

/// Integrated rates at every point of an ascending grid, integrating incrementally.
pub fn integrate_on_grid<M: RateModel + ?Sized>(
    model: &M,
    grid: &[f64],
    step: f64,
) -> Result<Vec<IntegratedRates>> {
    let mut out = Vec::with_capacity(grid.len());
    let mut cur = IntegratedRates::identity();
    for &t in grid {
        cur = integrate_from(model, cur, t, step)?;
        out.push(cur);
    }
    Ok(out)
}

/// Applies `Φ(t)` to a Hermitian operator.
///
/// `x + i y` is contracted by `e^{−Γ̃}` and rotated by `−ω̃`; `z ↦ s·trace + e^{−γ̃₊} z`.
pub fn apply_map(ir: &IntegratedRates, q: &HermitianOp2) -> HermitianOp2 {
    let xy = Complex64::new(q.x, q.y) * Complex64::new(-ir.decoherence, -ir.omega).exp();
    HermitianOp2 {
        trace: q.trace,
        x: xy.re,
        y: xy.im,
        z: ir.s * q.trace + (-ir.gamma_plus).exp() * q.z,
    }
}

/// `Φ(t)` as a 4×4 matrix acting on `(ρ₁₁, ρ₁₂, ρ₂₁, ρ₂₂)ᵀ`.
pub fn map_matrix(ir: &IntegratedRates) -> [[Complex64; 4]; 4] {
    let e = (-ir.gamma_plus).exp();
    let s = ir.s;
    let zero = Complex64::new(0.0, 0.0);
    let re = |v: f64| Complex64::new(0.5 * v, 0.0);
    [
        [re(1.0 + s + e), zero, zero, re(1.0 + s - e)],
        [zero, Complex64::new(-ir.decoherence, ir.omega).exp(), zero, zero],
        [zero, zero, Complex64::new(-ir.decoherence, -ir.omega).exp(), zero],
        [re(1.0 - s - e), zero, zero, re(1.0 - s + e)],
    ]
}

/// Vectorizes `q` as `(q₁₁, q₁₂, q₂₁, q₂₂)`.
pub fn vectorize(q: &HermitianOp2) -> [Complex64; 4] {
    let m = q.to_matrix();
    [m[0][0], m[0][1], m[1][0], m[1][1]]
}

pub fn apply_matrix(m: &[[Complex64; 4]; 4], v: &[Complex64; 4]) -> [Complex64; 4] {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

/// Bloch-equation right-hand side `(ẋ, ẏ, ż)` for an operator of the given trace.
pub fn bloch_rhs(rs: &RateSample, q: &HermitianOp2) -> [f64; 3] {
    [
        -rs.decoherence * q.x + rs.omega * q.y,
        -rs.omega * q.x - rs.decoherence * q.y,
        -rs.gamma_plus * q.z + rs.gamma_minus * q.trace,
    ]
}

/// `z_fp = γ₋/γ₊`, or `None` when `γ₊ = 0`.
pub fn instantaneous_fixed_point(rs: &RateSample) -> Option<f64> {
    if rs.gamma_plus == 0.0 {
        None
    } else {
        Some(rs.gamma_minus / rs.gamma_plus)
    }
}

/// `z(t) = z_fp − (z_fp − z₀) e^{−γ̃₊}`, valid when `γ₋/γ₊` is constant on `[0, t]`.
pub fn z_constant_ratio(z0: f64, z_fp: f64, gamma_plus_integral: f64) -> f64 {
    z0 + (z_fp - z0) * -(-gamma_plus_integral).exp_m1()
}
