//! Rate models: anything that maps a time to a [`RateSample`].

use crate::error::{Error, Result};
use crate::map::RateSample;

/// A deterministic map `t ↦ RateSample`.
///
/// Implementations must be callable concurrently; grids are evaluated in parallel.
pub trait RateModel: Sync {
    fn sample(&self, t: f64) -> RateSample;

    /// Closed interval of times on which the model is defined.
    fn domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

impl<F> RateModel for F
where
    F: Fn(f64) -> RateSample + Sync,
{
    fn sample(&self, t: f64) -> RateSample {
        self(t)
    }
}

/// Time-independent rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant {
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub decoherence: f64,
    pub omega: f64,
}

impl RateModel for Constant {
    fn sample(&self, t: f64) -> RateSample {
        RateSample::new(t, self.gamma_plus, self.gamma_minus, self.decoherence, self.omega)
    }
}

/// Pauli dephasing with `γ_x = γ_y = 1`, `γ_z = −tanh t` (eternal non-Markovianity).
///
/// The Bloch equations `ẋ = −(γ_y + γ_z)x` etc. give `γ₊ = 2`, `γ₋ = 0`,
/// `Γ = 1 − tanh t`. There is no Hamiltonian term, so `ω = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct EternalNm;

pub fn eternal_nm(t: f64) -> RateSample {
    RateSample::new(t, 2.0, 0.0, 1.0 - t.tanh(), 0.0)
}

impl RateModel for EternalNm {
    fn sample(&self, t: f64) -> RateSample {
        eternal_nm(t)
    }
}

/// Qubit in a lossy cavity: `γ₊ = γ₋ = γ(t)`, `Γ = γ(t)/2`, `ω = S(t)/2`.
pub struct LossyCavity<G, S> {
    pub gamma: G,
    pub shift: S,
}

pub fn lossy_cavity(gamma: impl Fn(f64) -> f64, shift: impl Fn(f64) -> f64, t: f64) -> RateSample {
    let g = gamma(t);
    RateSample::new(t, g, g, 0.5 * g, 0.5 * shift(t))
}

impl<G, S> LossyCavity<G, S>
where
    G: Fn(f64) -> f64 + Sync,
    S: Fn(f64) -> f64 + Sync,
{
    pub fn new(gamma: G, shift: S) -> Self {
        Self { gamma, shift }
    }
}

impl LossyCavity<Box<dyn Fn(f64) -> f64 + Send + Sync>, Box<dyn Fn(f64) -> f64 + Send + Sync>> {
    pub fn constant(gamma: f64, shift: f64) -> Self {
        Self {
            gamma: Box::new(move |_| gamma),
            shift: Box::new(move |_| shift),
        }
    }
}

impl<G, S> RateModel for LossyCavity<G, S>
where
    G: Fn(f64) -> f64 + Sync,
    S: Fn(f64) -> f64 + Sync,
{
    fn sample(&self, t: f64) -> RateSample {
        lossy_cavity(&self.gamma, &self.shift, t)
    }
}

/// Piecewise-linear interpolation of externally computed rates.
#[derive(Debug, Clone)]
pub struct Tabulated {
    knots: Vec<RateSample>,
}

impl Tabulated {
    /// Knots must be finite and strictly increasing in `t`.
    pub fn new(knots: Vec<RateSample>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Table("no rate samples".into()));
        }
        if let Some(bad) = knots.iter().find(|k| !k.is_finite() || !k.t.is_finite()) {
            return Err(Error::Table(format!("non-finite sample at t = {}", bad.t)));
        }
        if let Some(w) = knots.windows(2).find(|w| !(w[1].t > w[0].t)) {
            return Err(Error::Table(format!(
                "times must be strictly increasing ({} then {})",
                w[0].t, w[1].t
            )));
        }
        Ok(Self { knots })
    }

    pub fn knots(&self) -> &[RateSample] {
        &self.knots
    }

    /// Interpolated sample at `t`; errors outside the tabulated range.
    pub fn at(&self, t: f64) -> Result<RateSample> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfRange { t, lo, hi });
        }
        // first knot with knot.t >= t
        let i = self.knots.partition_point(|k| k.t < t);
        let right = &self.knots[i];
        if right.t == t || i == 0 {
            return Ok(*right);
        }
        let left = &self.knots[i - 1];
        let w = (t - left.t) / (right.t - left.t);
        let lerp = |a: f64, b: f64| a + w * (b - a);
        Ok(RateSample::new(
            t,
            lerp(left.gamma_plus, right.gamma_plus),
            lerp(left.gamma_minus, right.gamma_minus),
            lerp(left.decoherence, right.decoherence),
            lerp(left.omega, right.omega),
        ))
    }
}

impl RateModel for Tabulated {
    /// Out-of-range times yield a NaN sample; callers check [`RateModel::domain`] first.
    fn sample(&self, t: f64) -> RateSample {
        self.at(t)
            .unwrap_or_else(|_| RateSample::new(t, f64::NAN, f64::NAN, f64::NAN, f64::NAN))
    }

    fn domain(&self) -> (f64, f64) {
        (self.knots[0].t, self.knots[self.knots.len() - 1].t)
    }
}
