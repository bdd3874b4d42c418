//! CP-divisibility, P-divisibility and the BLP rate condition.
//!
//! P-divisibility at a given time can be decided four ways, which must agree:
//!
//! 1. trace-norm contraction of `Φ(t)q` for every Hermitian `q`
//!    ([`trace_norm_derivative_margin`], a pointwise test usable as a sampled oracle);
//! 2. the Bloch radius of pure states does not grow ([`radius_rate_max`] ≤ 0);
//! 3. the Kossakowski condition over all orthonormal bases ([`kossakowski_min`] ≥ 0);
//! 4. the relaxation-rate inequalities ([`p_margin_rates`] ≥ 0).
//!
//! All conditions are closed (non-strict), so a margin of exactly zero passes.

use rayon::prelude::*;

use crate::bloch::HermitianOp2;
use crate::error::{Error, Result};
use crate::map::{IntegratedRates, RateSample};
use crate::rates::RateModel;

/// Default relative tolerance for verdict flags.
pub const DEFAULT_TOL: f64 = 1e-12;

/// `min(γ₊ − |γ₋|, 2Γ − γ₊)`; CP-divisible iff `≥ 0`.
pub fn cp_margin(rs: &RateSample) -> f64 {
    (rs.gamma_plus - rs.gamma_minus.abs()).min(2.0 * rs.decoherence - rs.gamma_plus)
}

/// The two components of the relaxation-rate P-divisibility test.
///
/// They carry different units (`1/time` and `1/time²`), so only their signs
/// should be combined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PMargin {
    /// `γ₊ − |γ₋|`.
    pub population: f64,
    /// `4Γ(γ₊ − Γ) − γ₋²` when `2Γ ≤ γ₊`; `+∞` when the condition is vacuous.
    pub coherence: f64,
}

impl PMargin {
    pub fn combined(&self) -> f64 {
        self.population.min(self.coherence)
    }

    pub fn coherence_is_vacuous(&self) -> bool {
        self.coherence == f64::INFINITY
    }
}

/// Relaxation-rate test: `|γ₋| ≤ γ₊` and, if `2Γ ≤ γ₊`, `γ₋² ≤ 4Γ(γ₊ − Γ)`.
pub fn p_margin_rates(rs: &RateSample) -> PMargin {
    let (gp, gm, g) = (rs.gamma_plus, rs.gamma_minus, rs.decoherence);
    let coherence = if 2.0 * g <= gp {
        4.0 * g * (gp - g) - gm * gm
    } else {
        f64::INFINITY
    };
    PMargin {
        population: gp - gm.abs(),
        coherence,
    }
}

/// The coherence condition rewritten through the fixed point:
/// `2Γ − γ₊(1 − √(1 − z_fp²))`.
///
/// `None` when the condition is vacuous (`2Γ > γ₊`), when `γ₊ = 0`, or when
/// `|z_fp| > 1` (the population condition already fails there).
pub fn p_margin_fixed_point_form(rs: &RateSample) -> Option<f64> {
    let (gp, g) = (rs.gamma_plus, rs.decoherence);
    if 2.0 * g > gp || gp == 0.0 {
        return None;
    }
    let z = rs.gamma_minus / gp;
    if z.abs() > 1.0 {
        return None;
    }
    Some(2.0 * g - gp * (1.0 - (1.0 - z * z).sqrt()))
}

/// Real orthonormal bases `|n⟩ = (a, b)`, `|m⟩ = (c, d)` reduce to one
/// parameter `d² ∈ [0, 1]` (with `b² = 1 − d²`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthonormalBasisParam {
    d2: f64,
}

impl OrthonormalBasisParam {
    pub fn new(d2: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&d2) {
            Ok(Self { d2 })
        } else {
            Err(Error::param("d2", format!("must lie in [0, 1], got {d2}")))
        }
    }

    pub fn d2(&self) -> f64 {
        self.d2
    }

    pub fn b2(&self) -> f64 {
        1.0 - self.d2
    }
}

/// Kossakowski form on the reduced basis parameter:
/// `P(d²) = −4(Γ − γ₊)d⁴ + 2(2Γ − 2γ₊ + γ₋)d² + γ₊ − γ₋`.
pub fn kossakowski_value(rs: &RateSample, basis: OrthonormalBasisParam) -> f64 {
    let (gp, gm, g) = (rs.gamma_plus, rs.gamma_minus, rs.decoherence);
    let x = basis.d2;
    -4.0 * (g - gp) * x * x + 2.0 * (2.0 * g - 2.0 * gp + gm) * x + gp - gm
}

/// Exact minimum of [`kossakowski_value`] over `d² ∈ [0, 1]`.
pub fn kossakowski_min(rs: &RateSample) -> f64 {
    let (gp, gm, g) = (rs.gamma_plus, rs.gamma_minus, rs.decoherence);
    // P(0) = γ₊ − γ₋, P(1) = γ₊ + γ₋
    let endpoints = (gp - gm).min(gp + gm);
    if g < gp {
        // convex parabola; vertex at ½ + γ₋ / (4(Γ − γ₊))
        let vertex = 0.5 + gm / (4.0 * (g - gp));
        if (0.0..=1.0).contains(&vertex) {
            return g + gm * gm / (4.0 * (g - gp));
        }
    }
    endpoints
}

/// Exact maximum over `z ∈ [−1, 1]` of `R(z) = z²(Γ − γ₊) + zγ₋ − Γ`, the
/// radial growth rate `r ṙ` of pure states. P-divisible iff `≤ 0`.
pub fn radius_rate_max(rs: &RateSample) -> f64 {
    let (gp, gm, g) = (rs.gamma_plus, rs.gamma_minus, rs.decoherence);
    // R(±1) = −γ₊ ± γ₋
    let endpoints = (-gp + gm).max(-gp - gm);
    if g < gp {
        let z_m = -gm / (2.0 * (g - gp));
        if (-1.0..=1.0).contains(&z_m) {
            return (4.0 * g * (gp - g) - gm * gm) / (4.0 * (g - gp));
        }
    }
    endpoints
}

/// `R(z)` evaluated directly, for grid checks of [`radius_rate_max`].
pub fn radius_rate(rs: &RateSample, z: f64) -> f64 {
    z * z * (rs.decoherence - rs.gamma_plus) + z * rs.gamma_minus - rs.decoherence
}

/// `−[(Γ − γ₊)z² + γ₋·trace·z − Γ r²]`, i.e. minus `½ d(r²)/dt` for `q`.
///
/// The trace-norm test requires this to be `≥ 0` for every `q` with
/// `r² ≥ trace²`; when `r² < trace²` the norm is `|trace|` and the value is
/// irrelevant.
pub fn trace_norm_derivative_margin(rs: &RateSample, q: &HermitianOp2) -> f64 {
    let (gp, gm, g) = (rs.gamma_plus, rs.gamma_minus, rs.decoherence);
    -((g - gp) * q.z * q.z + gm * q.trace * q.z - g * q.radius_sq())
}

/// `min(γ₊, Γ)`: no information backflow iff `≥ 0`.
pub fn blp_margin(rs: &RateSample) -> f64 {
    rs.gamma_plus.min(rs.decoherence)
}

/// Positivity of `Φ(t)` itself (not of the intermediate maps).
pub fn global_positivity(ir: &IntegratedRates) -> bool {
    let (gp, g, s) = (ir.gamma_plus, ir.decoherence, ir.s);
    if !(gp >= 0.0 && g >= 0.0) {
        return false;
    }
    // 1 − e^{−x} without cancellation at small x
    let one_minus_exp = |x: f64| -(-x).exp_m1();
    let bound = if gp <= 2.0 * g {
        one_minus_exp(gp).powi(2)
    } else {
        one_minus_exp(2.0 * g) * one_minus_exp(2.0 * (gp - g))
    };
    s * s <= bound
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisibilityVerdict {
    pub cp: bool,
    pub p: bool,
    pub blp: bool,
    /// The rate sample was non-finite; all flags are false and margins NaN.
    pub divergent: bool,
    /// Some margin lies within the tolerance band around zero.
    pub boundary: bool,
    pub margin_cp: f64,
    pub margin_p: PMargin,
    pub margin_blp: f64,
}

impl DivisibilityVerdict {
    fn divergent() -> Self {
        Self {
            cp: false,
            p: false,
            blp: false,
            divergent: true,
            boundary: false,
            margin_cp: f64::NAN,
            margin_p: PMargin {
                population: f64::NAN,
                coherence: f64::NAN,
            },
            margin_blp: f64::NAN,
        }
    }
}

/// Classifies one rate sample.
///
/// `tol` is relative: linear margins pass when `≥ −tol·s` and the quadratic
/// coherence margin when `≥ −4·tol·s²`, with `s = max(1, |γ₊|, |γ₋|, |Γ|)`.
/// The P flag also checks `γ₊ ≥ 0` and `Γ ≥ 0`, which the exact inequalities
/// imply, so the tolerance band cannot separate P from BLP.
pub fn verdict(rs: &RateSample, tol: f64) -> DivisibilityVerdict {
    assert!(tol >= 0.0, "tolerance must be non-negative");
    if !rs.is_finite() {
        return DivisibilityVerdict::divergent();
    }
    let scale = 1f64
        .max(rs.gamma_plus.abs())
        .max(rs.gamma_minus.abs())
        .max(rs.decoherence.abs());
    let eps = tol * scale;
    let eps_quad = 4.0 * tol * scale * scale;

    let margin_cp = cp_margin(rs);
    let margin_p = p_margin_rates(rs);
    let margin_blp = blp_margin(rs);

    let blp = margin_blp >= -eps;
    let p = margin_p.population >= -eps && margin_p.coherence >= -eps_quad && blp;
    let cp = margin_cp >= -eps;
    debug_assert!(!cp || p, "CP without P at {rs:?}");

    let boundary = margin_cp.abs() <= eps
        || margin_p.population.abs() <= eps
        || margin_p.coherence.abs() <= eps_quad
        || margin_blp.abs() <= eps;

    DivisibilityVerdict {
        cp,
        p,
        blp,
        divergent: false,
        boundary,
        margin_cp,
        margin_p,
        margin_blp,
    }
}

fn validate_grid<M: RateModel + ?Sized>(model: &M, grid: &[f64]) -> Result<()> {
    if let Some(w) = grid.windows(2).find(|w| !(w[1] >= w[0])) {
        return Err(Error::param("grid", format!("not ascending ({} then {})", w[0], w[1])));
    }
    let (lo, hi) = model.domain();
    if let Some(&t) = grid.iter().find(|&&t| !(t >= lo && t <= hi)) {
        return Err(Error::OutOfRange { t, lo, hi });
    }
    Ok(())
}

/// Rates and verdict at every grid time, evaluated in parallel, returned in grid order.
pub fn classify_timeline<M: RateModel + ?Sized>(
    model: &M,
    grid: &[f64],
    tol: f64,
) -> Result<Vec<(RateSample, DivisibilityVerdict)>> {
    validate_grid(model, grid)?;
    Ok(grid
        .par_iter()
        .map(|&t| {
            let rs = model.sample(t);
            (rs, verdict(&rs, tol))
        })
        .collect())
}

/// `n` evenly spaced points on `[t0, t1]`, endpoints included.
pub fn linspace(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t0],
        _ => {
            let h = (t1 - t0) / (n - 1) as f64;
            (0..n)
                .map(|k| if k == n - 1 { t1 } else { t0 + k as f64 * h })
                .collect()
        }
    }
}
