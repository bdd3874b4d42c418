//! Exact master-equation rates for a qubit coupled to one thermal bosonic mode.
//!
//! The qubit (frequency `ω_A`) exchanges excitations with a mode (frequency
//! `ω_B`, inverse temperature `β_B`) at coupling `g`. With photon-number
//! weights `pₙ = e^{−nβ_Bω_B}(1 − e^{−β_Bω_B})` and Rabi frequencies
//! `Ωₙ = √(Δ² + 4g²n)`, the reduced dynamics is governed by
//!
//! ```text
//! α(t) = Σ pₙ [cos²(Ωₙt/2) + (Δ²/Ωₙ²) sin²(Ωₙt/2)]
//! β(t) = Σ pₙ [cos²(Ωₙ₊₁t/2) + (Δ²/Ωₙ₊₁²) sin²(Ωₙ₊₁t/2)]
//! γ(t) = e^{−iω_B t} Σ pₙ uₙ uₙ₊₁,   uₙ = cos(Ωₙt/2) − i (Δ/Ωₙ) sin(Ωₙt/2)
//! ```
//!
//! from which
//!
//! ```text
//! γ₁ = (αβ̇ − α̇β − β̇)/(α + β − 1),   γ₂ = (α̇β − αβ̇ − α̇)/(α + β − 1),
//! Γ = −Re(γ̇/γ),   ω = −Im(γ̇/γ).
//! ```
//!
//! The series are truncated at `N` photons and the weights renormalized, which
//! is the same model with the thermal state cut at `N − 1` photons. Brackets
//! are evaluated in the form `1 − (4g²n/Ωₙ²) sin²(Ωₙt/2)` so that the
//! deficits `1 − α`, `1 − β` keep full relative precision at short times.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::map::RateSample;
use crate::rates::RateModel;

/// Default truncation tolerance on the thermal tail.
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;

/// `|α + β − 1| < DIVERGENCE_REL·(α + β)` marks a divergent sample.
pub const DIVERGENCE_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JCParams {
    /// Qubit frequency; sets the unit of time (`1/ω_A`).
    pub omega_a: f64,
    pub omega_b: f64,
    /// Detuning. Taken as given, not derived from `ω_A − ω_B`.
    pub delta: f64,
    pub g: f64,
    pub beta_b: f64,
    pub series_tol: f64,
}

impl JCParams {
    pub fn new(omega_a: f64, omega_b: f64, delta: f64, g: f64, beta_b: f64, series_tol: f64) -> Result<Self> {
        let p = Self {
            omega_a,
            omega_b,
            delta,
            g,
            beta_b,
            series_tol,
        };
        p.validate()?;
        Ok(p)
    }

    /// Cold mode: `ω_B = 0.6`, `Δ = 0.4`, `g = 0.3`, `ω_Aβ_B = 2`.
    pub fn cold_mode() -> Self {
        Self::preset(0.6, 0.4, 0.3, 2.0)
    }

    /// Hot mode: `ω_B = 0.6`, `Δ = 0.4`, `g = 0.03`, `ω_Aβ_B = 0.3`.
    pub fn hot_mode() -> Self {
        Self::preset(0.6, 0.4, 0.03, 0.3)
    }

    /// Weak coupling near resonance: `ω_B = 0.6`, `Δ = 10⁻⁴`, `g = 10⁻³`, `ω_Aβ_B = 0.3`.
    pub fn weak_coupling() -> Self {
        Self::preset(0.6, 1e-4, 1e-3, 0.3)
    }

    fn preset(omega_b: f64, delta: f64, g: f64, beta_b: f64) -> Self {
        Self {
            omega_a: 1.0,
            omega_b,
            delta,
            g,
            beta_b,
            series_tol: DEFAULT_SERIES_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega_a", self.omega_a),
            ("omega_b", self.omega_b),
            ("delta", self.delta),
            ("g", self.g),
            ("beta_b", self.beta_b),
        ] {
            if !v.is_finite() {
                return Err(Error::param(name, format!("must be finite, got {v}")));
            }
        }
        if !(self.thermal_exponent() > 0.0) {
            return Err(Error::param(
                "beta_b",
                format!("β_B·ω_B must be positive, got {}", self.thermal_exponent()),
            ));
        }
        if !(self.series_tol > 0.0 && self.series_tol < 1.0) {
            return Err(Error::param(
                "series_tol",
                format!("must lie in (0, 1), got {}", self.series_tol),
            ));
        }
        Ok(())
    }

    /// `β_B ω_B`.
    pub fn thermal_exponent(&self) -> f64 {
        self.beta_b * self.omega_b
    }

    /// Smallest `N` with `e^{−Nβ_Bω_B} / (1 − e^{−β_Bω_B}) < series_tol`.
    pub fn truncation_index(&self) -> usize {
        let x = self.thermal_exponent();
        let p0 = -(-x).exp_m1();
        let n = ((self.series_tol * p0).ln() / -x).floor() as usize + 1;
        // guard against rounding right at the threshold
        let mut n = n.max(1);
        while (-(n as f64) * x).exp() / p0 >= self.series_tol {
            n += 1;
        }
        while n > 1 && (-((n - 1) as f64) * x).exp() / p0 < self.series_tol {
            n -= 1;
        }
        n
    }
}

/// `Ωₙ = √(Δ² + 4g²n)`.
pub fn omega_n(n: usize, p: &JCParams) -> f64 {
    (p.delta * p.delta + 4.0 * p.g * p.g * n as f64).sqrt()
}

/// `pₙ = e^{−nβ_Bω_B}(1 − e^{−β_Bω_B})`.
pub fn thermal_weight(n: usize, p: &JCParams) -> Result<f64> {
    let x = p.thermal_exponent();
    if !(x > 0.0) {
        return Err(Error::param("beta_b", format!("β_B·ω_B must be positive, got {x}")));
    }
    Ok((-(n as f64) * x).exp() * -(-x).exp_m1())
}

/// `sin(x)/x`, exact at 0.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JCCoefficients {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `1 − α`, carried separately to keep precision where `α ≈ 1`.
    pub alpha_deficit: f64,
    /// `1 − β`.
    pub beta_deficit: f64,
    pub alpha_dot: f64,
    pub beta_dot: f64,
    pub gamma_c: Complex64,
    pub gamma_c_dot: Complex64,
    /// `γ̇/γ + iω_B`, the log-derivative of the series without the `e^{−iω_B t}` phase.
    log_derivative_envelope: Complex64,
    /// Size of the terms that cancel in `Re(γ̇/γ)`, for rounding estimates.
    decoherence_scale: f64,
}

impl JCCoefficients {
    /// `α + β − 1`, the denominator of the population rates.
    pub fn denominator(&self) -> f64 {
        1.0 - self.alpha_deficit - self.beta_deficit
    }

    /// `γ̇/γ`.
    pub fn log_derivative(&self, omega_b: f64) -> Complex64 {
        self.log_derivative_envelope - Complex64::new(0.0, omega_b)
    }
}

/// Channel-resolved rates at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JCRates {
    /// Rounding scale of `γ₃`: the largest term cancelling in `Γ − γ₊/2`.
    pub cancellation_scale: f64,
    pub gamma_1: f64,
    pub gamma_2: f64,
    /// `γ₃ = Γ − γ₊/2`, the `σ_z` channel weight.
    pub gamma_3: f64,
    pub sample: RateSample,
    pub divergent: bool,
}

/// Truncated series for one parameter set, ready to evaluate at any time.
#[derive(Debug, Clone)]
pub struct JaynesCummings {
    params: JCParams,
    /// Normalized weights `wₙ`, `n = 0..N`.
    weights: Vec<f64>,
    /// `Ωₙ`, `n = 0..=N`.
    rabi: Vec<f64>,
}

impl JaynesCummings {
    pub fn new(params: JCParams) -> Result<Self> {
        params.validate()?;
        Self::with_terms(params, params.truncation_index())
    }

    /// Keeps photon numbers `0..n_terms`.
    pub fn with_terms(params: JCParams, n_terms: usize) -> Result<Self> {
        params.validate()?;
        if n_terms == 0 {
            return Err(Error::param("n_terms", "need at least one term"));
        }
        let raw: Vec<f64> = (0..n_terms)
            .map(|n| thermal_weight(n, &params))
            .collect::<Result<_>>()?;
        let total: f64 = raw.iter().sum();
        let weights = raw.iter().map(|w| w / total).collect();
        let rabi = (0..=n_terms).map(|n| omega_n(n, &params)).collect();
        Ok(Self { params, weights, rabi })
    }

    pub fn params(&self) -> &JCParams {
        &self.params
    }

    pub fn n_terms(&self) -> usize {
        self.weights.len()
    }

    pub fn coefficients(&self, t: f64) -> JCCoefficients {
        let p = &self.params;
        let g2x4 = 4.0 * p.g * p.g;
        let half_t = 0.5 * t;

        // Per photon number: sin, cos of Ωₙt/2, sin²(Ωₙt/4), the deficit
        // kₙ sin²(Ωₙt/2), its derivative, and (Δ/Ωₙ) sin(Ωₙt/2).
        struct Term {
            s: f64,
            c: f64,
            half_angle_sq: f64,
            deficit: f64,
            deficit_dot: f64,
            detuned: f64,
            omega: f64,
        }
        let term = |n: usize| {
            let omega = self.rabi[n];
            let phase = omega * half_t;
            let (s, c) = phase.sin_cos();
            let sc = sinc(phase);
            let coupling = g2x4 * n as f64;
            let q = (0.5 * phase).sin();
            Term {
                s,
                c,
                half_angle_sq: q * q,
                deficit: coupling * half_t * half_t * sc * sc,
                deficit_dot: coupling * half_t * sc * c,
                detuned: p.delta * half_t * sc,
                omega,
            }
        };

        let mut alpha_deficit = 0.0;
        let mut beta_deficit = 0.0;
        let mut alpha_dot = 0.0;
        let mut beta_dot = 0.0;
        let mut envelope_minus_one = Complex64::new(0.0, 0.0);
        let mut envelope_dot = Complex64::new(0.0, 0.0);

        let mut lower = term(0);
        for (n, &w) in self.weights.iter().enumerate() {
            let upper = term(n + 1);
            alpha_deficit += w * lower.deficit;
            alpha_dot -= w * lower.deficit_dot;
            beta_deficit += w * upper.deficit;
            beta_dot -= w * upper.deficit_dot;

            // uₙ uₙ₊₁ − 1 with cₙ = 1 − 2 sin²(Ωₙt/4) to avoid cancellation
            let (a, b) = (lower.half_angle_sq, upper.half_angle_sq);
            let re = -2.0 * a - 2.0 * b + 4.0 * a * b - lower.detuned * upper.detuned;
            let im = -(lower.c * upper.detuned + lower.detuned * upper.c);
            envelope_minus_one += w * Complex64::new(re, im);

            // u̇ = −(Ω/2) sin(Ωt/2) − i(Δ/2) cos(Ωt/2)
            let u_lo = Complex64::new(lower.c, -lower.detuned);
            let u_hi = Complex64::new(upper.c, -upper.detuned);
            let du_lo = Complex64::new(-0.5 * lower.omega * lower.s, -0.5 * p.delta * lower.c);
            let du_hi = Complex64::new(-0.5 * upper.omega * upper.s, -0.5 * p.delta * upper.c);
            envelope_dot += w * (du_lo * u_hi + u_lo * du_hi);

            lower = upper;
        }

        let envelope = Complex64::new(1.0, 0.0) + envelope_minus_one;
        let phase = Complex64::from_polar(1.0, -p.omega_b * t);
        JCCoefficients {
            t,
            alpha: 1.0 - alpha_deficit,
            beta: 1.0 - beta_deficit,
            alpha_deficit,
            beta_deficit,
            alpha_dot,
            beta_dot,
            gamma_c: phase * envelope,
            gamma_c_dot: phase * (envelope_dot - Complex64::new(0.0, p.omega_b) * envelope),
            log_derivative_envelope: envelope_dot / envelope,
            decoherence_scale: ((envelope_dot.re * envelope.re).abs()
                + (envelope_dot.im * envelope.im).abs())
                / envelope.norm_sqr(),
        }
    }

    pub fn channel_rates(&self, t: f64) -> JCRates {
        let c = self.coefficients(t);
        let (a, b, da, db) = (c.alpha, c.beta, c.alpha_dot, c.beta_dot);
        let (ea, eb) = (c.alpha_deficit, c.beta_deficit);
        let denom = c.denominator();
        let log_dot = c.log_derivative(self.params.omega_b);
        let decoherence = -log_dot.re;
        let omega = -log_dot.im;

        if denom.abs() < DIVERGENCE_REL * (a + b).abs() {
            return JCRates {
                cancellation_scale: f64::NAN,
                gamma_1: f64::NAN,
                gamma_2: f64::NAN,
                gamma_3: f64::NAN,
                sample: RateSample::new(t, f64::NAN, f64::NAN, decoherence, omega),
                divergent: true,
            };
        }
        // αβ̇ − α̇β − β̇ = −(1−α)β̇ − α̇β and α̇β − αβ̇ − α̇ = −(1−β)α̇ − αβ̇
        let gamma_1 = (-ea * db - da * b) / denom;
        let gamma_2 = (-eb * da - a * db) / denom;
        let gamma_plus = -(da + db) / denom;
        let gamma_minus = (db - da - 2.0 * ea * db + 2.0 * eb * da) / denom;
        JCRates {
            cancellation_scale: c.decoherence_scale.max(0.5 * gamma_plus.abs()),
            gamma_1,
            gamma_2,
            gamma_3: decoherence - 0.5 * gamma_plus,
            sample: RateSample::new(t, gamma_plus, gamma_minus, decoherence, omega),
            divergent: false,
        }
    }

    pub fn rates(&self, t: f64) -> RateSample {
        self.channel_rates(t).sample
    }

    /// Times in `[t0, t1]` where `α + β − 1` changes sign, located by bisection.
    ///
    /// `scan_points` sets the bracketing grid; roots closer together than its
    /// spacing may be missed.
    pub fn denominator_roots(&self, t0: f64, t1: f64, scan_points: usize) -> Vec<f64> {
        let d = |t: f64| self.coefficients(t).denominator();
        let grid = crate::divisibility::linspace(t0, t1, scan_points.max(2));
        let mut roots = Vec::new();
        for w in grid.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            let (mut dlo, dhi) = (d(lo), d(hi));
            if dlo == 0.0 {
                roots.push(lo);
                continue;
            }
            if dlo.signum() == dhi.signum() || dhi == 0.0 {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let dm = d(mid);
                if dm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if dm.signum() == dlo.signum() {
                    lo = mid;
                    dlo = dm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        roots
    }
}

impl RateModel for JaynesCummings {
    fn sample(&self, t: f64) -> RateSample {
        self.rates(t)
    }
}

pub fn coefficients(t: f64, p: &JCParams) -> Result<JCCoefficients> {
    Ok(JaynesCummings::new(*p)?.coefficients(t))
}

pub fn jc_rates(t: f64, p: &JCParams) -> Result<RateSample> {
    Ok(JaynesCummings::new(*p)?.rates(t))
}

/// Result of the log-log fit of `|Γ − γ₊/2|` against `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortTimeFit {
    pub exponent: f64,
    /// RMS residual of the fit in natural-log units.
    pub residual: f64,
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_window(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    crate::divisibility::linspace(lo.ln(), hi.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect()
}

/// Least-squares exponent of `|Γ(t) − γ₊(t)/2|` over the given small times.
pub fn short_time_order(p: &JCParams, t_window: &[f64]) -> Result<ShortTimeFit> {
    let model = JaynesCummings::new(*p)?;
    if t_window.len() < 2 {
        return Err(Error::param("t_window", "need at least two times"));
    }
    let mut pts = Vec::with_capacity(t_window.len());
    for &t in t_window {
        if !(t > 0.0) {
            return Err(Error::param("t_window", format!("times must be positive, got {t}")));
        }
        let r = model.channel_rates(t);
        if r.divergent {
            return Err(Error::Unresolvable(format!("divergent sample at t = {t}")));
        }
        let scale = r.cancellation_scale;
        if !(r.gamma_3.abs() >= 1e3 * f64::EPSILON * scale) || r.gamma_3 == 0.0 {
            return Err(Error::Unresolvable(format!(
                "Γ − γ₊/2 = {:e} at t = {t} is below rounding level of {scale:e}",
                r.gamma_3
            )));
        }
        pts.push((t.ln(), r.gamma_3.abs().ln()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::param("t_window", "times must not all coincide"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ShortTimeFit {
        exponent: slope,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_n_examples() {
        let p = JCParams::cold_mode();
        assert_eq!(omega_n(0, &p), 0.4);
        assert!((omega_n(1, &p) - 0.52f64.sqrt()).abs() < 1e-15);
        assert!((omega_n(1, &p) - 0.72111).abs() < 1e-5);
        let decoupled = JCParams { g: 0.0, ..p };
        assert_eq!(omega_n(17, &decoupled), 0.4);
    }

    #[test]
    fn thermal_weight_examples() {
        let p = JCParams::cold_mode();
        let p0 = thermal_weight(0, &p).unwrap();
        assert!((p0 - (1.0 - (-1.2f64).exp())).abs() < 1e-15);
        assert!((p0 - 0.69881).abs() < 1e-5);
        let n = p.truncation_index();
        let partial: f64 = (0..n).map(|k| thermal_weight(k, &p).unwrap()).sum();
        assert!(1.0 - partial < p.series_tol);
        let bad = JCParams { beta_b: -1.0, ..p };
        assert!(thermal_weight(0, &bad).is_err());
        assert!(JaynesCummings::new(JCParams { omega_b: 0.0, ..p }).is_err());
        assert!(JaynesCummings::new(JCParams { series_tol: 1.5, ..p }).is_err());
    }

    #[test]
    fn truncation_index_values() {
        assert_eq!(JCParams::cold_mode().truncation_index(), 24);
        let hot = JCParams::hot_mode().truncation_index();
        assert!((150..=170).contains(&hot), "{hot}");
        assert_eq!(JCParams::weak_coupling().truncation_index(), hot);
        let p = JCParams::cold_mode();
        let n = p.truncation_index();
        let x = p.thermal_exponent();
        let p0 = 1.0 - (-x).exp();
        assert!((-(n as f64) * x).exp() / p0 < p.series_tol);
        assert!((-((n - 1) as f64) * x).exp() / p0 >= p.series_tol);
    }

    #[test]
    fn coefficients_at_zero() {
        for p in [JCParams::cold_mode(), JCParams::hot_mode(), JCParams::weak_coupling()] {
            let c = JaynesCummings::new(p).unwrap().coefficients(0.0);
            assert_eq!(c.alpha, 1.0);
            assert_eq!(c.beta, 1.0);
            assert_eq!(c.alpha_dot, 0.0);
            assert_eq!(c.beta_dot, 0.0);
            assert_eq!(c.gamma_c, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn decoupled_qubit() {
        let p = JCParams { g: 0.0, ..JCParams::cold_mode() };
        let jc = JaynesCummings::new(p).unwrap();
        for k in 0..50 {
            let t = k as f64 * 0.37;
            let c = jc.coefficients(t);
            assert_eq!(c.alpha, 1.0);
            assert_eq!(c.beta, 1.0);
            let r = jc.channel_rates(t);
            assert_eq!(r.gamma_1, 0.0);
            assert_eq!(r.gamma_2, 0.0);
            assert_eq!(r.sample.gamma_plus, 0.0);
            assert_eq!(r.sample.gamma_minus, 0.0);
        }
    }

    #[test]
    fn zero_detuning_is_finite() {
        let p = JCParams { delta: 0.0, ..JCParams::cold_mode() };
        let jc = JaynesCummings::new(p).unwrap();
        for k in 0..40 {
            let c = jc.coefficients(k as f64 * 0.25);
            assert!(c.alpha.is_finite() && c.alpha_dot.is_finite() && c.gamma_c.norm().is_finite());
        }
        // Δ = 0 ⇒ α is the resonant sum Σ pₙ cos²(g√n t).
        let t = 1.7;
        let c = jc.coefficients(t);
        let direct: f64 = jc
            .weights
            .iter()
            .enumerate()
            .map(|(n, w)| w * (p.g * (n as f64).sqrt() * t).cos().powi(2))
            .sum();
        assert!((c.alpha - direct).abs() < 1e-14);
    }

    /// Brackets evaluated exactly as printed, summed over the same photon range.
    fn naive_alpha_beta(jc: &JaynesCummings, t: f64) -> (f64, f64, Complex64) {
        let p = jc.params();
        let bracket = |om: f64| {
            let (s, c) = (0.5 * om * t).sin_cos();
            c * c + p.delta * p.delta / (om * om) * s * s
        };
        let u = |om: f64| {
            let (s, c) = (0.5 * om * t).sin_cos();
            Complex64::new(c, -p.delta / om * s)
        };
        let mut a = 0.0;
        let mut b = 0.0;
        let mut g = Complex64::new(0.0, 0.0);
        for (n, w) in jc.weights.iter().enumerate() {
            let (lo, hi) = (omega_n(n, p), omega_n(n + 1, p));
            a += w * bracket(lo);
            b += w * bracket(hi);
            g += w * u(lo) * u(hi);
        }
        (a, b, g * Complex64::from_polar(1.0, -p.omega_b * t))
    }

    #[test]
    fn matches_printed_series() {
        let jc = JaynesCummings::new(JCParams::cold_mode()).unwrap();
        for k in 1..60 {
            let t = k as f64 * 0.31;
            let c = jc.coefficients(t);
            let (a, b, g) = naive_alpha_beta(&jc, t);
            assert!((c.alpha - a).abs() < 1e-13, "t={t}");
            assert!((c.beta - b).abs() < 1e-13, "t={t}");
            assert!((c.gamma_c - g).norm() < 1e-13, "t={t}");
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for p in [JCParams::cold_mode(), JCParams::hot_mode()] {
            let jc = JaynesCummings::new(p).unwrap();
            let h = 1e-5;
            for k in 1..40 {
                let t = k as f64 * 0.47;
                let c = jc.coefficients(t);
                let (cp, cm) = (jc.coefficients(t + h), jc.coefficients(t - h));
                let fd_a = (cp.alpha - cm.alpha) / (2.0 * h);
                let fd_b = (cp.beta - cm.beta) / (2.0 * h);
                let fd_g = (cp.gamma_c - cm.gamma_c) / (2.0 * h);
                let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1e-2);
                assert!(rel(c.alpha_dot, fd_a) < 1e-6, "α̇ t={t}: {} vs {fd_a}", c.alpha_dot);
                assert!(rel(c.beta_dot, fd_b) < 1e-6, "β̇ t={t}");
                assert!((c.gamma_c_dot - fd_g).norm() / fd_g.norm().max(1e-2) < 1e-6, "γ̇ t={t}");
            }
        }
    }

    #[test]
    fn derivative_identities_cold_mode() {
        let p = JCParams::cold_mode();
        let jc = JaynesCummings::new(p).unwrap();
        let e = (-p.thermal_exponent()).exp();
        for k in 1..200 {
            let t = k as f64 * 0.1;
            let c = jc.coefficients(t);
            assert!((c.alpha_dot - e * c.beta_dot).abs() <= 1e-10 * c.beta_dot.abs().max(1.0));
            let lhs = c.alpha * c.beta_dot - c.alpha_dot * c.beta;
            assert!((lhs - (1.0 - e) * c.beta_dot).abs() <= 1e-10 * c.beta_dot.abs().max(1.0));
        }
    }

    #[test]
    fn cold_mode_rate_ratios() {
        let p = JCParams::cold_mode();
        let jc = JaynesCummings::new(p).unwrap();
        for k in 1..200 {
            let r = jc.channel_rates(k as f64 * 0.1);
            if r.divergent || r.sample.gamma_plus.abs() < 1e-6 {
                continue;
            }
            assert!((r.sample.gamma_minus / r.sample.gamma_plus + 0.6f64.tanh()).abs() < 1e-8);
            assert!((r.gamma_1 / r.gamma_2 - (-1.2f64).exp()).abs() < 1e-8);
        }
        assert!((-(0.6f64.tanh()) + 0.53705).abs() < 1e-5);
        assert!(((-1.2f64).exp() - 0.30119).abs() < 1e-5);
    }

    #[test]
    fn truncation_converged() {
        for p in [JCParams::cold_mode(), JCParams::hot_mode()] {
            let base = JaynesCummings::new(p).unwrap();
            let doubled = JaynesCummings::with_terms(p, 2 * base.n_terms()).unwrap();
            for k in 0..100 {
                let t = k as f64 * 0.53;
                let (a, b) = (base.coefficients(t), doubled.coefficients(t));
                assert!((a.alpha - b.alpha).abs() < p.series_tol);
                assert!((a.beta - b.beta).abs() < p.series_tol);
                assert!((a.gamma_c - b.gamma_c).norm() < p.series_tol);
            }
        }
    }

    #[test]
    fn coefficient_bounds() {
        for p in [JCParams::cold_mode(), JCParams::hot_mode(), JCParams::weak_coupling()] {
            let jc = JaynesCummings::new(p).unwrap();
            for k in 0..300 {
                let c = jc.coefficients(k as f64 * 0.77);
                assert!(c.alpha > 0.0 && c.alpha <= 1.0);
                assert!(c.beta > 0.0 && c.beta <= 1.0);
            }
        }
    }

    #[test]
    fn short_time_rejects_bad_windows() {
        let p = JCParams::cold_mode();
        assert!(short_time_order(&p, &[1e-3]).is_err());
        assert!(short_time_order(&p, &[0.0, 1e-3]).is_err());
        let decoupled = JCParams { g: 0.0, ..p };
        assert!(matches!(
            short_time_order(&decoupled, &[1e-3, 1e-2]),
            Err(Error::Unresolvable(_))
        ));
    }
}
