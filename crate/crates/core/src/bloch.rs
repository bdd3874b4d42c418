//! 2×2 Hermitian operators in Bloch coordinates.
//!
//! An operator is stored as `q = ½(trace·𝕀 + x σₓ + y σ_y + z σ_z)`, so the
//! matrix entries are
//!
//! ```text
//! q = ½ ⎡ trace + z   x − i y ⎤
//!       ⎣ x + i y   trace − z ⎦
//! ```
//!
//! The off-diagonal sign convention `q₁₂ = (x − i y)/2` fixes `y = −2 Im q₁₂`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance on the Hermiticity check in [`HermitianOp2::from_matrix`].
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Matrix entries `[[q₁₁, q₁₂], [q₂₁, q₂₂]]` in the canonical basis `{|1⟩, |2⟩}`.
pub type Matrix2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HermitianOp2 {
    pub trace: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl HermitianOp2 {
    pub const fn new(trace: f64, x: f64, y: f64, z: f64) -> Self {
        Self { trace, x, y, z }
    }

    /// Density operator with Bloch vector `(x, y, z)`.
    pub const fn state(x: f64, y: f64, z: f64) -> Self {
        Self::new(1.0, x, y, z)
    }

    /// Reads Bloch coordinates off a Hermitian matrix.
    ///
    /// Fails if the matrix deviates from Hermiticity by more than
    /// [`HERMITICITY_TOL`] relative to its largest entry.
    pub fn from_matrix(m: &Matrix2) -> Result<Self> {
        let scale = m
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(1.0_f64, f64::max);
        let deviation = m[0][0]
            .im
            .abs()
            .max(m[1][1].im.abs())
            .max((m[0][1] - m[1][0].conj()).norm());
        if !(deviation <= HERMITICITY_TOL * scale) {
            return Err(Error::NotHermitian { deviation });
        }
        // Average the two off-diagonal entries so tiny asymmetries are split evenly.
        let q12 = 0.5 * (m[0][1] + m[1][0].conj());
        Ok(Self {
            trace: m[0][0].re + m[1][1].re,
            x: 2.0 * q12.re,
            y: -2.0 * q12.im,
            z: m[0][0].re - m[1][1].re,
        })
    }

    pub fn to_matrix(&self) -> Matrix2 {
        let q12 = Complex64::new(0.5 * self.x, -0.5 * self.y);
        [
            [Complex64::new(0.5 * (self.trace + self.z), 0.0), q12],
            [q12.conj(), Complex64::new(0.5 * (self.trace - self.z), 0.0)],
        ]
    }

    pub fn radius_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn radius(&self) -> f64 {
        self.radius_sq().sqrt()
    }

    /// Eigenvalues `(φ₊, φ₋) = ((trace + r)/2, (trace − r)/2)`, descending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = self.radius();
        (0.5 * (self.trace + r), 0.5 * (self.trace - r))
    }

    /// `‖q‖₁ = |φ₊| + |φ₋|`, which is `|trace|` when `r ≤ |trace|` and `r` otherwise.
    pub fn trace_norm(&self) -> f64 {
        let r = self.radius();
        if r <= self.trace.abs() {
            self.trace.abs()
        } else {
            r
        }
    }

    pub fn is_density_operator(&self, tol: f64) -> bool {
        (self.trace - 1.0).abs() <= tol && self.radius_sq() <= 1.0 + tol
    }
}
