//! Divisibility criteria for two-level open quantum systems.
//!
//! The dynamics is the time-local master equation with jump operators
//! `σ₊`, `σ₋`, `σ_z/√2` and a `σ_z` Hamiltonian. Everything here is expressed
//! through the relaxation rates `γ₊ = γ₁₂ + γ₂₁`, `γ₋ = γ₁₂ − γ₂₁`, the
//! decoherence rate `Γ` and the frequency `ω`.
//!
//! Module map:
//!
//! * [`bloch`]: 2×2 Hermitian operators in Bloch form, eigenvalues and trace norm.
//! * [`map`]: integrated rates, the dynamical map and the instantaneous fixed point.
//! * [`divisibility`]: CP, P (four equivalent tests), BLP and global positivity.
//! * [`rates`]: the rate-model interface and the standard analytic models.
//! * [`jaynes_cummings`]: exact rates for a qubit coupled to one thermal bosonic mode.
//! * [`sweep`]: Monte Carlo equivalence sweeps and the `(Γ, γ₊)` region map.
//! * [`table`]: the timeline CSV schema (writer and reader).

// `!(x > 0.0)` style tests are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod divisibility;
pub mod error;
pub mod jaynes_cummings;
pub mod map;
pub mod rates;
pub mod sweep;
pub mod table;

pub use bloch::HermitianOp2;
pub use divisibility::{DivisibilityVerdict, OrthonormalBasisParam, PMargin};
pub use error::{Error, Result};
pub use jaynes_cummings::{JCCoefficients, JCParams, JaynesCummings};
pub use map::{IntegratedRates, RateSample};
pub use rates::{EternalNm, LossyCavity, RateModel, Tabulated};
