//! Monte Carlo cross-checks of the P-divisibility tests and the `(Γ, γ₊)` region map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bloch::HermitianOp2;
use crate::divisibility::{
    kossakowski_min, linspace, p_margin_rates, radius_rate_max, trace_norm_derivative_margin,
    verdict, DivisibilityVerdict, DEFAULT_TOL,
};
use crate::map::RateSample;

/// Rates are drawn uniformly from `[−RATE_RANGE, RATE_RANGE]³`.
pub const RATE_RANGE: f64 = 3.0;

/// Samples with any criterion value closer to zero than this are not compared.
pub const EQUIVALENCE_BAND: f64 = 1e-9;

/// Samples with a relaxation-rate margin closer to zero than this are not
/// compared against the sampled trace-norm oracle.
pub const ORACLE_BAND: f64 = 1e-6;

/// Rate triples per parallel chunk. Each chunk has its own RNG stream, so
/// results depend only on the seed.
const CHUNK: usize = 4096;

fn random_rates(rng: &mut ChaCha8Rng) -> RateSample {
    let mut u = || rng.gen_range(-RATE_RANGE..=RATE_RANGE);
    RateSample::new(0.0, u(), u(), u(), 0.0)
}

/// Deterministic per-chunk streams for any `n`.
fn chunked<T: Send>(n: usize, seed: u64, f: impl Fn(usize, &mut ChaCha8Rng) -> T + Sync) -> Vec<T> {
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            (0..len).map(|i| f(c * CHUNK + i, &mut rng)).collect::<Vec<_>>()
        })
        .collect()
}

fn implication_holds(v: &DivisibilityVerdict) -> bool {
    (!v.cp || v.p) && (!v.p || v.blp)
}

/// A sample on which two criteria disagreed, or the closest call otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSample {
    pub rates: RateSample,
    /// Signed relaxation-rate margin `min(γ₊ − |γ₋|, coherence term)`.
    pub relaxation: f64,
    pub kossakowski: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub samples: usize,
    pub boundary_excluded: usize,
    pub disagreements: usize,
    pub implication_violations: usize,
    /// Smallest `|value|` among compared samples, over all three criteria.
    pub closest_call: f64,
    pub worst_disagreement: Option<SweepSample>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.disagreements == 0 && self.implication_violations == 0
    }
}

struct Outcome {
    sample: SweepSample,
    boundary: bool,
    agree: bool,
    chain_ok: bool,
}

fn evaluate(rs: RateSample, perturb: f64) -> Outcome {
    let m = p_margin_rates(&rs);
    let sample = SweepSample {
        rates: rs,
        relaxation: m.combined(),
        kossakowski: kossakowski_min(&rs) + perturb,
        radius: radius_rate_max(&rs),
    };
    let boundary = [m.population, m.coherence, sample.kossakowski, sample.radius]
        .iter()
        .any(|v| v.abs() < EQUIVALENCE_BAND);
    let a = sample.relaxation >= 0.0;
    let b = sample.kossakowski >= 0.0;
    let c = sample.radius <= 0.0;
    Outcome {
        sample,
        boundary,
        agree: a == b && b == c,
        chain_ok: implication_holds(&verdict(&rs, DEFAULT_TOL)),
    }
}

/// Compares the relaxation-rate, Kossakowski and radius-rate tests on `n`
/// random rate triples.
///
/// `perturb` is added to the Kossakowski minimum; a nonzero value is a
/// self-test that the sweep can detect a broken criterion.
pub fn run_equivalence_sweep(n: usize, seed: u64, perturb: f64) -> EquivalenceReport {
    let outcomes = chunked(n, seed, |_, rng| evaluate(random_rates(rng), perturb));
    summarize(outcomes)
}

/// Same comparison on caller-supplied samples.
pub fn equivalence_on(samples: &[RateSample], perturb: f64) -> EquivalenceReport {
    summarize(samples.iter().map(|&rs| evaluate(rs, perturb)).collect())
}

fn summarize(outcomes: Vec<Outcome>) -> EquivalenceReport {
    let spread = |s: &SweepSample| {
        let diff = |x: f64, y: f64| (x - y).abs();
        diff(s.relaxation.signum(), s.kossakowski.signum())
            .max(diff(s.kossakowski.signum(), -s.radius.signum()))
            * s.relaxation.abs().max(s.kossakowski.abs()).max(s.radius.abs())
    };
    let mut report = EquivalenceReport {
        samples: outcomes.len(),
        boundary_excluded: 0,
        disagreements: 0,
        implication_violations: 0,
        closest_call: f64::INFINITY,
        worst_disagreement: None,
    };
    for o in &outcomes {
        if !o.chain_ok {
            report.implication_violations += 1;
        }
        if o.boundary {
            report.boundary_excluded += 1;
            continue;
        }
        let s = &o.sample;
        let closest = s.relaxation.abs().min(s.kossakowski.abs()).min(s.radius.abs());
        report.closest_call = report.closest_call.min(closest);
        if !o.agree {
            report.disagreements += 1;
            if report.worst_disagreement.is_none_or(|w| spread(s) > spread(&w)) {
                report.worst_disagreement = Some(*s);
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub rate_samples: usize,
    pub operators_per_sample: usize,
    pub boundary_excluded: usize,
    pub disagreements: usize,
    pub implication_violations: usize,
    /// Most negative sampled margin found on a P-divisible sample (should be ≥ −1e-9).
    pub worst_passing_margin: f64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.disagreements == 0 && self.implication_violations == 0
    }
}

/// Random operator with `r² ≥ trace²`: pure states (`trace = 1`, `r = 1`),
/// traceless unit operators, and states scaled outside the Bloch ball.
fn random_operator(rng: &mut ChaCha8Rng, k: usize) -> HermitianOp2 {
    let z: f64 = match k {
        0 => 1.0,
        1 => -1.0,
        _ => rng.gen_range(-1.0..=1.0),
    };
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let rho = (1.0 - z * z).max(0.0).sqrt();
    let (x, y) = (rho * phi.cos(), rho * phi.sin());
    if k < 2 {
        return HermitianOp2::new(1.0, x, y, z);
    }
    match k % 3 {
        0 => HermitianOp2::new(1.0, x, y, z),
        1 => HermitianOp2::new(0.0, x, y, z),
        _ => {
            let r = rng.gen_range(1.0..4.0);
            let trace = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            HermitianOp2::new(trace, r * x, r * y, r * z)
        }
    }
}

/// Checks the relaxation-rate verdict against the trace-norm derivative
/// sampled on `n_ops` operators for each of `n_rates` random rate triples.
///
/// P-divisible samples must give a sampled margin `≥ −1e-9` everywhere;
/// non-P samples must be violated by at least one sampled pure state.
pub fn run_trace_norm_oracle(n_rates: usize, n_ops: usize, seed: u64) -> OracleReport {
    struct Row {
        boundary: bool,
        agree: bool,
        chain_ok: bool,
        worst_passing: f64,
    }
    let rows = chunked(n_rates, seed, |_, rng| {
        let rs = random_rates(rng);
        let m = p_margin_rates(&rs);
        let chain_ok = implication_holds(&verdict(&rs, DEFAULT_TOL));
        let mut worst_all = f64::INFINITY;
        let mut worst_pure = f64::INFINITY;
        for k in 0..n_ops {
            let q = random_operator(rng, k);
            debug_assert!(q.radius_sq() >= q.trace * q.trace * (1.0 - 1e-12));
            let v = trace_norm_derivative_margin(&rs, &q);
            worst_all = worst_all.min(v);
            if q.trace == 1.0 && (q.radius_sq() - 1.0).abs() < 1e-12 {
                worst_pure = worst_pure.min(v);
            }
        }
        let boundary = m.population.abs() < ORACLE_BAND || m.coherence.abs() < ORACLE_BAND;
        let p = m.combined() >= 0.0;
        let agree = if p { worst_all >= -1e-9 } else { worst_pure < 0.0 };
        Row {
            boundary,
            agree,
            chain_ok,
            worst_passing: if p { worst_all } else { f64::INFINITY },
        }
    });
    let mut report = OracleReport {
        rate_samples: n_rates,
        operators_per_sample: n_ops,
        boundary_excluded: 0,
        disagreements: 0,
        implication_violations: 0,
        worst_passing_margin: f64::INFINITY,
    };
    for r in rows {
        if !r.chain_ok {
            report.implication_violations += 1;
        }
        if r.boundary {
            report.boundary_excluded += 1;
            continue;
        }
        report.worst_passing_margin = report.worst_passing_margin.min(r.worst_passing);
        if !r.agree {
            report.disagreements += 1;
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Cp,
    POnly,
    BlpOnly,
    None,
}

impl Region {
    pub fn of(v: &DivisibilityVerdict) -> Self {
        if v.cp {
            Region::Cp
        } else if v.p {
            Region::POnly
        } else if v.blp {
            Region::BlpOnly
        } else {
            Region::None
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Region::Cp => "CP",
            Region::POnly => "P_only",
            Region::BlpOnly => "BLP_only",
            Region::None => "none",
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCell {
    pub decoherence: f64,
    pub gamma_plus: f64,
    pub verdict: DivisibilityVerdict,
}

impl RegionCell {
    pub fn region(&self) -> Region {
        Region::of(&self.verdict)
    }
}

/// Classifies a `(Γ, γ₊)` grid at fixed `γ₋`. Cells are ordered with `γ₊`
/// varying slowest.
pub fn region_map(
    gamma_minus: f64,
    decoherence_range: (f64, f64),
    gamma_plus_range: (f64, f64),
    resolution: (usize, usize),
    tol: f64,
) -> Vec<RegionCell> {
    let gs = linspace(decoherence_range.0, decoherence_range.1, resolution.0);
    let gps = linspace(gamma_plus_range.0, gamma_plus_range.1, resolution.1);
    gps.par_iter()
        .flat_map_iter(|&gp| {
            gs.iter().map(move |&g| {
                let rs = RateSample::new(0.0, gp, gamma_minus, g, 0.0);
                RegionCell {
                    decoherence: g,
                    gamma_plus: gp,
                    verdict: verdict(&rs, tol),
                }
            })
        })
        .collect()
}
