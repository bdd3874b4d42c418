//! Acceptance suite. Each test prints one `[PASS]`/`[FAIL]` line and then
//! asserts, so `cargo test --test acceptance -- --nocapture` gives a summary.

use std::time::{Duration, Instant};

use pdiv_core::divisibility::{classify_timeline, linspace, p_margin_rates, verdict, DEFAULT_TOL};
use pdiv_core::jaynes_cummings::{log_window, short_time_order};
use pdiv_core::map::{apply_map, apply_matrix, integrate_rates, map_matrix, vectorize};
use pdiv_core::rates::{EternalNm, LossyCavity};
use pdiv_core::sweep::{region_map, run_equivalence_sweep, run_trace_norm_oracle, Region};
use pdiv_core::{HermitianOp2, IntegratedRates, JCParams, JaynesCummings, RateSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(name: &str, pass: bool, detail: impl std::fmt::Display) {
    println!("[{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: {detail}");
}

fn regimes() -> [(&'static str, JCParams, f64); 3] {
    [
        ("cold", JCParams::cold_mode(), 20.0),
        ("hot", JCParams::hot_mode(), 100.0),
        ("weak", JCParams::weak_coupling(), 2000.0),
    ]
}

#[test]
fn criterion_equivalence_sweep() {
    let start = Instant::now();
    let r = run_equivalence_sweep(100_000, 20240601, 0.0);
    let elapsed = start.elapsed();
    report(
        "criterion equivalence (1e5 samples)",
        r.disagreements == 0 && elapsed < Duration::from_secs(5),
        format!(
            "{} disagreements, {} in boundary band, closest call {:e}, {:.2?}",
            r.disagreements, r.boundary_excluded, r.closest_call, elapsed
        ),
    );
}

#[test]
fn sampled_trace_norm_oracle() {
    let start = Instant::now();
    let r = run_trace_norm_oracle(1000, 1000, 7);
    let elapsed = start.elapsed();
    report(
        "sampled trace-norm oracle (1e3 x 1e3)",
        r.disagreements == 0 && elapsed < Duration::from_secs(30),
        format!(
            "{} disagreements, {} in boundary band, worst passing margin {:e}, {:.2?}",
            r.disagreements, r.boundary_excluded, r.worst_passing_margin, elapsed
        ),
    );
}

#[test]
fn implication_chain() {
    let a = run_equivalence_sweep(100_000, 20240601, 0.0);
    let b = run_trace_norm_oracle(1000, 1000, 7);
    let violations = a.implication_violations + b.implication_violations;
    report(
        "implication chain CP => P => BLP",
        violations == 0,
        format!("{violations} violations over {} samples", a.samples + b.rate_samples),
    );
}

#[test]
fn eternal_non_markovianity() {
    let grid = linspace(0.01, 10.0, 2001);
    let rows = classify_timeline(&EternalNm, &grid, 0.0).unwrap();
    let bad = rows.iter().filter(|(_, v)| v.cp || !v.p || !v.blp).count();
    report(
        "eternal non-Markovianity timeline",
        bad == 0,
        format!("{bad} of {} points deviate from cp=0, p=blp=1", rows.len()),
    );
}

#[test]
fn lossy_cavity_constant_rate() {
    let model = LossyCavity::constant(1.0, 0.0);
    let grid = linspace(0.0, 10.0, 2001);
    let rows = classify_timeline(&model, &grid, DEFAULT_TOL).unwrap();
    let bad = rows.iter().filter(|(_, v)| !(v.cp && v.p && v.blp)).count();
    let fp_exact = rows.iter().all(|(rs, _)| rs.fixed_point() == Some(1.0));
    report(
        "lossy cavity, gamma = 1",
        bad == 0 && fp_exact,
        format!("{bad} points not CP/P/BLP, z_fp == 1 exactly: {fp_exact}"),
    );
}

#[test]
fn jc_constant_ratio() {
    for (name, p, t_max) in regimes() {
        let start = Instant::now();
        let jc = JaynesCummings::new(p).unwrap();
        let target = -(0.5 * p.thermal_exponent()).tanh();
        let mut worst: f64 = 0.0;
        let mut checked = 0;
        for t in linspace(0.0, t_max, 2001) {
            let r = jc.channel_rates(t);
            if r.divergent || r.sample.gamma_plus.abs() <= 1e-6 {
                continue;
            }
            checked += 1;
            worst = worst.max((r.sample.gamma_minus / r.sample.gamma_plus - target).abs());
        }
        let elapsed = start.elapsed();
        report(
            &format!("JC constant ratio gamma_-/gamma_+ ({name})"),
            worst < 1e-8 && checked > 0 && elapsed < Duration::from_secs(10),
            format!("max deviation {worst:e} over {checked} points, {elapsed:.2?}"),
        );
    }
    let cold = -(0.6f64).tanh();
    report(
        "JC cold-mode fixed point",
        format!("{cold:.3}") == "-0.537",
        format!("-tanh(0.6) = {cold:.5}"),
    );
}

#[test]
fn jc_derivative_identity() {
    for (name, p, t_max) in regimes() {
        let jc = JaynesCummings::new(p).unwrap();
        let e = (-p.thermal_exponent()).exp();
        let worst = linspace(0.0, t_max, 2001)
            .into_iter()
            .map(|t| {
                let c = jc.coefficients(t);
                (c.alpha_dot - e * c.beta_dot).abs() / c.beta_dot.abs().max(1.0)
            })
            .fold(0.0, f64::max);
        report(
            &format!("JC derivative identity ({name})"),
            worst <= 1e-10,
            format!("max |a' - e^-x b'| / max(1, |b'|) = {worst:e}"),
        );
    }
}

#[test]
fn jc_short_time_tangency() {
    for (name, p, _) in regimes() {
        let fit = short_time_order(&p, &log_window(1e-3, 1e-2, 12));
        let (pass, detail) = match fit {
            Ok(f) => (f.exponent >= 2.7, format!("exponent {:.4}, residual {:.2e}", f.exponent, f.residual)),
            Err(e) => (false, e.to_string()),
        };
        report(&format!("JC short-time order of Gamma - gamma_+/2 ({name})"), pass, detail);
    }
}

#[test]
fn jc_weak_coupling_divergence() {
    let p = JCParams::weak_coupling();
    let jc = JaynesCummings::new(p).unwrap();
    for (lo, hi) in [(0.3, 0.5), (1.3, 1.5)] {
        let (t0, t1) = (lo / p.g, hi / p.g);
        let roots = jc.denominator_roots(t0, t1, 2001);
        let hit = roots.iter().find_map(|&t| {
            let r = jc.channel_rates(t);
            (r.divergent || r.sample.gamma_plus.abs() > 100.0 * p.omega_a).then_some((t, r))
        });
        let detail = match hit {
            Some((t, r)) => format!(
                "g t = {:.4}: divergent flag {}, gamma_+ = {}",
                p.g * t,
                r.divergent,
                r.sample.gamma_plus
            ),
            None => format!("no divergence found (roots {roots:?})"),
        };
        report(&format!("JC weak-coupling divergence in g t in [{lo}, {hi}]"), hit.is_some(), detail);
    }
}

#[test]
fn map_identity_and_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ident = integrate_rates(&EternalNm, 0.0, 1e-3).unwrap();
    let mut identity_ok = ident == IntegratedRates::identity();
    let mut worst_matrix: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    for _ in 0..10_000 {
        let q = HermitianOp2::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        identity_ok &= apply_map(&IntegratedRates::identity(), &q) == q;
        let ir = IntegratedRates {
            t: 1.0,
            gamma_plus: rng.gen_range(-1.0..4.0),
            gamma_minus: rng.gen_range(-3.0..3.0),
            decoherence: rng.gen_range(-1.0..4.0),
            omega: rng.gen_range(-10.0..10.0),
            s: rng.gen_range(-1.0..1.0),
        };
        let bloch = apply_map(&ir, &q);
        let via_matrix = apply_matrix(&map_matrix(&ir), &vectorize(&q));
        let expected = vectorize(&bloch);
        let scale = expected.iter().map(|c| c.norm()).fold(1.0, f64::max);
        for (a, b) in via_matrix.iter().zip(&expected) {
            worst_matrix = worst_matrix.max((a - b).norm() / scale);
        }
        let trace_err = (bloch.trace - q.trace).abs() / (q.trace.abs() * f64::EPSILON).max(f64::MIN_POSITIVE);
        worst_trace = worst_trace.max(trace_err);
    }
    report(
        "map identity and matrix consistency (1e4 cases)",
        identity_ok && worst_matrix <= 1e-12 && worst_trace <= 1.0,
        format!("identity exact: {identity_ok}, matrix deviation {worst_matrix:e}, trace error {worst_trace} ulp"),
    );
}

#[test]
fn region_map_inclusions() {
    let (gr, gpr, res) = ((-0.5, 2.5), (-0.5, 3.0), (400, 400));
    for gm in [0.0, 0.5, 1.0] {
        let cells = region_map(gm, gr, gpr, res, DEFAULT_TOL);
        let violations = cells
            .iter()
            .filter(|c| (c.verdict.cp && !c.verdict.p) || (c.verdict.p && !c.verdict.blp))
            .count();
        let mut extra = 0;
        let mut detail = String::new();
        if gm == 1.0 {
            extra = cells
                .iter()
                .filter(|c| {
                    let (g, gp) = (c.decoherence, c.gamma_plus);
                    c.region() == Region::POnly && 2.0 * g <= gp && 4.0 * g * (gp - g) - gm * gm < -1e-12
                })
                .count();
            detail = format!(", {extra} P_only cells below the coherence curve");
        }
        if gm == 0.0 {
            extra = cells
                .iter()
                .filter(|c| !c.verdict.boundary)
                .filter(|c| {
                    let (g, gp) = (c.decoherence, c.gamma_plus);
                    (c.region() == Region::POnly) != (g >= 0.0 && 2.0 * g < gp)
                })
                .count();
            detail = format!(", {extra} cells disagree with P_only = {{0 <= 2 Gamma < gamma_+}}");
        }
        report(
            &format!("region map inclusions, gamma_- = {gm} (400 x 400)"),
            violations == 0 && extra == 0,
            format!("{violations} inclusion violations{detail}"),
        );
    }
    let on_curve = (1..200).all(|k| {
        let g = k as f64 * 0.0025;
        let gp = g + 1.0 / (4.0 * g);
        let rs = RateSample::new(0.0, gp, 1.0, g, 0.0);
        let m = p_margin_rates(&rs);
        m.population < 0.0 || verdict(&rs, DEFAULT_TOL).p
    });
    report("points on the coherence curve classify as P", on_curve, "gamma_- = 1");
}
