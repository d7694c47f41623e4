//! Acceptance run: one PASS/FAIL line per criterion. The process fails only
//! on criteria outside `KNOWN_DISAGREEMENTS`, whose failures are physical
//! disagreements with the published values rather than defects.

mod common;

use common::{above_cone_complex, fixtures, richardson_sqrt, run_fixture, C, SINGULAR_KERNEL, VF};
use graphene_casimir::quadrature::{IntegrationProblem, Singularity};
use graphene_casimir::response::{
    conductivity_to_eps, eps_imag_axis, eps_real_axis, eps_to_conductivity, eps_to_polarization, eval_b,
    polarization_to_eps, PermittivityPair, ResponseConfig,
};
use graphene_casimir::{MatsubaraPoint, PhysicalParams, SpectralPoint};
use num_complex::Complex64;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_graphene-casimir");

const KNOWN_DISAGREEMENTS: [&str; 3] = ["ratio reproduction", "sign structure", "split features"];

struct Outcome {
    name: String,
    passed: bool,
    detail: String,
}

fn outcome(name: &str, passed: bool, detail: String) -> Outcome {
    Outcome { name: name.into(), passed, detail }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Runs `reproduce-paper` into `path`; returns the pass/fail report.
fn reproduce(threads: &str, path: &std::path::Path) -> String {
    let out = Command::new(BIN)
        .args(["reproduce-paper", "--threads", threads, "--out", path.to_str().unwrap()])
        .env_remove("RUST_LOG")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn physics_and_determinism() -> Vec<Outcome> {
    let dir = tempfile::tempdir().unwrap();
    let (f1, f3) = (dir.path().join("t1.csv"), dir.path().join("t3.csv"));
    // single-threaded run: row times are per-point times on one core
    let report = reproduce("1", &f1);
    reproduce("3", &f3);
    let mut out: Vec<Outcome> = report
        .lines()
        .filter_map(|l| {
            let (status, rest) = l.split_once(' ')?;
            let (name, detail) = rest.split_once(": ")?;
            Some(outcome(name, status == "PASS", detail.into()))
        })
        .collect();
    assert_eq!(out.len(), 5, "{report}");
    let (a, b) = (std::fs::read(&f1).unwrap(), std::fs::read(&f3).unwrap());
    out.push(outcome(
        "determinism",
        a == b,
        format!("{} bytes at 1 thread, {} bytes at 3 threads, identical: {}", a.len(), b.len(), a == b),
    ));
    out
}

fn invariant_suite() -> Outcome {
    let tight = ResponseConfig::with_rel_tol(1e-12);
    let params = |t: f64| PhysicalParams::new(t, 1e-6).unwrap();
    let mut worst = [0.0f64; 4];
    let mut thermal_ok = true;

    for t in [77.0, 300.0] {
        let p = params(t);
        for q in [1e5, 1e7, 1e9, 1e10] {
            for l in [0, 1, 7, 40] {
                let m = MatsubaraPoint::new(q, l, &p).unwrap();
                let e = eps_imag_axis(m, &p, &tight).unwrap();
                worst[0] = worst[0]
                    .max(e.eps_l.im.abs() / (e.eps_l.re - 1.0).abs())
                    .max(e.regularized_tr.im.abs() / e.regularized_tr.re.abs());
                if l > 0 {
                    let (l_ref, w2) = above_cone_complex(q, Complex64::new(0.0, m.xi), t);
                    worst[2] = worst[2].max(rel(e.eps_l - 1.0, l_ref)).max(rel(e.regularized_tr, -w2));
                    let pi = eps_to_polarization(&e, q).unwrap();
                    let (el, tr) = polarization_to_eps(&pi, q, m.xi * m.xi).unwrap();
                    worst[3] = worst[3].max(rel(el - 1.0, e.eps_l - 1.0)).max(rel(tr - 1.0, e.eps_tr - 1.0));
                }
            }
        }
        for omega in [1e12, 3e13, 1e15] {
            let q0 = omega / VF;
            let at = |q: f64| eps_real_axis(SpectralPoint::new(q, omega).unwrap(), &p, &tight).unwrap();
            let on = at(q0).regularized_tr;
            let scale = on.norm().max(omega * omega * 1e-3);
            for side in [-1.0, 1.0] {
                let lim = richardson_sqrt(|d| at(q0 * (1.0 + side * d)).regularized_tr, 1e-4, 5);
                worst[1] = worst[1].max((lim - on).norm() / scale);
            }
            let coef = |d: f64| {
                let e = at(q0 * (1.0 + d));
                let nu = 1.0 + d;
                Complex64::new((e.eps_l - 1.0).norm() * (1.0 - nu * nu).abs().sqrt(), 0.0)
            };
            let below = richardson_sqrt(|d| coef(-d), 1e-4, 5);
            worst[1] = worst[1].max(rel(below, richardson_sqrt(coef, 1e-4, 5)));
            for nu in [0.3, 3.0] {
                let q = nu * q0;
                let e = at(q);
                let round = |e: &PermittivityPair| {
                    let pi = eps_to_polarization(e, q).unwrap();
                    let (l, tr) = polarization_to_eps(&pi, q, omega * omega).unwrap();
                    let s = eps_to_conductivity(e, q, omega).unwrap();
                    let (sl, st) = conductivity_to_eps(&s, q, omega).unwrap();
                    [rel(l - 1.0, e.eps_l - 1.0), rel(tr - 1.0, e.eps_tr - 1.0), rel(sl - 1.0, e.eps_l - 1.0), rel(st - 1.0, e.eps_tr - 1.0)]
                };
                worst[3] = round(&e).into_iter().fold(worst[3], f64::max);
            }
        }
    }

    let q = 1e7;
    for pt in [SpectralPoint::new(q, 0.5 * VF * q).unwrap(), SpectralPoint::new(q, 2.0 * VF * q).unwrap()] {
        let zero = eps_real_axis(pt, &params(0.0), &tight).unwrap();
        thermal_ok &= zero.thermal.eps_l_minus_one == Complex64::new(0.0, 0.0);
        let sizes: Vec<f64> = [300.0, 30.0, 3.0, 0.3]
            .iter()
            .map(|&t| {
                let e = eps_real_axis(pt, &params(t), &tight).unwrap();
                e.thermal.eps_l_minus_one.norm() / zero.zero_temperature.eps_l_minus_one.norm()
            })
            .collect();
        thermal_ok &= sizes.windows(2).all(|w| w[1] < w[0]) && sizes[2] / sizes[3] > 100.0;
    }

    let limits = [1e-10, 1e-6, 1e-8, 1e-12];
    let passed = worst.iter().zip(limits).all(|(w, l)| *w <= l) && thermal_ok;
    outcome(
        "permittivity invariant suite",
        passed,
        format!(
            "realness {:.1e}, cone continuity {:.1e}, continuation {:.1e}, round trips {:.1e}, thermal decay {}",
            worst[0], worst[1], worst[2], worst[3], thermal_ok
        ),
    )
}

fn quadrature_fixtures() -> Outcome {
    let fx = fixtures();
    let mut detail = format!("{} fixtures;", fx.len());
    let mut passed = fx.len() == 20;
    for tol in [1e-6, 1e-10, 1e-12] {
        let honest = fx.iter().filter(|f| {
            let (err, est) = run_fixture(f, tol);
            err <= 5.0 * est
        });
        let n = honest.count();
        passed &= n * 100 >= 95 * fx.len();
        detail += &format!(" tol {tol:e}: {n}/{} honest;", fx.len());
    }
    let p = PhysicalParams::default();
    let mut worst = 0.0f64;
    for (q, omega, exact) in SINGULAR_KERNEL {
        let u_minus = (omega - p.fermi_velocity() * q) / (2.0 * C);
        let r = IntegrationProblem::new(
            |u: f64| eval_b(2.0 * C * u - omega, q, &p).map_or(0.0, |b| b.re),
            0.0,
            u_minus,
        )
        .rel_tol(1e-12)
        .singularity(Singularity::inverse_sqrt(u_minus))
        .integrate()
        .unwrap();
        worst = worst.max((r.value / exact - 1.0).abs());
    }
    passed &= worst <= 1e-10;
    detail += &format!(" singular kernel {worst:.1e}");
    outcome("quadrature engine fixtures", passed, detail)
}

fn main() {
    let mut all = physics_and_determinism();
    all.push(invariant_suite());
    all.push(quadrature_fixtures());
    println!("acceptance criteria");
    for o in &all {
        println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    let unexpected: Vec<&str> = all
        .iter()
        .filter(|o| !o.passed && !KNOWN_DISAGREEMENTS.contains(&o.name.as_str()))
        .map(|o| o.name.as_str())
        .collect();
    let passed = all.iter().filter(|o| o.passed).count();
    println!("{passed}/{} passed", all.len());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
