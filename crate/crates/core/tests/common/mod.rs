#![allow(dead_code)]

use std::path::PathBuf;

use leolink::scenario::{parse_scenario, Scenario};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

pub fn load(name: &str) -> Scenario {
    parse_scenario(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

pub fn rat() -> Scenario {
    load("reference_rat.ini")
}

pub fn pat() -> Scenario {
    load("reference_pat.ini")
}

/// Applies `key = value` edits in order.
pub fn edit(scn: &Scenario, edits: &[(&str, &str)]) -> Scenario {
    edits.iter().fold(scn.clone(), |s, (k, v)| s.with_value(k, v).unwrap())
}

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    step(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}
