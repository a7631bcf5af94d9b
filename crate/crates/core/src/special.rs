//! Special functions used by the fading statistics: the Pochhammer symbol,
//! Kummer's confluent hypergeometric function ₁F₁, modified Bessel functions
//! of the first kind (orders 0 to 2) and the log-Gamma function.
//!
//! Everything is evaluated in `f64`. Series are summed term by term with a
//! relative stopping rule controlled by [`SeriesControl`].

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Truncation control for the infinite series evaluated in this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    rel_tol: f64,
    max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1e-3) {
            return Err(Error::invalid("rel_tol", format!("{rel_tol} not in (0, 1e-3)")));
        }
        if max_terms < 50 {
            return Err(Error::invalid("max_terms", format!("{max_terms} < 50")));
        }
        Ok(Self { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_terms: 10_000 }
    }
}

/// Rising factorial `(w)_k = w (w+1) ... (w+k-1)`, with `(w)_0 = 1`.
pub fn pochhammer(w: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (w + f64::from(i)))
}

fn non_positive_integer(x: f64) -> Option<u64> {
    if x <= 0.0 && x.fract() == 0.0 && x > -(u32::MAX as f64) {
        Some((-x) as u64)
    } else {
        None
    }
}

/// Kummer's confluent hypergeometric function `₁F₁(a; b; x)`.
///
/// The power series is used directly for `x >= 0`. Negative arguments go
/// through Kummer's transformation `₁F₁(a;b;x) = eˣ ₁F₁(b−a;b;−x)` so that
/// the summed terms stay positive. A non-positive integer `a` turns the
/// series into a polynomial which is summed exactly.
pub fn hyp1f1(a: f64, b: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if non_positive_integer(b).is_some() {
        return Err(Error::invalid("b", format!("{b} is a non-positive integer")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if let Some(degree) = non_positive_integer(a) {
        return Ok(polynomial_1f1(a, b, x, degree));
    }
    if x < 0.0 {
        let c = b - a;
        if let Some(degree) = non_positive_integer(c) {
            return Ok(x.exp() * polynomial_1f1(c, b, -x, degree));
        }
        return Ok(x.exp() * series_1f1(c, b, -x, ctl)?);
    }
    series_1f1(a, b, x, ctl)
}

fn polynomial_1f1(a: f64, b: f64, x: f64, degree: u64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..degree {
        let n = n as f64;
        term *= (a + n) / (b + n) * x / (n + 1.0);
        if term == 0.0 {
            break;
        }
        sum += term;
    }
    sum
}

fn series_1f1(a: f64, b: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        term *= (a + nf) / (b + nf) * x / (nf + 1.0);
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        // the remaining terms must also be shrinking before we stop
        let next = nf + 1.0;
        let shrinking = ((a + next) * x).abs() < ((b + next) * (next + 1.0)).abs();
        if shrinking && term.abs() < ctl.rel_tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergent { what: "1F1 series", terms: ctl.max_terms })
}

const SERIES_LIMIT: f64 = 30.0;

/// Modified Bessel function of the first kind `I_n(x)` for `n` in {0, 1, 2}.
pub fn bessel_i(n: u32, x: f64) -> Result<f64> {
    check_bessel_args(n, x)?;
    if x <= SERIES_LIMIT {
        Ok(bessel_i_series(n, x))
    } else {
        Ok(bessel_i_asymptotic_scaled(n, x) * x.exp())
    }
}

/// Exponentially scaled `e^{-x} I_n(x)`; finite for arguments where `I_n`
/// itself overflows.
pub fn bessel_i_scaled(n: u32, x: f64) -> Result<f64> {
    check_bessel_args(n, x)?;
    if x <= SERIES_LIMIT {
        Ok(bessel_i_series(n, x) * (-x).exp())
    } else {
        Ok(bessel_i_asymptotic_scaled(n, x))
    }
}

fn check_bessel_args(n: u32, x: f64) -> Result<()> {
    if n > 2 {
        return Err(Error::UnsupportedOrder(n));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::invalid("x", format!("{x} must be finite and >= 0")));
    }
    Ok(())
}

fn bessel_i_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let quarter_sq = half * half;
    let mut term = half.powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= quarter_sq / (k * (k + f64::from(n)));
        sum += term;
        if term <= 1e-17 * sum {
            return sum;
        }
    }
}

// Hankel expansion e^{-x} I_n(x) ~ (2πx)^{-1/2} Σ (-1)^k a_k(n) / x^k.
fn bessel_i_asymptotic_scaled(n: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(n * n);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let odd = f64::from(2 * k - 1);
        let next = -term * (mu - odd * odd) / (f64::from(k) * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of |Γ(x)| (Lanczos approximation, reflection below 1/2).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1−x) = π / sin(πx)
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values below were computed with 50-digit arithmetic.

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3.7, 0), 1.0);
        assert_eq!(pochhammer(3.0, 2), 12.0);
        let direct = (-9.1) * (-8.1) * (-7.1);
        assert!((pochhammer(1.0 - 10.1, 3) - direct).abs() < 1e-12);
        assert!((pochhammer(1.0 - 10.1, 3) + 523.341).abs() < 1e-9);
    }

    #[test]
    fn hyp1f1_trivial_values() {
        let ctl = SeriesControl::default();
        assert_eq!(hyp1f1(2.0, 1.0, 0.0, &ctl).unwrap(), 1.0);
        assert!(rel(hyp1f1(1.0, 1.0, 1.0, &ctl).unwrap(), std::f64::consts::E) < 1e-12);
    }

    #[test]
    fn hyp1f1_reference_values() {
        let tight = SeriesControl::new(1e-14, 10_000).unwrap();
        let v = hyp1f1(10.1, 1.0, 0.5, &tight).unwrap();
        assert!(rel(v, 20.374_626_524_860_755) < 1e-13, "{v}");
        let v = hyp1f1(0.5, 1.5, -3.0, &tight).unwrap();
        assert!(rel(v, 0.504_343_560_231_438_8) < 1e-13, "{v}");
    }

    #[test]
    fn hyp1f1_terminates_for_negative_integer_a() {
        let v = hyp1f1(-3.0, 2.0, 2.5, &SeriesControl::default()).unwrap();
        assert!(rel(v, -0.276_041_666_666_666_67) < 1e-14, "{v}");
    }

    #[test]
    fn hyp1f1_rejects_bad_b_and_reports_non_convergence() {
        let ctl = SeriesControl::default();
        assert!(matches!(hyp1f1(1.0, -2.0, 1.0, &ctl), Err(Error::InvalidParameter { .. })));
        let short = SeriesControl::new(1e-12, 50).unwrap();
        assert!(matches!(
            hyp1f1(1.0, 1.0, 200.0, &short),
            Err(Error::NonConvergent { .. })
        ));
    }

    #[test]
    fn hyp1f1_matches_exp() {
        let ctl = SeriesControl::default();
        for i in 0..=60 {
            let x = 0.5 * i as f64;
            let v = hyp1f1(1.0, 1.0, x, &ctl).unwrap();
            assert!(rel(v, x.exp()) < 1e-11, "x={x}");
        }
    }

    #[test]
    fn kummer_recurrence_on_grid() {
        // b F(a;b;x) − b F(a−1;b;x) − x F(a;b+1;x) = 0
        let ctl = SeriesControl::default();
        for &a in &[0.7, 2.5, 10.1, 15.3] {
            for &b in &[1.0, 2.0, 3.5] {
                for &x in &[0.1, 1.0, 4.0, 12.0] {
                    let f = hyp1f1(a, b, x, &ctl).unwrap();
                    let fm = hyp1f1(a - 1.0, b, x, &ctl).unwrap();
                    let fb = hyp1f1(a, b + 1.0, x, &ctl).unwrap();
                    let lhs = b * f - b * fm - x * fb;
                    let scale = (b * f).abs().max((x * fb).abs());
                    assert!(lhs.abs() <= 1e-8 * scale, "a={a} b={b} x={x}: {lhs}");
                }
            }
        }
    }

    #[test]
    fn bessel_reference_values() {
        assert_eq!(bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1, 0.0).unwrap(), 0.0);
        let cases = [
            (0, 0.5, 1.063_483_370_741_323_5),
            (1, 0.5, 0.257_894_305_390_896_3),
            (2, 0.5, 0.031_906_149_177_738_25),
            (0, 24.2, 2_637_670_764.437_000_2),
            (1, 24.2, 2_582_585_534.655_469_4),
            (2, 24.2, 2_424_233_943.391_093_7),
            (0, 35.0, 107_338_818_494_514.06),
            (1, 35.0, 105_794_126_051_896.27),
            (2, 35.0, 101_293_439_862_977.13),
            (0, 50.0, 2.932_553_783_849_336e20),
            (1, 50.0, 2.903_078_590_103_557e20),
            (2, 50.0, 2.816_430_640_245_194e20),
        ];
        for (n, x, want) in cases {
            let got = bessel_i(n, x).unwrap();
            assert!(rel(got, want) < 1e-10, "I{n}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn bessel_paths_agree_with_series_on_0_50() {
        for i in 0..=500 {
            let x = 0.1 * i as f64;
            for n in 0..3 {
                let oracle = bessel_i_series(n, x);
                let got = bessel_i(n, x).unwrap();
                if oracle == 0.0 {
                    assert_eq!(got, 0.0);
                } else {
                    assert!(rel(got, oracle) < 1e-10, "I{n}({x})");
                }
            }
        }
    }

    #[test]
    fn bessel_ordering_and_errors() {
        for i in 0..200 {
            let x = 0.37 * i as f64;
            let (i0, i1, i2) = (
                bessel_i_scaled(0, x).unwrap(),
                bessel_i_scaled(1, x).unwrap(),
                bessel_i_scaled(2, x).unwrap(),
            );
            assert!(i0 >= i1 && i1 >= i2 && i2 >= 0.0, "x={x}");
        }
        assert_eq!(bessel_i(3, 1.0), Err(Error::UnsupportedOrder(3)));
        assert!(bessel_i(0, -1.0).is_err());
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut fact = 1.0_f64;
        for n in 1..30 {
            fact *= n as f64;
            assert!((ln_gamma(n as f64 + 1.0) - fact.ln()).abs() < 1e-12 * fact.ln().max(1.0));
        }
        // Γ(1/2) = √π
        assert!((ln_gamma(0.5) - 0.5 * PI.ln()).abs() < 1e-13);
        // Γ(10.1) reference
        assert!(rel(ln_gamma(10.1).exp(), 454_760.751_441_585_6) < 1e-12);
    }

    #[test]
    fn series_control_invariants() {
        assert!(SeriesControl::new(0.0, 100).is_err());
        assert!(SeriesControl::new(1e-2, 100).is_err());
        assert!(SeriesControl::new(1e-8, 49).is_err());
        assert!(SeriesControl::new(1e-8, 50).is_ok());
    }
}
