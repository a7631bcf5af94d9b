use crate::error::{Error, Result};
use crate::quad;
use crate::special::{hyp1f1, ln_gamma, pochhammer, SeriesControl};

/// Above this ₁F₁ argument the PDF switches to the large-argument expansion,
/// evaluated in log space to avoid overflowing `eˣ`.
const ASYMPTOTIC_ARG: f64 = 500.0;
/// Largest integer `m` handled by the finite-sum PDF/CDF.
const MAX_FINITE_M: u32 = 200;

const CDF_ABS_TOL: f64 = 1e-12;
const CDF_REL_TOL: f64 = 1e-12;

/// Shadowed-Rician power-gain distribution.
///
/// `m` is the Nakagami severity of the line-of-sight amplitude, `2·b0` the
/// average scattered power and `omega` the average line-of-sight power. The
/// power gain `G = |h|²` has density
///
/// ```text
/// f(y) = α·exp(−β·y)·₁F₁(m; 1; δ·y),   y ≥ 0
/// α = (2b0·m / (2b0·m + Ω))^m / (2b0),  β = 1/(2b0),  δ = Ω / (2b0·(2b0·m + Ω))
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrFading {
    m: f64,
    b0: f64,
    omega: f64,
}

impl SrFading {
    pub fn new(m: f64, b0: f64, omega: f64) -> Result<Self> {
        if !(m >= 0.5 && m.is_finite()) {
            return Err(Error::invalid("m", format!("{m} < 0.5")));
        }
        if !(b0 > 0.0 && b0.is_finite()) {
            return Err(Error::invalid("b0", format!("{b0} must be positive")));
        }
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(Error::invalid("omega", format!("{omega} must be >= 0")));
        }
        Ok(Self { m, b0, omega })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    fn two_b0_m(&self) -> f64 {
        2.0 * self.b0 * self.m
    }

    pub fn alpha(&self) -> f64 {
        let k = self.two_b0_m();
        (k / (k + self.omega)).powf(self.m) / (2.0 * self.b0)
    }

    pub fn beta(&self) -> f64 {
        1.0 / (2.0 * self.b0)
    }

    pub fn delta(&self) -> f64 {
        self.omega / (2.0 * self.b0 * (self.two_b0_m() + self.omega))
    }

    /// Mean power gain `2·b0 + Ω`.
    pub fn mean(&self) -> f64 {
        2.0 * self.b0 + self.omega
    }

    /// `Some(m)` when the severity is an integer small enough for the
    /// finite-sum forms.
    pub fn integer_m(&self) -> Option<u32> {
        (self.m.fract() == 0.0 && self.m <= f64::from(MAX_FINITE_M)).then_some(self.m as u32)
    }

    /// Power-gain density. Integer `m` uses the finite expansion of the
    /// hypergeometric factor; other values evaluate ₁F₁ directly.
    pub fn pdf(&self, y: f64) -> f64 {
        if !(y >= 0.0) {
            return 0.0;
        }
        match self.integer_m() {
            Some(m) => self.pdf_finite(m, y),
            None => self.pdf_kummer(y),
        }
    }

    /// Density evaluated through ₁F₁(m; 1; δy) for any `m`.
    pub fn pdf_kummer(&self, y: f64) -> f64 {
        if !(y >= 0.0) {
            return 0.0;
        }
        let x = self.delta() * y;
        if x > ASYMPTOTIC_ARG {
            let ln = self.alpha().ln() - self.beta() * y + ln_kummer_m1_large(self.m, x);
            return ln.exp();
        }
        let f = hyp1f1(self.m, 1.0, x, &SeriesControl::default())
            .expect("1F1(m;1;x) series converges for x <= 500");
        self.alpha() * (-self.beta() * y).exp() * f
    }

    // ς(k) = (−1)^k (1−m)_k δ^k / (k!)²
    fn varsigma(&self, m: u32) -> Vec<f64> {
        let delta = self.delta();
        let mut fact = 1.0;
        (0..m)
            .map(|k| {
                if k > 0 {
                    fact *= f64::from(k);
                }
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * pochhammer(1.0 - f64::from(m), k) * delta.powi(k as i32) / (fact * fact)
            })
            .collect()
    }

    fn pdf_finite(&self, m: u32, y: f64) -> f64 {
        let c = self.beta() - self.delta();
        let poly: f64 = self
            .varsigma(m)
            .iter()
            .enumerate()
            .map(|(k, s)| s * y.powi(k as i32))
            .sum();
        self.alpha() * poly * (-c * y).exp()
    }

    fn cdf_finite(&self, m: u32, x: f64) -> f64 {
        let c = self.beta() - self.delta();
        let decay = (-c * x).exp();
        let mut total = 0.0;
        for (k, s) in self.varsigma(m).iter().enumerate() {
            // Σ_p k!/p! · x^p / c^{k+1−p}
            let mut inner = 0.0;
            let mut ratio = 1.0; // k!/p!, starting at p = k
            for p in (0..=k).rev() {
                inner += ratio * x.powi(p as i32) / c.powi((k + 1 - p) as i32);
                ratio *= p as f64;
            }
            total += s * inner;
        }
        (1.0 - self.alpha() * total * decay).clamp(0.0, 1.0)
    }

    /// Power-gain CDF `Pr{G ≤ x}`. Closed form for integer `m`, adaptive
    /// quadrature of the density otherwise (head integral below the mean,
    /// complementary tail integral above it).
    pub fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        if let Some(m) = self.integer_m() {
            return self.cdf_finite(m, x);
        }
        if x <= self.mean() {
            quad::integrate(|y| self.pdf(y), 0.0, x, CDF_ABS_TOL, CDF_REL_TOL).value.clamp(0.0, 1.0)
        } else {
            (1.0 - self.tail_integral(x)).clamp(0.0, 1.0)
        }
    }

    /// `Pr{G > x}` without the cancellation of `1 − cdf(x)` in the far tail.
    pub fn survival(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 1.0;
        }
        if self.integer_m().is_none() && x > self.mean() {
            return self.tail_integral(x).clamp(0.0, 1.0);
        }
        1.0 - self.cdf(x)
    }

    fn tail_integral(&self, x: f64) -> f64 {
        quad::integrate_to_infinity(|y| self.pdf(y), x, CDF_ABS_TOL * 1e-3, CDF_REL_TOL).value
    }

    /// CDF at each point of an ascending slice, accumulating the density
    /// between neighbours instead of integrating from zero every time.
    pub fn cdf_sorted(&self, xs: &[f64]) -> Vec<f64> {
        if self.integer_m().is_some() {
            return xs.iter().map(|&x| self.cdf(x)).collect();
        }
        let mut out = Vec::with_capacity(xs.len());
        let mut prev_x = 0.0;
        let mut acc = 0.0;
        for &x in xs {
            debug_assert!(x >= prev_x, "input must be sorted");
            if x > prev_x {
                acc += quad::integrate(|y| self.pdf(y), prev_x, x, 1e-14, 1e-12).value;
                prev_x = x;
            }
            out.push(acc.clamp(0.0, 1.0));
        }
        out
    }

    /// Inverse CDF by bisection.
    pub fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        let mut hi = self.mean().max(1e-300);
        while self.cdf(hi) < p {
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
        quad::bisect(|x| self.cdf(x) - p, 0.0, hi, 1e-15 * hi)
    }

    /// `E[G·1{G ≥ x}]`.
    pub fn partial_mean_above(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        if x <= self.mean() {
            let head = quad::integrate(|y| y * self.pdf(y), 0.0, x, 1e-14, 1e-12).value;
            self.mean() - head
        } else {
            quad::integrate_to_infinity(|y| y * self.pdf(y), x, 1e-16, 1e-12).value
        }
    }

    /// `E[G | G ≥ x]`; tends to `x` when no mass remains above it.
    pub fn conditional_mean_above(&self, x: f64) -> f64 {
        let mass = self.survival(x);
        if mass <= 0.0 {
            return x;
        }
        (self.partial_mean_above(x) / mass).max(x)
    }
}

// ln ₁F₁(m; 1; x) for large x: x + (m−1)ln x − lnΓ(m) + ln Σ_k ((1−m)_k)² / (k! x^k)
fn ln_kummer_m1_large(m: f64, x: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 0..30 {
        let kf = f64::from(k);
        let next = term * (1.0 - m + kf).powi(2) / ((kf + 1.0) * x);
        if next.abs() >= term.abs() || next.abs() < 1e-17 * sum.abs() {
            break;
        }
        term = next;
        sum += term;
    }
    x + (m - 1.0) * x.ln() - ln_gamma(m) + sum.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> SrFading {
        SrFading::new(10.1, 0.126, 0.825).unwrap()
    }

    // composite Simpson on [a, b]
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(matches!(SrFading::new(0.2, 0.1, 0.1), Err(Error::InvalidParameter { name: "m", .. })));
        assert!(SrFading::new(1.0, 0.0, 0.1).is_err());
        assert!(SrFading::new(1.0, 0.1, -0.1).is_err());
    }

    #[test]
    fn derived_parameters_are_ordered() {
        let f = reference();
        assert!(f.alpha() > 0.0 && f.beta() > f.delta() && f.delta() >= 0.0);
    }

    #[test]
    fn exponential_special_case() {
        let f = SrFading::new(1.0, 0.5, 0.0).unwrap();
        assert!((f.pdf(0.0) - 1.0).abs() < 1e-15);
        for &y in &[0.3, 1.0, 4.0] {
            assert!((f.pdf(y) - (-y).exp()).abs() < 1e-14);
            assert!((f.cdf(y) - (1.0 - (-y).exp())).abs() < 1e-14);
        }
    }

    #[test]
    fn reference_density_reference_values() {
        let f = reference();
        // 50-digit reference values
        assert!((f.pdf(1.0) / 0.541_706_095_114_138_7 - 1.0).abs() < 1e-12);
        assert!((f.pdf(0.3) / 0.532_451_014_218_390_9 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reference_cdf_reference_values() {
        let f = reference();
        let cases = [
            (0.09, 0.026_193_260_355_649_332),
            (0.1256, 0.039_224_685_634_544_417),
            (0.5, 0.236_331_824_513_235_98),
            (1.0, 0.536_291_848_162_447_4),
            (2.0, 0.886_528_618_645_354_1),
        ];
        for (x, want) in cases {
            assert!((f.cdf(x) - want).abs() < 1e-10, "x={x}: {}", f.cdf(x));
        }
    }

    #[test]
    fn integer_closed_form_matches_quadrature() {
        let f = SrFading::new(2.0, 0.2, 0.5).unwrap();
        let closed = f.cdf(0.7);
        let oracle = simpson(|y| f.pdf_kummer(y), 0.0, 0.7, 20_000);
        assert!((closed - oracle).abs() < 1e-8, "{closed} vs {oracle}");
        assert!((closed - 0.518_263_618_025_867_2).abs() < 1e-12);
    }

    #[test]
    fn finite_and_kummer_densities_agree() {
        for m in [1.0, 2.0, 5.0, 12.0] {
            let f = SrFading::new(m, 0.15, 0.9).unwrap();
            for i in 0..50 {
                let y = 0.1 * i as f64;
                let a = f.pdf(y);
                let b = f.pdf_kummer(y);
                assert!((a - b).abs() <= 1e-11 * b.max(1e-300), "m={m} y={y}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn cdf_limits_and_normalization() {
        for f in [reference(), SrFading::new(3.0, 0.2, 1.5).unwrap(), SrFading::new(0.7, 0.3, 0.4).unwrap()] {
            assert_eq!(f.cdf(0.0), 0.0);
            assert!((f.cdf(1e3) - 1.0).abs() < 1e-8);
            assert_eq!(f.cdf(f64::INFINITY), 1.0);
            let head = quad::integrate(|y| f.pdf(y), 0.0, f.mean(), 1e-13, 1e-13).value;
            let tail = quad::integrate_to_infinity(|y| f.pdf(y), f.mean(), 1e-13, 1e-13).value;
            assert!((head + tail - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn large_argument_density_is_finite() {
        let f = SrFading::new(3.3, 0.01, 50.0).unwrap();
        let y = 30_000.0;
        let v = f.pdf(y);
        assert!(v.is_finite() && v >= 0.0);
        // continuity across the switch-over
        let x_switch = ASYMPTOTIC_ARG / f.delta();
        let below = f.pdf_kummer(x_switch * (1.0 - 1e-9));
        let above = f.pdf_kummer(x_switch * (1.0 + 1e-9));
        assert!((below / above - 1.0).abs() < 1e-6, "{below} {above}");
    }

    #[test]
    fn sorted_cdf_matches_pointwise() {
        let f = reference();
        let xs: Vec<f64> = (1..200).map(|i| 0.02 * i as f64).collect();
        let fast = f.cdf_sorted(&xs);
        for (x, v) in xs.iter().zip(fast) {
            assert!((v - f.cdf(*x)).abs() < 1e-9);
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        let f = reference();
        for p in [0.01, 0.3, 0.5, 0.9, 0.999] {
            assert!((f.cdf(f.quantile(p)) - p).abs() < 1e-10);
        }
    }

    #[test]
    fn conditional_mean() {
        let f = SrFading::new(1.0, 0.5, 0.0).unwrap();
        // memoryless: E[G | G >= x] = x + 1 for the unit exponential
        for x in [0.0, 0.5, 2.0] {
            assert!((f.conditional_mean_above(x) - (x + 1.0)).abs() < 1e-9);
        }
        let g = reference();
        assert!((g.partial_mean_above(0.0) - g.mean()).abs() < 1e-12);
    }
}
