//! Globally adaptive Gauss–Kronrod (7/15) quadrature and bracketing root
//! search. Internal numerical plumbing for the CDF, conditional moments and
//! the direct time-average routes.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4_000;

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` until the summed error estimate drops below
/// `max(abs_tol, rel_tol·|I|)` or the interval budget is spent. The best
/// estimate is returned either way.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Estimate {
    if a == b {
        return Estimate { value: 0.0, error: 0.0 };
    }
    let (value, error) = kronrod(&f, a, b);
    let mut parts = vec![(a, b, value, error)];
    let mut total = value;
    let mut total_err = error;
    while total_err > abs_tol.max(rel_tol * total.abs()) && parts.len() < MAX_INTERVALS {
        let (worst, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, v, e) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval cannot be split further in floating point
            parts.push((lo, hi, v, 0.0));
            total_err -= e;
            continue;
        }
        let (v1, e1) = kronrod(&f, lo, mid);
        let (v2, e2) = kronrod(&f, mid, hi);
        total += v1 + v2 - v;
        total_err += e1 + e2 - e;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
    // re-sum to shed the drift of the running totals
    let value = parts.iter().map(|p| p.2).sum();
    let error = parts.iter().map(|p| p.3).sum();
    Estimate { value, error }
}

/// Integrates `f` over `[a, ∞)` through the map `y = a + s/(1−s)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, abs_tol: f64, rel_tol: f64) -> Estimate {
    integrate(
        |s| {
            let one_minus = 1.0 - s;
            let y = a + s / one_minus;
            let v = f(y) / (one_minus * one_minus);
            if v.is_finite() { v } else { 0.0 }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}

/// Integrates over consecutive breakpoints, so that known kinks or jumps
/// of the integrand fall on panel boundaries.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, points: &[f64], abs_tol: f64, rel_tol: f64) -> Estimate {
    let panels = points.len().saturating_sub(1).max(1) as f64;
    points.windows(2).fold(Estimate { value: 0.0, error: 0.0 }, |acc, w| {
        let e = integrate(&f, w[0], w[1], abs_tol / panels, rel_tol);
        Estimate { value: acc.value + e.value, error: acc.error + e.error }
    })
}

/// Bisection for the root of a monotone function on `[lo, hi]`, where
/// `f(lo)` and `f(hi)` have opposite signs.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= x_tol || mid <= lo || mid >= hi {
            return mid;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
