use std::f64::consts::PI;

use crate::channel::SrFading;
use crate::error::{Error, Result};
use crate::special::{bessel_i_scaled, hyp1f1, SeriesControl};

/// Doppler and angle-of-arrival description of the scattered component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerSpec {
    /// Maximum Doppler shift of the scattered component, Hz.
    pub f_scatter_max: f64,
    /// Mean angle of arrival `φ̄`, radians.
    pub mean_aoa: f64,
    /// Von Mises concentration `κ` of the angle of arrival.
    pub aoa_width: f64,
}

impl DopplerSpec {
    pub fn new(f_scatter_max: f64, mean_aoa: f64, aoa_width: f64) -> Result<Self> {
        if !(f_scatter_max > 0.0 && f_scatter_max.is_finite()) {
            return Err(Error::invalid("f_scatter_max", format!("{f_scatter_max} must be positive")));
        }
        if !mean_aoa.is_finite() {
            return Err(Error::invalid("mean_aoa", "must be finite"));
        }
        if !(aoa_width >= 0.0 && aoa_width.is_finite()) {
            return Err(Error::invalid("aoa_width", format!("{aoa_width} must be >= 0")));
        }
        Ok(Self { f_scatter_max, mean_aoa, aoa_width })
    }

    // I1(κ)/I0(κ) and I2(κ)/I0(κ); scaled forms keep large κ finite
    fn bessel_ratios(&self) -> (f64, f64) {
        let i0 = bessel_i_scaled(0, self.aoa_width).expect("order 0");
        let i1 = bessel_i_scaled(1, self.aoa_width).expect("order 1");
        let i2 = bessel_i_scaled(2, self.aoa_width).expect("order 2");
        (i1 / i0, i2 / i0)
    }

    pub fn b1(&self, b0: f64) -> f64 {
        let (r1, _) = self.bessel_ratios();
        b0 * 2.0 * PI * self.f_scatter_max * self.mean_aoa.cos() * r1
    }

    pub fn b2(&self, b0: f64) -> f64 {
        let (_, r2) = self.bessel_ratios();
        b0 * 2.0 * PI * PI * self.f_scatter_max.powi(2) * (1.0 + self.mean_aoa.cos() * r2)
    }
}

/// Power applied to `b1²/(b0(b0·b2 − b1²))` inside each `ξ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum XiExponent {
    /// Constant exponent 2.
    #[default]
    Squared,
    /// Exponent equal to the term index `n`.
    Order,
}

/// Level-crossing rate of the envelope at amplitude `r_th`, crossings/s.
pub fn lcr(fading: &SrFading, dop: &DopplerSpec, r_th: f64, ctl: &SeriesControl) -> Result<f64> {
    lcr_with_exponent(fading, dop, r_th, XiExponent::Squared, ctl)
}

pub fn lcr_with_exponent(
    fading: &SrFading,
    dop: &DopplerSpec,
    r_th: f64,
    exponent: XiExponent,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(r_th > 0.0 && r_th.is_finite()) {
        return Err(Error::invalid("r_th", format!("{r_th} must be positive")));
    }
    let (m, b0, omega) = (fading.m(), fading.b0(), fading.omega());
    let b1 = dop.b1(b0);
    let b2 = dop.b2(b0);
    let spread = b0 * b2 - b1 * b1;
    if !(spread > 0.0) {
        return Err(Error::invalid("doppler", "b0*b2 - b1^2 must be positive"));
    }
    let k = 2.0 * b0 * m;
    // 1/Γ(m) is absorbed into the ξ_n coefficients below
    let ln_pref = -0.5 * (2.0 * PI).ln() + m * (k / (k + omega)).ln() + 0.5 * (spread / b0).ln()
        + (r_th / b0).ln()
        - r_th * r_th / b0;

    let c = b1 * b1 / (b0 * spread);
    let q = 2.0 * b0 * omega / (k + omega);
    let z = omega * r_th * r_th / (2.0 * b0 * (k + omega));
    let c_pow = |n: usize| match exponent {
        XiExponent::Squared => c * c,
        XiExponent::Order => c.powi(n as i32),
    };

    // ξ_n / Γ(m) = (m)_n q^n / (2^n n!) · C^e · ₁F₁(n+m; n+1; z)
    let mut coef = 1.0;
    let xi = |n: usize, coef: f64| -> Result<f64> {
        let f = hyp1f1(n as f64 + m, n as f64 + 1.0, z, ctl)?;
        Ok(coef * c_pow(n) * f)
    };
    let mut xi_n = xi(0, coef)?;
    let mut alt = 1.0; // (1/2)_n (−1)^n / n!
    let mut sum = 0.0;
    let mut prev_mag = f64::INFINITY;
    for n in 0..ctl.max_terms() {
        let nf = n as f64;
        let coef_next = coef * (m + nf) * q / (2.0 * (nf + 1.0));
        let xi_next = xi(n + 1, coef_next)?;
        let term = alt * (xi_n + xi_next);
        sum += term;
        let mag = term.abs();
        if n > 0 && mag <= ctl.rel_tol() * sum.abs() && mag <= prev_mag {
            return Ok((ln_pref.exp() * sum).max(0.0));
        }
        prev_mag = mag;
        alt *= -(0.5 + nf) / (nf + 1.0);
        coef = coef_next;
        xi_n = xi_next;
        if sum == 0.0 && coef == 0.0 {
            return Ok(0.0);
        }
    }
    Err(Error::NonConvergent { what: "level-crossing series", terms: ctl.max_terms() })
}

/// Average fade duration below `r_th`: `F(r_th²) / LCR(r_th)`, seconds.
pub fn afd(fading: &SrFading, dop: &DopplerSpec, r_th: f64) -> Result<f64> {
    afd_with_exponent(fading, dop, r_th, XiExponent::Squared, &SeriesControl::default())
}

pub fn afd_with_exponent(
    fading: &SrFading,
    dop: &DopplerSpec,
    r_th: f64,
    exponent: XiExponent,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(r_th > 0.0) {
        return Err(Error::ZeroCrossingRate { r_th });
    }
    let rate = lcr_with_exponent(fading, dop, r_th, exponent, ctl)?;
    let below = fading.cdf(r_th * r_th);
    if !(rate > 0.0) || !(below > 0.0) {
        return Err(Error::ZeroCrossingRate { r_th });
    }
    Ok(below / rate)
}
