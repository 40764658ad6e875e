//! Norm growth of powers of `z_1 ⋯ z_d`, the divergent partial sums built
//! from them, and energy sequences.
//!
//! For `p = z_1 ⋯ z_d` the sup norm over the ball is `s = d^{-d/2}` while
//! `‖p^n‖²_{H²} = (n!)^d/(nd)!`. The ratio `R_n = ‖p^n‖_{H²} / ‖p^n‖_∞`
//! grows like `n^{(d-1)/4}`, so polynomials bounded by one on the ball can
//! have arbitrarily large multiplier norm once `d ≥ 2`.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::dilation::DContraction;
use crate::error::{Error, Result};
use crate::h2space::Poly;
use crate::multiindex::{dim_symmetric, factorial, rational_to_f64, ExactRational, MultiIndex};
use crate::numerics::norm;
use crate::shift::{build_basis, multiplication_matrix, pstar_iterate, shift_tuple, TruncatedBasis};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioGrowth {
    pub d: usize,
    pub n: usize,
    /// `R_n = sqrt(d^{nd} (n!)^d / (nd)!)`.
    pub ratio: f64,
    /// `((2π)^{d-1}/d)^{1/4} n^{(d-1)/4}`.
    pub asymptote: f64,
}

impl RatioGrowth {
    pub fn relative(&self) -> f64 {
        self.ratio / self.asymptote
    }
}

/// `R_n` through log-gamma, so large `n` does not overflow.
pub fn ratio_growth(d: usize, n: usize) -> RatioGrowth {
    assert!(d >= 1 && n >= 1, "need d >= 1 and n >= 1");
    let (df, nf) = (d as f64, n as f64);
    let log_sq = nf * df * df.ln() + df * ln_gamma(nf + 1.0) - ln_gamma(nf * df + 1.0);
    let ratio = if d == 1 { 1.0 } else { (0.5 * log_sq).exp() };
    let asymptote = ((2.0 * PI).powf(df - 1.0) / df).powf(0.25) * nf.powf((df - 1.0) / 4.0);
    RatioGrowth {
        d,
        n,
        ratio,
        asymptote,
    }
}

/// `R_n² = d^{nd} (n!)^d / (nd)!` exactly.
pub fn ratio_sq_exact(d: usize, n: usize) -> ExactRational {
    let num = BigUint::from(d).pow((n * d) as u32) * factorial(n).pow(d as u32);
    BigRational::new(BigInt::from(num), BigInt::from(factorial(n * d)))
}

/// Coefficients `c_n` supported on `S = {4, 16, 64, …}` with
/// `c_n = n^{-(d-1)/4} / Z`, where `Z` makes `Σ_{n∈S} c_n = 1`.
///
/// Then `Σ c_n ≤ 1` while `Σ c_n² n^{(d-1)/2}` diverges.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalSeries {
    pub d: usize,
    pub exponent: f64,
    pub normalization: f64,
    pub support: &'static str,
}

impl ExtremalSeries {
    pub fn powers_of_four(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(
                "the extremal series needs d >= 2".into(),
            ));
        }
        let exponent = (d as f64 - 1.0) / 4.0;
        // Σ_{j≥1} 4^{-j·exponent}
        let q = 4f64.powf(-exponent);
        Ok(ExtremalSeries {
            d,
            exponent,
            normalization: q / (1.0 - q),
            support: "powers of 4 starting at 4",
        })
    }

    pub fn in_support(n: usize) -> bool {
        n >= 4 && n.is_power_of_two() && n.trailing_zeros().is_multiple_of(2)
    }

    pub fn coefficient(&self, n: usize) -> f64 {
        if Self::in_support(n) {
            (n as f64).powf(-self.exponent) / self.normalization
        } else {
            0.0
        }
    }

    pub fn support_upto(&self, count: usize) -> Vec<usize> {
        std::iter::successors(Some(4usize), |&n| n.checked_mul(4))
            .take_while(|&n| n <= count)
            .collect()
    }

    pub fn abs_sum_upto(&self, count: usize) -> f64 {
        self.support_upto(count)
            .into_iter()
            .map(|n| self.coefficient(n))
            .sum()
    }
}

#[derive(Clone, Debug)]
pub struct ExtremalPoly {
    pub poly: Poly,
    /// `Σ_{n ≤ N} c_n² R_n²`.
    pub norm_sq: f64,
    pub abs_coeff_sum: f64,
}

/// `f_N = Σ_{n ≤ N} (c_n / s^n) (z_1 ⋯ z_d)^n` with its closed-form `‖f_N‖²_{H²}`.
pub fn build_extremal_f(series: &ExtremalSeries, count: usize) -> Result<ExtremalPoly> {
    let d = series.d;
    if d < 2 {
        return Err(Error::InvalidArgument("d must be at least 2".into()));
    }
    let inv_s = (d as f64).powf(d as f64 / 2.0);
    let mut terms = Vec::new();
    let mut norm_sq = 0.0;
    for n in series.support_upto(count) {
        let c = series.coefficient(n);
        terms.push((
            MultiIndex::new(vec![n as u32; d]),
            Complex64::new(c * inv_s.powi(n as i32), 0.0),
        ));
        norm_sq += c * c * rational_to_f64(&ratio_sq_exact(d, n));
    }
    if terms.is_empty() {
        terms.push((MultiIndex::zero(d), Complex64::new(series.coefficient(0), 0.0)));
    }
    Ok(ExtremalPoly {
        poly: Poly::from_terms(d, terms)?,
        norm_sq,
        abs_coeff_sum: series.abs_sum_upto(count),
    })
}

/// `‖M_f‖` on the truncation; at least `‖f‖_{H²}` and nondecreasing in `N`.
pub fn multiplier_lower_bound(f: &Poly, basis: &TruncatedBasis) -> Result<f64> {
    Ok(norm(multiplication_matrix(f, basis)?.matrix()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    pub d: usize,
    pub n: usize,
    /// `g_n(0) = (n+d-1)!/(n!(d-1)!)`.
    pub closed_form: f64,
    /// Degree-0 entry of `P_*^n(𝟙)` computed from shift matrices.
    pub direct: f64,
    /// Dimension of the degree-`n` symmetric tensors.
    pub bound: f64,
}

pub fn energy_shift(d: usize, n: usize) -> Result<EnergyReport> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidArgument("need d >= 1 and n >= 1".into()));
    }
    let closed = crate::shift::pstar_power_diagonal_exact(d, n, 0);
    let basis = build_basis(d, n + 2)?;
    let shifts = shift_tuple(&basis)?;
    let direct = pstar_iterate(&shifts, n)[(0, 0)].re;
    let bound = rational_to_f64(&BigRational::from_integer(BigInt::from(dim_symmetric(d, n))));
    Ok(EnergyReport {
        d,
        n,
        closed_form: rational_to_f64(&closed[0]),
        direct,
        bound,
    })
}

/// `‖Σ_{words} T_{i_1}^* ⋯ T_{i_n}^* T_{i_n} ⋯ T_{i_1}‖`, a lower bound for the
/// `n`-th energy of the operator space spanned by `T`.
pub fn energy_lower_bound(t: &DContraction, n: usize) -> f64 {
    norm(&pstar_iterate(t.matrices(), n))
}
