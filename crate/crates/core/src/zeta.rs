//! Partial traces of `(𝟙 + N)^{-p}` on the symmetric Fock space, where `N` is
//! the number operator: `Σ_{n≥0} dim(sym^n ℂ^d) · (n + 1)^{-p}`.
//!
//! The degree-`n` dimension grows like `n^{d-1}/(d-1)!`, so the trace is
//! finite exactly when `p > d`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiindex::dim_symmetric_u128;

/// Partial sums beyond this many terms are refused.
pub const MAX_TERMS: usize = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Convergent,
    Divergent,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceReport {
    pub d: usize,
    pub p: f64,
    #[serde(rename = "M")]
    pub terms: usize,
    pub partial_sum: f64,
    /// `∫_M^∞ x^{d-1-p} dx / (d-1)!`; `None` unless `p > d`.
    pub tail_bound: Option<f64>,
    /// A tail bound that also absorbs the lower-order terms of the dimension; `None` unless `p > d`.
    pub rigorous_tail_bound: Option<f64>,
    pub verdict: Verdict,
    /// `p == d`: divergent, but only logarithmically.
    pub boundary_case: bool,
    /// `p - d < 1`: partial sums approach the limit slower than `1/M`.
    pub slow_convergence: bool,
}

/// `Σ_{n=0}^{M} dim(sym^n ℂ^d) / (n + 1)^p` with compensated summation.
pub fn zeta_partial(d: usize, p: f64, terms: usize) -> Result<f64> {
    check(d, p, terms)?;
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for n in 0..=terms {
        let dim = dim_symmetric_u128(d, n).ok_or(Error::ResourceLimit {
            what: "symmetric dimension",
            requested: n as u128,
            limit: u128::MAX,
        })? as f64;
        let term = dim * ((n + 1) as f64).powf(-p) - carry;
        let next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    Ok(sum)
}

fn check(d: usize, p: f64, terms: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::InvalidArgument(format!("exponent p = {p} must be positive")));
    }
    if terms > MAX_TERMS {
        return Err(Error::ResourceLimit {
            what: "zeta terms",
            requested: terms as u128,
            limit: MAX_TERMS as u128,
        });
    }
    Ok(())
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn trace_report(d: usize, p: f64, terms: usize) -> Result<TraceReport> {
    let partial_sum = zeta_partial(d, p, terms)?;
    let convergent = p > d as f64;
    let (tail_bound, rigorous_tail_bound) = if convergent {
        let m = terms as f64;
        let excess = p - d as f64;
        let fact = factorial_f64(d - 1);
        let integral = m.powf(-excess) / (excess * fact);
        // for n > M: dim(n) ≤ ((M + d)/(M + 2))^{d-1} (n + 1)^{d-1} / (d-1)!,
        // and Σ_{k ≥ M+2} k^{d-1-p} ≤ ∫_{M+1}^∞ x^{d-1-p} dx
        let stretch = ((m + d as f64) / (m + 2.0)).powi(d as i32 - 1);
        let rigorous = stretch * (m + 1.0).powf(-excess) / (excess * fact);
        (Some(integral), Some(rigorous))
    } else {
        (None, None)
    };
    Ok(TraceReport {
        d,
        p,
        terms,
        partial_sum,
        tail_bound,
        rigorous_tail_bound,
        verdict: if convergent { Verdict::Convergent } else { Verdict::Divergent },
        boundary_case: p == d as f64,
        slow_convergence: convergent && p - (d as f64) < 1.0,
    })
}
