//! Dense complex linear algebra and sphere optimization.
//!
//! Everything here is deterministic: power iteration starts from the
//! normalized all-ones vector and sphere sampling uses a Halton sequence.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::h2space::Poly;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const NORM_TOL: f64 = 1e-10;
pub const NORM_MAXITER: usize = 3000;
pub const PSD_SLACK: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Above this side length the eigendecomposition fallback is skipped.
pub const EIGEN_FALLBACK_MAX_SIDE: usize = 1500;
pub const SPHERE_STEP_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    PowerIteration,
    Eigendecomposition,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct NormResult {
    pub value: f64,
    pub iterations: usize,
    /// Relative eigen-residual `‖M^*M v − λ v‖ / λ` of the returned estimate.
    pub residual: f64,
    pub converged: bool,
    pub method: NormMethod,
}

/// Largest singular value of `m`.
///
/// Power iteration on `M^*M`; if it has not reached relative residual `tol`
/// after `maxiter` steps and the smaller side is at most
/// [`EIGEN_FALLBACK_MAX_SIDE`], the Gram matrix is diagonalized instead.
pub fn operator_norm(m: &CMatrix, tol: f64, maxiter: usize) -> NormResult {
    assert!(tol > 0.0, "tolerance must be positive");
    if m.is_empty() {
        return NormResult {
            value: 0.0,
            iterations: 0,
            residual: 0.0,
            converged: true,
            method: NormMethod::PowerIteration,
        };
    }
    let n = m.ncols();
    let mut v = CVector::from_element(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < maxiter {
        iterations += 1;
        let w = m * &v;
        let u = m.ad_mul(&w);
        lambda = w.norm_squared();
        let unorm = u.norm();
        if lambda == 0.0 || unorm == 0.0 {
            residual = if m.iter().all(|z| *z == Complex64::default()) {
                0.0
            } else {
                f64::INFINITY
            };
            break;
        }
        residual = (&u - &v * Complex64::new(lambda, 0.0)).norm() / lambda;
        if residual <= tol {
            break;
        }
        v = u / Complex64::new(unorm, 0.0);
    }
    if residual <= tol {
        return NormResult {
            value: lambda.sqrt(),
            iterations,
            residual,
            converged: true,
            method: NormMethod::PowerIteration,
        };
    }
    if m.nrows().min(m.ncols()) <= EIGEN_FALLBACK_MAX_SIDE {
        let gram = if m.nrows() < m.ncols() {
            m * m.adjoint()
        } else {
            m.ad_mul(m)
        };
        let top = hermitian_eigenvalues(&gram)
            .into_iter()
            .fold(0.0f64, f64::max);
        return NormResult {
            value: top.max(0.0).sqrt(),
            iterations,
            residual: 0.0,
            converged: true,
            method: NormMethod::Eigendecomposition,
        };
    }
    NormResult {
        value: lambda.sqrt(),
        iterations,
        residual,
        converged: false,
        method: NormMethod::PowerIteration,
    }
}

/// [`operator_norm`] with the default tolerance and iteration cap.
pub fn norm(m: &CMatrix) -> f64 {
    operator_norm(m, NORM_TOL, NORM_MAXITER).value
}

/// Largest entry-wise modulus of `M − M^*`.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_hermitian(m: &CMatrix) -> Result<CMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            actual: m.ncols(),
        });
    }
    let residual = hermitian_residual(m);
    if residual > HERMITIAN_TOL {
        return Err(Error::NonHermitian { residual });
    }
    Ok((m + m.adjoint()) * Complex64::new(0.5, 0.0))
}

fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    sym.symmetric_eigenvalues().iter().copied().collect()
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors (columns).
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let sym = check_hermitian(m)?;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Ok((values, vectors))
}

pub fn min_eigenvalue_hermitian(m: &CMatrix) -> Result<f64> {
    let sym = check_hermitian(m)?;
    if sym.is_empty() {
        return Err(Error::InvalidArgument("empty matrix has no eigenvalues".into()));
    }
    Ok(hermitian_eigenvalues(&sym)
        .into_iter()
        .fold(f64::INFINITY, f64::min))
}

pub fn is_psd(m: &CMatrix, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue_hermitian(m)? >= -tol)
}

/// Square root of a positive semidefinite matrix; eigenvalues in `[-1e-12, 0)` are clamped.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(m)?;
    if let Some(&lo) = values.first() {
        if lo < -1e-12 {
            return Err(Error::InvalidArgument(format!(
                "matrix is not positive semidefinite (eigenvalue {lo:.3e})"
            )));
        }
    }
    let roots = DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0)),
    );
    Ok(&vectors * CMatrix::from_diagonal(&roots) * vectors.adjoint())
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Best value of `|f|` over the unit sphere found by Halton sampling followed
/// by projected gradient ascent from the best samples.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereSup {
    pub value: f64,
    pub point: Vec<Complex64>,
}

/// Lower bound for `sup_{‖z‖ ≤ 1} |f(z)|` (attained on the sphere).
pub fn sphere_sup(f: &Poly, budget: usize) -> SphereSup {
    assert!(budget >= 1, "budget must be at least 1");
    let d = f.dim();
    let samples = halton_sphere(d, budget);
    let mut scored: Vec<(f64, Vec<Complex64>)> = samples
        .into_iter()
        .map(|z| (f.evaluate(&z).norm(), z))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let starts = scored.len().min(16);

    let mut best = SphereSup {
        value: scored[0].0,
        point: scored[0].1.clone(),
    };
    for (_, z) in scored.into_iter().take(starts) {
        let (value, point) = ascend(f, z);
        if value > best.value {
            best = SphereSup { value, point };
        }
    }
    best
}

fn ascend(f: &Poly, mut z: Vec<Complex64>) -> (f64, Vec<Complex64>) {
    let mut value = f.evaluate(&z).norm_sqr();
    let mut step = 0.5;
    for _ in 0..5000 {
        if step < SPHERE_STEP_TOL {
            break;
        }
        let fz = f.evaluate(&z);
        let grad = f.gradient(&z);
        let candidate: Vec<Complex64> = z
            .iter()
            .zip(&grad)
            .map(|(zi, gi)| zi + gi.conj() * fz * (2.0 * step))
            .collect();
        let candidate = normalize(candidate);
        let cand_value = f.evaluate(&candidate).norm_sqr();
        if cand_value > value {
            z = candidate;
            value = cand_value;
            step *= 1.5;
        } else {
            step *= 0.5;
        }
    }
    (value.sqrt(), z)
}

fn normalize(z: Vec<Complex64>) -> Vec<Complex64> {
    let n = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 {
        return z;
    }
    z.into_iter().map(|c| c / n).collect()
}

const PRIMES: [u64; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

/// `count` deterministic points on the unit sphere of `ℂ^d`.
///
/// A Halton point in `(0,1)^{2d}` is pushed through the inverse normal CDF and
/// normalized.
pub fn halton_sphere(d: usize, count: usize) -> Vec<Vec<Complex64>> {
    assert!(2 * d <= PRIMES.len(), "dimension too large for Halton bases");
    let normal = Normal::standard();
    let mut out = Vec::with_capacity(count);
    let mut i = 1u64;
    while out.len() < count {
        let coords: Vec<f64> = (0..2 * d)
            .map(|k| normal.inverse_cdf(radical_inverse(i, PRIMES[k])))
            .collect();
        i += 1;
        let z: Vec<Complex64> = coords
            .chunks(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            continue;
        }
        out.push(normalize(z));
    }
    out
}
