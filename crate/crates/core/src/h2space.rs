//! Polynomials as elements of H²_d, the symmetric Fock space realized as functions on the ball.
//!
//! The monomials `z^α` are orthogonal with `‖z^α‖² = α!/|α|!`, so the inner
//! product of two polynomials is a weighted sum over their common support.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::monomial_norm_sq;
use crate::multiindex::{factorial, rational_to_f64, ExactRational, MultiIndex};
use crate::numerics::CMatrix;
use crate::shift::{OperatorMatrix, TruncatedBasis};

/// A polynomial in `d` complex variables with finitely many nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    d: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl Poly {
    pub fn zero(d: usize) -> Self {
        assert!(d >= 1, "d must be at least 1");
        Poly {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(d: usize, c: Complex64) -> Self {
        let mut p = Poly::zero(d);
        p.add_term(MultiIndex::zero(d), c);
        p
    }

    /// The coordinate function `z_k` (0-based `k`).
    pub fn coordinate(d: usize, k: usize) -> Self {
        let mut p = Poly::zero(d);
        p.add_term(MultiIndex::unit(d, k), Complex64::new(1.0, 0.0));
        p
    }

    pub fn monomial(alpha: MultiIndex, c: Complex64) -> Self {
        let mut p = Poly::zero(alpha.dim());
        p.add_term(alpha, c);
        p
    }

    pub fn from_terms(
        d: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self> {
        let mut p = Poly::zero(d);
        for (alpha, c) in terms {
            if alpha.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: alpha.dim(),
                });
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, alpha: MultiIndex, c: Complex64) {
        let entry = self.terms.entry(alpha.clone()).or_insert(Complex64::zero());
        *entry += c;
        if *entry == Complex64::zero() {
            self.terms.remove(&alpha);
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Complex64> {
        &self.terms
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms.get(alpha).copied().unwrap_or_default()
    }

    /// The homogeneous component of degree `n`.
    pub fn homogeneous_part(&self, n: usize) -> Poly {
        Poly {
            d: self.d,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.degree() == n)
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        let mut p = Poly::zero(self.d);
        for (a, c) in &self.terms {
            p.add_term(a.clone(), c * s);
        }
        p
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.d, other.d, "dimension mismatch");
        let mut p = self.clone();
        for (a, c) in &other.terms {
            p.add_term(a.clone(), *c);
        }
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.d, other.d, "dimension mismatch");
        let mut terms: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                *terms.entry(a.add(b)).or_insert(Complex64::zero()) += x * y;
            }
        }
        terms.retain(|_, v| *v != Complex64::zero());
        Poly { d: self.d, terms }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::constant(self.d, Complex64::new(1.0, 0.0));
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `Σ_α f_α z^α`.
    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.d, "point has wrong dimension");
        self.terms
            .iter()
            .map(|(a, c)| c * monomial_value(a, z))
            .sum()
    }

    /// Holomorphic partial derivatives `∂f/∂z_k` at `z`.
    pub fn gradient(&self, z: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(z.len(), self.d, "point has wrong dimension");
        let mut grad = vec![Complex64::zero(); self.d];
        for (a, c) in &self.terms {
            for (k, g) in grad.iter_mut().enumerate() {
                if let Some(lower) = a.lowered(k) {
                    *g += c * a.get(k) as f64 * monomial_value(&lower, z);
                }
            }
        }
        grad
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| TermJson {
                    alpha: a.exponents().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Poly> {
        let raw: PolyJson = serde_json::from_str(s)?;
        Poly::try_from(raw)
    }
}

fn monomial_value(alpha: &MultiIndex, z: &[Complex64]) -> Complex64 {
    alpha
        .exponents()
        .iter()
        .zip(z)
        .fold(Complex64::new(1.0, 0.0), |acc, (&e, zi)| acc * zi.powu(e))
}

/// Wire form of a [`Poly`]: `{"d": 2, "terms": [{"alpha": [1,0], "re": 1.0, "im": 0.0}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub d: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

impl TryFrom<PolyJson> for Poly {
    type Error = Error;

    fn try_from(raw: PolyJson) -> Result<Poly> {
        if raw.d == 0 {
            return Err(Error::Parse("field d: must be at least 1".into()));
        }
        let mut p = Poly::zero(raw.d);
        for (i, t) in raw.terms.into_iter().enumerate() {
            if t.alpha.len() != raw.d {
                return Err(Error::Parse(format!(
                    "terms[{i}].alpha: expected {} exponents, got {}",
                    raw.d,
                    t.alpha.len()
                )));
            }
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(Error::Parse(format!("terms[{i}]: non-finite coefficient")));
            }
            p.add_term(MultiIndex::new(t.alpha), Complex64::new(t.re, t.im));
        }
        Ok(p)
    }
}

fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// `⟨f, g⟩ = Σ_α f_α conj(g_α) α!/|α|!`.
pub fn h2_inner(f: &Poly, g: &Poly) -> Result<Complex64> {
    check_dims(f.d, g.d)?;
    Ok(f.terms
        .iter()
        .filter_map(|(a, x)| {
            g.terms
                .get(a)
                .map(|y| x * y.conj() * rational_to_f64(&monomial_norm_sq(a)))
        })
        .sum())
}

pub fn h2_norm(f: &Poly) -> f64 {
    h2_inner(f, f).expect("same dimension").re.max(0.0).sqrt()
}

/// A point of the open unit ball of `ℂ^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointInBall(Vec<Complex64>);

impl PointInBall {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("point needs d >= 1".into()));
        }
        let n2: f64 = coords.iter().map(|c| c.norm_sqr()).sum();
        if n2.is_nan() || n2 >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "point has squared norm {n2} >= 1"
            )));
        }
        Ok(PointInBall(coords))
    }

    pub fn real(coords: &[f64]) -> Result<Self> {
        PointInBall::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// `⟨u_x, u_y⟩ = (1 − ⟨y, x⟩)^{-1}` with `⟨y, x⟩ = Σ y_i conj(x_i)`.
pub fn kernel_value(x: &PointInBall, y: &PointInBall) -> Result<Complex64> {
    check_dims(x.dim(), y.dim())?;
    let yx: Complex64 = y.0.iter().zip(&x.0).map(|(a, b)| a * b.conj()).sum();
    Ok(Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - yx))
}

/// Degree-`N` Taylor truncation of a kernel function, with the exact
/// squared norm of what was cut off.
#[derive(Clone, Debug)]
pub struct TruncatedKernel {
    pub poly: Poly,
    /// `‖u_x − u_x^{(N)}‖² = ‖x‖^{2(N+1)} / (1 − ‖x‖²)`.
    pub tail_sq: f64,
}

/// `u_x(z) = Σ_α (|α|!/α!) conj(x)^α z^α`, truncated at total degree `max_degree`.
pub fn kernel_poly(x: &PointInBall, max_degree: usize) -> TruncatedKernel {
    let d = x.dim();
    let conj: Vec<Complex64> = x.0.iter().map(|c| c.conj()).collect();
    let mut terms = Vec::new();
    for n in 0..=max_degree {
        for alpha in crate::multiindex::enumerate_degree(d, n) {
            let multinomial = BigRational::new(
                BigInt::from(factorial(n)),
                BigInt::from(alpha.factorial()),
            );
            let c = monomial_value(&alpha, &conj) * rational_to_f64(&multinomial);
            if c != Complex64::zero() {
                terms.push((alpha, c));
            }
        }
    }
    let r2 = x.norm_sq();
    TruncatedKernel {
        poly: Poly::from_terms(d, terms).expect("indices have dimension d"),
        tail_sq: r2.powi(max_degree as i32 + 1) / (1.0 - r2),
    }
}

/// `G_{ij} = ⟨u_{x_i}, u_{x_j}⟩`.
pub fn gram_matrix(points: &[PointInBall]) -> Result<CMatrix> {
    let n = points.len();
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = kernel_value(&points[i], &points[j])?;
        }
    }
    Ok(g)
}

/// Gram matrix of the degree-`N` truncated kernel functions.
pub fn truncated_gram_matrix(points: &[PointInBall], max_degree: usize) -> Result<CMatrix> {
    let kernels: Vec<Poly> = points
        .iter()
        .map(|x| kernel_poly(x, max_degree).poly)
        .collect();
    let n = points.len();
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = h2_inner(&kernels[i], &kernels[j])?;
        }
    }
    Ok(g)
}

/// Matrix of `f ↦ f(V^{-1} z)` on the orthonormal truncated monomial basis.
pub fn gamma_matrix(v: &CMatrix, basis: &TruncatedBasis) -> Result<OperatorMatrix> {
    let d = basis.dim();
    if v.nrows() != d || v.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: v.nrows().max(v.ncols()),
        });
    }
    let residual = (v.ad_mul(v) - CMatrix::identity(d, d)).norm();
    if residual > 1e-12 {
        return Err(Error::NonUnitary { residual });
    }
    basis.check_dense()?;

    // (V^{-1} z)_i = Σ_j conj(V_{ji}) z_j
    let forms: Vec<Poly> = (0..d)
        .map(|i| {
            Poly::from_terms(
                d,
                (0..d).map(|j| (MultiIndex::unit(d, j), v[(j, i)].conj())),
            )
            .expect("unit indices")
        })
        .collect();

    let size = basis.len();
    let mut m = CMatrix::zeros(size, size);
    let mut images: HashMap<MultiIndex, Poly> = HashMap::new();
    for (col, alpha) in basis.indices().iter().enumerate() {
        let image = match (0..d).find(|&k| alpha.get(k) > 0) {
            None => Poly::constant(d, Complex64::new(1.0, 0.0)),
            Some(k) => {
                let lower = alpha.lowered(k).expect("positive exponent");
                images[&lower].mul(&forms[k])
            }
        };
        for (beta, c) in image.terms() {
            let row = basis.position(beta).expect("degree is preserved");
            m[(row, col)] = c * (basis.sqrt_weight(row) / basis.sqrt_weight(col));
        }
        images.insert(alpha.clone(), image);
    }
    OperatorMatrix::new(basis, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    SymmetricFock,
    HardyBoundary,
    Bergman,
}

/// Monomial-orthogonal Hilbert norm on polynomials: `‖z^α‖² = w(α)`, `w(0) = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightSystem {
    pub kind: WeightKind,
    pub d: usize,
}

pub fn weight_system(kind: WeightKind, d: usize) -> WeightSystem {
    assert!(d >= 1, "d must be at least 1");
    WeightSystem { kind, d }
}

impl WeightSystem {
    pub fn name(&self) -> &'static str {
        match self.kind {
            WeightKind::SymmetricFock => "symmetric-fock",
            WeightKind::HardyBoundary => "hardy-sphere",
            WeightKind::Bergman => "bergman-ball",
        }
    }

    /// Exact squared norm of `z^α`.
    pub fn weight(&self, alpha: &MultiIndex) -> ExactRational {
        assert_eq!(alpha.dim(), self.d, "index has wrong dimension");
        let n = alpha.degree();
        let d = self.d;
        let (num, den): (BigUint, BigUint) = match self.kind {
            WeightKind::SymmetricFock => (alpha.factorial(), factorial(n)),
            WeightKind::HardyBoundary => {
                (factorial(d - 1) * alpha.factorial(), factorial(d - 1 + n))
            }
            WeightKind::Bergman => (factorial(d) * alpha.factorial(), factorial(d + n)),
        };
        BigRational::new(num.into(), den.into())
    }

    pub fn weight_f64(&self, alpha: &MultiIndex) -> f64 {
        rational_to_f64(&self.weight(alpha))
    }

    /// `‖f‖²` in this norm.
    pub fn norm_sq(&self, f: &Poly) -> f64 {
        f.terms()
            .iter()
            .map(|(a, c)| c.norm_sqr() * self.weight_f64(a))
            .sum()
    }
}

/// Monte Carlo estimate of `∫ |z^α|²` against the measure behind `kind`:
/// normalized surface measure on the sphere for [`WeightKind::HardyBoundary`],
/// normalized volume on the ball for [`WeightKind::Bergman`].
///
/// The H²_d norm is not an `L²` norm, so it has no estimate here.
pub fn monte_carlo_moment(
    kind: WeightKind,
    alpha: &MultiIndex,
    samples: usize,
    seed: u64,
) -> Option<f64> {
    if kind == WeightKind::SymmetricFock {
        return None;
    }
    let d = alpha.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = vec![Complex64::zero(); d];
    let mut sum = 0.0;
    for _ in 0..samples {
        for zi in z.iter_mut() {
            *zi = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        let mut r = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if kind == WeightKind::Bergman {
            // radial law of the uniform measure on the ball in ℝ^{2d}
            let u: f64 = rng.random();
            r /= u.powf(1.0 / (2.0 * d as f64));
        }
        for zi in z.iter_mut() {
            *zi /= r;
        }
        sum += monomial_value(alpha, &z).norm_sqr();
    }
    Some(sum / samples as f64)
}
