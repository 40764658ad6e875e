//! The d-shift compressed to polynomials of degree at most `N`.
//!
//! `S_k` here is always `P_N M_{z_k} P_N` written in the orthonormal basis
//! `z^α / ‖z^α‖`. Because the shift raises degree, the compression is exact
//! for anything that lowers before it raises; relations that raise first only
//! hold on the interior (degrees `≤ N − 1`).

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::monomial_norm_sq;
use crate::h2space::Poly;
use crate::multiindex::{dim_symmetric_u128, enumerate_degree, rational_to_f64, ExactRational, MultiIndex};
use crate::numerics::{min_eigenvalue_hermitian, norm, CMatrix, CVector};

pub const MAX_BASIS_SIZE: usize = 200_000;
pub const DEFAULT_DENSE_CAP: usize = 4_000;

/// Orthonormal monomial basis of polynomials of degree `≤ N` in `d` variables.
#[derive(Clone, Debug)]
pub struct TruncatedBasis {
    d: usize,
    max_degree: usize,
    indices: Vec<MultiIndex>,
    positions: HashMap<MultiIndex, usize>,
    weights: Vec<ExactRational>,
    sqrt_weights: Vec<f64>,
    degree_starts: Vec<usize>,
    dense_cap: usize,
}

pub fn build_basis(d: usize, max_degree: usize) -> Result<TruncatedBasis> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let mut size: u128 = 0;
    for n in 0..=max_degree {
        size = size.saturating_add(dim_symmetric_u128(d, n).unwrap_or(u128::MAX));
    }
    if size > MAX_BASIS_SIZE as u128 {
        return Err(Error::ResourceLimit {
            what: "basis size",
            requested: size,
            limit: MAX_BASIS_SIZE as u128,
        });
    }
    let mut indices = Vec::with_capacity(size as usize);
    let mut degree_starts = Vec::with_capacity(max_degree + 2);
    for n in 0..=max_degree {
        degree_starts.push(indices.len());
        indices.extend(enumerate_degree(d, n));
    }
    degree_starts.push(indices.len());
    let positions = indices
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i))
        .collect();
    let weights: Vec<ExactRational> = indices.iter().map(monomial_norm_sq).collect();
    let sqrt_weights = weights.iter().map(|w| rational_to_f64(w).sqrt()).collect();
    Ok(TruncatedBasis {
        d,
        max_degree,
        indices,
        positions,
        weights,
        sqrt_weights,
        degree_starts,
        dense_cap: DEFAULT_DENSE_CAP,
    })
}

impl TruncatedBasis {
    pub fn with_dense_cap(mut self, cap: usize) -> Self {
        self.dense_cap = cap;
        self
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn shape(&self) -> BasisShape {
        BasisShape {
            d: self.d,
            max_degree: self.max_degree,
        }
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn multi_index(&self, i: usize) -> &MultiIndex {
        &self.indices[i]
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.positions.get(alpha).copied()
    }

    /// `‖z^α‖² = α!/|α|!` for the `i`-th basis element.
    pub fn weight(&self, i: usize) -> &ExactRational {
        &self.weights[i]
    }

    pub fn sqrt_weight(&self, i: usize) -> f64 {
        self.sqrt_weights[i]
    }

    /// Positions of the degree-`n` block.
    pub fn degree_range(&self, n: usize) -> Range<usize> {
        self.degree_starts[n]..self.degree_starts[n + 1]
    }

    /// Number of basis elements of degree `≤ N − 1`, which come first.
    pub fn interior_len(&self) -> usize {
        self.degree_starts[self.max_degree]
    }

    /// Number of basis elements of degree `≤ m`.
    pub fn prefix_len(&self, m: usize) -> usize {
        self.degree_starts[m.min(self.max_degree) + 1]
    }

    pub fn check_dense(&self) -> Result<()> {
        if self.len() > self.dense_cap {
            return Err(Error::ResourceLimit {
                what: "dense matrix side",
                requested: self.len() as u128,
                limit: self.dense_cap as u128,
            });
        }
        Ok(())
    }

    /// Orthonormal coordinates of `f` (which must have degree `≤ N`).
    pub fn coordinates(&self, f: &Poly) -> Result<CVector> {
        self.check_poly(f)?;
        let mut v = CVector::zeros(self.len());
        for (alpha, c) in f.terms() {
            let i = self.position(alpha).expect("degree checked");
            v[i] = c * self.sqrt_weights[i];
        }
        Ok(v)
    }

    fn check_poly(&self, f: &Poly) -> Result<()> {
        if f.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                actual: f.dim(),
            });
        }
        match f.degree() {
            Some(deg) if deg > self.max_degree => Err(Error::DegreeOverflow {
                degree: deg,
                max_degree: self.max_degree,
            }),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisShape {
    pub d: usize,
    #[serde(rename = "N")]
    pub max_degree: usize,
}

/// A dense square matrix acting on a [`TruncatedBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    shape: BasisShape,
    matrix: CMatrix,
}

impl OperatorMatrix {
    pub fn new(basis: &TruncatedBasis, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != basis.len() || matrix.ncols() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(OperatorMatrix {
            shape: basis.shape(),
            matrix,
        })
    }

    pub fn shape(&self) -> BasisShape {
        self.shape
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn check_basis(&self, basis: &TruncatedBasis) -> Result<()> {
        let other = basis.shape();
        if self.shape != other {
            return Err(Error::BasisMismatch {
                d1: self.shape.d,
                n1: self.shape.max_degree,
                d2: other.d,
                n2: other.max_degree,
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> OperatorMatrixJson {
        let n = self.matrix.nrows();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.matrix[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        OperatorMatrixJson {
            basis: self.shape,
            entries,
        }
    }

    pub fn from_json(raw: OperatorMatrixJson) -> Result<Self> {
        let basis = build_basis(raw.basis.d, raw.basis.max_degree)?;
        let n = basis.len();
        if raw.entries.len() != n * n {
            return Err(Error::Parse(format!(
                "entries: expected {} values for basis ({}, {}), got {}",
                n * n,
                raw.basis.d,
                raw.basis.max_degree,
                raw.entries.len()
            )));
        }
        let m = CMatrix::from_row_iterator(
            n,
            n,
            raw.entries.iter().map(|&[re, im]| Complex64::new(re, im)),
        );
        OperatorMatrix::new(&basis, m)
    }
}

/// Wire form: basis descriptor plus row-major `[re, im]` entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorMatrixJson {
    pub basis: BasisShape,
    pub entries: Vec<[f64; 2]>,
}

fn sqrt_ratio(q: ExactRational) -> f64 {
    rational_to_f64(&q).sqrt()
}

/// `P_N S_k P_N` for the 0-based coordinate `k`.
pub fn shift_matrix(k: usize, basis: &TruncatedBasis) -> Result<OperatorMatrix> {
    if k >= basis.dim() {
        return Err(Error::InvalidArgument(format!(
            "coordinate {k} out of range for d = {}",
            basis.dim()
        )));
    }
    basis.check_dense()?;
    let n = basis.len();
    let mut m = CMatrix::zeros(n, n);
    for col in 0..basis.interior_len() {
        let alpha = basis.multi_index(col);
        let row = basis.position(&alpha.raised(k)).expect("raised index in basis");
        let q = BigRational::new(
            BigInt::from(alpha.get(k) + 1),
            BigInt::from(alpha.degree() + 1),
        );
        m[(row, col)] = Complex64::new(sqrt_ratio(q), 0.0);
    }
    OperatorMatrix::new(basis, m)
}

/// All `d` compressed shifts.
pub fn shift_tuple(basis: &TruncatedBasis) -> Result<Vec<CMatrix>> {
    (0..basis.dim())
        .map(|k| shift_matrix(k, basis).map(OperatorMatrix::into_matrix))
        .collect()
}

/// `M_f` applied to a coordinate vector without materializing the matrix.
///
/// `M_f (z^β/‖z^β‖) = Σ_α f_α (‖z^{α+β}‖/‖z^β‖) · z^{α+β}/‖z^{α+β}‖`, with
/// terms of degree above `N` dropped.
pub fn apply_multiplication(f: &Poly, basis: &TruncatedBasis, v: &CVector) -> Result<CVector> {
    basis.check_poly(f)?;
    if v.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            actual: v.len(),
        });
    }
    let mut out = CVector::zeros(basis.len());
    for (col, x) in v.iter().enumerate() {
        if *x == Complex64::default() {
            continue;
        }
        for (value, row) in multiplication_column(f, basis, col) {
            out[row] += value * x;
        }
    }
    Ok(out)
}

fn multiplication_column<'a>(
    f: &'a Poly,
    basis: &'a TruncatedBasis,
    col: usize,
) -> impl Iterator<Item = (Complex64, usize)> + 'a {
    let beta = basis.multi_index(col);
    f.terms().iter().filter_map(move |(alpha, c)| {
        if alpha.degree() + beta.degree() > basis.max_degree() {
            return None;
        }
        let target = alpha.add(beta);
        let row = basis.position(&target).expect("degree within truncation");
        let ratio = basis.weight(row) / basis.weight(col);
        Some((c * sqrt_ratio(ratio), row))
    })
}

/// Compression of multiplication by `f`; block lower triangular in the grading.
pub fn multiplication_matrix(f: &Poly, basis: &TruncatedBasis) -> Result<OperatorMatrix> {
    basis.check_poly(f)?;
    basis.check_dense()?;
    let n = basis.len();
    let mut m = CMatrix::zeros(n, n);
    for col in 0..n {
        for (value, row) in multiplication_column(f, basis, col) {
            m[(row, col)] += value;
        }
    }
    OperatorMatrix::new(basis, m)
}

/// The grading operator: `|α|` on the diagonal.
pub fn number_operator(basis: &TruncatedBasis) -> Result<OperatorMatrix> {
    basis.check_dense()?;
    let diag = CVector::from_iterator(
        basis.len(),
        basis
            .indices()
            .iter()
            .map(|a| Complex64::new(a.degree() as f64, 0.0)),
    );
    OperatorMatrix::new(basis, CMatrix::from_diagonal(&diag))
}

/// Rank-one projection onto the constants.
pub fn e0_projection(basis: &TruncatedBasis) -> Result<OperatorMatrix> {
    basis.check_dense()?;
    let mut m = CMatrix::zeros(basis.len(), basis.len());
    m[(0, 0)] = Complex64::new(1.0, 0.0);
    OperatorMatrix::new(basis, m)
}

/// Residual norms of the d-shift commutation relations on a truncation.
#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub d: usize,
    #[serde(rename = "N")]
    pub max_degree: usize,
    /// Named residual norms; all should vanish.
    pub residuals: BTreeMap<String, f64>,
    /// Smallest eigenvalue of `S_k^* S_k − S_k S_k^*` on the interior, per `k`.
    pub hyponormal_min_eigenvalues: Vec<f64>,
    /// `‖Σ_k S_k^* S_k‖` on the interior; equals `d`.
    pub column_sum_norm: f64,
}

impl RelationReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}

/// Checks, with `𝟙` the identity and `N` the grading operator:
///
/// * `S_i^* S_j − S_j S_i^* = (𝟙 + N)^{-1}(δ_ij 𝟙 − S_j S_i^*)` on the interior,
/// * `Σ_k S_k^* S_k = (d𝟙 + N)(𝟙 + N)^{-1}` on the interior,
/// * `Σ_k S_k S_k^* = 𝟙 − E_0` on the whole truncation,
/// * `S_k^* S_k ≥ S_k S_k^*` on the interior.
pub fn relation_residuals(basis: &TruncatedBasis) -> Result<RelationReport> {
    if basis.max_degree() < 2 {
        return Err(Error::InvalidArgument(
            "relations need N >= 2 so that the interior is nontrivial".into(),
        ));
    }
    let d = basis.dim();
    let n = basis.len();
    let interior = basis.interior_len();
    let shifts = shift_tuple(basis)?;
    let id = CMatrix::identity(n, n);
    let inv_one_plus_n = CMatrix::from_diagonal(&CVector::from_iterator(
        n,
        basis
            .indices()
            .iter()
            .map(|a| Complex64::new(1.0 / (1.0 + a.degree() as f64), 0.0)),
    ));
    let on_interior = |m: &CMatrix| norm(&m.columns(0, interior).into_owned());

    let mut residuals = BTreeMap::new();
    for i in 0..d {
        for j in 0..d {
            let lhs = shifts[i].ad_mul(&shifts[j]) - &shifts[j] * shifts[i].adjoint();
            let delta = if i == j { id.clone() } else { CMatrix::zeros(n, n) };
            let rhs = &inv_one_plus_n * (delta - &shifts[j] * shifts[i].adjoint());
            residuals.insert(
                format!("adjoint_commutator[{},{}]", i + 1, j + 1),
                on_interior(&(lhs - rhs)),
            );
        }
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let c = &shifts[i] * &shifts[j] - &shifts[j] * &shifts[i];
            residuals.insert(format!("commutator[{},{}]", i + 1, j + 1), norm(&c));
        }
    }

    let column_sum: CMatrix = shifts
        .iter()
        .fold(CMatrix::zeros(n, n), |acc, s| acc + s.ad_mul(s));
    let column_target = CMatrix::from_diagonal(&CVector::from_iterator(
        n,
        basis.indices().iter().map(|a| {
            let m = a.degree() as f64;
            Complex64::new((d as f64 + m) / (1.0 + m), 0.0)
        }),
    ));
    residuals.insert(
        "column_sum".into(),
        on_interior(&(&column_sum - column_target)),
    );

    let row_sum: CMatrix = shifts
        .iter()
        .fold(CMatrix::zeros(n, n), |acc, s| acc + s * s.adjoint());
    let e0 = e0_projection(basis)?.into_matrix();
    residuals.insert("row_sum".into(), norm(&(row_sum - (id - e0))));

    let hyponormal_min_eigenvalues = shifts
        .iter()
        .map(|s| {
            let self_commutator = s.ad_mul(s) - s * s.adjoint();
            min_eigenvalue_hermitian(
                &self_commutator.view((0, 0), (interior, interior)).into_owned(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let column_sum_norm = norm(&column_sum.view((0, 0), (interior, interior)).into_owned());

    Ok(RelationReport {
        d,
        max_degree: basis.max_degree(),
        residuals,
        hyponormal_min_eigenvalues,
        column_sum_norm,
    })
}

/// Exact `g_n(x) = Π_{k=1}^{n} (x+k+d−1)/(x+k)` for `x = 0..=maxdeg`.
pub fn pstar_power_diagonal_exact(d: usize, n: usize, maxdeg: usize) -> Vec<ExactRational> {
    (0..=maxdeg)
        .map(|x| {
            (1..=n).fold(ExactRational::one(), |acc, k| {
                acc * BigRational::new(
                    BigInt::from(x + k + d - 1),
                    BigInt::from(x + k),
                )
            })
        })
        .collect()
}

/// Eigenvalues of `P_*^n(𝟙)` on each degree, where `P_*(A) = Σ_k S_k^* A S_k`.
pub fn pstar_power_diagonal(d: usize, n: usize, maxdeg: usize) -> Vec<f64> {
    pstar_power_diagonal_exact(d, n, maxdeg)
        .iter()
        .map(rational_to_f64)
        .collect()
}

/// `n`-fold application of `A ↦ Σ_k T_k^* A T_k` to the identity.
pub fn pstar_iterate(tuple: &[CMatrix], n: usize) -> CMatrix {
    let side = tuple.first().map_or(0, |t| t.ncols());
    let mut a = CMatrix::identity(side, side);
    for _ in 0..n {
        a = tuple
            .iter()
            .fold(CMatrix::zeros(side, side), |acc, t| acc + t.ad_mul(&(&a * t)));
    }
    a
}

/// `P_*^n(𝟙)` for the compressed shift; agrees with [`pstar_power_diagonal`]
/// on degrees `≤ N − n`.
pub fn pstar_power_direct(basis: &TruncatedBasis, n: usize) -> Result<OperatorMatrix> {
    if n > basis.max_degree() {
        return Err(Error::InvalidArgument(format!(
            "power {n} exceeds truncation degree {}",
            basis.max_degree()
        )));
    }
    let shifts = shift_tuple(basis)?;
    OperatorMatrix::new(basis, pstar_iterate(&shifts, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::monomial_norm_sq;
    use crate::h2space::{gamma_matrix, h2_norm};
    use crate::multiindex::dim_symmetric;
    use num_bigint::BigUint;
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(build_basis(2, 2).unwrap().len(), 6);
        assert_eq!(build_basis(1, 5).unwrap().len(), 6);
        assert_eq!(build_basis(3, 3).unwrap().len(), 20);
        assert!(matches!(build_basis(6, 40), Err(Error::ResourceLimit { .. })));
        let b = build_basis(3, 4).unwrap();
        for n in 0..=4 {
            let r = b.degree_range(n);
            assert_eq!(BigUint::from(r.len()), dim_symmetric(3, n));
            let expected = enumerate_degree(3, n);
            assert_eq!(&b.indices()[r], expected.as_slice());
        }
    }

    #[test]
    fn shift_examples() {
        let b = build_basis(2, 3).unwrap();
        let s1 = shift_matrix(0, &b).unwrap().into_matrix();
        let z1 = b.position(&MultiIndex::new(vec![1, 0])).unwrap();
        let z2 = b.position(&MultiIndex::new(vec![0, 1])).unwrap();
        let z1z2 = b.position(&MultiIndex::new(vec![1, 1])).unwrap();
        assert_eq!(s1[(z1, 0)], c(1.0));
        assert!((s1[(z1z2, z2)] - c(0.5f64.sqrt())).norm() < 1e-16);
        for col in b.degree_range(3) {
            assert!(s1.column(col).iter().all(|z| *z == Complex64::zero()));
        }
        for col in 0..b.interior_len() {
            assert_eq!(s1.column(col).iter().filter(|z| **z != Complex64::zero()).count(), 1);
        }
        assert!(shift_matrix(2, &b).is_err());
    }

    #[test]
    fn shift_is_a_row_contraction_with_unit_norm() {
        for (d, n) in [(1, 5), (2, 6), (3, 4)] {
            let b = build_basis(d, n).unwrap();
            let shifts = shift_tuple(&b).unwrap();
            let row = shifts.iter().fold(CMatrix::zeros(b.len(), b.len()), |acc, s| acc + s * s.adjoint());
            assert!(norm(&row) <= 1.0 + 1e-12);
            assert!((norm(&shifts[0]) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn multiplication_examples() {
        let b = build_basis(2, 4).unwrap();
        let one = Poly::constant(2, c(1.0));
        let m = multiplication_matrix(&one, &b).unwrap().into_matrix();
        assert!((m - CMatrix::identity(b.len(), b.len())).norm() < 1e-15);

        let s = shift_tuple(&b).unwrap();
        let f = Poly::monomial(MultiIndex::new(vec![1, 1]), c(1.0));
        let mf = multiplication_matrix(&f, &b).unwrap().into_matrix();
        assert!((&mf - &s[0] * &s[1]).norm() < 1e-14);
        assert!((&s[0] * &s[1] - &s[1] * &s[0]).norm() < 1e-14);

        let g = Poly::from_terms(
            2,
            [
                (MultiIndex::new(vec![0, 0]), Complex64::new(0.3, 0.1)),
                (MultiIndex::new(vec![2, 1]), Complex64::new(-1.0, 2.0)),
                (MultiIndex::new(vec![0, 2]), Complex64::new(0.5, 0.0)),
            ],
        )
        .unwrap();
        let mg = multiplication_matrix(&g, &b).unwrap().into_matrix();
        assert!((mg.column(0).norm() - h2_norm(&g)).abs() < 1e-14);
        let by_products = &s[0] * &s[0] * &s[1] * Complex64::new(-1.0, 2.0)
            + &s[1] * &s[1] * c(0.5)
            + CMatrix::identity(b.len(), b.len()) * Complex64::new(0.3, 0.1);
        assert!((&mg - by_products).norm() < 1e-13);

        let mut e0 = CVector::zeros(b.len());
        e0[0] = c(1.0);
        let applied = apply_multiplication(&g, &b, &e0).unwrap();
        assert!((applied - mg.column(0)).norm() < 1e-15);

        let too_big = Poly::monomial(MultiIndex::new(vec![5, 0]), c(1.0));
        assert!(matches!(
            multiplication_matrix(&too_big, &b),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn number_and_vacuum() {
        let b = build_basis(3, 4).unwrap();
        let e0 = e0_projection(&b).unwrap().into_matrix();
        assert_eq!(e0.trace(), c(1.0));
        let num = number_operator(&b).unwrap().into_matrix();
        for n in 0..=4 {
            let count = (0..b.len()).filter(|&i| num[(i, i)] == c(n as f64)).count();
            assert_eq!(BigUint::from(count), dim_symmetric(3, n));
        }
        let s = shift_tuple(&b).unwrap();
        let sum = s.iter().fold(e0, |acc, t| acc + t * t.adjoint());
        assert!((sum - CMatrix::identity(b.len(), b.len())).norm() < 1e-14);
    }

    #[test]
    fn relation_examples() {
        let r = relation_residuals(&build_basis(2, 6).unwrap()).unwrap();
        assert!(r.max_residual() < 1e-12, "{:?}", r.residuals);
        assert!(r.hyponormal_min_eigenvalues.iter().all(|&e| e >= -1e-12));
        assert!((r.column_sum_norm - 2.0).abs() < 1e-10);

        let r = relation_residuals(&build_basis(1, 6).unwrap()).unwrap();
        assert!(r.max_residual() < 1e-12);
        assert!((r.column_sum_norm - 1.0).abs() < 1e-10);
        // d = 1: S^*S − SS^* is the vacuum projection on the interior
        let b = build_basis(1, 6).unwrap();
        let s = shift_matrix(0, &b).unwrap().into_matrix();
        let sc = s.ad_mul(&s) - &s * s.adjoint();
        let k = b.interior_len();
        let mut e0 = CMatrix::zeros(k, k);
        e0[(0, 0)] = c(1.0);
        assert!((sc.view((0, 0), (k, k)) - e0).norm() < 1e-12);

        assert!(relation_residuals(&build_basis(2, 1).unwrap()).is_err());
    }

    #[test]
    fn raise_first_relations_fail_at_the_top_degree() {
        // documents the truncation boundary: the column sum is wrong on degree N
        let b = build_basis(2, 4).unwrap();
        let s = shift_tuple(&b).unwrap();
        let col_sum = s.iter().fold(CMatrix::zeros(b.len(), b.len()), |acc, t| acc + t.ad_mul(t));
        let top = b.degree_range(4).start;
        assert_eq!(col_sum[(top, top)], Complex64::zero());
    }

    #[test]
    fn pstar_diagonal_examples() {
        let g1 = pstar_power_diagonal(2, 1, 3);
        assert_eq!(g1, vec![2.0, 1.5, 4.0 / 3.0, 1.25]);
        assert_eq!(pstar_power_diagonal(2, 2, 0), vec![3.0]);
        assert!(pstar_power_diagonal(1, 5, 6).iter().all(|&v| v == 1.0));
        for d in 1..=4 {
            for n in 1..=6 {
                let g0 = &pstar_power_diagonal_exact(d, n, 0)[0];
                assert_eq!(*g0, BigRational::from_integer(dim_symmetric(d, n).into()));
            }
        }
    }

    #[test]
    fn pstar_direct_matches_closed_form() {
        let b = build_basis(2, 8).unwrap();
        let p3 = pstar_power_direct(&b, 3).unwrap().into_matrix();
        let g3 = pstar_power_diagonal(2, 3, 8);
        let k = b.prefix_len(5);
        for i in 0..k {
            for j in 0..k {
                let expected = if i == j { g3[b.multi_index(i).degree()] } else { 0.0 };
                assert!((p3[(i, j)] - c(expected)).norm() < 1e-12);
            }
        }
        let p1 = pstar_power_direct(&b, 1).unwrap().into_matrix();
        assert!((p1[(0, 0)] - c(2.0)).norm() < 1e-14);
        assert!(pstar_power_direct(&b, 9).is_err());

        let b1 = build_basis(1, 7).unwrap();
        let p = pstar_power_direct(&b1, 4).unwrap().into_matrix();
        for i in 0..b1.prefix_len(3) {
            assert!((p[(i, i)] - c(1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn truncations_agree_on_common_block() {
        let small = build_basis(2, 4).unwrap();
        let large = build_basis(2, 7).unwrap();
        let k = small.interior_len();
        for axis in 0..2 {
            let a = shift_matrix(axis, &small).unwrap().into_matrix();
            let b = shift_matrix(axis, &large).unwrap().into_matrix();
            let n = small.len();
            assert!((a.view((0, 0), (n, k)) - b.view((0, 0), (n, k))).norm() == 0.0);
        }
    }

    #[test]
    fn unitary_covariance() {
        let b = build_basis(2, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let raw = CMatrix::from_fn(2, 2, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let v = raw.qr().q();
        let g = gamma_matrix(&v, &b).unwrap().into_matrix();
        let s = shift_tuple(&b).unwrap();
        for k in 0..2 {
            let lhs = &g * &s[k] * g.adjoint();
            // rotated coordinate (V^{-1} z)_k = Σ_j conj(V_{jk}) z_j
            let rhs = (0..2).fold(CMatrix::zeros(b.len(), b.len()), |acc, j| acc + &s[j] * v[(j, k)].conj());
            assert!((lhs - rhs).columns(0, b.interior_len()).norm() < 1e-10);
        }
    }

    #[test]
    fn word_norms_sum_to_dimension() {
        for d in 1..=3 {
            for n in 0..=8usize {
                let mut total = ExactRational::zero();
                let words = (d as u64).pow(n as u32);
                for w in 0..words {
                    let mut word = Vec::with_capacity(n);
                    let mut x = w;
                    for _ in 0..n {
                        word.push((x % d as u64) as usize);
                        x /= d as u64;
                    }
                    total += monomial_norm_sq(&MultiIndex::from_word(d, &word));
                }
                assert_eq!(total, BigRational::from_integer(dim_symmetric(d, n).into()));
            }
        }
    }

    #[test]
    fn operator_json_roundtrip() {
        let b = build_basis(2, 2).unwrap();
        let s = shift_matrix(1, &b).unwrap();
        let text = serde_json::to_string(&s.to_json()).unwrap();
        assert!(text.contains("\"N\":2"));
        let back = OperatorMatrix::from_json(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, s);
        let mut raw = s.to_json();
        raw.entries.pop();
        assert!(OperatorMatrix::from_json(raw).is_err());
    }
}
