//! Symmetric tensors over `ℂ^d` in monomial coordinates.
//!
//! A degree-`n` symmetric tensor is stored as a map from exponent profiles
//! `k` (with `|k| = n`) to the amplitude of the non-normalized symmetric
//! monomial `e_1^{k_1} ⋯ e_d^{k_d}`, i.e. the projection of
//! `e_1^{⊗k_1} ⊗ ⋯ ⊗ e_d^{⊗k_d}` onto the symmetric subspace. These monomials
//! are mutually orthogonal with `‖e^k‖² = k!/|k|!`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::multiindex::{factorial, rational_to_f64, ExactRational, MultiIndex};

/// Largest tensor length the permutation oracle will average over.
pub const ORACLE_MAX_WORD: usize = 8;
/// Largest full tensor space `d^n` the oracle will materialize.
pub const ORACLE_MAX_ENTRIES: u128 = 10_000_000;

/// `k_1! ⋯ k_d! / |k|!`, the squared norm of the symmetric monomial `e^k`.
pub fn monomial_norm_sq(k: &MultiIndex) -> ExactRational {
    BigRational::new(
        BigInt::from(k.factorial()),
        BigInt::from(factorial(k.degree())),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor {
    d: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl SymTensor {
    pub fn zero(d: usize, degree: usize) -> Self {
        SymTensor {
            d,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The single symmetric monomial `e^k` with unit amplitude.
    pub fn monomial(k: MultiIndex) -> Self {
        let mut t = SymTensor::zero(k.dim(), k.degree());
        t.coeffs.insert(k, Complex64::new(1.0, 0.0));
        t
    }

    pub fn from_coeffs(
        d: usize,
        degree: usize,
        coeffs: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self> {
        let mut t = SymTensor::zero(d, degree);
        for (k, c) in coeffs {
            if k.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: k.dim(),
                });
            }
            if k.degree() != degree {
                return Err(Error::InvalidArgument(format!(
                    "index {k} has degree {} in a degree-{degree} tensor",
                    k.degree()
                )));
            }
            t.add_to(k, c);
        }
        Ok(t)
    }

    fn add_to(&mut self, k: MultiIndex, c: Complex64) {
        if c == Complex64::zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert(Complex64::zero());
        *entry += c;
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, k: &MultiIndex) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// `⟨self, other⟩`, linear in `self`.
    pub fn inner(&self, other: &SymTensor) -> Complex64 {
        if self.degree != other.degree {
            return Complex64::zero();
        }
        self.coeffs
            .iter()
            .filter_map(|(k, a)| {
                other
                    .coeffs
                    .get(k)
                    .map(|b| a * b.conj() * rational_to_f64(&monomial_norm_sq(k)))
            })
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self).re
    }

    /// Symmetrized product `a · self` of degree `n + 1`, i.e. the creation operator by `a`.
    pub fn create(&self, a: &[Complex64]) -> Result<SymTensor> {
        check_vector(self.d, a)?;
        let mut out = SymTensor::zero(self.d, self.degree + 1);
        for (k, c) in &self.coeffs {
            for (j, aj) in a.iter().enumerate() {
                out.add_to(k.raised(j), aj * c);
            }
        }
        Ok(out)
    }
}

fn check_vector(d: usize, a: &[Complex64]) -> Result<()> {
    if a.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: a.len(),
        });
    }
    Ok(())
}

/// Adjoint of the creation operator by `a`, mapping degree `n` to degree `n - 1`.
///
/// On a monomial, `A^*(e^k) = Σ_j (k_j/|k|) · conj(a_j) · e^{k - e_j}`.
pub fn creation_adjoint_apply(a: &[Complex64], t: &SymTensor) -> Result<SymTensor> {
    check_vector(t.d, a)?;
    if t.degree == 0 {
        return Err(Error::InvalidArgument(
            "creation adjoint is undefined on degree-0 tensors".into(),
        ));
    }
    let n = t.degree as f64;
    let mut out = SymTensor::zero(t.d, t.degree - 1);
    for (k, c) in &t.coeffs {
        for (j, aj) in a.iter().enumerate() {
            if let Some(lower) = k.lowered(j) {
                let scale = k.get(j) as f64 / n;
                out.add_to(lower, aj.conj() * c * scale);
            }
        }
    }
    Ok(out)
}

/// Result of symmetrizing a full tensor by explicit permutation averaging.
#[derive(Clone, Debug)]
pub struct OracleProjection {
    pub tensor: SymTensor,
    pub norm_sq: ExactRational,
    /// Entries of the projected tensor in `ℂ^{d^n}`, row-major in the word positions.
    pub full: Vec<ExactRational>,
}

/// Projects `e_{i_1} ⊗ ⋯ ⊗ e_{i_n}` onto the symmetric subspace by averaging
/// over all `n!` permutations in the full `d^n`-dimensional tensor space.
///
/// Labels in `word` are 0-based. Only meant for small tensors: `n ≤ 8` and
/// `d^n ≤ 10^7`.
pub fn sym_project_oracle(d: usize, word: &[usize]) -> Result<OracleProjection> {
    let n = word.len();
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    if let Some(&bad) = word.iter().find(|&&i| i >= d) {
        return Err(Error::InvalidArgument(format!(
            "label {bad} out of range for d = {d}"
        )));
    }
    if n > ORACLE_MAX_WORD {
        return Err(Error::ResourceLimit {
            what: "word length",
            requested: n as u128,
            limit: ORACLE_MAX_WORD as u128,
        });
    }
    let entries = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if entries > ORACLE_MAX_ENTRIES {
        return Err(Error::ResourceLimit {
            what: "tensor entries d^n",
            requested: entries,
            limit: ORACLE_MAX_ENTRIES,
        });
    }

    let mut counts = vec![0u64; entries as usize];
    let mut perms = 0u64;
    for perm in (0..n).permutations(n) {
        let index = perm.iter().fold(0usize, |acc, &p| acc * d + word[p]);
        counts[index] += 1;
        perms += 1;
    }
    let denom = BigInt::from(perms);
    let full: Vec<ExactRational> = counts
        .iter()
        .map(|&c| BigRational::new(BigInt::from(c), denom.clone()))
        .collect();
    let total: BigUint = counts.iter().map(|&c| BigUint::from(c) * c).sum();
    let norm_sq = BigRational::new(BigInt::from(total), &denom * &denom);

    Ok(OracleProjection {
        tensor: SymTensor::monomial(MultiIndex::from_word(d, word)),
        norm_sq,
        full,
    })
}

/// The canonical word `0^{k_1} 1^{k_2} ⋯` of a multi-index.
pub fn word_of(k: &MultiIndex) -> Vec<usize> {
    k.exponents()
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| std::iter::repeat_n(i, a as usize))
        .collect()
}

/// Outcome of comparing the permutation oracle against `k!/|k|!`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OracleCheck {
    pub checked: usize,
    pub mismatches: Vec<MultiIndex>,
}

/// Runs the oracle for every `d ≤ max_d` and `|k| ≤ max_degree`.
pub fn oracle_crosscheck(max_d: usize, max_degree: usize) -> Result<OracleCheck> {
    let mut out = OracleCheck::default();
    for d in 1..=max_d {
        for n in 0..=max_degree {
            for k in crate::multiindex::enumerate_degree(d, n) {
                let oracle = sym_project_oracle(d, &word_of(&k))?;
                out.checked += 1;
                if oracle.norm_sq != monomial_norm_sq(&k) || oracle.tensor != SymTensor::monomial(k.clone()) {
                    out.mismatches.push(k);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::enumerate_degree;
    use num_traits::One;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> ExactRational {
        BigRational::new(a.into(), b.into())
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn monomial_norm_examples() {
        assert_eq!(monomial_norm_sq(&MultiIndex::new(vec![0, 0])), q(1, 1));
        assert_eq!(monomial_norm_sq(&MultiIndex::new(vec![1, 1])), q(1, 2));
        assert_eq!(monomial_norm_sq(&MultiIndex::new(vec![1, 1, 1])), q(1, 6));
        assert_eq!(monomial_norm_sq(&MultiIndex::new(vec![0, 7, 0])), q(1, 1));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(sym_project_oracle(1, &[0]).unwrap().norm_sq, q(1, 1));
        assert_eq!(sym_project_oracle(2, &[0, 1]).unwrap().norm_sq, q(1, 2));
        let p = sym_project_oracle(3, &[0, 1, 2]).unwrap();
        assert_eq!(p.norm_sq, q(1, 6));
        assert_eq!(p.full.len(), 27);
        assert!(p.full.iter().all(|e| e.is_zero() || *e == q(1, 6)));
    }

    #[test]
    fn oracle_resource_bounds() {
        assert!(matches!(
            sym_project_oracle(2, &[0; 9]),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(matches!(
            sym_project_oracle(8, &[0; 8]),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(sym_project_oracle(2, &[2]).is_err());
    }

    #[test]
    fn oracle_agrees_with_factorial_formula() {
        let check = oracle_crosscheck(3, 6).unwrap();
        assert_eq!(check.checked, 7 + 28 + 84);
        assert!(check.mismatches.is_empty(), "{:?}", check.mismatches);
    }

    #[test]
    fn adjoint_examples() {
        let e1 = [c(1.0), c(0.0)];
        let e2 = [c(0.0), c(1.0)];
        let t = SymTensor::monomial(MultiIndex::new(vec![3, 2]));
        let out = creation_adjoint_apply(&e1, &t).unwrap();
        assert_eq!(out.coeffs().len(), 1);
        assert!((out.coeff(&MultiIndex::new(vec![2, 2])) - c(0.6)).norm() < 1e-15);

        let t = SymTensor::monomial(MultiIndex::new(vec![4, 0]));
        assert!(creation_adjoint_apply(&e2, &t).unwrap().coeffs().is_empty());

        let t = SymTensor::monomial(MultiIndex::new(vec![1, 1]));
        let out = creation_adjoint_apply(&e1, &t).unwrap();
        assert!((out.coeff(&MultiIndex::new(vec![0, 1])) - c(0.5)).norm() < 1e-15);

        let t = SymTensor::monomial(MultiIndex::new(vec![0, 0]));
        assert!(creation_adjoint_apply(&e1, &t).is_err());
    }

    #[test]
    fn induction_identity() {
        for k in enumerate_degree(3, 5) {
            if let Some(lower) = k.lowered(0) {
                let ratio = BigRational::new(k.get(0).into(), (k.degree() as u64).into());
                assert_eq!(monomial_norm_sq(&k), ratio * monomial_norm_sq(&lower));
            }
        }
        assert_eq!(
            monomial_norm_sq(&MultiIndex::zero(4)),
            ExactRational::one()
        );
    }

    fn tensor_strategy(d: usize, n: usize) -> impl Strategy<Value = SymTensor> {
        let basis = enumerate_degree(d, n);
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), basis.len()).prop_map(move |v| {
            SymTensor::from_coeffs(
                d,
                n,
                basis
                    .iter()
                    .cloned()
                    .zip(v.into_iter().map(|(re, im)| Complex64::new(re, im))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn creation_adjoint_duality(
            (s, t) in (1usize..=3, 1usize..=5).prop_flat_map(|(d, n)| (tensor_strategy(d, n - 1), tensor_strategy(d, n))),
            raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3),
        ) {
            let a: Vec<Complex64> = raw[..s.dim()].iter().map(|&(re, im)| Complex64::new(re, im)).collect();
            let lhs = s.create(&a).unwrap().inner(&t);
            let rhs = s.inner(&creation_adjoint_apply(&a, &t).unwrap());
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
