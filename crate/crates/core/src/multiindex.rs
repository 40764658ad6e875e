//! Multi-indices and the dimensions of the homogeneous symmetric spaces.
//!
//! Every matrix in this crate is expressed in a monomial basis ordered by
//! [`MultiIndex`]'s `Ord` impl: total degree first, then lexicographically
//! descending exponents. For `d = 2, n = 3` that is
//! `(3,0), (2,1), (1,2), (0,3)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type ExactRational = BigRational;

/// Exponent vector `α ∈ ℕ^d` of the monomial `z^α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    /// Panics if `exponents` is empty; the ambient dimension is at least one.
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(!exponents.is_empty(), "multi-index needs d >= 1");
        MultiIndex(exponents)
    }

    pub fn zero(d: usize) -> Self {
        MultiIndex::new(vec![0; d])
    }

    /// The unit index `e_k` (0-based `k`).
    pub fn unit(d: usize, k: usize) -> Self {
        let mut e = vec![0; d];
        e[k] = 1;
        MultiIndex::new(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, k: usize) -> u32 {
        self.0[k]
    }

    /// `α + e_k`.
    pub fn raised(&self, k: usize) -> Self {
        let mut e = self.0.clone();
        e[k] += 1;
        MultiIndex(e)
    }

    /// `α - e_k`, or `None` when `α_k = 0`.
    pub fn lowered(&self, k: usize) -> Option<Self> {
        if self.0[k] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[k] -= 1;
        Some(MultiIndex(e))
    }

    pub fn add(&self, other: &MultiIndex) -> Self {
        assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// The exponent profile of a word `i_1 … i_n` over `{0..d}`.
    pub fn from_word(d: usize, word: &[usize]) -> Self {
        let mut e = vec![0; d];
        for &i in word {
            e[i] += 1;
        }
        MultiIndex::new(e)
    }

    /// `α! = α_1! ⋯ α_d!`.
    pub fn factorial(&self) -> BigUint {
        self.0
            .iter()
            .fold(BigUint::one(), |acc, &a| acc * factorial(a as usize))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// All multi-indices of dimension `d` and total degree `n`, in basis order.
pub fn enumerate_degree(d: usize, n: usize) -> Vec<MultiIndex> {
    assert!(d >= 1, "d must be at least 1");
    let mut out = Vec::new();
    let mut current = vec![0u32; d];
    fill(&mut current, 0, n, &mut out);
    out
}

fn fill(current: &mut [u32], pos: usize, remaining: usize, out: &mut Vec<MultiIndex>) {
    let d = current.len();
    if pos == d - 1 {
        current[pos] = remaining as u32;
        out.push(MultiIndex(current.to_vec()));
        return;
    }
    for a in (0..=remaining).rev() {
        current[pos] = a as u32;
        fill(current, pos + 1, remaining - a, out);
    }
}

/// `(n+d-1)! / (n! (d-1)!)`, the dimension of the degree-`n` symmetric tensors over `ℂ^d`.
pub fn dim_symmetric(d: usize, n: usize) -> BigUint {
    assert!(d >= 1, "d must be at least 1");
    // C(n+j, j) = C(n+j-1, j-1) * (n+j) / j, exact at every step
    let mut acc = BigUint::one();
    for j in 1..d {
        acc = acc * BigUint::from(n + j) / BigUint::from(j);
    }
    acc
}

/// Same value as [`dim_symmetric`] without allocation; `None` on `u128` overflow.
pub fn dim_symmetric_u128(d: usize, n: usize) -> Option<u128> {
    assert!(d >= 1, "d must be at least 1");
    let mut acc: u128 = 1;
    for j in 1..d {
        acc = acc.checked_mul((n + j) as u128)? / j as u128;
    }
    Some(acc)
}

/// `a_{n,d}` from `a_{n,1} = 1` and `a_{n,d+1} = a_{0,d} + … + a_{n,d}`.
pub fn dim_by_recurrence(d: usize, n: usize) -> BigUint {
    assert!(d >= 1, "d must be at least 1");
    let mut row = vec![BigUint::one(); n + 1];
    for _ in 1..d {
        let mut running = BigUint::zero();
        for a in row.iter_mut() {
            running += &*a;
            *a = running.clone();
        }
    }
    row.pop().expect("row has n+1 entries")
}

/// `dim_symmetric(d,n) · (d-1)! / (n+1)^{d-1}`, which tends to 1 as `n → ∞`.
pub fn dim_asymptotic_ratio(d: usize, n: usize) -> f64 {
    let num = dim_symmetric(d, n) * factorial(d - 1);
    let den = BigUint::from(n + 1).pow((d - 1) as u32);
    BigRational::new(num.into(), den.into())
        .to_f64()
        .expect("finite ratio")
}

/// Converts an exact rational to the nearest `f64`.
pub fn rational_to_f64(q: &ExactRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
