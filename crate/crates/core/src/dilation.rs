//! Commuting row contractions on finite-dimensional spaces and their dilation
//! to the d-shift.
//!
//! For a d-contraction `T` on `H` with defect `Δ = (𝟙 − Σ T_k T_k^*)^{1/2}`
//! and `K = range Δ`, the map `L: F_+ ⊗ K → H` sends
//! `e^α ⊗ ξ ↦ T^α Δ ξ`. Written in the orthonormal Fock basis
//! `ê_α = e^α / ‖e^α‖` this is `ê_α ⊗ ξ ↦ T^α Δ ξ / ‖e^α‖`, and
//! `L L^* = 𝟙 − P^{N+1}(𝟙)` on the degree-`N` truncation, where
//! `P(A) = Σ_k T_k A T_k^*`.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::multiplier_lower_bound;
use crate::h2space::{kernel_poly, Poly, PointInBall};
use crate::multiindex::MultiIndex;
use crate::numerics::{hermitian_eigen, min_eigenvalue_hermitian, norm, CMatrix};
use crate::shift::{build_basis, shift_tuple, OperatorMatrix, TruncatedBasis};

pub const COMMUTATOR_TOL: f64 = 1e-10;
pub const ROW_NORM_TOL: f64 = 1e-10;
/// Eigenvalues of `Δ²` above this span the defect space.
pub const DEFECT_RANK_TOL: f64 = 1e-10;
pub const CO_INVARIANCE_TOL: f64 = 1e-10;
/// Largest number of columns `build_l` will assemble.
pub const MAX_L_COLUMNS: usize = 200_000;

/// A validated tuple of commuting `m × m` matrices with `Σ T_k T_k^* ≤ 𝟙`.
#[derive(Clone, Debug, PartialEq)]
pub struct DContraction {
    matrices: Vec<CMatrix>,
}

impl DContraction {
    /// Validates commutativity and the row-norm bound.
    pub fn new(matrices: Vec<CMatrix>) -> Result<Self> {
        validate(matrices)
    }

    pub fn d(&self) -> usize {
        self.matrices.len()
    }

    pub fn m(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// `Σ_k T_k T_k^*`.
    pub fn row_sum(&self) -> CMatrix {
        let m = self.m();
        self.matrices
            .iter()
            .fold(CMatrix::zeros(m, m), |acc, t| acc + t * t.adjoint())
    }

    /// `‖(T_1, …, T_d)‖_row = ‖Σ T_k T_k^*‖^{1/2}`.
    pub fn row_norm(&self) -> f64 {
        norm(&self.row_sum()).sqrt()
    }

    /// `(r T_1, …, r T_d)` for `0 ≤ r ≤ 1`.
    pub fn scaled(&self, r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidArgument(format!(
                "scale {r} is outside [0, 1]"
            )));
        }
        Ok(DContraction {
            matrices: self.matrices.iter().map(|t| t * Complex64::new(r, 0.0)).collect(),
        })
    }

    /// `f(T_1, …, T_d)`.
    pub fn apply_poly(&self, f: &Poly) -> Result<CMatrix> {
        if f.dim() != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                actual: f.dim(),
            });
        }
        let m = self.m();
        let mut powers: HashMap<MultiIndex, CMatrix> = HashMap::new();
        let mut out = CMatrix::zeros(m, m);
        for (alpha, c) in f.terms() {
            out += self.monomial(alpha, &mut powers) * *c;
        }
        Ok(out)
    }

    fn monomial(&self, alpha: &MultiIndex, cache: &mut HashMap<MultiIndex, CMatrix>) -> CMatrix {
        if let Some(p) = cache.get(alpha) {
            return p.clone();
        }
        let value = match (0..self.d()).find(|&k| alpha.get(k) > 0) {
            None => CMatrix::identity(self.m(), self.m()),
            Some(k) => {
                let lower = alpha.lowered(k).expect("positive exponent");
                &self.matrices[k] * self.monomial(&lower, cache)
            }
        };
        cache.insert(alpha.clone(), value.clone());
        value
    }

    pub fn to_json(&self) -> DContractionJson {
        DContractionJson {
            d: self.d(),
            m: self.m(),
            matrices: self
                .matrices
                .iter()
                .map(|t| {
                    let mut entries = Vec::with_capacity(t.len());
                    for i in 0..t.nrows() {
                        for j in 0..t.ncols() {
                            entries.push([t[(i, j)].re, t[(i, j)].im]);
                        }
                    }
                    entries
                })
                .collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: DContractionJson = serde_json::from_str(s)?;
        DContraction::try_from(raw)
    }
}

/// Wire form: `{"d": 2, "m": 3, "matrices": [[[re, im], …], …]}` with each
/// matrix row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DContractionJson {
    pub d: usize,
    pub m: usize,
    pub matrices: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<DContractionJson> for DContraction {
    type Error = Error;

    fn try_from(raw: DContractionJson) -> Result<Self> {
        if raw.matrices.len() != raw.d {
            return Err(Error::Parse(format!(
                "matrices: expected {} matrices, got {}",
                raw.d,
                raw.matrices.len()
            )));
        }
        let mut matrices = Vec::with_capacity(raw.d);
        for (k, entries) in raw.matrices.iter().enumerate() {
            if entries.len() != raw.m * raw.m {
                return Err(Error::Parse(format!(
                    "matrices[{k}]: expected {} entries, got {}",
                    raw.m * raw.m,
                    entries.len()
                )));
            }
            if entries.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Parse(format!("matrices[{k}]: non-finite entry")));
            }
            matrices.push(CMatrix::from_row_iterator(
                raw.m,
                raw.m,
                entries.iter().map(|&[re, im]| Complex64::new(re, im)),
            ));
        }
        validate(matrices)
    }
}

/// Checks that the tuple commutes and is a row contraction.
pub fn validate(matrices: Vec<CMatrix>) -> Result<DContraction> {
    let Some(first) = matrices.first() else {
        return Err(Error::InvalidArgument("empty operator tuple".into()));
    };
    let m = first.nrows();
    if m == 0 {
        return Err(Error::InvalidArgument("zero-dimensional state space".into()));
    }
    for t in &matrices {
        if t.nrows() != m || t.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: t.nrows().max(t.ncols()),
            });
        }
    }
    let norms: Vec<f64> = matrices.iter().map(norm).collect();
    let mut worst: Option<(usize, usize, f64, f64)> = None;
    for i in 0..matrices.len() {
        for j in (i + 1)..matrices.len() {
            let residual = norm(&(&matrices[i] * &matrices[j] - &matrices[j] * &matrices[i]));
            let allowed = COMMUTATOR_TOL * (norms[i] * norms[j]).max(1.0);
            if residual > allowed && worst.is_none_or(|w| residual / allowed > w.3) {
                worst = Some((i, j, residual, residual / allowed));
            }
        }
    }
    if let Some((i, j, residual, _)) = worst {
        return Err(Error::NonCommuting { i, j, residual });
    }
    let t = DContraction { matrices };
    let top = norm(&t.row_sum());
    if top > 1.0 + ROW_NORM_TOL {
        return Err(Error::RowNormExceeded { excess: top - 1.0 });
    }
    Ok(t)
}

/// The defect operator and the space it spans.
#[derive(Clone, Debug)]
pub struct Defect {
    /// `Δ = (𝟙 − Σ T_k T_k^*)^{1/2}`.
    pub delta: CMatrix,
    pub rank: usize,
    /// Orthonormal basis of `K` as columns.
    pub k_basis: CMatrix,
    /// Eigenvalues of `Δ` on the `K` basis vectors.
    pub k_values: Vec<f64>,
}

pub fn defect(t: &DContraction) -> Defect {
    let m = t.m();
    let delta_sq = CMatrix::identity(m, m) - t.row_sum();
    let (values, vectors) = hermitian_eigen(&delta_sq).expect("defect square is Hermitian");
    let roots: Vec<f64> = values.iter().map(|&v| v.max(0.0).sqrt()).collect();
    let diag = nalgebra::DVector::from_iterator(m, roots.iter().map(|&r| Complex64::new(r, 0.0)));
    let delta = &vectors * CMatrix::from_diagonal(&diag) * vectors.adjoint();
    let kept: Vec<usize> = (0..m).filter(|&i| values[i] > DEFECT_RANK_TOL).collect();
    let k_basis = CMatrix::from_fn(m, kept.len(), |r, c| vectors[(r, kept[c])]);
    Defect {
        delta,
        rank: kept.len(),
        k_basis,
        k_values: kept.iter().map(|&i| roots[i]).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NullStatus {
    Null,
    NonNull,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct AInfinity {
    pub matrix: CMatrix,
    pub status: NullStatus,
    pub iterations: usize,
    /// `‖P^n(𝟙)‖` for `n = 0, 1, …`.
    pub trend: Vec<f64>,
    /// Every step satisfied `P^{n+1}(𝟙) ≤ P^n(𝟙)` up to `1e-10`.
    pub monotone: bool,
    /// The final iterate is identically zero.
    pub exact_zero: bool,
}

/// `P(A) = Σ_k T_k A T_k^*`.
pub fn p_map(t: &DContraction, a: &CMatrix) -> CMatrix {
    let m = t.m();
    t.matrices
        .iter()
        .fold(CMatrix::zeros(m, m), |acc, tk| acc + tk * a * tk.adjoint())
}

/// `P^n(𝟙)`.
pub fn p_power_identity(t: &DContraction, n: usize) -> CMatrix {
    let mut a = CMatrix::identity(t.m(), t.m());
    for _ in 0..n {
        a = p_map(t, &a);
    }
    a
}

/// Iterates `A ↦ P(A)` from `𝟙` to decide whether `T` is null.
pub fn a_infinity(t: &DContraction, maxiter: usize) -> AInfinity {
    let mut a = CMatrix::identity(t.m(), t.m());
    let mut trend = vec![norm(&a)];
    let mut monotone = true;
    let mut status = NullStatus::Undecided;
    let mut iterations = 0;
    while iterations < maxiter {
        let next = p_map(t, &a);
        iterations += 1;
        let gap = &a - &next;
        if min_eigenvalue_hermitian(&gap).map_or(true, |e| e < -1e-10) {
            monotone = false;
        }
        let step = norm(&gap);
        a = next;
        let size = norm(&a);
        trend.push(size);
        if size < 1e-10 {
            status = NullStatus::Null;
            break;
        }
        if step < 1e-12 {
            status = NullStatus::NonNull;
            break;
        }
    }
    let exact_zero = a.iter().all(|z| *z == Complex64::default());
    AInfinity {
        matrix: a,
        status,
        iterations,
        trend,
        monotone,
        exact_zero,
    }
}

/// The dilation map on the degree-`N` truncated symmetric Fock space.
#[derive(Clone, Debug)]
pub struct DilationResult {
    pub defect: Defect,
    pub basis: TruncatedBasis,
    /// `m × (basis.len() · rank)`; column `α·rank + j` is the image of `ê_α ⊗ k_j`.
    pub l: CMatrix,
    pub l_norm: f64,
    /// `‖𝟙 − L L^*‖`.
    pub coisometry_residual: f64,
    /// `‖P^{N+1}(𝟙)‖`.
    pub tail_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DilationSummary {
    pub d: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub max_degree: usize,
    pub defect_rank: usize,
    pub l_norm: f64,
    pub coisometry_residual: f64,
    pub tail_bound: f64,
}

impl DilationResult {
    pub fn summary(&self) -> DilationSummary {
        DilationSummary {
            d: self.basis.dim(),
            m: self.l.nrows(),
            max_degree: self.basis.max_degree(),
            defect_rank: self.defect.rank,
            l_norm: self.l_norm,
            coisometry_residual: self.coisometry_residual,
            tail_bound: self.tail_bound,
        }
    }

    /// `L (A ⊗ 𝟙_K)`, an `m × (n·rank)` matrix.
    pub fn lift(&self, a: &OperatorMatrix) -> Result<CMatrix> {
        a.check_basis(&self.basis)?;
        Ok(self.right_multiply(a.matrix()))
    }

    fn right_multiply(&self, a: &CMatrix) -> CMatrix {
        let r = self.defect.rank;
        let n = self.basis.len();
        let mut out = CMatrix::zeros(self.l.nrows(), n * r);
        for j in 0..r {
            let lj = CMatrix::from_fn(self.l.nrows(), n, |i, alpha| self.l[(i, alpha * r + j)]);
            let prod = lj * a;
            for beta in 0..n {
                out.set_column(beta * r + j, &prod.column(beta));
            }
        }
        out
    }

    /// `L (A B^* ⊗ 𝟙_K) L^*` without forming `A B^*`.
    pub fn apply_factored(&self, a: &OperatorMatrix, b: &OperatorMatrix) -> Result<CMatrix> {
        Ok(self.lift(a)? * self.lift(b)?.adjoint())
    }

    /// `L (X ⊗ 𝟙_K) L^*`.
    pub fn apply(&self, x: &OperatorMatrix) -> Result<CMatrix> {
        x.check_basis(&self.basis)?;
        Ok(self.right_multiply(x.matrix()) * self.l.adjoint())
    }
}

/// Assembles `L` column by column over `ê_α ⊗ k_j`.
pub fn build_l(t: &DContraction, max_degree: usize) -> Result<DilationResult> {
    let basis = build_basis(t.d(), max_degree)?;
    let defect = defect(t);
    let rank = defect.rank;
    let columns = basis.len() * rank;
    if columns > MAX_L_COLUMNS {
        return Err(Error::ResourceLimit {
            what: "dilation columns",
            requested: columns as u128,
            limit: MAX_L_COLUMNS as u128,
        });
    }
    let m = t.m();
    let mut l = CMatrix::zeros(m, columns);
    // images[α] = T^α Δ K
    let delta_k = &defect.delta * &defect.k_basis;
    let mut images: Vec<CMatrix> = Vec::with_capacity(basis.len());
    for (pos, alpha) in basis.indices().iter().enumerate() {
        let image = match (0..t.d()).find(|&k| alpha.get(k) > 0) {
            None => delta_k.clone(),
            Some(k) => {
                let lower = basis
                    .position(&alpha.lowered(k).expect("positive exponent"))
                    .expect("lower index precedes");
                &t.matrices[k] * &images[lower]
            }
        };
        let scaled = &image * Complex64::new(1.0 / basis.sqrt_weight(pos), 0.0);
        l.columns_mut(pos * rank, rank).copy_from(&scaled);
        images.push(image);
    }
    let llt = &l * l.adjoint();
    let l_norm = norm(&llt).sqrt();
    let coisometry_residual = norm(&(CMatrix::identity(m, m) - &llt));
    let tail_bound = norm(&p_power_identity(t, max_degree + 1));
    Ok(DilationResult {
        defect,
        basis,
        l,
        l_norm,
        coisometry_residual,
        tail_bound,
    })
}

/// [`build_l`] for `r T`, the device used when `T` is not null.
pub fn build_l_scaled(t: &DContraction, max_degree: usize, r: f64) -> Result<DilationResult> {
    build_l(&t.scaled(r)?, max_degree)
}

/// `φ(X) = L (X ⊗ 𝟙_K) L^*` for an operator `X` on the truncated Fock space.
pub fn amorphism_apply(t: &DContraction, max_degree: usize, x: &OperatorMatrix) -> Result<CMatrix> {
    build_l(t, max_degree)?.apply(x)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VnReport {
    /// `‖f(T)‖`.
    pub lhs: f64,
    /// `‖M_f‖` on the degree-`N` truncation.
    pub rhs: f64,
    /// `‖M_f‖` on the degree-`N/2` truncation, when `f` fits there.
    pub rhs_half: Option<f64>,
    pub margin: f64,
    pub holds: bool,
}

/// Compares `‖f(T)‖` with the truncated multiplier norm of `f`.
pub fn vn_check(t: &DContraction, f: &Poly, max_degree: usize) -> Result<VnReport> {
    let basis = build_basis(t.d(), max_degree)?;
    let lhs = norm(&t.apply_poly(f)?);
    let rhs = multiplier_lower_bound(f, &basis)?;
    let half = max_degree / 2;
    let rhs_half = match f.degree() {
        Some(deg) if deg > half => None,
        _ => Some(multiplier_lower_bound(f, &build_basis(t.d(), half)?)?),
    };
    Ok(VnReport {
        lhs,
        rhs,
        rhs_half,
        margin: rhs - lhs,
        holds: lhs <= rhs + 1e-9,
    })
}

/// Points on the unit sphere of `ℂ^d`, read as the joint-diagonal normal tuple
/// `Z_k = diag(ζ_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalTuple {
    d: usize,
    points: Vec<Vec<Complex64>>,
}

impl SphericalTuple {
    pub fn new(d: usize, points: Vec<Vec<Complex64>>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: p.len(),
                });
            }
            let n2: f64 = p.iter().map(|z| z.norm_sqr()).sum();
            if (n2 - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "point {i} has squared norm {n2}, not 1"
                )));
            }
        }
        Ok(SphericalTuple { d, points })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Complex64>] {
        &self.points
    }

    pub fn matrices(&self) -> Vec<CMatrix> {
        (0..self.d)
            .map(|k| {
                let diag = nalgebra::DVector::from_iterator(
                    self.points.len(),
                    self.points.iter().map(|p| p[k]),
                );
                CMatrix::from_diagonal(&diag)
            })
            .collect()
    }

    /// `‖f(Z)‖ = max_ζ |f(ζ)|`.
    pub fn poly_norm(&self, f: &Poly) -> f64 {
        self.points
            .iter()
            .map(|p| f.evaluate(p).norm())
            .fold(0.0, f64::max)
    }
}

/// The model tuple `n·S ⊕ Z` on `n` copies of the degree-`N` truncation
/// followed by the points of `Z`.
pub fn model_tuple(
    multiplicity: usize,
    spherical: Option<&SphericalTuple>,
    d: usize,
    max_degree: usize,
) -> Result<Vec<CMatrix>> {
    let shifts = if multiplicity > 0 {
        shift_tuple(&build_basis(d, max_degree)?)?
    } else {
        Vec::new()
    };
    let block = shifts.first().map_or(0, |s| s.nrows());
    let z = match spherical {
        Some(z) if z.d() != d => {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: z.d(),
            })
        }
        Some(z) => z.matrices(),
        None => Vec::new(),
    };
    let zlen = spherical.map_or(0, SphericalTuple::len);
    let size = multiplicity * block + zlen;
    if size == 0 {
        return Err(Error::InvalidArgument("model space is zero-dimensional".into()));
    }
    Ok((0..d)
        .map(|k| {
            let mut a = CMatrix::zeros(size, size);
            for c in 0..multiplicity {
                a.view_mut((c * block, c * block), (block, block))
                    .copy_from(&shifts[k]);
            }
            if zlen > 0 {
                let off = multiplicity * block;
                a.view_mut((off, off), (zlen, zlen)).copy_from(&z[k]);
            }
            a
        })
        .collect())
}

/// Compresses `n·S ⊕ Z` to the subspace spanned by the orthonormal columns of
/// `subspace`, which must be co-invariant (`A_k^* K ⊆ K`).
pub fn model_compress(
    multiplicity: usize,
    spherical: Option<&SphericalTuple>,
    subspace: &CMatrix,
    d: usize,
    max_degree: usize,
) -> Result<DContraction> {
    let tuple = model_tuple(multiplicity, spherical, d, max_degree)?;
    let size = tuple[0].nrows();
    if subspace.ncols() == 0 {
        return Err(Error::InvalidArgument("subspace K = {0} is degenerate".into()));
    }
    if subspace.nrows() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            actual: subspace.nrows(),
        });
    }
    let k = subspace.ncols();
    let ortho = (subspace.ad_mul(subspace) - CMatrix::identity(k, k)).norm();
    if ortho > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "subspace columns are not orthonormal (residual {ortho:.3e})"
        )));
    }
    let projector_complement = CMatrix::identity(size, size) - subspace * subspace.adjoint();
    let residual = tuple
        .iter()
        .map(|a| norm(&(&projector_complement * a.ad_mul(subspace))))
        .fold(0.0, f64::max);
    if residual > CO_INVARIANCE_TOL {
        return Err(Error::NotCoInvariant { residual });
    }
    let compressed = tuple
        .iter()
        .map(|a| subspace.ad_mul(&(a * subspace)))
        .collect();
    validate(compressed)
}

/// Columns spanning the polynomials of degree `≤ m` inside the degree-`N` truncation.
pub fn low_degree_subspace(basis: &TruncatedBasis, m: usize) -> CMatrix {
    let k = basis.prefix_len(m);
    CMatrix::identity(basis.len(), k)
}

/// The normalized truncated kernel function `u_t^{(N)}` as a one-column subspace.
pub fn kernel_subspace(t: &PointInBall, basis: &TruncatedBasis) -> Result<CMatrix> {
    let u = kernel_poly(t, basis.max_degree()).poly;
    let v = basis.coordinates(&u)?;
    let n = v.norm();
    Ok(CMatrix::from_column_slice(v.len(), 1, (v / Complex64::new(n, 0.0)).as_slice()))
}

/// Upper-triangular Jordan block `λ𝟙 + N` of size `m`.
pub fn jordan_block(m: usize, lambda: Complex64) -> CMatrix {
    CMatrix::from_fn(m, m, |i, j| {
        if i == j {
            lambda
        } else if j == i + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::default()
        }
    })
}

fn random_complex(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::new(
        rng.random_range(-radius..radius),
        rng.random_range(-radius..radius),
    )
}

/// A deterministic commuting tuple `(p_1(J), …, p_d(J))` scaled to the given row norm.
///
/// `J` is a Jordan block next to a diagonal part and each `p_k` is a cubic
/// with pseudo-random coefficients, so the tuple commutes exactly in exact
/// arithmetic whatever the draw.
pub fn commuting_sample(d: usize, m: usize, seed: u64, row_norm: f64) -> Result<DContraction> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidArgument("need d >= 1 and m >= 1".into()));
    }
    if !(0.0..=1.0).contains(&row_norm) {
        return Err(Error::InvalidArgument(format!(
            "row norm {row_norm} is outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jordan = 1 + (rng.random_range(0..m));
    let mut j = CMatrix::zeros(m, m);
    let lambda = random_complex(&mut rng, 0.7);
    j.view_mut((0, 0), (jordan, jordan))
        .copy_from(&jordan_block(jordan, lambda));
    for i in jordan..m {
        j[(i, i)] = random_complex(&mut rng, 0.7);
    }
    let id = CMatrix::identity(m, m);
    let j2 = &j * &j;
    let j3 = &j2 * &j;
    let raw: Vec<CMatrix> = (0..d)
        .map(|_| {
            &id * random_complex(&mut rng, 1.0)
                + &j * random_complex(&mut rng, 1.0)
                + &j2 * random_complex(&mut rng, 0.5)
                + &j3 * random_complex(&mut rng, 0.25)
        })
        .collect();
    let current = norm(
        &raw.iter()
            .fold(CMatrix::zeros(m, m), |acc, t| acc + t * t.adjoint()),
    )
    .sqrt();
    if current == 0.0 {
        return Err(Error::InvalidArgument("sampled tuple vanished".into()));
    }
    let scale = Complex64::new(row_norm / current, 0.0);
    let matrices: Vec<CMatrix> = raw.into_iter().map(|t| t * scale).collect();
    validate(matrices)
}
