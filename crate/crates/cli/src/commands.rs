//! One function per subcommand; each returns a finished [`Table`].

use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use dshift_core::dilation::{a_infinity, build_l, build_l_scaled, vn_check, DContraction, NullStatus};
use dshift_core::extremal::{energy_shift, ratio_growth};
use dshift_core::fock::oracle_crosscheck;
use dshift_core::h2space::{gram_matrix, kernel_poly, truncated_gram_matrix, PointInBall, Poly};
use dshift_core::numerics::min_eigenvalue_hermitian;
use dshift_core::shift::{build_basis, relation_residuals};
use dshift_core::zeta::trace_report;

use crate::table::Table;

/// Largest `n` accepted by the tabulating subcommands.
pub const MAX_TABLE_ROWS: usize = 1_000_000;
/// Iterations allowed when classifying a tuple as null or not.
const NULL_TEST_MAXITER: usize = 100_000;
/// Hyponormality is asserted up to this slack.
const HYPONORMAL_SLACK: f64 = 1e-12;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn selfcheck() -> Result<Table> {
    let check = oracle_crosscheck(3, 6)?;
    let mut t = Table::new(&["max_d", "max_degree", "checked", "mismatches"]);
    t.push(
        "symmetrization oracle vs k!/|k|!",
        vec![json!(3), json!(6), json!(check.checked), json!(check.mismatches.len())],
    );
    for k in &check.mismatches {
        t.violate(format!("oracle disagrees with the factorial formula at k = {k}"));
    }
    Ok(t)
}

pub fn relations(d: usize, max_degree: usize, tol: f64) -> Result<Table> {
    let basis = build_basis(d, max_degree)?;
    let report = relation_residuals(&basis)?;
    let mut t = Table::new(&["d", "N", "quantity", "value", "tolerance", "ok", "note"]);
    let row = |t: &mut Table, anchor: &str, quantity: String, value: f64, limit: f64, ok: bool, note: &str| {
        if !ok {
            t.violate(format!("{quantity} = {value:e} outside tolerance {limit:e}"));
        }
        t.push(
            anchor,
            vec![
                json!(d),
                json!(max_degree),
                json!(quantity),
                json!(value),
                json!(limit),
                json!(ok),
                json!(note),
            ],
        );
    };
    for (name, &value) in &report.residuals {
        let anchor = if name.starts_with("adjoint_commutator") {
            "adjoint commutator identity on the interior"
        } else if name.starts_with("commutator") {
            "shifts commute"
        } else if name == "column_sum" {
            "sum of S_k^* S_k on the interior"
        } else {
            "sum of S_k S_k^* equals 1 - E_0"
        };
        row(&mut t, anchor, name.clone(), value, tol, value <= tol, "");
    }
    if d == 1 {
        row(
            &mut t,
            "shifts commute",
            "commutator".into(),
            0.0,
            tol,
            true,
            "degenerate: a single operator has no pairs",
        );
    }
    for (k, &e) in report.hyponormal_min_eigenvalues.iter().enumerate() {
        row(
            &mut t,
            "hyponormality on the interior",
            format!("hyponormal_min_eigenvalue[{}]", k + 1),
            e,
            -HYPONORMAL_SLACK,
            e >= -HYPONORMAL_SLACK,
            "lower bound",
        );
    }
    let excess = (report.column_sum_norm - d as f64).abs();
    row(
        &mut t,
        "norm of the column sum equals d",
        "column_sum_norm".into(),
        report.column_sum_norm,
        tol,
        excess <= tol * d as f64,
        "",
    );
    Ok(t)
}

fn check_rows(n_max: usize) -> Result<()> {
    ensure!(n_max >= 1, "--n-max must be at least 1");
    ensure!(n_max <= MAX_TABLE_ROWS, "--n-max {n_max} exceeds {MAX_TABLE_ROWS}");
    Ok(())
}

pub fn extremal(d: usize, n_max: usize) -> Result<Table> {
    ensure!(d >= 1, "--d must be at least 1");
    check_rows(n_max)?;
    let mut t = Table::new(&["d", "n", "R_n", "asymptote", "ratio"]);
    for n in 1..=n_max {
        let g = ratio_growth(d, n);
        if !g.ratio.is_finite() || g.ratio < 1.0 - 1e-12 {
            t.violate(format!("growth ratio at n = {n} is {}", g.ratio));
        }
        t.push(
            "multiplier-to-function norm ratio of (z_1...z_d)^n",
            vec![json!(d), json!(n), json!(g.ratio), json!(g.asymptote), json!(g.relative())],
        );
    }
    Ok(t)
}

pub fn energy(d: usize, n_max: usize, tol: f64) -> Result<Table> {
    ensure!(d >= 1, "--d must be at least 1");
    check_rows(n_max)?;
    ensure!(n_max <= 64, "--n-max {n_max} is too large for the direct shift computation");
    let mut t = Table::new(&["d", "n", "closed_form", "direct", "difference", "dimension"]);
    for n in 1..=n_max {
        let r = energy_shift(d, n)?;
        let diff = (r.direct - r.closed_form).abs();
        if diff > tol * r.closed_form.max(1.0) {
            t.violate(format!("energy at n = {n}: direct {} vs closed form {}", r.direct, r.closed_form));
        }
        if r.closed_form > r.bound * (1.0 + tol) {
            t.violate(format!("energy at n = {n} exceeds the symmetric dimension"));
        }
        t.push(
            "vacuum entry of P_*^n(1) for the d-shift",
            vec![json!(d), json!(n), json!(r.closed_form), json!(r.direct), json!(diff), json!(r.bound)],
        );
    }
    Ok(t)
}

pub fn zeta(d: usize, p: f64, cutoff: usize) -> Result<Table> {
    let r = trace_report(d, p, cutoff)?;
    let mut t = Table::new(&[
        "d",
        "p",
        "M",
        "partial_sum",
        "tail_bound",
        "rigorous_tail_bound",
        "verdict",
        "boundary_case",
        "slow_convergence",
    ]);
    let row = serde_json::to_value(&r)?;
    t.push(
        "trace of (1+N)^-p is finite iff p > d",
        vec![
            row["d"].clone(),
            row["p"].clone(),
            row["M"].clone(),
            row["partial_sum"].clone(),
            row["tail_bound"].clone(),
            row["rigorous_tail_bound"].clone(),
            row["verdict"].clone(),
            row["boundary_case"].clone(),
            row["slow_convergence"].clone(),
        ],
    );
    Ok(t)
}

pub fn dilate(path: &Path, max_degree: usize, r: Option<f64>, tol: f64) -> Result<Table> {
    let tuple = DContraction::from_json_str(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    let null = a_infinity(&tuple, NULL_TEST_MAXITER);
    let scale = match (r, null.status) {
        (Some(r), _) => Some(r),
        (None, NullStatus::Null) => None,
        (None, _) => Some(1.0 - 1e-3),
    };
    let result = match scale {
        Some(r) => build_l_scaled(&tuple, max_degree, r)?,
        None => build_l(&tuple, max_degree)?,
    };
    let s = result.summary();
    let mut t = Table::new(&[
        "d",
        "m",
        "N",
        "scale",
        "null_status",
        "defect_rank",
        "l_norm",
        "coisometry_residual",
        "tail_bound",
    ]);
    if s.l_norm > 1.0 + tol.max(1e-9) {
        t.violate(format!("dilation map has norm {} > 1", s.l_norm));
    }
    if s.coisometry_residual > s.tail_bound + tol.max(1e-9) {
        t.violate(format!(
            "coisometry residual {} exceeds the tail bound {}",
            s.coisometry_residual, s.tail_bound
        ));
    }
    t.push(
        "L L^* = 1 - P^{N+1}(1) on the truncated Fock space",
        vec![
            json!(s.d),
            json!(s.m),
            json!(s.max_degree),
            json!(scale.unwrap_or(1.0)),
            serde_json::to_value(null.status)?,
            json!(s.defect_rank),
            json!(s.l_norm),
            json!(s.coisometry_residual),
            json!(s.tail_bound),
        ],
    );
    Ok(t)
}

pub fn vn(tuple_path: &Path, poly_path: &Path, max_degree: usize) -> Result<Table> {
    let tuple = DContraction::from_json_str(&read(tuple_path)?)
        .with_context(|| format!("parsing {}", tuple_path.display()))?;
    let f = Poly::from_json_str(&read(poly_path)?)
        .with_context(|| format!("parsing {}", poly_path.display()))?;
    let r = vn_check(&tuple, &f, max_degree)?;
    let mut t = Table::new(&["d", "m", "N", "norm_f_of_T", "multiplier_norm", "multiplier_norm_half", "margin", "holds"]);
    if !r.holds {
        t.violate(format!("||f(T)|| = {} exceeds the multiplier norm {}", r.lhs, r.rhs));
    }
    t.push(
        "||f(T)|| <= ||M_f|| for d-contractions",
        vec![
            json!(tuple.d()),
            json!(tuple.m()),
            json!(max_degree),
            json!(r.lhs),
            json!(r.rhs),
            r.rhs_half.map_or(Value::Null, |v| json!(v)),
            json!(r.margin),
            json!(r.holds),
        ],
    );
    Ok(t)
}

/// `{"d": 2, "points": [[[re, im], [re, im]], …]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsFile {
    pub d: usize,
    pub points: Vec<Vec<[f64; 2]>>,
}

pub fn parse_points(text: &str) -> Result<Vec<PointInBall>> {
    let raw: PointsFile = serde_json::from_str(text).map_err(dshift_core::Error::from)?;
    ensure!(raw.d >= 1, "d: must be at least 1");
    raw.points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if p.len() != raw.d {
                bail!("points[{i}]: expected {} coordinates, got {}", raw.d, p.len());
            }
            PointInBall::new(p.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                .with_context(|| format!("points[{i}]"))
        })
        .collect()
}

pub fn gram(path: &Path, max_degree: usize, tol: f64) -> Result<Table> {
    let points = parse_points(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    ensure!(!points.is_empty(), "points file lists no points");
    let exact = gram_matrix(&points)?;
    let truncated = truncated_gram_matrix(&points, max_degree)?;
    let tails: Vec<f64> = points.iter().map(|x| kernel_poly(x, max_degree).tail_sq).collect();
    let mut t = Table::new(&[
        "i",
        "j",
        "kernel_re",
        "kernel_im",
        "truncated_re",
        "truncated_im",
        "difference",
        "tail_bound",
        "min_eigenvalue",
    ]);
    for i in 0..points.len() {
        for j in 0..points.len() {
            let diff = (exact[(i, j)] - truncated[(i, j)]).norm();
            let bound = (tails[i] * tails[j]).sqrt();
            if diff > bound + tol {
                t.violate(format!("entry ({i}, {j}) differs by {diff:e}, bound {bound:e}"));
            }
            t.push(
                "kernel Gram matrix and its degree-N truncation",
                vec![
                    json!(i),
                    json!(j),
                    json!(exact[(i, j)].re),
                    json!(exact[(i, j)].im),
                    json!(truncated[(i, j)].re),
                    json!(truncated[(i, j)].im),
                    json!(diff),
                    json!(bound),
                    Value::Null,
                ],
            );
        }
    }
    let min_eig = min_eigenvalue_hermitian(&exact)?;
    if min_eig < -tol {
        t.violate(format!("kernel Gram matrix has eigenvalue {min_eig:e}"));
    }
    t.push(
        "kernel Gram matrices are positive semidefinite",
        std::iter::repeat_n(Value::Null, 8)
            .chain([json!(min_eig)])
            .collect(),
    );
    Ok(t)
}
