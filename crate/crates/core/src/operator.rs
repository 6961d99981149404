//! Discrete elliptic operator `A(t) u = a11 u'' + a1 u' + c(t, x) u` with the
//! boundary condition folded in.
//!
//! Diffusion uses the three-point stencil. Advection is upwinded so that
//! every off-diagonal entry stays nonnegative: forward difference where
//! `a1 >= 0`, backward where `a1 < 0`. Neumann and Robin rows eliminate a
//! ghost node through the centred form of `b u' + d u = 0`, so pure Neumann
//! rows preserve constants exactly.
//!
//! Rows are stored as `(sub, sup, row_sum)` next to `diag`; [`apply`] uses the
//! difference form `sub (u_{i-1} - u_i) + sup (u_{i+1} - u_i) + row_sum u_i`,
//! which maps constants to `row_sum` without cancellation error.

use crate::coefficients::{BcKind, CoefficientField, DrivingSystem};
use crate::error::{Error, Result};
use crate::grid::{inner_product, DiscreteField, Dofs, Grid1D};
use crate::tridiag;

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
    row_sum: Vec<f64>,
    bc: BcKind,
    time: f64,
    grid: Grid1D,
}

/// Outcome of [`check_m_matrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct MMatrixDiagnostic {
    pub passed: bool,
    /// Dof row that failed, if any.
    pub row: Option<usize>,
    pub reason: Option<String>,
    /// Smallest `diag - sum |off|` margin over all rows of `I - dt A`.
    pub min_margin: f64,
}

fn validate(field: &CoefficientField) -> Result<()> {
    for (i, &a) in field.a11().values().iter().enumerate() {
        if !(a >= field.alpha0()) {
            return Err(Error::EllipticityViolation {
                node: i,
                value: a,
                alpha0: field.alpha0(),
            });
        }
    }
    let v = field.violations();
    if !v.is_empty() {
        return Err(Error::InvalidConfiguration(v.join("; ")));
    }
    Ok(())
}

/// Assembles `A(t)`. Validates the coefficient field first.
pub fn assemble(
    field: &CoefficientField,
    driver: &DrivingSystem,
    t: f64,
) -> Result<TridiagonalOperator> {
    validate(field)?;
    field.check_driver(driver)?;
    let angles = driver.angles_at(t);
    let mut c = vec![0.0; field.grid().n_nodes()];
    field.c_into(&angles, &mut c);
    let d = field.d_at(&angles);
    Ok(assemble_from_parts(field, &c, d, t))
}

/// Assembly from already-evaluated `c` samples and Robin data.
/// The field is assumed valid.
pub(crate) fn assemble_from_parts(
    field: &CoefficientField,
    c: &[f64],
    (d_left, d_right): (f64, f64),
    time: f64,
) -> TridiagonalOperator {
    let grid = field.grid();
    let h = grid.h();
    let h2 = h * h;
    let a11 = field.a11().values();
    let a1 = field.a1().values();
    let n_nodes = grid.n_nodes();

    // node-wise (left, right) couplings, both >= 0
    let couplings = |i: usize| -> (f64, f64) {
        let diff = a11[i] / h2;
        let adv = a1[i];
        if adv >= 0.0 {
            (diff, diff + adv / h)
        } else {
            (diff - adv / h, diff)
        }
    };

    let bc = field.bc();
    let (sub, sup, row_sum) = match bc {
        BcKind::Dirichlet => {
            let n = grid.n_interior();
            let mut sub = vec![0.0; n];
            let mut sup = vec![0.0; n];
            let mut rs = vec![0.0; n];
            for k in 0..n {
                let i = k + 1;
                let (l, r) = couplings(i);
                rs[k] = c[i];
                if k > 0 {
                    sub[k] = l;
                } else {
                    rs[k] -= l;
                }
                if k + 1 < n {
                    sup[k] = r;
                } else {
                    rs[k] -= r;
                }
            }
            (sub, sup, rs)
        }
        BcKind::Neumann | BcKind::Robin => {
            let (d_left, d_right) = if bc == BcKind::Robin {
                (d_left, d_right)
            } else {
                (0.0, 0.0)
            };
            let (b_left, b_right) = field.b();
            let gamma_left = 2.0 * h * d_left / b_left;
            let gamma_right = -2.0 * h * d_right / b_right;
            let mut sub = vec![0.0; n_nodes];
            let mut sup = vec![0.0; n_nodes];
            let mut rs = vec![0.0; n_nodes];
            for i in 0..n_nodes {
                let (l, r) = couplings(i);
                if i == 0 {
                    // u_{-1} = u_1 + gamma_left u_0
                    sup[i] = l + r;
                    rs[i] = if gamma_left == 0.0 {
                        c[i]
                    } else {
                        c[i] + l * gamma_left
                    };
                } else if i == n_nodes - 1 {
                    // u_{n+2} = u_n + gamma_right u_{n+1}
                    sub[i] = l + r;
                    rs[i] = if gamma_right == 0.0 {
                        c[i]
                    } else {
                        c[i] + r * gamma_right
                    };
                } else {
                    sub[i] = l;
                    sup[i] = r;
                    rs[i] = c[i];
                }
            }
            (sub, sup, rs)
        }
    };
    let diag = (0..row_sum.len())
        .map(|k| row_sum[k] - sub[k] - sup[k])
        .collect();
    TridiagonalOperator {
        sub,
        diag,
        sup,
        row_sum,
        bc,
        time,
        grid: grid.clone(),
    }
}

impl TridiagonalOperator {
    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    pub fn row_sum(&self) -> &[f64] {
        &self.row_sum
    }

    pub fn bc(&self) -> BcKind {
        self.bc
    }

    pub fn dofs(&self) -> Dofs {
        self.bc.dofs()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn n_dofs(&self) -> usize {
        self.diag.len()
    }

    /// Dense row-major copy, for diagnostics and tests.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n_dofs();
        let mut m = vec![vec![0.0; n]; n];
        for k in 0..n {
            m[k][k] = self.diag[k];
            if k > 0 {
                m[k][k - 1] = self.sub[k];
            }
            if k + 1 < n {
                m[k][k + 1] = self.sup[k];
            }
        }
        m
    }

    /// Matrix-vector product on dof vectors.
    pub fn apply_dofs(&self, u: &[f64], out: &mut [f64]) {
        let n = self.n_dofs();
        for k in 0..n {
            let uk = u[k];
            let mut y = self.row_sum[k] * uk;
            if k > 0 {
                y += self.sub[k] * (u[k - 1] - uk);
            }
            if k + 1 < n {
                y += self.sup[k] * (u[k + 1] - uk);
            }
            out[k] = y;
        }
    }

    /// Product with the plain transpose on dof vectors.
    pub fn apply_transpose_dofs(&self, u: &[f64], out: &mut [f64]) {
        let n = self.n_dofs();
        for k in 0..n {
            let mut y = self.diag[k] * u[k];
            if k > 0 {
                y += self.sup[k - 1] * u[k - 1];
            }
            if k + 1 < n {
                y += self.sub[k + 1] * u[k + 1];
            }
            out[k] = y;
        }
    }

    /// Solves `(I - alpha A) x = rhs` in place.
    pub fn solve_shifted(&self, alpha: f64, rhs: &mut [f64], scratch: &mut [f64]) -> Result<()> {
        let (sub, diag, sup) = self.shifted_bands(alpha);
        tridiag::solve_in_place(&sub, &diag, &sup, rhs, scratch)
    }

    /// Solves `(I - alpha A)^T x = rhs` in place.
    pub fn solve_shifted_transpose(
        &self,
        alpha: f64,
        rhs: &mut [f64],
        scratch: &mut [f64],
    ) -> Result<()> {
        let (sub, diag, sup) = self.shifted_bands(alpha);
        let n = diag.len();
        let mut t_sub = vec![0.0; n];
        let mut t_sup = vec![0.0; n];
        for k in 0..n {
            if k > 0 {
                t_sub[k] = sup[k - 1];
            }
            if k + 1 < n {
                t_sup[k] = sub[k + 1];
            }
        }
        tridiag::solve_in_place(&t_sub, &diag, &t_sup, rhs, scratch)
    }

    fn shifted_bands(&self, alpha: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        (
            self.sub.iter().map(|v| -alpha * v).collect(),
            self.diag.iter().map(|v| 1.0 - alpha * v).collect(),
            self.sup.iter().map(|v| -alpha * v).collect(),
        )
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut out = self.clone();
        out.diag.iter_mut().for_each(|v| *v += shift);
        out.row_sum.iter_mut().for_each(|v| *v += shift);
        out
    }
}

/// `A u` as a field; Dirichlet output vanishes on the boundary.
pub fn apply(op: &TridiagonalOperator, u: &DiscreteField) -> Result<DiscreteField> {
    let grid = op.grid();
    if u.len() != grid.n_nodes() {
        return Err(Error::Shape {
            expected: grid.n_nodes(),
            found: u.len(),
        });
    }
    let range = grid.dof_range(op.dofs());
    let mut out = vec![0.0; op.n_dofs()];
    op.apply_dofs(&u.values()[range], &mut out);
    DiscreteField::from_dofs(grid, op.dofs(), &out)
}

fn check_unit(op: &TridiagonalOperator, w: &DiscreteField) -> Result<()> {
    let norm = op.grid().norm(w)?;
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "kappa needs a unit-norm profile, got norm {norm}"
        )));
    }
    Ok(())
}

/// `kappa = <A w, w>` for a unit-norm `w`.
pub fn rayleigh_kappa(op: &TridiagonalOperator, w: &DiscreteField) -> Result<f64> {
    check_unit(op, w)?;
    let aw = apply(op, w)?;
    inner_product(&aw, w, op.grid())
}

/// Rayleigh quotient on dof vectors with the trapezoid weights; no norm check.
pub(crate) fn weighted_rayleigh(
    op: &TridiagonalOperator,
    weights: &[f64],
    w: &[f64],
    buf: &mut [f64],
) -> f64 {
    op.apply_dofs(w, buf);
    buf.iter()
        .zip(w)
        .zip(weights)
        .map(|((a, b), q)| q * a * b)
        .sum()
}

/// Kappa through the integrated-by-parts form
/// `-int a11 (w')^2 - int a11' w' w + int (a1 w' + c w) w + [a11 w' w nu]`.
/// First-order consistent with [`rayleigh_kappa`]; used as a cross-check.
pub fn kappa_parts_form(
    field: &CoefficientField,
    driver: &DrivingSystem,
    t: f64,
    w: &DiscreteField,
) -> Result<f64> {
    let grid = field.grid();
    if w.len() != grid.n_nodes() {
        return Err(Error::Shape {
            expected: grid.n_nodes(),
            found: w.len(),
        });
    }
    let norm = grid.norm(w)?;
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "kappa needs a unit-norm profile, got norm {norm}"
        )));
    }
    field.check_driver(driver)?;
    let angles = driver.angles_at(t);
    let mut c = vec![0.0; grid.n_nodes()];
    field.c_into(&angles, &mut c);
    let (d_left, d_right) = match field.bc() {
        BcKind::Robin => field.d_at(&angles),
        _ => (0.0, 0.0),
    };

    let h = grid.h();
    let n = grid.n_nodes();
    let wv = w.values();
    let a11 = field.a11().values();
    let a1 = field.a1().values();

    // -int a11 (w')^2 over cells, midpoint a11
    let mut energy = 0.0;
    for i in 0..n - 1 {
        let dw = (wv[i + 1] - wv[i]) / h;
        energy += 0.5 * (a11[i] + a11[i + 1]) * dw * dw * h;
    }

    let deriv = |f: &[f64], i: usize| -> f64 {
        if i == 0 {
            (f[1] - f[0]) / h
        } else if i == n - 1 {
            (f[n - 1] - f[n - 2]) / h
        } else {
            (f[i + 1] - f[i - 1]) / (2.0 * h)
        }
    };
    let (b_left, b_right) = field.b();
    let dw_at = |i: usize| -> f64 {
        match field.bc() {
            BcKind::Neumann | BcKind::Robin if i == 0 => -d_left * wv[0] / b_left,
            BcKind::Neumann | BcKind::Robin if i == n - 1 => -d_right * wv[n - 1] / b_right,
            _ => deriv(wv, i),
        }
    };

    let mut lower = 0.0;
    for i in 0..n {
        let dw = dw_at(i);
        let integrand = -deriv(a11, i) * dw * wv[i] + a1[i] * dw * wv[i] + c[i] * wv[i] * wv[i];
        lower += grid.weight(i) * integrand;
    }

    let boundary = match field.bc() {
        BcKind::Dirichlet => 0.0,
        BcKind::Neumann | BcKind::Robin => {
            let left = -a11[0] * dw_at(0) * wv[0];
            let right = a11[n - 1] * dw_at(n - 1) * wv[n - 1];
            left + right
        }
    };
    Ok(-energy + lower + boundary)
}

/// Checks that `I - dt A` has positive diagonal, nonpositive off-diagonals
/// and strict row diagonal dominance; together these make it a nonsingular
/// M-matrix with an entrywise nonnegative inverse.
pub fn check_m_matrix(op: &TridiagonalOperator, dt: f64) -> MMatrixDiagnostic {
    let n = op.n_dofs();
    let mut min_margin = f64::INFINITY;
    let mut failure: Option<(usize, String)> = None;
    for k in 0..n {
        let diag = 1.0 - dt * op.diag[k];
        let lo = if k > 0 { -dt * op.sub[k] } else { 0.0 };
        let hi = if k + 1 < n { -dt * op.sup[k] } else { 0.0 };
        // 1 - dt * row_sum avoids cancellation in diag - |lo| - |hi|
        let margin = if lo <= 0.0 && hi <= 0.0 {
            1.0 - dt * op.row_sum[k]
        } else {
            diag - lo.abs() - hi.abs()
        };
        min_margin = min_margin.min(margin);
        if failure.is_some() {
            continue;
        }
        if !(diag > 0.0) {
            failure = Some((k, format!("diagonal {diag} is not positive")));
        } else if lo > 0.0 || hi > 0.0 {
            failure = Some((k, format!("positive off-diagonal ({lo}, {hi})")));
        } else if !(margin > 0.0) {
            failure = Some((
                k,
                format!("row not strictly diagonally dominant (margin {margin})"),
            ));
        }
    }
    match failure {
        None => MMatrixDiagnostic {
            passed: true,
            row: None,
            reason: None,
            min_margin,
        },
        Some((row, reason)) => MMatrixDiagnostic {
            passed: false,
            row: Some(row),
            reason: Some(reason),
            min_margin,
        },
    }
}
