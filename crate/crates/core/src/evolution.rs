//! The discrete solution cocycle `U(t, s)` and its adjoint.
//!
//! Step times live on the lattice `t_j = j * dt` in absolute time, so any two
//! compositions that cover the same lattice steps perform bitwise-identical
//! arithmetic. Implicit Euler evaluates the operator at the end of the step;
//! Crank-Nicolson uses both endpoints.

use crate::coefficients::{CoefficientField, DrivingSystem};
use crate::error::{Error, Result};
use crate::grid::{DiscreteField, Grid1D};
use crate::operator::{assemble_from_parts, check_m_matrix, TridiagonalOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    ImplicitEuler,
    CrankNicolson,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::ImplicitEuler => "implicit-euler",
            Scheme::CrankNicolson => "crank-nicolson",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub scheme: Scheme,
    pub dt: f64,
    pub positivity_required: bool,
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::ImplicitEuler,
            dt: 0.01,
            positivity_required: true,
        }
    }
}

impl StepperConfig {
    pub fn implicit_euler(dt: f64) -> Self {
        Self {
            scheme: Scheme::ImplicitEuler,
            dt,
            positivity_required: true,
        }
    }

    pub fn crank_nicolson(dt: f64) -> Self {
        Self {
            scheme: Scheme::CrankNicolson,
            dt,
            positivity_required: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfiguration(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.positivity_required && self.scheme != Scheme::ImplicitEuler {
            return Err(Error::InvalidConfiguration(
                "positivity_required needs the implicit-Euler scheme".into(),
            ));
        }
        Ok(())
    }

    /// Number of lattice steps in `t`, if `t` is step-aligned.
    pub fn steps_in(&self, t: f64) -> Option<i64> {
        let x = t / self.dt;
        let r = x.round();
        if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
            Some(r as i64)
        } else {
            None
        }
    }

    pub(crate) fn aligned(&self, t: f64, what: &str) -> Result<i64> {
        self.steps_in(t).ok_or_else(|| {
            Error::Alignment(format!(
                "{what} = {t} is not a multiple of dt = {}",
                self.dt
            ))
        })
    }

    pub fn time_of(&self, step: i64) -> f64 {
        step as f64 * self.dt
    }
}

/// Solution snapshot at lattice step `step`, carrying the driver at time 0.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionState {
    pub step: i64,
    pub t: f64,
    pub u: DiscreteField,
    pub driver: DrivingSystem,
}

impl EvolutionState {
    pub fn new(
        u: DiscreteField,
        t: f64,
        driver: DrivingSystem,
        cfg: &StepperConfig,
    ) -> Result<Self> {
        let step = cfg.aligned(t, "state time")?;
        Ok(Self {
            step,
            t: cfg.time_of(step),
            u,
            driver,
        })
    }

    /// Driver phase at the state's time.
    pub fn current_driver(&self) -> DrivingSystem {
        self.driver.translate(self.t)
    }
}

/// Reusable stepping context for one coefficient field and driver.
pub struct Propagator<'a> {
    field: &'a CoefficientField,
    driver: &'a DrivingSystem,
    cfg: StepperConfig,
    angles: Vec<f64>,
    c_buf: Vec<f64>,
    scratch: Vec<f64>,
    work: Vec<f64>,
    weights: Vec<f64>,
}

impl<'a> Propagator<'a> {
    pub fn new(
        field: &'a CoefficientField,
        driver: &'a DrivingSystem,
        cfg: StepperConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        crate::operator::assemble(field, driver, 0.0)?;
        let grid = field.grid();
        let n_dofs = grid.dof_range(field.bc().dofs()).len();
        Ok(Self {
            field,
            driver,
            cfg,
            angles: vec![0.0; driver.k()],
            c_buf: vec![0.0; grid.n_nodes()],
            scratch: vec![0.0; n_dofs],
            work: vec![0.0; n_dofs],
            weights: grid.dof_weights(field.bc().dofs()),
        })
    }

    pub fn config(&self) -> &StepperConfig {
        &self.cfg
    }

    pub fn grid(&self) -> &Grid1D {
        self.field.grid()
    }

    pub fn field(&self) -> &CoefficientField {
        self.field
    }

    pub fn driver(&self) -> &DrivingSystem {
        self.driver
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n_dofs(&self) -> usize {
        self.weights.len()
    }

    /// `A(t_step)`.
    pub fn operator_at(&mut self, step: i64) -> TridiagonalOperator {
        let t = self.cfg.time_of(step);
        self.driver.angles_into(t, &mut self.angles);
        self.field.c_into(&self.angles, &mut self.c_buf);
        let d = self.field.d_at(&self.angles);
        assemble_from_parts(self.field, &self.c_buf, d, t)
    }

    fn check_positivity(&self, op: &TridiagonalOperator) -> Result<()> {
        if self.cfg.positivity_required {
            let diag = check_m_matrix(op, self.cfg.dt);
            if !diag.passed {
                return Err(Error::PositivityLoss {
                    time: op.time(),
                    reason: format!(
                        "row {}: {}",
                        diag.row.unwrap_or(0),
                        diag.reason.unwrap_or_default()
                    ),
                });
            }
        }
        Ok(())
    }

    /// Advances the dof vector `u` from lattice step `from` to `from + 1`.
    /// Returns `A(t_{from+1})`.
    pub fn advance(&mut self, from: i64, u: &mut [f64]) -> Result<TridiagonalOperator> {
        let dt = self.cfg.dt;
        let end = self.operator_at(from + 1);
        self.check_positivity(&end)?;
        match self.cfg.scheme {
            Scheme::ImplicitEuler => {
                end.solve_shifted(dt, u, &mut self.scratch)?;
            }
            Scheme::CrankNicolson => {
                let start = self.operator_at(from);
                start.apply_dofs(u, &mut self.work);
                for (x, a) in u.iter_mut().zip(&self.work) {
                    *x += 0.5 * dt * a;
                }
                end.solve_shifted(0.5 * dt, u, &mut self.scratch)?;
            }
        }
        Ok(end)
    }

    /// Applies the weighted adjoint of the step map `from -> from + 1` to `v`.
    pub fn retreat_adjoint(&mut self, from: i64, v: &mut [f64]) -> Result<()> {
        let dt = self.cfg.dt;
        let end = self.operator_at(from + 1);
        self.check_positivity(&end)?;
        for (x, w) in v.iter_mut().zip(&self.weights) {
            *x *= w;
        }
        match self.cfg.scheme {
            Scheme::ImplicitEuler => {
                end.solve_shifted_transpose(dt, v, &mut self.scratch)?;
            }
            Scheme::CrankNicolson => {
                end.solve_shifted_transpose(0.5 * dt, v, &mut self.scratch)?;
                let start = self.operator_at(from);
                start.apply_transpose_dofs(v, &mut self.work);
                for (x, a) in v.iter_mut().zip(&self.work) {
                    *x += 0.5 * dt * a;
                }
            }
        }
        for (x, w) in v.iter_mut().zip(&self.weights) {
            *x /= w;
        }
        Ok(())
    }
}

fn check_shape(grid: &Grid1D, u: &DiscreteField) -> Result<()> {
    if u.len() != grid.n_nodes() {
        return Err(Error::Shape {
            expected: grid.n_nodes(),
            found: u.len(),
        });
    }
    if u.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput("non-finite solution values".into()));
    }
    Ok(())
}

/// One step of the cocycle.
pub fn step(
    state: &EvolutionState,
    field: &CoefficientField,
    cfg: &StepperConfig,
) -> Result<EvolutionState> {
    check_shape(field.grid(), &state.u)?;
    let mut prop = Propagator::new(field, &state.driver, *cfg)?;
    let grid = field.grid();
    let dofs = field.bc().dofs();
    let mut u = state.u.dof_values(grid).to_vec();
    prop.advance(state.step, &mut u)?;
    Ok(EvolutionState {
        step: state.step + 1,
        t: cfg.time_of(state.step + 1),
        u: DiscreteField::from_dofs(grid, dofs, &u)?,
        driver: state.driver.clone(),
    })
}

/// Adjoint of the step that ends at `state`; returns the state one step earlier.
pub fn adjoint_step(
    state: &EvolutionState,
    field: &CoefficientField,
    cfg: &StepperConfig,
) -> Result<EvolutionState> {
    check_shape(field.grid(), &state.u)?;
    let mut prop = Propagator::new(field, &state.driver, *cfg)?;
    let grid = field.grid();
    let dofs = field.bc().dofs();
    let mut v = state.u.dof_values(grid).to_vec();
    prop.retreat_adjoint(state.step - 1, &mut v)?;
    Ok(EvolutionState {
        step: state.step - 1,
        t: cfg.time_of(state.step - 1),
        u: DiscreteField::from_dofs(grid, dofs, &v)?,
        driver: state.driver.clone(),
    })
}

/// `U(t, s) u0` for step-aligned `s <= t`.
pub fn evolve(
    u0: &DiscreteField,
    s: f64,
    t: f64,
    field: &CoefficientField,
    driver: &DrivingSystem,
    cfg: &StepperConfig,
) -> Result<DiscreteField> {
    cfg.validate()?;
    check_shape(field.grid(), u0)?;
    let first = cfg.aligned(s, "start time")?;
    let last = cfg.aligned(t, "end time")?;
    if last < first {
        return Err(Error::Alignment(format!(
            "end time {t} precedes start time {s}"
        )));
    }
    let grid = field.grid();
    let dofs = field.bc().dofs();
    let mut u = u0.dof_values(grid).to_vec();
    if last > first {
        let mut prop = Propagator::new(field, driver, *cfg)?;
        for j in first..last {
            prop.advance(j, &mut u)?;
        }
    }
    DiscreteField::from_dofs(grid, dofs, &u)
}

/// `U(t, s)^* v` in the weighted inner product, for step-aligned `s <= t`.
pub fn evolve_adjoint(
    v: &DiscreteField,
    s: f64,
    t: f64,
    field: &CoefficientField,
    driver: &DrivingSystem,
    cfg: &StepperConfig,
) -> Result<DiscreteField> {
    cfg.validate()?;
    check_shape(field.grid(), v)?;
    let first = cfg.aligned(s, "start time")?;
    let last = cfg.aligned(t, "end time")?;
    if last < first {
        return Err(Error::Alignment(format!(
            "end time {t} precedes start time {s}"
        )));
    }
    let grid = field.grid();
    let dofs = field.bc().dofs();
    let mut x = v.dof_values(grid).to_vec();
    if last > first {
        let mut prop = Propagator::new(field, driver, *cfg)?;
        for j in (first..last).rev() {
            prop.retreat_adjoint(j, &mut x)?;
        }
    }
    DiscreteField::from_dofs(grid, dofs, &x)
}
