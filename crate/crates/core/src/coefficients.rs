//! Coefficient model: spatial profiles, trigonometric time symbols driven by a
//! Kronecker flow on the torus, and the averaged coefficients.
//!
//! The zero-order coefficient is a finite separable sum
//! `c(t, x) = sum_k f_k(theta_t omega) g_k(x)` and the Robin coefficient at
//! each endpoint is a sum of time symbols. The torus flow is
//! `theta_t omega = omega + t * frequencies (mod 1)` with Haar measure; for
//! rationally independent frequencies it is uniquely ergodic and minimal,
//! which callers are responsible for.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{DiscreteField, Dofs, Grid1D};

const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcKind {
    Dirichlet,
    Neumann,
    Robin,
}

impl BcKind {
    pub fn dofs(self) -> Dofs {
        match self {
            BcKind::Dirichlet => Dofs::Interior,
            BcKind::Neumann | BcKind::Robin => Dofs::All,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BcKind::Dirichlet => "dirichlet",
            BcKind::Neumann => "neumann",
            BcKind::Robin => "robin",
        }
    }
}

/// One term `cos_amp cos(2 pi m theta_j) + sin_amp sin(2 pi m theta_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    /// 1-based torus angle index.
    pub angle: usize,
    pub cos_amp: f64,
    pub sin_amp: f64,
    pub multiple: u32,
}

impl Harmonic {
    pub fn sin(angle: usize, amp: f64) -> Self {
        Self {
            angle,
            cos_amp: 0.0,
            sin_amp: amp,
            multiple: 1,
        }
    }

    pub fn cos(angle: usize, amp: f64) -> Self {
        Self {
            angle,
            cos_amp: amp,
            sin_amp: 0.0,
            multiple: 1,
        }
    }

    pub fn with_multiple(mut self, multiple: u32) -> Self {
        self.multiple = multiple;
        self
    }

    #[inline]
    fn eval(&self, angles: &[f64]) -> f64 {
        let arg = TAU * self.multiple as f64 * angles[self.angle - 1];
        let (s, c) = arg.sin_cos();
        self.cos_amp * c + self.sin_amp * s
    }
}

/// Trigonometric polynomial in the torus angles.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TemporalSymbol {
    pub constant: f64,
    pub harmonics: Vec<Harmonic>,
}

impl TemporalSymbol {
    pub fn constant(value: f64) -> Self {
        Self {
            constant: value,
            harmonics: Vec::new(),
        }
    }

    pub fn new(constant: f64, harmonics: Vec<Harmonic>) -> Self {
        Self {
            constant,
            harmonics,
        }
    }

    #[inline]
    pub fn eval(&self, angles: &[f64]) -> f64 {
        self.harmonics
            .iter()
            .fold(self.constant, |acc, h| acc + h.eval(angles))
    }

    /// Haar mean; every nontrivial harmonic integrates to zero.
    pub fn mean(&self) -> f64 {
        self.constant
    }

    /// Uniform bound `|constant| + sum |amps|`.
    pub fn bound(&self) -> f64 {
        self.harmonics.iter().fold(self.constant.abs(), |acc, h| {
            acc + h.cos_amp.abs() + h.sin_amp.abs()
        })
    }

    pub fn is_time_independent(&self) -> bool {
        self.harmonics
            .iter()
            .all(|h| h.cos_amp == 0.0 && h.sin_amp == 0.0)
    }

    pub fn max_angle(&self) -> usize {
        self.harmonics.iter().map(|h| h.angle).max().unwrap_or(0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            constant: factor * self.constant,
            harmonics: self
                .harmonics
                .iter()
                .map(|h| Harmonic {
                    cos_amp: factor * h.cos_amp,
                    sin_amp: factor * h.sin_amp,
                    ..*h
                })
                .collect(),
        }
    }

    fn validate(&self, what: &str, errors: &mut Vec<String>) {
        if !self.constant.is_finite() {
            errors.push(format!("{what}: non-finite constant term"));
        }
        for (i, h) in self.harmonics.iter().enumerate() {
            if h.angle == 0 {
                errors.push(format!(
                    "{what}: harmonic {i} has angle index 0 (indices are 1-based)"
                ));
            }
            if h.multiple == 0 {
                errors.push(format!("{what}: harmonic {i} has multiple 0"));
            }
            if !(h.cos_amp.is_finite() && h.sin_amp.is_finite()) {
                errors.push(format!("{what}: harmonic {i} has non-finite amplitude"));
            }
        }
    }
}

/// Samples of a function of `x` at every grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialProfile {
    values: DiscreteField,
}

impl SpatialProfile {
    pub fn from_fn<F: Fn(f64) -> f64>(grid: &Grid1D, f: F) -> Self {
        Self {
            values: grid.sample(Dofs::All, f),
        }
    }

    pub fn constant(grid: &Grid1D, value: f64) -> Self {
        Self::from_fn(grid, |_| value)
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        Self {
            values: DiscreteField::new(values, Dofs::All),
        }
    }

    pub fn values(&self) -> &[f64] {
        self.values.values()
    }

    pub fn field(&self) -> &DiscreteField {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_spatially_constant(&self) -> bool {
        let v = self.values();
        v.iter().all(|&x| x == v[0])
    }
}

/// Kronecker flow `omega + t * frequencies (mod 1)` on the k-torus.
#[derive(Debug, Clone, PartialEq)]
pub struct DrivingSystem {
    frequencies: Vec<f64>,
    phase: Vec<f64>,
}

#[inline]
fn wrap_unit(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    // rem_euclid may return 1.0 for tiny negative inputs
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

impl DrivingSystem {
    pub fn new(frequencies: Vec<f64>, phase: Vec<f64>) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(Error::InvalidConfiguration(
                "torus dimension must be at least 1".into(),
            ));
        }
        if frequencies.len() != phase.len() {
            return Err(Error::InvalidConfiguration(format!(
                "{} frequencies but {} phase angles",
                frequencies.len(),
                phase.len()
            )));
        }
        if frequencies.iter().chain(&phase).any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfiguration(
                "non-finite frequency or phase".into(),
            ));
        }
        Ok(Self {
            frequencies,
            phase: phase.into_iter().map(wrap_unit).collect(),
        })
    }

    /// Driver with phase at the origin.
    pub fn at_origin(frequencies: Vec<f64>) -> Result<Self> {
        let k = frequencies.len();
        Self::new(frequencies, vec![0.0; k])
    }

    pub fn k(&self) -> usize {
        self.frequencies.len()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    /// `theta_t omega`, reduced mod 1.
    pub fn angles_at(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.k()];
        self.angles_into(t, &mut out);
        out
    }

    #[inline]
    pub fn angles_into(&self, t: f64, out: &mut [f64]) {
        for ((o, p), f) in out.iter_mut().zip(&self.phase).zip(&self.frequencies) {
            *o = wrap_unit(p + t * f);
        }
    }

    /// Driver whose phase is `theta_s omega`.
    pub fn translate(&self, s: f64) -> Self {
        Self {
            frequencies: self.frequencies.clone(),
            phase: self.angles_at(s),
        }
    }

    pub fn with_phase(&self, phase: Vec<f64>) -> Result<Self> {
        Self::new(self.frequencies.clone(), phase)
    }

    /// Period of a one-dimensional driver.
    pub fn period(&self) -> Option<f64> {
        match self.frequencies.as_slice() {
            [f] if *f != 0.0 => Some(1.0 / f.abs()),
            _ => None,
        }
    }
}

pub fn translate(driver: &DrivingSystem, s: f64) -> DrivingSystem {
    driver.translate(s)
}

/// Haar-uniform phase on `[0,1)^k` from a seed.
pub fn sample_omega(seed: u64, k: usize) -> Result<Vec<f64>> {
    sample_omega_indexed(seed, 0, k)
}

/// Phase for Monte Carlo sample `index`: ChaCha8 keyed by `seed`, stream
/// `index`, first `k` draws of `gen::<f64>()`.
pub fn sample_omega_indexed(seed: u64, index: u64, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidConfiguration(
            "torus dimension must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    Ok((0..k).map(|_| rng.gen::<f64>()).collect())
}

/// The tuple `(a11, a1, b, c, d)` with its boundary condition.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    grid: Grid1D,
    bc: BcKind,
    a11: SpatialProfile,
    a1: SpatialProfile,
    alpha0: f64,
    b_left: f64,
    b_right: f64,
    c_terms: Vec<(TemporalSymbol, SpatialProfile)>,
    d_left: Vec<TemporalSymbol>,
    d_right: Vec<TemporalSymbol>,
}

impl CoefficientField {
    /// Unit diffusion, no advection, `c = 0`, `b = (-1, +1)`.
    pub fn new(grid: &Grid1D, bc: BcKind) -> Self {
        Self {
            grid: grid.clone(),
            bc,
            a11: SpatialProfile::constant(grid, 1.0),
            a1: SpatialProfile::constant(grid, 0.0),
            alpha0: 1e-8,
            b_left: -1.0,
            b_right: 1.0,
            c_terms: Vec::new(),
            d_left: Vec::new(),
            d_right: Vec::new(),
        }
    }

    pub fn with_diffusion(mut self, a11: SpatialProfile) -> Self {
        self.a11 = a11;
        self
    }

    pub fn with_advection(mut self, a1: SpatialProfile) -> Self {
        self.a1 = a1;
        self
    }

    pub fn with_alpha0(mut self, alpha0: f64) -> Self {
        self.alpha0 = alpha0;
        self
    }

    pub fn with_boundary_b(mut self, b_left: f64, b_right: f64) -> Self {
        self.b_left = b_left;
        self.b_right = b_right;
        self
    }

    pub fn with_c_term(mut self, symbol: TemporalSymbol, profile: SpatialProfile) -> Self {
        self.c_terms.push((symbol, profile));
        self
    }

    pub fn with_robin(mut self, d_left: TemporalSymbol, d_right: TemporalSymbol) -> Self {
        self.d_left.push(d_left);
        self.d_right.push(d_right);
        self
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn bc(&self) -> BcKind {
        self.bc
    }

    pub fn a11(&self) -> &SpatialProfile {
        &self.a11
    }

    pub fn a1(&self) -> &SpatialProfile {
        &self.a1
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn b(&self) -> (f64, f64) {
        (self.b_left, self.b_right)
    }

    pub fn c_terms(&self) -> &[(TemporalSymbol, SpatialProfile)] {
        &self.c_terms
    }

    pub fn c_terms_mut(&mut self) -> &mut Vec<(TemporalSymbol, SpatialProfile)> {
        &mut self.c_terms
    }

    pub fn d_terms(&self) -> (&[TemporalSymbol], &[TemporalSymbol]) {
        (&self.d_left, &self.d_right)
    }

    fn symbols(&self) -> impl Iterator<Item = &TemporalSymbol> {
        self.c_terms
            .iter()
            .map(|(s, _)| s)
            .chain(&self.d_left)
            .chain(&self.d_right)
    }

    pub fn max_angle(&self) -> usize {
        self.symbols()
            .map(TemporalSymbol::max_angle)
            .max()
            .unwrap_or(0)
    }

    /// Every structural violation, not just the first.
    pub fn violations(&self) -> Vec<String> {
        let mut errors = Vec::new();
        let n = self.grid.n_nodes();
        for (name, p) in [("a11", &self.a11), ("a1", &self.a1)] {
            if p.values().len() != n {
                errors.push(format!(
                    "{name}: {} samples for {n} nodes",
                    p.values().len()
                ));
            }
            if p.values().iter().any(|v| !v.is_finite()) {
                errors.push(format!("{name}: non-finite values"));
            }
        }
        for (k, (s, g)) in self.c_terms.iter().enumerate() {
            s.validate(&format!("c term {k}"), &mut errors);
            if g.values().len() != n {
                errors.push(format!(
                    "c term {k}: {} samples for {n} nodes",
                    g.values().len()
                ));
            }
            if g.values().iter().any(|v| !v.is_finite()) {
                errors.push(format!("c term {k}: non-finite profile"));
            }
        }
        for (side, terms) in [("d_left", &self.d_left), ("d_right", &self.d_right)] {
            for (k, s) in terms.iter().enumerate() {
                s.validate(&format!("{side} term {k}"), &mut errors);
            }
        }
        match self.bc {
            BcKind::Dirichlet | BcKind::Neumann => {
                if !self.d_left.is_empty() || !self.d_right.is_empty() {
                    errors.push(format!(
                        "{} boundary condition carries no d terms",
                        self.bc.name()
                    ));
                }
            }
            BcKind::Robin => {}
        }
        if self.bc != BcKind::Dirichlet {
            if !(self.b_left < 0.0) {
                errors.push(format!(
                    "b_left = {} must satisfy b * nu > 0 with nu = -1",
                    self.b_left
                ));
            }
            if !(self.b_right > 0.0) {
                errors.push(format!(
                    "b_right = {} must satisfy b * nu > 0 with nu = +1",
                    self.b_right
                ));
            }
        }
        if !(self.alpha0 > 0.0) {
            errors.push(format!("alpha0 = {} must be positive", self.alpha0));
        }
        errors
    }

    pub fn check_driver(&self, driver: &DrivingSystem) -> Result<()> {
        let needed = self.max_angle();
        if needed > driver.k() {
            return Err(Error::InvalidConfiguration(format!(
                "coefficient symbol references angle {needed} but the torus has dimension {}",
                driver.k()
            )));
        }
        Ok(())
    }

    /// `c(theta_t omega, x_i)` written into `out` (all nodes).
    pub fn c_into(&self, angles: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (symbol, profile) in &self.c_terms {
            let f = symbol.eval(angles);
            if f != 0.0 {
                for (o, g) in out.iter_mut().zip(profile.values()) {
                    *o += f * g;
                }
            }
        }
    }

    /// Robin coefficients `(d_left, d_right)` at the given angles.
    pub fn d_at(&self, angles: &[f64]) -> (f64, f64) {
        let l = self.d_left.iter().map(|s| s.eval(angles)).sum();
        let r = self.d_right.iter().map(|s| s.eval(angles)).sum();
        (l, r)
    }

    /// Uniform bound on `|c|`.
    pub fn c_bound(&self) -> f64 {
        self.c_terms
            .iter()
            .map(|(s, g)| s.bound() * g.max_abs())
            .sum()
    }

    pub fn is_autonomous(&self) -> bool {
        self.symbols().all(TemporalSymbol::is_time_independent)
    }

    /// Syntactic separability: at most one time-dependent c term, whose
    /// profile is spatially constant, and time-independent d.
    pub fn is_structurally_separable(&self) -> bool {
        let timed: Vec<_> = self
            .c_terms
            .iter()
            .filter(|(s, _)| !s.is_time_independent())
            .collect();
        let c_ok = match timed.as_slice() {
            [] => true,
            [(_, g)] => g.is_spatially_constant(),
            _ => false,
        };
        let d_ok = self
            .d_left
            .iter()
            .chain(&self.d_right)
            .all(TemporalSymbol::is_time_independent);
        c_ok && d_ok
    }

    /// Same fixed coefficients with `c = c_hat(x)` and constant Robin data.
    pub fn autonomous_with(&self, c_hat: SpatialProfile, d_hat: (f64, f64)) -> Self {
        let mut out = Self {
            c_terms: vec![(TemporalSymbol::constant(1.0), c_hat)],
            d_left: Vec::new(),
            d_right: Vec::new(),
            ..self.clone()
        };
        if self.bc == BcKind::Robin {
            out.d_left.push(TemporalSymbol::constant(d_hat.0));
            out.d_right.push(TemporalSymbol::constant(d_hat.1));
        }
        out
    }

    /// Scales the time symbol of c term `index` by `factor`.
    pub fn with_scaled_c_term(&self, index: usize, factor: f64) -> Result<Self> {
        let mut out = self.clone();
        let term = out.c_terms.get_mut(index).ok_or_else(|| {
            Error::InvalidConfiguration(format!(
                "c term {index} does not exist ({} terms)",
                self.c_terms.len()
            ))
        })?;
        term.0 = term.0.scaled(factor);
        Ok(out)
    }
}

pub fn eval_c(field: &CoefficientField, driver: &DrivingSystem, t: f64) -> Result<DiscreteField> {
    field.check_driver(driver)?;
    let angles = driver.angles_at(t);
    let mut out = vec![0.0; field.grid().n_nodes()];
    field.c_into(&angles, &mut out);
    Ok(DiscreteField::new(out, Dofs::All))
}

pub fn eval_d(field: &CoefficientField, driver: &DrivingSystem, t: f64) -> Result<(f64, f64)> {
    field.check_driver(driver)?;
    Ok(field.d_at(&driver.angles_at(t)))
}

fn trapezoid_nodes(start: f64, end: f64, n_quad: usize) -> Result<Vec<(f64, f64)>> {
    if !(end > start) {
        return Err(Error::InvalidWindow { start, end });
    }
    if n_quad < 2 {
        return Err(Error::InvalidConfiguration(format!(
            "window quadrature needs at least 2 panels, got {n_quad}"
        )));
    }
    let span = end - start;
    let dt = span / n_quad as f64;
    Ok((0..=n_quad)
        .map(|j| {
            let w = if j == 0 || j == n_quad { 0.5 } else { 1.0 };
            (start + j as f64 * dt, w * dt / span)
        })
        .collect())
}

/// `(1/(T-S)) int_S^T c(t, x) dt` by the composite trapezoid rule.
pub fn window_average_c(
    field: &CoefficientField,
    driver: &DrivingSystem,
    start: f64,
    end: f64,
    n_quad: usize,
) -> Result<SpatialProfile> {
    field.check_driver(driver)?;
    let nodes = trapezoid_nodes(start, end, n_quad)?;
    let n = field.grid().n_nodes();
    let mut acc = vec![0.0; n];
    let mut buf = vec![0.0; n];
    let mut angles = vec![0.0; driver.k()];
    for (t, w) in nodes {
        driver.angles_into(t, &mut angles);
        field.c_into(&angles, &mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += w * b;
        }
    }
    Ok(SpatialProfile::from_values(acc))
}

/// Window average of the Robin coefficients at both endpoints.
pub fn window_average_d(
    field: &CoefficientField,
    driver: &DrivingSystem,
    start: f64,
    end: f64,
    n_quad: usize,
) -> Result<(f64, f64)> {
    field.check_driver(driver)?;
    let nodes = trapezoid_nodes(start, end, n_quad)?;
    let mut angles = vec![0.0; driver.k()];
    let mut out = (0.0, 0.0);
    for (t, w) in nodes {
        driver.angles_into(t, &mut angles);
        let (l, r) = field.d_at(&angles);
        out.0 += w * l;
        out.1 += w * r;
    }
    Ok(out)
}

/// Exact Haar mean `c_hat(x) = int c(omega, x) dP`.
pub fn ensemble_average_c(field: &CoefficientField) -> SpatialProfile {
    let mut acc = vec![0.0; field.grid().n_nodes()];
    for (symbol, profile) in field.c_terms() {
        let m = symbol.mean();
        if m != 0.0 {
            for (a, g) in acc.iter_mut().zip(profile.values()) {
                *a += m * g;
            }
        }
    }
    SpatialProfile::from_values(acc)
}

pub fn ensemble_average_d(field: &CoefficientField) -> (f64, f64) {
    let (l, r) = field.d_terms();
    (
        l.iter().map(TemporalSymbol::mean).sum(),
        r.iter().map(TemporalSymbol::mean).sum(),
    )
}
