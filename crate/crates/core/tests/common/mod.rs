//! Coefficient families shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::f64::consts::PI;

use principal_spectrum::averaging::RunKind;
use principal_spectrum::coefficients::{
    BcKind, CoefficientField, DrivingSystem, Harmonic, SpatialProfile, TemporalSymbol,
};
use principal_spectrum::evolution::StepperConfig;
use principal_spectrum::grid::{build_grid, Grid1D};

pub const N: usize = 99;

/// 628 implicit-Euler steps per period of `sin t`.
pub fn periodic_dt() -> f64 {
    2.0 * PI / 628.0
}

pub fn grid() -> Grid1D {
    build_grid(PI, N).unwrap()
}

pub fn closed_form(n: usize) -> f64 {
    let h = PI / (n as f64 + 1.0);
    -(4.0 / (h * h)) * (h / 2.0).sin().powi(2)
}

/// `theta_t = t / (2 pi)`, so `sin(2 pi theta) = sin t`.
pub fn sin_t_driver() -> DrivingSystem {
    DrivingSystem::at_origin(vec![1.0 / (2.0 * PI)]).unwrap()
}

pub fn sin_t() -> TemporalSymbol {
    TemporalSymbol::new(0.0, vec![Harmonic::sin(1, 1.0)])
}

pub fn c1(g: &Grid1D) -> SpatialProfile {
    SpatialProfile::from_fn(g, |x| 1.0 + 0.5 * x.cos())
}

/// `c = 1 + 0.5 cos x + sin t`.
pub fn separable_periodic() -> CoefficientField {
    let g = grid();
    CoefficientField::new(&g, BcKind::Dirichlet)
        .with_c_term(TemporalSymbol::constant(1.0), c1(&g))
        .with_c_term(sin_t(), SpatialProfile::constant(&g, 1.0))
}

/// `c = beta sin t cos x`.
pub fn nonseparable_periodic(beta: f64) -> CoefficientField {
    let g = grid();
    CoefficientField::new(&g, BcKind::Dirichlet)
        .with_c_term(sin_t().scaled(beta), SpatialProfile::from_fn(&g, f64::cos))
}

/// `c = 2 sin(2 pi theta_1) cos x + 2 cos(2 pi theta_2) cos x`.
pub fn quasiperiodic() -> CoefficientField {
    let g = grid();
    let cos_x = SpatialProfile::from_fn(&g, f64::cos);
    CoefficientField::new(&g, BcKind::Dirichlet)
        .with_c_term(
            TemporalSymbol::new(0.0, vec![Harmonic::sin(1, 2.0)]),
            cos_x.clone(),
        )
        .with_c_term(TemporalSymbol::new(0.0, vec![Harmonic::cos(2, 2.0)]), cos_x)
}

pub fn quasiperiodic_driver() -> DrivingSystem {
    DrivingSystem::at_origin(vec![1.0, 2f64.sqrt()]).unwrap()
}

/// Random torus-driven field, same shape as [`quasiperiodic`] with slower angles.
pub fn random_torus() -> CoefficientField {
    quasiperiodic()
}

pub fn random_driver() -> DrivingSystem {
    DrivingSystem::at_origin(vec![1.0 / (2.0 * PI), 2f64.sqrt() / (2.0 * PI)]).unwrap()
}

/// `c = 1 + 0.5 cos x + sin(2 pi theta_1)` with `theta_1` of unit frequency.
pub fn separable_random() -> CoefficientField {
    separable_periodic()
}

pub fn unit_driver() -> DrivingSystem {
    DrivingSystem::at_origin(vec![1.0]).unwrap()
}

/// Robin data `d = 1 + sin t` at both ends, `c = 0`.
pub fn robin_periodic() -> CoefficientField {
    let g = grid();
    let d = TemporalSymbol::new(1.0, vec![Harmonic::sin(1, 1.0)]);
    CoefficientField::new(&g, BcKind::Robin).with_robin(d.clone(), d)
}

/// One member of the comparison suite.
pub struct Case {
    pub name: &'static str,
    pub field: CoefficientField,
    pub driver: DrivingSystem,
    pub run_kind: RunKind,
    pub cfg: StepperConfig,
    pub horizon: f64,
    pub burn_in: f64,
    pub ladder: Vec<f64>,
    pub separable: bool,
}

pub fn suite() -> Vec<Case> {
    let p = 2.0 * PI;
    let periodic = |name, field, separable| Case {
        name,
        field,
        driver: sin_t_driver(),
        run_kind: RunKind::Nonautonomous,
        cfg: StepperConfig::implicit_euler(periodic_dt()),
        horizon: 24.0 * p,
        burn_in: 4.0 * p,
        ladder: vec![p, 5.0 * p, 10.0 * p],
        separable,
    };
    vec![
        periodic("separable periodic", separable_periodic(), true),
        periodic(
            "non-separable periodic beta=0.5",
            nonseparable_periodic(0.5),
            false,
        ),
        periodic(
            "non-separable periodic beta=1",
            nonseparable_periodic(1.0),
            false,
        ),
        Case {
            name: "quasiperiodic",
            field: quasiperiodic(),
            driver: quasiperiodic_driver(),
            run_kind: RunKind::Nonautonomous,
            cfg: StepperConfig::implicit_euler(0.01),
            horizon: 450.0,
            burn_in: 50.0,
            ladder: vec![50.0, 100.0, 200.0],
            separable: false,
        },
        Case {
            name: "random torus-driven",
            field: random_torus(),
            driver: random_driver(),
            run_kind: RunKind::Random,
            cfg: StepperConfig::implicit_euler(0.01),
            horizon: 500.0,
            burn_in: 50.0,
            ladder: Vec::new(),
            separable: false,
        },
        Case {
            name: "separable random",
            field: separable_random(),
            driver: unit_driver(),
            run_kind: RunKind::Random,
            cfg: StepperConfig::implicit_euler(0.002),
            horizon: 500.0,
            burn_in: 50.0,
            ladder: Vec::new(),
            separable: true,
        },
        periodic(
            "time-dependent Robin d = 1 + sin t",
            robin_periodic(),
            false,
        ),
    ]
}
