//! Compares the principal spectrum with the averaged eigenvalue for a
//! separable and a non-separable periodic field, and for a random run.

use std::f64::consts::PI;

use principal_spectrum::averaging::{compare, CompareOptions, RunKind};
use principal_spectrum::coefficients::{
    BcKind, CoefficientField, DrivingSystem, Harmonic, SpatialProfile, TemporalSymbol,
};
use principal_spectrum::evolution::StepperConfig;
use principal_spectrum::grid::build_grid;
use principal_spectrum::harness::run::summary_line;

fn main() -> principal_spectrum::Result<()> {
    let g = build_grid(PI, 99)?;
    let base = CoefficientField::new(&g, BcKind::Dirichlet).with_c_term(
        TemporalSymbol::constant(1.0),
        SpatialProfile::from_fn(&g, |x| 1.0 + 0.5 * x.cos()),
    );
    let sin_t = TemporalSymbol::new(0.0, vec![Harmonic::sin(1, 1.0)]);
    let p = 2.0 * PI;
    let driver = DrivingSystem::at_origin(vec![1.0 / p])?;
    let cfg = StepperConfig::implicit_euler(p / 628.0);
    let opts = CompareOptions {
        horizon: 24.0 * p,
        burn_in: 4.0 * p,
        ladder: vec![p, 5.0 * p, 10.0 * p],
        ..Default::default()
    };

    let separable = base
        .clone()
        .with_c_term(sin_t.clone(), SpatialProfile::constant(&g, 1.0));
    let coupled = base.with_c_term(sin_t, SpatialProfile::from_fn(&g, f64::cos));
    for (name, f) in [("c1 + sin t", &separable), ("c1 + sin t cos x", &coupled)] {
        let report = compare(f, &driver, RunKind::Nonautonomous, &cfg, &opts)?;
        println!("{name:18} {}", summary_line(&report));
    }

    let random_opts = CompareOptions {
        horizon: 300.0,
        burn_in: 50.0,
        n_omega: 4,
        seed: 1,
        ..opts
    };
    let report = compare(
        &coupled,
        &driver,
        RunKind::Random,
        &StepperConfig::implicit_euler(0.01),
        &random_opts,
    )?;
    println!("{:18} {}", "random phases", summary_line(&report));
    Ok(())
}
