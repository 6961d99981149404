//! Estimates [lambda_inf, lambda_sup] for a quasiperiodic potential from
//! sliding-window averages of kappa.

use std::f64::consts::PI;

use principal_spectrum::coefficients::{
    BcKind, CoefficientField, DrivingSystem, Harmonic, SpatialProfile, TemporalSymbol,
};
use principal_spectrum::evolution::StepperConfig;
use principal_spectrum::grid::{build_grid, DiscreteField, Dofs};
use principal_spectrum::spectrum::{estimate_spectrum_interval, track_principal, TrackOptions};

fn main() -> principal_spectrum::Result<()> {
    let g = build_grid(PI, 99)?;
    let field = CoefficientField::new(&g, BcKind::Dirichlet)
        .with_c_term(
            TemporalSymbol::new(0.0, vec![Harmonic::sin(1, 2.0)]),
            SpatialProfile::from_fn(&g, f64::cos),
        )
        .with_c_term(
            TemporalSymbol::new(0.0, vec![Harmonic::cos(2, 2.0)]),
            SpatialProfile::from_fn(&g, f64::cos),
        );
    let driver = DrivingSystem::at_origin(vec![1.0, 2f64.sqrt()])?;
    let cfg = StepperConfig::implicit_euler(0.01);
    let u0 = DiscreteField::constant(&g, Dofs::Interior, 1.0);

    let trace = track_principal(&u0, &field, &driver, &cfg, &TrackOptions::new(450.0, 50.0))?;
    let est = estimate_spectrum_interval(&trace, &[50.0, 100.0, 200.0])?;
    for w in &est.per_window_minmax {
        println!(
            "T = {:6.1}: windows {:4}  min {:.6}  max {:.6}",
            w.length, w.n_windows, w.min, w.max
        );
    }
    println!(
        "[lambda_inf, lambda_sup] = [{:.6}, {:.6}]",
        est.lambda_inf_hat, est.lambda_sup_hat
    );
    Ok(())
}
