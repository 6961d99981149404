//! Exponential separation: the gap between the two leading exponents of a
//! two-dimensional orthonormal frame.

use std::f64::consts::PI;

use principal_spectrum::coefficients::{
    BcKind, CoefficientField, DrivingSystem, Harmonic, SpatialProfile, TemporalSymbol,
};
use principal_spectrum::evolution::StepperConfig;
use principal_spectrum::grid::build_grid;
use principal_spectrum::spectrum::estimate_separation;

fn main() -> principal_spectrum::Result<()> {
    let g = build_grid(PI, 99)?;
    let driver = DrivingSystem::at_origin(vec![1.0 / (2.0 * PI)])?;
    let cfg = StepperConfig::implicit_euler(2.0 * PI / 628.0);
    for beta in [0.0, 1.0, 3.0] {
        let field = CoefficientField::new(&g, BcKind::Neumann).with_c_term(
            TemporalSymbol::new(0.0, vec![Harmonic::sin(1, beta)]),
            SpatialProfile::from_fn(&g, f64::cos),
        );
        let est = estimate_separation(&field, &driver, &cfg, 40.0 * PI, 4.0 * PI)?;
        println!(
            "beta = {beta}: lambda1 = {:.6}, lambda2 = {:.6}, mu = {:.6}, reliable = {}",
            est.lambda1, est.lambda2, est.mu, est.reliable
        );
    }
    Ok(())
}
