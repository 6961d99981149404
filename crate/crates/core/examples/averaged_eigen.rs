//! Principal eigenvalue of the time-averaged operator, window and ensemble.
//!
//! cargo run --release --example averaged_eigen

use std::f64::consts::PI;

use principal_spectrum::averaging::{build_averaged, principal_eigenpair, AveragingMode};
use principal_spectrum::coefficients::{
    BcKind, CoefficientField, DrivingSystem, Harmonic, SpatialProfile, TemporalSymbol,
};
use principal_spectrum::grid::build_grid;

fn main() -> principal_spectrum::Result<()> {
    let g = build_grid(PI, 99)?;
    let sin_t = TemporalSymbol::new(0.0, vec![Harmonic::sin(1, 1.0)]);
    let field = CoefficientField::new(&g, BcKind::Dirichlet)
        .with_c_term(
            TemporalSymbol::constant(1.0),
            SpatialProfile::from_fn(&g, |x| 1.0 + 0.5 * x.cos()),
        )
        .with_c_term(sin_t, SpatialProfile::from_fn(&g, f64::cos));
    let driver = DrivingSystem::at_origin(vec![1.0 / (2.0 * PI)])?;

    let ens = build_averaged(&field, &driver, AveragingMode::Ensemble)?;
    let (lam, phi) = principal_eigenpair(&ens.operator)?;
    println!("ensemble   lambda_hat = {lam:.12}");

    // a window that is not a whole period sees part of the sin t cos x term
    for end in [PI, 2.0 * PI, 7.0] {
        let win = build_averaged(
            &field,
            &driver,
            AveragingMode::Window {
                start: 0.0,
                end,
                n_quad: 2000,
            },
        )?;
        let (l, _) = principal_eigenpair(&win.operator)?;
        println!("[0, {end:.4}] lambda_hat = {l:.12}");
    }

    let peak = phi.values().iter().cloned().fold(0.0, f64::max);
    println!("eigenfunction max = {peak:.6} (unit weighted norm)");
    Ok(())
}
