//! Builds the geometric-mean profile over a window and checks it as a
//! supersolution of the window-averaged problem.

use std::f64::consts::PI;

use principal_spectrum::averaging::supersolution_check;
use principal_spectrum::coefficients::{
    BcKind, CoefficientField, DrivingSystem, Harmonic, SpatialProfile, TemporalSymbol,
};
use principal_spectrum::evolution::StepperConfig;
use principal_spectrum::grid::build_grid;

fn main() -> principal_spectrum::Result<()> {
    let g = build_grid(PI, 99)?;
    let driver = DrivingSystem::at_origin(vec![1.0 / (2.0 * PI)])?;
    let cfg = StepperConfig::implicit_euler(2.0 * PI / 628.0);
    for beta in [0.0, 0.5, 1.0] {
        let field = CoefficientField::new(&g, BcKind::Dirichlet)
            .with_c_term(
                TemporalSymbol::constant(1.0),
                SpatialProfile::from_fn(&g, |x| 1.0 + 0.5 * x.cos()),
            )
            .with_c_term(
                TemporalSymbol::new(0.0, vec![Harmonic::sin(1, beta)]),
                SpatialProfile::from_fn(&g, f64::cos),
            );
        let chk = supersolution_check(&field, &driver, &cfg, 8.0 * PI, 2.0 * PI)?;
        println!(
            "beta = {beta}: residual {:+.3e}  kappa_bar {:.8}  lambda_window {:.8}  bound {:.8}",
            chk.residual, chk.kappa_bar, chk.lambda_window, chk.implied_bound
        );
    }
    Ok(())
}
