//! Principal Lyapunov exponent of a random equation driven by a Kronecker
//! flow, estimated along several Haar-distributed starting phases.

use std::f64::consts::PI;

use principal_spectrum::averaging::{build_averaged, principal_eigenpair, AveragingMode};
use principal_spectrum::coefficients::{
    BcKind, CoefficientField, DrivingSystem, Harmonic, SpatialProfile, TemporalSymbol,
};
use principal_spectrum::evolution::StepperConfig;
use principal_spectrum::grid::build_grid;
use principal_spectrum::spectrum::{estimate_lyapunov_random, RandomRunOptions};

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
    let driver = DrivingSystem::at_origin(vec![1.0 / (2.0 * PI), 2f64.sqrt() / (2.0 * PI)])?;
    let cfg = StepperConfig::implicit_euler(0.01);

    let opts = RandomRunOptions {
        n_omega: 8,
        horizon: 300.0,
        burn_in: 50.0,
        seed: 2024,
    };
    let est = estimate_lyapunov_random(&field, &driver, &cfg, &opts)?;
    for s in &est.per_omega {
        println!(
            "omega {}  phase {:?}  estimate {:.6}",
            s.index, s.phase, s.estimate
        );
    }
    let (lam_hat, _) =
        principal_eigenpair(&build_averaged(&field, &driver, AveragingMode::Ensemble)?.operator)?;
    println!("lambda = {:.6} +- {:.2e}", est.lambda_hat, est.dispersion);
    println!("averaged eigenvalue = {lam_hat:.6}");
    Ok(())
}
