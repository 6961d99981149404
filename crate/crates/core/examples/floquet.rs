//! Floquet exponent of a time-periodic problem from the one-period map,
//! checked against the discrete scalar recursion when the field separates.

use std::f64::consts::PI;

use principal_spectrum::averaging::{principal_eigenpair, separable_stepper_rate};
use principal_spectrum::coefficients::{
    BcKind, CoefficientField, DrivingSystem, Harmonic, SpatialProfile, TemporalSymbol,
};
use principal_spectrum::evolution::StepperConfig;
use principal_spectrum::grid::build_grid;
use principal_spectrum::operator::assemble;
use principal_spectrum::spectrum::floquet_oracle;

fn main() -> principal_spectrum::Result<()> {
    let g = build_grid(PI, 99)?;
    let driver = DrivingSystem::at_origin(vec![1.0 / (2.0 * PI)])?;
    let cfg = StepperConfig::implicit_euler(2.0 * PI / 628.0);
    let c1 = SpatialProfile::from_fn(&g, |x| 1.0 + 0.5 * x.cos());
    let sin_t = TemporalSymbol::new(0.0, vec![Harmonic::sin(1, 1.0)]);

    let autonomous = CoefficientField::new(&g, BcKind::Dirichlet)
        .with_c_term(TemporalSymbol::constant(1.0), c1.clone());
    let (lam1, _) = principal_eigenpair(&assemble(&autonomous, &driver, 0.0)?)?;

    // c = c1(x) + sin t: the spatial and temporal parts separate
    let separable = autonomous
        .clone()
        .with_c_term(sin_t.clone(), SpatialProfile::constant(&g, 1.0));
    let floq = floquet_oracle(&separable, &driver, &cfg, 2.0 * PI)?;
    let scalar = separable_stepper_rate(lam1, f64::sin, &cfg, 0.0, 2.0 * PI)?;
    println!("separable:     floquet {floq:.14}  scalar recursion {scalar:.14}");

    let coupled = autonomous.with_c_term(sin_t, SpatialProfile::from_fn(&g, f64::cos));
    let floq = floquet_oracle(&coupled, &driver, &cfg, 2.0 * PI)?;
    println!("sin t cos x:   floquet {floq:.10}  (lambda_1 of c1 = {lam1:.10})");
    Ok(())
}
