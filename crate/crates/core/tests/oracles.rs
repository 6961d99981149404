//! Independent oracles: dense eigensolvers, scalar recursions, refinement
//! ratios and shift identities.

mod common;

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use principal_spectrum::averaging::{
    build_averaged, geometric_mean_profile, principal_eigenpair, separable_stepper_rate,
    AveragingMode,
};
use principal_spectrum::coefficients::{
    BcKind, CoefficientField, DrivingSystem, SpatialProfile, TemporalSymbol,
};
use principal_spectrum::evolution::{evolve, evolve_adjoint, StepperConfig};
use principal_spectrum::grid::{build_grid, inner_product, DiscreteField, Dofs};
use principal_spectrum::operator::{assemble, rayleigh_kappa, TridiagonalOperator};
use principal_spectrum::spectrum::{
    estimate_lyapunov_random, estimate_separation, estimate_spectrum_interval, floquet_oracle,
    stepper_growth_rate, track_principal, RandomRunOptions, SnapshotRequest, TrackOptions,
};
use principal_spectrum::Error;

fn dense(op: &TridiagonalOperator) -> DMatrix<f64> {
    let rows = op.to_dense();
    DMatrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j])
}

fn dense_principal(op: &TridiagonalOperator) -> f64 {
    dense(op)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn generic_field(n: usize, bc: BcKind) -> CoefficientField {
    let g = build_grid(1.7, n).unwrap();
    CoefficientField::new(&g, bc)
        .with_diffusion(SpatialProfile::from_fn(&g, |x| 1.0 + 0.3 * x.sin()))
        .with_advection(SpatialProfile::from_fn(&g, |x| 0.8 * (2.0 * x).cos()))
        .with_c_term(
            TemporalSymbol::constant(1.0),
            SpatialProfile::from_fn(&g, |x| x * x - 0.5 * x),
        )
        .with_boundary_b(-1.0, 1.0)
}

#[test]
fn eigenpair_matches_dense_nonsymmetric_solver() {
    let d = common::sin_t_driver();
    for bc in [BcKind::Dirichlet, BcKind::Neumann] {
        let op = assemble(&generic_field(12, bc), &d, 0.0).unwrap();
        let (lam, phi) = principal_eigenpair(&op).unwrap();
        assert_abs_diff_eq!(lam, dense_principal(&op), epsilon = 1e-9);
        assert_abs_diff_eq!(rayleigh_kappa(&op, &phi).unwrap(), lam, epsilon = 1e-11);
    }
    let robin = generic_field(12, BcKind::Robin)
        .with_robin(TemporalSymbol::constant(0.7), TemporalSymbol::constant(1.3));
    let op = assemble(&robin, &d, 0.0).unwrap();
    assert_abs_diff_eq!(
        principal_eigenpair(&op).unwrap().0,
        dense_principal(&op),
        epsilon = 1e-9
    );
}

#[test]
fn spectral_shift_identity() {
    let d = common::sin_t_driver();
    let f = generic_field(30, BcKind::Dirichlet);
    let (lam, _) = principal_eigenpair(&assemble(&f, &d, 0.0).unwrap()).unwrap();
    for delta in [0.1, 1.0, 7.5] {
        let shifted = f.clone().with_c_term(
            TemporalSymbol::constant(delta),
            SpatialProfile::constant(f.grid(), 1.0),
        );
        let (lam2, _) = principal_eigenpair(&assemble(&shifted, &d, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(lam2 - lam, delta, epsilon = 1e-11);
    }
}

#[test]
fn separation_matches_dense_symmetric_solver() {
    let g = build_grid(PI, 10).unwrap();
    let f = CoefficientField::new(&g, BcKind::Dirichlet).with_c_term(
        TemporalSymbol::constant(1.0),
        SpatialProfile::from_fn(&g, |x| 0.4 * x.cos()),
    );
    let d = common::sin_t_driver();
    let op = assemble(&f, &d, 0.0).unwrap();
    let mut ev: Vec<f64> = dense(&op)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    let est = estimate_separation(&f, &d, &StepperConfig::implicit_euler(0.01), 40.0, 4.0).unwrap();
    assert_abs_diff_eq!(est.lambda1, ev[0], epsilon = 1e-8);
    assert_abs_diff_eq!(est.lambda2, ev[1], epsilon = 1e-8);
    assert!(est.reliable);
}

#[test]
fn separation_rejects_short_horizons() {
    let g = build_grid(PI, 5).unwrap();
    let f = CoefficientField::new(&g, BcKind::Dirichlet);
    let r = estimate_separation(
        &f,
        &common::sin_t_driver(),
        &StepperConfig::implicit_euler(0.01),
        5.0,
        1.0,
    );
    assert!(matches!(r, Err(Error::Precondition(_))));
}

#[test]
fn floquet_of_autonomous_problem_is_the_eigenvalue() {
    let d = common::sin_t_driver();
    let f = generic_field(25, BcKind::Neumann);
    let (lam, _) = principal_eigenpair(&assemble(&f, &d, 0.0).unwrap()).unwrap();
    for (dt, p) in [
        (0.01, 1.0),
        (2.0 * PI / 100.0, 2.0 * PI),
        (4.0 * PI / 250.0, 4.0 * PI),
    ] {
        let cfg = StepperConfig::implicit_euler(dt);
        // period must match the driver; the field itself is autonomous
        let driver = DrivingSystem::at_origin(vec![1.0 / p]).unwrap();
        let rate = floquet_oracle(&f, &driver, &cfg, p).unwrap();
        assert_abs_diff_eq!(rate, stepper_growth_rate(lam, &cfg), epsilon = 1e-10);
    }
}

#[test]
fn floquet_of_separable_field_is_a_scalar_product() {
    let d = common::sin_t_driver();
    let g = common::grid();
    let auto = CoefficientField::new(&g, BcKind::Dirichlet)
        .with_c_term(TemporalSymbol::constant(1.0), common::c1(&g));
    let (lam1, _) = principal_eigenpair(&assemble(&auto, &d, 0.0).unwrap()).unwrap();
    for cfg in [
        StepperConfig::implicit_euler(common::periodic_dt()),
        StepperConfig {
            positivity_required: false,
            ..StepperConfig::crank_nicolson(common::periodic_dt())
        },
    ] {
        let oracle = floquet_oracle(&common::separable_periodic(), &d, &cfg, 2.0 * PI).unwrap();
        let scalar = separable_stepper_rate(lam1, f64::sin, &cfg, 0.0, 2.0 * PI).unwrap();
        assert_abs_diff_eq!(oracle, scalar, epsilon = 1e-12);
    }
}

#[test]
fn floquet_of_nonseparable_field_is_stable_under_refinement() {
    let d = common::sin_t_driver();
    let f = common::nonseparable_periodic(1.0);
    let coarse = floquet_oracle(
        &f,
        &d,
        &StepperConfig::implicit_euler(2.0 * PI / 628.0),
        2.0 * PI,
    )
    .unwrap();
    let fine = floquet_oracle(
        &f,
        &d,
        &StepperConfig::implicit_euler(2.0 * PI / 1256.0),
        2.0 * PI,
    )
    .unwrap();
    let finer = floquet_oracle(
        &f,
        &d,
        &StepperConfig::implicit_euler(2.0 * PI / 2512.0),
        2.0 * PI,
    )
    .unwrap();
    let ratio = (coarse - fine) / (fine - finer);
    assert!((1.8..2.2).contains(&ratio), "refinement ratio {ratio}");
    let (lam_hat, _) = principal_eigenpair(
        &build_averaged(&f, &d, AveragingMode::Ensemble)
            .unwrap()
            .operator,
    )
    .unwrap();
    assert!(
        finer - lam_hat > 0.02,
        "strict inequality: {finer} vs {lam_hat}"
    );
}

#[test]
fn implicit_euler_and_crank_nicolson_converge_at_their_orders() {
    let d = common::sin_t_driver();
    let g = build_grid(PI, 20).unwrap();
    let f = CoefficientField::new(&g, BcKind::Dirichlet).with_c_term(
        TemporalSymbol::constant(1.0),
        SpatialProfile::from_fn(&g, |x| 0.5 * x.cos()),
    );
    let (lam, _) = principal_eigenpair(&assemble(&f, &d, 0.0).unwrap()).unwrap();
    let defect = |cfg: StepperConfig| (floquet_oracle(&f, &d, &cfg, 2.0 * PI).unwrap() - lam).abs();
    let ie = |n: f64| StepperConfig::implicit_euler(2.0 * PI / n);
    let cn = |n: f64| StepperConfig {
        positivity_required: false,
        ..StepperConfig::crank_nicolson(2.0 * PI / n)
    };
    let r_ie = defect(ie(200.0)) / defect(ie(400.0));
    let r_cn = defect(cn(200.0)) / defect(cn(400.0));
    assert!((1.9..2.1).contains(&r_ie), "implicit Euler ratio {r_ie}");
    assert!((3.8..4.2).contains(&r_cn), "Crank-Nicolson ratio {r_cn}");
    assert!(defect(cn(200.0)) < defect(ie(200.0)));
}

#[test]
fn adjoint_is_the_weighted_transpose_of_the_cocycle() {
    let d = common::sin_t_driver();
    let f = common::robin_periodic();
    let g = f.grid().clone();
    let cfg = StepperConfig::implicit_euler(0.05);
    let u = g.sample(Dofs::All, |x| 1.0 + x.sin());
    let v = g.sample(Dofs::All, |x| (2.0 * x).cos());
    let uu = evolve(&u, 0.5, 3.0, &f, &d, &cfg).unwrap();
    let vv = evolve_adjoint(&v, 0.5, 3.0, &f, &d, &cfg).unwrap();
    let lhs = inner_product(&uu, &v, &g).unwrap();
    let rhs = inner_product(&u, &vv, &g).unwrap();
    assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12 * lhs.abs().max(1.0));
    // the adjoint direction stays positive
    let w_star = evolve_adjoint(
        &DiscreteField::constant(&g, Dofs::All, 1.0),
        0.0,
        10.0,
        &f,
        &d,
        &cfg,
    )
    .unwrap();
    assert!(w_star.values().iter().all(|&x| x > 0.0));
}

#[test]
fn window_average_over_one_period_equals_ensemble() {
    let d = common::sin_t_driver();
    for f in [
        common::separable_periodic(),
        common::robin_periodic(),
        common::nonseparable_periodic(0.7),
    ] {
        let ens = build_averaged(&f, &d, AveragingMode::Ensemble).unwrap();
        let win = build_averaged(
            &f,
            &d,
            AveragingMode::Window {
                start: 1.3,
                end: 1.3 + 2.0 * PI,
                n_quad: 256,
            },
        )
        .unwrap();
        for (a, b) in win.c_hat.values().iter().zip(ens.c_hat.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
        assert_abs_diff_eq!(win.d_hat_left, ens.d_hat_left, epsilon = 1e-8);
        assert_abs_diff_eq!(win.d_hat_right, ens.d_hat_right, epsilon = 1e-8);
    }
    let ens = build_averaged(&common::separable_periodic(), &d, AveragingMode::Ensemble).unwrap();
    let c1 = common::c1(&common::grid());
    for (a, b) in ens.c_hat.values().iter().zip(c1.values()) {
        assert_abs_diff_eq!(a, b, epsilon = 1e-15);
    }
}

#[test]
fn geometric_mean_over_a_period_ignores_the_phase() {
    let d = common::sin_t_driver();
    let f = common::nonseparable_periodic(1.0);
    let cfg = StepperConfig::implicit_euler(common::periodic_dt());
    let p = 2.0 * PI;
    let g = f.grid().clone();
    let u0 = DiscreteField::constant(&g, Dofs::Interior, 1.0);
    let opts = TrackOptions::new(7.0 * p, 4.0 * p).with_snapshots(SnapshotRequest::Every {
        from: 4.0 * p,
        to: 7.0 * p,
    });
    let tr = track_principal(&u0, &f, &d, &cfg, &opts).unwrap();
    let m = 628;
    let a = geometric_mean_profile(&tr.w_snapshots[..=m], &g, Dofs::Interior).unwrap();
    let b = geometric_mean_profile(&tr.w_snapshots[157..=157 + m], &g, Dofs::Interior).unwrap();
    assert!(a.max_abs_diff(&b) < 1e-8, "{}", a.max_abs_diff(&b));
}

#[test]
fn tracking_is_scale_invariant() {
    let d = common::sin_t_driver();
    let f = common::nonseparable_periodic(1.0);
    let cfg = StepperConfig::implicit_euler(0.01);
    let g = f.grid().clone();
    let u0 = g.sample(Dofs::Interior, |x| x * (PI - x) + 0.1);
    let opts = TrackOptions::new(3.0, 1.0).with_snapshots(SnapshotRequest::Every {
        from: 0.01,
        to: 3.0,
    });
    let a = track_principal(&u0, &f, &d, &cfg, &opts).unwrap();
    let b = track_principal(&u0.scaled(37.5), &f, &d, &cfg, &opts).unwrap();
    for (x, y) in a.kappa_samples.iter().zip(&b.kappa_samples) {
        assert_abs_diff_eq!(x, y, epsilon = 1e-12);
    }
    for ((_, w1), (_, w2)) in a.w_snapshots.iter().zip(&b.w_snapshots) {
        assert!(w1.max_abs_diff(w2) < 1e-12);
    }
}

#[test]
fn different_starts_converge_to_one_direction() {
    let d = common::sin_t_driver();
    let g = build_grid(PI, 30).unwrap();
    let f = CoefficientField::new(&g, BcKind::Dirichlet).with_c_term(
        TemporalSymbol::constant(1.0),
        SpatialProfile::from_fn(&g, |x| 0.5 * x.cos()),
    );
    let cfg = StepperConfig::implicit_euler(0.01);
    let opts = TrackOptions::new(20.0, 10.0)
        .with_snapshots(SnapshotRequest::At((1..=20).map(f64::from).collect()));
    let a = track_principal(
        &DiscreteField::constant(&g, Dofs::Interior, 1.0),
        &f,
        &d,
        &cfg,
        &opts,
    )
    .unwrap();
    let mut spike = vec![0.0; g.n_nodes()];
    spike[3] = 1.0;
    let b = track_principal(
        &DiscreteField::new(spike, Dofs::Interior),
        &f,
        &d,
        &cfg,
        &opts,
    )
    .unwrap();
    let dist: Vec<f64> = a
        .w_snapshots
        .iter()
        .zip(&b.w_snapshots)
        .map(|((_, x), (_, y))| x.max_abs_diff(y))
        .collect();
    for pair in dist.windows(2) {
        assert!(pair[1] <= pair[0] || pair[1] < 1e-13, "{dist:?}");
    }
    assert!(dist[9] < 1e-8, "distance at burn-in {}", dist[9]);
}

#[test]
fn full_horizon_kappa_mean_lies_in_the_interval() {
    let d = common::quasiperiodic_driver();
    let f = common::quasiperiodic();
    let cfg = StepperConfig::implicit_euler(0.01);
    let u0 = DiscreteField::constant(f.grid(), Dofs::Interior, 1.0);
    let tr = track_principal(&u0, &f, &d, &cfg, &TrackOptions::new(250.0, 50.0)).unwrap();
    let est = estimate_spectrum_interval(&tr, &[25.0, 50.0, 100.0]).unwrap();
    let mean = tr.kappa_mean();
    assert!(est.lambda_inf_hat - 1e-9 <= mean && mean <= est.lambda_sup_hat + 1e-9);
    assert!(est.lambda_inf_hat <= est.lambda_sup_hat);
    assert_eq!(est.per_window_minmax.len(), 3);
}

#[test]
fn separable_periodic_interval_collapses() {
    let d = common::sin_t_driver();
    let f = common::separable_periodic();
    let cfg = StepperConfig::implicit_euler(common::periodic_dt());
    let p = 2.0 * PI;
    let u0 = DiscreteField::constant(f.grid(), Dofs::Interior, 1.0);
    let tr = track_principal(&u0, &f, &d, &cfg, &TrackOptions::new(14.0 * p, 4.0 * p)).unwrap();
    let est = estimate_spectrum_interval(&tr, &[p, 2.0 * p, 5.0 * p]).unwrap();
    assert!(est.width() < 1e-6);
    let g = f.grid();
    let auto = CoefficientField::new(g, BcKind::Dirichlet)
        .with_c_term(TemporalSymbol::constant(1.0), common::c1(g));
    let (lam1, _) = principal_eigenpair(&assemble(&auto, &d, 0.0).unwrap()).unwrap();
    assert_abs_diff_eq!(est.lambda_inf_hat, lam1, epsilon = 1e-8);
}

#[test]
fn autonomous_random_run_is_phase_independent() {
    let g = build_grid(PI, 20).unwrap();
    let f = CoefficientField::new(&g, BcKind::Dirichlet).with_c_term(
        TemporalSymbol::constant(1.0),
        SpatialProfile::from_fn(&g, |x| x.sin()),
    );
    let d = DrivingSystem::at_origin(vec![1.0, 2f64.sqrt()]).unwrap();
    let opts = RandomRunOptions {
        n_omega: 4,
        horizon: 20.0,
        burn_in: 5.0,
        seed: 9,
    };
    let est =
        estimate_lyapunov_random(&f, &d, &StepperConfig::implicit_euler(0.01), &opts).unwrap();
    let first = est.per_omega[0].estimate;
    assert!(est
        .per_omega
        .iter()
        .all(|s| s.estimate.to_bits() == first.to_bits()));
    assert_eq!(est.dispersion, 0.0);
    let again =
        estimate_lyapunov_random(&f, &d, &StepperConfig::implicit_euler(0.01), &opts).unwrap();
    assert_eq!(est, again);
    let one = RandomRunOptions { n_omega: 1, ..opts };
    assert!(matches!(
        estimate_lyapunov_random(&f, &d, &StepperConfig::implicit_euler(0.01), &one),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn separable_random_exponent_matches_averaged_eigenvalue() {
    let f = common::separable_random();
    let d = common::unit_driver();
    let cfg = StepperConfig::implicit_euler(0.002);
    let opts = RandomRunOptions {
        n_omega: 2,
        horizon: 500.0,
        burn_in: 50.0,
        seed: 5,
    };
    let est = estimate_lyapunov_random(&f, &d, &cfg, &opts).unwrap();
    let (lam_hat, _) = principal_eigenpair(
        &build_averaged(&f, &d, AveragingMode::Ensemble)
            .unwrap()
            .operator,
    )
    .unwrap();
    for s in &est.per_omega {
        assert!(
            (s.estimate - lam_hat).abs() <= 2e-3,
            "{} vs {lam_hat}",
            s.estimate
        );
        assert_eq!(s.horizon, 500.0);
    }
}
