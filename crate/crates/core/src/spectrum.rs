//! Principal direction tracking and growth-rate estimators.
//!
//! [`track_principal`] iterates the cocycle with per-step renormalization.
//! By exponential separation the normalized profile locks onto the principal
//! direction `w(theta_t omega)` after a transient; from then on two growth
//! records are kept:
//!
//! * `kappa(t) = <A(t) w, w>`, the instantaneous growth rate of `||u||`;
//! * `ln(||u_{n+1}|| / ||u_n||)`, the realised log-growth of each step.
//!
//! Window averages of `kappa` give the principal spectrum interval
//! (liminf / limsup over windows), the time average of the log-growth gives
//! the principal Lyapunov exponent, and the monodromy power iteration in
//! [`floquet_oracle`] is an independent check for periodic coefficients.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::coefficients::{sample_omega_indexed, CoefficientField, DrivingSystem};
use crate::error::{Error, Result};
use crate::evolution::{Propagator, Scheme, StepperConfig};
use crate::grid::{DiscreteField, Grid1D};
use crate::operator::weighted_rayleigh;

/// Which normalized profiles to keep while tracking.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum SnapshotRequest {
    #[default]
    None,
    /// Every step endpoint in `[from, to]`.
    Every { from: f64, to: f64 },
    /// The given lattice times.
    At(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackOptions {
    /// Total tracked time, measured from `t = 0`.
    pub horizon: f64,
    pub burn_in: f64,
    pub snapshots: SnapshotRequest,
}

impl TrackOptions {
    pub fn new(horizon: f64, burn_in: f64) -> Self {
        Self {
            horizon,
            burn_in,
            snapshots: SnapshotRequest::None,
        }
    }

    pub fn with_snapshots(mut self, snapshots: SnapshotRequest) -> Self {
        self.snapshots = snapshots;
        self
    }
}

/// Time series of the tracked principal direction. Entry `k` belongs to the
/// step ending at `times[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalTrace {
    pub dt: f64,
    pub times: Vec<f64>,
    pub kappa_samples: Vec<f64>,
    pub log_norm_increments: Vec<f64>,
    pub burn_in: f64,
    /// First entry with `times[k] >= burn_in`.
    pub burn_in_index: usize,
    pub w_snapshots: Vec<(f64, DiscreteField)>,
    pub final_profile: DiscreteField,
}

impl PrincipalTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    /// Trapezoid mean of kappa over entries `first..=first + steps`.
    pub fn kappa_window_mean(&self, first: usize, steps: usize) -> f64 {
        let k = &self.kappa_samples[first..=first + steps];
        let inner: f64 = k[1..steps].iter().sum();
        (inner + 0.5 * (k[0] + k[steps])) / steps as f64
    }

    /// Kappa mean over everything after burn-in.
    pub fn kappa_mean(&self) -> f64 {
        let steps = self.len() - 1 - self.burn_in_index;
        self.kappa_window_mean(self.burn_in_index, steps)
    }

    /// Log-growth per unit time over `(times[first], times[first + steps]]`.
    pub fn growth_rate_window(&self, first: usize, steps: usize) -> f64 {
        let total: f64 = self.log_norm_increments[first + 1..=first + steps]
            .iter()
            .sum();
        total / (steps as f64 * self.dt)
    }

    /// Log-growth per unit time after burn-in.
    pub fn growth_rate(&self) -> f64 {
        let steps = self.len() - 1 - self.burn_in_index;
        self.growth_rate_window(self.burn_in_index, steps)
    }

    /// CSV with columns `t,kappa,log_norm_increment`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["t", "kappa", "log_norm_increment"])
            .map_err(io)?;
        for k in 0..self.len() {
            w.write_record([
                self.times[k].to_string(),
                self.kappa_samples[k].to_string(),
                self.log_norm_increments[k].to_string(),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// CSV with columns `x,<value_name>` over all grid nodes.
pub fn write_profile_csv<W: Write>(
    grid: &Grid1D,
    field: &DiscreteField,
    value_name: &str,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["x", value_name]).map_err(io)?;
    for (x, v) in grid.nodes().iter().zip(field.values()) {
        w.write_record([x.to_string(), v.to_string()]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

fn weighted_norm(weights: &[f64], u: &[f64]) -> f64 {
    u.iter()
        .zip(weights)
        .map(|(x, w)| w * x * x)
        .sum::<f64>()
        .sqrt()
}

fn weighted_dot(weights: &[f64], u: &[f64], v: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .zip(weights)
        .map(|((a, b), w)| w * a * b)
        .sum()
}

/// Follows the normalized principal profile from `u0 >= 0` over `[0, horizon]`.
pub fn track_principal(
    u0: &DiscreteField,
    field: &CoefficientField,
    driver: &DrivingSystem,
    cfg: &StepperConfig,
    opts: &TrackOptions,
) -> Result<PrincipalTrace> {
    let grid = field.grid();
    if u0.len() != grid.n_nodes() {
        return Err(Error::Shape {
            expected: grid.n_nodes(),
            found: u0.len(),
        });
    }
    if u0.values().iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::Precondition(
            "initial profile must be finite and nonnegative".into(),
        ));
    }
    if !(opts.burn_in >= 0.0 && opts.burn_in < opts.horizon) {
        return Err(Error::Precondition(format!(
            "burn-in {} must lie in [0, horizon = {})",
            opts.burn_in, opts.horizon
        )));
    }
    let n_steps = cfg.aligned(opts.horizon, "horizon")?;
    let burn_steps = cfg.aligned(opts.burn_in, "burn_in")?;

    let mut prop = Propagator::new(field, driver, *cfg)?;
    let dofs = field.bc().dofs();
    let weights = prop.weights().to_vec();
    let mut u = u0.dof_values(grid).to_vec();
    let norm0 = weighted_norm(&weights, &u);
    if !(norm0 > 0.0) {
        return Err(Error::DegenerateInput("initial profile is zero".into()));
    }
    u.iter_mut().for_each(|x| *x /= norm0);

    let snap_steps: Vec<i64> = match &opts.snapshots {
        SnapshotRequest::None => Vec::new(),
        SnapshotRequest::Every { from, to } => {
            let a = cfg.aligned(*from, "snapshot start")?.max(1);
            let b = cfg.aligned(*to, "snapshot end")?.min(n_steps);
            (a..=b).collect()
        }
        SnapshotRequest::At(times) => {
            let mut v = times
                .iter()
                .map(|&t| cfg.aligned(t, "snapshot time"))
                .collect::<Result<Vec<_>>>()?;
            v.sort_unstable();
            v.dedup();
            v
        }
    };
    let mut next_snap = 0usize;

    let cap = n_steps as usize;
    let mut times = Vec::with_capacity(cap);
    let mut kappa = Vec::with_capacity(cap);
    let mut incr = Vec::with_capacity(cap);
    let mut snapshots = Vec::with_capacity(snap_steps.len());
    let mut buf = vec![0.0; u.len()];

    for j in 0..n_steps {
        let op = prop.advance(j, &mut u)?;
        let norm = weighted_norm(&weights, &u);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::DegenerateInput(format!(
                "solution norm became {norm} at t = {}",
                cfg.time_of(j + 1)
            )));
        }
        u.iter_mut().for_each(|x| *x /= norm);
        times.push(cfg.time_of(j + 1));
        incr.push(norm.ln());
        kappa.push(weighted_rayleigh(&op, &weights, &u, &mut buf));
        while next_snap < snap_steps.len() && snap_steps[next_snap] <= j + 1 {
            if snap_steps[next_snap] == j + 1 {
                snapshots.push((
                    cfg.time_of(j + 1),
                    DiscreteField::from_dofs(grid, dofs, &u)?,
                ));
            }
            next_snap += 1;
        }
    }

    let burn_in_index = (burn_steps.max(1) - 1) as usize;
    Ok(PrincipalTrace {
        dt: cfg.dt,
        times,
        kappa_samples: kappa,
        log_norm_increments: incr,
        burn_in: opts.burn_in,
        burn_in_index,
        w_snapshots: snapshots,
        final_profile: DiscreteField::from_dofs(grid, dofs, &u)?,
    })
}

/// Min/max of kappa window averages for one window length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowStats {
    pub length: f64,
    pub min: f64,
    pub max: f64,
    /// Start time of the window realising the minimum.
    pub argmin_start: f64,
    pub argmax_start: f64,
    pub n_windows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEstimate {
    pub lambda_inf_hat: f64,
    pub lambda_sup_hat: f64,
    pub window_ladder: Vec<f64>,
    pub per_window_minmax: Vec<WindowStats>,
    pub burn_in: f64,
}

impl SpectrumEstimate {
    pub fn width(&self) -> f64 {
        self.lambda_sup_hat - self.lambda_inf_hat
    }
}

/// Sliding windows `[S, S + T]` with `S >= burn_in` and stride
/// `dt * ceil(T / (10 dt))`.
pub fn window_starts(trace: &PrincipalTrace, length: f64) -> Result<(usize, Vec<usize>)> {
    let steps = (length / trace.dt).round() as usize;
    if steps == 0 || ((steps as f64) * trace.dt - length).abs() > 1e-9 * length.max(1.0) {
        return Err(Error::Alignment(format!(
            "window length {length} is not a multiple of dt = {}",
            trace.dt
        )));
    }
    let stride = ((length / (10.0 * trace.dt)) - 1e-9).ceil().max(1.0) as usize;
    let last = trace.len() - 1;
    let mut starts = Vec::new();
    let mut i = trace.burn_in_index;
    while i + steps <= last {
        starts.push(i);
        i += stride;
    }
    Ok((steps, starts))
}

/// Principal spectrum interval from kappa window averages; the min/max at
/// the longest window are reported as `(lambda_inf, lambda_sup)`.
pub fn estimate_spectrum_interval(
    trace: &PrincipalTrace,
    ladder: &[f64],
) -> Result<SpectrumEstimate> {
    let longest = ladder.iter().cloned().fold(f64::NAN, f64::max);
    if ladder.is_empty() || !(longest > 0.0) {
        return Err(Error::InsufficientData("empty window ladder".into()));
    }
    if trace.horizon() + 1e-9 < 2.0 * longest + trace.burn_in {
        return Err(Error::InsufficientData(format!(
            "horizon {} < 2 * {} + burn-in {}",
            trace.horizon(),
            longest,
            trace.burn_in
        )));
    }
    let mut ladder_sorted = ladder.to_vec();
    ladder_sorted.sort_by(|a, b| a.total_cmp(b));
    let mut stats = Vec::with_capacity(ladder_sorted.len());
    for &length in &ladder_sorted {
        let (steps, starts) = window_starts(trace, length)?;
        if starts.is_empty() {
            return Err(Error::InsufficientData(format!(
                "no window of length {length} fits"
            )));
        }
        let mut s = WindowStats {
            length,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            argmin_start: 0.0,
            argmax_start: 0.0,
            n_windows: starts.len(),
        };
        for &i in &starts {
            let m = trace.kappa_window_mean(i, steps);
            if m < s.min {
                s.min = m;
                s.argmin_start = trace.times[i];
            }
            if m > s.max {
                s.max = m;
                s.argmax_start = trace.times[i];
            }
        }
        stats.push(s);
    }
    let top = stats.last().unwrap();
    Ok(SpectrumEstimate {
        lambda_inf_hat: top.min,
        lambda_sup_hat: top.max,
        window_ladder: ladder_sorted,
        per_window_minmax: stats.clone(),
        burn_in: trace.burn_in,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaSample {
    pub index: u64,
    pub phase: Vec<f64>,
    pub horizon: f64,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    pub lambda_hat: f64,
    pub per_omega: Vec<OmegaSample>,
    /// Largest pairwise gap between per-sample estimates.
    pub dispersion: f64,
    pub seed: u64,
}

/// Settings for the Monte Carlo over `omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomRunOptions {
    pub n_omega: usize,
    pub horizon: f64,
    pub burn_in: f64,
    pub seed: u64,
}

/// Principal Lyapunov exponent over Haar samples of the phase. Each sample
/// uses the ChaCha8 stream `index` of `seed`; the mean is reduced in index
/// order, so thread count never changes the result.
pub fn estimate_lyapunov_random(
    field: &CoefficientField,
    driver: &DrivingSystem,
    cfg: &StepperConfig,
    opts: &RandomRunOptions,
) -> Result<LyapunovEstimate> {
    if opts.n_omega < 2 {
        return Err(Error::Precondition(format!(
            "need at least 2 samples of omega, got {}",
            opts.n_omega
        )));
    }
    let track = TrackOptions::new(opts.horizon, opts.burn_in);
    let u0 = DiscreteField::constant(field.grid(), field.bc().dofs(), 1.0);
    let samples = (0..opts.n_omega as u64)
        .into_par_iter()
        .map(|index| {
            let phase = sample_omega_indexed(opts.seed, index, driver.k())?;
            let d = driver.with_phase(phase.clone())?;
            let trace = track_principal(&u0, field, &d, cfg, &track)?;
            Ok(OmegaSample {
                index,
                phase,
                horizon: opts.horizon,
                estimate: trace.growth_rate(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let lambda_hat = samples.iter().map(|s| s.estimate).sum::<f64>() / samples.len() as f64;
    let lo = samples
        .iter()
        .map(|s| s.estimate)
        .fold(f64::INFINITY, f64::min);
    let hi = samples
        .iter()
        .map(|s| s.estimate)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(LyapunovEstimate {
        lambda_hat,
        per_omega: samples,
        dispersion: hi - lo,
        seed: opts.seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationEstimate {
    /// Top two exponents from the orthonormal-frame Rayleigh diagonals.
    pub lambda1: f64,
    pub lambda2: f64,
    pub mu: f64,
    /// The same two exponents from accumulated log-stretch factors.
    pub stretch_lambda1: f64,
    pub stretch_lambda2: f64,
    /// `|mu(first half) - mu(second half)|` after burn-in.
    pub dispersion: f64,
    pub reliable: bool,
}

/// Top two Lyapunov exponents by a two-vector iteration with Gram-Schmidt in
/// the weighted inner product.
pub fn estimate_separation(
    field: &CoefficientField,
    driver: &DrivingSystem,
    cfg: &StepperConfig,
    horizon: f64,
    burn_in: f64,
) -> Result<SeparationEstimate> {
    if !(horizon >= 10.0 * burn_in && burn_in > 0.0) {
        return Err(Error::Precondition(format!(
            "horizon {horizon} must be at least 10 x burn-in {burn_in} (> 0)"
        )));
    }
    let n_steps = cfg.aligned(horizon, "horizon")?;
    let burn_steps = cfg.aligned(burn_in, "burn_in")?;
    let grid = field.grid();
    let mut prop = Propagator::new(field, driver, *cfg)?;
    let weights = prop.weights().to_vec();
    let dofs = field.bc().dofs();
    let range = grid.dof_range(dofs);
    let x: Vec<f64> = grid.nodes()[range].to_vec();
    let length = grid.length();

    let mut q1 = vec![1.0; x.len()];
    // odd about the midpoint, so not parallel to the positive direction
    let mut q2: Vec<f64> = x
        .iter()
        .map(|&xi| xi / length - 0.5 + 0.1 * (xi / length).powi(2))
        .collect();
    let n1 = weighted_norm(&weights, &q1);
    q1.iter_mut().for_each(|v| *v /= n1);
    let p = weighted_dot(&weights, &q2, &q1);
    q2.iter_mut().zip(&q1).for_each(|(a, b)| *a -= p * b);
    let n2 = weighted_norm(&weights, &q2);
    if !(n2 > 0.0) {
        return Err(Error::RankLoss { time: 0.0 });
    }
    q2.iter_mut().for_each(|v| *v /= n2);

    let mut buf = vec![0.0; x.len()];
    let post = (n_steps - burn_steps) as usize;
    let mut r1 = Vec::with_capacity(post + 1);
    let mut r2 = Vec::with_capacity(post + 1);
    let mut s1 = 0.0;
    let mut s2 = 0.0;

    for j in 0..n_steps {
        let op = prop.advance(j, &mut q1)?;
        prop.advance(j, &mut q2)?;
        let t = cfg.time_of(j + 1);
        let a = weighted_norm(&weights, &q1);
        q1.iter_mut().for_each(|v| *v /= a);
        let p = weighted_dot(&weights, &q2, &q1);
        q2.iter_mut().zip(&q1).for_each(|(v, b)| *v -= p * b);
        let b = weighted_norm(&weights, &q2);
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::RankLoss { time: t });
        }
        q2.iter_mut().for_each(|v| *v /= b);
        if j + 1 >= burn_steps {
            r1.push(weighted_rayleigh(&op, &weights, &q1, &mut buf));
            r2.push(weighted_rayleigh(&op, &weights, &q2, &mut buf));
            if j + 1 > burn_steps {
                s1 += a.ln();
                s2 += b.ln();
            }
        }
    }

    let trap = |v: &[f64]| -> f64 {
        let m = v.len() - 1;
        (v[1..m].iter().sum::<f64>() + 0.5 * (v[0] + v[m])) / m as f64
    };
    let lambda1 = trap(&r1);
    let lambda2 = trap(&r2);
    let half = r1.len() / 2;
    let mu_a = trap(&r1[..=half]) - trap(&r2[..=half]);
    let mu_b = trap(&r1[half..]) - trap(&r2[half..]);
    let dispersion = (mu_a - mu_b).abs();
    let mu = lambda1 - lambda2;
    let span = post as f64 * cfg.dt;
    Ok(SeparationEstimate {
        lambda1,
        lambda2,
        mu,
        stretch_lambda1: s1 / span,
        stretch_lambda2: s2 / span,
        dispersion,
        reliable: mu.is_finite() && mu >= 10.0 * dispersion,
    })
}

/// Growth rate per unit time that the stepper produces on an eigenvector of
/// an autonomous operator with eigenvalue `lambda`.
pub fn stepper_growth_rate(lambda: f64, cfg: &StepperConfig) -> f64 {
    let dt = cfg.dt;
    match cfg.scheme {
        Scheme::ImplicitEuler => -(1.0 - dt * lambda).ln() / dt,
        Scheme::CrankNicolson => ((1.0 + 0.5 * dt * lambda) / (1.0 - 0.5 * dt * lambda)).ln() / dt,
    }
}

/// `ln rho(U(P, 0)) / P` by power iteration on the one-period map.
pub fn floquet_oracle(
    field: &CoefficientField,
    driver: &DrivingSystem,
    cfg: &StepperConfig,
    period: f64,
) -> Result<f64> {
    if driver.k() != 1 {
        return Err(Error::Precondition(format!(
            "floquet oracle needs a one-dimensional driver, got k = {}",
            driver.k()
        )));
    }
    let cycles = period * driver.frequencies()[0];
    if (cycles - cycles.round()).abs() > 1e-9 || cycles.round() == 0.0 {
        return Err(Error::Precondition(format!(
            "coefficients are not {period}-periodic"
        )));
    }
    let steps = cfg.aligned(period, "period")?;
    let mut prop = Propagator::new(field, driver, *cfg)?;
    let weights = prop.weights().to_vec();
    let mut v = vec![1.0; weights.len()];
    let n0 = weighted_norm(&weights, &v);
    v.iter_mut().for_each(|x| *x /= n0);
    let mut prev = f64::NAN;
    for _ in 0..100_000 {
        for j in 0..steps {
            prop.advance(j, &mut v)?;
        }
        let rho = weighted_norm(&weights, &v);
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::OracleFailure(format!(
                "monodromy iterate has norm {rho}"
            )));
        }
        v.iter_mut().for_each(|x| *x /= rho);
        if (rho - prev).abs() <= 1e-12 * rho {
            return Ok(rho.ln() / period);
        }
        prev = rho;
    }
    Err(Error::OracleFailure(
        "power iteration did not converge in 100000 periods".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{BcKind, Harmonic, SpatialProfile, TemporalSymbol};
    use crate::grid::{build_grid, Dofs};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn laplacian(n: usize) -> (CoefficientField, DrivingSystem) {
        let g = build_grid(PI, n).unwrap();
        (
            CoefficientField::new(&g, BcKind::Dirichlet),
            DrivingSystem::at_origin(vec![1.0 / (2.0 * PI)]).unwrap(),
        )
    }

    #[test]
    fn kappa_locks_onto_principal_eigenvalue() {
        let (f, d) = laplacian(30);
        let g = f.grid().clone();
        let cfg = StepperConfig::implicit_euler(0.01);
        let ones = DiscreteField::constant(&g, Dofs::Interior, 1.0);
        let trace = track_principal(&ones, &f, &d, &cfg, &TrackOptions::new(25.0, 20.0)).unwrap();
        let lam = -(4.0 / (g.h() * g.h())) * (g.h() / 2.0).sin().powi(2);
        for k in &trace.kappa_samples[trace.burn_in_index..] {
            assert_abs_diff_eq!(*k, lam, epsilon = 1e-8);
        }
        assert_abs_diff_eq!(
            trace.growth_rate(),
            stepper_growth_rate(lam, &cfg),
            epsilon = 1e-10
        );
    }

    #[test]
    fn eigenvector_start_is_stationary() {
        let (f, d) = laplacian(12);
        let g = f.grid().clone();
        let cfg = StepperConfig::implicit_euler(0.01);
        let (w0, _) = crate::grid::normalize(&g.sample(Dofs::Interior, f64::sin), &g).unwrap();
        let opts = TrackOptions::new(2.0, 0.5).with_snapshots(SnapshotRequest::Every {
            from: 0.01,
            to: 2.0,
        });
        let trace = track_principal(&w0, &f, &d, &cfg, &opts).unwrap();
        assert_eq!(trace.w_snapshots.len(), 200);
        for (_, w) in &trace.w_snapshots {
            assert!(w.max_abs_diff(&w0) < 1e-10);
            assert_abs_diff_eq!(g.norm(w).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn tracking_rejects_bad_initial_data() {
        let (f, d) = laplacian(8);
        let g = f.grid().clone();
        let cfg = StepperConfig::implicit_euler(0.01);
        let opts = TrackOptions::new(1.0, 0.5);
        let zero = DiscreteField::zeros(&g, Dofs::Interior);
        assert!(matches!(
            track_principal(&zero, &f, &d, &cfg, &opts),
            Err(Error::DegenerateInput(_))
        ));
        let neg = DiscreteField::constant(&g, Dofs::Interior, -1.0);
        assert!(matches!(
            track_principal(&neg, &f, &d, &cfg, &opts),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn autonomous_interval_is_a_point() {
        let (f, d) = laplacian(10);
        let g = f.grid().clone();
        let cfg = StepperConfig::implicit_euler(0.01);
        let ones = DiscreteField::constant(&g, Dofs::Interior, 1.0);
        let trace = track_principal(&ones, &f, &d, &cfg, &TrackOptions::new(40.0, 20.0)).unwrap();
        let est = estimate_spectrum_interval(&trace, &[2.0, 5.0]).unwrap();
        let lam = -(4.0 / (g.h() * g.h())) * (g.h() / 2.0).sin().powi(2);
        assert_abs_diff_eq!(est.lambda_inf_hat, lam, epsilon = 1e-8);
        assert_abs_diff_eq!(est.lambda_sup_hat, lam, epsilon = 1e-8);
        assert!(matches!(
            estimate_spectrum_interval(&trace, &[15.0]),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn separation_of_small_laplacian() {
        let (f, d) = laplacian(3);
        let h = PI / 4.0;
        let cfg = StepperConfig::implicit_euler(0.01);
        let est = estimate_separation(&f, &d, &cfg, 30.0, 3.0).unwrap();
        let l1 = -(4.0 / (h * h)) * (PI / 8.0).sin().powi(2);
        let l2 = -(4.0 / (h * h)) * (PI / 4.0).sin().powi(2);
        assert_abs_diff_eq!(est.lambda1, l1, epsilon = 1e-6);
        assert_abs_diff_eq!(est.lambda2, l2, epsilon = 1e-6);
        assert_abs_diff_eq!(est.mu, l1 - l2, epsilon = 1e-6);
        assert!(est.reliable);
        assert_abs_diff_eq!(
            est.stretch_lambda1,
            stepper_growth_rate(l1, &cfg),
            epsilon = 1e-8
        );
    }

    #[test]
    fn floquet_of_autonomous_problem() {
        let (f, d) = laplacian(15);
        let g = f.grid().clone();
        let cfg = StepperConfig::implicit_euler(2.0 * PI / 200.0);
        let rate = floquet_oracle(&f, &d, &cfg, 2.0 * PI).unwrap();
        let lam = -(4.0 / (g.h() * g.h())) * (g.h() / 2.0).sin().powi(2);
        assert_abs_diff_eq!(rate, stepper_growth_rate(lam, &cfg), epsilon = 1e-10);
    }

    #[test]
    fn floquet_needs_periodic_driver() {
        let g = build_grid(PI, 6).unwrap();
        let f = CoefficientField::new(&g, BcKind::Dirichlet).with_c_term(
            TemporalSymbol::new(0.0, vec![Harmonic::sin(1, 1.0)]),
            SpatialProfile::constant(&g, 1.0),
        );
        let cfg = StepperConfig::implicit_euler(0.01);
        let two = DrivingSystem::at_origin(vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            floquet_oracle(&f, &two, &cfg, 1.0),
            Err(Error::Precondition(_))
        ));
        let one = DrivingSystem::at_origin(vec![0.3]).unwrap();
        assert!(matches!(
            floquet_oracle(&f, &one, &cfg, 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn trace_csv_schema() {
        let (f, d) = laplacian(4);
        let g = f.grid().clone();
        let cfg = StepperConfig::implicit_euler(0.1);
        let ones = DiscreteField::constant(&g, Dofs::Interior, 1.0);
        let trace = track_principal(&ones, &f, &d, &cfg, &TrackOptions::new(0.3, 0.1)).unwrap();
        let mut out = Vec::new();
        trace.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "t,kappa,log_norm_increment");
        assert_eq!(lines.len(), 4);
        let mut out = Vec::new();
        write_profile_csv(&g, &trace.final_profile, "w", &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().starts_with("x,w\n"));
    }
}
