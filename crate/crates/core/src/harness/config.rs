//! Experiment configuration.
//!
//! Configs are TOML. Every numeric field accepts either a number or a string
//! expression without `x` (`"2*pi/628"`, `"sqrt(2)/(2*pi)"`); spatial
//! profiles are expression strings over `x` (see [`super::expr`]).
//!
//! ```toml
//! seed = 7
//!
//! [grid]                 # defaults: length = pi, n_interior = 99
//! length = "pi"
//! n_interior = 99
//!
//! [stepper]              # defaults: implicit-euler, dt = 0.01
//! scheme = "implicit-euler"   # or "crank-nicolson"
//! dt = "2*pi/628"
//! positivity_required = true
//!
//! [coefficients]         # defaults: dirichlet, a11 = "1", a1 = "0"
//! bc = "dirichlet"       # "neumann" | "robin"
//! a11 = "1"
//! a1 = "0"
//! alpha0 = 1e-8
//! b_left = -1            # robin b on each end
//! b_right = 1
//! d_left = { constant = 1, harmonics = [{ angle = 1, sin = 1 }] }
//! d_right = { constant = 1 }
//!
//! [[coefficients.c]]     # c(t, x) = sum of symbol(theta_t) * profile(x)
//! profile = "cos(x)"
//! constant = 0
//! harmonics = [{ angle = 1, sin = 1, cos = 0, multiple = 1 }]
//!
//! [driver]               # theta_t = phase + t * frequencies (mod 1)
//! frequencies = ["1/(2*pi)"]
//! phase = [0.0]          # or seed = N to draw a Haar phase
//!
//! [spectrum]             # defaults: horizon 300, burn_in 50, ladder [50, 100]
//! [lyapunov]             # defaults: n_omega 8, horizon 500, burn_in 50
//! [compare]              # run_kind = "nonautonomous" | "random"
//! [eigen]                # mode = "ensemble" | "window" (+ start, end, n_quad)
//! [sweep]                # term = 0, values = [0, 0.5, 1]
//! [tolerances]           # eq = 2e-3, ineq = 5e-3
//! [output]               # dir = "out"
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::expr::{self, Expr};
use crate::averaging::{AveragingMode, RunKind, Tolerances};
use crate::coefficients::{
    sample_omega, BcKind, CoefficientField, DrivingSystem, Harmonic, SpatialProfile, TemporalSymbol,
};
use crate::error::{Error, Result};
use crate::evolution::{Scheme, StepperConfig};
use crate::grid::Grid1D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Eigen,
    Lyapunov,
    Spectrum,
    Compare,
    Sweep,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::Eigen => "eigen",
            Self::Lyapunov => "lyapunov",
            Self::Spectrum => "spectrum",
            Self::Compare => "compare",
            Self::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Num(f64),
    Text(String),
}

#[derive(Debug, Default, Deserialize)]
struct RawConfig {
    experiment: Option<Experiment>,
    seed: Option<u64>,
    grid: Option<RawGrid>,
    stepper: Option<RawStepper>,
    coefficients: Option<RawCoefficients>,
    driver: Option<RawDriver>,
    spectrum: Option<RawSpectrum>,
    lyapunov: Option<RawLyapunov>,
    compare: Option<RawCompare>,
    eigen: Option<RawEigen>,
    sweep: Option<RawSweep>,
    tolerances: Option<RawTolerances>,
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Deserialize)]
struct RawGrid {
    length: Option<Scalar>,
    n_interior: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
struct RawStepper {
    scheme: Option<String>,
    dt: Option<Scalar>,
    positivity_required: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
struct RawHarmonic {
    angle: usize,
    #[serde(default)]
    cos: Option<Scalar>,
    #[serde(default)]
    sin: Option<Scalar>,
    #[serde(default)]
    multiple: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
struct RawSymbol {
    constant: Option<Scalar>,
    #[serde(default)]
    harmonics: Vec<RawHarmonic>,
}

#[derive(Debug, Default, Deserialize)]
struct RawTerm {
    profile: String,
    constant: Option<Scalar>,
    #[serde(default)]
    harmonics: Vec<RawHarmonic>,
}

#[derive(Debug, Default, Deserialize)]
struct RawCoefficients {
    bc: Option<String>,
    a11: Option<String>,
    a1: Option<String>,
    alpha0: Option<Scalar>,
    b_left: Option<Scalar>,
    b_right: Option<Scalar>,
    #[serde(default)]
    c: Vec<RawTerm>,
    d_left: Option<RawSymbol>,
    d_right: Option<RawSymbol>,
}

#[derive(Debug, Default, Deserialize)]
struct RawDriver {
    k: Option<usize>,
    frequencies: Option<Vec<Scalar>>,
    phase: Option<Vec<Scalar>>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
struct RawSpectrum {
    horizon: Option<Scalar>,
    burn_in: Option<Scalar>,
    ladder: Option<Vec<Scalar>>,
}

#[derive(Debug, Default, Deserialize)]
struct RawLyapunov {
    n_omega: Option<usize>,
    horizon: Option<Scalar>,
    burn_in: Option<Scalar>,
}

#[derive(Debug, Default, Deserialize)]
struct RawCompare {
    run_kind: Option<RunKind>,
}

#[derive(Debug, Default, Deserialize)]
struct RawEigen {
    mode: Option<String>,
    start: Option<Scalar>,
    end: Option<Scalar>,
    n_quad: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
struct RawSweep {
    term: Option<usize>,
    values: Option<Vec<Scalar>>,
}

#[derive(Debug, Default, Deserialize)]
struct RawTolerances {
    eq: Option<Scalar>,
    ineq: Option<Scalar>,
}

#[derive(Debug, Default, Deserialize)]
struct RawOutput {
    dir: Option<String>,
}

impl<'de> Deserialize<'de> for RunKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "nonautonomous" => Ok(RunKind::Nonautonomous),
            "random" => Ok(RunKind::Random),
            other => Err(serde::de::Error::custom(format!(
                "run_kind must be \"nonautonomous\" or \"random\", got {other:?}"
            ))),
        }
    }
}

/// One harmonic of a temporal symbol, as declared.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicSpec {
    pub angle: usize,
    pub cos: f64,
    pub sin: f64,
    pub multiple: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct SymbolSpec {
    pub constant: f64,
    pub harmonics: Vec<HarmonicSpec>,
}

impl SymbolSpec {
    pub fn to_symbol(&self) -> TemporalSymbol {
        TemporalSymbol::new(
            self.constant,
            self.harmonics
                .iter()
                .map(|h| Harmonic {
                    angle: h.angle,
                    cos_amp: h.cos,
                    sin_amp: h.sin,
                    multiple: h.multiple,
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermSpec {
    pub profile: String,
    pub symbol: SymbolSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSpec {
    pub bc: String,
    pub a11: String,
    pub a1: String,
    pub alpha0: f64,
    pub b_left: f64,
    pub b_right: f64,
    pub c: Vec<TermSpec>,
    pub d_left: Option<SymbolSpec>,
    pub d_right: Option<SymbolSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriverSpec {
    pub frequencies: Vec<f64>,
    pub phase: Vec<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSpec {
    pub horizon: f64,
    pub burn_in: f64,
    pub ladder: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovSpec {
    pub n_omega: usize,
    pub horizon: f64,
    pub burn_in: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub term: usize,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepperSpec {
    pub scheme: String,
    pub dt: f64,
    pub positivity_required: bool,
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    pub seed: u64,
    pub length: f64,
    pub n_interior: usize,
    pub stepper: StepperSpec,
    pub coefficients: CoefficientSpec,
    pub driver: DriverSpec,
    pub spectrum: SpectrumSpec,
    pub lyapunov: LyapunovSpec,
    pub run_kind: RunKind,
    pub eigen_mode: AveragingMode,
    pub sweep: Option<SweepSpec>,
    pub tolerances: Tolerances,
    pub output_dir: Option<PathBuf>,
}

struct Collector {
    errors: Vec<String>,
}

impl Collector {
    fn scalar(&mut self, what: &str, v: Option<&Scalar>, default: f64) -> f64 {
        match v {
            None => default,
            Some(Scalar::Num(x)) => *x,
            Some(Scalar::Text(s)) => match expr::parse_scalar(s) {
                Ok(x) => x,
                Err(e) => {
                    self.errors.push(format!("{what}: {e}"));
                    default
                }
            },
        }
    }

    fn scalars(&mut self, what: &str, v: Option<&Vec<Scalar>>, default: &[f64]) -> Vec<f64> {
        match v {
            None => default.to_vec(),
            Some(list) => list
                .iter()
                .enumerate()
                .map(|(i, s)| self.scalar(&format!("{what}[{i}]"), Some(s), 0.0))
                .collect(),
        }
    }

    fn symbol(
        &mut self,
        what: &str,
        constant: Option<&Scalar>,
        harmonics: &[RawHarmonic],
        default: f64,
    ) -> SymbolSpec {
        SymbolSpec {
            constant: self.scalar(&format!("{what}.constant"), constant, default),
            harmonics: harmonics
                .iter()
                .enumerate()
                .map(|(i, h)| HarmonicSpec {
                    angle: h.angle,
                    cos: self.scalar(&format!("{what}.harmonics[{i}].cos"), h.cos.as_ref(), 0.0),
                    sin: self.scalar(&format!("{what}.harmonics[{i}].sin"), h.sin.as_ref(), 0.0),
                    multiple: h.multiple.unwrap_or(1),
                })
                .collect(),
        }
    }

    fn check_symbol(&mut self, what: &str, s: &SymbolSpec, k: usize) {
        for (i, h) in s.harmonics.iter().enumerate() {
            if h.angle == 0 || h.angle > k {
                self.errors.push(format!(
                    "{what}.harmonics[{i}]: angle index {} outside 1..={k} (driver dimension k = {k})",
                    h.angle
                ));
            }
            if h.multiple == 0 {
                self.errors
                    .push(format!("{what}.harmonics[{i}]: multiple must be >= 1"));
            }
        }
    }

    fn aligned(&mut self, what: &str, t: f64, dt: f64) {
        let x = t / dt;
        if !(dt > 0.0) || (x - x.round()).abs() > 1e-9 * x.round().abs().max(1.0) {
            self.errors.push(format!(
                "alignment: {what} = {t} is not a multiple of dt = {dt}"
            ));
        }
    }
}

/// Parses and validates a TOML config. All violations are reported together.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut unknown = Vec::new();
    let de = toml::Deserializer::parse(text).map_err(|e| Error::Config(vec![e.to_string()]))?;
    let raw: RawConfig = serde_ignored::deserialize(de, |path| {
        // Option layers show up as "?" segments
        unknown.push(path.to_string().replace(".?", "").replace("?.", ""))
    })
    .map_err(|e| Error::Config(vec![e.to_string()]))?;
    let mut c = Collector { errors: Vec::new() };
    for key in unknown {
        c.errors.push(format!("unknown key: {key}"));
    }

    let grid = raw.grid.unwrap_or_default();
    let length = c.scalar("grid.length", grid.length.as_ref(), std::f64::consts::PI);
    let n_interior = grid.n_interior.unwrap_or(99);
    if !(length > 0.0) {
        c.errors
            .push(format!("grid.length must be positive, got {length}"));
    }
    if n_interior < 2 {
        c.errors.push(format!(
            "grid.n_interior must be at least 2, got {n_interior}"
        ));
    }

    let st = raw.stepper.unwrap_or_default();
    let scheme = st.scheme.unwrap_or_else(|| "implicit-euler".into());
    if !matches!(scheme.as_str(), "implicit-euler" | "crank-nicolson") {
        c.errors.push(format!(
            "stepper.scheme must be \"implicit-euler\" or \"crank-nicolson\", got {scheme:?}"
        ));
    }
    let dt = c.scalar("stepper.dt", st.dt.as_ref(), 0.01);
    if !(dt > 0.0) {
        c.errors
            .push(format!("stepper.dt must be positive, got {dt}"));
    }
    let stepper = StepperSpec {
        scheme,
        dt,
        positivity_required: st.positivity_required.unwrap_or(true),
    };

    let co = raw.coefficients.unwrap_or_default();
    let bc = co.bc.unwrap_or_else(|| "dirichlet".into());
    if !matches!(bc.as_str(), "dirichlet" | "neumann" | "robin") {
        c.errors.push(format!(
            "coefficients.bc must be dirichlet, neumann or robin, got {bc:?}"
        ));
    }
    let a11 = co.a11.unwrap_or_else(|| "1".into());
    let a1 = co.a1.unwrap_or_else(|| "0".into());
    for (what, src) in [("coefficients.a11", &a11), ("coefficients.a1", &a1)] {
        if let Err(e) = expr::parse(src) {
            c.errors.push(format!("{what}: {e}"));
        }
    }
    let terms: Vec<TermSpec> =
        co.c.iter()
            .enumerate()
            .map(|(i, t)| {
                if let Err(e) = expr::parse(&t.profile) {
                    c.errors.push(format!("coefficients.c[{i}].profile: {e}"));
                }
                TermSpec {
                    profile: t.profile.clone(),
                    symbol: c.symbol(
                        &format!("coefficients.c[{i}]"),
                        t.constant.as_ref(),
                        &t.harmonics,
                        0.0,
                    ),
                }
            })
            .collect();
    let d_left = co.d_left.as_ref().map(|s| {
        c.symbol(
            "coefficients.d_left",
            s.constant.as_ref(),
            &s.harmonics,
            0.0,
        )
    });
    let d_right = co.d_right.as_ref().map(|s| {
        c.symbol(
            "coefficients.d_right",
            s.constant.as_ref(),
            &s.harmonics,
            0.0,
        )
    });
    if bc != "robin" && (d_left.is_some() || d_right.is_some()) {
        c.errors
            .push("coefficients.d_left/d_right only apply to bc = \"robin\"".into());
    }
    let coefficients = CoefficientSpec {
        bc,
        a11,
        a1,
        alpha0: c.scalar("coefficients.alpha0", co.alpha0.as_ref(), 1e-8),
        b_left: c.scalar("coefficients.b_left", co.b_left.as_ref(), -1.0),
        b_right: c.scalar("coefficients.b_right", co.b_right.as_ref(), 1.0),
        c: terms,
        d_left,
        d_right,
    };

    let dr = raw.driver.unwrap_or_default();
    let frequencies = c.scalars(
        "driver.frequencies",
        dr.frequencies.as_ref(),
        &[1.0 / (2.0 * std::f64::consts::PI)],
    );
    let k = frequencies.len();
    if k == 0 {
        c.errors.push("driver.frequencies must not be empty".into());
    }
    if let Some(kk) = dr.k {
        if kk != k {
            c.errors
                .push(format!("driver.k = {kk} but {k} frequencies are given"));
        }
    }
    if dr.phase.is_some() && dr.seed.is_some() {
        c.errors
            .push("driver: give either phase or seed, not both".into());
    }
    let phase = match (&dr.phase, dr.seed) {
        (Some(_), _) => c.scalars("driver.phase", dr.phase.as_ref(), &[]),
        (None, Some(s)) if k > 0 => sample_omega(s, k)?,
        _ => vec![0.0; k],
    };
    if phase.len() != k {
        c.errors.push(format!(
            "driver.phase has {} entries, expected k = {k}",
            phase.len()
        ));
    }
    for (i, t) in coefficients.c.iter().enumerate() {
        c.check_symbol(&format!("coefficients.c[{i}]"), &t.symbol, k);
    }
    if let Some(s) = &coefficients.d_left {
        c.check_symbol("coefficients.d_left", s, k);
    }
    if let Some(s) = &coefficients.d_right {
        c.check_symbol("coefficients.d_right", s, k);
    }
    let driver = DriverSpec {
        frequencies,
        phase,
        seed: dr.seed,
    };

    let sp = raw.spectrum.unwrap_or_default();
    let spectrum = SpectrumSpec {
        horizon: c.scalar("spectrum.horizon", sp.horizon.as_ref(), 300.0),
        burn_in: c.scalar("spectrum.burn_in", sp.burn_in.as_ref(), 50.0),
        ladder: c.scalars("spectrum.ladder", sp.ladder.as_ref(), &[50.0, 100.0]),
    };
    let ly = raw.lyapunov.unwrap_or_default();
    let lyapunov = LyapunovSpec {
        n_omega: ly.n_omega.unwrap_or(8),
        horizon: c.scalar("lyapunov.horizon", ly.horizon.as_ref(), 500.0),
        burn_in: c.scalar("lyapunov.burn_in", ly.burn_in.as_ref(), 50.0),
    };
    let run_kind = raw
        .compare
        .and_then(|r| r.run_kind)
        .unwrap_or(RunKind::Nonautonomous);

    let ei = raw.eigen.unwrap_or_default();
    let eigen_mode = match ei.mode.as_deref().unwrap_or("ensemble") {
        "ensemble" => AveragingMode::Ensemble,
        "window" => {
            let start = c.scalar("eigen.start", ei.start.as_ref(), 0.0);
            let end = c.scalar("eigen.end", ei.end.as_ref(), f64::NAN);
            if !(end > start) {
                c.errors
                    .push(format!("eigen.end must exceed eigen.start = {start}"));
            }
            AveragingMode::Window {
                start,
                end,
                n_quad: ei.n_quad.unwrap_or(1000),
            }
        }
        other => {
            c.errors.push(format!(
                "eigen.mode must be \"ensemble\" or \"window\", got {other:?}"
            ));
            AveragingMode::Ensemble
        }
    };

    let sweep = raw.sweep.map(|s| SweepSpec {
        term: s.term.unwrap_or(0),
        values: c.scalars("sweep.values", s.values.as_ref(), &[]),
    });
    let tol = raw.tolerances.unwrap_or_default();
    let tolerances = Tolerances {
        eq: c.scalar("tolerances.eq", tol.eq.as_ref(), 2e-3),
        ineq: c.scalar("tolerances.ineq", tol.ineq.as_ref(), 5e-3),
    };
    if !(tolerances.eq >= 0.0 && tolerances.ineq >= 0.0) {
        c.errors.push("tolerances must be nonnegative".into());
    }

    let cfg = ExperimentConfig {
        experiment: raw.experiment,
        seed: raw.seed.unwrap_or(0),
        length,
        n_interior,
        stepper,
        coefficients,
        driver,
        spectrum,
        lyapunov,
        run_kind,
        eigen_mode,
        sweep,
        tolerances,
        output_dir: raw.output.and_then(|o| o.dir).map(PathBuf::from),
    };
    if c.errors.is_empty() {
        // coefficient-level checks need a grid and parsed profiles
        if let Ok(field) = cfg.build_field() {
            c.errors.extend(field.violations());
        }
    }
    if c.errors.is_empty() {
        Ok(cfg)
    } else {
        Err(Error::Config(c.errors))
    }
}

impl ExperimentConfig {
    /// Checks the fields the chosen experiment needs, including step
    /// alignment of every horizon and window.
    pub fn validate_for(&self, experiment: Experiment) -> Result<()> {
        let mut c = Collector { errors: Vec::new() };
        let dt = self.stepper.dt;
        let spectrum_checks = |c: &mut Collector| {
            c.aligned("spectrum.horizon", self.spectrum.horizon, dt);
            c.aligned("spectrum.burn_in", self.spectrum.burn_in, dt);
            for (i, t) in self.spectrum.ladder.iter().enumerate() {
                c.aligned(&format!("spectrum.ladder[{i}]"), *t, dt);
            }
            if self.spectrum.ladder.is_empty() {
                c.errors.push("spectrum.ladder must not be empty".into());
            }
        };
        let lyapunov_checks = |c: &mut Collector| {
            c.aligned("lyapunov.horizon", self.lyapunov.horizon, dt);
            c.aligned("lyapunov.burn_in", self.lyapunov.burn_in, dt);
            if self.lyapunov.n_omega < 2 {
                c.errors.push(format!(
                    "lyapunov.n_omega must be at least 2, got {}",
                    self.lyapunov.n_omega
                ));
            }
        };
        match experiment {
            Experiment::Eigen => {}
            Experiment::Spectrum => spectrum_checks(&mut c),
            Experiment::Lyapunov => lyapunov_checks(&mut c),
            Experiment::Compare | Experiment::Sweep => match self.run_kind {
                RunKind::Nonautonomous => spectrum_checks(&mut c),
                RunKind::Random => lyapunov_checks(&mut c),
            },
        }
        if experiment == Experiment::Sweep {
            match &self.sweep {
                None => c
                    .errors
                    .push("sweep experiment needs a [sweep] section".into()),
                Some(s) => {
                    if s.values.is_empty() {
                        c.errors.push("sweep.values must not be empty".into());
                    }
                    if s.term >= self.coefficients.c.len() {
                        c.errors.push(format!(
                            "sweep.term = {} but only {} c terms are declared",
                            s.term,
                            self.coefficients.c.len()
                        ));
                    }
                }
            }
        }
        if let Some(e) = self.experiment {
            if e != experiment {
                c.errors.push(format!(
                    "config declares experiment = {:?} but {:?} was requested",
                    e.name(),
                    experiment.name()
                ));
            }
        }
        if c.errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(c.errors))
        }
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.length, self.n_interior)
    }

    pub fn stepper_config(&self) -> StepperConfig {
        let scheme = if self.stepper.scheme == "crank-nicolson" {
            Scheme::CrankNicolson
        } else {
            Scheme::ImplicitEuler
        };
        StepperConfig {
            scheme,
            dt: self.stepper.dt,
            positivity_required: self.stepper.positivity_required,
        }
    }

    pub fn bc(&self) -> BcKind {
        match self.coefficients.bc.as_str() {
            "neumann" => BcKind::Neumann,
            "robin" => BcKind::Robin,
            _ => BcKind::Dirichlet,
        }
    }

    pub fn build_field(&self) -> Result<CoefficientField> {
        let grid = self.grid()?;
        let profile = |src: &str| -> Result<SpatialProfile> {
            let e: Expr = expr::parse(src)?;
            Ok(SpatialProfile::from_fn(&grid, |x| e.eval(x)))
        };
        let co = &self.coefficients;
        let mut field = CoefficientField::new(&grid, self.bc())
            .with_diffusion(profile(&co.a11)?)
            .with_advection(profile(&co.a1)?)
            .with_alpha0(co.alpha0)
            .with_boundary_b(co.b_left, co.b_right);
        for t in &co.c {
            field = field.with_c_term(t.symbol.to_symbol(), profile(&t.profile)?);
        }
        if self.bc() == BcKind::Robin {
            let d = |s: &Option<SymbolSpec>| {
                s.as_ref()
                    .map(SymbolSpec::to_symbol)
                    .unwrap_or_else(|| TemporalSymbol::constant(0.0))
            };
            field = field.with_robin(d(&co.d_left), d(&co.d_right));
        }
        Ok(field)
    }

    pub fn build_driver(&self) -> Result<DrivingSystem> {
        DrivingSystem::new(self.driver.frequencies.clone(), self.driver.phase.clone())
    }
}
