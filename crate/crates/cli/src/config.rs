//! Resolution of file and flag parameters into a validated [`RunConfig`].

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use annulus_spectra::geometry::AnnulusLayout;
use annulus_spectra::verify::{default_domains, SuiteConfig};
use annulus_spectra::{BoundaryLayout, Metric, MinimizeOptions, ShapeSpec, SolverOptions};
use clap::Args;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::args::*;
use crate::CliError;

/// A validated run: what to compute and where the results go.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub job: Job,
    pub output: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub jobs: usize,
    pub field_csv: Option<PathBuf>,
    pub mask_pgm: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialParams {
    pub layout: AnnulusLayout,
    pub p: f64,
    pub n: usize,
    pub kappa: f64,
    pub r1: f64,
    pub r2: f64,
    pub solver: SolverOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallParams {
    pub p: f64,
    pub n: usize,
    pub kappa: f64,
    pub radius: f64,
    pub solver: SolverOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridParams {
    pub shape: ShapeSpec,
    pub layout: BoundaryLayout,
    pub metric: Metric,
    pub h: f64,
    pub p: f64,
    pub minimize: MinimizeOptions,
    pub solver: SolverOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HoleParams {
    pub p: f64,
    pub n: usize,
    pub radius: f64,
    pub eps: Vec<f64>,
    pub solver: SolverOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepParams {
    pub problem: SweepProblem,
    pub n: Vec<usize>,
    pub kappa: Vec<f64>,
    pub p: Vec<f64>,
    pub r1: Vec<f64>,
    pub r2: Vec<f64>,
    pub solver: SolverOptions,
}

/// One point of a sweep; `r1` is `None` for balls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub n: usize,
    pub kappa: f64,
    pub p: f64,
    pub r1: Option<f64>,
    pub r2: f64,
}

impl SweepParams {
    /// Cartesian product in the order n, kappa, p, r1, r2, last varying fastest.
    pub fn points(&self) -> Vec<SweepPoint> {
        let r1: Vec<Option<f64>> = match self.problem {
            SweepProblem::Ball => vec![None],
            _ => self.r1.iter().map(|&r| Some(r)).collect(),
        };
        let mut out = Vec::new();
        for &n in &self.n {
            for &kappa in &self.kappa {
                for &p in &self.p {
                    for &r1 in &r1 {
                        for &r2 in &self.r2 {
                            out.push(SweepPoint { n, kappa, p, r1, r2 });
                        }
                    }
                }
            }
        }
        out
    }
}

/// Resolved parameters of every command. The serialized form, flattened to
/// sorted `key=value` pairs, is the canonical config.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Job {
    Radial(RadialParams),
    Ball(BallParams),
    Grid(GridParams),
    Rearrange {
        grid: GridParams,
        levels: usize,
    },
    #[serde(rename = "verify.faber_krahn")]
    FaberKrahn(GridParams),
    #[serde(rename = "verify.rearrangement")]
    Rearrangement(GridParams),
    #[serde(rename = "verify.monotonicity")]
    Monotonicity {
        p: f64,
        n: usize,
        r1: f64,
        r2: f64,
        kappas: Vec<f64>,
        solver: SolverOptions,
    },
    #[serde(rename = "verify.vanishing_hole")]
    VanishingHole(HoleParams),
    #[serde(rename = "verify.mu_decay")]
    MuDecay(HoleParams),
    #[serde(rename = "verify.trial_bound")]
    TrialBound {
        p: f64,
        n: usize,
        kappa: f64,
        eps: f64,
        eta: f64,
        radius: f64,
        solver: SolverOptions,
    },
    #[serde(rename = "verify.hadamard")]
    Hadamard {
        p: f64,
        n: usize,
        kappa: f64,
        r1: f64,
        r2: f64,
        delta: f64,
        solver: SolverOptions,
    },
    #[serde(rename = "verify.sign")]
    Sign {
        problem: SweepProblem,
        p: f64,
        n: usize,
        kappa: f64,
        r1: f64,
        r2: f64,
        solver: SolverOptions,
    },
    #[serde(rename = "verify.suite")]
    Suite(SuiteConfig),
    Sweep(SweepParams),
}

impl Job {
    pub fn name(&self) -> String {
        match serde_json::to_value(self) {
            Ok(Value::Object(m)) => m["command"].as_str().unwrap_or_default().to_string(),
            _ => unreachable!("jobs serialize to tagged objects"),
        }
    }

    /// Sorted `key=value` pairs; nested keys are joined with dots, numbers
    /// are written as `{:.16e}` and lists as comma-separated values.
    pub fn canonical(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        flatten("", &serde_json::to_value(self).expect("jobs serialize"), &mut out);
        out
    }

    /// SHA-256 of the canonical pairs, one `key=value` line each.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for (k, v) in self.canonical() {
            hasher.update(format!("{k}={v}\n").as_bytes());
        }
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "null".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(x) => format!("{:.16e}", x.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(scalar).collect::<Vec<_>>().join(","),
        Value::Object(_) => {
            let mut m = BTreeMap::new();
            flatten("", v, &mut m);
            let pairs: Vec<String> = m.into_iter().map(|(k, v)| format!("{k}:{v}")).collect();
            format!("{{{}}}", pairs.join(";"))
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut BTreeMap<String, String>) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        _ => {
            out.insert(prefix.to_string(), scalar(v));
        }
    }
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Reads a JSON config file; it must hold an object.
pub fn read_config_file(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(config_error(format!("config {} must hold a JSON object", path.display()))),
        Err(e) => Err(config_error(format!("config {} is not valid JSON: {e}", path.display()))),
    }
}

/// Overlays the given flags on the file values. Keys are checked one at a
/// time, in sorted order, so the error names the first offending key.
fn layer<A>(file: &Map<String, Value>, flags: &A) -> Result<A, CliError>
where
    A: Args + Serialize + DeserializeOwned,
{
    let known: BTreeSet<String> =
        A::augment_args(clap::Command::new("args")).get_arguments().map(|a| a.get_id().to_string()).collect();
    let mut merged = file.clone();
    if let Value::Object(m) = serde_json::to_value(flags).expect("arguments serialize") {
        merged.extend(m);
    }
    for (key, value) in &merged {
        if !known.contains(key) {
            return Err(config_error(format!("unknown key `{key}`")));
        }
        let single = Value::Object(Map::from_iter([(key.clone(), value.clone())]));
        serde_json::from_value::<A>(single).map_err(|e| config_error(format!("invalid value for `{key}`: {e}")))?;
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| config_error(e.to_string()))
}

fn check_p(p: f64) -> Result<f64, CliError> {
    if p > 1.0 && p.is_finite() {
        Ok(p)
    } else {
        Err(config_error(format!("p must exceed 1, got {p}")))
    }
}

fn check_positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(config_error(format!("{key} must be positive, got {v}")))
    }
}

fn check_finite(key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(config_error(format!("{key} must be finite, got {v}")))
    }
}

fn check_dim(n: usize) -> Result<usize, CliError> {
    if n >= 1 {
        Ok(n)
    } else {
        Err(config_error("n must be at least 1"))
    }
}

fn check_list<T>(key: &str, v: Vec<T>) -> Result<Vec<T>, CliError> {
    if v.is_empty() {
        Err(config_error(format!("{key} must not be empty")))
    } else {
        Ok(v)
    }
}

fn solver(a: &SolverArgs) -> Result<SolverOptions, CliError> {
    let d = SolverOptions::default();
    Ok(SolverOptions {
        eig_rel_tol: check_positive("eig_rel_tol", a.eig_rel_tol.unwrap_or(d.eig_rel_tol))?,
        ode_tol: check_positive("ode_tol", a.ode_tol.unwrap_or(d.ode_tol))?,
        ..d
    })
}

fn layout(problem: Option<Problem>) -> AnnulusLayout {
    match problem.unwrap_or(Problem::Lambda) {
        Problem::Lambda => AnnulusLayout::InnerNeumannOuterDirichlet,
        Problem::Mu => AnnulusLayout::InnerDirichletOuterNeumann,
    }
}

fn grid(a: &GridArgs) -> Result<GridParams, CliError> {
    let text = a.shape.as_deref().unwrap_or("annulus:1,0.3");
    let mut shape: ShapeSpec = text.parse().map_err(|e| config_error(format!("invalid value for `shape`: {e}")))?;
    if let Some(o) = a.offset {
        let o = check_finite("offset", o)?;
        match &mut shape {
            ShapeSpec::Annulus { offset, .. }
            | ShapeSpec::DiskMinusSquare { offset, .. }
            | ShapeSpec::EllipseMinusDisk { offset, .. } => *offset = o,
            _ => return Err(config_error(format!("offset given but shape {shape} has no hole"))),
        }
        shape.validate().map_err(|e| config_error(format!("invalid value for `offset`: {e}")))?;
    }
    let d = MinimizeOptions::default();
    Ok(GridParams {
        shape,
        layout: layout(a.problem).into(),
        metric: match a.metric.unwrap_or(MetricArg::Flat) {
            MetricArg::Flat => Metric::Flat,
            MetricArg::Sphere => Metric::Sphere,
        },
        h: check_positive("h", a.h.unwrap_or(1.0 / 64.0))?,
        p: check_p(a.p.unwrap_or(2.0))?,
        minimize: MinimizeOptions {
            rel_tol: check_positive("rel_tol", a.rel_tol.unwrap_or(d.rel_tol))?,
            max_iterations: a.max_iterations.unwrap_or(d.max_iterations),
            ..d
        },
        solver: solver(&a.solver)?,
    })
}

fn holes(a: &HoleArgs, default_n: usize) -> Result<HoleParams, CliError> {
    Ok(HoleParams {
        p: check_p(a.p.unwrap_or(2.0))?,
        n: check_dim(a.n.unwrap_or(default_n))?,
        radius: check_positive("radius", a.radius.unwrap_or(1.0))?,
        eps: check_list("eps", a.eps.clone().unwrap_or_else(|| vec![0.16, 0.08, 0.04, 0.02]))?,
        solver: solver(&a.solver)?,
    })
}

fn suite(a: &SuiteArgs) -> Result<SuiteConfig, CliError> {
    let mut config = SuiteConfig::default();
    if let Some(h) = a.h {
        config.grid_h = check_positive("h", h)?;
    }
    if let Some(ps) = &a.planar_p {
        config.planar_p = check_list("planar_p", ps.iter().map(|&p| check_p(p)).collect::<Result<_, _>>()?)?;
    }
    if let Some(ps) = &a.radial_p {
        config.radial_p = check_list("radial_p", ps.iter().map(|&p| check_p(p)).collect::<Result<_, _>>()?)?;
    }
    if let Some(names) = &a.domains {
        let all = default_domains();
        config.domains = names
            .iter()
            .map(|name| {
                all.iter()
                    .find(|d| &d.name == name)
                    .cloned()
                    .ok_or_else(|| config_error(format!("invalid value for `domains`: no domain named {name:?}")))
            })
            .collect::<Result<_, _>>()?;
    }
    Ok(config)
}

fn resolve<'a>(command: &'a Command, file: &Map<String, Value>) -> Result<(Job, Option<&'a GridArgs>), CliError> {
    // The grid flags are returned as given so that the side-output paths can be layered too.
    Ok(match command {
        Command::Radial(flags) => {
            let a = layer(file, flags)?;
            let job = Job::Radial(RadialParams {
                layout: layout(a.problem),
                p: check_p(a.p.unwrap_or(2.0))?,
                n: check_dim(a.n.unwrap_or(2))?,
                kappa: check_finite("kappa", a.kappa.unwrap_or(0.0))?,
                r1: check_positive("r1", a.r1.unwrap_or(0.5))?,
                r2: check_positive("r2", a.r2.unwrap_or(1.0))?,
                solver: solver(&a.solver)?,
            });
            (job, None)
        }
        Command::Ball(flags) => {
            let a = layer(file, flags)?;
            let job = Job::Ball(BallParams {
                p: check_p(a.p.unwrap_or(2.0))?,
                n: check_dim(a.n.unwrap_or(2))?,
                kappa: check_finite("kappa", a.kappa.unwrap_or(0.0))?,
                radius: check_positive("radius", a.radius.unwrap_or(1.0))?,
                solver: solver(&a.solver)?,
            });
            (job, None)
        }
        Command::Grid(flags) => (Job::Grid(grid(&layer(file, flags)?)?), Some(flags)),
        Command::Rearrange(flags) => {
            let a = layer(file, flags)?;
            let levels = a.levels.unwrap_or(annulus_spectra::planar::LADDER_LEVELS);
            if levels < 2 {
                return Err(config_error("levels must be at least 2"));
            }
            (Job::Rearrange { grid: grid(&a.grid)?, levels }, Some(&flags.grid))
        }
        Command::Verify { check } => match check {
            Check::FaberKrahn(flags) => (Job::FaberKrahn(grid(&layer(file, flags)?)?), Some(flags)),
            Check::Rearrangement(flags) => (Job::Rearrangement(grid(&layer(file, flags)?)?), Some(flags)),
            Check::Monotonicity(flags) => {
                let a = layer(file, flags)?;
                let job = Job::Monotonicity {
                    p: check_p(a.p.unwrap_or(2.0))?,
                    n: check_dim(a.n.unwrap_or(2))?,
                    r1: check_positive("r1", a.r1.unwrap_or(0.5))?,
                    r2: check_positive("r2", a.r2.unwrap_or(1.0))?,
                    kappas: check_list("kappas", a.kappas.unwrap_or_else(|| vec![-1.0, -0.5, 0.0, 0.25, 0.5]))?,
                    solver: solver(&a.solver)?,
                };
                (job, None)
            }
            Check::VanishingHole(flags) => (Job::VanishingHole(holes(&layer(file, flags)?, 2)?), None),
            Check::MuDecay(flags) => (Job::MuDecay(holes(&layer(file, flags)?, 3)?), None),
            Check::TrialBound(flags) => {
                let a = layer(file, flags)?;
                let job = Job::TrialBound {
                    p: check_p(a.p.unwrap_or(2.0))?,
                    n: check_dim(a.n.unwrap_or(3))?,
                    kappa: check_finite("kappa", a.kappa.unwrap_or(0.0))?,
                    eps: check_positive("eps", a.eps.unwrap_or(0.1))?,
                    eta: check_positive("eta", a.eta.unwrap_or(0.1))?,
                    radius: check_positive("radius", a.radius.unwrap_or(1.0))?,
                    solver: solver(&a.solver)?,
                };
                (job, None)
            }
            Check::Hadamard(flags) => {
                let a = layer(file, flags)?;
                let job = Job::Hadamard {
                    p: check_p(a.p.unwrap_or(2.0))?,
                    n: check_dim(a.n.unwrap_or(2))?,
                    kappa: check_finite("kappa", a.kappa.unwrap_or(0.0))?,
                    r1: check_positive("r1", a.r1.unwrap_or(0.3))?,
                    r2: check_positive("r2", a.r2.unwrap_or(1.0))?,
                    delta: check_positive("delta", a.delta.unwrap_or(1e-3))?,
                    solver: solver(&a.solver)?,
                };
                (job, None)
            }
            Check::Sign(flags) => {
                let a = layer(file, flags)?;
                let job = Job::Sign {
                    problem: a.problem.unwrap_or(SweepProblem::Lambda),
                    p: check_p(a.p.unwrap_or(2.0))?,
                    n: check_dim(a.n.unwrap_or(2))?,
                    kappa: check_finite("kappa", a.kappa.unwrap_or(0.0))?,
                    r1: check_positive("r1", a.r1.unwrap_or(0.3))?,
                    r2: check_positive("r2", a.r2.unwrap_or(1.0))?,
                    solver: solver(&a.solver)?,
                };
                (job, None)
            }
            Check::Suite(flags) => (Job::Suite(suite(&layer(file, flags)?)?), None),
        },
        Command::Sweep(flags) => {
            let a = layer(file, flags)?;
            let floats = |key: &str, v: Option<Vec<f64>>, default: f64, check: fn(&str, f64) -> Result<f64, CliError>| {
                check_list(key, v.unwrap_or_else(|| vec![default]))?
                    .into_iter()
                    .map(|x| check(key, x))
                    .collect::<Result<Vec<f64>, CliError>>()
            };
            let job = Job::Sweep(SweepParams {
                problem: a.problem.unwrap_or(SweepProblem::Lambda),
                n: check_list("n", a.n.unwrap_or_else(|| vec![2]))?
                    .into_iter()
                    .map(check_dim)
                    .collect::<Result<_, _>>()?,
                kappa: floats("kappa", a.kappa, 0.0, check_finite)?,
                p: floats("p", a.p, 2.0, |_, p| check_p(p))?,
                r1: floats("r1", a.r1, 0.5, check_positive)?,
                r2: floats("r2", a.r2, 1.0, check_positive)?,
                solver: solver(&a.solver)?,
            });
            (job, None)
        }
        Command::Plot(_) => return Err(config_error("plot takes no parameters")),
    })
}

/// Validates the parsed command line, layered over `--config` when given.
/// `cache_env` is the value of `ANNULUS_SPECTRA_CACHE`, which wins over
/// `cache_dir`.
pub fn parse_config(cli: &Cli, cache_env: Option<PathBuf>) -> Result<RunConfig, CliError> {
    let mut file = match &cli.common.config {
        Some(path) => read_config_file(path)?,
        None => Map::new(),
    };
    let mut common_file = Map::new();
    for key in ["output", "cache_dir", "jobs"] {
        if let Some(v) = file.remove(key) {
            common_file.insert(key.to_string(), v);
        }
    }
    let common: CommonArgs = layer(&common_file, &cli.common)?;
    let (job, grid_flags) = resolve(&cli.command, &file)?;
    let side: Option<GridArgs> = grid_flags.map(|g| layer(&grid_side(&file), g)).transpose()?;
    let jobs = common.jobs.unwrap_or(1);
    if jobs == 0 {
        return Err(config_error("jobs must be at least 1"));
    }
    Ok(RunConfig {
        job,
        output: common.output,
        cache_dir: cache_env.or(common.cache_dir),
        jobs,
        field_csv: side.as_ref().and_then(|g| g.field_csv.clone()),
        mask_pgm: side.and_then(|g| g.mask_pgm),
    })
}

/// The grid keys of a config file; `rearrange` files also carry `levels`.
fn grid_side(file: &Map<String, Value>) -> Map<String, Value> {
    file.iter().filter(|(k, _)| k.as_str() != "levels").map(|(k, v)| (k.clone(), v.clone())).collect()
}

#[cfg(test)]
mod tests {
    use clap::Parser;

    use super::*;

    fn parse(argv: &[&str]) -> Result<RunConfig, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("annulus-spectra").chain(argv.iter().copied())).unwrap();
        parse_config(&cli, None)
    }

    #[test]
    fn radial_flags_map_directly() {
        let cfg = parse(&["radial", "--problem", "lambda", "--p", "2", "--n", "2", "--kappa", "0", "--r1", "0.5", "--r2", "1"])
            .unwrap();
        let Job::Radial(r) = &cfg.job else { panic!("{:?}", cfg.job) };
        assert_eq!((r.p, r.n, r.kappa, r.r1, r.r2), (2.0, 2, 0.0, 0.5, 1.0));
        assert_eq!(r.layout, AnnulusLayout::InnerNeumannOuterDirichlet);
        assert_eq!(cfg.jobs, 1);
    }

    #[test]
    fn negative_curvature_parses() {
        let cfg = parse(&["radial", "--kappa", "-1"]).unwrap();
        let Job::Radial(r) = &cfg.job else { panic!() };
        assert_eq!(r.kappa, -1.0);
        let cfg = parse(&["sweep", "--kappa", "-1,0,0.5", "--p", "1.5,2,3"]).unwrap();
        let Job::Sweep(s) = &cfg.job else { panic!() };
        assert_eq!(s.points().len(), 9);
        assert_eq!(s.points()[1].p, 2.0);
        assert_eq!(s.points()[3].kappa, 0.0);
    }

    #[test]
    fn offset_overrides_shape() {
        let cfg = parse(&["verify", "faber-krahn", "--shape", "annulus:1,0.3", "--offset", "0.4", "--p", "2"]).unwrap();
        let Job::FaberKrahn(g) = &cfg.job else { panic!() };
        assert_eq!(g.shape, ShapeSpec::Annulus { outer: 1.0, inner: 0.3, offset: 0.4 });
        assert!(parse(&["grid", "--shape", "disk:1", "--offset", "0.1"]).is_err());
    }

    #[test]
    fn digest_ignores_flag_order_and_number_spelling() {
        let a = parse(&["radial", "--r1", "0.5", "--p", "2"]).unwrap().job;
        let b = parse(&["radial", "--p", "2.0", "--r1", "5e-1"]).unwrap().job;
        let c = parse(&["radial"]).unwrap().job;
        assert_eq!(a.digest(), b.digest());
        assert_eq!(a.digest(), c.digest());
        let d = parse(&["radial", "--p", "3"]).unwrap().job;
        assert_ne!(a.digest(), d.digest());
        assert_ne!(a.digest(), parse(&["ball"]).unwrap().job.digest());
        assert_eq!(a.canonical()["p"], "2.0000000000000000e0");
        assert_eq!(a.canonical()["command"], "radial");
    }

    #[test]
    fn paths_and_jobs_stay_out_of_the_digest() {
        let a = parse(&["grid", "--h", "0.1"]).unwrap();
        let b = parse(&["grid", "--h", "0.1", "--jobs", "4", "--output", "x.json", "--field-csv", "f.csv"]).unwrap();
        assert_eq!(a.job.digest(), b.job.digest());
        assert_eq!(b.jobs, 4);
        assert_eq!(b.field_csv.as_deref(), Some(Path::new("f.csv")));
    }

    #[test]
    fn rejects_small_p() {
        let err = parse(&["radial", "--p", "0.9"]).unwrap_err();
        assert!(err.to_string().contains("p must exceed 1"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn cache_env_wins() {
        let cli = Cli::try_parse_from(["annulus-spectra", "radial", "--cache-dir", "a"]).unwrap();
        let cfg = parse_config(&cli, Some(PathBuf::from("b"))).unwrap();
        assert_eq!(cfg.cache_dir.as_deref(), Some(Path::new("b")));
    }

    #[test]
    fn canonical_flattens_nested_values() {
        let cfg = parse(&["verify", "monotonicity", "--kappas=-1,0"]).unwrap();
        let c = cfg.job.canonical();
        assert_eq!(c["kappas"], "-1.0000000000000000e0,0.0000000000000000e0");
        assert_eq!(c["solver.start_offset"], "null");
        assert_eq!(c["command"], "verify.monotonicity");
    }
}
