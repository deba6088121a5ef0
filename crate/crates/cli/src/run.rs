use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use annulus_spectra::geometry::AnnulusSpec;
use annulus_spectra::planar::{build_domain, minimize_rayleigh, schwarz_rearrange_with};
use annulus_spectra::radial::{solve_annulus, solve_dirichlet_ball};
use annulus_spectra::verify::{self, check_rearrangement, check_sign_structure, run_suite, SymmetrizationPlan};
use annulus_spectra::{Error, GridDomain, PlanarError, SolveError, SpaceForm, VerifyError};
use clap::Parser;
use rayon::prelude::*;

use crate::args::{Cli, Command, PlotArgs, Problem, SweepProblem};
use crate::config::{parse_config, GridParams, Job, SweepParams, SweepPoint};
use crate::output::{field_csv, mask_pgm, num, plot_csv};
use crate::record::{cache_lookup, cache_store, read_records, timestamp, Payload, ResultRecord, TOOL_VERSION};
use crate::CliError;

/// Process environment the CLI reads.
#[derive(Debug, Clone, Default)]
pub struct Env {
    /// `ANNULUS_SPECTRA_CACHE`
    pub cache: Option<PathBuf>,
    /// `SOURCE_DATE_EPOCH`
    pub source_date_epoch: Option<String>,
}

impl Env {
    pub fn from_process() -> Self {
        let var = |k| std::env::var(k).ok().filter(|v: &String| !v.is_empty());
        Env { cache: var("ANNULUS_SPECTRA_CACHE").map(PathBuf::from), source_date_epoch: var("SOURCE_DATE_EPOCH") }
    }
}

/// Parses `argv` and runs it, returning the exit code.
pub fn run_cli<I, T>(argv: I, env: &Env, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                crate::EXIT_CONFIG
            } else {
                let _ = write!(stdout, "{text}");
                crate::EXIT_OK
            };
        }
    };
    match run(&cli, env, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, env: &Env, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    if let Command::Plot(args) = &cli.command {
        return plot(args, cli.common.output.as_deref(), stdout);
    }
    let config = parse_config(cli, env.cache.clone())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CliError::Io(format!("cannot start {} workers: {e}", config.jobs)))?;
    if let Job::Sweep(params) = &config.job {
        let (csv, code, errors) = pool.install(|| sweep(params))?;
        for e in errors {
            let _ = writeln!(stderr, "{e}");
        }
        emit(config.output.as_deref(), &csv, stdout)?;
        return Ok(code);
    }

    let digest = config.job.digest();
    let hit = config.cache_dir.as_deref().and_then(|dir| cache_lookup(dir, &digest));
    let (bytes, record) = match hit {
        Some(hit) => hit,
        None => {
            let payload = pool.install(|| compute(&config.job))?;
            let record = ResultRecord {
                config_digest: digest.clone(),
                tool_version: TOOL_VERSION.to_string(),
                timestamp: timestamp(env.source_date_epoch.as_deref())?,
                command: config.job.name(),
                config: config.job.canonical(),
                payload,
            };
            let bytes = record.to_json();
            if let Some(dir) = &config.cache_dir {
                cache_store(dir, &digest, &bytes)
                    .map_err(|e| CliError::Io(format!("cannot write cache {}: {e}", dir.display())))?;
            }
            (bytes, record)
        }
    };

    if let Payload::Planar(result) = &record.payload {
        if let Some(path) = &config.field_csv {
            field_csv(&result.field, create(path)?)?;
        }
        if let Some(path) = &config.mask_pgm {
            mask_pgm(&result.field.domain, create(path)?)?;
        }
    } else if config.field_csv.is_some() || config.mask_pgm.is_some() {
        if let Job::FaberKrahn(g) | Job::Rearrangement(g) | Job::Rearrange { grid: g, .. } = &config.job {
            // Checks do not keep the field; the mask only needs the grid.
            if let Some(path) = &config.mask_pgm {
                mask_pgm(&grid_domain(g)?, create(path)?)?;
            }
        }
    }
    emit(config.output.as_deref(), &bytes, stdout)?;

    let reports = record.payload.reports();
    if !reports.is_empty() {
        let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
        for r in &failed {
            let _ = writeln!(stderr, "{r}");
        }
        let _ = writeln!(stderr, "{} of {} comparisons passed", reports.len() - failed.len(), reports.len());
    }
    Ok(if record.payload.passed() { crate::EXIT_OK } else { crate::EXIT_CHECK_FAILED })
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, CliError> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(path) => {
            std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
        }
        None => stdout.write_all(bytes).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn plot(args: &PlotArgs, output: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let mut records = Vec::new();
    for path in &args.records {
        records.extend(read_records(path)?);
    }
    let mut csv = Vec::new();
    plot_csv(&records, args.kind, &mut csv)?;
    emit(output, &csv, stdout)?;
    Ok(crate::EXIT_OK)
}

/// Sorts core errors into bad input (exit 2) and solver failures (exit 3).
pub fn classify(e: impl Into<Error>) -> CliError {
    fn solve(e: &SolveError) -> bool {
        matches!(e, SolveError::Parameter(_) | SolveError::Geometry(_))
    }
    fn planar(e: &PlanarError) -> bool {
        match e {
            PlanarError::Parameter(_)
            | PlanarError::Geometry(_)
            | PlanarError::Resolution(_)
            | PlanarError::Disconnected(_)
            | PlanarError::NoDirichlet
            | PlanarError::Space(_) => true,
            PlanarError::Radial(e) => solve(e),
            _ => false,
        }
    }
    let e = e.into();
    let bad_input = match &e {
        Error::Geometry(_) => true,
        Error::Solve(e) => solve(e),
        Error::Planar(e) => planar(e),
        Error::Verify(e) => match e {
            VerifyError::Parameter(_) | VerifyError::Geometry(_) => true,
            VerifyError::Solve(e) => solve(e),
            VerifyError::Planar(e) => planar(e),
        },
    };
    if bad_input {
        CliError::Config(e.to_string())
    } else {
        CliError::Solver(e.to_string())
    }
}

fn grid_domain(g: &GridParams) -> Result<GridDomain, CliError> {
    build_domain(&g.shape, g.layout, g.h, g.metric).map_err(classify)
}

fn space(n: usize, kappa: f64) -> Result<SpaceForm, CliError> {
    SpaceForm::new(n, kappa).map_err(classify)
}

fn annulus_layout(problem: Problem) -> annulus_spectra::AnnulusLayout {
    match problem {
        Problem::Lambda => annulus_spectra::AnnulusLayout::InnerNeumannOuterDirichlet,
        Problem::Mu => annulus_spectra::AnnulusLayout::InnerDirichletOuterNeumann,
    }
}

/// Runs one job on the current rayon pool.
pub fn compute(job: &Job) -> Result<Payload, CliError> {
    Ok(match job {
        Job::Radial(r) => {
            let ann = AnnulusSpec::new(r.r1, r.r2, r.layout);
            Payload::Radial(solve_annulus(&space(r.n, r.kappa)?, r.p, &ann, &r.solver).map_err(classify)?)
        }
        Job::Ball(b) => {
            Payload::Radial(solve_dirichlet_ball(&space(b.n, b.kappa)?, b.p, b.radius, &b.solver).map_err(classify)?)
        }
        Job::Grid(g) => {
            Payload::Planar(minimize_rayleigh(Arc::new(grid_domain(g)?), g.p, &g.minimize).map_err(classify)?)
        }
        Job::Rearrange { grid: g, levels } => {
            let result = minimize_rayleigh(Arc::new(grid_domain(g)?), g.p, &g.minimize).map_err(classify)?;
            let reports = check_rearrangement(&result.field, g.p).map_err(classify)?;
            let domain = &result.field.domain;
            let sf = SymmetrizationPlan::for_metric(domain.metric).target;
            let profile =
                schwarz_rearrange_with(&result.field, domain.hole_measure(), &sf, *levels).map_err(classify)?;
            Payload::Rearrangement { profile, reports }
        }
        Job::FaberKrahn(g) => {
            let domain = Arc::new(grid_domain(g)?);
            let outcome = verify::check_faber_krahn(domain, g.p, &g.minimize, &g.solver).map_err(classify)?;
            Payload::Reports(vec![outcome.report])
        }
        Job::Rearrangement(g) => {
            let result = minimize_rayleigh(Arc::new(grid_domain(g)?), g.p, &g.minimize).map_err(classify)?;
            Payload::Reports(check_rearrangement(&result.field, g.p).map_err(classify)?)
        }
        Job::Monotonicity { p, n, r1, r2, kappas, solver } => Payload::Reports(
            verify::check_curvature_monotonicity(*p, *n, *r1, *r2, kappas, solver).map_err(classify)?,
        ),
        Job::VanishingHole(h) => {
            let check = verify::check_vanishing_hole(h.p, h.n, h.radius, &h.eps, &h.solver).map_err(classify)?;
            Payload::Rate { fit: check.fit, reports: check.reports }
        }
        Job::MuDecay(h) => {
            let check = verify::check_mu_decay(h.p, h.n, h.radius, &h.eps, &h.solver).map_err(classify)?;
            Payload::Rate { fit: check.fit, reports: check.reports }
        }
        Job::TrialBound { p, n, kappa, eps, eta, radius, solver } => {
            let sf = space(*n, *kappa)?;
            Payload::Reports(vec![
                verify::check_mu_trial_bound(&sf, *p, *eps, *eta, *radius, solver).map_err(classify)?
            ])
        }
        Job::Hadamard { p, n, kappa, r1, r2, delta, solver } => {
            let sf = space(*n, *kappa)?;
            Payload::Reports(vec![verify::check_hadamard(&sf, *p, *r1, *r2, *delta, solver).map_err(classify)?])
        }
        Job::Sign { problem, p, n, kappa, r1, r2, solver } => {
            let sf = space(*n, *kappa)?;
            let result = match problem {
                SweepProblem::Ball => solve_dirichlet_ball(&sf, *p, *r2, solver),
                SweepProblem::Lambda => solve_annulus(&sf, *p, &AnnulusSpec::new(*r1, *r2, annulus_layout(Problem::Lambda)), solver),
                SweepProblem::Mu => solve_annulus(&sf, *p, &AnnulusSpec::new(*r1, *r2, annulus_layout(Problem::Mu)), solver),
            }
            .map_err(classify)?;
            Payload::Reports(check_sign_structure(&result))
        }
        Job::Suite(config) => Payload::Suite(run_suite(config).map_err(classify)?),
        Job::Sweep(_) => unreachable!("sweeps write CSV"),
    })
}

fn solve_point(params: &SweepParams, pt: &SweepPoint) -> Result<annulus_spectra::EigenResult, CliError> {
    let sf = space(pt.n, pt.kappa)?;
    let result = match (params.problem, pt.r1) {
        (SweepProblem::Ball, _) | (_, None) => solve_dirichlet_ball(&sf, pt.p, pt.r2, &params.solver),
        (SweepProblem::Lambda, Some(r1)) => {
            solve_annulus(&sf, pt.p, &AnnulusSpec::new(r1, pt.r2, annulus_layout(Problem::Lambda)), &params.solver)
        }
        (SweepProblem::Mu, Some(r1)) => {
            solve_annulus(&sf, pt.p, &AnnulusSpec::new(r1, pt.r2, annulus_layout(Problem::Mu)), &params.solver)
        }
    };
    result.map_err(classify)
}

/// Solves every point on the current pool and returns the CSV (rows in
/// input order), the exit code and one message per failed point. Failed
/// points keep their row with empty eigenvalue and residual; the first
/// failure sets the exit code.
pub fn sweep(params: &SweepParams) -> Result<(Vec<u8>, i32, Vec<String>), CliError> {
    let points = params.points();
    let solved: Vec<_> = points
        .par_iter()
        .map(|pt| {
            let start = Instant::now();
            let result = solve_point(params, pt);
            (result, start.elapsed().as_secs_f64() * 1e3)
        })
        .collect();
    let problem = serde_json::to_value(params.problem).expect("problem serializes");
    let problem = problem.as_str().unwrap_or_default();
    let mut code = crate::EXIT_OK;
    let mut errors = Vec::new();
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["problem", "n", "kappa", "p", "r1", "r2", "eigenvalue", "residual", "wall_ms"]).map_err(err)?;
    for (pt, (result, ms)) in points.iter().zip(solved) {
        let (eig, res) = match result {
            Ok(r) => (num(r.eigenvalue), num(r.boundary_residual)),
            Err(e) => {
                errors.push(format!("error at n={} kappa={} p={} r1={:?} r2={}: {e}", pt.n, pt.kappa, pt.p, pt.r1, pt.r2));
                if code == crate::EXIT_OK {
                    code = e.exit_code();
                }
                (String::new(), String::new())
            }
        };
        w.write_record([
            problem.to_string(),
            pt.n.to_string(),
            num(pt.kappa),
            num(pt.p),
            pt.r1.map(num).unwrap_or_default(),
            num(pt.r2),
            eig,
            res,
            format!("{ms:.3}"),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok((bytes, code, errors))
}
