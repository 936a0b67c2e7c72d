//! Executes an [`ExperimentConfig`] and writes its report files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use configeo::configcount::{
    box_dim, count_phi, count_query, sample_solution_set, BoxDimReport, ConfigQuery,
    CountError, CountReport,
};
use configeo::energy::{is_adaptable, EnergyError};
use configeo::expfit::{run_scan, write_scan, ExpFitError, ScanSpec, Verdict};
use configeo::fourierlab::{
    circulant_check, decay_fit, decay_fit_values, ft_quadrature, ft_sphere, ft_triangle,
    level_set_curvatures, nonzero_count, paired_form_base_point, paired_quadratic_form,
    partial_determinant, phase_hessian, DecayReport, FourierError, FrequencyPoint, McSample,
    MeasureSpec,
};
use configeo::pointgen::{write_pointset, PointGenError};
use configeo::PointSet;
use thiserror::Error;

use crate::config::{
    Command, ConfigError, CurvatureConfig, CurvatureTarget, DimSource, ExperimentConfig,
    FtConfig, FtMethod,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Process exit status for a finished run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    /// The computation ran but the result is inconclusive or infeasible.
    Inconclusive,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Self::Success => 0,
            Self::Inconclusive => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub summary: String,
    /// Report files written, manifest first.
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Infeasible(_) => 1,
            _ => 2,
        }
    }
}

impl From<CountError> for RunError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::EmptySolutionSet | CountError::BruteBudget(_) | CountError::ClassBudget(_) => {
                Self::Infeasible(e.to_string())
            }
            _ => Self::Usage(e.to_string()),
        }
    }
}

impl From<FourierError> for RunError {
    fn from(e: FourierError) -> Self {
        match e {
            FourierError::Infeasible | FourierError::NotRegular(_) | FourierError::OffLevelSet(_) => {
                Self::Infeasible(e.to_string())
            }
            _ => Self::Usage(e.to_string()),
        }
    }
}

impl From<EnergyError> for RunError {
    fn from(e: EnergyError) -> Self {
        match e {
            EnergyError::Coincident(..) => Self::Infeasible(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}

impl From<PointGenError> for RunError {
    fn from(e: PointGenError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<ExpFitError> for RunError {
    fn from(e: ExpFitError) -> Self {
        match e {
            ExpFitError::Count(c) => c.into(),
            ExpFitError::Energy(c) => c.into(),
            ExpFitError::PointGen(c) => c.into(),
            ExpFitError::Regress(_) => Self::Infeasible(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}

struct Writer {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self, RunError> {
        fs::create_dir_all(dir).map_err(|source| RunError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, body: &str) -> Result<(), RunError> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?;
        self.files.push(path);
        Ok(())
    }
}

/// The manifest body: tool version, seed and the full effective config.
pub fn manifest(cfg: &ExperimentConfig) -> String {
    format!(
        "configeo {VERSION}\ncommand = {}\nseed = {}\n\n# effective configuration\n{}",
        cfg.command.name(),
        cfg.seed,
        cfg.raw.render()
    )
}

/// Runs the experiment, capping rayon workers at `cfg.threads` when set.
pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| RunError::Usage(format!("cannot build thread pool: {e}")))?
            .install(|| run_inner(cfg)),
        None => run_inner(cfg),
    }
}

fn run_inner(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let mut out = Writer::new(&cfg.output_dir)?;
    out.write("manifest.txt", &manifest(cfg))?;
    let (status, summary) = match cfg.command {
        Command::Gen => run_gen(cfg, &mut out)?,
        Command::Energy => run_energy(cfg, &mut out)?,
        Command::Count => run_count(cfg, &mut out)?,
        Command::Scan => run_scan_command(cfg, &mut out)?,
        Command::Ft => run_ft(cfg, cfg.ft.as_ref().expect("validated"), &mut out)?,
        Command::Curvature => run_curvature(cfg.curvature.as_ref().expect("validated"), &mut out)?,
        Command::Dim => run_dim(cfg, &mut out)?,
    };
    Ok(Outcome {
        status,
        summary,
        files: out.files,
    })
}

fn points(cfg: &ExperimentConfig) -> Result<PointSet, RunError> {
    Ok(cfg.generator.as_ref().expect("validated").generate()?)
}

fn run_gen(cfg: &ExperimentConfig, out: &mut Writer) -> Result<(Status, String), RunError> {
    let set = points(cfg)?;
    out.write("points.txt", &write_pointset(&set))?;
    Ok((
        Status::Success,
        format!("gen: {} points in dimension {}", set.len(), set.dim()),
    ))
}

fn run_energy(cfg: &ExperimentConfig, out: &mut Writer) -> Result<(Status, String), RunError> {
    let set = points(cfg)?;
    let e = cfg.energy.as_ref().expect("validated");
    let mut body = String::from("s,energy,n,adaptability_bound,adaptable\n");
    let mut adaptable = 0;
    for &s in &e.s {
        let r = is_adaptable(&set, s, e.constant)?;
        adaptable += usize::from(r.verdict);
        let _ = writeln!(body, "{:?},{:?},{},{:?},{}", r.s, r.value, r.n, r.adaptable_at, r.verdict);
    }
    out.write("energy.csv", &body)?;
    Ok((
        Status::Success,
        format!("energy: n = {}, adaptable at {adaptable} of {} exponents", set.len(), e.s.len()),
    ))
}

fn run_count(cfg: &ExperimentConfig, out: &mut Writer) -> Result<(Status, String), RunError> {
    let set = points(cfg)?;
    let q = cfg.query.as_ref().expect("validated");
    let t = q.t.clone().expect("validated");
    let delta = q.delta.expect("validated");
    let mut report: CountReport = if let Some(phi) = &q.phi {
        count_phi(&set, phi, &t, delta)?
    } else {
        let mut query = ConfigQuery::new(q.family, q.k, t, delta);
        query.volume_convention = q.volume_convention;
        count_query(&set, &query, cfg.algorithm)?
    };
    report.seed = Some(cfg.seed);
    let body = format!(
        "{}\n{}\n",
        CountReport::CSV_HEADER,
        report.csv_row(cfg.record_timing)
    );
    out.write("count.csv", &body)?;
    Ok((
        Status::Success,
        format!(
            "count: family = {}, n = {}, count = {}",
            q.family,
            report.n,
            report.count
        ),
    ))
}

fn run_scan_command(cfg: &ExperimentConfig, out: &mut Writer) -> Result<(Status, String), RunError> {
    let sc = cfg.scan.as_ref().expect("validated");
    let q = cfg.query.as_ref().expect("validated");
    let mut spec = ScanSpec::new(sc.family.clone(), sc.d, q.family, q.k);
    spec.t = q.t.clone();
    spec.n_schedule = sc.schedule.clone();
    spec.s = sc.s;
    spec.seed = cfg.seed;
    spec.volume_convention = q.volume_convention;
    spec.algorithm = cfg.algorithm;
    if let Some(c) = sc.adaptability {
        spec.adaptability_constant = c;
    }
    spec.phi = q.phi.clone();
    spec.predicted_override = sc.predicted;
    let report = run_scan(&spec)?;
    let (csv, txt) = write_scan(&report, &out.dir)?;
    out.files.push(csv);
    out.files.push(txt);
    let status = match report.verdict {
        Verdict::Inconclusive => Status::Inconclusive,
        _ => Status::Success,
    };
    let slope = report
        .fit
        .as_ref()
        .map(|f| format!("{:.4} ± {:.4}", f.slope, f.stderr))
        .unwrap_or_else(|| "none".into());
    Ok((
        status,
        format!(
            "scan: slope {slope}, predicted {:.4}, verdict {}",
            report.predicted,
            report.verdict.name()
        ),
    ))
}

fn measure_name(m: &MeasureSpec) -> String {
    match *m {
        MeasureSpec::Sphere { d } => format!("sphere d={d}"),
        MeasureSpec::Triangle2d => "triangle2d".into(),
        MeasureSpec::ChainSpheres { d, r1, r2, t } => {
            format!("chain_spheres d={d} r1={r1:?} r2={r2:?} t={t:?}")
        }
        MeasureSpec::DeterminantVariety { d, t, radius } => {
            format!("determinant_variety d={d} t={t:?} radius={radius:?}")
        }
    }
}

fn ft_report(cfg: &ExperimentConfig, ft: &FtConfig) -> Result<DecayReport, RunError> {
    let reference = ft.measure.reference_exponent();
    let unit = ft.direction.normalized()?;
    match (ft.method, &ft.measure) {
        (FtMethod::ClosedForm, MeasureSpec::Sphere { d }) => {
            let d = *d;
            let f = move |xi: &FrequencyPoint| ft_sphere(d, &xi.blocks[0]);
            Ok(decay_fit(&f, &unit, &ft.radii, reference)?)
        }
        (FtMethod::ClosedForm, MeasureSpec::Triangle2d) => {
            let f = |xi: &FrequencyPoint| {
                let b = &xi.blocks;
                ft_triangle([b[0][0], b[0][1]], [b[1][0], b[1][1]])
            };
            Ok(decay_fit(&f, &unit, &ft.radii, reference)?)
        }
        (FtMethod::Quadrature, m) => {
            ft_quadrature(m, &unit, ft.nodes)?;
            let f = |xi: &FrequencyPoint| {
                ft_quadrature(m, xi, ft.nodes).expect("checked at the first frequency")
            };
            Ok(decay_fit(&f, &unit, &ft.radii, reference)?)
        }
        (FtMethod::MonteCarlo, m) => {
            let sample = McSample::draw(m, ft.epsilon, ft.samples, cfg.seed)?;
            let mut mags = Vec::with_capacity(ft.radii.len());
            let mut errs = Vec::with_capacity(ft.radii.len());
            for &r in &ft.radii {
                let est = sample.evaluate(&unit.scaled(r))?;
                mags.push(est.value.norm());
                errs.push(est.stderr);
            }
            Ok(decay_fit_values(&unit, &ft.radii, &mags, reference, Some(errs))?)
        }
        _ => Err(RunError::Usage("method not available for this measure".into())),
    }
}

fn run_ft(cfg: &ExperimentConfig, ft: &FtConfig, out: &mut Writer) -> Result<(Status, String), RunError> {
    let report = ft_report(cfg, ft)?;
    out.write("decay.csv", &report.to_csv())?;
    let fmt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_else(|| "none".into());
    let method = match ft.method {
        FtMethod::ClosedForm => "closed_form",
        FtMethod::Quadrature => "quadrature",
        FtMethod::MonteCarlo => "montecarlo",
    };
    let direction: Vec<String> = report
        .direction
        .blocks
        .iter()
        .map(|b| b.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", "))
        .collect();
    let mut body = String::new();
    let _ = writeln!(body, "measure: {}", measure_name(&ft.measure));
    let _ = writeln!(body, "method: {method}");
    let _ = writeln!(body, "direction: {}", direction.join(" | "));
    let _ = writeln!(
        body,
        "radii: {} from {:?} to {:?}",
        report.radii.len(),
        report.radii[0],
        report.radii[report.radii.len() - 1]
    );
    let _ = writeln!(body, "envelope_points: {}", report.envelope.len());
    let _ = writeln!(body, "fitted_exponent: {}", fmt(report.fitted_exponent));
    let _ = writeln!(body, "stderr: {}", fmt(report.stderr));
    let _ = writeln!(body, "reference_exponent: {}", fmt(report.reference_exponent));
    let _ = writeln!(body, "conclusive: {}", report.is_conclusive());
    out.write("ft.txt", &body)?;
    let status = if report.is_conclusive() {
        Status::Success
    } else {
        Status::Inconclusive
    };
    Ok((
        status,
        format!(
            "ft: {} fitted exponent {} (reference {})",
            measure_name(&ft.measure),
            fmt(report.fitted_exponent),
            fmt(report.reference_exponent)
        ),
    ))
}

fn eigen_lines(body: &mut String, eig: &[f64]) {
    let list: Vec<String> = eig.iter().map(|v| format!("{v:.9e}")).collect();
    let _ = writeln!(body, "eigenvalues: {}", list.join(", "));
    let _ = writeln!(body, "nonzero: {}", nonzero_count(eig));
}

fn run_curvature(c: &CurvatureConfig, out: &mut Writer) -> Result<(Status, String), RunError> {
    let mut body = String::new();
    let summary = match &c.target {
        CurvatureTarget::Sphere { n } => {
            if !(c.t > 0.0) {
                return Err(RunError::Usage("sphere level needs t > 0".into()));
            }
            let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
            let mut x0 = vec![0.0; *n];
            x0[0] = c.t.sqrt();
            let eig = level_set_curvatures(&f, c.t, &x0, c.h)?;
            let _ = writeln!(body, "target: sphere |x|^2 = {:?} in R^{n}", c.t);
            eigen_lines(&mut body, &eig);
            format!("curvature: sphere, {} nonzero", nonzero_count(&eig))
        }
        CurvatureTarget::PartialDeterminant => {
            let x0 = [c.t.abs().sqrt(), 0.0, 0.0, c.t.signum() * c.t.abs().sqrt()];
            if c.t == 0.0 {
                return Err(RunError::Usage("partial determinant level needs t != 0".into()));
            }
            let eig = level_set_curvatures(&partial_determinant, c.t, &x0, c.h)?;
            let _ = writeln!(body, "target: x1 y2 - x2 y1 = {:?} in R^4", c.t);
            eigen_lines(&mut body, &eig);
            format!("curvature: partial determinant, {} nonzero", nonzero_count(&eig))
        }
        CurvatureTarget::PairedForm { d } => {
            let x0 = paired_form_base_point(*d, c.t)?;
            let eig = level_set_curvatures(&paired_quadratic_form, c.t, &x0, c.h)?;
            let _ = writeln!(body, "target: paired quadratic form = {:?} in R^{}", c.t, 2 * d);
            eigen_lines(&mut body, &eig);
            format!("curvature: paired form d = {d}, {} nonzero", nonzero_count(&eig))
        }
        CurvatureTarget::Circulant { d_max } => {
            let _ = writeln!(body, "d,determinant");
            let mut zeros = 0;
            for d in 2..=*d_max {
                let v = circulant_check(d);
                zeros += usize::from(v == 0.0);
                let _ = writeln!(body, "{d},{v:.12e}");
            }
            format!("curvature: circulant determinants, {zeros} zero for 2 <= d <= {d_max}")
        }
        CurvatureTarget::PhaseHessian { d, xi, eta } => {
            let h = phase_hessian(*d, xi, eta);
            let _ = writeln!(body, "target: phase hessian d = {d}");
            let _ = writeln!(body, "p: {:.12e}", h.p);
            let _ = writeln!(
                body,
                "q_block: {:.12e}, {:.12e}, {:.12e}",
                h.q_block[0], h.q_block[1], h.q_block[2]
            );
            let _ = writeln!(body, "size: {}", h.matrix.nrows());
            let _ = writeln!(body, "rank: {}", h.rank);
            format!("curvature: phase hessian d = {d}, rank {}", h.rank)
        }
    };
    out.write("curvature.txt", &body)?;
    Ok((Status::Success, summary))
}

fn boxdim_csv(r: &BoxDimReport) -> String {
    let mut body = String::from("scale,boxes\n");
    for (s, n) in r.scales.iter().zip(&r.counts) {
        let _ = writeln!(body, "{s:?},{n}");
    }
    let _ = writeln!(
        body,
        "# slope={:.6} stderr={:.6} degenerate={}",
        r.slope, r.stderr, r.degenerate
    );
    body
}

fn run_dim(cfg: &ExperimentConfig, out: &mut Writer) -> Result<(Status, String), RunError> {
    let set = points(cfg)?;
    let dim = cfg.dim.as_ref().expect("validated");
    let target = match dim.source {
        DimSource::Points => set,
        DimSource::Solutions => {
            let q = cfg.query.as_ref().expect("validated");
            let phi = q.phi.as_ref().expect("validated");
            let sets = vec![&set; phi.arity()];
            let t = q.t.as_ref().expect("validated");
            sample_solution_set(&sets, phi, t, q.delta.expect("validated"))?
        }
    };
    let report = box_dim(&target, &dim.scales)?;
    out.write("boxdim.csv", &boxdim_csv(&report))?;
    let status = if report.degenerate {
        Status::Inconclusive
    } else {
        Status::Success
    };
    Ok((
        status,
        format!(
            "dim: {} points in dimension {}, slope {:.4} ± {:.4}",
            target.len(),
            target.dim(),
            report.slope,
            report.stderr
        ),
    ))
}
