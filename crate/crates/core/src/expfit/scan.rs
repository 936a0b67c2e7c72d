//! n-scans: generate sets of growing size, count configurations at
//! `δ_n = n^{-1/s}`, fit the growth exponent and compare with the
//! prediction.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{count_exponent, fit_slope, ExpFitError, SlopeFit};
use crate::configcount::geometry::{angle, bare_area, bare_volume};
use crate::configcount::{
    count_area_with, count_phi, count_query, Algorithm, ConfigQuery, Family, PhiFunction,
    VolumeConvention,
};
use crate::energy::{is_adaptable, EnergyReport, DEFAULT_ADAPTABILITY_CONSTANT};
use crate::pointgen::{
    distance, gen_cantor, gen_coplanar, gen_homogeneous, gen_lattice, gen_random, rng_for,
    PointSet,
};

/// Point-set family scanned over `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScanFamily {
    /// `n` must be a perfect `d`-th power.
    Lattice,
    /// `n` must be `2^{dL}`.
    Cantor { ratio: f64 },
    Random,
    Coplanar,
    Homogeneous,
}

impl ScanFamily {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Lattice => "lattice",
            Self::Cantor { .. } => "cantor",
            Self::Random => "random",
            Self::Coplanar => "coplanar",
            Self::Homogeneous => "homogeneous",
        }
    }

    /// The size-`n` member of the family.
    pub fn generate(&self, d: usize, n: usize, seed: u64) -> Result<PointSet, ExpFitError> {
        Ok(match *self {
            Self::Lattice => {
                let m = (n as f64).powf(1.0 / d as f64).round() as usize;
                if m.checked_pow(d as u32) != Some(n) {
                    return Err(ExpFitError::InvalidSchedule(format!(
                        "lattice needs n = m^{d}, got {n}"
                    )));
                }
                gen_lattice(d, m)?
            }
            Self::Cantor { ratio } => {
                let bits = n.trailing_zeros() as usize;
                if !n.is_power_of_two() || bits % d != 0 {
                    return Err(ExpFitError::InvalidSchedule(format!(
                        "cantor needs n = 2^({d}L), got {n}"
                    )));
                }
                gen_cantor(d, ratio, (bits / d) as u32)?
            }
            Self::Random => gen_random(d, n, seed)?,
            Self::Coplanar => gen_coplanar(d, n, seed)?,
            Self::Homogeneous => gen_homogeneous(d, n, seed)?,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ScanSpec {
    pub family: ScanFamily,
    pub d: usize,
    pub query_family: Family,
    pub k: usize,
    /// Fixed target; sampled from a realized configuration when `None`.
    pub t: Option<Vec<f64>>,
    pub n_schedule: Vec<usize>,
    /// Overrides the generator's nominal dimension.
    pub s: Option<f64>,
    pub seed: u64,
    pub volume_convention: VolumeConvention,
    pub algorithm: Algorithm,
    pub adaptability_constant: f64,
    /// Required for the custom family.
    pub phi: Option<PhiFunction>,
    /// Required for the custom family.
    pub predicted_override: Option<f64>,
}

impl ScanSpec {
    pub fn new(family: ScanFamily, d: usize, query_family: Family, k: usize) -> Self {
        Self {
            family,
            d,
            query_family,
            k,
            t: None,
            n_schedule: Vec::new(),
            s: None,
            seed: 0,
            volume_convention: VolumeConvention::default(),
            algorithm: Algorithm::Pruned,
            adaptability_constant: DEFAULT_ADAPTABILITY_CONSTANT,
            phi: None,
            predicted_override: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Exceeds,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Self::Consistent => "consistent",
            Self::Exceeds => "exceeds",
            Self::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub n: usize,
    pub delta: f64,
    pub count: u64,
    pub energy: EnergyReport,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub spec: ScanSpec,
    pub s: f64,
    pub t: Vec<f64>,
    pub rows: Vec<ScanRow>,
    pub fit: Option<SlopeFit>,
    pub predicted: f64,
    pub verdict: Verdict,
}

impl ScanReport {
    /// Base file name embedding family, k, d, s and seed.
    pub fn file_stem(&self) -> String {
        format!(
            "scan_{}_{}_k{}_d{}_s{}_seed{}",
            self.spec.family.name(),
            self.spec.query_family,
            self.spec.k,
            self.spec.d,
            self.s,
            self.spec.seed
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,delta,count,energy,adaptable\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:?},{},{:?},{}",
                r.n, r.delta, r.count, r.energy.value, r.energy.verdict
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let sp = &self.spec;
        let _ = writeln!(out, "generator: {}", sp.family.name());
        let _ = writeln!(out, "query: {} k={} d={}", sp.query_family, sp.k, sp.d);
        let _ = writeln!(out, "t: {:?}", self.t);
        let _ = writeln!(out, "s: {}", self.s);
        let _ = writeln!(out, "seed: {}", sp.seed);
        let _ = writeln!(out, "algorithm: {}", sp.algorithm.name());
        let _ = writeln!(out, "adaptability constant: {}", sp.adaptability_constant);
        let _ = writeln!(out);
        let _ = writeln!(out, "{:>10} {:>14} {:>14} {:>14} {}", "n", "delta", "count", "energy", "adaptable");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>10} {:>14.6e} {:>14} {:>14.6e} {}",
                r.n, r.delta, r.count, r.energy.value, r.energy.verdict
            );
        }
        let _ = writeln!(out);
        match &self.fit {
            Some(f) => {
                let _ = writeln!(out, "fitted slope: {:.6} ± {:.6} ({} samples)", f.slope, f.stderr, f.samples);
            }
            None => {
                let _ = writeln!(out, "fitted slope: none");
            }
        }
        let _ = writeln!(out, "predicted exponent: {:.6}", self.predicted);
        let _ = writeln!(out, "verdict: {}", self.verdict.name());
        out
    }
}

/// Writes the text report and CSV into `dir`, returning their paths.
pub fn write_scan(report: &ScanReport, dir: &Path) -> Result<(PathBuf, PathBuf), ExpFitError> {
    std::fs::create_dir_all(dir)?;
    let stem = report.file_stem();
    let txt = dir.join(format!("{stem}.txt"));
    let csv = dir.join(format!("{stem}.csv"));
    std::fs::write(&txt, report.to_text())?;
    std::fs::write(&csv, report.to_csv())?;
    Ok((txt, csv))
}

/// Number of points in one configuration of the query.
fn tuple_len(spec: &ScanSpec) -> usize {
    match spec.query_family {
        Family::Volume => spec.d + 1,
        Family::Area2 | Family::Angle => 3,
        Family::Simplex => spec.k + 1,
        Family::Custom => spec.phi.as_ref().map_or(spec.k + 1, |p| p.arity()),
    }
}

/// Target read off a random configuration of `set`.
fn realized_target(set: &PointSet, spec: &ScanSpec) -> Result<Vec<f64>, ExpFitError> {
    let m = tuple_len(spec);
    if set.len() < m {
        return Err(ExpFitError::InvalidSchedule(format!(
            "largest set has {} points, need {m}",
            set.len()
        )));
    }
    let mut rng = rng_for(spec.seed ^ 0x7a72_6765_7473);
    for _ in 0..1000 {
        let idx = rand::seq::index::sample(&mut rng, set.len(), m).into_vec();
        let pts: Vec<&[f64]> = idx.iter().map(|&i| set.point(i)).collect();
        let t = match spec.query_family {
            Family::Simplex => {
                let mut t = Vec::new();
                for a in 0..m {
                    for b in a + 1..m {
                        t.push(distance(pts[a], pts[b]));
                    }
                }
                t
            }
            Family::Volume => {
                let v = bare_volume(&pts);
                match spec.volume_convention {
                    VolumeConvention::BareDeterminant => vec![v],
                    VolumeConvention::Simplex => {
                        vec![v / (1..=spec.d).map(|i| i as f64).product::<f64>()]
                    }
                }
            }
            Family::Area2 => {
                let a = bare_area(pts[0], pts[1], pts[2]);
                match spec.volume_convention {
                    VolumeConvention::BareDeterminant => vec![a],
                    VolumeConvention::Simplex => vec![a / 2.0],
                }
            }
            Family::Angle => match angle(pts[0], pts[1], pts[2]) {
                Some(a) => vec![a],
                None => continue,
            },
            Family::Custom => {
                let phi = spec.phi.as_ref().expect("checked by run_scan");
                let mut out = vec![0.0; phi.output_dim()];
                phi.evaluate(&pts, &mut out);
                out
            }
        };
        // Skip degenerate simplices whose distances would fail validation.
        if spec.query_family == Family::Simplex && t.iter().any(|&x| x <= 0.0) {
            continue;
        }
        return Ok(t);
    }
    Err(ExpFitError::Incompatible(
        "no admissible configuration found to read a target from".into(),
    ))
}

fn count_one(
    set: &PointSet,
    spec: &ScanSpec,
    t: &[f64],
    delta: f64,
) -> Result<u64, ExpFitError> {
    let report = match spec.query_family {
        Family::Custom => {
            let phi = spec.phi.as_ref().expect("checked by run_scan");
            count_phi(set, phi, t, delta)?
        }
        Family::Area2 => count_area_with(set, t[0], delta, spec.volume_convention, spec.algorithm)?,
        family => {
            let mut q = ConfigQuery::new(family, spec.k, t.to_vec(), delta);
            q.volume_convention = spec.volume_convention;
            count_query(set, &q, spec.algorithm)?
        }
    };
    Ok(report.count)
}

pub fn run_scan(spec: &ScanSpec) -> Result<ScanReport, ExpFitError> {
    let sched = &spec.n_schedule;
    if sched.len() < 3 {
        return Err(ExpFitError::InvalidSchedule(format!(
            "need at least 3 sizes, got {}",
            sched.len()
        )));
    }
    if sched.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExpFitError::InvalidSchedule("sizes must increase".into()));
    }
    if spec.query_family == Family::Custom
        && (spec.phi.is_none() || spec.predicted_override.is_none())
    {
        return Err(ExpFitError::Incompatible(
            "custom scans need a Φ function and a predicted exponent".into(),
        ));
    }
    let sets: Vec<PointSet> = sched
        .iter()
        .map(|&n| spec.family.generate(spec.d, n, spec.seed))
        .collect::<Result<_, _>>()?;
    let largest = sets.last().expect("schedule is nonempty");
    let s = match spec.s {
        Some(s) => s,
        None => largest.nominal_dimension().ok_or_else(|| {
            ExpFitError::Incompatible("generator has no nominal dimension; set s".into())
        })?,
    };
    if !(s > 0.0) {
        return Err(ExpFitError::InvalidExponent(s));
    }
    let predicted = match spec.predicted_override {
        Some(p) => p,
        None => count_exponent(spec.query_family, spec.k, spec.d, s)?,
    };
    let t = match &spec.t {
        Some(t) => t.clone(),
        None => realized_target(largest, spec)?,
    };

    let rows: Vec<ScanRow> = sets
        .par_iter()
        .map(|set| {
            let n = set.len();
            let delta = (n as f64).powf(-1.0 / s);
            let count = count_one(set, spec, &t, delta)?;
            let energy = is_adaptable(set, s, spec.adaptability_constant)?;
            Ok(ScanRow { n, delta, count, energy })
        })
        .collect::<Result<_, ExpFitError>>()?;

    let positive = rows.iter().filter(|r| r.count > 0).count();
    let zeros = rows.len() - positive;
    let fit = if positive >= 3 {
        let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.count as f64)).collect();
        Some(fit_slope(&samples)?)
    } else {
        None
    };
    let verdict = match &fit {
        _ if 2 * zeros > rows.len() => Verdict::Inconclusive,
        None => Verdict::Inconclusive,
        Some(f) if f.slope - 2.0 * f.stderr > predicted => Verdict::Exceeds,
        Some(_) => Verdict::Consistent,
    };
    Ok(ScanReport {
        spec: spec.clone(),
        s,
        t,
        rows,
        fit,
        predicted,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configcount::count_simplex_brute;

    #[test]
    fn lattice_simplex_scan() {
        let mut spec = ScanSpec::new(ScanFamily::Lattice, 2, Family::Simplex, 1);
        spec.t = Some(vec![0.5]);
        spec.n_schedule = vec![100, 400, 1600];
        spec.s = Some(2.0);
        let r = run_scan(&spec).unwrap();
        assert_eq!(r.predicted, 1.5);
        assert_eq!(r.verdict, Verdict::Consistent, "{}", r.to_text());
        // Brute-force cross-check of every row.
        for row in &r.rows {
            let set = ScanFamily::Lattice.generate(2, row.n, 0).unwrap();
            let brute = count_simplex_brute(&set, 1, &[0.5], row.delta).unwrap().count;
            assert_eq!(brute, row.count);
        }
    }

    #[test]
    fn coplanar_volumes_are_inconclusive() {
        let mut spec = ScanSpec::new(ScanFamily::Coplanar, 3, Family::Volume, 3);
        spec.t = Some(vec![0.2]);
        // δ_n = n^{-1/2} must stay below t for the zero volume to miss.
        spec.n_schedule = vec![30, 36, 42];
        spec.seed = 4;
        let r = run_scan(&spec).unwrap();
        assert!(r.rows.iter().all(|row| row.count == 0));
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn constant_phi_exceeds() {
        let mut spec = ScanSpec::new(ScanFamily::Random, 2, Family::Custom, 1);
        spec.phi = Some(PhiFunction::constant(2, vec![0.0]));
        spec.t = Some(vec![0.0]);
        spec.predicted_override = Some(1.5);
        spec.n_schedule = vec![20, 40, 80, 160];
        spec.seed = 9;
        let r = run_scan(&spec).unwrap();
        let f = r.fit.unwrap();
        assert!((f.slope - 2.0).abs() < 0.05);
        assert_eq!(r.verdict, Verdict::Exceeds);
    }

    #[test]
    fn custom_needs_prediction() {
        let mut spec = ScanSpec::new(ScanFamily::Random, 2, Family::Custom, 1);
        spec.phi = Some(PhiFunction::constant(2, vec![0.0]));
        spec.n_schedule = vec![10, 20, 40];
        assert!(matches!(run_scan(&spec), Err(ExpFitError::Incompatible(_))));
    }

    #[test]
    fn sampled_target_is_deterministic() {
        let mut spec = ScanSpec::new(ScanFamily::Random, 2, Family::Simplex, 2);
        spec.n_schedule = vec![20, 30, 40];
        spec.seed = 3;
        let a = run_scan(&spec).unwrap();
        let b = run_scan(&spec).unwrap();
        assert_eq!(a.t, b.t);
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.rows.last().unwrap().count >= 1);
    }

    #[test]
    fn schedule_validation() {
        let mut spec = ScanSpec::new(ScanFamily::Lattice, 2, Family::Simplex, 1);
        spec.n_schedule = vec![100, 200, 400];
        assert!(matches!(run_scan(&spec), Err(ExpFitError::InvalidSchedule(_))));
        spec.n_schedule = vec![100, 400];
        assert!(matches!(run_scan(&spec), Err(ExpFitError::InvalidSchedule(_))));
    }
}
