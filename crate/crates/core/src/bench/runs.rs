//! Drivers for the benchmark studies.
//!
//! Sweep cells run in parallel and are collected in their declaration order,
//! so every study is deterministic.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::{DVector, Vector3};
use rayon::prelude::*;

use crate::assembly::Problem;
use crate::bench::cases::*;
use crate::bench::io::*;
use crate::bench::metrics::{force_range, loglog_slope, rod_twist_error, stress_profile};
use crate::discretization::{Formulation, Integration};
use crate::error::{Error, Result};
use crate::solver::{min_increment_search, newton_solve, NewtonReport, Solution, DEFAULT_SEARCH_CAP};

/// Samples along the rod for profile files.
pub const PROFILE_SAMPLES: usize = 201;

pub const Q1_MX_FULL: Family = Family::new(1, Formulation::Mixed, Integration::Full);
pub const Q2_MX_FULL: Family = Family::new(2, Formulation::Mixed, Integration::Full);
pub const Q1_MX_RED: Family = Family::new(1, Formulation::Mixed, Integration::Reduced);
pub const Q2_MX_RED: Family = Family::new(2, Formulation::Mixed, Integration::Reduced);
pub const Q1_DB_FULL: Family = Family::new(1, Formulation::Displacement, Integration::Full);
pub const Q2_DB_FULL: Family = Family::new(2, Formulation::Displacement, Integration::Full);
pub const Q1_DB_RED: Family = Family::new(1, Formulation::Displacement, Integration::Reduced);
pub const Q2_DB_RED: Family = Family::new(2, Formulation::Displacement, Integration::Reduced);

pub fn centerline_rows(problem: &Problem, x: &DVector<f64>, k: usize) -> Result<Vec<CenterlineRow>> {
    (0..k)
        .map(|i| {
            let xi = i as f64 / (k - 1) as f64;
            let (r, p) = problem.pose(x, xi)?;
            Ok(CenterlineRow { xi, r_x: r.x, r_y: r.y, r_z: r.z, p0: p.p0, p1: p.p.x, p2: p.p.y, p3: p.p.z })
        })
        .collect()
}

pub fn stress_rows(problem: &Problem, x: &DVector<f64>, k: usize) -> Result<Vec<StressRow>> {
    Ok(stress_profile(problem, x, k)?
        .into_iter()
        .map(|(xi, n, m)| StressRow { xi, n_x: n.x, n_y: n.y, n_z: n.z, m_x: m.x, m_y: m.y, m_z: m.z })
        .collect())
}

pub fn newton_rows(report: &NewtonReport) -> Vec<NewtonRow> {
    report
        .increments
        .iter()
        .map(|i| NewtonRow { increment: i.increment, iterations: i.iterations, rate: i.rate.unwrap_or(f64::NAN) })
        .collect()
}

pub fn newton_stats_row(family: Family, rho: f64, report: &NewtonReport) -> NewtonStatsRow {
    let (iter_mean, iter_std) = report.iteration_stats();
    let (rate_gmean, rate_gstd) = report.rate_stats().unwrap_or((f64::NAN, f64::NAN));
    NewtonStatsRow {
        family: family.to_string(),
        rho,
        increments: report.increments.len(),
        iter_mean,
        iter_std,
        rate_gmean,
        rate_gstd,
    }
}

fn solve(setup: &CaseSetup) -> Result<Solution> {
    newton_solve(&setup.problem, &setup.problem.initial_state(), &setup.solver)
}

fn search(setup: &CaseSetup, cap: usize) -> Result<usize> {
    min_increment_search(&setup.problem, &setup.problem.initial_state(), &setup.solver, cap)
}

fn tag(rho: f64) -> String {
    format!("rho{rho:.0e}")
}

struct Output {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Output {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    fn csv<T: CsvRecord>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        let path = self.dir.join(name);
        write_csv_file(&path, rows)?;
        self.written.push(path);
        Ok(())
    }
}

// ---------------------------------------------------------------- bend45

#[derive(Clone, Debug, PartialEq)]
pub struct Bend45Config {
    pub rhos: Vec<f64>,
    pub families: Vec<Family>,
    /// Node counts of the sweep; each must suit every family degree.
    pub nodes: Vec<usize>,
    pub n_increments: usize,
    pub reference_elements: usize,
    pub reference_increments: usize,
    pub samples: usize,
    /// Node count of the stress profiles written at the lowest slenderness.
    pub stress_nodes: usize,
}

impl Default for Bend45Config {
    fn default() -> Self {
        Self {
            rhos: BEND45_TABLE.iter().map(|p| p.rho).collect(),
            families: vec![Q1_MX_FULL, Q2_MX_FULL, Q1_DB_FULL, Q2_DB_FULL, Q1_DB_RED, Q2_DB_RED],
            nodes: vec![3, 5, 9, 17, 33, 65],
            n_increments: BEND45_INCREMENTS,
            reference_elements: 256,
            reference_increments: 5,
            samples: 100,
            stress_nodes: 9,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceCell {
    pub rho: f64,
    pub family: Family,
    pub n_nodes: usize,
    pub error: Result<f64>,
}

#[derive(Clone, Debug)]
pub struct Bend45Study {
    pub cells: Vec<ConvergenceCell>,
    /// Contact-force profiles at the lowest slenderness, per family.
    pub stress: Vec<(Family, Result<Vec<StressRow>>)>,
}

impl Bend45Study {
    pub fn error(&self, rho: f64, family: Family, n_nodes: usize) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.rho == rho && c.family == family && c.n_nodes == n_nodes)
            .and_then(|c| c.error.clone().ok())
    }

    /// Least-squares slope over the three finest converged meshes.
    pub fn slope(&self, rho: f64, family: Family) -> Option<f64> {
        let mut pts: Vec<(f64, f64)> = self
            .cells
            .iter()
            .filter(|c| c.rho == rho && c.family == family)
            .filter_map(|c| c.error.clone().ok().map(|e| (c.n_nodes as f64, e)))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts.len() < 3 {
            return None;
        }
        let tail = &pts[pts.len() - 3..];
        let n: Vec<f64> = tail.iter().map(|p| p.0).collect();
        let e: Vec<f64> = tail.iter().map(|p| p.1).collect();
        Some(loglog_slope(&n, &e))
    }

    pub fn convergence_rows(&self, rho: f64) -> Vec<ConvergenceRow> {
        self.cells
            .iter()
            .filter(|c| c.rho == rho)
            .map(|c| ConvergenceRow {
                formulation: c.family.to_string(),
                n: c.n_nodes,
                error: c.error.clone().unwrap_or(f64::NAN),
            })
            .collect()
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut out = Output::new(dir)?;
        let mut rhos: Vec<f64> = self.cells.iter().map(|c| c.rho).collect();
        rhos.dedup();
        for rho in rhos {
            out.csv(&format!("convergence_{}.csv", tag(rho)), &self.convergence_rows(rho))?;
        }
        for (family, rows) in &self.stress {
            if let Ok(rows) = rows {
                out.csv(&format!("stress_{family}.csv"), rows)?;
            }
        }
        Ok(out.written)
    }
}

pub fn run_bend45(cfg: &Bend45Config) -> Result<Bend45Study> {
    for rho in &cfg.rhos {
        Bend45Params::for_rho(*rho)?;
    }
    let references: Vec<(CaseSetup, DVector<f64>)> = cfg
        .rhos
        .par_iter()
        .map(|&rho| {
            let setup = bend45(rho, Q2_MX_FULL, cfg.reference_elements, cfg.reference_increments)?;
            let x = solve(&setup)?.final_state().clone();
            Ok((setup, x))
        })
        .collect::<Result<_>>()?;

    let mut jobs = Vec::new();
    for (i, &rho) in cfg.rhos.iter().enumerate() {
        for &family in &cfg.families {
            for &n_nodes in &cfg.nodes {
                jobs.push((i, rho, family, n_nodes));
            }
        }
    }
    let cells = jobs
        .par_iter()
        .map(|&(i, rho, family, n_nodes)| {
            let error = (|| {
                let n_el = family.with_nodes(n_nodes)?.n_el;
                let setup = bend45(rho, family, n_el, cfg.n_increments)?;
                let x = solve(&setup)?.final_state().clone();
                let (rp, rx) = &references[i];
                rod_twist_error((&setup.problem, &x), (&rp.problem, rx), cfg.samples)
            })();
            ConvergenceCell { rho, family, n_nodes, error }
        })
        .collect();

    let rho_min = cfg.rhos.iter().copied().fold(f64::INFINITY, f64::min);
    let stress = cfg
        .families
        .par_iter()
        .map(|&family| {
            let rows = (|| {
                let n_el = family.with_nodes(cfg.stress_nodes)?.n_el;
                let setup = bend45(rho_min, family, n_el, cfg.n_increments)?;
                let x = solve(&setup)?.final_state().clone();
                stress_rows(&setup.problem, &x, PROFILE_SAMPLES)
            })();
            (family, rows)
        })
        .collect();
    Ok(Bend45Study { cells, stress })
}

// ---------------------------------------------------------------- helix

#[derive(Clone, Debug, PartialEq)]
pub struct HelixConfig {
    pub rhos: Vec<f64>,
    pub families: Vec<Family>,
    pub n_nodes: usize,
    pub search_cap: usize,
}

impl Default for HelixConfig {
    fn default() -> Self {
        Self {
            rhos: HELIX_SLENDERNESS.to_vec(),
            families: vec![Q1_DB_RED, Q2_DB_RED, Q1_MX_RED, Q2_MX_RED, Q1_MX_FULL, Q2_MX_FULL],
            n_nodes: HELIX_NODES,
            search_cap: DEFAULT_SEARCH_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HelixCell {
    pub rho: f64,
    pub family: Family,
    pub min_increments: Result<usize>,
    /// Newton report at the displacement-based minimum of the same degree.
    pub report: Option<Result<NewtonReport>>,
}

#[derive(Clone, Debug)]
pub struct HelixStudy {
    pub cells: Vec<HelixCell>,
    /// Contact-force profiles of the mixed families at the lowest slenderness.
    pub stress: Vec<(Family, Result<Vec<StressRow>>)>,
    /// Tip moment applied at the lowest slenderness, in the cross-section basis.
    pub tip_moment: Vector3<f64>,
}

impl HelixStudy {
    pub fn cell(&self, rho: f64, family: Family) -> Option<&HelixCell> {
        self.cells.iter().find(|c| c.rho == rho && c.family == family)
    }

    pub fn increments_rows(&self) -> Vec<IncrementsRow> {
        self.cells
            .iter()
            .map(|c| IncrementsRow {
                family: c.family.to_string(),
                rho: c.rho,
                increments: c.min_increments.clone().ok(),
            })
            .collect()
    }

    pub fn stats_rows(&self) -> Vec<NewtonStatsRow> {
        self.cells
            .iter()
            .filter_map(|c| match &c.report {
                Some(Ok(r)) => Some(newton_stats_row(c.family, c.rho, r)),
                _ => None,
            })
            .collect()
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut out = Output::new(dir)?;
        out.csv("increments.csv", &self.increments_rows())?;
        out.csv("newton_stats.csv", &self.stats_rows())?;
        for c in &self.cells {
            if let Some(Ok(r)) = &c.report {
                out.csv(&format!("newton_{}_{}.csv", c.family, tag(c.rho)), &newton_rows(r))?;
            }
        }
        for (family, rows) in &self.stress {
            if let Ok(rows) = rows {
                out.csv(&format!("stress_{family}.csv"), rows)?;
            }
        }
        Ok(out.written)
    }
}

pub fn run_helix(cfg: &HelixConfig) -> Result<HelixStudy> {
    for rho in &cfg.rhos {
        helix_tolerance(*rho)?;
    }
    let mut jobs = Vec::new();
    for &rho in &cfg.rhos {
        for &family in &cfg.families {
            jobs.push((rho, family));
        }
    }
    let minima: Vec<Result<usize>> = jobs
        .par_iter()
        .map(|&(rho, family)| search(&helix(rho, family, cfg.n_nodes, 1)?, cfg.search_cap))
        .collect();

    let db_min = |rho: f64, p: usize| -> Option<usize> {
        jobs.iter()
            .zip(&minima)
            .find(|((r, f), _)| *r == rho && f.p == p && f.formulation == Formulation::Displacement && f.integration == Integration::Reduced)
            .and_then(|(_, m)| m.clone().ok())
    };
    let reports: Vec<Option<Result<NewtonReport>>> = jobs
        .par_iter()
        .map(|&(rho, family)| {
            db_min(rho, family.p).map(|n| Ok(solve(&helix(rho, family, cfg.n_nodes, n)?)?.report))
        })
        .collect();

    let cells = jobs
        .iter()
        .zip(minima)
        .zip(reports)
        .map(|((&(rho, family), min_increments), report)| HelixCell { rho, family, min_increments, report })
        .collect();

    let rho_min = cfg.rhos.iter().copied().fold(f64::INFINITY, f64::min);
    let stress = cfg
        .families
        .par_iter()
        .filter(|f| f.formulation == Formulation::Mixed)
        .map(|&family| {
            let rows = (|| {
                let setup = helix(rho_min, family, cfg.n_nodes, 1)?;
                let x = solve(&setup)?.final_state().clone();
                stress_rows(&setup.problem, &x, PROFILE_SAMPLES)
            })();
            (family, rows)
        })
        .collect();
    let tip_moment = if rho_min.is_finite() { helix_tip_moment(rho_min)? } else { Vector3::zeros() };
    Ok(HelixStudy { cells, stress, tip_moment })
}

// ---------------------------------------------------------------- helical roll-up

#[derive(Clone, Debug, PartialEq)]
pub struct RollupConfig {
    pub families: Vec<Family>,
    pub n_nodes: usize,
    pub search_cap: usize,
    /// Run the powers-of-two search in addition to the fixed-increment solves.
    pub search: bool,
}

impl Default for RollupConfig {
    fn default() -> Self {
        Self {
            families: vec![Q1_DB_RED, Q2_DB_RED, Q1_MX_FULL, Q2_MX_FULL],
            n_nodes: ROLLUP_NODES,
            search_cap: DEFAULT_SEARCH_CAP,
            search: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RollupRun {
    pub family: Family,
    pub min_increments: Option<Result<usize>>,
    pub tip: Vec<TipRow>,
    pub stress: Vec<StressRow>,
    pub force_range: f64,
    pub report: NewtonReport,
}

#[derive(Clone, Debug)]
pub struct RollupStudy {
    pub runs: Vec<(Family, Result<RollupRun>)>,
}

impl RollupStudy {
    pub fn run(&self, family: Family) -> Option<&RollupRun> {
        self.runs.iter().find(|(f, _)| *f == family).and_then(|(_, r)| r.as_ref().ok())
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut out = Output::new(dir)?;
        let mut incs = Vec::new();
        for (family, run) in &self.runs {
            let Ok(run) = run else { continue };
            if let Some(m) = &run.min_increments {
                incs.push(IncrementsRow { family: family.to_string(), rho: f64::NAN, increments: m.clone().ok() });
            }
            out.csv(&format!("tip_{family}.csv"), &run.tip)?;
            out.csv(&format!("stress_{family}.csv"), &run.stress)?;
            out.csv(&format!("newton_{family}.csv"), &newton_rows(&run.report))?;
        }
        if !incs.is_empty() {
            out.csv("increments.csv", &incs)?;
        }
        Ok(out.written)
    }
}

pub fn default_rollup_increments(family: Family) -> usize {
    match family.formulation {
        Formulation::Mixed => ROLLUP_INCREMENTS_MX,
        Formulation::Displacement => ROLLUP_INCREMENTS_DB,
    }
}

pub fn run_helical_rollup(cfg: &RollupConfig) -> Result<RollupStudy> {
    let runs = cfg
        .families
        .par_iter()
        .map(|&family| {
            let run = (|| {
                let setup = helical_rollup(family, cfg.n_nodes, default_rollup_increments(family))?;
                let min_increments = cfg.search.then(|| search(&setup, cfg.search_cap));
                let sol = solve(&setup)?;
                let (tip0, _) = setup.problem.pose(&setup.problem.initial_state(), 1.0)?;
                let tip = sol
                    .steps
                    .iter()
                    .map(|s| {
                        let (r, _) = setup.problem.pose(&s.x, 1.0)?;
                        let d = r - tip0;
                        Ok(TipRow { t: s.t, dr_x: d.x, dr_y: d.y, dr_z: d.z })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let x = sol.final_state();
                let profile = stress_profile(&setup.problem, x, PROFILE_SAMPLES)?;
                Ok(RollupRun {
                    family,
                    min_increments,
                    tip,
                    stress: stress_rows(&setup.problem, x, PROFILE_SAMPLES)?,
                    force_range: force_range(&profile),
                    report: sol.report,
                })
            })();
            (family, run)
        })
        .collect();
    Ok(RollupStudy { runs })
}

// ---------------------------------------------------------------- ring

#[derive(Clone, Debug, PartialEq)]
pub struct RingConfig {
    pub family: Family,
    pub n_el: usize,
    pub n_increments: usize,
    pub final_angle: f64,
}

impl Default for RingConfig {
    fn default() -> Self {
        Self { family: Q2_MX_FULL, n_el: RING_ELEMENTS, n_increments: RING_INCREMENTS, final_angle: RING_FINAL_ANGLE }
    }
}

/// Point whose displacement is tracked.
pub const RING_POINT_B: f64 = 0.25;

#[derive(Clone, Debug, PartialEq)]
pub struct RingStudy {
    pub moment: Vec<MomentRow>,
    /// Displacement of point B against the load parameter.
    pub point_b: Vec<TipRow>,
    pub report: NewtonReport,
    pub final_state: DVector<f64>,
}

impl RingStudy {
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut out = Output::new(dir)?;
        out.csv("moment.csv", &self.moment)?;
        out.csv("point_b.csv", &self.point_b)?;
        out.csv("newton.csv", &newton_rows(&self.report))?;
        Ok(out.written)
    }
}

pub fn run_ring(cfg: &RingConfig) -> Result<RingStudy> {
    let setup = ring(cfg.family, cfg.n_el, cfg.n_increments, cfg.final_angle)?;
    let problem = &setup.problem;
    let x0 = problem.initial_state();
    let sol = newton_solve(problem, &x0, &setup.solver)?;
    let (b0, _) = problem.pose(&x0, RING_POINT_B)?;
    let mut moment = vec![MomentRow { theta: 0.0, moment: 0.0 }];
    let mut point_b = vec![TipRow { t: 0.0, dr_x: 0.0, dr_y: 0.0, dr_z: 0.0 }];
    for s in &sol.steps {
        moment.push(MomentRow { theta: cfg.final_angle * s.t, moment: problem.bc_multipliers(&s.x, RING_DRIVER)[0] });
        let (b, _) = problem.pose(&s.x, RING_POINT_B)?;
        let d = b - b0;
        point_b.push(TipRow { t: s.t, dr_x: d.x, dr_y: d.y, dr_z: d.z });
    }
    Ok(RingStudy {
        moment,
        point_b,
        final_state: sol.final_state().clone(),
        report: sol.report,
    })
}

// ---------------------------------------------------------------- cantilever

#[derive(Clone, Debug, PartialEq)]
pub struct CantileverConfig {
    pub laws: Vec<CantileverLaw>,
    pub family: Family,
    pub n_el: usize,
    pub n_increments: usize,
    pub alpha2_max: f64,
    /// Load levels `α²` at which centerlines are written; must lie on the increment grid.
    pub snapshots: Vec<f64>,
}

impl Default for CantileverConfig {
    fn default() -> Self {
        Self {
            laws: CantileverLaw::ALL.to_vec(),
            family: Q2_MX_FULL,
            n_el: CANTILEVER_ELEMENTS,
            n_increments: CANTILEVER_INCREMENTS,
            alpha2_max: CANTILEVER_ALPHA2_MAX,
            snapshots: vec![0.0, 1.0, 2.0, 4.0, 10.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CantileverRun {
    pub law: CantileverLaw,
    pub with_moment: bool,
    /// Tip displacement divided by the rod length, against `α²`.
    pub tip: Vec<TipRow>,
    pub centerlines: Vec<(f64, Vec<CenterlineRow>)>,
}

#[derive(Clone, Debug)]
pub struct CantileverStudy {
    pub runs: Vec<Result<CantileverRun>>,
}

impl CantileverStudy {
    pub fn run(&self, law: CantileverLaw, with_moment: bool) -> Option<&CantileverRun> {
        self.runs.iter().filter_map(|r| r.as_ref().ok()).find(|r| r.law == law && r.with_moment == with_moment)
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut out = Output::new(dir)?;
        for run in self.runs.iter().filter_map(|r| r.as_ref().ok()) {
            let case = if run.with_moment { "force_moment" } else { "force" };
            out.csv(&format!("tip_{}_{case}.csv", run.law), &run.tip)?;
            for (a2, rows) in &run.centerlines {
                out.csv(&format!("centerline_{}_{case}_alpha2_{a2}.csv", run.law), rows)?;
            }
        }
        Ok(out.written)
    }
}

pub fn run_cantilever(cfg: &CantileverConfig) -> Result<CantileverStudy> {
    for &a2 in &cfg.snapshots {
        let k = a2 / cfg.alpha2_max * cfg.n_increments as f64;
        if !(0.0..=cfg.n_increments as f64).contains(&k) || (k - k.round()).abs() > 1e-9 {
            return Err(Error::Config(format!("snapshot α² = {a2} is not on the increment grid")));
        }
    }
    let mut jobs = Vec::new();
    for &law in &cfg.laws {
        for with_moment in [false, true] {
            jobs.push((law, with_moment));
        }
    }
    let runs = jobs
        .par_iter()
        .map(|&(law, with_moment)| {
            let setup = cantilever(law, with_moment, cfg.alpha2_max, cfg.family, cfg.n_el, cfg.n_increments)?;
            let problem = &setup.problem;
            let x0 = problem.initial_state();
            let sol = solve(&setup)?;
            let (tip0, _) = problem.pose(&x0, 1.0)?;
            let mut tip = vec![TipRow { t: 0.0, dr_x: 0.0, dr_y: 0.0, dr_z: 0.0 }];
            for s in &sol.steps {
                let (r, _) = problem.pose(&s.x, 1.0)?;
                let d = (r - tip0) / CANTILEVER_LENGTH;
                tip.push(TipRow { t: cfg.alpha2_max * s.t, dr_x: d.x, dr_y: d.y, dr_z: d.z });
            }
            let centerlines = cfg
                .snapshots
                .iter()
                .map(|&a2| {
                    let k = (a2 / cfg.alpha2_max * cfg.n_increments as f64).round() as usize;
                    let x = if k == 0 { &x0 } else { &sol.steps[k - 1].x };
                    Ok((a2, centerline_rows(problem, x, PROFILE_SAMPLES)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CantileverRun { law, with_moment, tip, centerlines })
        })
        .collect();
    Ok(CantileverStudy { runs })
}

/// Runs the default study of a case and writes its files into `dir`.
pub fn run_case(case: CaseId, dir: &Path) -> Result<Vec<PathBuf>> {
    match case {
        CaseId::Bend45 => run_bend45(&Bend45Config::default())?.write(dir),
        CaseId::Helix => run_helix(&HelixConfig::default())?.write(dir),
        CaseId::HelicalRollup => run_helical_rollup(&RollupConfig::default())?.write(dir),
        CaseId::Ring => run_ring(&RingConfig::default())?.write(dir),
        CaseId::Cantilever => run_cantilever(&CantileverConfig::default())?.write(dir),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantilever_snapshots_must_be_on_grid() {
        let cfg = CantileverConfig { snapshots: vec![0.3], ..Default::default() };
        assert!(matches!(run_cantilever(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn undeformed_cantilever_is_straight() {
        let cfg = CantileverConfig {
            laws: vec![CantileverLaw::Inextensible],
            n_increments: 2,
            alpha2_max: 1e-9,
            snapshots: vec![0.0],
            ..Default::default()
        };
        let study = run_cantilever(&cfg).unwrap();
        let run = study.run(CantileverLaw::Inextensible, false).unwrap();
        for row in &run.centerlines[0].1 {
            assert!((row.r_x - row.xi * CANTILEVER_LENGTH).abs() < 1e-12);
            assert_eq!((row.r_y, row.r_z), (0.0, 0.0));
        }
    }

    #[test]
    fn slope_uses_finest_meshes() {
        let cell = |n: usize, e: f64| ConvergenceCell { rho: 10.0, family: Q1_MX_FULL, n_nodes: n, error: Ok(e) };
        let study = Bend45Study {
            cells: vec![cell(3, 1.0), cell(5, 1e9), cell(9, 81.0f64.recip()), cell(17, 289.0f64.recip()), cell(33, 1089.0f64.recip())],
            stress: vec![],
        };
        assert!((study.slope(10.0, Q1_MX_FULL).unwrap() + 2.0).abs() < 1e-12);
        assert_eq!(study.slope(10.0, Q2_MX_FULL), None);
    }
}
