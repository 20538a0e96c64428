//! The `baseline`, `adapt`, and `benchmark` commands and their on-disk
//! artifacts.
//!
//! Every run directory is self-describing: a manifest with the fully
//! resolved configuration is written before any computation starts, so an
//! unwritable directory fails immediately and a crashed run still records
//! what it was asked to do. Nothing written here carries timestamps or other
//! non-reproducible content — rerunning with the same seed must reproduce
//! every artifact byte for byte.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use nnadapt::adapt::{
    run_adapt_observed, AdaptOutcome, AdaptState, Hyperparameters, IterationRecord, MlpOutcome,
};
use nnadapt::databank::{DataBank, Provenance};
use nnadapt::indicators::{delta_hv, hypervolume_2d, igd};
use nnadapt::moea::{dominates, evolve, extract_pareto, Individual, ProblemSpec};
use nnadapt::problems::zdt::{analytic_front, analytic_pareto, ZdtProblem};
use nnadapt::{Error, Result};
use serde::Serialize;

use crate::config::{baseline_pop_gen, BuiltProblem, RunConfig};

/// Version tag stamped into every manifest.
pub fn version_string() -> String {
    format!("nnadapt-v{}", env!("CARGO_PKG_VERSION"))
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: String,
    problem: &'a str,
    seed: u64,
    config: &'a RunConfig,
    hyperparameters: &'a Hyperparameters,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
    fs::write(path, text + "\n")?;
    Ok(())
}

fn write_manifest(dir: &Path, cfg: &RunConfig, hp: &Hyperparameters) -> Result<()> {
    let manifest = Manifest {
        command: cfg.mode.as_str(),
        version: version_string(),
        problem: &cfg.problem,
        seed: cfg.seed,
        config: cfg,
        hyperparameters: hp,
    };
    write_json(&dir.join("manifest.json"), &manifest)
}

/// Writes rows of equally long vectors with a `prefix_0,prefix_1,...`
/// header, 17 significant digits per value.
fn write_vectors_csv(path: &Path, prefix: &str, rows: &[Vec<f64>]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let width = rows.first().map_or(0, Vec::len);
    for j in 0..width {
        if j > 0 {
            write!(w, ",")?;
        }
        write!(w, "{prefix}_{j}")?;
    }
    writeln!(w)?;
    for row in rows {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                write!(w, ",")?;
            }
            write!(w, "{v:.16e}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Componentwise maxima of a front: the hypervolume reference point.
fn front_maxima(front: &[Vec<f64>]) -> Result<Vec<f64>> {
    let first = front
        .first()
        .ok_or_else(|| Error::Numerical("empty front has no reference point".into()))?;
    let mut r = vec![f64::NEG_INFINITY; first.len()];
    for o in front {
        for (rv, &v) in r.iter_mut().zip(o) {
            *rv = rv.max(v);
        }
    }
    Ok(r)
}

/// Non-dominated subset of a stream of evaluated designs, maintained
/// incrementally so prefix fronts of a long archive stay cheap.
struct RunningFront {
    set: Vec<Vec<f64>>,
    front: Vec<Vec<f64>>,
}

impl RunningFront {
    fn new() -> Self {
        RunningFront {
            set: Vec::new(),
            front: Vec::new(),
        }
    }

    fn insert(&mut self, p: &[f64], o: &[f64]) -> Result<()> {
        for kept in &self.front {
            if dominates(kept, o)? {
                return Ok(());
            }
        }
        let mut keep = vec![true; self.front.len()];
        for (flag, kept) in keep.iter_mut().zip(&self.front) {
            *flag = !dominates(o, kept)?;
        }
        let mut it = keep.iter();
        self.set.retain(|_| *it.next().unwrap());
        let mut it = keep.iter();
        self.front.retain(|_| *it.next().unwrap());
        self.set.push(p.to_vec());
        self.front.push(o.to_vec());
        Ok(())
    }

    fn set(&self) -> &[Vec<f64>] {
        &self.set
    }

    fn front(&self) -> &[Vec<f64>] {
        &self.front
    }
}

/// Plain evolutionary run on the true cost function. Writes the evaluation
/// archive as a data bank, the final Pareto set/front, and a per-generation
/// indicator log.
pub fn cmd_baseline(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg.out_dir()?.to_path_buf();
    let problem = BuiltProblem::build(&cfg.problem)?;
    let hp = cfg.resolved_hyperparameters()?;
    fs::create_dir_all(&dir)?;
    write_manifest(&dir, cfg, &hp)?;

    let (n_pop, n_gen) = baseline_pop_gen(cfg)?;
    let spec = ProblemSpec::new(problem.cost());
    let (_, archive) = evolve(&spec, n_pop, n_gen, cfg.seed, None)?;

    let mut bank = DataBank::new(spec.n_pars, spec.n_objectives)?;
    for ind in &archive {
        bank.push(ind.p.clone(), ind.o.clone(), Provenance::Generated)?;
    }
    bank.save(&dir.join("bank.csv"))?;

    let (set, front) = extract_pareto(&archive);
    write_vectors_csv(&dir.join("pareto_set.csv"), "p", &set)?;
    write_vectors_csv(&dir.join("pareto_front.csv"), "o", &front)?;

    // Convergence log: for each generation, the indicators of the
    // non-dominated front of everything evaluated so far. The hypervolume
    // reference point is fixed from the final front so the column is
    // monotone and comparable across generations; the distance column needs
    // a known optimum and stays empty otherwise.
    let reference = match problem.zdt() {
        Some(z) => Some(analytic_front(z, 1000)?),
        None => None,
    };
    let r = front_maxima(&front)?;
    let mut running = RunningFront::new();
    let mut w = BufWriter::new(File::create(dir.join("indicators.csv"))?);
    writeln!(w, "generation,evaluations,igd,hv")?;
    let mut next = 0usize;
    for gen in 0..=n_gen {
        let seen = (n_pop * (gen + 1)).min(archive.len());
        while next < seen {
            running.insert(&archive[next].p, &archive[next].o)?;
            next += 1;
        }
        let hv = hypervolume_2d(running.front(), &r)?;
        match &reference {
            Some(ref_front) => {
                let d = igd(ref_front, running.front())?;
                writeln!(w, "{gen},{next},{d:.16e},{hv:.16e}")?;
            }
            None => writeln!(w, "{gen},{next},,{hv:.16e}")?,
        }
    }
    w.flush()?;
    Ok(dir)
}

/// One `log.jsonl` line: an iteration record without its bulky point lists
/// (the final Pareto set/front are persisted as CSVs instead).
#[derive(Serialize)]
struct LogLine<'a> {
    iteration: usize,
    bank_size: usize,
    injected: usize,
    generated: usize,
    outcomes: &'a [MlpOutcome],
    selected: usize,
    delta: f64,
    pareto_points: usize,
    verified: usize,
    substituted: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: &'a Option<String>,
}

fn append_log_line<W: Write>(w: &mut W, rec: &IterationRecord) -> Result<()> {
    let line = LogLine {
        iteration: rec.iteration,
        bank_size: rec.bank_size,
        injected: rec.injected,
        generated: rec.generated,
        outcomes: &rec.outcomes,
        selected: rec.selected,
        delta: rec.delta,
        pareto_points: rec.pareto_set.len(),
        verified: rec.verified,
        substituted: rec.substituted,
        warning: &rec.warning,
    };
    let text = serde_json::to_string(&line).map_err(std::io::Error::other)?;
    writeln!(w, "{text}")?;
    // One durable line per iteration so progress survives interruption.
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Summary<'a> {
    problem: &'a str,
    seed: u64,
    iterations: usize,
    terminated: bool,
    reason: Option<&'static str>,
    delta: Option<f64>,
    final_architecture: Vec<usize>,
    current_means: Vec<f64>,
    final_igd: Option<f64>,
}

fn write_verification_csv(path: &Path, log: &[IterationRecord]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let dims = log.iter().find_map(|r| r.verification.first());
    let (np, nm) = dims.map_or((0, 0), |v| (v.p.len(), v.predicted.len()));
    write!(w, "iteration")?;
    for i in 0..np {
        write!(w, ",p_{i}")?;
    }
    for j in 0..nm {
        write!(w, ",pred_{j}")?;
    }
    for j in 0..nm {
        write!(w, ",obs_{j}")?;
    }
    writeln!(w)?;
    for rec in log {
        for v in &rec.verification {
            write!(w, "{}", rec.iteration)?;
            for x in &v.p {
                write!(w, ",{x:.16e}")?;
            }
            for x in &v.predicted {
                write!(w, ",{x:.16e}")?;
            }
            for x in &v.observed {
                write!(w, ",{x:.16e}")?;
            }
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Final artifacts shared by the adapt and benchmark commands: the bank, the
/// selected network with its predicted Pareto set/front, the verification
/// samples, and a machine-readable summary.
fn write_adapt_artifacts(
    dir: &Path,
    cfg: &RunConfig,
    built: &BuiltProblem,
    outcome: &AdaptOutcome,
) -> Result<()> {
    outcome.bank.save(&dir.join("bank.csv"))?;
    let state = &outcome.state;
    write_vectors_csv(&dir.join("pareto_set.csv"), "p", &state.best_pareto_set)?;
    write_vectors_csv(&dir.join("pareto_front.csv"), "o", &state.best_pareto_front)?;
    if let Some(mlp) = &state.best_mlp {
        mlp.save(&dir.join("best_mlp.txt"))?;
    }
    write_verification_csv(&dir.join("verification.csv"), &outcome.log)?;

    let final_igd = match built.zdt() {
        Some(z) if !state.best_pareto_set.is_empty() => {
            let (opt_set, _) = analytic_pareto(z, 1000)?;
            Some(igd(&opt_set, &state.best_pareto_set)?)
        }
        _ => None,
    };
    let final_architecture = outcome
        .log
        .last()
        .map(|rec| rec.outcomes[rec.selected].architecture.clone())
        .unwrap_or_default();
    let summary = Summary {
        problem: &cfg.problem,
        seed: cfg.seed,
        iterations: state.iteration,
        terminated: state.terminated,
        reason: state.reason.map(|r| r.as_str()),
        delta: state.delta,
        final_architecture,
        current_means: state.current_means.clone(),
        final_igd,
    };
    write_json(&dir.join("summary.json"), &summary)
}

/// Adaptive surrogate-assisted run. Consumes the optional data-source
/// archive in its original order, appends one JSON line per iteration to
/// `log.jsonl`, and writes the final artifacts described in
/// [`write_adapt_artifacts`].
pub fn cmd_adapt(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg.out_dir()?.to_path_buf();
    let problem = BuiltProblem::build(&cfg.problem)?;
    let hp = cfg.resolved_hyperparameters()?;
    fs::create_dir_all(&dir)?;
    write_manifest(&dir, cfg, &hp)?;

    let source = match &cfg.data_source {
        Some(path) => Some(DataBank::load(path)?),
        None => None,
    };
    let spec = ProblemSpec::new(problem.cost());

    let mut log_writer = BufWriter::new(File::create(dir.join("log.jsonl"))?);
    let checkpoint_every = cfg.checkpoint_every;
    let checkpoint_path = dir.join("bank.checkpoint.csv");
    let mut observer =
        |_state: &AdaptState, bank: &DataBank, rec: &IterationRecord| -> Result<()> {
            append_log_line(&mut log_writer, rec)?;
            if checkpoint_every > 0 && rec.iteration % checkpoint_every == 0 {
                bank.save(&checkpoint_path)?;
            }
            Ok(())
        };
    let outcome = run_adapt_observed(
        &spec,
        &hp,
        cfg.seed,
        source.as_ref(),
        cfg.schedule.as_deref(),
        Some(&mut observer),
    )?;

    write_adapt_artifacts(&dir, cfg, &problem, &outcome)?;
    Ok(dir)
}

/// Cumulative training-set sizes used when no explicit schedule is given:
/// 10, 30, 100, 300, 500, then whole thousands up to the archive size.
pub fn paper_schedule(archive_len: usize) -> Result<Vec<usize>> {
    if archive_len < 10 {
        return Err(Error::InvalidArgument(format!(
            "data source has {archive_len} rows; the default schedule needs at least 10"
        )));
    }
    let mut sizes = vec![10, 30, 100, 300, 500];
    sizes.retain(|&s| s <= archive_len);
    let mut k = 1000;
    while k <= archive_len {
        sizes.push(k);
        k += 1000;
    }
    Ok(sizes)
}

/// Relative hypervolume shortfall of a measured front against the ideal
/// front sampled at the same abscissae, both under reference point `r`.
/// Sampling the ideal curve where the measurement actually lies removes the
/// discretization bias a fixed reference sampling would add, and because the
/// ideal point under each measurement dominates it, the result is never
/// negative. When no ideal point lies inside `r` the window holds no
/// attainable volume and the shortfall is total.
fn projected_delta_hv(zdt: &ZdtProblem, front: &[Vec<f64>], r: &[f64]) -> Result<f64> {
    let ideal: Vec<Vec<f64>> = front
        .iter()
        .map(|o| vec![o[0], zdt.optimal_f2(o[0])])
        .collect();
    match delta_hv(&ideal, front, r) {
        Ok(v) => Ok(v),
        Err(Error::Numerical(_)) => Ok(1.0),
        Err(e) => Err(e),
    }
}

/// One row of the benchmark table: the adaptive run after consuming `feval`
/// archive rows, against the non-dominated front of the same archive prefix.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub feval: usize,
    pub igd: f64,
    pub delta_hv: f64,
    pub baseline_igd: f64,
    pub baseline_delta_hv: f64,
    /// Strictly better than the prefix baseline in both indicators.
    pub beats_baseline: bool,
}

/// What [`cmd_benchmark`] returns to callers, mirroring `table.csv` and
/// `window.json`.
#[derive(Debug)]
pub struct BenchmarkReport {
    pub rows: Vec<BenchRow>,
    /// Smallest evaluation count where the adaptive run beat the baseline
    /// in both indicators, if any.
    pub feval_min: Option<usize>,
    /// Largest such evaluation count.
    pub feval_max: Option<usize>,
    pub run_dir: PathBuf,
}

#[derive(Serialize)]
struct Window {
    feval_min: Option<usize>,
    feval_max: Option<usize>,
    rows: usize,
}

/// Indicator convergence versus a pre-computed archive. One adaptive run
/// consumes the archive prefix by prefix per the schedule; after each
/// iteration the predicted Pareto set is scored (distance to the known
/// optimal set, and hypervolume shortfall of its re-evaluated front) against
/// the archive prefix of identical cost.
pub fn cmd_benchmark(cfg: &RunConfig) -> Result<BenchmarkReport> {
    let dir = cfg.out_dir()?.to_path_buf();
    let problem = BuiltProblem::build(&cfg.problem)?;
    let hp = cfg.resolved_hyperparameters()?;
    let Some(zdt) = problem.zdt() else {
        return Err(Error::InvalidArgument(
            "benchmark mode needs a problem with a known optimal front".into(),
        ));
    };
    let source_path = cfg.data_source.as_ref().ok_or_else(|| {
        Error::InvalidArgument("benchmark mode needs a data-source archive".into())
    })?;
    fs::create_dir_all(&dir)?;
    write_manifest(&dir, cfg, &hp)?;

    let source = DataBank::load(source_path)?;
    let mut schedule = match &cfg.schedule {
        Some(s) => s.clone(),
        None => paper_schedule(source.len())?,
    };
    let oversized = schedule.iter().filter(|&&s| s > source.len()).count();
    if oversized > 0 {
        eprintln!(
            "warning: dropping {oversized} schedule sizes beyond the {}-row archive",
            source.len()
        );
        schedule.retain(|&s| s <= source.len());
        if schedule.is_empty() {
            return Err(Error::InvalidArgument(
                "schedule has no sizes within the archive".into(),
            ));
        }
    }

    // Shared references: the optimal set sampled densely, and the
    // hypervolume reference point from the whole archive's front.
    let (opt_set, _) = analytic_pareto(zdt, 1000)?;
    let source_individuals: Vec<Individual> = source
        .entries()
        .iter()
        .map(|e| Individual::new(e.p.clone(), e.o.clone()))
        .collect();
    let (_, source_front) = extract_pareto(&source_individuals);
    let r = front_maxima(&source_front)?;

    // Baseline indicators of each archive prefix the schedule will match.
    let mut baseline = Vec::with_capacity(schedule.len());
    {
        let mut running = RunningFront::new();
        let mut next = 0usize;
        for &s in &schedule {
            while next < s {
                let e = &source.entries()[next];
                running.insert(&e.p, &e.o)?;
                next += 1;
            }
            let d = igd(&opt_set, running.set())?;
            let dhv = projected_delta_hv(zdt, running.front(), &r)?;
            baseline.push((d, dhv));
        }
    }

    let spec = ProblemSpec::new(problem.cost());
    let mut log_writer = BufWriter::new(File::create(dir.join("log.jsonl"))?);
    let mut observer =
        |_state: &AdaptState, _bank: &DataBank, rec: &IterationRecord| -> Result<()> {
            append_log_line(&mut log_writer, rec)
        };
    let outcome = run_adapt_observed(
        &spec,
        &hp,
        cfg.seed,
        Some(&source),
        Some(&schedule),
        Some(&mut observer),
    )?;
    write_adapt_artifacts(&dir, cfg, &problem, &outcome)?;

    let mut rows = Vec::with_capacity(outcome.log.len());
    for (i, rec) in outcome.log.iter().enumerate() {
        let d = igd(&opt_set, &rec.pareto_set)?;
        let true_front: Vec<Vec<f64>> = rec
            .pareto_set
            .iter()
            .map(|p| zdt.eval(p).map(|(f1, f2)| vec![f1, f2]))
            .collect::<Result<_>>()?;
        let dhv = projected_delta_hv(zdt, &true_front, &r)?;
        let (baseline_igd, baseline_delta_hv) = baseline[i];
        rows.push(BenchRow {
            feval: rec.bank_size,
            igd: d,
            delta_hv: dhv,
            baseline_igd,
            baseline_delta_hv,
            beats_baseline: d < baseline_igd && dhv < baseline_delta_hv,
        });
    }

    let mut w = BufWriter::new(File::create(dir.join("table.csv"))?);
    writeln!(
        w,
        "feval,igd,delta_hv,baseline_igd,baseline_delta_hv,beats_baseline"
    )?;
    for row in &rows {
        writeln!(
            w,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            row.feval, row.igd, row.delta_hv, row.baseline_igd, row.baseline_delta_hv,
            row.beats_baseline
        )?;
    }
    w.flush()?;

    let qualifying = rows.iter().filter(|r| r.beats_baseline);
    let feval_min = qualifying.clone().map(|r| r.feval).min();
    let feval_max = qualifying.map(|r| r.feval).max();
    write_json(
        &dir.join("window.json"),
        &Window {
            feval_min,
            feval_max,
            rows: rows.len(),
        },
    )?;

    Ok(BenchmarkReport {
        rows,
        feval_min,
        feval_max,
        run_dir: dir,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_front_matches_batch_extraction() {
        // A deterministic scatter with ties and duplicates.
        let points: Vec<(Vec<f64>, Vec<f64>)> = (0..120)
            .map(|i| {
                let a = ((i * 37 % 97) as f64) / 97.0;
                let b = ((i * 53 % 89) as f64) / 89.0;
                (vec![i as f64], vec![a, (1.0 - a) * 0.5 + b * 0.5])
            })
            .collect();
        let mut running = RunningFront::new();
        let mut individuals = Vec::new();
        for (p, o) in &points {
            running.insert(p, o).unwrap();
            individuals.push(Individual::new(p.clone(), o.clone()));
        }
        let (set, front) = extract_pareto(&individuals);
        let mut lhs: Vec<(Vec<u64>, Vec<u64>)> = running
            .set()
            .iter()
            .zip(running.front())
            .map(|(p, o)| (bits(p), bits(o)))
            .collect();
        let mut rhs: Vec<(Vec<u64>, Vec<u64>)> = set
            .iter()
            .zip(&front)
            .map(|(p, o)| (bits(p), bits(o)))
            .collect();
        lhs.sort();
        rhs.sort();
        assert_eq!(lhs, rhs);
    }

    fn bits(v: &[f64]) -> Vec<u64> {
        v.iter().map(|x| x.to_bits()).collect()
    }

    #[test]
    fn paper_schedule_shapes() {
        assert_eq!(paper_schedule(10).unwrap(), vec![10]);
        assert_eq!(paper_schedule(450).unwrap(), vec![10, 30, 100, 300]);
        assert_eq!(
            paper_schedule(3500).unwrap(),
            vec![10, 30, 100, 300, 500, 1000, 2000, 3000]
        );
        let full = paper_schedule(25_250).unwrap();
        assert_eq!(full.len(), 30);
        assert_eq!(full[5], 1000);
        assert_eq!(*full.last().unwrap(), 25_000);
        assert!(paper_schedule(9).is_err());
    }

    #[test]
    fn front_maxima_is_componentwise() {
        let r = front_maxima(&[vec![0.1, 5.0], vec![2.0, 0.3]]).unwrap();
        assert_eq!(r, vec![2.0, 5.0]);
        assert!(front_maxima(&[]).is_err());
    }

    #[test]
    fn projected_shortfall_is_zero_on_the_ideal_curve_and_total_outside_r() {
        let zdt = ZdtProblem::new(nnadapt::problems::zdt::ZdtVariant::Zdt1);
        let on_curve: Vec<Vec<f64>> = (0..50)
            .map(|i| {
                let f1 = i as f64 / 49.0;
                vec![f1, zdt.optimal_f2(f1)]
            })
            .collect();
        let r = vec![1.0, 1.0];
        assert_eq!(projected_delta_hv(&zdt, &on_curve, &r).unwrap(), 0.0);
        // Every point at or beyond the reference point: no attainable volume.
        let outside = vec![vec![1.5, 2.0], vec![2.0, 1.5]];
        assert_eq!(projected_delta_hv(&zdt, &outside, &r).unwrap(), 1.0);
    }
}
