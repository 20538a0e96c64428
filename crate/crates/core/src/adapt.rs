//! The adaptive surrogate-optimization driver. Each iteration grows the data
//! bank (consuming an external archive first when one is supplied, otherwise
//! evolving the true cost function seeded from the bank), re-partitions the
//! bank into train/validation/test splits, trains a family of freshly sampled
//! networks, optimizes each trained network with the evolutionary core, picks
//! the network whose predicted Pareto set lies closest to the bank's own
//! Pareto set, verifies a handful of predicted designs against the true cost
//! function, and either stops or passes the winner's hidden-layer sizes on as
//! the next iteration's sampling means.
//!
//! Every random decision draws from a dedicated sub-stream of the run seed,
//! keyed by purpose, iteration, and network index, so changing the number of
//! networks does not perturb the data split and full runs replay bit-exactly
//! from the same seed.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::databank::{DataBank, Provenance, Split};
use crate::error::Result;
use crate::indicators::{igd, mean_pointwise_error};
use crate::invalid_arg;
use crate::moea::{
    evolve_with_rng, extract_pareto, CostFunction, Evaluation, Individual, ProblemSpec,
};
use crate::surrogate::{
    default_strike_threshold, sample_architecture, train_lm, Dataset, MlpSurrogate, Scaling,
};

const PURPOSE_DATA_GEN: u64 = 1;
const PURPOSE_SHUFFLE: u64 = 2;
const PURPOSE_ARCH: u64 = 3;
const PURPOSE_WEIGHTS: u64 = 4;
const PURPOSE_OPT: u64 = 5;
const PURPOSE_VERIFY: u64 = 6;

/// A fresh generator on the sub-stream identified by (network, iteration,
/// purpose). Purposes occupy the low byte, the iteration the next 32 bits,
/// and the network index the high bits, so streams never collide.
fn sub_rng(seed: u64, mlp_index: u64, iteration: u64, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((mlp_index << 40) | (iteration << 8) | purpose);
    rng
}

/// Driver settings. `initial_means` must hold one entry per hidden layer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    /// Number of hidden layers in every sampled network.
    pub n_hlrs: usize,
    /// Networks created and trained per iteration.
    pub n_dnn: usize,
    /// Initial mean hidden-layer sizes the sampler centers on.
    pub initial_means: Vec<f64>,
    /// Half-width of the hidden-layer-size sampling window.
    pub r_n: f64,
    /// Smallest admissible hidden-layer size.
    pub n_min: usize,
    /// Largest admissible hidden-layer size.
    pub n_max: usize,
    /// New data-bank entries acquired per iteration.
    pub n_smp: usize,
    /// Population size of every evolutionary run.
    pub n_pop: usize,
    /// Generation count of every evolutionary run.
    pub n_gen: usize,
    /// Predicted designs re-evaluated with the true cost per iteration.
    pub n_ver: usize,
    /// Verification-error tolerance; the run stops once delta drops below it.
    pub epsilon: f64,
    /// Hard iteration cap.
    pub k_max: usize,
}

impl Hyperparameters {
    /// Settings used for the analytic two-objective benchmark suite.
    pub fn zdt_bench() -> Self {
        Hyperparameters {
            n_hlrs: 3,
            n_dnn: 4,
            initial_means: vec![11.0, 11.0, 11.0],
            r_n: 4.0,
            n_min: 2,
            n_max: 20,
            n_smp: 1000,
            n_pop: 100,
            n_gen: 250,
            n_ver: 16,
            epsilon: 1e-6,
            k_max: 100,
        }
    }

    /// Settings used for the expensive constrained design application.
    pub fn real_life() -> Self {
        Hyperparameters {
            n_hlrs: 3,
            n_dnn: 10,
            initial_means: vec![11.0, 11.0, 11.0],
            r_n: 4.0,
            n_min: 2,
            n_max: 20,
            n_smp: 600,
            n_pop: 500,
            n_gen: 90,
            n_ver: 8,
            epsilon: 0.05,
            k_max: 12,
        }
    }

    /// Defaults by problem kind; `zdt-bench` or `real-life`.
    pub fn for_problem_kind(kind: &str) -> Result<Self> {
        match kind {
            "zdt-bench" => Ok(Self::zdt_bench()),
            "real-life" => Ok(Self::real_life()),
            other => Err(invalid_arg!("unknown problem kind {other:?}")),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_hlrs == 0 {
            return Err(invalid_arg!("need at least one hidden layer"));
        }
        if self.initial_means.len() != self.n_hlrs {
            return Err(invalid_arg!(
                "initial_means has {} entries for {} hidden layers",
                self.initial_means.len(),
                self.n_hlrs
            ));
        }
        if self.n_min < 1 || self.n_max < self.n_min {
            return Err(invalid_arg!(
                "need 1 <= n_min <= n_max, got [{}, {}]",
                self.n_min,
                self.n_max
            ));
        }
        for (i, &m) in self.initial_means.iter().enumerate() {
            if !m.is_finite() || m < self.n_min as f64 || m > self.n_max as f64 {
                return Err(invalid_arg!(
                    "initial mean {i} = {m} outside [{}, {}]",
                    self.n_min,
                    self.n_max
                ));
            }
        }
        if self.n_dnn == 0 {
            return Err(invalid_arg!("need at least one network per iteration"));
        }
        if !self.r_n.is_finite() || self.r_n < 0.0 {
            return Err(invalid_arg!("sampling half-width must be finite and >= 0"));
        }
        if self.n_smp < 10 {
            return Err(invalid_arg!("need at least 10 new samples per iteration"));
        }
        if self.n_pop < 4 || self.n_pop % 2 != 0 {
            return Err(invalid_arg!("population size must be even and at least 4"));
        }
        if self.n_gen == 0 {
            return Err(invalid_arg!("need at least one generation"));
        }
        if self.n_ver == 0 {
            return Err(invalid_arg!("need at least one verification point"));
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(invalid_arg!("tolerance must be non-negative"));
        }
        if self.k_max == 0 {
            return Err(invalid_arg!("iteration cap must be at least 1"));
        }
        Ok(())
    }
}

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminationReason {
    ToleranceMet,
    KMaxReached,
}

impl TerminationReason {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminationReason::ToleranceMet => "tolerance-met",
            TerminationReason::KMaxReached => "k_max-reached",
        }
    }
}

/// Final driver state.
#[derive(Clone, Debug)]
pub struct AdaptState {
    /// Completed iterations (1-based count).
    pub iteration: usize,
    /// Sampling means in effect after the last inheritance step.
    pub current_means: Vec<f64>,
    /// The last selected network.
    pub best_mlp: Option<MlpSurrogate>,
    /// Parameter vectors of the last selected network's Pareto set.
    pub best_pareto_set: Vec<Vec<f64>>,
    /// Predicted objective vectors matching `best_pareto_set`.
    pub best_pareto_front: Vec<Vec<f64>>,
    /// Pareto set of the data bank at the last iteration.
    pub cfd_pareto_set: Vec<Vec<f64>>,
    /// Objective vectors matching `cfd_pareto_set`.
    pub cfd_pareto_front: Vec<Vec<f64>>,
    /// Verification error of the last iteration.
    pub delta: Option<f64>,
    pub terminated: bool,
    pub reason: Option<TerminationReason>,
}

/// Per-network record inside an iteration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MlpOutcome {
    /// Full layer-size vector, inputs and outputs included.
    pub architecture: Vec<usize>,
    /// Distance of this network's predicted Pareto set from the bank's.
    pub igd: Option<f64>,
    pub train_mse: Option<f64>,
    pub best_validation_mse: Option<f64>,
    pub test_mse: Option<f64>,
    pub training_iterations: usize,
    pub strikes_used: usize,
    /// Size of the predicted Pareto set.
    pub pareto_size: usize,
    /// Diagnostic when training failed; such networks are never selected.
    pub error: Option<String>,
}

/// One iteration of the driver, as written to the run log.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IterationRecord {
    /// 1-based iteration number.
    pub iteration: usize,
    /// Bank size after this iteration's data acquisition.
    pub bank_size: usize,
    /// Entries consumed from the external archive this iteration.
    pub injected: usize,
    /// Entries evaluated by this run itself this iteration.
    pub generated: usize,
    pub outcomes: Vec<MlpOutcome>,
    /// Index into `outcomes` of the selected network.
    pub selected: usize,
    /// Predicted Pareto set of the selected network.
    pub pareto_set: Vec<Vec<f64>>,
    /// Predicted objectives matching `pareto_set`.
    pub pareto_front: Vec<Vec<f64>>,
    /// Verification error over the evaluable verification points.
    pub delta: f64,
    /// The verification samples: predicted front members re-evaluated with
    /// the true cost function.
    pub verification: Vec<VerifiedPoint>,
    /// Verification points actually evaluated.
    pub verified: usize,
    /// Predicted designs the true cost refused during verification.
    pub substituted: usize,
    pub warning: Option<String>,
}

/// One verification sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifiedPoint {
    /// Parameter vector taken from the predicted Pareto set.
    pub p: Vec<f64>,
    /// Objectives the selected network predicted at `p`.
    pub predicted: Vec<f64>,
    /// Objectives of the true cost function at `p`.
    pub observed: Vec<f64>,
}

/// Everything a finished run returns.
#[derive(Debug)]
pub struct AdaptOutcome {
    pub state: AdaptState,
    pub bank: DataBank,
    pub log: Vec<IterationRecord>,
}

/// A trained network exposed as a cost function over the original box.
struct SurrogateCost<'a> {
    mlp: &'a MlpSurrogate,
    p_min: &'a [f64],
    p_max: &'a [f64],
}

impl CostFunction for SurrogateCost<'_> {
    fn n_pars(&self) -> usize {
        self.p_min.len()
    }

    fn n_objectives(&self) -> usize {
        self.mlp.arch.n_outputs()
    }

    fn p_min(&self) -> &[f64] {
        self.p_min
    }

    fn p_max(&self) -> &[f64] {
        self.p_max
    }

    fn evaluate(&self, p: &[f64]) -> Evaluation {
        // Trained weights are finite and the box is bounded, so the forward
        // pass cannot fail here.
        Evaluation::Feasible(self.mlp.forward(p).expect("surrogate forward"))
    }
}

/// Picks an evolutionary-run shape producing `r` new evaluations: prefers an
/// exact population/generation factorization under the configured population
/// cap (and, when seeding from the bank, under the bank size so the seed
/// fills the whole initial population); otherwise overshoots with the widest
/// even population and the caller keeps the first `r` evaluations.
fn plan_generation(r: usize, n_pop_cap: usize, bank_len: usize) -> (usize, usize) {
    let seeded = bank_len > 0;
    let mut cap = n_pop_cap.min(r).max(4);
    if seeded {
        cap = cap.min(bank_len.max(4));
    }
    let cap = cap - (cap % 2);
    let cap = cap.max(4);
    let mut q = cap;
    while q >= 4 {
        if seeded {
            if q <= bank_len && r % q == 0 {
                return (q, r / q);
            }
        } else if r % q == 0 && r / q >= 2 {
            return (q, r / q - 1);
        }
        q -= 2;
    }
    let fill = if seeded { 0 } else { cap };
    let gens = r.saturating_sub(fill).div_ceil(cap).max(1);
    (cap, gens)
}

fn to_bits(p: &[f64]) -> Vec<u64> {
    p.iter().map(|v| v.to_bits()).collect()
}

/// Callback invoked after every completed iteration with the updated state,
/// the current bank, and the iteration's log record. Returning an error
/// aborts the run with that error.
pub type IterationObserver<'a> =
    dyn FnMut(&AdaptState, &DataBank, &IterationRecord) -> Result<()> + 'a;

/// Runs the driver until tolerance, the iteration cap, or (when scheduled)
/// the end of the schedule. See [`run_adapt`] for the common entry point.
///
/// `schedule`, when given, lists strictly increasing cumulative bank sizes;
/// iteration k acquires exactly enough data to reach the k-th size and the
/// run spans at most `schedule.len()` iterations.
pub fn run_adapt_scheduled(
    spec: &ProblemSpec<'_>,
    hp: &Hyperparameters,
    seed: u64,
    data_source: Option<&DataBank>,
    schedule: Option<&[usize]>,
) -> Result<AdaptOutcome> {
    run_adapt_observed(spec, hp, seed, data_source, schedule, None)
}

/// [`run_adapt_scheduled`] with an optional per-iteration observer, the
/// extension point for checkpointing and progress reporting.
pub fn run_adapt_observed(
    spec: &ProblemSpec<'_>,
    hp: &Hyperparameters,
    seed: u64,
    data_source: Option<&DataBank>,
    schedule: Option<&[usize]>,
    mut observer: Option<&mut IterationObserver<'_>>,
) -> Result<AdaptOutcome> {
    spec.validate()?;
    hp.validate()?;
    if let Some(src) = data_source {
        if src.n_pars() != spec.n_pars || src.n_objectives() != spec.n_objectives {
            return Err(invalid_arg!(
                "data source is {}x{} but the problem needs {}x{}",
                src.n_pars(),
                src.n_objectives(),
                spec.n_pars,
                spec.n_objectives
            ));
        }
    }
    let k_max = match schedule {
        Some(s) => {
            if s.is_empty() {
                return Err(invalid_arg!("schedule must not be empty"));
            }
            if s[0] < 10 {
                return Err(invalid_arg!("schedule sizes must be at least 10"));
            }
            if s.windows(2).any(|w| w[1] <= w[0]) {
                return Err(invalid_arg!("schedule sizes must be strictly increasing"));
            }
            hp.k_max.min(s.len())
        }
        None => hp.k_max,
    };

    let mut bank = DataBank::new(spec.n_pars, spec.n_objectives)?;
    let mut state = AdaptState {
        iteration: 0,
        current_means: hp.initial_means.clone(),
        best_mlp: None,
        best_pareto_set: Vec::new(),
        best_pareto_front: Vec::new(),
        cfd_pareto_set: Vec::new(),
        cfd_pareto_front: Vec::new(),
        delta: None,
        terminated: false,
        reason: None,
    };
    let mut log: Vec<IterationRecord> = Vec::new();
    let mut source_cursor = 0usize;
    let mut verify_cache: HashMap<Vec<u64>, Evaluation> = HashMap::new();
    let strike_threshold = default_strike_threshold(hp.n_hlrs);

    for k in 1..=k_max {
        let ku = k as u64;

        // -- Data acquisition: archive rows first, fresh evaluations after.
        let target = match schedule {
            Some(s) => s[k - 1],
            None => bank.len() + hp.n_smp,
        };
        let mut injected = 0usize;
        let mut generated = 0usize;
        if let Some(src) = data_source {
            while bank.len() < target && source_cursor < src.len() {
                let e = &src.entries()[source_cursor];
                bank.push(e.p.clone(), e.o.clone(), Provenance::Injected)?;
                source_cursor += 1;
                injected += 1;
            }
        }
        if bank.len() < target {
            let r = target - bank.len();
            let (pop, gens) = plan_generation(r, hp.n_pop, bank.len());
            let seeds: Vec<Individual> = bank
                .entries()
                .iter()
                .map(|e| Individual::new(e.p.clone(), e.o.clone()))
                .collect();
            let initial = if seeds.is_empty() { None } else { Some(&seeds[..]) };
            let mut rng = sub_rng(seed, 0, ku, PURPOSE_DATA_GEN);
            let (_, archive) = evolve_with_rng(spec, pop, gens, &mut rng, initial)?;
            if archive.len() < r {
                return Err(crate::Error::Numerical(format!(
                    "iteration {k}: generation produced {} of {r} requested points",
                    archive.len()
                )));
            }
            for ind in archive.into_iter().take(r) {
                bank.push(ind.p, ind.o, Provenance::Generated)?;
                generated += 1;
            }
        }

        // -- Bank Pareto extraction and split reassignment.
        let individuals: Vec<Individual> = bank
            .entries()
            .iter()
            .map(|e| Individual::new(e.p.clone(), e.o.clone()))
            .collect();
        let (cfd_set, cfd_front) = extract_pareto(&individuals);
        let mut order: Vec<usize> = (0..bank.len()).collect();
        order.shuffle(&mut sub_rng(seed, 0, ku, PURPOSE_SHUFFLE));
        bank.assign_splits(&order)?;

        let gather = |split: Split| -> Result<Dataset> {
            let idx = bank.split_indices(split);
            let inputs: Vec<Vec<f64>> = idx.iter().map(|&i| bank.entries()[i].p.clone()).collect();
            let targets: Vec<Vec<f64>> = idx.iter().map(|&i| bank.entries()[i].o.clone()).collect();
            Dataset::from_rows(&inputs, &targets)
        };
        let train_set = gather(Split::Train)?;
        let valid_set = gather(Split::Valid)?;
        let test_idx = bank.split_indices(Split::Test);
        let test_set = if test_idx.is_empty() {
            None
        } else {
            Some(gather(Split::Test)?)
        };
        // Objective scaling is recomputed from the whole bank every
        // iteration so penalty-sized values cannot dwarf the real range.
        let bank_targets: Vec<Vec<f64>> = bank.entries().iter().map(|e| e.o.clone()).collect();
        let scaling = Scaling::from_observations(&spec.p_min, &spec.p_max, &bank_targets)?;

        // -- Create, train, and optimize each candidate network. The
        // networks share nothing and train in parallel; per-network RNG
        // streams keep every result independent of the thread count.
        type Survivor = (MlpSurrogate, Vec<Vec<f64>>, Vec<Vec<f64>>);
        let results: Vec<(MlpOutcome, Option<Survivor>)> = (0..hp.n_dnn)
            .into_par_iter()
            .map(|i| -> Result<(MlpOutcome, Option<Survivor>)> {
                let iu = i as u64;
                let arch = sample_architecture(
                    spec.n_pars,
                    spec.n_objectives,
                    &state.current_means,
                    hp.r_n,
                    hp.n_min,
                    hp.n_max,
                    &mut sub_rng(seed, iu, ku, PURPOSE_ARCH),
                )?;
                let layer_sizes = arch.layer_sizes.clone();
                let mut mlp = MlpSurrogate::new_random(
                    arch,
                    scaling.clone(),
                    &mut sub_rng(seed, iu, ku, PURPOSE_WEIGHTS),
                )?;
                let trained = train_lm(&mut mlp, &train_set, &valid_set, strike_threshold)
                    .and_then(|report| {
                        let test_mse = match &test_set {
                            Some(t) => Some(mlp.evaluate_dataset(t)?),
                            None => None,
                        };
                        let cost = SurrogateCost {
                            mlp: &mlp,
                            p_min: &spec.p_min,
                            p_max: &spec.p_max,
                        };
                        let sspec = ProblemSpec::new(&cost);
                        let mut rng = sub_rng(seed, iu, ku, PURPOSE_OPT);
                        let (_, archive) =
                            evolve_with_rng(&sspec, hp.n_pop, hp.n_gen, &mut rng, None)?;
                        let (set, front) = extract_pareto(&archive);
                        let igd_value = igd(&cfd_set, &set)?;
                        Ok((report, test_mse, set, front, igd_value))
                    });
                Ok(match trained {
                    Ok((report, test_mse, set, front, igd_value)) => (
                        MlpOutcome {
                            architecture: layer_sizes,
                            igd: Some(igd_value),
                            train_mse: Some(report.train_mse),
                            best_validation_mse: Some(report.best_validation_mse()),
                            test_mse,
                            training_iterations: report.iterations,
                            strikes_used: report.strikes_used,
                            pareto_size: set.len(),
                            error: None,
                        },
                        Some((mlp, set, front)),
                    ),
                    Err(err) => (
                        MlpOutcome {
                            architecture: layer_sizes,
                            igd: None,
                            train_mse: None,
                            best_validation_mse: None,
                            test_mse: None,
                            training_iterations: 0,
                            strikes_used: 0,
                            pareto_size: 0,
                            error: Some(err.to_string()),
                        },
                        None,
                    ),
                })
            })
            .collect::<Result<_>>()?;
        let mut outcomes: Vec<MlpOutcome> = Vec::with_capacity(hp.n_dnn);
        let mut survivors: Vec<Option<Survivor>> = Vec::with_capacity(hp.n_dnn);
        for (outcome, survivor) in results {
            outcomes.push(outcome);
            survivors.push(survivor);
        }

        // -- Selection: smallest set distance, then test MSE, then age.
        let selected = outcomes
            .iter()
            .enumerate()
            .filter(|(_, o)| o.error.is_none())
            .min_by(|(ia, a), (ib, b)| {
                a.igd
                    .unwrap()
                    .total_cmp(&b.igd.unwrap())
                    .then_with(|| match (a.test_mse, b.test_mse) {
                        (Some(x), Some(y)) => x.total_cmp(&y),
                        _ => std::cmp::Ordering::Equal,
                    })
                    .then(ia.cmp(ib))
            })
            .map(|(i, _)| i);
        let selected = match selected {
            Some(i) => i,
            None => {
                let first_error = outcomes
                    .iter()
                    .find_map(|o| o.error.clone())
                    .unwrap_or_default();
                return Err(crate::Error::Numerical(format!(
                    "iteration {k}: all {} network trainings failed; first error: {first_error}",
                    hp.n_dnn
                )));
            }
        };
        let (winner, winner_set, winner_front) = survivors[selected].take().expect("selected");

        // -- Verification against the true cost function.
        let mut candidates: Vec<usize> = (0..winner_set.len()).collect();
        candidates.shuffle(&mut sub_rng(seed, 0, ku, PURPOSE_VERIFY));
        let mut verification: Vec<VerifiedPoint> = Vec::new();
        let mut substituted = 0usize;
        for idx in candidates {
            if verification.len() == hp.n_ver {
                break;
            }
            let p = &winner_set[idx];
            let eval = verify_cache
                .entry(to_bits(p))
                .or_insert_with(|| spec.cost.evaluate(p));
            if eval.is_feasible() {
                verification.push(VerifiedPoint {
                    p: p.clone(),
                    predicted: winner_front[idx].clone(),
                    observed: eval.objectives().to_vec(),
                });
            } else {
                substituted += 1;
            }
        }
        let mut warning = None;
        let delta = if verification.is_empty() {
            warning = Some(format!(
                "iteration {k}: no verification point was evaluable; delta undefined"
            ));
            f64::INFINITY
        } else {
            if verification.len() < hp.n_ver {
                warning = Some(format!(
                    "iteration {k}: only {} of {} verification points evaluable",
                    verification.len(),
                    hp.n_ver
                ));
            }
            let predicted: Vec<Vec<f64>> =
                verification.iter().map(|v| v.predicted.clone()).collect();
            let observed: Vec<Vec<f64>> =
                verification.iter().map(|v| v.observed.clone()).collect();
            mean_pointwise_error(&predicted, &observed)?
        };

        log.push(IterationRecord {
            iteration: k,
            bank_size: bank.len(),
            injected,
            generated,
            outcomes,
            selected,
            pareto_set: winner_set.clone(),
            pareto_front: winner_front.clone(),
            delta,
            verified: verification.len(),
            verification,
            substituted,
            warning,
        });

        state.iteration = k;
        state.best_mlp = Some(winner);
        state.best_pareto_set = winner_set;
        state.best_pareto_front = winner_front;
        state.cfd_pareto_set = cfd_set;
        state.cfd_pareto_front = cfd_front;
        state.delta = Some(delta);

        if delta < hp.epsilon {
            state.terminated = true;
            state.reason = Some(TerminationReason::ToleranceMet);
        } else if k >= k_max {
            state.terminated = true;
            state.reason = Some(TerminationReason::KMaxReached);
        }
        if let Some(obs) = observer.as_mut() {
            obs(&state, &bank, log.last().unwrap())?;
        }
        if state.terminated {
            break;
        }

        // -- Inheritance: the winner's hidden sizes become the new means.
        state.current_means = log
            .last()
            .unwrap()
            .outcomes[selected]
            .architecture
            .iter()
            .skip(1)
            .take(hp.n_hlrs)
            .map(|&s| s as f64)
            .collect();
    }

    Ok(AdaptOutcome { state, bank, log })
}

/// Runs the driver with a constant per-iteration sample count, consuming the
/// optional archive in its original evaluation order before generating any
/// data itself.
pub fn run_adapt(
    spec: &ProblemSpec<'_>,
    hp: &Hyperparameters,
    seed: u64,
    data_source: Option<&DataBank>,
) -> Result<AdaptOutcome> {
    run_adapt_scheduled(spec, hp, seed, data_source, None)
}
