//! Elitist non-dominated-sorting genetic algorithm for multi-objective
//! minimization, with simulated binary crossover and polynomial mutation.
//!
//! All randomness flows through a caller-supplied RNG; given the same RNG
//! state, population size and generation count, `evolve_with_rng` produces
//! bit-identical results regardless of thread count (candidate evaluation is
//! data-parallel but order-preserving).

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::error::Result;
use crate::invalid_arg;

/// Distribution index for simulated binary crossover.
pub const SBX_ETA: f64 = 20.0;
/// Distribution index for polynomial mutation.
pub const PM_ETA: f64 = 20.0;
/// Per-pair crossover probability.
pub const P_CROSSOVER: f64 = 0.9;

/// Outcome of one cost-function evaluation. Infeasible designs still carry an
/// objective vector (typically a penalty) so they can participate in ranking.
#[derive(Clone, Debug, PartialEq)]
pub enum Evaluation {
    Feasible(Vec<f64>),
    Infeasible(Vec<f64>),
}

impl Evaluation {
    pub fn objectives(&self) -> &[f64] {
        match self {
            Evaluation::Feasible(o) | Evaluation::Infeasible(o) => o,
        }
    }

    pub fn into_objectives(self) -> Vec<f64> {
        match self {
            Evaluation::Feasible(o) | Evaluation::Infeasible(o) => o,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Evaluation::Feasible(_))
    }
}

/// A black-box cost function over a box-bounded parameter space.
pub trait CostFunction: Sync {
    fn n_pars(&self) -> usize;
    fn n_objectives(&self) -> usize;
    fn p_min(&self) -> &[f64];
    fn p_max(&self) -> &[f64];
    fn evaluate(&self, p: &[f64]) -> Evaluation;
}

/// Problem description handed to the optimizer: bounds plus the evaluator.
pub struct ProblemSpec<'a> {
    pub n_pars: usize,
    pub n_objectives: usize,
    pub p_min: Vec<f64>,
    pub p_max: Vec<f64>,
    pub cost: &'a dyn CostFunction,
}

impl<'a> ProblemSpec<'a> {
    pub fn new(cost: &'a dyn CostFunction) -> Self {
        ProblemSpec {
            n_pars: cost.n_pars(),
            n_objectives: cost.n_objectives(),
            p_min: cost.p_min().to_vec(),
            p_max: cost.p_max().to_vec(),
            cost,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_pars == 0 {
            return Err(invalid_arg!("problem has no parameters"));
        }
        if self.n_objectives == 0 {
            return Err(invalid_arg!("problem has no objectives"));
        }
        if self.p_min.len() != self.n_pars || self.p_max.len() != self.n_pars {
            return Err(invalid_arg!(
                "bound vectors must have length n_pars = {}",
                self.n_pars
            ));
        }
        for i in 0..self.n_pars {
            if !self.p_min[i].is_finite() || !self.p_max[i].is_finite() {
                return Err(invalid_arg!("bounds must be finite (parameter {i})"));
            }
            if self.p_min[i] > self.p_max[i] {
                return Err(invalid_arg!(
                    "lower bound exceeds upper bound for parameter {i}"
                ));
            }
        }
        Ok(())
    }
}

/// One candidate design. `rank` and `crowding` are populated by
/// `fast_nondominated_sort` / `crowding_distance` and are meaningless outside
/// the population they were computed in.
#[derive(Clone, Debug)]
pub struct Individual {
    pub p: Vec<f64>,
    pub o: Vec<f64>,
    pub rank: Option<usize>,
    pub crowding: Option<f64>,
}

impl Individual {
    pub fn new(p: Vec<f64>, o: Vec<f64>) -> Self {
        Individual {
            p,
            o,
            rank: None,
            crowding: None,
        }
    }
}

/// A generation of candidates.
#[derive(Clone, Debug, Default)]
pub struct Population {
    pub members: Vec<Individual>,
    pub generation: usize,
}

/// Pareto dominance for minimization: `a` dominates `b` when it is no worse
/// in every objective and strictly better in at least one. Equal vectors do
/// not dominate each other.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() || a.is_empty() {
        return Err(invalid_arg!(
            "dominance requires equal-length, non-empty objective vectors ({} vs {})",
            a.len(),
            b.len()
        ));
    }
    Ok(dominates_unchecked(a, b))
}

#[inline]
fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Partitions `pop` into non-dominated fronts (indices into `pop`) and
/// assigns each member its front number. Front 0 is the non-dominated set;
/// front k+1 is non-dominated once fronts 0..=k are removed.
pub fn fast_nondominated_sort(pop: &mut [Individual]) -> Vec<Vec<usize>> {
    let n = pop.len();
    if n == 0 {
        return Vec::new();
    }
    let mut dominated: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut n_dominators = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates_unchecked(&pop[i].o, &pop[j].o) {
                dominated[i].push(j);
                n_dominators[j] += 1;
            } else if dominates_unchecked(&pop[j].o, &pop[i].o) {
                dominated[j].push(i);
                n_dominators[i] += 1;
            }
        }
    }
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| n_dominators[i] == 0).collect();
    let mut rank = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            pop[i].rank = Some(rank);
            for &j in &dominated[i] {
                n_dominators[j] -= 1;
                if n_dominators[j] == 0 {
                    next.push(j);
                }
            }
        }
        fronts.push(std::mem::replace(&mut current, next));
        rank += 1;
    }
    fronts
}

/// Assigns crowding distances to the members of one front. Boundary members
/// of each objective receive +inf; interior members accumulate the normalized
/// gap between their neighbors. An objective with zero range across the front
/// is skipped entirely (it contributes nothing, including at the boundaries).
pub fn crowding_distance(pop: &mut [Individual], front: &[usize]) {
    for &i in front {
        pop[i].crowding = Some(0.0);
    }
    if front.is_empty() {
        return;
    }
    let m = pop[front[0]].o.len();
    let mut order: Vec<usize> = front.to_vec();
    for k in 0..m {
        order.sort_by(|&a, &b| pop[a].o[k].total_cmp(&pop[b].o[k]).then(a.cmp(&b)));
        let lo = pop[*order.first().unwrap()].o[k];
        let hi = pop[*order.last().unwrap()].o[k];
        let range = hi - lo;
        if range == 0.0 {
            continue;
        }
        pop[order[0]].crowding = Some(f64::INFINITY);
        pop[*order.last().unwrap()].crowding = Some(f64::INFINITY);
        for w in 1..order.len().saturating_sub(1) {
            let gap = pop[order[w + 1]].o[k] - pop[order[w - 1]].o[k];
            if let Some(c) = pop[order[w]].crowding.as_mut() {
                *c += gap / range;
            }
        }
    }
}

/// Binary-tournament comparison: lower rank wins, then larger crowding, then
/// the smaller index (a deterministic tie-break).
fn better_of(pop: &[Individual], i: usize, j: usize) -> usize {
    let (ri, rj) = (
        pop[i].rank.expect("rank assigned"),
        pop[j].rank.expect("rank assigned"),
    );
    if ri != rj {
        return if ri < rj { i } else { j };
    }
    let (ci, cj) = (
        pop[i].crowding.expect("crowding assigned"),
        pop[j].crowding.expect("crowding assigned"),
    );
    match ci.total_cmp(&cj) {
        std::cmp::Ordering::Greater => i,
        std::cmp::Ordering::Less => j,
        std::cmp::Ordering::Equal => i.min(j),
    }
}

/// Simulated binary crossover on one parent pair. Offspring coordinates may
/// leave the box and are clipped back onto it. Per coordinate: a fair coin
/// decides participation, then (if the parents differ there) one variate
/// shapes the spread and a second coin assigns which child gets the lower
/// value.
pub fn sbx_crossover<R: Rng>(
    a: &[f64],
    b: &[f64],
    p_min: &[f64],
    p_max: &[f64],
    eta: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    let exponent = 1.0 / (eta + 1.0);
    for i in 0..a.len() {
        if rng.gen::<f64>() > 0.5 {
            continue;
        }
        let (x1, x2) = (a[i], b[i]);
        if (x1 - x2).abs() <= 1e-14 {
            continue;
        }
        let (lo, hi) = (x1.min(x2), x1.max(x2));
        let u: f64 = rng.gen();
        let beta_q = if u <= 0.5 {
            (2.0 * u).powf(exponent)
        } else {
            (1.0 / (2.0 * (1.0 - u))).powf(exponent)
        };
        let mean = 0.5 * (lo + hi);
        let half_spread = 0.5 * beta_q * (hi - lo);
        let mut y1 = (mean - half_spread).clamp(p_min[i], p_max[i]);
        let mut y2 = (mean + half_spread).clamp(p_min[i], p_max[i]);
        if rng.gen::<f64>() <= 0.5 {
            std::mem::swap(&mut y1, &mut y2);
        }
        c1[i] = y1;
        c2[i] = y2;
    }
    (c1, c2)
}

/// Polynomial mutation: each coordinate mutates with probability `p_mut`,
/// perturbed by a polynomially-distributed step scaled to the box width,
/// then clipped back onto the box.
pub fn polynomial_mutation<R: Rng>(
    p: &mut [f64],
    p_min: &[f64],
    p_max: &[f64],
    eta: f64,
    p_mut: f64,
    rng: &mut R,
) {
    let exponent = 1.0 / (eta + 1.0);
    for i in 0..p.len() {
        if rng.gen::<f64>() >= p_mut {
            continue;
        }
        let u: f64 = rng.gen();
        let delta = if u < 0.5 {
            (2.0 * u).powf(exponent) - 1.0
        } else {
            1.0 - (2.0 * (1.0 - u)).powf(exponent)
        };
        p[i] = (p[i] + delta * (p_max[i] - p_min[i])).clamp(p_min[i], p_max[i]);
    }
}

fn evaluate_batch(spec: &ProblemSpec<'_>, candidates: &[Vec<f64>]) -> Vec<Vec<f64>> {
    candidates
        .par_iter()
        .map(|p| spec.cost.evaluate(p).into_objectives())
        .collect()
}

/// Ranks `pop` and assigns crowding distances front by front.
fn rank_population(pop: &mut [Individual]) -> Vec<Vec<usize>> {
    let fronts = fast_nondominated_sort(pop);
    for front in &fronts {
        crowding_distance(pop, front);
    }
    fronts
}

/// Selects up to `n` members of `pop` by (rank, crowding, index), the same
/// ordering used for environmental survival. Returns indices into `pop`.
fn select_best(pop: &mut [Individual], n: usize) -> Vec<usize> {
    let fronts = rank_population(pop);
    let mut picked = Vec::with_capacity(n.min(pop.len()));
    for front in fronts {
        if picked.len() >= n {
            break;
        }
        if picked.len() + front.len() <= n {
            picked.extend(front);
        } else {
            let mut by_crowding = front;
            by_crowding.sort_by(|&a, &b| {
                pop[b]
                    .crowding
                    .unwrap()
                    .total_cmp(&pop[a].crowding.unwrap())
                    .then(a.cmp(&b))
            });
            by_crowding.truncate(n - picked.len());
            picked.extend(by_crowding);
        }
    }
    picked
}

/// Runs the optimizer from a fresh RNG seeded with `seed`.
/// See [`evolve_with_rng`].
pub fn evolve(
    spec: &ProblemSpec<'_>,
    n_pop: usize,
    n_gen: usize,
    seed: u64,
    initial: Option<&[Individual]>,
) -> Result<(Population, Vec<Individual>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    evolve_with_rng(spec, n_pop, n_gen, &mut rng, initial)
}

/// Runs `n_gen` generations with population size `n_pop` and returns the
/// final ranked population together with the archive of every evaluation
/// performed, in evaluation order.
///
/// If `initial` is given, its best members (by rank, then crowding) seed the
/// initial population without being re-evaluated or archived; any remaining
/// slots are filled with uniform random designs. Each generation produces
/// `n_pop` offspring via binary tournament, crossover and mutation, and the
/// best `n_pop` of the combined parent+offspring pool survive.
pub fn evolve_with_rng(
    spec: &ProblemSpec<'_>,
    n_pop: usize,
    n_gen: usize,
    rng: &mut ChaCha8Rng,
    initial: Option<&[Individual]>,
) -> Result<(Population, Vec<Individual>)> {
    spec.validate()?;
    if n_pop < 4 || n_pop % 2 != 0 {
        return Err(invalid_arg!("population size must be even and at least 4"));
    }
    for ind in initial.unwrap_or(&[]) {
        if ind.p.len() != spec.n_pars || ind.o.len() != spec.n_objectives {
            return Err(invalid_arg!(
                "seed individual has wrong dimensions ({} pars, {} objectives)",
                ind.p.len(),
                ind.o.len()
            ));
        }
    }

    let mut archive: Vec<Individual> = Vec::new();
    let mut members: Vec<Individual> = Vec::with_capacity(n_pop);

    // Seed from the provided designs, best first, without re-evaluation.
    if let Some(init) = initial {
        if !init.is_empty() {
            let mut seeded: Vec<Individual> = init.to_vec();
            let picked = select_best(&mut seeded, n_pop);
            members.extend(picked.into_iter().map(|i| {
                let mut ind = seeded[i].clone();
                ind.rank = None;
                ind.crowding = None;
                ind
            }));
        }
    }

    // Fill the remainder with uniform random designs (one draw per
    // coordinate, in coordinate order) and evaluate them.
    let fresh: Vec<Vec<f64>> = (members.len()..n_pop)
        .map(|_| {
            (0..spec.n_pars)
                .map(|d| spec.p_min[d] + rng.gen::<f64>() * (spec.p_max[d] - spec.p_min[d]))
                .collect()
        })
        .collect();
    if !fresh.is_empty() {
        let objectives = evaluate_batch(spec, &fresh);
        for (p, o) in fresh.into_iter().zip(objectives) {
            let ind = Individual::new(p, o);
            archive.push(ind.clone());
            members.push(ind);
        }
    }

    let mut pop = Population {
        members,
        generation: 0,
    };

    for gen in 0..n_gen {
        rank_population(&mut pop.members);

        // Variation: n_pop/2 parent pairs -> n_pop children.
        let mut children_p: Vec<Vec<f64>> = Vec::with_capacity(n_pop);
        for _ in 0..n_pop / 2 {
            let a = better_of(
                &pop.members,
                rng.gen_range(0..n_pop),
                rng.gen_range(0..n_pop),
            );
            let b = better_of(
                &pop.members,
                rng.gen_range(0..n_pop),
                rng.gen_range(0..n_pop),
            );
            let (mut c1, mut c2) = if rng.gen::<f64>() <= P_CROSSOVER {
                sbx_crossover(
                    &pop.members[a].p,
                    &pop.members[b].p,
                    &spec.p_min,
                    &spec.p_max,
                    SBX_ETA,
                    rng,
                )
            } else {
                (pop.members[a].p.clone(), pop.members[b].p.clone())
            };
            let p_mut = 1.0 / spec.n_pars as f64;
            polynomial_mutation(&mut c1, &spec.p_min, &spec.p_max, PM_ETA, p_mut, rng);
            polynomial_mutation(&mut c2, &spec.p_min, &spec.p_max, PM_ETA, p_mut, rng);
            children_p.push(c1);
            children_p.push(c2);
        }

        let objectives = evaluate_batch(spec, &children_p);
        let mut combined = std::mem::take(&mut pop.members);
        for (p, o) in children_p.into_iter().zip(objectives) {
            let child = Individual::new(p, o);
            archive.push(child.clone());
            combined.push(child);
        }

        let survivors = select_best(&mut combined, n_pop);
        pop.members = survivors.into_iter().map(|i| combined[i].clone()).collect();
        pop.generation = gen + 1;
    }

    rank_population(&mut pop.members);
    Ok((pop, archive))
}

/// Indices of the non-dominated members of `archive`, in archive order.
/// Duplicate objective vectors are mutually non-dominating, so all copies
/// survive. Two-objective inputs use an `O(n log n)` sweep.
pub fn pareto_indices(archive: &[Individual]) -> Vec<usize> {
    let n = archive.len();
    if n == 0 {
        return Vec::new();
    }
    let m = archive[0].o.len();
    let mut keep = vec![false; n];
    if m == 2 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            archive[a].o[0]
                .total_cmp(&archive[b].o[0])
                .then(archive[a].o[1].total_cmp(&archive[b].o[1]))
                .then(a.cmp(&b))
        });
        // Sweep groups of equal first objective: a point survives when its
        // second objective matches the group minimum and strictly improves on
        // everything with a strictly smaller first objective.
        let mut best_second = f64::INFINITY;
        let mut g = 0;
        while g < n {
            let mut h = g;
            while h < n && archive[order[h]].o[0] == archive[order[g]].o[0] {
                h += 1;
            }
            let group_min = archive[order[g]].o[1];
            if group_min < best_second {
                for &i in &order[g..h] {
                    if archive[i].o[1] == group_min {
                        keep[i] = true;
                    }
                }
                best_second = group_min;
            }
            g = h;
        }
    } else {
        for i in 0..n {
            keep[i] = !(0..n)
                .any(|j| j != i && dominates_unchecked(&archive[j].o, &archive[i].o));
        }
    }
    (0..n).filter(|&i| keep[i]).collect()
}

/// Splits the non-dominated subset of `archive` into parallel lists of
/// parameter vectors and objective vectors, in archive order.
pub fn extract_pareto(archive: &[Individual]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let idx = pareto_indices(archive);
    let set = idx.iter().map(|&i| archive[i].p.clone()).collect();
    let front = idx.iter().map(|&i| archive[i].o.clone()).collect();
    (set, front)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind(o: &[f64]) -> Individual {
        Individual::new(vec![0.0], o.to_vec())
    }

    #[test]
    fn dominance_basic_cases() {
        assert!(dominates(&[1.0, 1.0], &[2.0, 2.0]).unwrap());
        assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[2.0, 1.0]).unwrap());
        assert!(!dominates(&[2.0, 1.0], &[1.0, 2.0]).unwrap());
        assert!(dominates(&[1.0, 2.0], &[1.0, 3.0]).unwrap());
        assert!(dominates(&[1.0], &[2.0]).unwrap());
    }

    #[test]
    fn dominance_rejects_mismatched_lengths() {
        assert!(dominates(&[1.0, 2.0], &[1.0]).is_err());
        assert!(dominates(&[], &[]).is_err());
    }

    #[test]
    fn sort_splits_fronts() {
        let mut pop = vec![ind(&[1.0, 2.0]), ind(&[2.0, 1.0]), ind(&[3.0, 3.0])];
        let fronts = fast_nondominated_sort(&mut pop);
        assert_eq!(fronts, vec![vec![0, 1], vec![2]]);
        assert_eq!(pop[0].rank, Some(0));
        assert_eq!(pop[1].rank, Some(0));
        assert_eq!(pop[2].rank, Some(1));
    }

    #[test]
    fn sort_handles_duplicates_as_mutually_nondominated() {
        let mut pop = vec![ind(&[1.0, 1.0]), ind(&[1.0, 1.0]), ind(&[0.5, 2.0])];
        let fronts = fast_nondominated_sort(&mut pop);
        assert_eq!(fronts, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn sort_of_empty_population() {
        let mut pop: Vec<Individual> = Vec::new();
        assert!(fast_nondominated_sort(&mut pop).is_empty());
    }

    #[test]
    fn crowding_on_three_point_front() {
        let mut pop = vec![ind(&[0.0, 2.0]), ind(&[1.0, 1.0]), ind(&[2.0, 0.0])];
        let front = vec![0, 1, 2];
        crowding_distance(&mut pop, &front);
        assert_eq!(pop[0].crowding, Some(f64::INFINITY));
        assert_eq!(pop[1].crowding, Some(2.0));
        assert_eq!(pop[2].crowding, Some(f64::INFINITY));
    }

    #[test]
    fn crowding_skips_degenerate_objective() {
        // Second objective has zero range: only the first contributes, and
        // the middle point picks up its normalized neighbor gap.
        let mut pop = vec![ind(&[0.0, 1.0]), ind(&[1.0, 1.0]), ind(&[4.0, 1.0])];
        let front = vec![0, 1, 2];
        crowding_distance(&mut pop, &front);
        assert_eq!(pop[0].crowding, Some(f64::INFINITY));
        assert_eq!(pop[1].crowding, Some(1.0));
        assert_eq!(pop[2].crowding, Some(f64::INFINITY));
    }

    #[test]
    fn crowding_pair_is_infinite() {
        let mut pop = vec![ind(&[0.0, 1.0]), ind(&[1.0, 0.0])];
        crowding_distance(&mut pop, &[0, 1]);
        assert_eq!(pop[0].crowding, Some(f64::INFINITY));
        assert_eq!(pop[1].crowding, Some(f64::INFINITY));
    }

    #[test]
    fn extract_pareto_drops_dominated() {
        let archive = vec![ind(&[1.0, 2.0]), ind(&[2.0, 1.0]), ind(&[2.0, 2.0])];
        let (_, front) = extract_pareto(&archive);
        assert_eq!(front, vec![vec![1.0, 2.0], vec![2.0, 1.0]]);
    }

    #[test]
    fn extract_pareto_keeps_duplicates() {
        let archive = vec![
            ind(&[1.0, 2.0]),
            ind(&[1.0, 2.0]),
            ind(&[0.5, 3.0]),
            ind(&[1.5, 2.0]),
        ];
        let idx = pareto_indices(&archive);
        assert_eq!(idx, vec![0, 1, 2]);
    }

    #[test]
    fn extract_pareto_matches_quadratic_filter() {
        // Cross-check the two-objective sweep against the definition.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let archive: Vec<Individual> = (0..40)
                .map(|_| {
                    // Coarse grid so duplicates and ties occur often.
                    let a = (rng.gen::<f64>() * 5.0).round();
                    let b = (rng.gen::<f64>() * 5.0).round();
                    ind(&[a, b])
                })
                .collect();
            let sweep = pareto_indices(&archive);
            let brute: Vec<usize> = (0..archive.len())
                .filter(|&i| {
                    !(0..archive.len()).any(|j| {
                        j != i && dominates(&archive[j].o, &archive[i].o).unwrap()
                    })
                })
                .collect();
            assert_eq!(sweep, brute);
        }
    }

    #[test]
    fn sbx_respects_bounds_and_determinism() {
        let a = vec![0.2, 0.8, 0.5];
        let b = vec![0.9, 0.1, 0.5];
        let lo = vec![0.0; 3];
        let hi = vec![1.0; 3];
        let mut rng1 = ChaCha8Rng::seed_from_u64(3);
        let mut rng2 = ChaCha8Rng::seed_from_u64(3);
        let (c1, c2) = sbx_crossover(&a, &b, &lo, &hi, SBX_ETA, &mut rng1);
        let (d1, d2) = sbx_crossover(&a, &b, &lo, &hi, SBX_ETA, &mut rng2);
        assert_eq!(c1, d1);
        assert_eq!(c2, d2);
        for v in c1.iter().chain(&c2) {
            assert!((0.0..=1.0).contains(v));
        }
        // Identical third coordinate passes through unchanged.
        assert_eq!(c1[2], 0.5);
        assert_eq!(c2[2], 0.5);
    }

    #[test]
    fn mutation_respects_bounds() {
        let lo = vec![-1.0; 4];
        let hi = vec![2.0; 4];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let mut p = vec![0.0, 1.0, -1.0, 2.0];
            polynomial_mutation(&mut p, &lo, &hi, PM_ETA, 1.0, &mut rng);
            for (v, (l, h)) in p.iter().zip(lo.iter().zip(&hi)) {
                assert!(v >= l && v <= h);
            }
        }
    }

    struct Sphere;
    impl CostFunction for Sphere {
        fn n_pars(&self) -> usize {
            2
        }
        fn n_objectives(&self) -> usize {
            2
        }
        fn p_min(&self) -> &[f64] {
            &[-1.0, -1.0]
        }
        fn p_max(&self) -> &[f64] {
            &[1.0, 1.0]
        }
        fn evaluate(&self, p: &[f64]) -> Evaluation {
            // Two quadratic bowls with optima at (-0.5, 0) and (0.5, 0).
            let f1 = (p[0] + 0.5).powi(2) + p[1].powi(2);
            let f2 = (p[0] - 0.5).powi(2) + p[1].powi(2);
            Evaluation::Feasible(vec![f1, f2])
        }
    }

    #[test]
    fn evolve_archives_every_evaluation() {
        let cost = Sphere;
        let spec = ProblemSpec::new(&cost);
        let (pop, archive) = evolve(&spec, 8, 5, 42, None).unwrap();
        assert_eq!(pop.members.len(), 8);
        assert_eq!(archive.len(), 8 * (5 + 1));
        assert_eq!(pop.generation, 5);
    }

    #[test]
    fn evolve_is_deterministic_for_a_seed() {
        let cost = Sphere;
        let spec = ProblemSpec::new(&cost);
        let (pop1, arch1) = evolve(&spec, 8, 5, 9, None).unwrap();
        let (pop2, arch2) = evolve(&spec, 8, 5, 9, None).unwrap();
        for (a, b) in pop1.members.iter().zip(&pop2.members) {
            assert_eq!(a.p, b.p);
            assert_eq!(a.o, b.o);
        }
        assert_eq!(arch1.len(), arch2.len());
        for (a, b) in arch1.iter().zip(&arch2) {
            assert_eq!(a.p, b.p);
        }
    }

    #[test]
    fn evolve_seeded_start_skips_reevaluation() {
        let cost = Sphere;
        let spec = ProblemSpec::new(&cost);
        // More seeds than slots: only the best-ranked are kept, none are
        // re-evaluated, so the archive holds exactly the offspring.
        let seeds: Vec<Individual> = (0..12)
            .map(|i| {
                let x = -1.0 + 2.0 * (i as f64) / 11.0;
                let o = cost.evaluate(&[x, 0.1]).into_objectives();
                Individual::new(vec![x, 0.1], o)
            })
            .collect();
        let (pop, archive) = evolve(&spec, 8, 3, 5, Some(&seeds)).unwrap();
        assert_eq!(pop.members.len(), 8);
        assert_eq!(archive.len(), 8 * 3);
    }

    #[test]
    fn evolve_rejects_odd_population() {
        let cost = Sphere;
        let spec = ProblemSpec::new(&cost);
        assert!(evolve(&spec, 7, 1, 0, None).is_err());
        assert!(evolve(&spec, 2, 1, 0, None).is_err());
    }
}
