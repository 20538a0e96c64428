//! Property tests over the public optimization, indicator, and scaling APIs.

use nnadapt::indicators::{hypervolume_2d, igd};
use nnadapt::moea::{
    dominates, evolve, extract_pareto, CostFunction, Evaluation, Individual, ProblemSpec,
};
use nnadapt::problems::zdt::{ZdtProblem, ZdtVariant};
use nnadapt::surrogate::Scaling;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Objective coordinates drawn from a mix of a coarse grid (to force ties)
/// and the continuous unit interval.
fn coord() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(0.0),
        Just(0.25),
        Just(0.5),
        Just(1.0),
        (0.0..1.0f64),
    ]
}

fn point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(coord(), dim)
}

fn point_set(dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(point(dim), 1..=max)
}

proptest! {
    #[test]
    fn dominance_is_irreflexive_antisymmetric_and_transitive(
        (a, b, c) in (2usize..=3).prop_flat_map(|m| (point(m), point(m), point(m)))
    ) {
        prop_assert!(!dominates(&a, &a).unwrap());
        if dominates(&a, &b).unwrap() {
            prop_assert!(!dominates(&b, &a).unwrap());
        }
        if dominates(&a, &b).unwrap() && dominates(&b, &c).unwrap() {
            prop_assert!(dominates(&a, &c).unwrap());
        }
    }

    #[test]
    fn igd_is_zero_on_itself_and_monotone_in_the_candidate_set(
        (reference, candidates, extra) in (2usize..=3)
            .prop_flat_map(|m| (point_set(m, 12), point_set(m, 12), point_set(m, 4)))
    ) {
        prop_assert_eq!(igd(&reference, &reference).unwrap(), 0.0);
        let base = igd(&reference, &candidates).unwrap();
        prop_assert!(base >= 0.0);
        let mut widened = candidates.clone();
        widened.extend(extra);
        let after = igd(&reference, &widened).unwrap();
        prop_assert!(after <= base + 1e-12, "{after} > {base}");
    }

    #[test]
    fn hypervolume_is_permutation_invariant_and_monotone(
        front in point_set(2, 20),
        extra in point(2),
        shuffle_seed in any::<u64>(),
        r0 in 0.3..1.2f64,
        r1 in 0.3..1.2f64,
    ) {
        let r = vec![r0, r1];
        let base = hypervolume_2d(&front, &r).unwrap();

        let mut shuffled = front.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle_seed));
        prop_assert_eq!(hypervolume_2d(&shuffled, &r).unwrap(), base);

        let mut widened = front.clone();
        widened.push(extra);
        let after = hypervolume_2d(&widened, &r).unwrap();
        prop_assert!(after + 1e-12 >= base, "{after} < {base}");
    }

    #[test]
    fn input_scaling_maps_the_box_linearly_onto_the_unit_cube(
        (lo, width, t) in (1usize..=4).prop_flat_map(|n| (
            prop::collection::vec(-5.0..5.0f64, n),
            prop::collection::vec(0.1..3.0f64, n),
            prop::collection::vec(0.0..=1.0f64, n),
        ))
    ) {
        let hi: Vec<f64> = lo.iter().zip(&width).map(|(l, w)| l + w).collect();
        let scaling = Scaling::new(lo.clone(), hi.clone(), vec![0.0], vec![1.0]).unwrap();
        let p: Vec<f64> = lo
            .iter()
            .zip(&width)
            .zip(&t)
            .map(|((l, w), frac)| l + frac * w)
            .collect();
        let mut scaled = vec![0.0; p.len()];
        scaling.scale_input_into(&p, &mut scaled);
        for (s, frac) in scaled.iter().zip(&t) {
            prop_assert!((s - (2.0 * frac - 1.0)).abs() <= 1e-9);
            prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(s));
        }
    }

    #[test]
    fn output_scaling_round_trips(
        (o_lo, o_range, v) in (1usize..=3).prop_flat_map(|m| (
            prop::collection::vec(-10.0..10.0f64, m),
            prop::collection::vec(0.1..100.0f64, m),
            prop::collection::vec(-10.0..10.0f64, m),
        ))
    ) {
        let scaling = Scaling::new(vec![0.0], vec![1.0], o_lo, o_range).unwrap();
        let back = scaling.unscale_output(&scaling.scale_output(&v));
        for (x, y) in v.iter().zip(&back) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn evolve_never_leaves_the_bounds(
        (lo, width, seed) in (1usize..=3).prop_flat_map(|n| (
            prop::collection::vec(-5.0..5.0f64, n),
            prop::collection::vec(0.1..3.0f64, n),
            any::<u64>(),
        ))
    ) {
        struct TwoBowls {
            lo: Vec<f64>,
            hi: Vec<f64>,
        }
        impl CostFunction for TwoBowls {
            fn n_pars(&self) -> usize {
                self.lo.len()
            }
            fn n_objectives(&self) -> usize {
                2
            }
            fn p_min(&self) -> &[f64] {
                &self.lo
            }
            fn p_max(&self) -> &[f64] {
                &self.hi
            }
            fn evaluate(&self, p: &[f64]) -> Evaluation {
                let d = |target: &[f64]| -> f64 {
                    p.iter()
                        .zip(target)
                        .map(|(x, c)| (x - c) * (x - c))
                        .sum()
                };
                Evaluation::Feasible(vec![d(&self.lo), d(&self.hi)])
            }
        }
        let hi: Vec<f64> = lo.iter().zip(&width).map(|(l, w)| l + w).collect();
        let cost = TwoBowls { lo: lo.clone(), hi: hi.clone() };
        let spec = ProblemSpec::new(&cost);
        let (_, archive) = evolve(&spec, 8, 3, seed, None).unwrap();
        prop_assert_eq!(archive.len(), 8 * 4);
        for ind in &archive {
            for ((x, l), h) in ind.p.iter().zip(&lo).zip(&hi) {
                prop_assert!(l <= x && x <= h, "{x} outside [{l}, {h}]");
            }
        }
    }
}

#[test]
fn cumulative_front_hypervolume_never_decreases() {
    let problem = ZdtProblem::new(ZdtVariant::Zdt1);
    let spec = ProblemSpec::new(&problem);
    let (n_pop, n_gen) = (40, 30);
    let (_, archive) = evolve(&spec, n_pop, n_gen, 7, None).unwrap();
    assert_eq!(archive.len(), n_pop * (n_gen + 1));

    // Reference point fixed from the full archive so every prefix measures
    // against the same box.
    let r = archive.iter().fold(vec![f64::NEG_INFINITY; 2], |mut r, ind| {
        r[0] = r[0].max(ind.o[0]);
        r[1] = r[1].max(ind.o[1]);
        r
    });

    let mut previous = 0.0;
    for gen in 0..=n_gen {
        let prefix: Vec<Individual> = archive[..n_pop * (gen + 1)].to_vec();
        let (_, front) = extract_pareto(&prefix);
        let hv = hypervolume_2d(&front, &r).unwrap();
        assert!(
            hv + 1e-12 >= previous,
            "generation {gen}: hypervolume fell from {previous} to {hv}"
        );
        previous = hv;
    }
    assert!(previous > 0.0);
}
