//! Benchmark and application cost functions.

pub mod ejector;
pub mod zdt;

pub use ejector::{
    check_constraints, default_bounds, eval_ejector, penalty_cons, penalty_mesh, wall_scores,
    EjectorDesign, EjectorProblem, PenaltyWeights, SyntheticObjectiveModel,
};
pub use zdt::{analytic_front, analytic_pareto, ZdtProblem, ZdtVariant};
