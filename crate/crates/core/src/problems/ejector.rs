//! Constrained ejector-style shape optimization: fourteen parameters describe
//! two section lengths and six wall control points. A design either violates
//! the explicit constraints (branch 1), produces a wall polygon too distorted
//! to evaluate (branch 2), or is scored by a smooth synthetic efficiency
//! proxy (branch 3). Penalty branches return a pair of identical values above
//! one so they are dominated by every plainly evaluated design.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::invalid_arg;
use crate::moea::{CostFunction, Evaluation};

/// Wall control points: two on the converging section, four on the diffuser.
pub const N_POINTS: usize = 6;
/// Total parameter count: two lengths plus an (x, r) pair per control point.
pub const N_PARS: usize = 2 + 2 * N_POINTS;

/// Decoded design: section lengths in meters plus the wall control polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct EjectorDesign {
    pub l_c: f64,
    pub l_d: f64,
    pub points: Vec<(f64, f64)>,
}

impl EjectorDesign {
    /// Decodes the flat parameter vector (l_c, l_d, x_1, r_1, ..., x_6, r_6).
    pub fn from_parameters(p: &[f64]) -> Result<Self> {
        if p.len() != N_PARS {
            return Err(invalid_arg!(
                "ejector design needs {N_PARS} parameters, got {}",
                p.len()
            ));
        }
        let points = (0..N_POINTS).map(|i| (p[2 + 2 * i], p[3 + 2 * i])).collect();
        Ok(EjectorDesign {
            l_c: p[0],
            l_d: p[1],
            points,
        })
    }

    pub fn to_parameters(&self) -> Vec<f64> {
        let mut p = vec![self.l_c, self.l_d];
        for &(x, r) in &self.points {
            p.push(x);
            p.push(r);
        }
        p
    }

    /// Total length l_t of the shaped part.
    pub fn total_length(&self) -> f64 {
        self.l_c + self.l_d
    }

    /// A flat-walled design: control points evenly spaced in x at constant
    /// radius, which has ideal wall-quality scores.
    pub fn straight_wall(l_c: f64, l_d: f64) -> Self {
        let points = (0..N_POINTS)
            .map(|i| (0.015 + 0.025 * i as f64, 0.0075))
            .collect();
        EjectorDesign { l_c, l_d, points }
    }
}

/// Penalty weights and the total-length budget.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PenaltyWeights {
    pub beta_length: f64,
    pub beta_points: f64,
    pub beta_skew: f64,
    pub beta_non_ortho: f64,
    pub l_max: f64,
}

impl Default for PenaltyWeights {
    fn default() -> Self {
        PenaltyWeights {
            beta_length: 1.0,
            beta_points: 10.0,
            beta_skew: 0.1,
            beta_non_ortho: 0.1,
            l_max: 0.22,
        }
    }
}

impl PenaltyWeights {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.beta_length,
            self.beta_points,
            self.beta_skew,
            self.beta_non_ortho,
            self.l_max,
        ];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(invalid_arg!("penalty weights must be finite and non-negative"));
        }
        Ok(())
    }
}

/// Outcome of the explicit constraint check.
#[derive(Clone, Debug)]
pub struct ConstraintReport {
    /// l_c + l_d - l_max; violated only when strictly positive.
    pub length_excess: f64,
    /// Positive magnitudes x_{i-1} - x_i for every out-of-order pair.
    pub ordering_violations: Vec<f64>,
}

impl ConstraintReport {
    pub fn is_feasible(&self) -> bool {
        self.length_excess <= 0.0 && self.ordering_violations.is_empty()
    }
}

/// Checks the total-length budget (non-strict) and that the control points
/// are ordered along the x axis (non-strictly monotone).
pub fn check_constraints(design: &EjectorDesign, w: &PenaltyWeights) -> ConstraintReport {
    let length_excess = design.total_length() - w.l_max;
    let ordering_violations = design
        .points
        .windows(2)
        .filter_map(|pair| {
            let gap = pair[0].0 - pair[1].0;
            (gap > 0.0).then_some(gap)
        })
        .collect();
    ConstraintReport {
        length_excess,
        ordering_violations,
    }
}

/// Constraint penalty: 1 plus the weighted length excess (when positive) and
/// the weighted sum of ordering violations.
pub fn penalty_cons(design: &EjectorDesign, w: &PenaltyWeights) -> f64 {
    let report = check_constraints(design, w);
    1.0 + w.beta_length * report.length_excess.max(0.0)
        + w.beta_points * report.ordering_violations.iter().sum::<f64>()
}

/// Wall-quality penalty from the two non-negative quality indicators.
pub fn penalty_mesh(gamma_skew: f64, gamma_non_ortho: f64, w: &PenaltyWeights) -> Result<f64> {
    if gamma_skew < 0.0 || gamma_non_ortho < 0.0 {
        return Err(invalid_arg!(
            "quality indicators must be non-negative (got {gamma_skew}, {gamma_non_ortho})"
        ));
    }
    Ok(1.0 + w.beta_skew * gamma_skew + w.beta_non_ortho * gamma_non_ortho)
}

/// Geometric quality of the wall polygon.
#[derive(Clone, Copy, Debug)]
pub struct WallScores {
    /// Largest turning angle between consecutive segments, radians.
    pub theta_max: f64,
    /// Mean turning angle, radians.
    pub theta_mean: f64,
    /// Skewness-like indicator, 4 * theta_max / pi, in [0, 4].
    pub gamma_skew: f64,
    /// Non-orthogonality-like indicator, 70 * (1 - shortest/longest segment).
    pub gamma_non_ortho: f64,
}

/// Scores the control polygon. Degenerate (zero-length) segments count as
/// worst-case turns; a fully collapsed polygon gets the worst length ratio.
pub fn wall_scores(design: &EjectorDesign) -> WallScores {
    let segments: Vec<(f64, f64)> = design
        .points
        .windows(2)
        .map(|pair| (pair[1].0 - pair[0].0, pair[1].1 - pair[0].1))
        .collect();
    let lengths: Vec<f64> = segments.iter().map(|s| s.0.hypot(s.1)).collect();
    let longest = lengths.iter().fold(0.0f64, |a, &b| a.max(b));
    let shortest = lengths.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let gamma_non_ortho = if longest == 0.0 {
        70.0
    } else {
        70.0 * (1.0 - shortest / longest)
    };
    let mut theta_max = 0.0f64;
    let mut theta_sum = 0.0;
    for j in 1..segments.len() {
        let (u, v) = (segments[j - 1], segments[j]);
        let (lu, lv) = (lengths[j - 1], lengths[j]);
        let theta = if lu == 0.0 || lv == 0.0 {
            PI
        } else {
            ((u.0 * v.0 + u.1 * v.1) / (lu * lv)).clamp(-1.0, 1.0).acos()
        };
        theta_max = theta_max.max(theta);
        theta_sum += theta;
    }
    let theta_mean = theta_sum / (segments.len() - 1) as f64;
    WallScores {
        theta_max,
        theta_mean,
        gamma_skew: 4.0 * theta_max / PI,
        gamma_non_ortho,
    }
}

/// Analytic stand-in for the expensive flow computation. The efficiency proxy
/// rises with total length toward saturation (scale `tau`) and degrades
/// smoothly with the mean wall turning angle; values stay strictly inside
/// (0, 1). The same model owns the wall-quality thresholds that decide
/// whether a design can be evaluated at all.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticObjectiveModel {
    pub tau: f64,
    pub angle_weight: f64,
    pub skew_limit: f64,
    pub non_ortho_limit: f64,
}

impl Default for SyntheticObjectiveModel {
    fn default() -> Self {
        SyntheticObjectiveModel {
            tau: 0.06,
            angle_weight: 0.05,
            skew_limit: 2.0,
            non_ortho_limit: 62.0,
        }
    }
}

impl SyntheticObjectiveModel {
    pub fn validate(&self) -> Result<()> {
        if self.tau <= 0.0 || !self.tau.is_finite() {
            return Err(invalid_arg!("tau must be positive"));
        }
        if self.angle_weight < 0.0 || self.skew_limit < 0.0 || self.non_ortho_limit < 0.0 {
            return Err(invalid_arg!("model limits must be non-negative"));
        }
        Ok(())
    }

    /// Efficiency proxy for a design that passed both gates.
    pub fn eval_proxy(&self, design: &EjectorDesign) -> f64 {
        let scores = wall_scores(design);
        let length_gain = 1.0 - (-design.total_length() / self.tau).exp();
        length_gain / (1.0 + self.angle_weight * scores.theta_mean * scores.theta_mean)
    }

    /// True when the wall polygon is too distorted to evaluate.
    pub fn rejects(&self, scores: &WallScores) -> bool {
        scores.gamma_skew > self.skew_limit || scores.gamma_non_ortho > self.non_ortho_limit
    }
}

/// Three-way dispatch: constraint penalty, wall-quality penalty, or the
/// plain objectives (negated efficiency proxy, total length).
pub fn eval_ejector(
    design: &EjectorDesign,
    w: &PenaltyWeights,
    model: &SyntheticObjectiveModel,
) -> Evaluation {
    let report = check_constraints(design, w);
    if !report.is_feasible() {
        let s = penalty_cons(design, w);
        return Evaluation::Infeasible(vec![s, s]);
    }
    let scores = wall_scores(design);
    if model.rejects(&scores) {
        let s = penalty_mesh(scores.gamma_skew, scores.gamma_non_ortho, w)
            .expect("wall scores are non-negative");
        return Evaluation::Infeasible(vec![s, s]);
    }
    Evaluation::Feasible(vec![-model.eval_proxy(design), design.total_length()])
}

/// The full problem: box bounds plus weights and the stand-in model.
#[derive(Clone, Debug)]
pub struct EjectorProblem {
    p_min: Vec<f64>,
    p_max: Vec<f64>,
    pub weights: PenaltyWeights,
    pub model: SyntheticObjectiveModel,
}

/// Default optimization box. Control-point x windows are staggered along the
/// axis (width 0.03 m, stride 0.025 m) so random designs are usually, but not
/// always, ordered; radii share one physical channel window.
pub fn default_bounds() -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![0.01, 0.08];
    let mut hi = vec![0.05, 0.20];
    for i in 0..N_POINTS {
        lo.push(0.025 * i as f64);
        hi.push(0.025 * i as f64 + 0.03);
        lo.push(0.003);
        hi.push(0.012);
    }
    (lo, hi)
}

impl Default for EjectorProblem {
    fn default() -> Self {
        let (p_min, p_max) = default_bounds();
        EjectorProblem {
            p_min,
            p_max,
            weights: PenaltyWeights::default(),
            model: SyntheticObjectiveModel::default(),
        }
    }
}

impl EjectorProblem {
    pub fn with(
        p_min: Vec<f64>,
        p_max: Vec<f64>,
        weights: PenaltyWeights,
        model: SyntheticObjectiveModel,
    ) -> Result<Self> {
        if p_min.len() != N_PARS || p_max.len() != N_PARS {
            return Err(invalid_arg!("ejector bounds must have length {N_PARS}"));
        }
        weights.validate()?;
        model.validate()?;
        Ok(EjectorProblem {
            p_min,
            p_max,
            weights,
            model,
        })
    }
}

impl CostFunction for EjectorProblem {
    fn n_pars(&self) -> usize {
        N_PARS
    }
    fn n_objectives(&self) -> usize {
        2
    }
    fn p_min(&self) -> &[f64] {
        &self.p_min
    }
    fn p_max(&self) -> &[f64] {
        &self.p_max
    }
    fn evaluate(&self, p: &[f64]) -> Evaluation {
        let design = EjectorDesign::from_parameters(p).expect("14-parameter design vector");
        eval_ejector(&design, &self.weights, &self.model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ordered_design(l_c: f64, l_d: f64, xs: &[f64; N_POINTS]) -> EjectorDesign {
        EjectorDesign {
            l_c,
            l_d,
            points: xs.iter().map(|&x| (x, 0.0075)).collect(),
        }
    }

    #[test]
    fn parameter_roundtrip() {
        let (lo, _) = default_bounds();
        let design = EjectorDesign::from_parameters(&lo).unwrap();
        assert_eq!(design.to_parameters(), lo);
        assert!(EjectorDesign::from_parameters(&lo[1..]).is_err());
    }

    #[test]
    fn length_budget_is_non_strict() {
        let w = PenaltyWeights::default();
        let xs = [0.0, 0.03, 0.06, 0.09, 0.12, 0.15];
        let at_budget = ordered_design(0.09, 0.13, &xs);
        assert!(check_constraints(&at_budget, &w).is_feasible());
        let over = ordered_design(0.1, 0.13, &xs);
        let report = check_constraints(&over, &w);
        assert!(!report.is_feasible());
        assert_relative_eq!(report.length_excess, 0.01, epsilon = 1e-12);
    }

    #[test]
    fn ordering_violations_are_reported() {
        let w = PenaltyWeights::default();
        let design = ordered_design(0.02, 0.13, &[0.1, 0.05, 0.2, 0.25, 0.3, 0.35]);
        let report = check_constraints(&design, &w);
        assert_eq!(report.ordering_violations.len(), 1);
        assert_relative_eq!(report.ordering_violations[0], 0.05, epsilon = 1e-12);
        // Equal consecutive x coordinates are still ordered.
        let flat = ordered_design(0.02, 0.13, &[0.1, 0.1, 0.2, 0.25, 0.3, 0.35]);
        assert!(check_constraints(&flat, &w).is_feasible());
    }

    #[test]
    fn constraint_penalty_hand_computed() {
        let w = PenaltyWeights::default();
        // Length excess of 0.1 and ordered points: 1 + 1.0 * 0.1.
        let long = ordered_design(0.12, 0.2, &[0.0, 0.03, 0.06, 0.09, 0.12, 0.15]);
        assert_relative_eq!(penalty_cons(&long, &w), 1.1, epsilon = 1e-12);
        // One ordering violation of 0.02 within budget: 1 + 10 * 0.02.
        let unordered = ordered_design(0.02, 0.13, &[0.05, 0.03, 0.06, 0.09, 0.12, 0.15]);
        assert_relative_eq!(penalty_cons(&unordered, &w), 1.2, epsilon = 1e-12);
    }

    #[test]
    fn mesh_penalty_hand_computed() {
        let w = PenaltyWeights::default();
        assert_relative_eq!(penalty_mesh(0.0, 0.0, &w).unwrap(), 1.0);
        assert_relative_eq!(penalty_mesh(4.0, 60.0, &w).unwrap(), 7.4, epsilon = 1e-12);
        assert!(penalty_mesh(-0.1, 0.0, &w).is_err());
        assert!(penalty_mesh(0.0, -1.0, &w).is_err());
    }

    #[test]
    fn straight_wall_has_ideal_scores() {
        let design = EjectorDesign::straight_wall(0.02, 0.13);
        let scores = wall_scores(&design);
        assert_relative_eq!(scores.theta_max, 0.0);
        assert_relative_eq!(scores.gamma_skew, 0.0);
        assert_relative_eq!(scores.gamma_non_ortho, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_segment_scores_worst_turn() {
        let mut design = EjectorDesign::straight_wall(0.02, 0.13);
        design.points[1] = design.points[0];
        let scores = wall_scores(&design);
        assert_relative_eq!(scores.theta_max, PI);
        assert_relative_eq!(scores.gamma_skew, 4.0);
    }

    #[test]
    fn default_design_total_length() {
        let design = EjectorDesign::straight_wall(0.02, 0.13);
        let w = PenaltyWeights::default();
        let model = SyntheticObjectiveModel::default();
        let out = eval_ejector(&design, &w, &model);
        assert!(out.is_feasible());
        assert_relative_eq!(out.objectives()[1], 0.15, epsilon = 1e-12);
        // Negated efficiency lands strictly inside (-1, 0).
        assert!(out.objectives()[0] > -1.0 && out.objectives()[0] < 0.0);
    }

    #[test]
    fn dispatch_is_order_consistent() {
        let w = PenaltyWeights::default();
        let model = SyntheticObjectiveModel::default();
        // Violates ordering *and* has a degenerate wall: branch 1 wins.
        let design = ordered_design(0.3, 0.2, &[0.1, 0.05, 0.05, 0.2, 0.25, 0.3]);
        let out = eval_ejector(&design, &w, &model);
        assert!(!out.is_feasible());
        let o = out.objectives();
        assert_eq!(o[0], o[1]);
        assert_relative_eq!(o[0], penalty_cons(&design, &w), epsilon = 1e-12);
    }

    #[test]
    fn proxy_increases_with_diffuser_length() {
        let model = SyntheticObjectiveModel::default();
        let mut previous = 0.0;
        for step in 0..=100 {
            let l_d = 0.08 + 0.12 * step as f64 / 100.0;
            let design = EjectorDesign::straight_wall(0.01, l_d);
            let proxy = model.eval_proxy(&design);
            assert!(proxy >= previous);
            assert!(proxy > 0.0 && proxy < 1.0);
            previous = proxy;
        }
    }

    #[test]
    fn branch_statistics_over_random_box() {
        // Uniform sampling of the default box: roughly a quarter of designs
        // should fail one of the two gates, and every penalty return must be
        // a duplicated value above one.
        let problem = EjectorProblem::default();
        let (lo, hi) = default_bounds();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut infeasible = 0usize;
        let mut branch1 = 0usize;
        let n = 20_000;
        for _ in 0..n {
            let p: Vec<f64> = lo
                .iter()
                .zip(&hi)
                .map(|(&a, &b)| a + rng.gen::<f64>() * (b - a))
                .collect();
            match problem.evaluate(&p) {
                Evaluation::Infeasible(o) => {
                    infeasible += 1;
                    let design = EjectorDesign::from_parameters(&p).unwrap();
                    if !check_constraints(&design, &problem.weights).is_feasible() {
                        branch1 += 1;
                    }
                    assert_eq!(o[0], o[1]);
                    assert!(o[0] > 1.0);
                }
                Evaluation::Feasible(o) => {
                    assert!(o[0] > -1.0 && o[0] < 0.0);
                    assert!(o[1] > 0.0 && o[1] <= problem.weights.l_max);
                }
            }
        }
        let rate = infeasible as f64 / n as f64;
        assert!(
            (0.18..=0.32).contains(&rate),
            "penalty rate {rate} outside the expected window"
        );
        // Both gates contribute substantially to the failures.
        assert!(branch1 > n / 50);
        assert!(infeasible - branch1 > n / 50);
    }
}
