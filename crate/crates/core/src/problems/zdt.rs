//! The five two-objective ZDT benchmark functions, with the dimensions and
//! bounds used throughout this project (n = 10 for ZDT1-3, n = 2 for ZDT4 and
//! ZDT6, second coordinate of ZDT4 in [-5, 5]), plus sampled analytic optima.

use std::f64::consts::PI;

use crate::error::Result;
use crate::invalid_arg;
use crate::moea::{CostFunction, Evaluation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZdtVariant {
    Zdt1,
    Zdt2,
    Zdt3,
    Zdt4,
    Zdt6,
}

impl ZdtVariant {
    pub fn name(&self) -> &'static str {
        match self {
            ZdtVariant::Zdt1 => "zdt1",
            ZdtVariant::Zdt2 => "zdt2",
            ZdtVariant::Zdt3 => "zdt3",
            ZdtVariant::Zdt4 => "zdt4",
            ZdtVariant::Zdt6 => "zdt6",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "zdt1" => ZdtVariant::Zdt1,
            "zdt2" => ZdtVariant::Zdt2,
            "zdt3" => ZdtVariant::Zdt3,
            "zdt4" => ZdtVariant::Zdt4,
            "zdt6" => ZdtVariant::Zdt6,
            other => return Err(invalid_arg!("unknown benchmark problem '{other}'")),
        })
    }
}

/// One ZDT instance: variant plus its parameter-space box.
#[derive(Clone, Debug)]
pub struct ZdtProblem {
    pub variant: ZdtVariant,
    pub n: usize,
    p_min: Vec<f64>,
    p_max: Vec<f64>,
}

impl ZdtProblem {
    pub fn new(variant: ZdtVariant) -> Self {
        let n = match variant {
            ZdtVariant::Zdt1 | ZdtVariant::Zdt2 | ZdtVariant::Zdt3 => 10,
            ZdtVariant::Zdt4 | ZdtVariant::Zdt6 => 2,
        };
        let mut p_min = vec![0.0; n];
        let mut p_max = vec![1.0; n];
        if variant == ZdtVariant::Zdt4 {
            // First coordinate stays in [0, 1]; the rest span [-5, 5].
            for i in 1..n {
                p_min[i] = -5.0;
                p_max[i] = 5.0;
            }
        }
        ZdtProblem {
            variant,
            n,
            p_min,
            p_max,
        }
    }

    /// Evaluates the benchmark at an in-bounds point.
    pub fn eval(&self, p: &[f64]) -> Result<(f64, f64)> {
        if p.len() != self.n {
            return Err(invalid_arg!(
                "{} expects {} parameters, got {}",
                self.variant.name(),
                self.n,
                p.len()
            ));
        }
        for i in 0..self.n {
            if !(self.p_min[i]..=self.p_max[i]).contains(&p[i]) {
                return Err(invalid_arg!(
                    "parameter {i} = {} outside [{}, {}]",
                    p[i],
                    self.p_min[i],
                    self.p_max[i]
                ));
            }
        }
        let tail = &p[1..];
        let nm1 = (self.n - 1) as f64;
        Ok(match self.variant {
            ZdtVariant::Zdt1 => {
                let f1 = p[0];
                let g = 1.0 + 9.0 * tail.iter().sum::<f64>() / nm1;
                (f1, g * (1.0 - (f1 / g).sqrt()))
            }
            ZdtVariant::Zdt2 => {
                let f1 = p[0];
                let g = 1.0 + 9.0 * tail.iter().sum::<f64>() / nm1;
                let ratio = f1 / g;
                (f1, g * (1.0 - ratio * ratio))
            }
            ZdtVariant::Zdt3 => {
                let f1 = p[0];
                let g = 1.0 + 9.0 * tail.iter().sum::<f64>() / nm1;
                let ratio = f1 / g;
                (
                    f1,
                    g * (1.0 - ratio.sqrt() - ratio * (10.0 * PI * f1).sin()),
                )
            }
            ZdtVariant::Zdt4 => {
                let f1 = p[0];
                let g = 1.0
                    + 10.0 * nm1
                    + tail
                        .iter()
                        .map(|&x| x * x - 10.0 * (4.0 * PI * x).cos())
                        .sum::<f64>();
                (f1, g * (1.0 - (f1 / g).sqrt()))
            }
            ZdtVariant::Zdt6 => {
                let s = (6.0 * PI * p[0]).sin();
                let f1 = 1.0 - (-4.0 * p[0]).exp() * s.powi(6);
                let g = 1.0 + 9.0 * (tail.iter().sum::<f64>() / nm1).powf(0.25);
                let ratio = f1 / g;
                (f1, g * (1.0 - ratio * ratio))
            }
        })
    }
}

impl ZdtProblem {
    /// Second objective of the ideal front at abscissa `f1` (the g = 1 slice
    /// of the objective map). For any attained point `(f1, f2)` this value is
    /// a lower bound on `f2`, so `(f1, optimal_f2(f1))` is the ideal point
    /// directly below it.
    pub fn optimal_f2(&self, f1: f64) -> f64 {
        match self.variant {
            ZdtVariant::Zdt1 | ZdtVariant::Zdt4 => 1.0 - f1.sqrt(),
            ZdtVariant::Zdt2 | ZdtVariant::Zdt6 => 1.0 - f1 * f1,
            ZdtVariant::Zdt3 => 1.0 - f1.sqrt() - f1 * (10.0 * PI * f1).sin(),
        }
    }
}

impl CostFunction for ZdtProblem {
    fn n_pars(&self) -> usize {
        self.n
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
        let (f1, f2) = self.eval(p).expect("optimizer keeps parameters in bounds");
        Evaluation::Feasible(vec![f1, f2])
    }
}

/// Samples the known optimal slice p = (t, 0, ..., 0) with `n_samples` values
/// of t spanning [0, 1] and keeps the non-dominated subset (several variants
/// have slice points that are not globally optimal). Returns the surviving
/// parameter vectors and their objective vectors, in sampling order.
pub fn analytic_pareto(problem: &ZdtProblem, n_samples: usize) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    if n_samples < 2 {
        return Err(invalid_arg!("need at least 2 samples of the optimal slice"));
    }
    let members: Vec<crate::moea::Individual> = (0..n_samples)
        .map(|j| {
            let t = j as f64 / (n_samples - 1) as f64;
            let mut p = vec![0.0; problem.n];
            p[0] = t;
            let (f1, f2) = problem.eval(&p)?;
            Ok(crate::moea::Individual::new(p, vec![f1, f2]))
        })
        .collect::<Result<_>>()?;
    Ok(crate::moea::extract_pareto(&members))
}

/// Objective-space side of [`analytic_pareto`].
pub fn analytic_front(problem: &ZdtProblem, n_samples: usize) -> Result<Vec<Vec<f64>>> {
    Ok(analytic_pareto(problem, n_samples)?.1)
}
