//! Architecture statistics across completed adaptive runs: per hidden
//! layer, the mean, sample standard deviation, and adjusted sample skewness
//! of the final selected layer sizes, plus histogram bins.

use std::path::{Path, PathBuf};

use nnadapt::{Error, Result};
use serde::{Deserialize, Serialize};

/// The slice of a run's `summary.json` this command consumes.
#[derive(Deserialize)]
struct RunSummary {
    problem: String,
    final_architecture: Vec<usize>,
}

/// Statistics of one hidden layer's size across runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayerStats {
    /// Hidden-layer index, 0-based from the input side.
    pub layer: usize,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub sdev: f64,
    /// Adjusted sample skewness; 0 when undefined (see `degenerate`).
    pub skewness: f64,
    /// True when fewer than 3 runs or zero spread leaves the skewness
    /// estimator undefined; it is then reported as 0.
    pub degenerate: bool,
    /// `(size, count)` pairs sorted by size.
    pub histogram: Vec<(usize, usize)>,
}

/// The report: layer statistics over at least two runs of one problem.
#[derive(Clone, Debug, Serialize)]
pub struct ArchStats {
    pub problem: String,
    pub runs: usize,
    pub layers: Vec<LayerStats>,
}

fn read_summary(dir: &Path) -> Result<RunSummary> {
    let path = dir.join("summary.json");
    let text = std::fs::read_to_string(&path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn layer_stats(layer: usize, sizes: &[usize]) -> LayerStats {
    let n = sizes.len() as f64;
    let mean = sizes.iter().map(|&s| s as f64).sum::<f64>() / n;
    let m2: f64 = sizes.iter().map(|&s| (s as f64 - mean).powi(2)).sum();
    let sdev = (m2 / (n - 1.0)).sqrt();
    let mut degenerate = false;
    let skewness = if sizes.len() < 3 || m2 == 0.0 {
        degenerate = true;
        0.0
    } else {
        let m3: f64 = sizes.iter().map(|&s| (s as f64 - mean).powi(3)).sum::<f64>() / n;
        let g1 = m3 / (m2 / n).powf(1.5);
        g1 * (n * (n - 1.0)).sqrt() / (n - 2.0)
    };
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    let mut histogram: Vec<(usize, usize)> = Vec::new();
    for s in sorted {
        match histogram.last_mut() {
            Some((v, c)) if *v == s => *c += 1,
            _ => histogram.push((s, 1)),
        }
    }
    LayerStats {
        layer,
        mean,
        sdev,
        skewness,
        degenerate,
        histogram,
    }
}

/// Reads every run's summary and aggregates the final architectures. All
/// runs must be of the same problem and there must be at least two.
pub fn cmd_stats(run_dirs: &[PathBuf]) -> Result<ArchStats> {
    if run_dirs.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 completed runs, got {}",
            run_dirs.len()
        )));
    }
    let mut problem: Option<String> = None;
    let mut architectures: Vec<Vec<usize>> = Vec::new();
    for dir in run_dirs {
        let summary = read_summary(dir)?;
        match &problem {
            None => problem = Some(summary.problem.clone()),
            Some(p) if *p != summary.problem => {
                return Err(Error::InvalidArgument(format!(
                    "mixed problems across runs: {p} and {}",
                    summary.problem
                )));
            }
            _ => {}
        }
        if summary.final_architecture.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "{}: final architecture has no hidden layers",
                dir.display()
            )));
        }
        architectures.push(summary.final_architecture);
    }
    let layers = architectures[0].len();
    if architectures.iter().any(|a| a.len() != layers) {
        return Err(Error::InvalidArgument(
            "runs disagree on the number of layers".into(),
        ));
    }
    let layers = (0..layers - 2)
        .map(|l| {
            let sizes: Vec<usize> = architectures.iter().map(|a| a[l + 1]).collect();
            layer_stats(l, &sizes)
        })
        .collect();
    Ok(ArchStats {
        problem: problem.unwrap(),
        runs: architectures.len(),
        layers,
    })
}
