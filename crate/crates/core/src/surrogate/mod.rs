//! Feed-forward neural surrogates: tanh hidden layers, linear output layer,
//! per-dimension affine scaling on both ends, random hidden-size sampling,
//! and a damped Gauss-Newton trainer (see [`lm`]).

pub mod lm;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::Result;
use crate::invalid_arg;

pub use lm::{max_jacobian_fd_mismatch, train_lm, TrainingReport, LM_MAX_ITERATIONS};

/// Default strike budget for validation-error increases during training.
pub fn default_strike_threshold(n_hlrs: usize) -> usize {
    10 * n_hlrs
}

/// Layer widths, input to output: [n_pars, hidden..., n_objectives].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Architecture {
    pub layer_sizes: Vec<usize>,
}

impl Architecture {
    pub fn new(layer_sizes: Vec<usize>) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(invalid_arg!("an architecture needs at least two layers"));
        }
        if layer_sizes.iter().any(|&s| s == 0) {
            return Err(invalid_arg!("layer sizes must be positive"));
        }
        Ok(Architecture { layer_sizes })
    }

    pub fn n_inputs(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn n_outputs(&self) -> usize {
        *self.layer_sizes.last().unwrap()
    }

    pub fn hidden(&self) -> &[usize] {
        &self.layer_sizes[1..self.layer_sizes.len() - 1]
    }

    /// Total count of trainable parameters (weights plus biases).
    pub fn n_parameters(&self) -> usize {
        self.layer_sizes
            .windows(2)
            .map(|w| (w[0] + 1) * w[1])
            .sum()
    }
}

/// Draws one hidden-layer size per entry of `means`: uniform over the
/// integers in [round(mean - r_n), round(mean + r_n)], clamped to
/// [n_min, n_max]. The endpoints of the full architecture are fixed by the
/// problem dimensions.
pub fn sample_architecture<R: Rng>(
    n_pars: usize,
    n_objectives: usize,
    means: &[f64],
    r_n: f64,
    n_min: usize,
    n_max: usize,
    rng: &mut R,
) -> Result<Architecture> {
    if n_min < 1 || n_max < n_min {
        return Err(invalid_arg!(
            "need 1 <= n_min <= n_max, got [{n_min}, {n_max}]"
        ));
    }
    if means.is_empty() || r_n < 0.0 {
        return Err(invalid_arg!("need at least one layer mean and r_n >= 0"));
    }
    let mut layer_sizes = Vec::with_capacity(means.len() + 2);
    layer_sizes.push(n_pars);
    for &mean in means {
        let lo = (mean - r_n).round() as i64;
        let hi = (mean + r_n).round() as i64;
        let drawn = rng.gen_range(lo..=hi);
        layer_sizes.push(drawn.clamp(n_min as i64, n_max as i64) as usize);
    }
    layer_sizes.push(n_objectives);
    Architecture::new(layer_sizes)
}

/// Affine maps applied around the network: parameters from their box onto
/// [-1, 1], objectives from their observed range onto [0, 1]. A degenerate
/// dimension (zero width) maps to the low end of the target interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Scaling {
    pub input_lo: Vec<f64>,
    pub input_hi: Vec<f64>,
    pub output_lo: Vec<f64>,
    pub output_range: Vec<f64>,
}

impl Scaling {
    pub fn new(
        input_lo: Vec<f64>,
        input_hi: Vec<f64>,
        output_lo: Vec<f64>,
        output_range: Vec<f64>,
    ) -> Result<Self> {
        if input_lo.len() != input_hi.len() || output_lo.len() != output_range.len() {
            return Err(invalid_arg!("scaling vectors must come in equal-length pairs"));
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !finite(&input_lo) || !finite(&input_hi) || !finite(&output_lo) || !finite(&output_range)
        {
            return Err(invalid_arg!("scaling vectors must be finite"));
        }
        if input_lo.iter().zip(&input_hi).any(|(l, h)| l > h) {
            return Err(invalid_arg!("input scaling needs lo <= hi"));
        }
        if output_range.iter().any(|r| *r < 0.0) {
            return Err(invalid_arg!("output ranges must be non-negative"));
        }
        Ok(Scaling {
            input_lo,
            input_hi,
            output_lo,
            output_range,
        })
    }

    /// Builds the scaling from the parameter box and the observed min-max of
    /// each objective over a set of target rows.
    pub fn from_observations(
        input_lo: &[f64],
        input_hi: &[f64],
        targets: &[Vec<f64>],
    ) -> Result<Self> {
        let first = targets
            .first()
            .ok_or_else(|| invalid_arg!("need at least one observation to scale outputs"))?;
        let m = first.len();
        let mut o_lo = vec![f64::INFINITY; m];
        let mut o_hi = vec![f64::NEG_INFINITY; m];
        for row in targets {
            if row.len() != m {
                return Err(invalid_arg!("ragged observation rows"));
            }
            for (j, &v) in row.iter().enumerate() {
                o_lo[j] = o_lo[j].min(v);
                o_hi[j] = o_hi[j].max(v);
            }
        }
        let range = o_lo.iter().zip(&o_hi).map(|(l, h)| h - l).collect();
        Scaling::new(input_lo.to_vec(), input_hi.to_vec(), o_lo, range)
    }

    pub fn n_inputs(&self) -> usize {
        self.input_lo.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.output_lo.len()
    }

    pub fn scale_input_into(&self, p: &[f64], out: &mut [f64]) {
        for i in 0..p.len() {
            let width = self.input_hi[i] - self.input_lo[i];
            out[i] = if width == 0.0 {
                -1.0
            } else {
                2.0 * (p[i] - self.input_lo[i]) / width - 1.0
            };
        }
    }

    pub fn scale_output(&self, o: &[f64]) -> Vec<f64> {
        o.iter()
            .enumerate()
            .map(|(j, &v)| {
                if self.output_range[j] == 0.0 {
                    0.0
                } else {
                    (v - self.output_lo[j]) / self.output_range[j]
                }
            })
            .collect()
    }

    pub fn unscale_output(&self, s: &[f64]) -> Vec<f64> {
        s.iter()
            .enumerate()
            .map(|(j, &v)| self.output_lo[j] + v * self.output_range[j])
            .collect()
    }
}

/// A training/validation/test dataset stored column-per-sample in raw
/// (unscaled) units.
#[derive(Clone, Debug)]
pub struct Dataset {
    /// n_pars x B parameter matrix.
    pub x: DMatrix<f64>,
    /// n_objectives x B target matrix.
    pub y: DMatrix<f64>,
}

impl Dataset {
    pub fn from_rows(inputs: &[Vec<f64>], targets: &[Vec<f64>]) -> Result<Self> {
        if inputs.is_empty() || inputs.len() != targets.len() {
            return Err(invalid_arg!(
                "dataset needs equally many non-empty inputs and targets ({} vs {})",
                inputs.len(),
                targets.len()
            ));
        }
        let n = inputs[0].len();
        let m = targets[0].len();
        if inputs.iter().any(|r| r.len() != n) || targets.iter().any(|r| r.len() != m) {
            return Err(invalid_arg!("ragged dataset rows"));
        }
        let x = DMatrix::from_fn(n, inputs.len(), |i, s| inputs[s][i]);
        let y = DMatrix::from_fn(m, targets.len(), |j, s| targets[s][j]);
        Ok(Dataset { x, y })
    }

    pub fn len(&self) -> usize {
        self.x.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The surrogate network. Weight matrix `weights[l]` maps layer l activations
/// to layer l+1 pre-activations; every hidden layer applies tanh and the
/// output layer is linear, wrapped by [`Scaling`] on both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct MlpSurrogate {
    pub arch: Architecture,
    pub weights: Vec<DMatrix<f64>>,
    pub biases: Vec<DVector<f64>>,
    pub scaling: Scaling,
}

impl MlpSurrogate {
    /// Fresh network with uniform weights in [-0.5, 0.5] scaled by
    /// 1/sqrt(fan-in), drawn layer by layer (each weight matrix row-major,
    /// then its bias vector).
    pub fn new_random<R: Rng>(arch: Architecture, scaling: Scaling, rng: &mut R) -> Result<Self> {
        if scaling.n_inputs() != arch.n_inputs() || scaling.n_outputs() != arch.n_outputs() {
            return Err(invalid_arg!(
                "scaling dimensions do not match the architecture"
            ));
        }
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for pair in arch.layer_sizes.windows(2) {
            let (n_in, n_out) = (pair[0], pair[1]);
            let gain = 1.0 / (n_in as f64).sqrt();
            let mut w = DMatrix::zeros(n_out, n_in);
            for i in 0..n_out {
                for k in 0..n_in {
                    w[(i, k)] = (rng.gen::<f64>() - 0.5) * gain;
                }
            }
            let mut b = DVector::zeros(n_out);
            for i in 0..n_out {
                b[i] = (rng.gen::<f64>() - 0.5) * gain;
            }
            weights.push(w);
            biases.push(b);
        }
        Ok(MlpSurrogate {
            arch,
            weights,
            biases,
            scaling,
        })
    }

    pub fn n_parameters(&self) -> usize {
        self.arch.n_parameters()
    }

    /// Predicts raw objectives for one raw parameter vector.
    pub fn forward(&self, p: &[f64]) -> Result<Vec<f64>> {
        if p.len() != self.arch.n_inputs() {
            return Err(invalid_arg!(
                "expected {} inputs, got {}",
                self.arch.n_inputs(),
                p.len()
            ));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(invalid_arg!("non-finite input"));
        }
        let mut a = DVector::zeros(p.len());
        self.scaling.scale_input_into(p, a.as_mut_slice());
        let last = self.weights.len() - 1;
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut z = w * &a + b;
            if l < last {
                z.apply(|v| *v = v.tanh());
            }
            a = z;
        }
        Ok(self.scaling.unscale_output(a.as_slice()))
    }

    /// Batched forward pass over pre-scaled inputs (one column per sample).
    /// Returns the activations of every layer, input included; the last entry
    /// holds the linear (scaled-space) outputs.
    pub(crate) fn forward_scaled_batch(&self, a0: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
        let mut activations = Vec::with_capacity(self.weights.len() + 1);
        activations.push(a0.clone());
        let last = self.weights.len() - 1;
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut z = lm::mm(w, activations.last().unwrap());
            for mut col in z.column_iter_mut() {
                col += b;
            }
            if l < last {
                z.apply(|v| *v = v.tanh());
            }
            activations.push(z);
        }
        activations
    }

    /// Scaled-space network outputs for a raw dataset.
    pub(crate) fn predict_scaled(&self, data: &Dataset) -> DMatrix<f64> {
        let mut a0 = DMatrix::zeros(data.x.nrows(), data.len());
        for (s, col) in data.x.column_iter().enumerate() {
            let mut scaled = vec![0.0; col.len()];
            self.scaling
                .scale_input_into(col.as_slice(), &mut scaled);
            a0.column_mut(s).copy_from_slice(&scaled);
        }
        self.forward_scaled_batch(&a0).pop().unwrap()
    }

    /// Mean over samples of the squared Euclidean prediction error in scaled
    /// objective space.
    pub fn evaluate_dataset(&self, data: &Dataset) -> Result<f64> {
        if data.is_empty() {
            return Err(invalid_arg!("cannot evaluate an empty dataset"));
        }
        let predictions = self.predict_scaled(data);
        let mut total = 0.0;
        for (s, col) in predictions.column_iter().enumerate() {
            let target = self.scaling.scale_output(data.y.column(s).as_slice());
            total += col
                .iter()
                .zip(&target)
                .map(|(p, t)| (p - t) * (p - t))
                .sum::<f64>();
        }
        Ok(total / data.len() as f64)
    }

    /// Serializes to the flat text format: a header line with the layer
    /// sizes, four scaling lines, then per layer one line per weight-matrix
    /// row followed by the bias line. 17 significant digits, so a reload is
    /// bit-exact.
    pub fn to_text(&self) -> String {
        fn line(values: impl Iterator<Item = f64>) -> String {
            values
                .map(|v| format!("{v:.16e}"))
                .collect::<Vec<_>>()
                .join(" ")
        }
        let mut out = String::new();
        out.push_str(
            &self
                .arch
                .layer_sizes
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push('\n');
        out.push_str(&line(self.scaling.input_lo.iter().copied()));
        out.push('\n');
        out.push_str(&line(self.scaling.input_hi.iter().copied()));
        out.push('\n');
        out.push_str(&line(self.scaling.output_lo.iter().copied()));
        out.push('\n');
        out.push_str(&line(self.scaling.output_range.iter().copied()));
        out.push('\n');
        for (w, b) in self.weights.iter().zip(&self.biases) {
            for i in 0..w.nrows() {
                out.push_str(&line(w.row(i).iter().copied()));
                out.push('\n');
            }
            out.push_str(&line(b.iter().copied()));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let mut next_line = || {
            lines
                .next()
                .ok_or_else(|| crate::error::Error::Parse("truncated surrogate file".into()))
        };
        let header = next_line()?;
        let layer_sizes: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| crate::error::Error::Parse(format!("bad layer size '{t}': {e}")))
            })
            .collect::<Result<_>>()?;
        let arch = Architecture::new(layer_sizes)?;
        let parse_row = |line: &str, expected: usize| -> Result<Vec<f64>> {
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|e| crate::error::Error::Parse(format!("bad value '{t}': {e}")))
                })
                .collect::<Result<_>>()?;
            if row.len() != expected {
                return Err(crate::error::Error::Parse(format!(
                    "expected {expected} values per line, found {}",
                    row.len()
                )));
            }
            Ok(row)
        };
        let n_in = arch.n_inputs();
        let n_out = arch.n_outputs();
        let input_lo = parse_row(next_line()?, n_in)?;
        let input_hi = parse_row(next_line()?, n_in)?;
        let output_lo = parse_row(next_line()?, n_out)?;
        let output_range = parse_row(next_line()?, n_out)?;
        let scaling = Scaling::new(input_lo, input_hi, output_lo, output_range)?;
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for pair in arch.layer_sizes.windows(2) {
            let (n_l, n_next) = (pair[0], pair[1]);
            let mut w = DMatrix::zeros(n_next, n_l);
            for i in 0..n_next {
                let row = parse_row(next_line()?, n_l)?;
                for (k, v) in row.into_iter().enumerate() {
                    w[(i, k)] = v;
                }
            }
            let b = DVector::from_vec(parse_row(next_line()?, n_next)?);
            weights.push(w);
            biases.push(b);
        }
        Ok(MlpSurrogate {
            arch,
            weights,
            biases,
            scaling,
        })
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}
