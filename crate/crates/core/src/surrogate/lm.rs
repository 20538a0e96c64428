//! Levenberg-Marquardt training: damped Gauss-Newton steps on the
//! sum-of-squares error in scaled objective space, with a validation-strike
//! early stop. The trainer is fully deterministic given the starting weights
//! and datasets; all heavy products go through one sequential gemm kernel.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::Result;
use crate::invalid_arg;

use super::{Dataset, MlpSurrogate};

/// Hard cap on outer Levenberg-Marquardt iterations.
pub const LM_MAX_ITERATIONS: usize = 1000;
const MU_INITIAL: f64 = 1e-2;
const MU_FACTOR: f64 = 10.0;
const MU_CEILING: f64 = 1e10;
const MU_FLOOR: f64 = 1e-15;
const DIAG_FLOOR: f64 = 1e-12;
/// Scaled validation MSE below which further polishing cannot influence any
/// downstream decision; reaching it ends training as converged.
const VAL_MSE_FLOOR: f64 = 3e-7;
/// Relative training-error decrease below which an accepted step counts as
/// stalled.
const STALL_RTOL: f64 = 1e-5;
/// Consecutive stalled steps after which training stops early.
const STALL_PATIENCE: usize = 5;

/// What happened during one training run.
#[derive(Clone, Debug)]
pub struct TrainingReport {
    /// Mean squared error on the training set at the returned weights.
    pub train_mse: f64,
    /// Validation MSE of the initial network followed by one entry per
    /// completed iteration.
    pub validation_mse_history: Vec<f64>,
    /// Filled in by callers that hold a test split.
    pub test_mse: Option<f64>,
    /// Validation-error increases seen, saturated at the threshold.
    pub strikes_used: usize,
    /// Outer iterations started.
    pub iterations: usize,
    /// True when training stopped because the damping hit its ceiling.
    pub damping_exceeded: bool,
}

impl TrainingReport {
    /// Smallest recorded validation MSE (the returned weights attain it).
    pub fn best_validation_mse(&self) -> f64 {
        self.validation_mse_history
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// a * b for column-major matrices through the sequential gemm kernel.
pub(crate) fn mm(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, k) = (a.nrows(), a.ncols());
    let n = b.ncols();
    debug_assert_eq!(k, b.nrows());
    let mut c = DMatrix::zeros(m, n);
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            1,
            m as isize,
            b.as_ptr(),
            1,
            k as isize,
            0.0,
            c.as_mut_ptr(),
            1,
            m as isize,
        );
    }
    c
}

/// x^T * x for a logical k-by-n matrix viewed through explicit strides;
/// panel products over the lower triangle, mirrored into a full symmetric
/// matrix, roughly half the flops of the general product for tall views.
/// `x[r, c]` lives at `data[r * rs + c * cs]`.
fn gram_strided(data: &[f64], k: usize, n: usize, rs: usize, cs: usize) -> DMatrix<f64> {
    const PANEL: usize = 64;
    let mut c = DMatrix::zeros(n, n);
    let mut col = 0;
    while col < n {
        let width = PANEL.min(n - col);
        let m_rows = n - col;
        let mut block = DMatrix::zeros(m_rows, width);
        unsafe {
            matrixmultiply::dgemm(
                m_rows,
                k,
                width,
                1.0,
                data[col * cs..].as_ptr(),
                cs as isize,
                rs as isize,
                data[col * cs..].as_ptr(),
                rs as isize,
                cs as isize,
                0.0,
                block.as_mut_ptr(),
                1,
                m_rows as isize,
            );
        }
        for j in 0..width {
            for i in 0..m_rows {
                let v = block[(i, j)];
                c[(col + i, col + j)] = v;
                c[(col + j, col + i)] = v;
            }
        }
        col += width;
    }
    c
}

/// a^T * a without materializing the transpose.
#[cfg(test)]
pub(crate) fn gram(a: &DMatrix<f64>) -> DMatrix<f64> {
    gram_strided(a.as_slice(), a.nrows(), a.ncols(), 1, a.nrows())
}

/// a * a^T without materializing the transpose.
pub(crate) fn gram_rows(a: &DMatrix<f64>) -> DMatrix<f64> {
    gram_strided(a.as_slice(), a.ncols(), a.nrows(), a.nrows(), 1)
}

/// a^T * b without materializing the transpose.
pub(crate) fn mm_t(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (k, m) = (a.nrows(), a.ncols());
    let n = b.ncols();
    debug_assert_eq!(k, b.nrows());
    let mut c = DMatrix::zeros(m, n);
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            k as isize,
            1,
            b.as_ptr(),
            1,
            k as isize,
            0.0,
            c.as_mut_ptr(),
            1,
            m as isize,
        );
    }
    c
}

/// Forward pass over pre-scaled inputs for an explicit weight set; returns
/// all activations (inputs first, linear outputs last).
fn batch_forward(
    weights: &[DMatrix<f64>],
    biases: &[DVector<f64>],
    a0: &DMatrix<f64>,
) -> Vec<DMatrix<f64>> {
    let mut activations = Vec::with_capacity(weights.len() + 1);
    activations.push(a0.clone());
    let last = weights.len() - 1;
    for (l, (w, b)) in weights.iter().zip(biases).enumerate() {
        let mut z = mm(w, activations.last().unwrap());
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

fn sum_squared_error(outputs: &DMatrix<f64>, targets: &DMatrix<f64>) -> f64 {
    outputs
        .iter()
        .zip(targets.iter())
        .map(|(o, t)| (o - t) * (o - t))
        .sum()
}

/// Flattened-parameter order shared by the Jacobian columns and the update
/// step: per layer, the weight matrix row-major (output unit major), then
/// the bias vector.
fn apply_step(weights: &mut [DMatrix<f64>], biases: &mut [DVector<f64>], delta: &DVector<f64>) {
    let mut c = 0;
    for (w, b) in weights.iter_mut().zip(biases.iter_mut()) {
        let (rows, cols) = w.shape();
        for i in 0..rows {
            for k in 0..cols {
                w[(i, k)] += delta[c];
                c += 1;
            }
        }
        for i in 0..rows {
            b[i] += delta[c];
            c += 1;
        }
    }
    debug_assert_eq!(c, delta.len());
}

/// Builds the transposed Jacobian of the scaled network outputs with respect
/// to every weight and bias, plus the residual vector target − output.
/// Column s*m + j covers output j of sample s, so every write lands in one
/// contiguous column; rows follow [`apply_step`]'s parameter order.
fn build_jacobian_t(
    weights: &[DMatrix<f64>],
    activations: &[DMatrix<f64>],
    targets: &DMatrix<f64>,
    n_parameters: usize,
) -> (DMatrix<f64>, DVector<f64>) {
    let n_layers = weights.len();
    let n_outputs = targets.nrows();
    let batch = targets.ncols();
    let outputs = activations.last().unwrap();

    let mut jt = DMatrix::zeros(n_parameters, batch * n_outputs);
    let mut residual = DVector::zeros(batch * n_outputs);
    for s in 0..batch {
        for j in 0..n_outputs {
            residual[s * n_outputs + j] = targets[(j, s)] - outputs[(j, s)];
        }
    }

    let jdata = jt.as_mut_slice();
    for j in 0..n_outputs {
        // Sensitivity of output j to the pre-activations of the top layer.
        let mut d = DMatrix::zeros(n_outputs, batch);
        d.row_mut(j).fill(1.0);
        let mut offset = n_parameters;
        for l in (0..n_layers).rev() {
            let a = &activations[l];
            let cols = a.nrows();
            let rows = weights[l].nrows();
            offset -= (cols + 1) * rows;
            let aslice = a.as_slice();
            let dslice = d.as_slice();
            let dn = d.nrows();
            // d[i, s] = d out_j / d z_{l+1}[i] for sample s.
            for s in 0..batch {
                let jcol = &mut jdata[(s * n_outputs + j) * n_parameters..][..n_parameters];
                let a_s = &aslice[s * cols..s * cols + cols];
                let d_s = &dslice[s * dn..s * dn + rows];
                for i in 0..rows {
                    let di = d_s[i];
                    let dst = &mut jcol[offset + i * cols..offset + i * cols + cols];
                    for (out, act) in dst.iter_mut().zip(a_s) {
                        *out = di * act;
                    }
                }
                jcol[offset + rows * cols..offset + rows * cols + rows].copy_from_slice(d_s);
            }
            if l > 0 {
                d = mm_t(&weights[l], &d);
                // Hidden activations are tanh, so z' = 1 - a^2.
                for (v, act) in d.iter_mut().zip(activations[l].iter()) {
                    *v *= 1.0 - act * act;
                }
            }
        }
        debug_assert_eq!(offset, 0);
    }
    (jt, residual)
}

struct ScaledData {
    x: DMatrix<f64>,
    y: DMatrix<f64>,
}

fn scale_dataset(mlp: &MlpSurrogate, data: &Dataset) -> ScaledData {
    let mut x = DMatrix::zeros(data.x.nrows(), data.len());
    let mut buffer = vec![0.0; data.x.nrows()];
    for (s, col) in data.x.column_iter().enumerate() {
        mlp.scaling.scale_input_into(col.as_slice(), &mut buffer);
        x.column_mut(s).copy_from_slice(&buffer);
    }
    let mut y = DMatrix::zeros(data.y.nrows(), data.len());
    for (s, col) in data.y.column_iter().enumerate() {
        let scaled = mlp.scaling.scale_output(col.as_slice());
        y.column_mut(s).copy_from_slice(&scaled);
    }
    ScaledData { x, y }
}

/// Trains `mlp` in place. Each outer iteration linearizes the network at the
/// current weights, then retries the damped normal equations with growing
/// damping until a step strictly decreases the training error; the damping
/// shrinks after every accepted step. Validation MSE is recorded before
/// training and after every iteration; each strict increase over the previous
/// entry costs one strike, and training stops once strikes exceed
/// `strike_threshold`, the iteration cap is reached, or the damping ceiling
/// is hit (flagged in the report). Two convergence guards end training early
/// rather than burning the full iteration budget on noise-floor polishing:
/// a validation MSE at or below an absolute floor, and a run of consecutive
/// accepted steps whose relative error decrease stays under a small
/// tolerance. The weights left in `mlp` are those of the best recorded
/// validation MSE.
pub fn train_lm(
    mlp: &mut MlpSurrogate,
    train: &Dataset,
    valid: &Dataset,
    strike_threshold: usize,
) -> Result<TrainingReport> {
    if train.is_empty() || valid.is_empty() {
        return Err(invalid_arg!("training and validation sets must be non-empty"));
    }
    if strike_threshold == 0 {
        return Err(invalid_arg!("strike threshold must be at least 1"));
    }
    if train.x.nrows() != mlp.arch.n_inputs() || train.y.nrows() != mlp.arch.n_outputs() {
        return Err(invalid_arg!("dataset dimensions do not match the network"));
    }

    let train_scaled = scale_dataset(mlp, train);
    let valid_scaled = scale_dataset(mlp, valid);
    let n_parameters = mlp.n_parameters();

    let mut weights = mlp.weights.clone();
    let mut biases = mlp.biases.clone();

    let validation_mse = |w: &[DMatrix<f64>], b: &[DVector<f64>]| -> f64 {
        let out = batch_forward(w, b, &valid_scaled.x);
        sum_squared_error(out.last().unwrap(), &valid_scaled.y) / valid.len() as f64
    };

    let mut history = vec![validation_mse(&weights, &biases)];
    let mut best_val = history[0];
    let mut best_weights = weights.clone();
    let mut best_biases = biases.clone();

    let mut mu = MU_INITIAL;
    let mut strikes = 0usize;
    let mut iterations = 0usize;
    let mut damping_exceeded = false;
    let mut stalled = 0usize;

    'outer: for _ in 0..LM_MAX_ITERATIONS {
        iterations += 1;
        let activations = batch_forward(&weights, &biases, &train_scaled.x);
        let error = sum_squared_error(activations.last().unwrap(), &train_scaled.y);
        let (jt, residual) = build_jacobian_t(&weights, &activations, &train_scaled.y, n_parameters);
        let jtj = gram_rows(&jt);
        let gradient = {
            let r = DMatrix::from_column_slice(residual.len(), 1, residual.as_slice());
            DVector::from_column_slice(mm(&jt, &r).as_slice())
        };

        // Retry with growing damping until a step strictly improves. The
        // damping term is scaled per coordinate by the curvature diagonal
        // (Marquardt scaling), floored so dead columns cannot make the
        // system singular.
        loop {
            let mut damped = jtj.clone();
            for i in 0..n_parameters {
                damped[(i, i)] += mu * jtj[(i, i)].max(DIAG_FLOOR);
            }
            let step = Cholesky::new(damped).map(|chol| chol.solve(&gradient));
            if let Some(delta) = step {
                let mut candidate_w = weights.clone();
                let mut candidate_b = biases.clone();
                apply_step(&mut candidate_w, &mut candidate_b, &delta);
                let out = batch_forward(&candidate_w, &candidate_b, &train_scaled.x);
                let new_error = sum_squared_error(out.last().unwrap(), &train_scaled.y);
                if new_error.is_finite() && new_error < error {
                    weights = candidate_w;
                    biases = candidate_b;
                    mu = (mu / MU_FACTOR).max(MU_FLOOR);
                    if error - new_error < STALL_RTOL * error {
                        stalled += 1;
                    } else {
                        stalled = 0;
                    }
                    break;
                }
            }
            mu *= MU_FACTOR;
            if mu > MU_CEILING {
                damping_exceeded = true;
                break 'outer;
            }
        }

        let val = validation_mse(&weights, &biases);
        let previous = *history.last().unwrap();
        history.push(val);
        if val < best_val {
            best_val = val;
            best_weights = weights.clone();
            best_biases = biases.clone();
        }
        if val > previous {
            strikes += 1;
            if strikes > strike_threshold {
                break;
            }
        }
        if val <= VAL_MSE_FLOOR || stalled >= STALL_PATIENCE {
            break;
        }
    }

    mlp.weights = best_weights;
    mlp.biases = best_biases;
    let out = batch_forward(&mlp.weights, &mlp.biases, &train_scaled.x);
    let train_mse = sum_squared_error(out.last().unwrap(), &train_scaled.y) / train.len() as f64;
    Ok(TrainingReport {
        train_mse,
        validation_mse_history: history,
        test_mse: None,
        strikes_used: strikes.min(strike_threshold),
        iterations,
        damping_exceeded,
    })
}

/// Largest disagreement between the analytic Jacobian of the scaled network
/// outputs and a central finite-difference probe of step `h`, over every
/// parameter, sample, and output. Entries are compared as
/// |analytic − fd| / max(|analytic|, 1), so the result reads as a relative
/// error with an absolute floor around zero. Inputs are raw, unscaled points.
/// Intended as a spot-check of the optimizer's gradient path; cost grows with
/// parameter count times batch size.
pub fn max_jacobian_fd_mismatch(mlp: &MlpSurrogate, inputs: &[Vec<f64>], h: f64) -> Result<f64> {
    if inputs.is_empty() {
        return Err(invalid_arg!("finite-difference probe needs at least one input"));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(invalid_arg!("finite-difference step must be positive, got {h}"));
    }
    let n_in = mlp.arch.n_inputs();
    let n_out = mlp.arch.n_outputs();
    if inputs.iter().any(|p| p.len() != n_in) {
        return Err(invalid_arg!("probe input dimension does not match the network"));
    }
    let batch = inputs.len();
    let mut a0 = DMatrix::zeros(n_in, batch);
    let mut buffer = vec![0.0; n_in];
    for (s, p) in inputs.iter().enumerate() {
        mlp.scaling.scale_input_into(p, &mut buffer);
        a0.column_mut(s).copy_from_slice(&buffer);
    }

    let n_parameters = mlp.n_parameters();
    let activations = batch_forward(&mlp.weights, &mlp.biases, &a0);
    let targets = DMatrix::zeros(n_out, batch);
    let (jt, _) = build_jacobian_t(&mlp.weights, &activations, &targets, n_parameters);

    let mut worst = 0.0f64;
    let mut delta = DVector::zeros(n_parameters);
    for c in 0..n_parameters {
        delta[c] = h;
        let mut wp = mlp.weights.clone();
        let mut bp = mlp.biases.clone();
        apply_step(&mut wp, &mut bp, &delta);
        let plus = batch_forward(&wp, &bp, &a0);
        delta[c] = -h;
        let mut wm = mlp.weights.clone();
        let mut bm = mlp.biases.clone();
        apply_step(&mut wm, &mut bm, &delta);
        let minus = batch_forward(&wm, &bm, &a0);
        delta[c] = 0.0;
        let (op, om) = (plus.last().unwrap(), minus.last().unwrap());
        for s in 0..batch {
            for j in 0..n_out {
                let fd = (op[(j, s)] - om[(j, s)]) / (2.0 * h);
                let analytic = jt[(c, s * n_out + j)];
                let mismatch = (analytic - fd).abs() / analytic.abs().max(1.0);
                worst = worst.max(mismatch);
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surrogate::{Architecture, Scaling};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line_dataset(slope: f64, n: usize) -> Dataset {
        let inputs: Vec<Vec<f64>> = (0..n)
            .map(|i| vec![-1.0 + 2.0 * i as f64 / (n - 1) as f64])
            .collect();
        let targets: Vec<Vec<f64>> = inputs.iter().map(|p| vec![slope * p[0]]).collect();
        Dataset::from_rows(&inputs, &targets).unwrap()
    }

    fn net_for_line(seed: u64, hidden: usize) -> MlpSurrogate {
        let arch = Architecture::new(vec![1, hidden, 1]).unwrap();
        let scaling = Scaling::new(vec![-1.0], vec![1.0], vec![-2.0], vec![4.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        MlpSurrogate::new_random(arch, scaling, &mut rng).unwrap()
    }

    #[test]
    fn gemm_helpers_match_nalgebra() {
        let a = DMatrix::from_fn(4, 3, |i, j| (i * 3 + j) as f64 * 0.37 - 1.0);
        let b = DMatrix::from_fn(3, 5, |i, j| (i + j * 2) as f64 * 0.21 + 0.5);
        assert_relative_eq!(mm(&a, &b), &a * &b, epsilon = 1e-13);
        let c = DMatrix::from_fn(4, 5, |i, j| ((i + 1) * (j + 2)) as f64 * 0.11);
        assert_relative_eq!(mm_t(&a, &c), a.transpose() * &c, epsilon = 1e-13);
    }

    #[test]
    fn gram_matches_general_product() {
        // Narrow, panel-boundary, and multi-panel widths.
        for &n in &[1usize, 37, 64, 65, 130, 200] {
            let a = DMatrix::from_fn(211, n, |i, j| ((i * 7 + j * 13) as f64 * 0.043).sin());
            let g = gram(&a);
            assert_relative_eq!(g, a.transpose() * &a, epsilon = 1e-11);
            // Exact symmetry, not just approximate.
            for i in 0..n {
                for j in 0..i {
                    assert_eq!(g[(i, j)].to_bits(), g[(j, i)].to_bits());
                }
            }
            let wide = a.transpose();
            let gr = gram_rows(&wide);
            assert_relative_eq!(gr, &wide * wide.transpose(), epsilon = 1e-11);
            assert_relative_eq!(gr, g, epsilon = 1e-11);
        }
    }

    #[test]
    fn fits_a_line_to_high_accuracy() {
        let mut net = net_for_line(42, 5);
        let train = line_dataset(2.0, 50);
        let valid = line_dataset(2.0, 11);
        let before = net.evaluate_dataset(&train).unwrap();
        let report = train_lm(&mut net, &train, &valid, 10).unwrap();
        assert!(report.train_mse < 1e-6, "train mse {}", report.train_mse);
        assert!(report.train_mse <= before);
        // Held-out grid in raw units.
        for i in 0..=100 {
            let x = -1.0 + 2.0 * i as f64 / 100.0;
            let y = net.forward(&[x]).unwrap()[0];
            assert!((y - 2.0 * x).abs() < 0.02, "poor fit at {x}: {y}");
        }
        // The returned network attains the recorded best validation MSE.
        let val = net.evaluate_dataset(&valid).unwrap();
        assert_eq!(val, report.best_validation_mse());
    }

    #[test]
    fn training_is_seed_reproducible() {
        let train = line_dataset(1.5, 30);
        let valid = line_dataset(1.5, 7);
        let mut a = net_for_line(7, 4);
        let mut b = net_for_line(7, 4);
        let ra = train_lm(&mut a, &train, &valid, 10).unwrap();
        let rb = train_lm(&mut b, &train, &valid, 10).unwrap();
        assert_eq!(a, b);
        assert_eq!(ra.validation_mse_history, rb.validation_mse_history);
        assert_eq!(ra.iterations, rb.iterations);
    }

    #[test]
    fn adversarial_validation_strikes_out_immediately() {
        // The net starts as an exact constant at the validation targets, so
        // every training improvement away from the constant raises the
        // validation error: with a threshold of one strike, training runs
        // exactly two iterations.
        let mut net = net_for_line(3, 3);
        net.weights[1].fill(0.0);
        net.biases[1][0] = 0.5;
        let train = line_dataset(1.0, 20);
        // Raw target 0 scales to 0.5, the net's initial output.
        let valid = line_dataset(0.0, 20);
        let report = train_lm(&mut net, &train, &valid, 1).unwrap();
        assert_eq!(report.iterations, 2);
        assert_eq!(report.strikes_used, 1);
        assert!(!report.damping_exceeded);
        // History: initial entry plus one per iteration, strictly rising.
        assert_eq!(report.validation_mse_history.len(), 3);
        assert!(report.validation_mse_history[1] > report.validation_mse_history[0]);
        assert!(report.validation_mse_history[2] > report.validation_mse_history[1]);
    }

    #[test]
    fn zero_residual_hits_the_damping_ceiling() {
        // Targets equal the network's own outputs: no step can strictly
        // decrease the error, so damping escalates to the ceiling and the
        // weights stay untouched. Identity output scaling keeps the target
        // roundtrip bit-exact.
        let arch = Architecture::new(vec![1, 3, 1]).unwrap();
        let scaling = Scaling::new(vec![-1.0], vec![1.0], vec![0.0], vec![1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let net = MlpSurrogate::new_random(arch, scaling, &mut rng).unwrap();
        let inputs: Vec<Vec<f64>> = (0..8).map(|i| vec![-0.9 + 0.25 * i as f64]).collect();
        // Targets from the same batched path the trainer uses, so the
        // residual is exactly zero.
        let probe = Dataset::from_rows(&inputs, &vec![vec![0.0]; inputs.len()]).unwrap();
        let predicted = net.predict_scaled(&probe);
        let targets: Vec<Vec<f64>> = predicted.column_iter().map(|c| vec![c[0]]).collect();
        let data = Dataset::from_rows(&inputs, &targets).unwrap();
        let mut trained = net.clone();
        let report = train_lm(&mut trained, &data, &data, 5).unwrap();
        assert!(report.damping_exceeded);
        assert_eq!(report.iterations, 1);
        assert_eq!(trained, net);
        assert!(report.train_mse < 1e-25);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let mut net = net_for_line(1, 3);
        let data = line_dataset(1.0, 10);
        let empty = Dataset {
            x: DMatrix::zeros(1, 0),
            y: DMatrix::zeros(1, 0),
        };
        assert!(train_lm(&mut net, &empty, &data, 10).is_err());
        assert!(train_lm(&mut net, &data, &empty, 10).is_err());
        assert!(train_lm(&mut net, &data, &data, 0).is_err());
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let arch = Architecture::new(vec![2, 4, 3, 2]).unwrap();
        let scaling = Scaling::new(
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 0.0],
            vec![1.0, 1.0],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let net = MlpSurrogate::new_random(arch, scaling, &mut rng).unwrap();
        let a0 = DMatrix::from_fn(2, 6, |i, s| ((i + 2 * s) as f64 * 0.17).sin());
        let targets = DMatrix::zeros(2, 6);

        let activations = batch_forward(&net.weights, &net.biases, &a0);
        let (jt, _) = build_jacobian_t(&net.weights, &activations, &targets, net.n_parameters());

        let h = 1e-6;
        for c in 0..net.n_parameters() {
            let mut delta = DVector::zeros(net.n_parameters());
            delta[c] = h;
            let mut wp = net.weights.clone();
            let mut bp = net.biases.clone();
            apply_step(&mut wp, &mut bp, &delta);
            let plus = batch_forward(&wp, &bp, &a0);
            delta[c] = -h;
            let mut wm = net.weights.clone();
            let mut bm = net.biases.clone();
            apply_step(&mut wm, &mut bm, &delta);
            let minus = batch_forward(&wm, &bm, &a0);
            let (op, om) = (plus.last().unwrap(), minus.last().unwrap());
            for s in 0..6 {
                for j in 0..2 {
                    let fd = (op[(j, s)] - om[(j, s)]) / (2.0 * h);
                    let analytic = jt[(c, s * 2 + j)];
                    assert!(
                        (fd - analytic).abs() <= 1e-4 * analytic.abs().max(1.0),
                        "column {c}, sample {s}, output {j}: {analytic} vs {fd}"
                    );
                }
            }
        }
    }
}
