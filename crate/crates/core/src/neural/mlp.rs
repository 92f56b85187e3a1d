//! Multilayer perceptron with rectified-linear hidden layers and
//! per-output activations, plus exact reverse-mode gradients with respect
//! to both parameters and inputs.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NeuralError {
    #[error("invalid network spec: {0}")]
    InvalidSpec(String),
    #[error("shape mismatch in {what}: expected {expected}, got {got}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("non-finite gradient encountered")]
    NonFiniteGradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HiddenActivation {
    #[default]
    Relu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputActivation {
    Tanh,
    Logistic,
    Identity,
}

impl OutputActivation {
    fn apply(self, z: f64) -> f64 {
        match self {
            OutputActivation::Tanh => z.tanh(),
            OutputActivation::Logistic => 1.0 / (1.0 + (-z).exp()),
            OutputActivation::Identity => z,
        }
    }

    /// Derivative with respect to the pre-activation, given the
    /// pre-activation value.
    fn derivative(self, z: f64) -> f64 {
        match self {
            OutputActivation::Tanh => {
                let t = z.tanh();
                1.0 - t * t
            }
            OutputActivation::Logistic => {
                let s = 1.0 / (1.0 + (-z).exp());
                s * (1.0 - s)
            }
            OutputActivation::Identity => 1.0,
        }
    }
}

/// Network shape: layer sizes plus the output activation of each final
/// unit. Hidden layers are always rectified-linear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpSpec {
    pub layer_sizes: Vec<usize>,
    #[serde(default)]
    pub hidden_activation: HiddenActivation,
    pub output_activations: Vec<OutputActivation>,
}

impl MlpSpec {
    pub fn new(layer_sizes: Vec<usize>, output_activations: Vec<OutputActivation>) -> Self {
        MlpSpec {
            layer_sizes,
            hidden_activation: HiddenActivation::Relu,
            output_activations,
        }
    }

    pub fn validate(&self) -> Result<(), NeuralError> {
        if self.layer_sizes.len() < 2 {
            return Err(NeuralError::InvalidSpec(format!(
                "need at least 2 layers, got {}",
                self.layer_sizes.len()
            )));
        }
        if self.layer_sizes.iter().any(|&s| s == 0) {
            return Err(NeuralError::InvalidSpec("zero-width layer".into()));
        }
        let out = *self.layer_sizes.last().unwrap();
        if self.output_activations.len() != out {
            return Err(NeuralError::InvalidSpec(format!(
                "{} output activations for {} outputs",
                self.output_activations.len(),
                out
            )));
        }
        Ok(())
    }

    pub fn input_dim(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layer_sizes.last().unwrap()
    }

    pub fn param_count(&self) -> usize {
        self.layer_sizes
            .windows(2)
            .map(|w| w[0] * w[1] + w[1])
            .sum()
    }
}

/// One dense layer: row-major `out x in` weights plus a bias vector. Also
/// reused as the gradient holder since shapes match.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub w: Vec<f64>,
    pub b: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
}

impl Dense {
    fn zeros(rows: usize, cols: usize) -> Self {
        Dense {
            w: vec![0.0; rows * cols],
            b: vec![0.0; rows],
            rows,
            cols,
        }
    }
}

/// Dense network parameters. Serialization order is layer by layer,
/// weights row-major then biases.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams {
    spec: MlpSpec,
    layers: Vec<Dense>,
}

/// Gradients shaped like [`MlpParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGrads {
    pub layers: Vec<Dense>,
}

impl MlpGrads {
    pub fn zeros_like(params: &MlpParams) -> Self {
        MlpGrads {
            layers: params
                .layers
                .iter()
                .map(|l| Dense::zeros(l.rows, l.cols))
                .collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &MlpGrads, scale: f64) {
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            for (x, y) in a.w.iter_mut().zip(&b.w) {
                *x += scale * y;
            }
            for (x, y) in a.b.iter_mut().zip(&b.b) {
                *x += scale * y;
            }
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for l in &mut self.layers {
            for x in &mut l.w {
                *x *= factor;
            }
            for x in &mut l.b {
                *x *= factor;
            }
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.layers
            .iter()
            .map(|l| {
                l.w.iter().map(|x| x * x).sum::<f64>() + l.b.iter().map(|x| x * x).sum::<f64>()
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Activations and pre-activations retained by [`MlpParams::forward`] for
/// the backward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    /// Post-activation value of every layer input: `acts[0]` is the
    /// network input, `acts[l]` feeds layer `l`.
    acts: Vec<Vec<f64>>,
    /// Pre-activation of every layer.
    pre: Vec<Vec<f64>>,
}

/// Final-layer weights start near zero so initial policies are
/// near-neutral.
const FINAL_LAYER_BOUND: f64 = 3e-3;

/// Deterministically initialize parameters: hidden layers uniform in
/// +-1/sqrt(fan_in), the final layer uniform in +-3e-3; biases follow
/// their layer's rule.
pub fn init_mlp(spec: &MlpSpec, seed: u64) -> Result<MlpParams, NeuralError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_layers = spec.layer_sizes.len() - 1;
    let mut layers = Vec::with_capacity(n_layers);
    for l in 0..n_layers {
        let cols = spec.layer_sizes[l];
        let rows = spec.layer_sizes[l + 1];
        let bound = if l + 1 == n_layers {
            FINAL_LAYER_BOUND
        } else {
            1.0 / (cols as f64).sqrt()
        };
        let mut layer = Dense::zeros(rows, cols);
        for w in &mut layer.w {
            *w = rng.gen_range(-bound..=bound);
        }
        for b in &mut layer.b {
            *b = rng.gen_range(-bound..=bound);
        }
        layers.push(layer);
    }
    Ok(MlpParams {
        spec: spec.clone(),
        layers,
    })
}

impl MlpParams {
    pub fn spec(&self) -> &MlpSpec {
        &self.spec
    }

    pub fn layers(&self) -> &[Dense] {
        &self.layers
    }

    pub(crate) fn layers_mut(&mut self) -> &mut [Dense] {
        &mut self.layers
    }

    pub fn param_count(&self) -> usize {
        self.spec.param_count()
    }

    /// Flatten in the documented order: per layer, weights row-major then
    /// biases.
    pub fn flat_weights(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for l in &self.layers {
            out.extend_from_slice(&l.w);
            out.extend_from_slice(&l.b);
        }
        out
    }

    /// Rebuild from a flat weight vector in the documented order.
    pub fn from_flat(spec: &MlpSpec, flat: &[f64]) -> Result<Self, NeuralError> {
        spec.validate()?;
        if flat.len() != spec.param_count() {
            return Err(NeuralError::ShapeMismatch {
                what: "flat weights",
                expected: spec.param_count(),
                got: flat.len(),
            });
        }
        let mut layers = Vec::new();
        let mut at = 0;
        for w in spec.layer_sizes.windows(2) {
            let (cols, rows) = (w[0], w[1]);
            let mut layer = Dense::zeros(rows, cols);
            layer.w.copy_from_slice(&flat[at..at + rows * cols]);
            at += rows * cols;
            layer.b.copy_from_slice(&flat[at..at + rows]);
            at += rows;
            layers.push(layer);
        }
        Ok(MlpParams {
            spec: spec.clone(),
            layers,
        })
    }

    /// Forward pass; the cache retains pre-activations for [`Self::backward`].
    pub fn forward(&self, input: &[f64]) -> Result<(Vec<f64>, ForwardCache), NeuralError> {
        if input.len() != self.spec.input_dim() {
            return Err(NeuralError::ShapeMismatch {
                what: "forward input",
                expected: self.spec.input_dim(),
                got: input.len(),
            });
        }
        let n_layers = self.layers.len();
        let mut acts: Vec<Vec<f64>> = Vec::with_capacity(n_layers);
        let mut pre: Vec<Vec<f64>> = Vec::with_capacity(n_layers);
        acts.push(input.to_vec());
        let mut current = input.to_vec();
        for (l, layer) in self.layers.iter().enumerate() {
            let mut z = vec![0.0; layer.rows];
            for (r, zi) in z.iter_mut().enumerate() {
                let row = &layer.w[r * layer.cols..(r + 1) * layer.cols];
                let mut acc = layer.b[r];
                for (w, x) in row.iter().zip(&current) {
                    acc += w * x;
                }
                *zi = acc;
            }
            let a: Vec<f64> = if l + 1 == n_layers {
                z.iter()
                    .zip(&self.spec.output_activations)
                    .map(|(&zi, act)| act.apply(zi))
                    .collect()
            } else {
                z.iter().map(|&zi| zi.max(0.0)).collect()
            };
            pre.push(z);
            if l + 1 < n_layers {
                acts.push(a.clone());
            }
            current = a;
        }
        Ok((current, ForwardCache { acts, pre }))
    }

    /// Output without the cache.
    pub fn infer(&self, input: &[f64]) -> Result<Vec<f64>, NeuralError> {
        self.forward(input).map(|(out, _)| out)
    }

    /// Exact reverse-mode gradients for parameters and the input, given
    /// the gradient of a scalar loss with respect to the network output.
    pub fn backward(
        &self,
        cache: &ForwardCache,
        output_gradient: &[f64],
    ) -> Result<(MlpGrads, Vec<f64>), NeuralError> {
        if output_gradient.len() != self.spec.output_dim() {
            return Err(NeuralError::ShapeMismatch {
                what: "output gradient",
                expected: self.spec.output_dim(),
                got: output_gradient.len(),
            });
        }
        if cache.pre.len() != self.layers.len()
            || cache.acts[0].len() != self.spec.input_dim()
        {
            return Err(NeuralError::ShapeMismatch {
                what: "forward cache",
                expected: self.layers.len(),
                got: cache.pre.len(),
            });
        }
        let n_layers = self.layers.len();
        let mut grads = MlpGrads::zeros_like(self);
        // delta = dL/dz of the current layer.
        let mut delta: Vec<f64> = cache.pre[n_layers - 1]
            .iter()
            .zip(&self.spec.output_activations)
            .zip(output_gradient)
            .map(|((&z, act), &g)| g * act.derivative(z))
            .collect();
        for l in (0..n_layers).rev() {
            let layer = &self.layers[l];
            let below = &cache.acts[l];
            let g = &mut grads.layers[l];
            for (r, &d) in delta.iter().enumerate() {
                g.b[r] = d;
                let row = &mut g.w[r * layer.cols..(r + 1) * layer.cols];
                for (slot, x) in row.iter_mut().zip(below) {
                    *slot = d * x;
                }
            }
            // Propagate to the layer below: dL/da_below = W^T delta; then
            // through the relu of that layer (or stop at the input).
            let mut down = vec![0.0; layer.cols];
            for (r, &d) in delta.iter().enumerate() {
                let row = &layer.w[r * layer.cols..(r + 1) * layer.cols];
                for (slot, w) in down.iter_mut().zip(row) {
                    *slot += w * d;
                }
            }
            if l == 0 {
                return Ok((grads, down));
            }
            let z_below = &cache.pre[l - 1];
            delta = down
                .iter()
                .zip(z_below)
                .map(|(&g, &z)| if z > 0.0 { g } else { 0.0 })
                .collect();
        }
        unreachable!("loop returns at l == 0");
    }
}

/// Polyak toward the learned parameters: `target = tau*learned +
/// (1-tau)*target`, elementwise.
pub fn soft_update(
    target: &mut MlpParams,
    learned: &MlpParams,
    tau: f64,
) -> Result<(), NeuralError> {
    if target.spec.layer_sizes != learned.spec.layer_sizes {
        return Err(NeuralError::ShapeMismatch {
            what: "soft update",
            expected: learned.param_count(),
            got: target.param_count(),
        });
    }
    debug_assert!((0.0..=1.0).contains(&tau), "tau {tau} outside [0, 1]");
    for (t, l) in target.layers.iter_mut().zip(&learned.layers) {
        for (x, y) in t.w.iter_mut().zip(&l.w) {
            *x = tau * y + (1.0 - tau) * *x;
        }
        for (x, y) in t.b.iter_mut().zip(&l.b) {
            *x = tau * y + (1.0 - tau) * *x;
        }
    }
    Ok(())
}

/// Widen the first layer by inserting an all-zero input column at
/// `insert_at`, so the widened network computes exactly the same function
/// whenever the new input element multiplies the zero column.
pub fn widen_input_column(params: &MlpParams, insert_at: usize) -> Result<MlpParams, NeuralError> {
    let old_cols = params.spec.layer_sizes[0];
    if insert_at > old_cols {
        return Err(NeuralError::ShapeMismatch {
            what: "widen position",
            expected: old_cols,
            got: insert_at,
        });
    }
    let mut spec = params.spec.clone();
    spec.layer_sizes[0] += 1;
    let mut layers = params.layers.clone();
    let first = &mut layers[0];
    let mut w = Vec::with_capacity(first.rows * (old_cols + 1));
    for r in 0..first.rows {
        let row = &first.w[r * old_cols..(r + 1) * old_cols];
        w.extend_from_slice(&row[..insert_at]);
        w.push(0.0);
        w.extend_from_slice(&row[insert_at..]);
    }
    first.w = w;
    first.cols = old_cols + 1;
    Ok(MlpParams { spec, layers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ident_spec() -> MlpSpec {
        MlpSpec::new(vec![3, 3], vec![OutputActivation::Identity; 3])
    }

    #[test]
    fn init_is_deterministic() {
        let spec = MlpSpec::new(
            vec![4, 8, 2],
            vec![OutputActivation::Tanh, OutputActivation::Logistic],
        );
        let a = init_mlp(&spec, 7).unwrap();
        let b = init_mlp(&spec, 7).unwrap();
        assert_eq!(a.flat_weights(), b.flat_weights());
        let c = init_mlp(&spec, 8).unwrap();
        assert_ne!(a.flat_weights(), c.flat_weights());
    }

    #[test]
    fn param_count_for_actor_shape() {
        let spec = MlpSpec::new(
            vec![65, 64, 64, 3],
            vec![
                OutputActivation::Tanh,
                OutputActivation::Logistic,
                OutputActivation::Logistic,
            ],
        );
        // 65*64+64 + 64*64+64 + 64*3+3
        assert_eq!(spec.param_count(), 4224 + 4160 + 195);
        assert_eq!(spec.param_count(), 8579);
        let params = init_mlp(&spec, 0).unwrap();
        assert_eq!(params.flat_weights().len(), 8579);
    }

    #[test]
    fn single_layer_spec_rejected() {
        let spec = MlpSpec::new(vec![65], vec![]);
        assert!(matches!(
            init_mlp(&spec, 0),
            Err(NeuralError::InvalidSpec(_))
        ));
    }

    #[test]
    fn final_layer_init_is_small() {
        let spec = MlpSpec::new(vec![8, 16, 2], vec![OutputActivation::Identity; 2]);
        let p = init_mlp(&spec, 3).unwrap();
        let last = &p.layers()[1];
        assert!(last.w.iter().chain(&last.b).all(|x| x.abs() <= 3e-3));
        let hidden = &p.layers()[0];
        let bound = 1.0 / (8.0_f64).sqrt();
        assert!(hidden.w.iter().chain(&hidden.b).all(|x| x.abs() <= bound));
    }

    #[test]
    fn zero_params_tanh_outputs_zero() {
        let spec = MlpSpec::new(vec![4, 4, 2], vec![OutputActivation::Tanh; 2]);
        let p = MlpParams::from_flat(&spec, &vec![0.0; spec.param_count()]).unwrap();
        let (out, _) = p.forward(&[1.0, -2.0, 3.0, 0.5]).unwrap();
        assert_eq!(out, vec![0.0, 0.0]);
    }

    #[test]
    fn identity_single_layer_passes_input_through() {
        let spec = ident_spec();
        let mut flat = vec![0.0; spec.param_count()];
        // Identity weight matrix, zero bias.
        for i in 0..3 {
            flat[i * 3 + i] = 1.0;
        }
        let p = MlpParams::from_flat(&spec, &flat).unwrap();
        let input = [0.25, -1.5, 2.0];
        let (out, _) = p.forward(&input).unwrap();
        assert_eq!(out, input.to_vec());
    }

    #[test]
    fn forward_is_deterministic() {
        let spec = MlpSpec::new(vec![5, 7, 2], vec![OutputActivation::Identity; 2]);
        let p = init_mlp(&spec, 11).unwrap();
        let x = [0.1, 0.2, -0.3, 0.4, -0.5];
        assert_eq!(p.infer(&x).unwrap(), p.infer(&x).unwrap());
    }

    #[test]
    fn forward_rejects_wrong_input_len() {
        let p = init_mlp(&ident_spec(), 0).unwrap();
        assert!(matches!(
            p.forward(&[1.0]),
            Err(NeuralError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn identity_layer_input_gradient_is_output_gradient() {
        let spec = ident_spec();
        let mut flat = vec![0.0; spec.param_count()];
        for i in 0..3 {
            flat[i * 3 + i] = 1.0;
        }
        let p = MlpParams::from_flat(&spec, &flat).unwrap();
        let (_, cache) = p.forward(&[1.0, 2.0, 3.0]).unwrap();
        let g = [0.5, -1.0, 2.0];
        let (_, din) = p.backward(&cache, &g).unwrap();
        assert_eq!(din, g.to_vec());
    }

    #[test]
    fn zero_output_gradient_zeroes_everything() {
        let spec = MlpSpec::new(vec![4, 6, 2], vec![OutputActivation::Tanh; 2]);
        let p = init_mlp(&spec, 5).unwrap();
        let (_, cache) = p.forward(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let (grads, din) = p.backward(&cache, &[0.0, 0.0]).unwrap();
        assert!(din.iter().all(|&x| x == 0.0));
        assert!(grads
            .layers
            .iter()
            .all(|l| l.w.iter().chain(&l.b).all(|&x| x == 0.0)));
    }

    /// Central finite differences of a linear functional of the output.
    fn finite_diff_check(spec: &MlpSpec, seed: u64) {
        let p = init_mlp(spec, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
        let input: Vec<f64> = (0..spec.input_dim())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let probe: Vec<f64> = (0..spec.output_dim())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let loss = |params: &MlpParams, x: &[f64]| -> f64 {
            params
                .infer(x)
                .unwrap()
                .iter()
                .zip(&probe)
                .map(|(o, g)| o * g)
                .sum()
        };
        let (_, cache) = p.forward(&input).unwrap();
        let (grads, din) = p.backward(&cache, &probe).unwrap();

        let h = 1e-5;
        let flat = p.flat_weights();
        let analytic = {
            let mut out = Vec::new();
            for l in &grads.layers {
                out.extend_from_slice(&l.w);
                out.extend_from_slice(&l.b);
            }
            out
        };
        for k in (0..flat.len()).step_by(7) {
            let mut plus = flat.clone();
            plus[k] += h;
            let mut minus = flat.clone();
            minus[k] -= h;
            let fp = loss(&MlpParams::from_flat(spec, &plus).unwrap(), &input);
            let fm = loss(&MlpParams::from_flat(spec, &minus).unwrap(), &input);
            let numeric = (fp - fm) / (2.0 * h);
            let denom = numeric.abs().max(analytic[k].abs()).max(1e-6);
            assert!(
                (numeric - analytic[k]).abs() / denom < 1e-4,
                "param {k}: numeric {numeric} analytic {}",
                analytic[k]
            );
        }
        for k in 0..input.len() {
            let mut plus = input.clone();
            plus[k] += h;
            let mut minus = input.clone();
            minus[k] -= h;
            let numeric = (loss(&p, &plus) - loss(&p, &minus)) / (2.0 * h);
            let denom = numeric.abs().max(din[k].abs()).max(1e-6);
            assert!(
                (numeric - din[k]).abs() / denom < 1e-4,
                "input {k}: numeric {numeric} analytic {}",
                din[k]
            );
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        finite_diff_check(
            &MlpSpec::new(
                vec![6, 12, 8, 3],
                vec![
                    OutputActivation::Tanh,
                    OutputActivation::Logistic,
                    OutputActivation::Identity,
                ],
            ),
            42,
        );
        finite_diff_check(
            &MlpSpec::new(vec![3, 5, 1], vec![OutputActivation::Identity]),
            1,
        );
    }

    #[test]
    fn soft_update_limits() {
        let spec = MlpSpec::new(vec![3, 4, 2], vec![OutputActivation::Identity; 2]);
        let learned = init_mlp(&spec, 1).unwrap();
        let mut target = init_mlp(&spec, 2).unwrap();

        let mut full = target.clone();
        soft_update(&mut full, &learned, 1.0).unwrap();
        assert_eq!(full.flat_weights(), learned.flat_weights());

        let before = target.flat_weights();
        soft_update(&mut target, &learned, 0.0).unwrap();
        assert_eq!(target.flat_weights(), before);
    }

    #[test]
    fn soft_update_halfway() {
        let spec = MlpSpec::new(vec![1, 1], vec![OutputActivation::Identity]);
        let mut target = MlpParams::from_flat(&spec, &[0.0, 0.0]).unwrap();
        let learned = MlpParams::from_flat(&spec, &[2.0, 2.0]).unwrap();
        soft_update(&mut target, &learned, 0.5).unwrap();
        assert_eq!(target.flat_weights(), vec![1.0, 1.0]);
    }

    #[test]
    fn soft_update_converges_monotonically() {
        let spec = MlpSpec::new(vec![3, 4, 2], vec![OutputActivation::Identity; 2]);
        let learned = init_mlp(&spec, 1).unwrap();
        let mut target = init_mlp(&spec, 2).unwrap();
        let gap = |t: &MlpParams| {
            t.flat_weights()
                .iter()
                .zip(learned.flat_weights())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0_f64, f64::max)
        };
        let mut last = gap(&target);
        for _ in 0..50 {
            soft_update(&mut target, &learned, 0.1).unwrap();
            let now = gap(&target);
            assert!(now <= last + 1e-15);
            last = now;
        }
        assert!(last < gap(&init_mlp(&spec, 2).unwrap()) * 0.01);
    }

    #[test]
    fn soft_update_shape_mismatch() {
        let a = init_mlp(
            &MlpSpec::new(vec![3, 4, 2], vec![OutputActivation::Identity; 2]),
            0,
        )
        .unwrap();
        let mut b = init_mlp(
            &MlpSpec::new(vec![3, 5, 2], vec![OutputActivation::Identity; 2]),
            0,
        )
        .unwrap();
        assert!(matches!(
            soft_update(&mut b, &a, 0.5),
            Err(NeuralError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn flat_round_trip_is_bit_identical() {
        let spec = MlpSpec::new(
            vec![5, 9, 3],
            vec![
                OutputActivation::Tanh,
                OutputActivation::Logistic,
                OutputActivation::Identity,
            ],
        );
        let p = init_mlp(&spec, 33).unwrap();
        let q = MlpParams::from_flat(&spec, &p.flat_weights()).unwrap();
        let x = [0.3, -0.1, 0.9, 0.0, -0.7];
        assert_eq!(p.infer(&x).unwrap(), q.infer(&x).unwrap());
        assert_eq!(p.flat_weights(), q.flat_weights());
    }

    #[test]
    fn widened_column_preserves_function() {
        let spec = MlpSpec::new(vec![4, 8, 2], vec![OutputActivation::Tanh; 2]);
        let p = init_mlp(&spec, 9).unwrap();
        let wide = widen_input_column(&p, 4).unwrap();
        assert_eq!(wide.spec().layer_sizes, vec![5, 8, 2]);
        let x = [0.5, -0.25, 0.125, 0.75];
        let base = p.infer(&x).unwrap();
        for id in [0.0, 1.0] {
            let mut xe = x.to_vec();
            xe.push(id);
            assert_eq!(wide.infer(&xe).unwrap(), base);
        }
    }

    #[test]
    fn widened_mid_column_preserves_function() {
        let spec = MlpSpec::new(vec![4, 6, 1], vec![OutputActivation::Identity]);
        let p = init_mlp(&spec, 10).unwrap();
        let wide = widen_input_column(&p, 2).unwrap();
        let x = [0.5, -0.25, 0.125, 0.75];
        let mut xe = x.to_vec();
        xe.insert(2, 1.0);
        assert_eq!(wide.infer(&xe).unwrap(), p.infer(&x).unwrap());
    }
}
