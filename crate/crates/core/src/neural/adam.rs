//! Adam optimizer with bias correction, shaped like the network it
//! updates. The step always descends; callers pass ascent gradients
//! negated.

use serde::{Deserialize, Serialize};

use crate::neural::mlp::{Dense, MlpGrads, MlpParams, NeuralError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamHyper {
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamHyper {
    fn default() -> Self {
        AdamHyper {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// First/second moment accumulators plus the step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    m: Vec<Dense>,
    v: Vec<Dense>,
    pub t: u64,
    pub hyper: AdamHyper,
}

impl AdamState {
    pub fn new(params: &MlpParams) -> Self {
        let zeros: Vec<Dense> = MlpGrads::zeros_like(params).layers;
        AdamState {
            m: zeros.clone(),
            v: zeros,
            t: 0,
            hyper: AdamHyper::default(),
        }
    }
}

/// One bias-corrected Adam descent step in place.
pub fn adam_step(
    params: &mut MlpParams,
    grads: &MlpGrads,
    state: &mut AdamState,
    lr: f64,
) -> Result<(), NeuralError> {
    if grads.layers.len() != state.m.len() {
        return Err(NeuralError::ShapeMismatch {
            what: "adam layers",
            expected: state.m.len(),
            got: grads.layers.len(),
        });
    }
    for (g, m) in grads.layers.iter().zip(&state.m) {
        if g.w.len() != m.w.len() || g.b.len() != m.b.len() {
            return Err(NeuralError::ShapeMismatch {
                what: "adam gradient",
                expected: m.w.len(),
                got: g.w.len(),
            });
        }
        if g.w.iter().chain(&g.b).any(|x| !x.is_finite()) {
            return Err(NeuralError::NonFiniteGradient);
        }
    }

    state.t += 1;
    let AdamHyper {
        beta1,
        beta2,
        epsilon,
    } = state.hyper;
    let bc1 = 1.0 - beta1.powi(state.t as i32);
    let bc2 = 1.0 - beta2.powi(state.t as i32);

    for (l, layer) in params.layers_mut().iter_mut().enumerate() {
        let g = &grads.layers[l];
        let m = &mut state.m[l];
        let v = &mut state.v[l];
        let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
            *m = beta1 * *m + (1.0 - beta1) * g;
            *v = beta2 * *v + (1.0 - beta2) * g * g;
            let m_hat = *m / bc1;
            let v_hat = *v / bc2;
            *p -= lr * m_hat / (v_hat.sqrt() + epsilon);
        };
        for i in 0..layer.w.len() {
            update(&mut layer.w[i], g.w[i], &mut m.w[i], &mut v.w[i]);
        }
        for i in 0..layer.b.len() {
            update(&mut layer.b[i], g.b[i], &mut m.b[i], &mut v.b[i]);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::mlp::{init_mlp, MlpSpec, OutputActivation};
    use approx::assert_abs_diff_eq;

    fn scalar_net(weight: f64) -> (MlpParams, MlpSpec) {
        let spec = MlpSpec::new(vec![1, 1], vec![OutputActivation::Identity]);
        let p = MlpParams::from_flat(&spec, &[weight, 0.0]).unwrap();
        (p, spec)
    }

    #[test]
    fn zero_gradient_leaves_params_unchanged() {
        let spec = MlpSpec::new(vec![3, 4, 2], vec![OutputActivation::Identity; 2]);
        let mut p = init_mlp(&spec, 1).unwrap();
        let before = p.flat_weights();
        let mut state = AdamState::new(&p);
        let grads = MlpGrads::zeros_like(&p);
        adam_step(&mut p, &grads, &mut state, 0.1).unwrap();
        assert_eq!(p.flat_weights(), before);
        assert_eq!(state.t, 1);
    }

    #[test]
    fn constant_gradient_matches_hand_recurrence() {
        let (mut p, _) = scalar_net(0.0);
        let mut state = AdamState::new(&p);
        let mut grads = MlpGrads::zeros_like(&p);
        grads.layers[0].w[0] = 1.0;

        // Reference recurrence computed independently.
        let (b1, b2, eps) = (0.9, 0.999, 1e-8);
        let (mut m, mut v, mut w) = (0.0_f64, 0.0_f64, 0.0_f64);
        for t in 1..=5 {
            adam_step(&mut p, &grads, &mut state, 0.1).unwrap();
            m = b1 * m + (1.0 - b1) * 1.0;
            v = b2 * v + (1.0 - b2) * 1.0;
            let m_hat = m / (1.0 - b1.powi(t));
            let v_hat = v / (1.0 - b2.powi(t));
            w -= 0.1 * m_hat / (v_hat.sqrt() + eps);
            assert_abs_diff_eq!(p.flat_weights()[0], w, epsilon = 1e-15);
        }
        // First step magnitude is ~lr thanks to bias correction.
        let (mut q, _) = scalar_net(0.0);
        let mut s2 = AdamState::new(&q);
        adam_step(&mut q, &grads, &mut s2, 0.1).unwrap();
        assert_abs_diff_eq!(q.flat_weights()[0].abs(), 0.1, epsilon = 1e-8);
    }

    #[test]
    fn nan_gradient_rejected() {
        let (mut p, _) = scalar_net(0.0);
        let mut state = AdamState::new(&p);
        let mut grads = MlpGrads::zeros_like(&p);
        grads.layers[0].w[0] = f64::NAN;
        assert!(matches!(
            adam_step(&mut p, &grads, &mut state, 0.1),
            Err(NeuralError::NonFiniteGradient)
        ));
    }
}
