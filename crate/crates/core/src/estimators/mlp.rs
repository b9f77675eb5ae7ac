//! Minimal two-layer network and Adam optimizer for the variational Rényi
//! objective. The network maps R^input_dim -> (-inf, 0): tanh hidden layer,
//! scalar output, then a strictly negative output transform with polynomial
//! growth, g(z) = -(softplus(z) + softplus(z)^2 / 2) - 1e-6.
//!
//! The polynomial growth matters: near the optimum the magnitude of the test
//! function scales like a power of the density ratio, so an output that is
//! asymptotically linear needs enormous weights to cover the tails, while
//! the quadratic term reaches the same range within a short Adam schedule.

use rand::Rng;
use rand_distr::StandardNormal;

const OUTPUT_FLOOR: f64 = 1e-6;

fn softplus(y: f64) -> f64 {
    y.max(0.0) + (-y.abs()).exp().ln_1p()
}

// Output magnitude |g| without the floor, and its derivative in y.
fn poly_softplus(y: f64) -> f64 {
    let s = softplus(y);
    s + 0.5 * s * s
}

fn poly_softplus_deriv(y: f64) -> f64 {
    sigmoid(y) * (1.0 + softplus(y))
}

fn sigmoid(y: f64) -> f64 {
    if y >= 0.0 {
        1.0 / (1.0 + (-y).exp())
    } else {
        let e = y.exp();
        e / (1.0 + e)
    }
}

// Dot product with four independent accumulators; the serial float-add
// chain is otherwise the throughput ceiling of the whole training loop.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let quads = a.len() / 4;
    for i in 0..quads {
        let j = 4 * i;
        acc[0] += a[j] * b[j];
        acc[1] += a[j + 1] * b[j + 1];
        acc[2] += a[j + 2] * b[j + 2];
        acc[3] += a[j + 3] * b[j + 3];
    }
    let mut sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for j in 4 * quads..a.len() {
        sum += a[j] * b[j];
    }
    sum
}

/// Two-layer scalar network with strictly negative output. Parameters live
/// in one flat buffer: [w1 (hidden x input), b1 (hidden), w2 (hidden), b2].
#[derive(Debug, Clone)]
pub struct Mlp {
    pub input_dim: usize,
    pub hidden: usize,
    pub params: Vec<f64>,
}

impl Mlp {
    pub fn init(input_dim: usize, hidden: usize, rng: &mut impl Rng) -> Self {
        let n = hidden * input_dim + 2 * hidden + 1;
        let mut params = vec![0.0f64; n];
        let w1_scale = 1.0 / (input_dim as f64).sqrt();
        for p in params[..hidden * input_dim].iter_mut() {
            *p = w1_scale * rng.sample::<f64, _>(StandardNormal);
        }
        let w2_scale = 1.0 / (hidden as f64).sqrt();
        let w2_start = hidden * input_dim + hidden;
        for p in params[w2_start..w2_start + hidden].iter_mut() {
            *p = w2_scale * rng.sample::<f64, _>(StandardNormal);
        }
        Self {
            input_dim,
            hidden,
            params,
        }
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    fn split(&self) -> (&[f64], &[f64], &[f64], f64) {
        let (h, i) = (self.hidden, self.input_dim);
        let w1 = &self.params[..h * i];
        let b1 = &self.params[h * i..h * i + h];
        let w2 = &self.params[h * i + h..h * i + 2 * h];
        let b2 = self.params[h * i + 2 * h];
        (w1, b1, w2, b2)
    }

    fn pre_activation(&self, x: &[f64], hidden_out: &mut [f64]) -> f64 {
        let (w1, b1, w2, b2) = self.split();
        let mut y = b2;
        for j in 0..self.hidden {
            let row = &w1[j * self.input_dim..(j + 1) * self.input_dim];
            let a = dot(row, x) + b1[j];
            let t = a.tanh();
            hidden_out[j] = t;
            y += w2[j] * t;
        }
        y
    }

    /// g(x) < 0 for every input.
    pub fn forward(&self, x: &[f64]) -> f64 {
        let mut hidden = vec![0.0; self.hidden];
        let y = self.pre_activation(x, &mut hidden);
        -poly_softplus(y) - OUTPUT_FLOOR
    }

    /// Variational objective on one minibatch pair and its parameter
    /// gradient:
    /// F = mean_i g(Y_i) + (1/(alpha-1)) log(mean_i |g(X_i)|^{(alpha-1)/alpha}),
    /// with X ~ P (the numerator distribution) and Y ~ Q.
    ///
    /// Returns (F, grad F). The gradient buffer is laid out like `params`.
    pub fn objective_and_grad(
        &self,
        batch_p: &[Vec<f64>],
        batch_q: &[Vec<f64>],
        alpha: f64,
    ) -> (f64, Vec<f64>) {
        let beta = (alpha - 1.0) / alpha;
        let mut grad = vec![0.0f64; self.n_params()];

        // Q side: F gets mean g(Y); dF/dg = 1/l per sample.
        let lq = batch_q.len() as f64;
        let mut hidden_q = vec![0.0f64; batch_q.len() * self.hidden];
        let mut coeff_q = Vec::with_capacity(batch_q.len());
        let mut q_term = 0.0;
        for (y, h) in batch_q.iter().zip(hidden_q.chunks_mut(self.hidden)) {
            let pre = self.pre_activation(y, h);
            q_term += -poly_softplus(pre) - OUTPUT_FLOOR;
            coeff_q.push(-poly_softplus_deriv(pre) / lq);
        }
        q_term /= lq;

        // P side: forward pass caching the hidden activations, then the
        // per-sample weights once the batch mean of |g|^beta is known.
        let lp = batch_p.len() as f64;
        let mut powers = Vec::with_capacity(batch_p.len());
        let mut hidden_p = vec![0.0f64; batch_p.len() * self.hidden];
        let mut mean_power = 0.0;
        for (x, h) in batch_p.iter().zip(hidden_p.chunks_mut(self.hidden)) {
            let pre = self.pre_activation(x, h);
            let mag = poly_softplus(pre) + OUTPUT_FLOOR;
            let pw = mag.powf(beta);
            powers.push((pre, mag, pw));
            mean_power += pw;
        }
        mean_power /= lp;
        let p_term = mean_power.ln() / (alpha - 1.0);
        // d/dpre of |g|^beta = beta |g|^{beta-1} * d|g|/dpre.
        let coeff_p: Vec<f64> = powers
            .iter()
            .map(|(pre, mag, pw)| {
                beta * pw / mag * poly_softplus_deriv(*pre) / (lp * (alpha - 1.0) * mean_power)
            })
            .collect();

        self.backward_batch(batch_q, &hidden_q, &coeff_q, &mut grad);
        self.backward_batch(batch_p, &hidden_p, &coeff_p, &mut grad);
        (q_term + p_term, grad)
    }

    // Backpropagate dF/dpre = coeff[s] through both layers for a whole
    // batch. Samples are processed in blocks so each gradient row stays hot
    // while a block's inputs are streamed from cache.
    fn backward_batch(&self, xs: &[Vec<f64>], hidden: &[f64], coeff: &[f64], grad: &mut [f64]) {
        const BLOCK: usize = 32;
        let (h, i) = (self.hidden, self.input_dim);
        let (_, _, w2, _) = self.split();

        // dpre1[s][j] = coeff[s] * w2[j] * (1 - t[s][j]^2), plus the cheap
        // w2/b1/b2 pieces in the same sweep.
        let mut dpre1 = vec![0.0f64; xs.len() * h];
        for (s, (c, t_row)) in coeff.iter().zip(hidden.chunks(h)).enumerate() {
            let d_row = &mut dpre1[s * h..(s + 1) * h];
            for j in 0..h {
                let t = t_row[j];
                grad[h * i + h + j] += c * t; // w2
                let d = c * w2[j] * (1.0 - t * t);
                d_row[j] = d;
                grad[h * i + j] += d; // b1
            }
            grad[h * i + 2 * h] += c; // b2
        }

        for (block_start, x_block) in (0..xs.len()).step_by(BLOCK).zip(xs.chunks(BLOCK)) {
            for j in 0..h {
                let row = &mut grad[j * i..(j + 1) * i];
                for (s_off, x) in x_block.iter().enumerate() {
                    let d = dpre1[(block_start + s_off) * h + j];
                    for (g, v) in row.iter_mut().zip(x) {
                        *g += d * v; // w1
                    }
                }
            }
        }
    }

    /// Objective only, for validation and final scoring.
    pub fn objective(&self, batch_p: &[Vec<f64>], batch_q: &[Vec<f64>], alpha: f64) -> f64 {
        let beta = (alpha - 1.0) / alpha;
        let mut hidden = vec![0.0f64; self.hidden];
        let q_term = batch_q
            .iter()
            .map(|y| -poly_softplus(self.pre_activation(y, &mut hidden)) - OUTPUT_FLOOR)
            .sum::<f64>()
            / batch_q.len() as f64;
        let mean_power = batch_p
            .iter()
            .map(|x| (poly_softplus(self.pre_activation(x, &mut hidden)) + OUTPUT_FLOOR).powf(beta))
            .sum::<f64>()
            / batch_p.len() as f64;
        q_term + mean_power.ln() / (alpha - 1.0)
    }
}

/// Adam with the usual first/second moment decay 0.9 / 0.999 and
/// epsilon 1e-8, stepping in the ascent direction.
#[derive(Debug, Clone)]
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    step: u64,
}

impl Adam {
    pub fn new(lr: f64, n_params: usize) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
            step: 0,
        }
    }

    pub fn ascend(&mut self, params: &mut [f64], grad: &[f64]) {
        self.step += 1;
        let bc1 = 1.0 - self.beta1.powi(self.step as i32);
        let bc2 = 1.0 - self.beta2.powi(self.step as i32);
        for ((p, g), (m, v)) in params
            .iter_mut()
            .zip(grad)
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            let m_hat = *m / bc1;
            let v_hat = *v / bc2;
            *p += self.lr * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}
