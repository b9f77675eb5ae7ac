use crate::distributions::PrivacyParams;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

/// Which of the two adjacent parameters to release.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    V,
    W,
}

/// A pair of generator parameters (d x k) produced by adjacent datasets.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorPair {
    v: DMatrix<f64>,
    w: DMatrix<f64>,
}

impl GeneratorPair {
    /// Build from explicit matrices; `norm_cap` enforces the bounded
    /// parameter space when declared.
    pub fn new(v: DMatrix<f64>, w: DMatrix<f64>, norm_cap: Option<f64>) -> Result<Self> {
        if v.shape() != w.shape() {
            return Err(Error::domain(format!(
                "GeneratorPair: shapes differ, {:?} vs {:?}",
                v.shape(),
                w.shape()
            )));
        }
        let (d, k) = v.shape();
        if k == 0 || d < k {
            return Err(Error::domain(format!(
                "GeneratorPair: non-degeneracy requires d >= k >= 1, got d={d}, k={k}"
            )));
        }
        if let Some(c) = norm_cap {
            let (nv, nw) = (v.norm(), w.norm());
            if nv > c + 1e-12 || nw > c + 1e-12 {
                return Err(Error::domain(format!(
                    "GeneratorPair: norms ({nv}, {nw}) exceed the declared cap {c}"
                )));
            }
        }
        Ok(Self { v, w })
    }

    /// Collinear k = 1 pair with the given norms along e_1.
    pub fn collinear_k1(d: u32, norm_v: f64, norm_w: f64) -> Result<Self> {
        if !(norm_v >= 0.0 && norm_w >= 0.0) {
            return Err(Error::domain(
                "GeneratorPair: norms must be >= 0".to_string(),
            ));
        }
        let mut v = DMatrix::zeros(d as usize, 1);
        let mut w = DMatrix::zeros(d as usize, 1);
        v[(0, 0)] = norm_v;
        w[(0, 0)] = norm_w;
        Self::new(v, w, None)
    }

    /// The sweep harness convention: |v| = C and |w| = C - Delta, collinear
    /// along the first coordinate, so |v - w|_F equals the sensitivity.
    pub fn from_params(p: &PrivacyParams) -> Result<Self> {
        let mut v = DMatrix::zeros(p.d as usize, p.k as usize);
        let mut w = DMatrix::zeros(p.d as usize, p.k as usize);
        v[(0, 0)] = p.c_bound;
        w[(0, 0)] = p.c_bound - p.delta_sens;
        if w[(0, 0)] < 0.0 {
            return Err(Error::domain(format!(
                "collinear harness needs delta_sens <= C, got {} > {}",
                p.delta_sens, p.c_bound
            )));
        }
        Self::new(v, w, Some(p.c_bound))
    }

    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn w(&self) -> &DMatrix<f64> {
        &self.w
    }

    pub fn dims(&self) -> (usize, usize) {
        self.v.shape()
    }

    pub fn sensitivity(&self) -> f64 {
        (&self.v - &self.w).norm()
    }

    fn param(&self, side: Side) -> &DMatrix<f64> {
        match side {
            Side::V => &self.v,
            Side::W => &self.w,
        }
    }

    /// Draw one release: N (d x k) then Z (n_syn x d), each with i.i.d.
    /// standard normal entries, returning Z (param + N).
    pub fn sample_release(&self, n_syn: u64, side: Side, rng: &mut impl Rng) -> DMatrix<f64> {
        let (d, _) = self.dims();
        let noisy = self.noisy_param(side, rng);
        let z = DMatrix::from_fn(n_syn as usize, d, |_, _| {
            rng.sample::<f64, _>(StandardNormal)
        });
        z * noisy
    }

    /// Draw one Gram release (param + N)^T (param + N), a non-central
    /// Wishart matrix with non-centrality param^T param.
    ///
    /// Entries are accumulated in row order, so for k = 1 and param along
    /// e_1 this reproduces `NoncentralChiSq::sample` bit for bit on the same
    /// stream.
    pub fn sample_gram(&self, side: Side, rng: &mut impl Rng) -> DMatrix<f64> {
        let (d, k) = self.dims();
        let m = self.noisy_param(side, rng);
        let mut gram = DMatrix::zeros(k, k);
        for a in 0..k {
            for b in a..k {
                let mut sum = 0.0f64;
                for i in 0..d {
                    sum += m[(i, a)] * m[(i, b)];
                }
                gram[(a, b)] = sum;
                gram[(b, a)] = sum;
            }
        }
        gram
    }

    fn noisy_param(&self, side: Side, rng: &mut impl Rng) -> DMatrix<f64> {
        let (d, k) = self.dims();
        let param = self.param(side);
        let mut m = DMatrix::zeros(d, k);
        for i in 0..d {
            for j in 0..k {
                let g: f64 = rng.sample(StandardNormal);
                m[(i, j)] = param[(i, j)] + g;
            }
        }
        m
    }
}
