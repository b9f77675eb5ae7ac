//! Scratch driver for eyeballing variational-estimator calibration and
//! runtime under the CI profile.

use rand_distr::{Distribution, StandardNormal};
use std::time::Instant;
use synamp::distributions::NoncentralChiSq;
use synamp::estimators::{renyi_ncx2_quadrature, variational_renyi, TrainConfig};
use synamp::mathkit::RngStream;

fn main() {
    let cfg = TrainConfig::ci(2.0, RngStream::new(2024, 0));

    let t = Instant::now();
    let p = |rng: &mut rand_chacha::ChaCha8Rng, out: &mut [f64]| {
        out[0] = 1.0 + <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng);
    };
    let q = |rng: &mut rand_chacha::ChaCha8Rng, out: &mut [f64]| {
        out[0] = <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng);
    };
    let est = variational_renyi(&p, &q, 1, &cfg).unwrap();
    println!(
        "gaussian shift: est {:.4} ± {:.4} (exact 1.0, rel err {:.3}) in {:.1?}",
        est.mean,
        est.std,
        (est.mean - 1.0).abs(),
        t.elapsed()
    );

    let t = Instant::now();
    let pv = NoncentralChiSq::new(10, 2.0).unwrap();
    let pw = NoncentralChiSq::new(10, 1.0).unwrap();
    let p = move |rng: &mut rand_chacha::ChaCha8Rng, out: &mut [f64]| out[0] = pv.sample(rng);
    let q = move |rng: &mut rand_chacha::ChaCha8Rng, out: &mut [f64]| out[0] = pw.sample(rng);
    let est = variational_renyi(&p, &q, 1, &cfg).unwrap();
    let exact = renyi_ncx2_quadrature(2.0, 10, 2.0, 1.0, 1e-10).unwrap();
    println!(
        "ncx2 pair: est {:.4} ± {:.4} vs quadrature {:.4} (rel err {:.3}) in {:.1?}",
        est.mean,
        est.std,
        exact,
        (est.mean - exact).abs() / exact,
        t.elapsed()
    );

    let t = Instant::now();
    let same_a = |rng: &mut rand_chacha::ChaCha8Rng, out: &mut [f64]| {
        out[0] = <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng);
    };
    let est = variational_renyi(&same_a, &same_a, 1, &cfg).unwrap();
    println!(
        "p = q: est {:.4} ± {:.4} in {:.1?}",
        est.mean,
        est.std,
        t.elapsed()
    );
}
