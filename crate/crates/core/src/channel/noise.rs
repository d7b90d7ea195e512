use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::seed::rng_from_seed;
use crate::ComplexStream;

/// `len` circularly-symmetric complex Gaussian samples of mean power `power`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, len: usize, power: f64) -> Vec<Complex64> {
    let sigma = (power.max(0.0)).sqrt() * FRAC_1_SQRT_2;
    (0..len)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re * sigma, im * sigma)
        })
        .collect()
}

fn db_to_ratio(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Adds noise of power `reference_power / 10^(snr_db/10)`. An infinite SNR
/// adds nothing.
pub fn add_awgn(r: &ComplexStream, snr_db: f64, reference_power: f64, seed: u64) -> ComplexStream {
    if snr_db == f64::INFINITY {
        return r.clone();
    }
    let noise = complex_gaussian(&mut rng_from_seed(seed), r.len(), reference_power / db_to_ratio(snr_db));
    r.with_samples(r.samples().iter().zip(noise).map(|(s, n)| s + n).collect())
}

/// Adds Gaussian multiuser interference at `sir_db` below the power of `r`.
/// An infinite SIR leaves the stream untouched.
pub fn add_interference(r: &ComplexStream, sir_db: f64, seed: u64) -> ComplexStream {
    add_awgn(r, sir_db, r.mean_power(), seed)
}
