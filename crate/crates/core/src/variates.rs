//! Random variates built directly on [`RngCore`].
//!
//! Gamma variates use the Marsaglia–Tsang squeeze method; shapes below one are
//! boosted by drawing at `shape + 1` and multiplying by `U^(1/shape)`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// The generator used for every seeded computation in this crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A generator for stream `stream` of `seed`; distinct streams never overlap.
pub fn stream_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer, used to derive child seeds from a parent seed.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform on the open interval (0, 1).
#[inline]
pub fn uniform_open<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    ((rng.next_u64() >> 11) as f64 + 0.5) * SCALE
}

/// Standard normal variate by the Marsaglia polar method.
pub fn standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u = 2.0 * uniform_open(rng) - 1.0;
        let v = 2.0 * uniform_open(rng) - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * libm::sqrt(-2.0 * libm::log(s) / s);
        }
    }
}

pub fn normal<R: RngCore + ?Sized>(rng: &mut R, mean: f64, sd: f64) -> f64 {
    mean + sd * standard_normal(rng)
}

/// Gamma variate with the given shape and unit rate.
///
/// Returns `0.0` when a tiny shape makes the result underflow.
pub fn standard_gamma<R: RngCore + ?Sized>(rng: &mut R, shape: f64) -> f64 {
    debug_assert!(shape > 0.0);
    if shape < 1.0 {
        let g = standard_gamma(rng, shape + 1.0);
        let log_u = libm::log(uniform_open(rng));
        return libm::exp(libm::log(g) + log_u / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / libm::sqrt(9.0 * d);
    loop {
        let (x, v) = loop {
            let x = standard_normal(rng);
            let v = 1.0 + c * x;
            if v > 0.0 {
                break (x, v * v * v);
            }
        };
        let u = uniform_open(rng);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if libm::log(u) < 0.5 * x2 + d * (1.0 - v + libm::log(v)) {
            return d * v;
        }
    }
}

/// Natural log of a unit-rate gamma variate; stays finite for shapes so small
/// that the variate itself underflows.
pub fn ln_standard_gamma<R: RngCore + ?Sized>(rng: &mut R, shape: f64) -> f64 {
    if shape < 1.0 {
        let g = standard_gamma(rng, shape + 1.0);
        let log_u = libm::log(uniform_open(rng));
        return libm::log(g) + log_u / shape;
    }
    libm::log(standard_gamma(rng, shape))
}

/// Gamma variate with shape `shape` and rate `rate`.
pub fn gamma<R: RngCore + ?Sized>(rng: &mut R, shape: f64, rate: f64) -> f64 {
    standard_gamma(rng, shape) / rate
}

/// Exponential variate with unit rate.
pub fn standard_exponential<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    -libm::log(uniform_open(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_in_open_interval() {
        let mut rng = seeded_rng(1);
        for _ in 0..10_000 {
            let u = uniform_open(&mut rng);
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn normal_moments() {
        let mut rng = seeded_rng(2);
        let n = 200_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let z = standard_normal(&mut rng);
            s += z;
            s2 += z * z;
        }
        let mean = s / n as f64;
        let var = s2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01);
        assert!((var - 1.0).abs() < 0.02);
    }

    #[test]
    fn small_shape_gamma_mean() {
        let mut rng = seeded_rng(3);
        let n = 200_000;
        let shape = 0.3;
        let mean = (0..n).map(|_| standard_gamma(&mut rng, shape)).sum::<f64>() / n as f64;
        // sd of the mean is sqrt(0.3 / n) ≈ 0.0012
        assert!((mean - shape).abs() < 0.006, "{mean}");
    }

    #[test]
    fn streams_differ() {
        let mut a = stream_rng(7, 0);
        let mut b = stream_rng(7, 1);
        assert_ne!(a.next_u64(), b.next_u64());
        assert_ne!(mix_seed(1, 2), mix_seed(1, 3));
    }
}
