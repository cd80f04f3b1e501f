//! Rejection-free sampling: a uniform first angle, a wrapped Cauchy second
//! angle given the first, and a wrapped Cauchy third angle given both.
//!
//! Every random stream is a ChaCha8 generator keyed by `(seed, stream)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::distributions::Open01;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angles::{reduce_angle, AngleSample};
use crate::density::{real_arg, WrappedCauchyParams};
use crate::params::{Pair, RhoParams};

/// Seed and stream identifier of a reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngState {
    pub seed: u64,
    pub stream: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngState {
    pub fn new(seed: u64, stream: u64) -> RngState {
        RngState { seed, stream }
    }

    /// Generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Child stream for work unit `index`; same seed, distinct stream id.
    pub fn derive(&self, index: u64) -> RngState {
        RngState { seed: self.seed, stream: splitmix64(self.stream ^ splitmix64(index)) }
    }
}

/// `eta + 2 atan(((1 - delta) / (1 + delta)) tan(pi (omega - 1/2)))`, reduced
/// into `[0, 2pi)`. Maps a uniform `omega` on `(0, 1)` to a wrapped Cauchy draw.
pub fn wrapped_cauchy_quantile(omega: f64, w: &WrappedCauchyParams) -> f64 {
    let c = (1.0 - w.delta) / (1.0 + w.delta);
    reduce_angle(w.eta + 2.0 * (c * (PI * (omega - 0.5)).tan()).atan())
}

/// Sampler with the parameter-dependent constants evaluated once.
#[derive(Debug, Clone, Copy)]
pub struct TwccSampler {
    shift12: f64,
    delta12: f64,
    /// `-rho12 / rho23` and `-rho12 / rho13`, the coefficients of
    /// `e^{i u1}` and `e^{i u2}` in the location of `U3` given `(u1, u2)`.
    k1: f64,
    k2: f64,
}

impl TwccSampler {
    pub fn new(p: &RhoParams) -> TwccSampler {
        let f = p.pairwise_phi(Pair::P12);
        TwccSampler {
            shift12: real_arg(f.varphi),
            delta12: f.varphi.abs(),
            k1: -p.rho12() / p.rho23(),
            k2: -p.rho12() / p.rho13(),
        }
    }

    /// One draw from three uniforms on `(0, 1)`.
    pub fn transform(&self, omega: [f64; 3]) -> [f64; 3] {
        let u1 = TAU * omega[0];
        let w2 = WrappedCauchyParams { eta: u1 + self.shift12, delta: self.delta12, original_delta: self.delta12 };
        let u2 = wrapped_cauchy_quantile(omega[1], &w2);
        let w = Complex64::from_polar(self.k1, u1) + Complex64::from_polar(self.k2, u2);
        let w3 = WrappedCauchyParams::from_complex(w).expect("conditional concentration differs from one");
        let u3 = wrapped_cauchy_quantile(omega[2], &w3);
        [reduce_angle(u1), u2, u3]
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 3] {
        let omega = [rng.sample(Open01), rng.sample(Open01), rng.sample(Open01)];
        self.transform(omega)
    }
}

/// `n` independent draws using the stream `rng`.
pub fn sample_twcc(n: usize, p: &RhoParams, rng: RngState) -> AngleSample {
    let s = TwccSampler::new(p);
    let mut g = rng.rng();
    let rows = (0..n).map(|_| s.draw(&mut g)).collect();
    AngleSample::new(rows).expect("sampled angles are finite")
}
