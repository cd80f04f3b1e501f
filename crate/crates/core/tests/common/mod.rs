#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twcc::params::{others, validate_rho, RhoParams};

/// Valid parameters with a chosen dominant axis and dominance ratio.
///
/// The two parameters touching the dominant axis are log-uniform in
/// `[0.2, 5]`; the third is set so that
/// `|rho_jk| (1/|rho_ij| + 1/|rho_ik|) = ratio`. `negative_axis` puts the two
/// negative parameters on that axis; `None` keeps all three positive.
pub fn build_rho(dominant: usize, a: f64, b: f64, ratio: f64, negative_axis: Option<usize>) -> RhoParams {
    let (j, k) = others(dominant);
    let mut m = [[0.0f64; 3]; 3];
    let jk = ratio / (1.0 / a + 1.0 / b);
    for (x, y, v) in [(dominant, j, a), (dominant, k, b), (j, k, jk)] {
        m[x][y] = v;
        m[y][x] = v;
    }
    if let Some(n) = negative_axis {
        for x in 0..3 {
            if x != n {
                m[n][x] = -m[n][x];
                m[x][n] = -m[x][n];
            }
        }
    }
    validate_rho(m[0][1], m[0][2], m[1][2]).expect("constructed parameters are valid")
}

/// Random valid parameters with dominance ratio in `[0.1, 0.8]`, cycling
/// through all dominant axes and sign patterns.
pub fn random_rho(rng: &mut ChaCha8Rng, index: usize) -> RhoParams {
    let dominant = index % 3;
    let negative = match (index / 3) % 4 {
        0 => None,
        s => Some(s - 1),
    };
    let a = (rng.gen_range(0.2f64.ln()..5.0f64.ln())).exp();
    let b = (rng.gen_range(0.2f64.ln()..5.0f64.ln())).exp();
    let ratio = rng.gen_range(0.1..0.8);
    build_rho(dominant, a, b, ratio, negative)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` random parameters followed by the fixed ones in `extra`.
pub fn rho_set(seed: u64, n: usize, extra: &[[f64; 3]]) -> Vec<RhoParams> {
    let mut g = rng(seed);
    let mut v: Vec<RhoParams> = (0..n).map(|i| random_rho(&mut g, i)).collect();
    v.extend(extra.iter().map(|r| validate_rho(r[0], r[1], r[2]).unwrap()));
    v
}

/// Wrapped distance between two angles.
pub fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}
