//! Parameter spaces of the trivariate wrapped Cauchy copula.
//!
//! The natural parametrization is the dependence triple `(rho12, rho13, rho23)`.
//! Equivalent views used elsewhere in the crate:
//!
//! * [`PhiTriple`]: the complex-form weights with `rho_ij = phi_i * phi_j`;
//! * [`PairwisePhi`]: the parameter of a bivariate marginal;
//! * [`ZetaBranch`]: the open-box coordinates used by the likelihood optimizer;
//! * [`StarParams`]: the full/partial dependence pair for the branch where
//!   `rho23` is the small parameter.
//!
//! Axes are 0-based in code (`0 -> u1`) and printed 1-based.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TwccError};

/// Relative margin applied to every strict validity inequality.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

/// Relative tolerance of the identifiability constraint `rho12 rho13 rho23 = 1`.
pub const NORMALIZED_TOL: f64 = 1e-12;

/// An unordered pair of axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pair {
    P12,
    P13,
    P23,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::P12, Pair::P13, Pair::P23];

    /// Position in `[rho12, rho13, rho23]`.
    pub fn index(self) -> usize {
        match self {
            Pair::P12 => 0,
            Pair::P13 => 1,
            Pair::P23 => 2,
        }
    }

    /// The two axes, smaller first.
    pub fn axes(self) -> (usize, usize) {
        match self {
            Pair::P12 => (0, 1),
            Pair::P13 => (0, 2),
            Pair::P23 => (1, 2),
        }
    }

    /// The axis not in the pair.
    pub fn complement(self) -> usize {
        match self {
            Pair::P12 => 2,
            Pair::P13 => 1,
            Pair::P23 => 0,
        }
    }

    pub fn from_axes(a: usize, b: usize) -> Result<Pair> {
        match (a.min(b), a.max(b)) {
            (0, 1) => Ok(Pair::P12),
            (0, 2) => Ok(Pair::P13),
            (1, 2) => Ok(Pair::P23),
            _ => Err(TwccError::InvalidArgument(format!("no axis pair ({a}, {b})"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pair::P12 => "12",
            Pair::P13 => "13",
            Pair::P23 => "23",
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A permutation `(i, j, k)` of the axes `(0, 1, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Perm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Perm {
    /// The three `(i, j, k)` choices scanned by the likelihood maximizer, in the
    /// order `(j, k) = (1,2), (2,3), (3,1)`.
    pub const SEARCH_ORDER: [Perm; 3] = [
        Perm { i: 2, j: 0, k: 1 },
        Perm { i: 0, j: 1, k: 2 },
        Perm { i: 1, j: 2, k: 0 },
    ];

    pub fn new(i: usize, j: usize, k: usize) -> Result<Perm> {
        let mut seen = [false; 3];
        for a in [i, j, k] {
            if a > 2 || seen[a] {
                return Err(TwccError::InvalidArgument(format!(
                    "({i}, {j}, {k}) is not a permutation of (0, 1, 2)"
                )));
            }
            seen[a] = true;
        }
        Ok(Perm { i, j, k })
    }

    /// 1-based triple, used for reporting and tie-breaking.
    pub fn one_based(self) -> (usize, usize, usize) {
        (self.i + 1, self.j + 1, self.k + 1)
    }

    pub fn pair_ij(self) -> Pair {
        Pair::from_axes(self.i, self.j).expect("valid permutation")
    }

    pub fn pair_ik(self) -> Pair {
        Pair::from_axes(self.i, self.k).expect("valid permutation")
    }

    pub fn pair_jk(self) -> Pair {
        Pair::from_axes(self.j, self.k).expect("valid permutation")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j, k) = self.one_based();
        write!(f, "({i},{j},{k})")
    }
}

/// Validated dependence triple `(rho12, rho13, rho23)`.
///
/// Validity: every entry nonzero and finite, positive product, and for the
/// dominant axis `i` (with `{j, k}` the other two)
/// `|rho_jk| < |rho_ij rho_ik| / (|rho_ij| + |rho_ik|)`.
/// At most one axis can satisfy this (it is equivalent to
/// `|phi_i| > |phi_j| + |phi_k|`), so the dominant axis is unique.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct RhoParams {
    rho: [f64; 3],
    dominant: usize,
}

impl TryFrom<[f64; 3]> for RhoParams {
    type Error = TwccError;

    fn try_from(r: [f64; 3]) -> Result<Self> {
        RhoParams::new(r[0], r[1], r[2])
    }
}

impl From<RhoParams> for [f64; 3] {
    fn from(p: RhoParams) -> Self {
        p.rho
    }
}

/// `|rho_jk| (1/|rho_ij| + 1/|rho_ik|)` for dominant axis `i`; valid iff `< 1`.
fn branch_ratio(rho: &[f64; 3], i: usize) -> f64 {
    let (j, k) = others(i);
    let r_ij = rho[Pair::from_axes(i, j).unwrap().index()].abs();
    let r_ik = rho[Pair::from_axes(i, k).unwrap().index()].abs();
    let r_jk = rho[Pair::from_axes(j, k).unwrap().index()].abs();
    r_jk * (1.0 / r_ij + 1.0 / r_ik)
}

/// The two axes other than `i`, in increasing order.
pub fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

impl RhoParams {
    /// Validates a dependence triple. Same as [`validate_rho`].
    pub fn new(rho12: f64, rho13: f64, rho23: f64) -> Result<RhoParams> {
        let rho = [rho12, rho13, rho23];
        for (value, name) in rho.iter().zip(["rho12", "rho13", "rho23"]) {
            if !value.is_finite() {
                return Err(TwccError::NonFinite { name, value: *value });
            }
        }
        for pair in Pair::ALL {
            if rho[pair.index()] == 0.0 {
                return Err(TwccError::ZeroParameter {
                    pair: match pair {
                        Pair::P12 => "rho12",
                        Pair::P13 => "rho13",
                        Pair::P23 => "rho23",
                    },
                });
            }
        }
        let product = rho12 * rho13 * rho23;
        if !(product > 0.0) {
            return Err(TwccError::SignCondition { product });
        }
        let ratios = [branch_ratio(&rho, 0), branch_ratio(&rho, 1), branch_ratio(&rho, 2)];
        let (dominant, best) = ratios
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("three ratios");
        if best < 1.0 - BOUNDARY_MARGIN {
            Ok(RhoParams { rho, dominant })
        } else if best <= 1.0 + BOUNDARY_MARGIN {
            Err(TwccError::DegenerateBoundary { ratio: best })
        } else {
            Err(TwccError::NoValidPermutation { best_ratio: best, dominant: dominant + 1 })
        }
    }

    pub fn rho12(&self) -> f64 {
        self.rho[0]
    }

    pub fn rho13(&self) -> f64 {
        self.rho[1]
    }

    pub fn rho23(&self) -> f64 {
        self.rho[2]
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.rho
    }

    pub fn get(&self, pair: Pair) -> f64 {
        self.rho[pair.index()]
    }

    /// `rho_ab` for two distinct axes.
    pub fn between(&self, a: usize, b: usize) -> f64 {
        self.rho[Pair::from_axes(a, b).expect("distinct axes").index()]
    }

    /// The unique axis `i` whose branch inequality holds.
    pub fn dominant(&self) -> usize {
        self.dominant
    }

    /// Every axis whose branch inequality holds (a single element).
    pub fn satisfied_branches(&self) -> Vec<usize> {
        (0..3)
            .filter(|&i| branch_ratio(&self.rho, i) < 1.0 - BOUNDARY_MARGIN)
            .collect()
    }

    /// Branch ratio at the dominant axis, in `(0, 1)`.
    pub fn boundary_ratio(&self) -> f64 {
        branch_ratio(&self.rho, self.dominant)
    }

    pub fn product(&self) -> f64 {
        self.rho[0] * self.rho[1] * self.rho[2]
    }

    pub fn is_normalized(&self) -> bool {
        (self.product() - 1.0).abs() <= NORMALIZED_TOL
    }

    /// `c * rho` for `c > 0`; the density is unchanged.
    pub fn scaled(&self, c: f64) -> Result<RhoParams> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(TwccError::InvalidArgument(format!("scale {c} must be positive")));
        }
        RhoParams::new(c * self.rho[0], c * self.rho[1], c * self.rho[2])
    }

    /// Rescales to `rho12 rho13 rho23 = 1`.
    pub fn normalize(&self) -> RhoParams {
        let c = self.product().powf(-1.0 / 3.0);
        let rho = self.rho.map(|r| r * c);
        // scaling preserves the branch ratios exactly in exact arithmetic
        RhoParams { rho, dominant: self.dominant }
    }

    pub fn to_phi(&self) -> PhiTriple {
        rho_to_phi(self)
    }

    pub fn pairwise_phi(&self, pair: Pair) -> PairwisePhi {
        pairwise_phi(self, pair)
    }
}

impl fmt::Display for RhoParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.rho[0], self.rho[1], self.rho[2])
    }
}

/// Validates `(rho12, rho13, rho23)`.
pub fn validate_rho(rho12: f64, rho13: f64, rho23: f64) -> Result<RhoParams> {
    RhoParams::new(rho12, rho13, rho23)
}

/// Rescales by `c = (rho12 rho13 rho23)^(-1/3)`.
pub fn normalize_rho(p: &RhoParams) -> RhoParams {
    p.normalize()
}

/// Complex-form weights `(phi1, phi2, phi3)` with `rho_ij = phi_i phi_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiTriple {
    phi: [f64; 3],
    dominant: usize,
}

impl PhiTriple {
    /// Requires `|phi_i| > |phi_j| + |phi_k|` for some axis (strictly, with the
    /// relative boundary margin) and no zero entries.
    pub fn new(phi1: f64, phi2: f64, phi3: f64) -> Result<PhiTriple> {
        let phi = [phi1, phi2, phi3];
        for (value, name) in phi.iter().zip(["phi1", "phi2", "phi3"]) {
            if !value.is_finite() {
                return Err(TwccError::NonFinite { name, value: *value });
            }
        }
        if let Some(pos) = phi.iter().position(|&p| p == 0.0) {
            return Err(TwccError::ZeroParameter { pair: ["phi1", "phi2", "phi3"][pos] });
        }
        let abs = phi.map(f64::abs);
        let dominant = (0..3).max_by(|&a, &b| abs[a].total_cmp(&abs[b])).unwrap();
        let (j, k) = others(dominant);
        let ratio = (abs[j] + abs[k]) / abs[dominant];
        if ratio < 1.0 - BOUNDARY_MARGIN {
            Ok(PhiTriple { phi, dominant })
        } else if ratio <= 1.0 + BOUNDARY_MARGIN {
            Err(TwccError::DegenerateBoundary { ratio })
        } else {
            Err(TwccError::NoValidPermutation { best_ratio: ratio, dominant: dominant + 1 })
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.phi
    }

    pub fn dominant(&self) -> usize {
        self.dominant
    }

    pub fn to_rho(&self) -> Result<RhoParams> {
        phi_to_rho(self)
    }
}

/// `phi_i = sgn(rho_jk) |rho_ij rho_ik / rho_jk|^(1/2)`.
pub fn rho_to_phi(p: &RhoParams) -> PhiTriple {
    let mut phi = [0.0; 3];
    for (i, slot) in phi.iter_mut().enumerate() {
        let (j, k) = others(i);
        let r_jk = p.between(j, k);
        *slot = r_jk.signum() * (p.between(i, j) * p.between(i, k) / r_jk).abs().sqrt();
    }
    PhiTriple { phi, dominant: p.dominant() }
}

pub fn phi_to_rho(q: &PhiTriple) -> Result<RhoParams> {
    let [a, b, c] = q.phi;
    RhoParams::new(a * b, a * c, b * c)
}

/// `(2 pi)^3 c2`, the square root of the normalizing radicand.
pub(crate) fn radicand_root(p: &RhoParams) -> f64 {
    let [r12, r13, r23] = p.rho;
    let a = r12 * r13 / r23;
    let b = r12 * r23 / r13;
    let c = r13 * r23 / r12;
    (a * a + b * b + c * c - 2.0 * (r12 * r12 + r13 * r13 + r23 * r23)).max(0.0).sqrt()
}

/// Dependence parameter of a bivariate marginal together with its unit-disc
/// representative `varphi = sign(phi) min(|phi|, 1/|phi|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairwisePhi {
    pub pair: Pair,
    pub phi: f64,
    pub varphi: f64,
}

impl PairwisePhi {
    /// Builds from a raw marginal parameter; `phi` must be nonzero and `|phi| != 1`.
    pub fn from_phi(pair: Pair, phi: f64) -> Result<PairwisePhi> {
        if !phi.is_finite() || phi == 0.0 || phi.abs() == 1.0 {
            return Err(TwccError::InvalidArgument(format!(
                "marginal parameter {phi} must be finite, nonzero and not +-1"
            )));
        }
        Ok(PairwisePhi { pair, phi, varphi: unit_disc(phi) })
    }
}

/// `sign(x) min(|x|, 1/|x|)`.
pub fn unit_disc(x: f64) -> f64 {
    let a = x.abs();
    x.signum() * a.min(1.0 / a)
}

/// Marginal parameter of the pair `(i, j)`:
/// `phi_ij = (rho_ik rho_jk / rho_ij - rho_ij rho_ik / rho_jk - rho_ij rho_jk / rho_ik - (2 pi)^3 c2) / (2 rho_ij)`.
pub fn pairwise_phi(p: &RhoParams, pair: Pair) -> PairwisePhi {
    let (i, j) = pair.axes();
    let k = pair.complement();
    let r_ij = p.between(i, j);
    let r_ik = p.between(i, k);
    let r_jk = p.between(j, k);
    let root = radicand_root(p);
    let phi = (r_ik * r_jk / r_ij - r_ij * r_ik / r_jk - r_ij * r_jk / r_ik - root) / (2.0 * r_ij);
    PairwisePhi { pair, phi, varphi: unit_disc(phi) }
}

/// Lower bound `(1 + sqrt(1 + 4 b^3)) / (2 b^2)` on `|rho_ij|` given `b = |rho_ik|`
/// under the product-one constraint.
pub fn zeta_scale(b: f64) -> f64 {
    (1.0 + (1.0 + 4.0 * b * b * b).sqrt()) / (2.0 * b * b)
}

/// Derivative of [`zeta_scale`] with respect to `b`.
pub(crate) fn zeta_scale_deriv(b: f64) -> f64 {
    let r = (1.0 + 4.0 * b * b * b).sqrt();
    3.0 / r - (1.0 + r) / (b * b * b)
}

/// Open-box coordinates `(zeta_ij, rho_ik)` of a normalized triple on branch `perm`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaBranch {
    pub perm: Perm,
    pub zeta: f64,
    pub rho_ik: f64,
}

/// Maps `p` (normalized first) to the branch coordinates. The branch's `i`
/// must be the dominant axis of `p`.
pub fn to_zeta(p: &RhoParams, perm: Perm) -> Result<ZetaBranch> {
    if perm.i != p.dominant() {
        return Err(TwccError::BranchInfeasible { branch: perm.to_string() });
    }
    let q = p.normalize();
    let rho_ij = q.between(perm.i, perm.j);
    let rho_ik = q.between(perm.i, perm.k);
    let zeta = zeta_scale(rho_ik.abs()) / rho_ij;
    Ok(ZetaBranch { perm, zeta, rho_ik })
}

/// Reconstructs the normalized triple from branch coordinates.
pub fn from_zeta(z: &ZetaBranch) -> Result<RhoParams> {
    if !(z.zeta.abs() < 1.0) || z.zeta == 0.0 || !z.zeta.is_finite() {
        return Err(TwccError::InvalidZeta(z.zeta));
    }
    if z.rho_ik == 0.0 || !z.rho_ik.is_finite() {
        return Err(TwccError::InvalidArgument(format!("rho_ik = {} must be nonzero", z.rho_ik)));
    }
    let rho_ij = zeta_scale(z.rho_ik.abs()) / z.zeta;
    let rho_jk = 1.0 / (rho_ij * z.rho_ik);
    let mut rho = [0.0; 3];
    rho[z.perm.pair_ij().index()] = rho_ij;
    rho[z.perm.pair_ik().index()] = z.rho_ik;
    rho[z.perm.pair_jk().index()] = rho_jk;
    let p = RhoParams::new(rho[0], rho[1], rho[2])?;
    if p.dominant() != z.perm.i {
        return Err(TwccError::BranchInfeasible { branch: z.perm.to_string() });
    }
    Ok(p)
}

/// Full dependence parameter `rho12*` and partial dependence `rho23.13* = rho23 / |rho13|`,
/// defined on the branch where `rho23` is the small parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarParams {
    pub rho12_star: f64,
    pub rho2313_star: f64,
}

fn star_factor(s_abs: f64) -> f64 {
    ((1.0 - s_abs) / s_abs.sqrt()).powf(2.0 / 3.0)
}

pub fn to_star(p: &RhoParams) -> Result<StarParams> {
    if p.dominant() != 0 {
        return Err(TwccError::BranchInfeasible { branch: "(1,2,3)".into() });
    }
    let q = p.normalize();
    let s = q.rho23() / q.rho13().abs();
    Ok(StarParams { rho12_star: star_factor(s.abs()) * q.rho12(), rho2313_star: s })
}

pub fn from_star(s: &StarParams) -> Result<RhoParams> {
    let sa = s.rho2313_star.abs();
    if !(sa > 0.0 && sa < 1.0) {
        return Err(TwccError::InvalidArgument(format!(
            "partial dependence {} must satisfy 0 < |.| < 1",
            s.rho2313_star
        )));
    }
    if !(s.rho12_star.abs() > 1.0) || !s.rho12_star.is_finite() {
        return Err(TwccError::BranchInfeasible { branch: "(1,2,3)".into() });
    }
    let rho12 = s.rho12_star / star_factor(sa);
    let rho13_abs = 1.0 / (rho12.abs() * sa).sqrt();
    let rho23 = s.rho2313_star * rho13_abs;
    let rho13 = 1.0 / (rho12 * rho23);
    let p = RhoParams::new(rho12, rho13, rho23)?;
    if p.dominant() != 0 {
        return Err(TwccError::BranchInfeasible { branch: "(1,2,3)".into() });
    }
    Ok(p)
}

/// `2 pi`.
pub const TWO_PI: f64 = 2.0 * PI;

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn paper_estimates_are_valid() {
        let p = validate_rho(0.611, -1.31, -1.25).unwrap();
        assert!((p.product() - 1.0005).abs() < 1e-4);
        assert_eq!(p.dominant(), 2);
    }

    #[test]
    fn symmetric_unit_triple_rejected() {
        assert!(matches!(
            validate_rho(1.0, 1.0, 1.0),
            Err(TwccError::NoValidPermutation { .. })
        ));
    }

    #[test]
    fn simulation_truth_branch() {
        let p = validate_rho(1.0, 0.25, 4.0).unwrap();
        // rho13 is the small parameter, so axis 2 (u2) dominates
        assert_eq!(p.dominant(), 1);
        assert_eq!(p.satisfied_branches(), vec![1]);
    }

    #[test]
    fn error_variants() {
        assert!(matches!(validate_rho(0.0, 1.0, 1.0), Err(TwccError::ZeroParameter { .. })));
        assert!(matches!(validate_rho(1.0, -0.25, 4.0), Err(TwccError::SignCondition { .. })));
        assert!(matches!(validate_rho(f64::NAN, 1.0, 1.0), Err(TwccError::NonFinite { .. })));
        // phi = (2, 1, 1) sits exactly on the boundary
        assert!(matches!(validate_rho(2.0, 2.0, 1.0), Err(TwccError::DegenerateBoundary { .. })));
    }

    #[test]
    fn normalize_examples() {
        let p = validate_rho(2.0, 0.5, 1.0).unwrap().normalize();
        assert_eq!(p.as_array(), [2.0, 0.5, 1.0]);
        let q = validate_rho(4.0, 1.0, 2.0).unwrap().normalize();
        for (a, b) in q.as_array().iter().zip([2.0, 0.5, 1.0]) {
            assert!(close(*a, b, 1e-15));
        }
    }

    #[test]
    fn normalize_keeps_pairwise_phi() {
        let p = validate_rho(0.611, -1.31, -1.25).unwrap();
        let q = p.normalize();
        assert!(close(q.product(), 1.0, 1e-14));
        for pair in Pair::ALL {
            assert!(close(p.pairwise_phi(pair).phi, q.pairwise_phi(pair).phi, 1e-12));
        }
    }

    #[test]
    fn phi_round_trip_and_signs() {
        for r in [[1.0, 0.25, 4.0], [0.611, -1.31, -1.25], [1.0, -4.0, -0.25]] {
            let p = validate_rho(r[0], r[1], r[2]).unwrap();
            let q = p.to_phi();
            let [a, b, c] = q.as_array();
            assert!(close(a * b, r[0], 1e-12));
            assert!(close(a * c, r[1], 1e-12));
            assert!(close(b * c, r[2], 1e-12));
            assert_eq!(q.dominant(), p.dominant());
            let back = q.to_rho().unwrap();
            for (x, y) in back.as_array().iter().zip(r) {
                assert!(close(*x, y, 1e-12));
            }
        }
        // (1, 0.25, 4): phi = (0.25, 4, 1)
        let q = validate_rho(1.0, 0.25, 4.0).unwrap().to_phi();
        assert!(close(q.as_array()[1], 4.0, 1e-15));
    }

    #[test]
    fn phi_boundary_rejected() {
        assert!(matches!(PhiTriple::new(3.0, 2.0, 1.0), Err(TwccError::DegenerateBoundary { .. })));
        assert!(PhiTriple::new(3.0, 2.0, 0.9).is_ok());
        assert!(matches!(PhiTriple::new(3.0, 2.0, 1.1), Err(TwccError::NoValidPermutation { .. })));
    }

    #[test]
    fn pairwise_phi_scale_invariance() {
        let p = validate_rho(1.0, 0.25, 4.0).unwrap();
        assert!(close(radicand_root(&p), 222.87890625f64.sqrt(), 1e-14));
        for c in [0.1, 3.0, 10.0] {
            let q = p.scaled(c).unwrap();
            for pair in Pair::ALL {
                assert!(close(p.pairwise_phi(pair).phi, q.pairwise_phi(pair).phi, 1e-12));
            }
        }
    }

    #[test]
    fn pairwise_phi_matches_phi_form() {
        // phi_ij = (phi_k^2 - phi_i^2 - phi_j^2 - R) / (2 phi_i phi_j)
        let p = validate_rho(0.611, -1.31, -1.25).unwrap();
        let f = p.to_phi().as_array();
        let r = radicand_root(&p);
        for pair in Pair::ALL {
            let (i, j) = pair.axes();
            let k = pair.complement();
            let want = (f[k] * f[k] - f[i] * f[i] - f[j] * f[j] - r) / (2.0 * f[i] * f[j]);
            assert!(close(p.pairwise_phi(pair).phi, want, 1e-12));
            assert!(p.pairwise_phi(pair).varphi.abs() <= 1.0);
        }
    }

    #[test]
    fn zeta_round_trip() {
        let p = validate_rho(1.0, 0.25, 4.0).unwrap().normalize();
        let perm = Perm::SEARCH_ORDER.iter().copied().find(|q| q.i == p.dominant()).unwrap();
        let z = to_zeta(&p, perm).unwrap();
        assert!(z.zeta.abs() < 1.0 && z.zeta != 0.0);
        let back = from_zeta(&z).unwrap();
        for (a, b) in back.as_array().iter().zip(p.as_array()) {
            assert!(close(*a, b, 1e-10));
        }
        // the reconstructed rho_ij exceeds the branch bound
        let bound = zeta_scale(z.rho_ik.abs());
        assert!(back.between(perm.i, perm.j).abs() > bound);
    }

    #[test]
    fn zeta_limits() {
        let perm = Perm { i: 0, j: 1, k: 2 };
        for zeta in [1.0 - 1e-6, -(1.0 - 1e-6)] {
            for rho_ik in [0.3, -2.0, 7.0] {
                let p = from_zeta(&ZetaBranch { perm, zeta, rho_ik }).unwrap();
                assert_eq!(p.dominant(), 0);
                assert!(close(p.product(), 1.0, 1e-12));
            }
        }
        assert!(matches!(
            from_zeta(&ZetaBranch { perm, zeta: 0.0, rho_ik: 1.0 }),
            Err(TwccError::InvalidZeta(_))
        ));
        let p = validate_rho(1.0, 0.25, 4.0).unwrap();
        assert!(matches!(to_zeta(&p, perm), Err(TwccError::BranchInfeasible { .. })));
    }

    #[test]
    fn zeta_scale_derivative() {
        for b in [0.05, 0.7, 3.0, 40.0] {
            let h = 1e-6 * b;
            let fd = (zeta_scale(b + h) - zeta_scale(b - h)) / (2.0 * h);
            assert!(close(zeta_scale_deriv(b), fd, 1e-6));
        }
    }

    #[test]
    fn star_examples() {
        // the Fig. S1(a)-type triple already has product one
        let p = validate_rho(-2.5, -2.0, 0.2).unwrap();
        let s = to_star(&p).unwrap();
        assert!(close(s.rho2313_star, 0.1, 1e-14));
        assert!((s.rho12_star + 5.02).abs() < 0.01);
        let q = from_star(&StarParams { rho12_star: -5.0, rho2313_star: 0.1 }).unwrap();
        let back = to_star(&q).unwrap();
        assert!(close(back.rho12_star, -5.0, 1e-10));
        assert!(close(back.rho2313_star, 0.1, 1e-10));
        assert!(q.rho23() > 0.0);
        assert!(from_star(&StarParams { rho12_star: 0.9, rho2313_star: 0.5 }).is_err());
    }
}
