//! Dyadic modulation-frequency blocks, angular sectors and circular shells.

mod constants;

pub use constants::Constants;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::lattice::{Domain, Grid, Lattice, SpacetimeField, Window};
use crate::real::{dyadic_floor_sq, lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Wave speed of a block: 1 for the Klein-Gordon part, `c` for the wave part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Speed {
    Full,
    Reduced,
}

/// `⟨τ + σ v|ξ|⟩²` without the square root.
#[inline]
pub fn modulation_sq<T: Real>(tau: T, xi: [T; 2], sign: Sign, v: T) -> T {
    let r = xi[0].hypot(xi[1]);
    let m = tau + sign.value::<T>() * v * r;
    T::one() + m * m
}

/// Dyadic frequency-modulation block `K^{±}_{N,L}` or `K^{±,c}_{N,L}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSpec<T> {
    pub sign: Sign,
    pub speed: Speed,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "L")]
    pub l: u64,
    pub c: T,
}

impl<T: Real> BlockSpec<T> {
    pub fn new(sign: Sign, speed: Speed, n: u64, l: u64, c: T) -> Self {
        Self {
            sign,
            speed,
            n,
            l,
            c,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n.is_power_of_two() || !self.l.is_power_of_two() {
            return Err(LabError::InvalidParameter(format!(
                "block N={}, L={} must be powers of two",
                self.n, self.l
            )));
        }
        check_speed(self.c)
    }

    pub fn v(&self) -> T {
        match self.speed {
            Speed::Full => T::one(),
            Speed::Reduced => self.c,
        }
    }

    #[inline]
    pub fn contains(&self, tau: T, xi: [T; 2]) -> bool {
        let (n, l) = block_of(tau, xi, self.sign, self.v());
        n == self.n && l == self.l
    }
}

pub(crate) fn check_speed<T: Real>(c: T) -> Result<()> {
    if !(c > T::zero() && c < T::one()) {
        return Err(LabError::InvalidParameter(format!(
            "wave speed c = {c} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// Dyadic pair `(N, L)` of the block containing `(τ, ξ)`.
#[inline]
pub fn block_of<T: Real>(tau: T, xi: [T; 2], sign: Sign, v: T) -> (u64, u64) {
    let xi2 = T::one() + xi[0] * xi[0] + xi[1] * xi[1];
    (
        dyadic_floor_sq(xi2),
        dyadic_floor_sq(modulation_sq(tau, xi, sign, v)),
    )
}

/// Angular sector `D_j^A = {θ(ξ) ∈ [πj/A, π(j+1)/A)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorSpec {
    #[serde(rename = "A")]
    pub a: u64,
    pub j: i64,
}

impl SectorSpec {
    pub fn validate(&self) -> Result<()> {
        let a = self.a as i64;
        if !self.a.is_power_of_two() || self.a < 64 {
            return Err(LabError::InvalidParameter(format!(
                "sector level A = {} must be dyadic and at least 64",
                self.a
            )));
        }
        if self.j < -a || self.j >= a {
            return Err(LabError::InvalidParameter(format!(
                "sector index {} outside [-A, A-1]",
                self.j
            )));
        }
        Ok(())
    }

    pub fn contains<T: Real>(&self, xi: [T; 2]) -> bool {
        sector_index(xi, self.a).map_or(false, |j| j == self.j)
    }
}

/// Index `j ∈ [-A, A-1]` of the sector containing `ξ ≠ 0`.
pub fn sector_index<T: Real>(xi: [T; 2], a: u64) -> Result<i64> {
    if xi[0] == T::zero() && xi[1] == T::zero() {
        return Err(LabError::Degenerate("sector of the zero vector".into()));
    }
    let theta = xi[1].atan2(xi[0]);
    let a_i = a as i64;
    let j = (theta * lit::<T>(a as f64) / T::PI())
        .floor()
        .to_i64()
        .unwrap_or(0);
    // atan2 returns θ = π on the negative axis; that ray opens sector -A.
    Ok(if j >= a_i { j - 2 * a_i } else { j.max(-a_i) })
}

/// Thickened circle `radius ≤ |ξ| < radius + delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellSpec<T> {
    pub radius: T,
    pub delta: T,
}

impl<T: Real> ShellSpec<T> {
    pub fn contains(&self, xi: [T; 2]) -> bool {
        let r = xi[0].hypot(xi[1]);
        r >= self.radius && r < self.radius + self.delta
    }
}

/// Any region a frequency field can be projected onto.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Region<T> {
    Block(BlockSpec<T>),
    Sector(SectorSpec),
    Shell(ShellSpec<T>),
}

impl<T: Real> Region<T> {
    #[inline]
    pub fn contains(&self, tau: T, xi: [T; 2]) -> bool {
        match self {
            Region::Block(b) => b.contains(tau, xi),
            Region::Sector(s) => s.contains(xi),
            Region::Shell(s) => s.contains(xi),
        }
    }
}

impl<T> From<BlockSpec<T>> for Region<T> {
    fn from(b: BlockSpec<T>) -> Self {
        Region::Block(b)
    }
}

impl<T> From<SectorSpec> for Region<T> {
    fn from(s: SectorSpec) -> Self {
        Region::Sector(s)
    }
}

impl<T> From<ShellSpec<T>> for Region<T> {
    fn from(s: ShellSpec<T>) -> Self {
        Region::Shell(s)
    }
}

/// 0/1 frequency field of a region on an arbitrary lattice window.
pub fn mask<T: Real>(lattice: Lattice<T>, window: Window, region: &Region<T>) -> SpacetimeField<T> {
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    SpacetimeField::from_fn(lattice, window, Domain::Frequency, |tau, xi| {
        if region.contains(tau, xi) {
            one
        } else {
            zero
        }
    })
}

pub fn block_mask<T: Real>(grid: &Grid<T>, spec: &BlockSpec<T>) -> SpacetimeField<T> {
    mask(grid.lattice, grid.window, &Region::Block(*spec))
}

/// Pointwise restriction of a frequency field to a region.
pub fn project<T: Real>(field: &SpacetimeField<T>, region: &Region<T>) -> Result<SpacetimeField<T>> {
    field.require_domain(Domain::Frequency)?;
    let mut out = field.clone();
    for pos in 0..out.len() {
        let (tau, xi) = out.coords(pos);
        if !region.contains(tau, xi) {
            out.values[pos] = Complex::new(T::zero(), T::zero());
        }
    }
    Ok(out)
}

/// Relative position of two sectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "A", rename_all = "kebab-case")]
pub enum SectorPairClass {
    NearParallel,
    Transversal(u64),
    NearAntipodal,
    AntipodalTransversal(u64),
    /// Pair lies in none of the four unions.
    Other,
}

/// Classifies sectors `j1, j2` at level `a`.
///
/// The index difference is reduced modulo `2A` into `(-A, A]`, since sectors
/// `-A` and `A-1` are neighbours. Near-parallel needs `A = M0` and
/// near-antipodal needs `A = M1`; boundary ties go to the earlier class.
pub fn sector_pair_class(j1: i64, j2: i64, a: u64, m0: u64, m1: u64) -> SectorPairClass {
    let a_i = a as i64;
    let delta = (j1 - j2).rem_euclid(2 * a_i);
    let delta = if delta > a_i { delta - 2 * a_i } else { delta };
    let d = delta.abs();
    let anti = a_i - d;
    if a == m0 && d <= 16 {
        SectorPairClass::NearParallel
    } else if (16..=32).contains(&d) {
        SectorPairClass::Transversal(a)
    } else if a == m1 && anti <= 16 {
        SectorPairClass::NearAntipodal
    } else if (16..=32).contains(&anti) {
        SectorPairClass::AntipodalTransversal(a)
    } else {
        SectorPairClass::Other
    }
}

/// `⟨τ ± ⟨ξ⟩⟩ / ⟨τ ± |ξ|⟩`, the ratio of the two modulation weights.
pub fn weight_ratio<T: Real>(tau: T, xi: [T; 2], sign: Sign) -> T {
    let r = xi[0].hypot(xi[1]);
    let br = (T::one() + r * r).sqrt();
    let s = sign.value::<T>();
    let num = T::one() + (tau + s * br).powi(2);
    let den = T::one() + (tau + s * r).powi(2);
    (num / den).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_membership_example() {
        let b = BlockSpec::new(Sign::Plus, Speed::Full, 1, 1, 0.5);
        assert!(b.contains(0.0, [1.5, 0.0]));
        let b2 = BlockSpec::new(Sign::Plus, Speed::Full, 2, 1, 0.5);
        assert!(!b2.contains(0.0, [1.5, 0.0]));
    }

    #[test]
    fn dyadic_boundaries_are_half_open() {
        assert_eq!(dyadic_floor_sq(4.0f64), 2);
        assert_eq!(dyadic_floor_sq(3.999_999f64), 1);
        assert_eq!(dyadic_floor_sq(1.0f64), 1);
        let (n, l) = block_of(0.0f64, [0.0, 0.0], Sign::Plus, 1.0);
        assert_eq!((n, l), (1, 1));
    }

    #[test]
    fn sector_examples() {
        assert_eq!(sector_index([1.0, 0.0], 64).unwrap(), 0);
        assert_eq!(sector_index([0.0, 1.0], 64).unwrap(), 32);
        assert_eq!(sector_index([-1.0, -1e-9], 64).unwrap(), -64);
        assert_eq!(sector_index([-1.0, 0.0], 64).unwrap(), -64);
        assert_eq!(sector_index([-1.0, 1e-9], 64).unwrap(), 63);
        assert!(sector_index([0.0f64, 0.0], 64).is_err());
    }

    #[test]
    fn pair_class_examples() {
        let (m0, m1) = (128, 256);
        assert_eq!(sector_pair_class(0, 5, m0, m0, m1), SectorPairClass::NearParallel);
        assert_eq!(sector_pair_class(0, 20, 512, m0, m1), SectorPairClass::Transversal(512));
        assert_eq!(sector_pair_class(0, m1 as i64 - 3, m1, m0, m1), SectorPairClass::NearAntipodal);
        assert_eq!(
            sector_pair_class(0, 512 - 20, 512, m0, m1),
            SectorPairClass::AntipodalTransversal(512)
        );
        assert_eq!(sector_pair_class(0, 100, 512, m0, m1), SectorPairClass::Other);
        // Wraparound: sectors -A and A-1 are adjacent.
        assert_eq!(sector_pair_class(-128, 127, m0, m0, m1), SectorPairClass::NearParallel);
    }

    #[test]
    fn projection_requires_frequency() {
        let g = crate::lattice::make_grid(crate::lattice::GridSpec::new(2, 2, 1.0, 1.0)).unwrap();
        let b = Region::Block(BlockSpec::new(Sign::Plus, Speed::Full, 1, 1, 0.5));
        assert!(project(&g.zeros(Domain::Physical), &b).is_err());
    }

    #[test]
    fn spec_serialisation() {
        let b = BlockSpec::new(Sign::Minus, Speed::Reduced, 4, 8, 0.5);
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"sign":"-","speed":"reduced","N":4,"L":8,"c":0.5}"#);
        let s = serde_json::to_string(&SectorSpec { a: 64, j: -3 }).unwrap();
        assert_eq!(s, r#"{"A":64,"j":-3}"#);
    }
}
