//! Bourgain `X^{s,b}` norms and spatial Sobolev norms.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::decomp::{block_of, check_speed, Sign, Speed};
use crate::error::Result;
use crate::lattice::{pairing, transform, Direction, Domain, PlaneField, SpacetimeField};
use crate::real::{lit, pairwise_sum, Real};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSpec<T> {
    pub s: T,
    pub b: T,
    pub sign: Sign,
    pub speed: Speed,
    pub c: T,
}

impl<T: Real> NormSpec<T> {
    pub fn new(s: T, b: T, sign: Sign, speed: Speed, c: T) -> Result<Self> {
        check_speed(c)?;
        Ok(Self {
            s,
            b,
            sign,
            speed,
            c,
        })
    }

    pub fn v(&self) -> T {
        match self.speed {
            Speed::Full => T::one(),
            Speed::Reduced => self.c,
        }
    }

    /// Dual exponents with the opposite sign.
    pub fn dual(&self) -> Self {
        Self {
            s: -self.s,
            b: -self.b,
            sign: self.sign.flip(),
            ..*self
        }
    }

    pub fn with_sign(&self, sign: Sign) -> Self {
        Self { sign, ..*self }
    }

    /// Block weight `N^{s} L^{b}`.
    pub fn weight(&self, n: u64, l: u64) -> T {
        lit::<T>(n as f64).powf(self.s) * lit::<T>(l as f64).powf(self.b)
    }
}

/// Squared `L²` mass of each dyadic block met by the field, keyed by `(N, L)`.
pub fn block_masses<T: Real>(
    field: &SpacetimeField<T>,
    sign: Sign,
    v: T,
) -> Result<BTreeMap<(u64, u64), T>> {
    field.require_domain(Domain::Frequency)?;
    let mut bins: BTreeMap<(u64, u64), Vec<T>> = BTreeMap::new();
    for (pos, val) in field.values.iter().enumerate() {
        let m = val.norm_sqr();
        if m == T::zero() {
            continue;
        }
        let (tau, xi) = field.coords(pos);
        bins.entry(block_of(tau, xi, sign, v)).or_default().push(m);
    }
    let cell = field.cell_measure();
    Ok(bins
        .into_iter()
        .map(|(k, v)| (k, pairwise_sum(&v) * cell))
        .collect())
}

/// `(Σ_{N,L} N^{2s} L^{2b} ‖P_{N,L} f‖²)^{1/2}`.
pub fn xsb_norm<T: Real>(field: &SpacetimeField<T>, spec: &NormSpec<T>) -> Result<T> {
    let masses = block_masses(field, spec.sign, spec.v())?;
    let terms: Vec<T> = masses
        .iter()
        .map(|(&(n, l), &m)| spec.weight(n, l).powi(2) * m)
        .collect();
    Ok(pairwise_sum(&terms).sqrt())
}

/// `|‖f̄‖_{X∓} - ‖f‖_{X±}|` where `f̄` is the physical-space conjugate.
pub fn conjugation_symmetry_check<T: Real>(
    field: &SpacetimeField<T>,
    spec: &NormSpec<T>,
) -> Result<T> {
    let phys = transform(field, Direction::Inverse)?;
    let conj = transform(&phys.conj(), Direction::Forward)?;
    let a = xsb_norm(field, spec)?;
    let b = xsb_norm(&conj, &spec.with_sign(spec.sign.flip()))?;
    Ok((a - b).abs())
}

/// Bilinear space-time pairing `∫ u v dt dx = ∫ f(ζ) g(-ζ) dζ` of two
/// frequency fields.
pub fn dual_pairing<T: Real>(f: &SpacetimeField<T>, g: &SpacetimeField<T>) -> Result<Complex<T>> {
    f.require_domain(Domain::Frequency)?;
    g.require_domain(Domain::Frequency)?;
    pairing(f, &g.reflect())
}

/// Weighted `L²` norm of a spatial field with `⟨ξ⟩^s` or `|ξ|^s`.
pub fn sobolev_norm<T: Real>(field: &PlaneField<T>, s: T, homogeneous: bool) -> T {
    field.sobolev_norm(s, homogeneous)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{l2_norm, make_grid, GridSpec};

    fn spec(s: f64, b: f64) -> NormSpec<f64> {
        NormSpec::new(s, b, Sign::Plus, Speed::Full, 0.5).unwrap()
    }

    #[test]
    fn single_point_weight() {
        let g = make_grid(GridSpec::new(8, 8, 4.0, 4.0)).unwrap();
        let mut f = g.zeros(Domain::Frequency);
        // ξ = (2.5, 0.5), |ξ|² = 6.5, ⟨ξ⟩ ≈ 2.74 → N = 2.
        // τ = -0.5: τ + |ξ| ≈ 2.05, ⟨·⟩ ≈ 2.28 → L = 2.
        let idx = [g.lattice.tau_index(-0.5), g.lattice.xi_index(2.5), g.lattice.xi_index(0.5)];
        f.set(idx, Complex::new(3.0, 0.0));
        let n = xsb_norm(&f, &spec(-0.7, 0.55)).unwrap();
        let expected = 3.0 * g.lattice.cell().sqrt() * 2f64.powf(-0.7) * 2f64.powf(0.55);
        assert!((n - expected).abs() < 1e-14);
    }

    #[test]
    fn zero_exponents_give_l2() {
        let g = make_grid(GridSpec::new(8, 8, 5.0f64, 5.0)).unwrap();
        let f = SpacetimeField::from_fn(g.lattice, g.window, Domain::Frequency, |t, x| {
            Complex::new((t * x[0]).sin(), x[1].cos())
        });
        let n = xsb_norm(&f, &spec(0.0, 0.0)).unwrap();
        assert!((n - l2_norm(&f)).abs() < 1e-12 * n);
    }

    #[test]
    fn zero_field() {
        let g = make_grid(GridSpec::new(4, 4, 2.0, 2.0)).unwrap();
        assert_eq!(xsb_norm(&g.zeros(Domain::Frequency), &spec(1.0, 1.0)).unwrap(), 0.0);
        let m = conjugation_symmetry_check(&g.zeros(Domain::Frequency), &spec(1.0, 1.0)).unwrap();
        assert_eq!(m, 0.0);
    }

    #[test]
    fn dual_flips_everything() {
        let d = spec(-0.7, 0.55).dual();
        assert_eq!((d.s, d.b, d.sign), (0.7, -0.55, Sign::Minus));
    }
}
