//! Discrete space-time frequency lattice.
//!
//! Points of the lattice are indexed by `(k, i, j) ∈ Z³` and sit at
//! `τ = (k + s_τ)Δτ`, `ξ = ((i + s_ξ)Δξ, (j + s_ξ)Δξ)` where each offset
//! `s` is either 0 or 1/2. A field stores the values on a finite index box
//! (a [`Window`]) of such a lattice. Grids built from a [`GridSpec`] use the
//! half offset on every axis, so no point has `ξ = 0` and the lattice is
//! symmetric under `ζ ↦ -ζ`. Sums of half-offset points land on the
//! whole-offset lattice; convolution tracks this automatically.

mod convolve;
mod fft;
mod io;
mod plane;

pub use convolve::{convolve, convolve_full};
pub use fft::{transform, Direction};
pub use io::{read_field, write_field, FIELD_HEADER_BYTES};
pub use plane::{PlaneField, PlaneGrid};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::real::{from_usize, lit, pairwise_sum, Real};

/// Sub-cell position of a lattice axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Offset {
    Whole,
    Half,
}

impl Offset {
    pub fn value<T: Real>(self) -> T {
        match self {
            Offset::Whole => T::zero(),
            Offset::Half => lit(0.5),
        }
    }

    /// Offset of the sum lattice and the index carry it produces.
    pub fn add(self, other: Offset) -> (Offset, i64) {
        match (self, other) {
            (Offset::Half, Offset::Half) => (Offset::Whole, 1),
            (Offset::Whole, Offset::Whole) => (Offset::Whole, 0),
            _ => (Offset::Half, 0),
        }
    }

    fn half(self) -> i64 {
        match self {
            Offset::Whole => 0,
            Offset::Half => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Physical,
    Frequency,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Physical => "physical",
            Domain::Frequency => "frequency",
        }
    }
}

/// User-facing description of a centred space-time lattice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub n_t: usize,
    pub n_x: usize,
    pub theta_max: T,
    pub xi_max: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(n_t: usize, n_x: usize, theta_max: T, xi_max: T) -> Self {
        Self {
            n_t,
            n_x,
            theta_max,
            xi_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("n_t", self.n_t), ("n_x", self.n_x)] {
            if n == 0 || !n.is_power_of_two() {
                return Err(LabError::InvalidGrid(format!(
                    "{name} = {n} is not a positive power of two"
                )));
            }
        }
        for (name, v) in [("theta_max", self.theta_max), ("xi_max", self.xi_max)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(LabError::InvalidGrid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn dtau(&self) -> T {
        lit::<T>(2.0) * self.theta_max / from_usize(self.n_t)
    }

    pub fn dxi(&self) -> T {
        lit::<T>(2.0) * self.xi_max / from_usize(self.n_x)
    }

    pub fn lattice(&self) -> Lattice<T> {
        Lattice {
            dtau: self.dtau(),
            dxi: self.dxi(),
            tau_offset: Offset::Half,
            xi_offset: Offset::Half,
        }
    }

    pub fn window(&self) -> Window {
        let ht = (self.n_t / 2) as i64;
        let hx = (self.n_x / 2) as i64;
        Window {
            origin: [-ht, -hx, -hx],
            shape: [self.n_t, self.n_x, self.n_x],
        }
    }
}

/// Spacings and sub-cell offsets of an infinite lattice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice<T> {
    pub dtau: T,
    pub dxi: T,
    pub tau_offset: Offset,
    pub xi_offset: Offset,
}

impl<T: Real> Lattice<T> {
    pub fn tau(&self, k: i64) -> T {
        (lit::<T>(k as f64) + self.tau_offset.value()) * self.dtau
    }

    pub fn xi(&self, i: i64) -> T {
        (lit::<T>(i as f64) + self.xi_offset.value()) * self.dxi
    }

    /// Frequency-side cell measure `Δτ·Δξ²`.
    pub fn cell(&self) -> T {
        self.dtau * self.dxi * self.dxi
    }

    pub fn with_offsets(mut self, tau: Offset, xi: Offset) -> Self {
        self.tau_offset = tau;
        self.xi_offset = xi;
        self
    }

    pub fn same_spacing(&self, other: &Self) -> bool {
        self.dtau == other.dtau && self.dxi == other.dxi
    }

    /// Index of the cell whose coordinate is nearest to `tau`.
    pub fn tau_index(&self, tau: T) -> i64 {
        nearest(tau / self.dtau - self.tau_offset.value())
    }

    pub fn xi_index(&self, xi: T) -> i64 {
        nearest(xi / self.dxi - self.xi_offset.value())
    }
}

fn nearest<T: Real>(x: T) -> i64 {
    x.round().to_i64().unwrap_or(0)
}

/// Finite index box `[origin, origin + shape)` of a lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub origin: [i64; 3],
    pub shape: [usize; 3],
}

impl Window {
    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat storage position of lattice index `(k, i, j)`, if inside.
    #[inline]
    pub fn position(&self, idx: [i64; 3]) -> Option<usize> {
        let mut pos = 0usize;
        for a in 0..3 {
            let r = idx[a] - self.origin[a];
            if r < 0 || r >= self.shape[a] as i64 {
                return None;
            }
            pos = pos * self.shape[a] + r as usize;
        }
        Some(pos)
    }

    #[inline]
    pub fn index(&self, pos: usize) -> [i64; 3] {
        let j = pos % self.shape[2];
        let rest = pos / self.shape[2];
        let i = rest % self.shape[1];
        let k = rest / self.shape[1];
        [
            self.origin[0] + k as i64,
            self.origin[1] + i as i64,
            self.origin[2] + j as i64,
        ]
    }

    /// Smallest window containing inclusive index bounds `lo..=hi`.
    pub fn from_bounds(lo: [i64; 3], hi: [i64; 3]) -> Self {
        let mut shape = [0usize; 3];
        for a in 0..3 {
            shape[a] = if hi[a] >= lo[a] {
                (hi[a] - lo[a] + 1) as usize
            } else {
                0
            };
        }
        Window { origin: lo, shape }
    }
}

/// Complex field on a window of a lattice, in physical or frequency domain.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeField<T> {
    pub lattice: Lattice<T>,
    pub window: Window,
    pub domain: Domain,
    pub values: Vec<Complex<T>>,
}

/// Coordinate arrays produced by [`make_grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    pub spec: GridSpec<T>,
    pub lattice: Lattice<T>,
    pub window: Window,
    pub tau: Vec<T>,
    pub xi: Vec<T>,
}

impl<T: Real> Grid<T> {
    pub fn dtau(&self) -> T {
        self.lattice.dtau
    }

    pub fn dxi(&self) -> T {
        self.lattice.dxi
    }

    pub fn point_count(&self) -> usize {
        self.window.len()
    }

    pub fn zeros(&self, domain: Domain) -> SpacetimeField<T> {
        SpacetimeField::zeros(self.lattice, self.window, domain)
    }
}

pub fn make_grid<T: Real>(spec: GridSpec<T>) -> Result<Grid<T>> {
    spec.validate()?;
    let lattice = spec.lattice();
    let window = spec.window();
    let tau = (0..window.shape[0])
        .map(|k| lattice.tau(window.origin[0] + k as i64))
        .collect();
    let xi = (0..window.shape[1])
        .map(|i| lattice.xi(window.origin[1] + i as i64))
        .collect();
    Ok(Grid {
        spec,
        lattice,
        window,
        tau,
        xi,
    })
}

impl<T: Real> SpacetimeField<T> {
    pub fn zeros(lattice: Lattice<T>, window: Window, domain: Domain) -> Self {
        Self {
            lattice,
            window,
            domain,
            values: vec![Complex::new(T::zero(), T::zero()); window.len()],
        }
    }

    pub fn from_fn<F>(lattice: Lattice<T>, window: Window, domain: Domain, mut f: F) -> Self
    where
        F: FnMut(T, [T; 2]) -> Complex<T>,
    {
        let mut out = Self::zeros(lattice, window, domain);
        for pos in 0..window.len() {
            let (tau, xi) = out.coords(pos);
            out.values[pos] = f(tau, xi);
        }
        out
    }

    /// Frequency coordinates `(τ, ξ)` of the cell stored at `pos`.
    #[inline]
    pub fn coords(&self, pos: usize) -> (T, [T; 2]) {
        let [k, i, j] = self.window.index(pos);
        (
            self.lattice.tau(k),
            [self.lattice.xi(i), self.lattice.xi(j)],
        )
    }

    pub fn get(&self, idx: [i64; 3]) -> Complex<T> {
        self.window
            .position(idx)
            .map(|p| self.values[p])
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn set(&mut self, idx: [i64; 3], value: Complex<T>) -> bool {
        match self.window.position(idx) {
            Some(p) => {
                self.values[p] = value;
                true
            }
            None => false,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Cell measure for the field's domain.
    pub fn cell_measure(&self) -> T {
        match self.domain {
            Domain::Frequency => self.lattice.cell(),
            Domain::Physical => physical_cell(&self.lattice, &self.window),
        }
    }

    pub fn require_domain(&self, expected: Domain) -> Result<()> {
        if self.domain != expected {
            return Err(LabError::DomainMismatch {
                expected: expected.name(),
                found: self.domain.name(),
            });
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: T) {
        for v in &mut self.values {
            *v = *v * factor;
        }
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        if self.window != other.window || self.lattice != other.lattice {
            return Err(LabError::GridMismatch);
        }
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a = *a + *b;
        }
        Ok(())
    }

    /// Pointwise complex conjugate of the stored values.
    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v = v.conj();
        }
        out
    }

    /// `ζ ↦ -ζ` reflection of a frequency field (no conjugation).
    pub fn reflect(&self) -> Self {
        let ht = self.lattice.tau_offset.half();
        let hx = self.lattice.xi_offset.half();
        let w = self.window;
        let origin = [
            -w.origin[0] - w.shape[0] as i64 + 1 - ht,
            -w.origin[1] - w.shape[1] as i64 + 1 - hx,
            -w.origin[2] - w.shape[2] as i64 + 1 - hx,
        ];
        let window = Window {
            origin,
            shape: w.shape,
        };
        let mut out = Self::zeros(self.lattice, window, self.domain);
        for pos in 0..w.len() {
            let [k, i, j] = w.index(pos);
            out.set([-k - ht, -i - hx, -j - hx], self.values[pos]);
        }
        out
    }

    /// Restriction (or zero extension) onto another window of the same lattice.
    pub fn restrict(&self, window: Window) -> Self {
        let mut out = Self::zeros(self.lattice, window, self.domain);
        for pos in 0..window.len() {
            out.values[pos] = self.get(window.index(pos));
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// Physical-side cell measure `Δt·Δx²` dual to the window's frequency lattice.
pub fn physical_cell<T: Real>(lattice: &Lattice<T>, window: &Window) -> T {
    let two_pi = T::PI() + T::PI();
    let dt = two_pi / (from_usize::<T>(window.shape[0]) * lattice.dtau);
    let dx1 = two_pi / (from_usize::<T>(window.shape[1]) * lattice.dxi);
    let dx2 = two_pi / (from_usize::<T>(window.shape[2]) * lattice.dxi);
    dt * dx1 * dx2
}

/// `sqrt(Σ |v|² · cell)` with the measure chosen by the domain tag.
pub fn l2_norm<T: Real>(field: &SpacetimeField<T>) -> T {
    let sq: Vec<T> = field.values.iter().map(|v| v.norm_sqr()).collect();
    (pairwise_sum(&sq) * field.cell_measure()).sqrt()
}

/// Frequency-side bilinear pairing `Σ a(ζ) b(ζ) · cell` over the common support.
pub fn pairing<T: Real>(a: &SpacetimeField<T>, b: &SpacetimeField<T>) -> Result<Complex<T>> {
    if !a.lattice.same_spacing(&b.lattice)
        || a.lattice.tau_offset != b.lattice.tau_offset
        || a.lattice.xi_offset != b.lattice.xi_offset
    {
        return Err(LabError::GridMismatch);
    }
    let mut re = Vec::with_capacity(a.len());
    let mut im = Vec::with_capacity(a.len());
    for (pos, va) in a.values.iter().enumerate() {
        let vb = b.get(a.window.index(pos));
        let p = *va * vb;
        re.push(p.re);
        im.push(p.im);
    }
    let cell = a.lattice.cell();
    Ok(Complex::new(pairwise_sum(&re) * cell, pairwise_sum(&im) * cell))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spacings_and_coordinates() {
        let g = make_grid(GridSpec::new(8, 8, 4.0, 4.0)).unwrap();
        assert_eq!(g.dtau(), 1.0);
        assert_eq!(g.dxi(), 1.0);
        assert_eq!(g.xi, vec![-3.5, -2.5, -1.5, -0.5, 0.5, 1.5, 2.5, 3.5]);
    }

    #[test]
    fn smallest_grid_has_no_zero_mode() {
        let g = make_grid(GridSpec::new(2, 2, 1.0, 1.0)).unwrap();
        assert_eq!(g.xi, vec![-0.5, 0.5]);
    }

    #[test]
    fn point_count_is_product() {
        let g = make_grid(GridSpec::new(64, 64, 32.0, 32.0)).unwrap();
        assert_eq!(g.point_count(), 262_144);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(make_grid(GridSpec::new(6, 8, 1.0, 1.0)).is_err());
        assert!(make_grid(GridSpec::new(8, 0, 1.0, 1.0)).is_err());
        assert!(make_grid(GridSpec::new(8, 8, 0.0, 1.0)).is_err());
        assert!(make_grid(GridSpec::new(8, 8, 1.0, -2.0)).is_err());
    }

    #[test]
    fn single_point_norm() {
        let g = make_grid(GridSpec::new(4, 4, 1.0, 1.0)).unwrap();
        let mut f = g.zeros(Domain::Frequency);
        assert_eq!(f.cell_measure(), 0.125);
        f.values[5] = Complex::new(3.0, 0.0);
        assert!((l2_norm(&f) - 3.0 * 0.125_f64.sqrt()).abs() < 1e-15);
        assert_eq!(l2_norm(&g.zeros(Domain::Frequency)), 0.0);
    }

    #[test]
    fn reflection_of_half_grid_keeps_window() {
        let g = make_grid(GridSpec::new(4, 4, 2.0, 2.0)).unwrap();
        let f = SpacetimeField::from_fn(g.lattice, g.window, Domain::Frequency, |t, x| {
            Complex::new(t + 10.0 * x[0], x[1])
        });
        let r = f.reflect();
        assert_eq!(r.window, f.window);
        for pos in 0..r.len() {
            let (t, x) = r.coords(pos);
            assert_eq!(r.values[pos], Complex::new(-t - 10.0 * x[0], -x[1]));
        }
    }

    #[test]
    fn window_position_roundtrip() {
        let w = Window {
            origin: [-3, 2, -1],
            shape: [4, 3, 5],
        };
        for pos in 0..w.len() {
            assert_eq!(w.position(w.index(pos)), Some(pos));
        }
        assert_eq!(w.position([-4, 2, -1]), None);
    }
}
