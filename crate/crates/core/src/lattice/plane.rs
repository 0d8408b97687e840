//! Periodic spatial lattice on the torus, used for solver state.
//!
//! Modes sit at `ξ = (k₁, k₂)Δξ` with integer `k` and are stored in FFT order.
//! The physical grid is `x_m = mΔx` with `Δx = 2π/(nΔξ)`, and
//! `u(x) = Σ_k û_k e^{ix·ξ_k}`.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{LabError, Result};
use crate::real::{from_usize, pairwise_sum, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneGrid<T> {
    pub n: usize,
    pub dxi: T,
}

impl<T: Real> PlaneGrid<T> {
    pub fn new(n: usize, dxi: T) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(LabError::InvalidGrid(format!(
                "plane size {n} is not a power of two >= 2"
            )));
        }
        if !(dxi > T::zero()) {
            return Err(LabError::InvalidGrid("plane spacing must be positive".into()));
        }
        Ok(Self { n, dxi })
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Signed integer mode of FFT slot `q`.
    #[inline]
    pub fn mode(&self, q: usize) -> i64 {
        if q < self.n / 2 {
            q as i64
        } else {
            q as i64 - self.n as i64
        }
    }

    /// Frequency vector of flat slot `p`.
    #[inline]
    pub fn xi(&self, p: usize) -> [T; 2] {
        let (a, b) = (p / self.n, p % self.n);
        [
            from_i64::<T>(self.mode(a)) * self.dxi,
            from_i64::<T>(self.mode(b)) * self.dxi,
        ]
    }

    pub fn xi_abs(&self, p: usize) -> T {
        let [a, b] = self.xi(p);
        a.hypot(b)
    }

    pub fn is_nyquist(&self, p: usize) -> bool {
        let h = self.n / 2;
        p / self.n == h || p % self.n == h
    }

    /// Flat slot of the mode `-ξ_p`.
    pub fn negate(&self, p: usize) -> usize {
        let (a, b) = (p / self.n, p % self.n);
        ((self.n - a) % self.n) * self.n + (self.n - b) % self.n
    }

    pub fn cell(&self) -> T {
        self.dxi * self.dxi
    }

    pub fn zeros(&self) -> PlaneField<T> {
        PlaneField {
            grid: *self,
            values: vec![Complex::new(T::zero(), T::zero()); self.len()],
        }
    }
}

fn from_i64<T: Real>(k: i64) -> T {
    T::from_i64(k).unwrap()
}

/// Spatial Fourier coefficients on a [`PlaneGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneField<T> {
    pub grid: PlaneGrid<T>,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> PlaneField<T> {
    /// Values at the physical grid points.
    pub fn to_physical(&self) -> Vec<Complex<T>> {
        let mut data = self.values.clone();
        fft2(&mut data, self.grid.n, true);
        data
    }

    pub fn from_physical(grid: PlaneGrid<T>, phys: &[Complex<T>]) -> Self {
        let mut data = phys.to_vec();
        fft2(&mut data, grid.n, false);
        let inv = T::one() / from_usize::<T>(grid.len());
        for v in &mut data {
            *v = *v * inv;
        }
        Self { grid, values: data }
    }

    /// `(Σ w(ξ)² |û|² Δξ²)^{1/2}` with `w = ⟨ξ⟩^s` or `|ξ|^s`; the homogeneous
    /// weight vanishes at `ξ = 0`.
    pub fn sobolev_norm(&self, s: T, homogeneous: bool) -> T {
        let terms: Vec<T> = self
            .values
            .iter()
            .enumerate()
            .map(|(p, v)| sobolev_weight(self.grid.xi(p), s, homogeneous).powi(2) * v.norm_sqr())
            .collect();
        (pairwise_sum(&terms) * self.grid.cell()).sqrt()
    }

    pub fn l2_norm(&self) -> T {
        self.sobolev_norm(T::zero(), false)
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

pub(crate) fn sobolev_weight<T: Real>(xi: [T; 2], s: T, homogeneous: bool) -> T {
    let r2 = xi[0] * xi[0] + xi[1] * xi[1];
    if homogeneous {
        if r2 == T::zero() {
            T::zero()
        } else {
            r2.powf(s / (T::one() + T::one()))
        }
    } else {
        (T::one() + r2).powf(s / (T::one() + T::one()))
    }
}

fn fft2<T: Real>(data: &mut [Complex<T>], n: usize, inverse: bool) {
    let mut planner = FftPlanner::<T>::new();
    let plan = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    for row in data.chunks_exact_mut(n) {
        plan.process(row);
    }
    let mut col = vec![Complex::new(T::zero(), T::zero()); n];
    for b in 0..n {
        for a in 0..n {
            col[a] = data[a * n + b];
        }
        plan.process(&mut col);
        for a in 0..n {
            data[a * n + b] = col[a];
        }
    }
}
