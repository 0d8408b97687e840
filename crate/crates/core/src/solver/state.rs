use std::io::{Read, Write};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::decomp::check_speed;
use crate::error::{LabError, Result};
use crate::lattice::{
    read_field, write_field, Domain, Lattice, Offset, PlaneField, PlaneGrid, SpacetimeField, Window,
};
use crate::real::{bracket, lit, Real};

/// `(u₊, u₋, n₊, n₋)` at time `t`, as spatial Fourier coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverState<T> {
    pub t: T,
    pub u_plus: PlaneField<T>,
    pub u_minus: PlaneField<T>,
    pub n_plus: PlaneField<T>,
    pub n_minus: PlaneField<T>,
}

impl<T: Real> SolverState<T> {
    pub fn zeros(grid: PlaneGrid<T>) -> Self {
        Self {
            t: T::zero(),
            u_plus: grid.zeros(),
            u_minus: grid.zeros(),
            n_plus: grid.zeros(),
            n_minus: grid.zeros(),
        }
    }

    pub fn grid(&self) -> PlaneGrid<T> {
        self.u_plus.grid
    }

    pub fn components(&self) -> [&PlaneField<T>; 4] {
        [&self.u_plus, &self.u_minus, &self.n_plus, &self.n_minus]
    }

    pub fn components_mut(&mut self) -> [&mut PlaneField<T>; 4] {
        [
            &mut self.u_plus,
            &mut self.u_minus,
            &mut self.n_plus,
            &mut self.n_minus,
        ]
    }

    /// `(‖u₊‖²_{H^s} + ‖u₋‖²_{H^s} + ‖n₊‖²_{Ḣ^s} + ‖n₋‖²_{Ḣ^s})^{1/2}`.
    pub fn norm(&self, s: T) -> T {
        let sq = |f: &PlaneField<T>, h: bool| f.sobolev_norm(s, h).powi(2);
        (sq(&self.u_plus, false)
            + sq(&self.u_minus, false)
            + sq(&self.n_plus, true)
            + sq(&self.n_minus, true))
        .sqrt()
    }

    /// `self + a·other`, keeping `self.t`.
    pub fn axpy(&self, a: T, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, y) in out.components_mut().into_iter().zip(other.components()) {
            for (p, q) in x.values.iter_mut().zip(&y.values) {
                *p = *p + *q * a;
            }
        }
        out
    }

    pub fn distance(&self, other: &Self, s: T) -> T {
        other.axpy(-T::one(), self).norm(s)
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|f| f.is_finite())
    }

    /// `u = ω₁⁻¹(u₊ + u₋)/2` on the physical grid.
    pub fn physical_u(&self) -> Vec<Complex<T>> {
        let g = self.grid();
        let half = lit::<T>(0.5);
        let mut w = g.zeros();
        for p in 0..g.len() {
            let k = half / bracket(g.xi_abs(p));
            w.values[p] = (self.u_plus.values[p] + self.u_minus.values[p]) * k;
        }
        w.to_physical()
    }

    /// `n = (n₊ + n₋)/2` on the physical grid.
    pub fn physical_n(&self) -> Vec<Complex<T>> {
        let g = self.grid();
        let mut w = g.zeros();
        for p in 0..g.len() {
            w.values[p] = (self.n_plus.values[p] + self.n_minus.values[p]) * lit::<T>(0.5);
        }
        w.to_physical()
    }

    /// Largest `|Im|` of the physical `u`, `n` relative to their largest modulus.
    pub fn reality_defect(&self) -> T {
        let mut im = T::zero();
        let mut scale = T::zero();
        for v in self.physical_u().into_iter().chain(self.physical_n()) {
            im = im.max(v.im.abs());
            scale = scale.max(v.norm());
        }
        if scale == T::zero() {
            T::zero()
        } else {
            im / scale
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig<T> {
    pub c: T,
    pub dt: T,
    #[serde(rename = "T")]
    pub t_final: T,
    pub picard_iters: usize,
    pub nonlinearity_on: bool,
    pub dealias: bool,
    /// Regularity of the `H^s × Ḣ^s` norm in which differences are measured.
    pub s: T,
}

impl<T: Real> SolverConfig<T> {
    pub fn new(c: T, dt: T, t_final: T, picard_iters: usize) -> Self {
        Self {
            c,
            dt,
            t_final,
            picard_iters,
            nonlinearity_on: true,
            dealias: true,
            s: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_speed(self.c)?;
        if !(self.dt > T::zero()) || !(self.t_final > T::zero()) {
            return Err(LabError::InvalidParameter("dt and T must be positive".into()));
        }
        if self.picard_iters == 0 {
            return Err(LabError::InvalidParameter("picard_iters must be at least 1".into()));
        }
        let steps = self.t_final / self.dt;
        if (steps - steps.round()).abs() > lit::<T>(1e-9) * steps.max(T::one()) {
            return Err(LabError::InvalidParameter(format!(
                "dt = {} does not divide T = {}",
                self.dt, self.t_final
            )));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round().to_usize().unwrap_or(0)
    }
}

/// Writes the four components as a `4 × n × n` field in FFT order, using the
/// lattice field format (time axis indexes the component).
pub fn write_checkpoint<T: Real, W: Write>(state: &SolverState<T>, out: W) -> Result<()> {
    let g = state.grid();
    let lattice = Lattice {
        dtau: T::one(),
        dxi: g.dxi,
        tau_offset: Offset::Whole,
        xi_offset: Offset::Whole,
    };
    let window = Window {
        origin: [0; 3],
        shape: [4, g.n, g.n],
    };
    let mut field = SpacetimeField::zeros(lattice, window, Domain::Frequency);
    for (k, c) in state.components().into_iter().enumerate() {
        field.values[k * g.len()..(k + 1) * g.len()].copy_from_slice(&c.values);
    }
    write_field(&field, out)
}

/// Inverse of [`write_checkpoint`]; the time stamp is not stored.
pub fn read_checkpoint<T: Real, R: Read>(input: R) -> Result<SolverState<T>> {
    let field: SpacetimeField<T> = read_field(input, Domain::Frequency, Offset::Whole, Offset::Whole)?;
    let [nt, n, _] = field.window.shape;
    if nt != 4 {
        return Err(LabError::InvalidGrid(format!("checkpoint has {nt} components, expected 4")));
    }
    let grid = PlaneGrid::new(n, field.lattice.dxi)?;
    let mut state = SolverState::zeros(grid);
    for (k, c) in state.components_mut().into_iter().enumerate() {
        c.values.copy_from_slice(&field.values[k * grid.len()..(k + 1) * grid.len()]);
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoint_round_trip() {
        let g = PlaneGrid::new(8, 0.5).unwrap();
        let mut s = SolverState::zeros(g);
        for (k, c) in s.components_mut().into_iter().enumerate() {
            for (p, v) in c.values.iter_mut().enumerate() {
                *v = Complex::new(p as f64, k as f64 - 0.5);
            }
        }
        let mut bytes = Vec::new();
        write_checkpoint(&s, &mut bytes).unwrap();
        let back: SolverState<f64> = read_checkpoint(bytes.as_slice()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn config_checks_divisibility() {
        let mut c = SolverConfig::<f64>::new(0.5, 0.1, 0.5, 3);
        assert!(c.validate().is_ok());
        assert_eq!(c.steps(), 5);
        c.dt = 0.3;
        assert!(c.validate().is_err());
        c.dt = 0.1;
        c.picard_iters = 0;
        assert!(c.validate().is_err());
    }
}
