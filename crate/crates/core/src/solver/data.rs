use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::state::SolverState;
use crate::error::{LabError, Result};
use crate::lattice::{PlaneField, PlaneGrid};
use crate::real::{bracket, lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Envelope<T> {
    /// `⟨ξ⟩^{-s-1}` for `u_±`, `|ξ|^{-s-1}` for `n_±`: borderline `H^s × Ḣ^s`.
    LowRegularity { s: T },
    /// `e^{-|ξ|²/(2w²)}` for all components.
    Smooth { width: T },
}

/// Random-phase data with `u₋ = conj(u₊)`, `n₋ = conj(n₊)` in physical space,
/// Nyquist modes and the `n` zero mode removed, scaled to total
/// `H^s × Ḣ^s` norm `amplitude`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataSpec<T> {
    pub envelope: Envelope<T>,
    pub amplitude: T,
    pub seed: u64,
}

impl<T: Real> DataSpec<T> {
    pub fn generate(&self, grid: PlaneGrid<T>, s: T) -> Result<SolverState<T>> {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        let weight = |p: usize, wave: bool| -> T {
            let r = grid.xi_abs(p);
            match self.envelope {
                Envelope::LowRegularity { s } => {
                    let e = -s - T::one();
                    if wave {
                        if r == T::zero() {
                            T::zero()
                        } else {
                            r.powf(e)
                        }
                    } else {
                        bracket(r).powf(e)
                    }
                }
                Envelope::Smooth { width } => {
                    let z = r / width;
                    let w = (-(z * z) * lit(0.5)).exp();
                    if wave && r == T::zero() {
                        T::zero()
                    } else {
                        w
                    }
                }
            }
        };
        let mut state = SolverState::zeros(grid);
        for (wave, plus) in [(false, 0usize), (true, 2usize)] {
            let mut f = grid.zeros();
            for p in 0..grid.len() {
                if grid.is_nyquist(p) {
                    continue;
                }
                let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
                f.values[p] = Complex::from_polar(weight(p, wave), lit(phase));
            }
            let minus = conjugate_partner(&f);
            let comps = state.components_mut();
            let [up, um, np, nm] = comps;
            if plus == 0 {
                *up = f;
                *um = minus;
            } else {
                *np = f;
                *nm = minus;
            }
        }
        let norm = state.norm(s);
        if !(norm > T::zero()) {
            return Err(LabError::Degenerate("generated data vanish".into()));
        }
        let zero = SolverState::zeros(grid);
        Ok(zero.axpy(self.amplitude / norm, &state))
    }
}

/// Coefficients of `conj(f)` in physical space: `ξ ↦ conj(f̂(-ξ))`.
pub fn conjugate_partner<T: Real>(f: &PlaneField<T>) -> PlaneField<T> {
    let g = f.grid;
    let mut out = g.zeros();
    for p in 0..g.len() {
        out.values[p] = f.values[g.negate(p)].conj();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_are_real_compatible_and_scaled() {
        let g = PlaneGrid::<f64>::new(16, 1.0).unwrap();
        let spec = DataSpec {
            envelope: Envelope::LowRegularity { s: -0.7 },
            amplitude: 1e-3,
            seed: 5,
        };
        let u = spec.generate(g, -0.7).unwrap();
        assert!((u.norm(-0.7) - 1e-3).abs() < 1e-15);
        assert!(u.reality_defect() < 1e-12);
        assert_eq!(u.n_plus.values[0], Complex::new(0.0, 0.0));
        assert_eq!(u, spec.generate(g, -0.7).unwrap());
    }
}
