use num_complex::Complex;

use super::state::SolverState;
use crate::lattice::{PlaneField, PlaneGrid};
use crate::real::{bracket, lit, Real};

/// Exact linear flow: `u_± ↦ e^{∓i·dt·⟨ξ⟩} u_±`, `n_± ↦ e^{∓i·dt·c|ξ|} n_±`.
pub fn linear_propagator<T: Real>(state: &SolverState<T>, dt: T, c: T) -> SolverState<T> {
    let g = state.grid();
    let mut out = state.clone();
    out.t = state.t + dt;
    for p in 0..g.len() {
        let r = g.xi_abs(p);
        let pu = Complex::from_polar(T::one(), -dt * bracket(r));
        let pn = Complex::from_polar(T::one(), -dt * c * r);
        out.u_plus.values[p] = state.u_plus.values[p] * pu;
        out.u_minus.values[p] = state.u_minus.values[p] * pu.conj();
        out.n_plus.values[p] = state.n_plus.values[p] * pn;
        out.n_minus.values[p] = state.n_minus.values[p] * pn.conj();
    }
    out
}

/// Right sides `F = ¼(n₊+n₋)(ω₁⁻¹u₊ + ω₁⁻¹u₋)` and
/// `G = (4c)⁻¹ ω |ω₁⁻¹u₊ + ω₁⁻¹u₋|²`, so that `∂_t u_± = ∓iω₁u_± ∓ iF`
/// and `∂_t n_± = ∓icω n_± ∓ iG`.
#[derive(Clone, Debug, PartialEq)]
pub struct Forcing<T> {
    pub f: PlaneField<T>,
    pub g: PlaneField<T>,
}

/// Modes kept by the 2/3 rule: `|k₁|, |k₂| ≤ n/3`.
pub fn dealias_keep<T: Real>(grid: &PlaneGrid<T>, p: usize) -> bool {
    let cut = (grid.n / 3) as i64;
    grid.mode(p / grid.n).abs() <= cut && grid.mode(p % grid.n).abs() <= cut
}

fn truncate<T: Real>(f: &mut PlaneField<T>) {
    let g = f.grid;
    for (p, v) in f.values.iter_mut().enumerate() {
        if !dealias_keep(&g, p) {
            *v = Complex::new(T::zero(), T::zero());
        }
    }
}

pub fn nonlinearity<T: Real>(state: &SolverState<T>, c: T, dealias: bool) -> Forcing<T> {
    let g = state.grid();
    let mut w = g.zeros();
    let mut m = g.zeros();
    for p in 0..g.len() {
        let k = bracket(g.xi_abs(p)).recip();
        w.values[p] = (state.u_plus.values[p] + state.u_minus.values[p]) * k;
        m.values[p] = state.n_plus.values[p] + state.n_minus.values[p];
    }
    if dealias {
        truncate(&mut w);
        truncate(&mut m);
    }
    let wp = w.to_physical();
    let mp = m.to_physical();
    let quarter = lit::<T>(0.25);
    let prod: Vec<_> = wp.iter().zip(&mp).map(|(a, b)| a * b * quarter).collect();
    let sq: Vec<_> = wp
        .iter()
        .map(|a| Complex::new(a.norm_sqr(), T::zero()))
        .collect();
    let mut f = PlaneField::from_physical(g, &prod);
    let mut gg = PlaneField::from_physical(g, &sq);
    let k = (lit::<T>(4.0) * c).recip();
    for (p, v) in gg.values.iter_mut().enumerate() {
        *v = *v * (k * g.xi_abs(p));
    }
    if dealias {
        truncate(&mut f);
        truncate(&mut gg);
    }
    Forcing { f, g: gg }
}

impl<T: Real> Forcing<T> {
    /// Time derivative of the state under the nonlinear part alone:
    /// `(∓iF, ∓iG)`.
    pub fn as_rate(&self) -> SolverState<T> {
        let i = Complex::new(T::zero(), T::one());
        let scaled = |f: &PlaneField<T>, z: Complex<T>| {
            let mut out = f.clone();
            for v in &mut out.values {
                *v = *v * z;
            }
            out
        };
        SolverState {
            t: T::zero(),
            u_plus: scaled(&self.f, -i),
            u_minus: scaled(&self.f, i),
            n_plus: scaled(&self.g, -i),
            n_minus: scaled(&self.g, i),
        }
    }
}
