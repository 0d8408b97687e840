//! Discrete frequency convolution `(f * g)(ζ) = Σ_η f(ζ - η) g(η) · cell`.

use num_complex::Complex;

use super::fft::fft3;
use super::{Domain, SpacetimeField, Window};
use crate::error::{LabError, Result};
use crate::real::{from_usize, Real};

/// Full linear convolution on the sum lattice, without truncation.
pub fn convolve_full<T: Real>(
    a: &SpacetimeField<T>,
    b: &SpacetimeField<T>,
) -> Result<SpacetimeField<T>> {
    a.require_domain(Domain::Frequency)?;
    b.require_domain(Domain::Frequency)?;
    if !a.lattice.same_spacing(&b.lattice) {
        return Err(LabError::GridMismatch);
    }
    let (tau_off, ct) = a.lattice.tau_offset.add(b.lattice.tau_offset);
    let (xi_off, cx) = a.lattice.xi_offset.add(b.lattice.xi_offset);
    let lattice = a.lattice.with_offsets(tau_off, xi_off);
    let carry = [ct, cx, cx];
    let mut origin = [0i64; 3];
    let mut shape = [0usize; 3];
    let mut padded = [0usize; 3];
    for ax in 0..3 {
        origin[ax] = a.window.origin[ax] + b.window.origin[ax] + carry[ax];
        if a.window.shape[ax] == 0 || b.window.shape[ax] == 0 {
            return Ok(SpacetimeField::zeros(
                lattice,
                Window {
                    origin,
                    shape: [0; 3],
                },
                Domain::Frequency,
            ));
        }
        shape[ax] = a.window.shape[ax] + b.window.shape[ax] - 1;
        padded[ax] = shape[ax].next_power_of_two();
    }
    let total: usize = padded.iter().product();
    let mut fa = embed(a, padded, total);
    let mut fb = embed(b, padded, total);
    fft3(&mut fa, padded, false);
    fft3(&mut fb, padded, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * *y;
    }
    fft3(&mut fa, padded, true);
    let scale = a.lattice.cell() / from_usize::<T>(total);
    let window = Window { origin, shape };
    let mut out = SpacetimeField::zeros(lattice, window, Domain::Frequency);
    for k in 0..shape[0] {
        for i in 0..shape[1] {
            for j in 0..shape[2] {
                let src = (k * padded[1] + i) * padded[2] + j;
                out.values[(k * shape[1] + i) * shape[2] + j] = fa[src] * scale;
            }
        }
    }
    Ok(out)
}

fn embed<T: Real>(f: &SpacetimeField<T>, padded: [usize; 3], total: usize) -> Vec<Complex<T>> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); total];
    let s = f.window.shape;
    for k in 0..s[0] {
        for i in 0..s[1] {
            let src = (k * s[1] + i) * s[2];
            let dst = (k * padded[1] + i) * padded[2];
            out[dst..dst + s[2]].copy_from_slice(&f.values[src..src + s[2]]);
        }
    }
    out
}

/// Convolution truncated to the index window of `a`.
///
/// Both operands must share spacing and window; offsets may differ, and the
/// result lives on the sum lattice.
pub fn convolve<T: Real>(a: &SpacetimeField<T>, b: &SpacetimeField<T>) -> Result<SpacetimeField<T>> {
    if a.window != b.window {
        return Err(LabError::GridMismatch);
    }
    Ok(convolve_full(a, b)?.restrict(a.window))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{make_grid, GridSpec, Offset};

    #[test]
    fn delta_is_identity() {
        let g = make_grid(GridSpec::new(4, 8, 2.0, 4.0)).unwrap();
        let h = SpacetimeField::from_fn(g.lattice, g.window, Domain::Frequency, |t, x| {
            Complex::new(t + x[0], x[1] * x[1])
        });
        let whole = g.lattice.with_offsets(Offset::Whole, Offset::Whole);
        let mut d = SpacetimeField::zeros(whole, g.window, Domain::Frequency);
        d.set([0, 0, 0], Complex::new(1.0 / g.lattice.cell(), 0.0));
        let out = convolve(&d, &h).unwrap();
        assert_eq!(out.lattice, g.lattice);
        for (a, b) in out.values.iter().zip(&h.values) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn half_plus_half_lands_on_whole_lattice() {
        let g = make_grid(GridSpec::new(2, 2, 1.0f64, 1.0)).unwrap();
        let one = SpacetimeField::from_fn(g.lattice, g.window, Domain::Frequency, |_, _| {
            Complex::new(1.0, 0.0)
        });
        let full = convolve_full(&one, &one).unwrap();
        assert_eq!(full.lattice.xi_offset, Offset::Whole);
        assert_eq!(full.window.shape, [3, 3, 3]);
        assert_eq!(full.window.origin, [-1, -1, -1]);
        // Centre of the sum lattice is ζ = 0 and collects all 8 pairs.
        let c = g.lattice.cell();
        assert!((full.get([0, 0, 0]).re - 8.0 * c).abs() < 1e-12);
        assert!((full.get([1, 1, 1]).re - c).abs() < 1e-12);
    }

    #[test]
    fn rejects_physical_input() {
        let g = make_grid(GridSpec::new(2, 2, 1.0f64, 1.0)).unwrap();
        let f = g.zeros(Domain::Physical);
        assert!(convolve(&f, &f).is_err());
    }
}
