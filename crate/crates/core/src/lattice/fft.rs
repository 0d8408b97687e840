//! Twiddled 3-D DFT between a frequency window and its dual physical grid.
//!
//! The physical grid of a window with shape `n` has `x_m = (m - n/2)Δx`,
//! `Δx = 2π/(nΔξ)`. The forward kernel is `e^{-i(tτ + x·ξ)}` and the overall
//! scale makes Parseval exact with the domain cell measures.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{physical_cell, Domain, SpacetimeField};
use crate::error::Result;
use crate::real::{from_usize, lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Physical to frequency.
    Forward,
    /// Frequency to physical.
    Inverse,
}

pub fn transform<T: Real>(field: &SpacetimeField<T>, dir: Direction) -> Result<SpacetimeField<T>> {
    let (from, to) = match dir {
        Direction::Forward => (Domain::Physical, Domain::Frequency),
        Direction::Inverse => (Domain::Frequency, Domain::Physical),
    };
    field.require_domain(from)?;
    let shape = field.window.shape;
    let offsets = [
        field.lattice.tau_offset.value::<f64>(),
        field.lattice.xi_offset.value::<f64>(),
        field.lattice.xi_offset.value::<f64>(),
    ];
    let mut data = field.values.clone();
    let mut planner = FftPlanner::<T>::new();
    for axis in 0..3 {
        let n = shape[axis];
        let o = field.window.origin[axis] as f64 + offsets[axis];
        let (pre, post, plan) = match dir {
            Direction::Forward => (
                physical_twiddle::<T>(n, o, -1.0),
                frequency_twiddle::<T>(n, o, 1.0),
                planner.plan_fft_forward(n),
            ),
            Direction::Inverse => (
                frequency_twiddle::<T>(n, o, -1.0),
                physical_twiddle::<T>(n, o, 1.0),
                planner.plan_fft_inverse(n),
            ),
        };
        apply_axis(&mut data, shape, axis, &pre, &post, &plan);
    }
    let n_total = from_usize::<T>(field.window.len());
    let mu_p = physical_cell(&field.lattice, &field.window);
    let mu_f = field.lattice.cell();
    let c = (mu_p / (mu_f * n_total)).sqrt();
    let scale = match dir {
        Direction::Forward => c,
        Direction::Inverse => T::one() / (c * n_total),
    };
    for v in &mut data {
        *v = *v * scale;
    }
    Ok(SpacetimeField {
        lattice: field.lattice,
        window: field.window,
        domain: to,
        values: data,
    })
}

/// `e^{sign·2πi m(o+s)/n}` for physical index `m`.
fn physical_twiddle<T: Real>(n: usize, o: f64, sign: f64) -> Vec<Complex<T>> {
    (0..n)
        .map(|m| {
            let turns = (m as f64 * o).rem_euclid(n as f64) / n as f64;
            cis(sign * std::f64::consts::TAU * turns)
        })
        .collect()
}

/// `e^{sign·iπ(o+q+s)}` for frequency slot `q`.
fn frequency_twiddle<T: Real>(n: usize, o: f64, sign: f64) -> Vec<Complex<T>> {
    (0..n)
        .map(|q| {
            let half_turns = (o + q as f64).rem_euclid(2.0);
            cis(sign * std::f64::consts::PI * half_turns)
        })
        .collect()
}

fn cis<T: Real>(angle: f64) -> Complex<T> {
    Complex::new(lit(angle.cos()), lit(angle.sin()))
}

pub(super) fn apply_axis<T: Real>(
    data: &mut [Complex<T>],
    shape: [usize; 3],
    axis: usize,
    pre: &[Complex<T>],
    post: &[Complex<T>],
    plan: &Arc<dyn Fft<T>>,
) {
    let n = shape[axis];
    if n == 0 {
        return;
    }
    let stride: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut line = vec![Complex::new(T::zero(), T::zero()); n];
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); plan.get_inplace_scratch_len()];
    for a in 0..outer {
        for b in 0..stride {
            let base = a * n * stride + b;
            for (m, slot) in line.iter_mut().enumerate() {
                *slot = data[base + m * stride] * pre[m];
            }
            plan.process_with_scratch(&mut line, &mut scratch);
            for (q, v) in line.iter().enumerate() {
                data[base + q * stride] = *v * post[q];
            }
        }
    }
}

/// Plain unnormalised 3-D DFT in place.
pub(super) fn fft3<T: Real>(data: &mut [Complex<T>], shape: [usize; 3], inverse: bool) {
    let mut planner = FftPlanner::<T>::new();
    for axis in 0..3 {
        let n = shape[axis];
        let ones = vec![Complex::new(T::one(), T::zero()); n];
        let plan = if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        apply_axis(data, shape, axis, &ones, &ones, &plan);
    }
}
