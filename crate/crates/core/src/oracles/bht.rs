//! Premises (I)-(IV) of the nonlinear Loomis-Whitney estimate, checked on
//! sampled patches of the three rescaled characteristic surfaces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::geometry::interaction_normals;
use super::linalg3::{det_cols, dot, from_cols, inverse, mul_vec, norm, scale, sub, Mat3, Vec3};
use crate::decomp::{Constants, Sign};
use crate::error::{LabError, Result};
use crate::real::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BhtParams<T> {
    /// Rescaled anchor frequencies `ξ1'`, `ξ2'` (output anchor is their sum).
    pub xi1: [T; 2],
    pub xi2: [T; 2],
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "N0")]
    pub n0: T,
    #[serde(rename = "N1")]
    pub n1: T,
    pub c: T,
    pub sign: Sign,
    pub samples: usize,
    pub seed: u64,
    /// Slab thickness `2^{-e}(1-c)²A^{-2}`; `e = 15` in the `A^{5/4}` case.
    pub slab_exponent: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport<T> {
    pub det_min: T,
    pub diam_max: T,
    pub det_tilde_range: (T, T),
    pub holder_max: T,
    pub passed: bool,
}

/// `|x + d| - |x|` without cancellation.
fn radial_step<T: Real>(x: [T; 2], d: [T; 2]) -> T {
    let y = [x[0] + d[0], x[1] + d[1]];
    let num = (x[0] + x[0] + d[0]) * d[0] + (x[1] + x[1] + d[1]) * d[1];
    num / (y[0].hypot(y[1]) + x[0].hypot(x[1]))
}

struct Patch<T> {
    /// Offsets `σ - σ'` in original coordinates.
    offsets: Vec<Vec3<T>>,
    normals: Vec<Vec3<T>>,
}

pub fn verify_bht_premises<T: Real>(p: &BhtParams<T>) -> Result<ConditionReport<T>> {
    let k = Constants::new(p.c)?;
    if !p.a.is_power_of_two() || p.a < 64 {
        return Err(LabError::InvalidParameter(format!("A = {} must be dyadic ≥ 64", p.a)));
    }
    if p.samples == 0 {
        return Err(LabError::InvalidParameter("sample count must be positive".into()));
    }
    let xi = [p.xi1[0] + p.xi2[0], p.xi1[1] + p.xi2[1]];
    let (r, r1, r2) = (
        xi[0].hypot(xi[1]),
        p.xi1[0].hypot(p.xi1[1]),
        p.xi2[0].hypot(p.xi2[1]),
    );
    if r == T::zero() || r1 == T::zero() || r2 == T::zero() {
        return Err(LabError::Degenerate("anchor frequencies must be nonzero".into()));
    }
    let m1 = k.m1(r1, r2, r);
    if p.a > m1 {
        return Err(LabError::Precondition(format!("A = {} exceeds M1 = {m1}", p.a)));
    }
    let gap2 = (T::one() - p.c).powi(2);
    let a = lit::<T>(p.a as f64);
    let slab = lit::<T>(2f64.powi(-p.slab_exponent)) * gap2 / (a * a);
    let ball = lit::<T>(2f64.powi(-20)) * gap2 / a.sqrt();
    let rho = ball.min(slab / lit::<T>(2.0).sqrt());

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut patches: Vec<Patch<T>> = (0..3)
        .map(|_| Patch {
            offsets: Vec::with_capacity(p.samples),
            normals: Vec::with_capacity(p.samples),
        })
        .collect();
    let wave = p.sign.value::<T>() * p.c;
    for s in 0..p.samples {
        let mut deltas = [[T::zero(); 2]; 3];
        if s > 0 {
            for d in deltas.iter_mut() {
                let rad = rho * lit::<T>(rng.random::<f64>().sqrt());
                let ang = lit::<T>(rng.random::<f64>() * std::f64::consts::TAU);
                *d = [rad * ang.cos(), rad * ang.sin()];
            }
        }
        let [d1, d2, d3] = deltas;
        let x1 = [p.xi1[0] + d1[0], p.xi1[1] + d1[1]];
        let x2 = [p.xi2[0] + d2[0], p.xi2[1] + d2[1]];
        let x3 = [xi[0] + d3[0], xi[1] + d3[1]];
        // The normal at x3 only depends on x3; x1 + x2 need not equal x3.
        let [n1, n2, _] = interaction_normals(x1, x2, p.c, p.sign)?;
        let [_, _, n3] = interaction_normals(p.xi1, [x3[0] - p.xi1[0], x3[1] - p.xi1[1]], p.c, p.sign)?;
        let offs = [
            [radial_step(p.xi1, d1), d1[0], d1[1]],
            [-radial_step(p.xi2, d2), d2[0], d2[1]],
            [-wave * radial_step(xi, d3), d3[0], d3[1]],
        ];
        for (i, (o, n)) in offs.into_iter().zip([n1, n2, n3]).enumerate() {
            patches[i].offsets.push(o);
            patches[i].normals.push(n);
        }
    }

    let anchor_n = [patches[0].normals[0], patches[1].normals[0], patches[2].normals[0]];
    let big_n: Mat3<T> = from_cols(anchor_n[0], anchor_n[1], anchor_n[2]);
    let det_min = (0..p.samples)
        .map(|s| {
            det_cols(patches[0].normals[s], patches[1].normals[s], patches[2].normals[s]).abs()
        })
        .fold(T::infinity(), T::min);
    let Some(n_inv) = inverse(&big_n) else {
        return Ok(ConditionReport {
            det_min,
            diam_max: T::infinity(),
            det_tilde_range: (T::zero(), T::zero()),
            holder_max: T::infinity(),
            passed: false,
        });
    };
    // T^{-1} = K·Nᵀ with K = 2^{10}(1-c)^{-2}A².
    let kk = lit::<T>(1024.0) * a * a / gap2;

    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    let mut tilde: Vec<Vec<Vec3<T>>> = vec![Vec::with_capacity(p.samples); 3];
    let mut pts: Vec<Vec<Vec3<T>>> = vec![Vec::with_capacity(p.samples); 3];
    for s in 0..p.samples {
        let n = [patches[0].normals[s], patches[1].normals[s], patches[2].normals[s]];
        let mut t = [[T::zero(); 3]; 3];
        for i in 0..3 {
            let v = mul_vec(&n_inv, n[i]);
            t[i] = scale(v, T::one() / norm(v));
            tilde[i].push(t[i]);
            let o = patches[i].offsets[s];
            pts[i].push(scale(
                [dot(anchor_n[0], o), dot(anchor_n[1], o), dot(anchor_n[2], o)],
                kk,
            ));
        }
        let d = det_cols(t[0], t[1], t[2]);
        lo = lo.min(d);
        hi = hi.max(d);
    }

    let mut diam_max = T::zero();
    let mut holder_max = T::zero();
    for i in 0..3 {
        let (ps, ns) = (&pts[i], &tilde[i]);
        for u in 0..p.samples {
            for v in 0..u {
                let d = sub(ps[u], ps[v]);
                let len = norm(d);
                diam_max = diam_max.max(len);
                if len == T::zero() {
                    continue;
                }
                let q = norm(sub(ns[u], ns[v])) / len + dot(ns[v], d).abs() / (len * len);
                holder_max = holder_max.max(q);
            }
        }
    }

    let half = lit::<T>(0.5);
    let passed = det_min >= (T::one() - p.c) * half / a
        && diam_max < T::one()
        && lo >= half
        && hi <= T::one() + lit::<T>(1e-12)
        && holder_max <= T::one();
    Ok(ConditionReport {
        det_min,
        diam_max,
        det_tilde_range: (lo, hi),
        holder_max,
        passed,
    })
}
