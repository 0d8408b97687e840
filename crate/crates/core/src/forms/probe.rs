//! Empirical constants of the bilinear `L²` estimates.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::{BlockSpec, SectorSpec, Sign, Speed};
use crate::error::{LabError, Result};
use crate::lattice::{convolve_full, l2_norm, Domain, Lattice, Offset, SpacetimeField, Window};
use crate::real::{bracket, dyadic_floor, from_usize, lit, norm2, pairwise_sum, to_f64, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RhsFormula {
    #[serde(rename = "prop21")]
    Prop21,
    #[serde(rename = "prop22")]
    Prop22,
    #[serde(rename = "prop_A54")]
    PropA54,
    #[serde(rename = "prop_A12")]
    PropA12,
    #[serde(rename = "prop_N014")]
    PropN014,
}

impl RhsFormula {
    pub const ALL: [RhsFormula; 5] = [
        RhsFormula::Prop21,
        RhsFormula::Prop22,
        RhsFormula::PropA54,
        RhsFormula::PropA12,
        RhsFormula::PropN014,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RhsFormula::Prop21 => "prop21",
            RhsFormula::Prop22 => "prop22",
            RhsFormula::PropA54 => "prop_A54",
            RhsFormula::PropA12 => "prop_A12",
            RhsFormula::PropN014 => "prop_N014",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Right-hand constant for unit-norm inputs.
    pub fn rhs<T: Real>(self, spec: &ProbeSpec<T>) -> Result<T> {
        let n = |k: usize| lit::<T>(spec.blocks[k].n as f64);
        let l = |k: usize| lit::<T>(spec.blocks[k].l as f64);
        let half = lit::<T>(0.5);
        let quarter = lit::<T>(0.25);
        let nmin012 = n(0).min(n(1)).min(n(2));
        let level = || -> Result<T> {
            spec.sectors[0]
                .map(|s| lit::<T>(s.a as f64))
                .ok_or_else(|| LabError::InvalidParameter(format!("{} needs sectors", self.name())))
        };
        let v = match self {
            RhsFormula::Prop21 => {
                (nmin012 * l(1).min(l(2))).powf(half) * (n(1).min(n(2)) * l(1).max(l(2))).powf(quarter)
            }
            RhsFormula::Prop22 => (nmin012 * l(1) * l(2)).sqrt(),
            RhsFormula::PropA54 => level()?.powf(lit(1.25)) * (l(0) * l(1) * l(2)).sqrt(),
            RhsFormula::PropA12 => level()?.sqrt() * (l(0) * l(1) * l(2)).sqrt(),
            RhsFormula::PropN014 => n(0).powf(quarter) * (l(0) * l(1).min(l(2))).sqrt(),
        };
        if !(v > T::zero()) || !v.is_finite() {
            return Err(LabError::Degenerate(format!("{} bound is {v}", self.name())));
        }
        Ok(v)
    }
}

/// Blocks `(K₀, K₁, K₂)` with the patches the random inputs are drawn on.
///
/// Input `k ∈ {1, 2}` lives on `K_k ∩ {|ξ - centers[k-1]| ≤ patch_radius}`
/// (further cut by `sectors[k-1]`), on the upper modulation band
/// `τ ± v|ξ| ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSpec<T> {
    pub blocks: [BlockSpec<T>; 3],
    pub centers: [[T; 2]; 2],
    pub sectors: [Option<SectorSpec>; 2],
    pub patch_radius: T,
    pub dtau: T,
    pub dxi: T,
}

pub const PATCH_RADIUS_CAP: f64 = 2.0;
pub const PROBE_SPACING: f64 = 0.5;

impl<T: Real> ProbeSpec<T> {
    /// Geometry at which `τ₁ + τ₂` lands on the output cone, so the output
    /// block captures the bulk of `g₁ * g₂`.
    ///
    /// `prop21`: all speeds 1, `ξ₂ ∥ ξ₁`. `prop22`: block 1 at speed `c`,
    /// `ξ₂` antiparallel with `|ξ₂| = (1-c)|ξ₁|/2`. Signs are `+` and
    /// `|ξ₁| = 3N₁/2`.
    pub fn resonant(formula: RhsFormula, c: T, n1: u64, l1: u64, l2: u64) -> Result<Self> {
        let a = lit::<T>(1.5 * n1 as f64);
        let (speed1, xi2) = match formula {
            RhsFormula::Prop21 => (Speed::Full, [a, T::zero()]),
            RhsFormula::Prop22 => (Speed::Reduced, [-(T::one() - c) * a * lit(0.5), T::zero()]),
            _ => {
                return Err(LabError::InvalidParameter(format!(
                    "no resonant geometry for {}",
                    formula.name()
                )))
            }
        };
        let b1 = BlockSpec::new(Sign::Plus, speed1, n1, l1, c);
        let b2 = BlockSpec::new(Sign::Plus, Speed::Full, n_of(xi2), l2, c);
        Self::with_output(b1, b2, [[a, T::zero()], xi2], [None, None], Sign::Plus, Speed::Full)
    }

    /// Sector pair at level `A` with `g₁ ∈ D_{j₁}^A ∩ K⁻`, `g₂ ∈ D_{j₂}^A ∩ K⁺`
    /// and reduced-speed output, patches on the sector bisectors.
    pub fn sector_pair(
        formula: RhsFormula,
        c: T,
        n1: u64,
        n2: u64,
        sectors: [SectorSpec; 2],
        l1: u64,
        l2: u64,
    ) -> Result<Self> {
        for s in &sectors {
            s.validate()?;
        }
        let centre = |s: &SectorSpec, n: u64| {
            let th = T::PI() * (lit::<T>(s.j as f64) + lit(0.5)) / lit::<T>(s.a as f64);
            let r = lit::<T>(1.5 * n as f64);
            [r * th.cos(), r * th.sin()]
        };
        let centers = [centre(&sectors[0], n1), centre(&sectors[1], n2)];
        let b1 = BlockSpec::new(Sign::Minus, Speed::Full, n1, l1, c);
        let b2 = BlockSpec::new(Sign::Plus, Speed::Full, n2, l2, c);
        let mut spec = Self::with_output(
            b1,
            b2,
            centers,
            [Some(sectors[0]), Some(sectors[1])],
            Sign::Plus,
            Speed::Reduced,
        )?;
        spec.rhs_check(formula)?;
        spec.patch_radius = spec.patch_radius.min(lit(1.0));
        Ok(spec)
    }

    fn with_output(
        b1: BlockSpec<T>,
        b2: BlockSpec<T>,
        centers: [[T; 2]; 2],
        sectors: [Option<SectorSpec>; 2],
        sign0: Sign,
        speed0: Speed,
    ) -> Result<Self> {
        b1.validate()?;
        b2.validate()?;
        let xi = [centers[0][0] + centers[1][0], centers[0][1] + centers[1][1]];
        let mut spec = Self {
            blocks: [b1, b1, b2],
            centers,
            sectors,
            patch_radius: T::zero(),
            dtau: lit(PROBE_SPACING),
            dxi: lit(PROBE_SPACING),
        };
        let n_min = b1.n.min(b2.n) as f64;
        spec.patch_radius = lit::<T>(n_min.min(PATCH_RADIUS_CAP));
        // output modulation at the patch centres with band-midpoint inputs
        let mid = |b: &BlockSpec<T>| {
            let (lo, hi) = band::<T>(b.l);
            (lo + hi) * lit(0.5)
        };
        let (m1, m2) = (mid(&b1), mid(&b2));
        let tau = m1 - b1.sign.value::<T>() * b1.v() * norm2(centers[0]) + m2
            - b2.sign.value::<T>() * b2.v() * norm2(centers[1]);
        let mut b0 = BlockSpec::new(sign0, speed0, n_of(xi), 1, b1.c);
        let m0 = tau + sign0.value::<T>() * b0.v() * norm2(xi);
        b0.l = dyadic_floor(bracket(m0));
        b0.validate()?;
        spec.blocks[0] = b0;
        Ok(spec)
    }

    fn rhs_check(&self, formula: RhsFormula) -> Result<()> {
        formula.rhs(self).map(|_| ())
    }

    pub fn lattice(&self) -> Lattice<T> {
        Lattice {
            dtau: self.dtau,
            dxi: self.dxi,
            tau_offset: Offset::Half,
            xi_offset: Offset::Half,
        }
    }

    /// Support of input `k ∈ {1, 2}` as a window plus in-support flags.
    pub fn support(&self, k: usize) -> Result<(Window, Vec<bool>)> {
        let block = &self.blocks[k];
        let centre = self.centers[k - 1];
        let r = self.patch_radius;
        let lat = self.lattice();
        let (mlo, mhi) = band::<T>(block.l);
        let rho = norm2(centre);
        let sv = block.sign.value::<T>() * block.v();
        let ends = [-sv * (rho - r).max(T::zero()), -sv * (rho + r)];
        let tlo = ends[0].min(ends[1]) + mlo;
        let thi = ends[0].max(ends[1]) + mhi;
        let lo = [
            lat.tau_index(tlo) - 1,
            lat.xi_index(centre[0] - r) - 1,
            lat.xi_index(centre[1] - r) - 1,
        ];
        let hi = [
            lat.tau_index(thi) + 1,
            lat.xi_index(centre[0] + r) + 1,
            lat.xi_index(centre[1] + r) + 1,
        ];
        let window = Window::from_bounds(lo, hi);
        let probe = SpacetimeField::<T>::zeros(lat, window, Domain::Frequency);
        let sector = self.sectors[k - 1];
        let flags: Vec<bool> = (0..window.len())
            .map(|pos| {
                let (tau, xi) = probe.coords(pos);
                let d = [xi[0] - centre[0], xi[1] - centre[1]];
                norm2(d) <= r
                    && tau + sv * norm2(xi) >= T::zero()
                    && block.contains(tau, xi)
                    && sector.is_none_or(|s| s.contains(xi))
            })
            .collect();
        if !flags.iter().any(|&b| b) {
            return Err(LabError::Degenerate(format!("input {k} has empty support")));
        }
        Ok((window, flags))
    }
}

fn n_of<T: Real>(xi: [T; 2]) -> u64 {
    dyadic_floor(bracket(norm2(xi)))
}

/// Range of `τ ± v|ξ|` with `⟨·⟩ ∈ [L, 2L)`, upper band only.
fn band<T: Real>(l: u64) -> (T, T) {
    let l = lit::<T>(l as f64);
    let lo = if l > T::one() { (l * l - T::one()).sqrt() } else { T::zero() };
    (lo, (lit::<T>(4.0) * l * l - T::one()).sqrt())
}

/// `‖χ_{K₀}(g₁ * g₂)‖ / (RHS ‖g₁‖ ‖g₂‖)`; zero when an input vanishes.
pub fn bilinear_ratio<T: Real>(
    spec: &ProbeSpec<T>,
    formula: RhsFormula,
    g1: &SpacetimeField<T>,
    g2: &SpacetimeField<T>,
) -> Result<T> {
    let rhs = formula.rhs(spec)?;
    let denom = l2_norm(g1) * l2_norm(g2);
    if denom == T::zero() {
        return Ok(T::zero());
    }
    let out = convolve_full(g1, g2)?;
    let b0 = spec.blocks[0];
    let sq: Vec<T> = (0..out.len())
        .map(|pos| {
            let (tau, xi) = out.coords(pos);
            if b0.contains(tau, xi) {
                out.values[pos].norm_sqr()
            } else {
                T::zero()
            }
        })
        .collect();
    let num = (pairwise_sum(&sq) * out.cell_measure()).sqrt();
    Ok(num / (rhs * denom))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport<T> {
    pub spec: ProbeSpec<T>,
    pub rhs_formula: RhsFormula,
    pub trials: usize,
    pub max_ratio: T,
    pub mean_ratio: T,
    pub seed: u64,
}

fn gaussian_field<T: Real>(
    lat: Lattice<T>,
    window: Window,
    flags: &[bool],
    rng: &mut ChaCha20Rng,
) -> SpacetimeField<T> {
    let mut f = SpacetimeField::zeros(lat, window, Domain::Frequency);
    for (v, &on) in f.values.iter_mut().zip(flags) {
        if on {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *v = Complex::new(lit(re), lit(im));
        }
    }
    let n = l2_norm(&f);
    f.scale(n.recip());
    f
}

/// Max and mean of [`bilinear_ratio`] over `trials` random unit-`L²`
/// complex Gaussian inputs. Trial `t` draws from the ChaCha stream `t` of
/// key `seed`, so the report does not depend on scheduling.
pub fn bilinear_ratio_probe<T: Real>(
    spec: &ProbeSpec<T>,
    formula: RhsFormula,
    trials: usize,
    seed: u64,
) -> Result<RatioReport<T>> {
    if trials == 0 {
        return Err(LabError::InvalidParameter("trials must be positive".into()));
    }
    formula.rhs(spec)?;
    let (w1, f1) = spec.support(1)?;
    let (w2, f2) = spec.support(2)?;
    let lat = spec.lattice();
    let ratios: Vec<T> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let g1 = gaussian_field(lat, w1, &f1, &mut rng);
            let g2 = gaussian_field(lat, w2, &f2, &mut rng);
            bilinear_ratio(spec, formula, &g1, &g2)
        })
        .collect::<Result<_>>()?;
    let max_ratio = ratios.iter().fold(T::zero(), |m, &r| m.max(r));
    let mean_ratio = pairwise_sum(&ratios) / from_usize(trials);
    Ok(RatioReport {
        spec: *spec,
        rhs_formula: formula,
        trials,
        max_ratio,
        mean_ratio: mean_ratio.min(max_ratio),
        seed,
    })
}

impl<T: Real> RatioReport<T> {
    /// Flat record for CSV indices.
    pub fn csv_row(&self) -> String {
        let b = &self.spec.blocks;
        format!(
            "{},{}{}{},{},{},{},{},{},{},{},{},{},{}",
            self.rhs_formula.name(),
            b[0].sign.symbol(),
            b[1].sign.symbol(),
            b[2].sign.symbol(),
            b[0].n,
            b[1].n,
            b[2].n,
            b[0].l,
            b[1].l,
            b[2].l,
            self.trials,
            self.seed,
            to_f64(self.max_ratio),
            to_f64(self.mean_ratio)
        )
    }
}

pub const CSV_HEADER: &str = "kind,signs,N0,N1,N2,L0,L1,L2,trials,seed,max_ratio,mean_ratio";
