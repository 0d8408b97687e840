//! Trilinear forms `I₁`, `I₂` on frequency fields.

use serde::{Deserialize, Serialize};

use crate::decomp::{project, BlockSpec, Region, Sign, Speed};
use crate::error::{LabError, Result};
use crate::lattice::{convolve_full, pairing, Domain, Lattice, SpacetimeField};
use crate::real::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormKind {
    I1,
    I2,
}

/// Which of the two equivalent convolution pairings evaluates the form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `⟨P₀f, P₁g₁ * P₂g₂⟩`
    Direct,
    /// `⟨P₁g₁, P₀f * reflect(P₂g₂)⟩`
    Dual,
}

/// Output block `K^{±₀,c}_{N₀,L₀}` and input blocks `K^{±₁}`, `K^{±₂}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrilinearSpec<T> {
    pub kind: FormKind,
    pub blocks: [BlockSpec<T>; 3],
}

impl<T: Real> TrilinearSpec<T> {
    pub fn new(kind: FormKind, blocks: [BlockSpec<T>; 3]) -> Result<Self> {
        let spec = Self { kind, blocks };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for b in &self.blocks {
            b.validate()?;
        }
        if self.blocks[0].speed != Speed::Reduced {
            return Err(LabError::InvalidParameter(
                "block 0 of a trilinear form must have reduced speed".into(),
            ));
        }
        if self.blocks[1].speed != Speed::Full || self.blocks[2].speed != Speed::Full {
            return Err(LabError::InvalidParameter(
                "blocks 1 and 2 of a trilinear form must have full speed".into(),
            ));
        }
        Ok(())
    }

    pub fn signs(&self) -> [Sign; 3] {
        [self.blocks[0].sign, self.blocks[1].sign, self.blocks[2].sign]
    }

    /// `N₁⁻¹` for `I₁`, `N₀N₁⁻¹N₂⁻¹` for `I₂`.
    pub fn prefactor(&self) -> T {
        let n = |k: usize| lit::<T>(self.blocks[k].n as f64);
        match self.kind {
            FormKind::I1 => n(1).recip(),
            FormKind::I2 => n(0) / (n(1) * n(2)),
        }
    }
}

/// Lattice on which `ζ₁ + ζ₂` lives for `ζ₁ ∈ a`, `ζ₂ ∈ b`.
pub fn sum_lattice<T: Real>(a: &Lattice<T>, b: &Lattice<T>) -> Lattice<T> {
    a.with_offsets(
        a.tau_offset.add(b.tau_offset).0,
        a.xi_offset.add(b.xi_offset).0,
    )
}

/// `|prefactor · Σ P₀f(ζ₁+ζ₂) P₁g₁(ζ₁) P₂g₂(ζ₂) μ²|`.
///
/// `g₁`, `g₂` share spacing; `f` must sit on their sum lattice.
pub fn trilinear_eval<T: Real>(
    f: &SpacetimeField<T>,
    g1: &SpacetimeField<T>,
    g2: &SpacetimeField<T>,
    spec: &TrilinearSpec<T>,
) -> Result<T> {
    trilinear_eval_with(f, g1, g2, spec, Route::Direct)
}

pub fn trilinear_eval_with<T: Real>(
    f: &SpacetimeField<T>,
    g1: &SpacetimeField<T>,
    g2: &SpacetimeField<T>,
    spec: &TrilinearSpec<T>,
    route: Route,
) -> Result<T> {
    spec.validate()?;
    for x in [f, g1, g2] {
        x.require_domain(Domain::Frequency)?;
    }
    if !g1.lattice.same_spacing(&g2.lattice)
        || f.lattice != sum_lattice(&g1.lattice, &g2.lattice)
    {
        return Err(LabError::GridMismatch);
    }
    let pf = project(f, &Region::Block(spec.blocks[0]))?;
    let p1 = project(g1, &Region::Block(spec.blocks[1]))?;
    let p2 = project(g2, &Region::Block(spec.blocks[2]))?;
    let value = match route {
        Route::Direct => pairing(&pf, &convolve_full(&p1, &p2)?)?,
        Route::Dual => pairing(&p1, &convolve_full(&pf, &p2.reflect())?)?,
    };
    Ok(value.norm() * spec.prefactor())
}
