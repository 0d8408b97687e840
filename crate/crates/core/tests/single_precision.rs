use kgz_core::decomp::{project, BlockSpec, Region, Sign, Speed};
use kgz_core::forms::{bilinear_ratio_probe, ProbeSpec, RhsFormula};
use kgz_core::lattice::{
    convolve, l2_norm, make_grid, transform, Direction, Domain, GridSpec, PlaneGrid,
};
use kgz_core::norms::{xsb_norm, NormSpec};
use kgz_core::solver::{picard_iterate, DataSpec, Envelope, SolverConfig};
use num_complex::Complex;

#[test]
fn lattice_and_norms_in_f32() {
    let g = make_grid(GridSpec::new(8, 8, 4.0f32, 4.0)).unwrap();
    let mut f = g.zeros(Domain::Frequency);
    for (k, v) in f.values.iter_mut().enumerate() {
        *v = Complex::new((k % 7) as f32 - 3.0, (k % 5) as f32 * 0.5);
    }
    let p = transform(&f, Direction::Inverse).unwrap();
    assert!((l2_norm(&p) - l2_norm(&f)).abs() <= 1e-5 * l2_norm(&f));
    let spec = NormSpec::new(0.0f32, 0.0, Sign::Plus, Speed::Full, 0.5).unwrap();
    assert!((xsb_norm(&f, &spec).unwrap() - l2_norm(&f)).abs() <= 1e-5 * l2_norm(&f));
    let block = Region::Block(BlockSpec::new(Sign::Minus, Speed::Reduced, 2, 1, 0.5f32));
    let pf = project(&f, &block).unwrap();
    assert!(l2_norm(&pf) <= l2_norm(&f));
    let ff = convolve(&f, &f).unwrap();
    assert!(ff.is_finite());
}

#[test]
fn probe_and_solver_in_f32() {
    let spec = ProbeSpec::<f32>::resonant(RhsFormula::Prop21, 0.5, 2, 1, 1).unwrap();
    let r = bilinear_ratio_probe(&spec, RhsFormula::Prop21, 4, 1).unwrap();
    assert!(r.max_ratio.is_finite() && r.max_ratio > 0.0);

    let grid = PlaneGrid::new(16, 1.0f32).unwrap();
    let data = DataSpec {
        envelope: Envelope::LowRegularity { s: -0.7f32 },
        amplitude: 1e-3,
        seed: 1,
    }
    .generate(grid, -0.7)
    .unwrap();
    let cfg = SolverConfig {
        s: -0.7f32,
        ..SolverConfig::new(0.5f32, 0.125, 0.5, 4)
    };
    let run = picard_iterate(&data, &cfg).unwrap();
    assert_eq!(run.states.len(), 5);
    assert!(run.states.iter().all(|u| u.is_finite()));
}
