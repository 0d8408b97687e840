use kgz_core::decomp::{BlockSpec, Sign, Speed};
use kgz_core::forms::{
    bilinear_ratio, bilinear_ratio_probe, sum_lattice, trilinear_eval, trilinear_eval_with,
    FormKind, ProbeSpec, RhsFormula, Route, TrilinearSpec, PROBE_SPACING,
};
use kgz_core::lattice::{
    convolve_full, make_grid, Domain, Grid, GridSpec, SpacetimeField, Window,
};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type C = Complex<f64>;

fn fill(f: &mut SpacetimeField<f64>, rng: &mut ChaCha20Rng) {
    for v in &mut f.values {
        *v = C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    }
}

struct Triple {
    f: SpacetimeField<f64>,
    g1: SpacetimeField<f64>,
    g2: SpacetimeField<f64>,
}

fn random_triple(grid: &Grid<f64>, rng: &mut ChaCha20Rng) -> Triple {
    let mut g1 = grid.zeros(Domain::Frequency);
    let mut g2 = grid.zeros(Domain::Frequency);
    fill(&mut g1, rng);
    fill(&mut g2, rng);
    let shape = convolve_full(&g1, &g2).unwrap().window;
    let mut f = SpacetimeField::zeros(sum_lattice(&g1.lattice, &g2.lattice), shape, Domain::Frequency);
    fill(&mut f, rng);
    Triple { f, g1, g2 }
}

/// Sextuple loop over `(τ₁, ξ₁, τ₂, ξ₂)` with explicit block tests.
fn brute_trilinear(t: &Triple, spec: &TrilinearSpec<f64>) -> f64 {
    let cell = t.g1.lattice.cell();
    let [b0, b1, b2] = spec.blocks;
    let mut acc = C::new(0.0, 0.0);
    for p1 in 0..t.g1.len() {
        let (tau1, xi1) = t.g1.coords(p1);
        if !b1.contains(tau1, xi1) {
            continue;
        }
        let i1 = t.g1.window.index(p1);
        for p2 in 0..t.g2.len() {
            let (tau2, xi2) = t.g2.coords(p2);
            if !b2.contains(tau2, xi2) {
                continue;
            }
            let i2 = t.g2.window.index(p2);
            let idx = [i1[0] + i2[0] + 1, i1[1] + i2[1] + 1, i1[2] + i2[2] + 1];
            let tau = tau1 + tau2;
            let xi = [xi1[0] + xi2[0], xi1[1] + xi2[1]];
            if !b0.contains(tau, xi) {
                continue;
            }
            acc += t.f.get(idx) * t.g1.values[p1] * t.g2.values[p2] * cell * cell;
        }
    }
    acc.norm() * spec.prefactor()
}

fn specs() -> Vec<TrilinearSpec<f64>> {
    let b = |sign, speed, n, l| BlockSpec::new(sign, speed, n, l, 0.5);
    vec![
        TrilinearSpec::new(
            FormKind::I1,
            [
                b(Sign::Plus, Speed::Reduced, 1, 1),
                b(Sign::Plus, Speed::Full, 1, 1),
                b(Sign::Minus, Speed::Full, 1, 2),
            ],
        )
        .unwrap(),
        TrilinearSpec::new(
            FormKind::I2,
            [
                b(Sign::Minus, Speed::Reduced, 2, 2),
                b(Sign::Plus, Speed::Full, 1, 2),
                b(Sign::Plus, Speed::Full, 2, 1),
            ],
        )
        .unwrap(),
    ]
}

#[test]
fn trilinear_matches_sextuple_loop() {
    let grid = make_grid(GridSpec::new(8, 8, 2.0, 2.0)).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for spec in specs() {
        for _ in 0..3 {
            let t = random_triple(&grid, &mut rng);
            let fast = trilinear_eval(&t.f, &t.g1, &t.g2, &spec).unwrap();
            let slow = brute_trilinear(&t, &spec);
            assert!(slow > 0.0);
            assert!((fast - slow).abs() <= 1e-9 * slow, "{fast} vs {slow}");
        }
    }
}

#[test]
fn both_routes_agree() {
    let grid = make_grid(GridSpec::new(8, 8, 2.0, 2.0)).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    for spec in specs() {
        let t = random_triple(&grid, &mut rng);
        let a = trilinear_eval_with(&t.f, &t.g1, &t.g2, &spec, Route::Direct).unwrap();
        let b = trilinear_eval_with(&t.f, &t.g1, &t.g2, &spec, Route::Dual).unwrap();
        assert!((a - b).abs() <= 1e-10 * a.max(b));
    }
}

#[test]
fn one_cell_ratio_is_closed_form() {
    let block = |speed| BlockSpec::new(Sign::Plus, speed, 1, 1, 0.5);
    let spec = ProbeSpec {
        blocks: [block(Speed::Reduced), block(Speed::Full), block(Speed::Full)],
        centers: [[0.25, 0.25], [0.25, 0.25]],
        sectors: [None, None],
        patch_radius: 0.3,
        dtau: PROBE_SPACING,
        dxi: PROBE_SPACING,
    };
    let lat = spec.lattice();
    let one = Window {
        origin: [0, 0, 0],
        shape: [1, 1, 1],
    };
    let mut g1 = SpacetimeField::zeros(lat, one, Domain::Frequency);
    let mut g2 = g1.clone();
    g1.values[0] = C::new(3.0, -1.0);
    g2.values[0] = C::new(-0.5, 2.0);
    let mu = PROBE_SPACING.powi(3);
    for formula in [RhsFormula::Prop21, RhsFormula::Prop22, RhsFormula::PropN014] {
        let r = bilinear_ratio(&spec, formula, &g1, &g2).unwrap();
        let rhs = formula.rhs(&spec).unwrap();
        assert!((r - mu.sqrt() / rhs).abs() < 1e-14);
    }
}

#[test]
fn resonant_probe_is_reproducible() {
    let spec = ProbeSpec::resonant(RhsFormula::Prop22, 0.5, 4, 2, 2).unwrap();
    let a = bilinear_ratio_probe(&spec, RhsFormula::Prop22, 8, 3).unwrap();
    let b = bilinear_ratio_probe(&spec, RhsFormula::Prop22, 8, 3).unwrap();
    assert_eq!(a, b);
    assert!(a.max_ratio > 0.0 && a.mean_ratio <= a.max_ratio);
}
