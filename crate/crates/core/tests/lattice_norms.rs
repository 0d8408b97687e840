use kgz_core::decomp::{
    block_mask, project, sector_index, weight_ratio, BlockSpec, Region, SectorSpec, Sign, Speed,
};
use kgz_core::lattice::{
    convolve, convolve_full, l2_norm, make_grid, transform, Direction, Domain, Grid, GridSpec,
    Offset, SpacetimeField,
};
use kgz_core::norms::{block_masses, conjugation_symmetry_check, dual_pairing, xsb_norm, NormSpec};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type C = Complex<f64>;

fn random_field(grid: &Grid<f64>, domain: Domain, rng: &mut ChaCha20Rng) -> SpacetimeField<f64> {
    let mut f = grid.zeros(domain);
    for v in &mut f.values {
        *v = C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    }
    f
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn max_abs_diff(a: &SpacetimeField<f64>, b: &SpacetimeField<f64>) -> f64 {
    assert_eq!(a.window, b.window);
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn l2_diff(a: &SpacetimeField<f64>, b: &SpacetimeField<f64>) -> f64 {
    let mut d = a.clone();
    for (x, y) in d.values.iter_mut().zip(&b.values) {
        *x -= y;
    }
    l2_norm(&d)
}

#[test]
fn transform_round_trip() {
    let g = make_grid(GridSpec::new(8, 16, 3.0, 5.0)).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let f = random_field(&g, Domain::Frequency, &mut rng);
    let back = transform(&transform(&f, Direction::Inverse).unwrap(), Direction::Forward).unwrap();
    assert!(l2_diff(&back, &f) / l2_norm(&f) < 1e-12);
    let p = random_field(&g, Domain::Physical, &mut rng);
    let back = transform(&transform(&p, Direction::Forward).unwrap(), Direction::Inverse).unwrap();
    assert!(l2_diff(&back, &p) / l2_norm(&p) < 1e-12);
}

#[test]
fn delta_has_flat_spectrum() {
    let g = make_grid(GridSpec::new(8, 8, 4.0, 4.0)).unwrap();
    let mut p = g.zeros(Domain::Physical);
    p.values[123] = C::new(2.0, -1.0);
    let f = transform(&p, Direction::Forward).unwrap();
    let m0 = f.values[0].norm();
    assert!(f.values.iter().all(|v| (v.norm() - m0).abs() < 1e-12 * m0));
    assert!(rel(l2_norm(&f), l2_norm(&p)) < 1e-12);
}

#[test]
fn parseval_on_16_cubed() {
    let g = make_grid(GridSpec::new(16, 16, 8.0, 8.0)).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    for _ in 0..5 {
        let f = random_field(&g, Domain::Frequency, &mut rng);
        let p = transform(&f, Direction::Inverse).unwrap();
        assert!(rel(l2_norm(&p), l2_norm(&f)) < 1e-12);
    }
}

/// Direct double loop over all index pairs; the sum lands on the
/// whole-offset lattice with index `k1 + k2 + 1`.
fn brute_convolve(a: &SpacetimeField<f64>, b: &SpacetimeField<f64>) -> SpacetimeField<f64> {
    let full = convolve_full(a, b).unwrap();
    let mut out = SpacetimeField::zeros(full.lattice, full.window, Domain::Frequency);
    let cell = a.lattice.cell();
    for pa in 0..a.len() {
        let ia = a.window.index(pa);
        for pb in 0..b.len() {
            let ib = b.window.index(pb);
            let idx = [ia[0] + ib[0] + 1, ia[1] + ib[1] + 1, ia[2] + ib[2] + 1];
            let pos = out.window.position(idx).unwrap();
            out.values[pos] += a.values[pa] * b.values[pb] * cell;
        }
    }
    out
}

#[test]
fn convolution_matches_double_loop() {
    let g = make_grid(GridSpec::new(8, 8, 2.0, 2.0)).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    for _ in 0..3 {
        let a = random_field(&g, Domain::Frequency, &mut rng);
        let b = random_field(&g, Domain::Frequency, &mut rng);
        let fast = convolve_full(&a, &b).unwrap();
        assert_eq!(fast.lattice.tau_offset, Offset::Whole);
        let slow = brute_convolve(&a, &b);
        assert!(l2_diff(&fast, &slow) / l2_norm(&slow) < 1e-10);
    }
}

#[test]
fn convolution_is_commutative_and_bilinear() {
    let g = make_grid(GridSpec::new(8, 8, 2.0, 2.0)).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let a = random_field(&g, Domain::Frequency, &mut rng);
    let b = random_field(&g, Domain::Frequency, &mut rng);
    let d = random_field(&g, Domain::Frequency, &mut rng);
    let ab = convolve(&a, &b).unwrap();
    let ba = convolve(&b, &a).unwrap();
    assert!(max_abs_diff(&ab, &ba) <= 1e-12 * l2_norm(&ab));

    let mut a2 = a.clone();
    a2.scale(2.5);
    a2.add_assign(&d).unwrap();
    let lhs = convolve(&a2, &b).unwrap();
    let mut rhs = convolve(&a, &b).unwrap();
    rhs.scale(2.5);
    rhs.add_assign(&convolve(&d, &b).unwrap()).unwrap();
    assert!(l2_diff(&lhs, &rhs) <= 1e-12 * l2_norm(&rhs));
}

fn tiling_blocks(speed: Speed, sign: Sign, c: f64) -> Vec<BlockSpec<f64>> {
    let mut out = Vec::new();
    let mut n = 1u64;
    while n <= 64 {
        let mut l = 1u64;
        while l <= 256 {
            out.push(BlockSpec::new(sign, speed, n, l, c));
            l *= 2;
        }
        n *= 2;
    }
    out
}

#[test]
fn blocks_tile_exhaustively_on_16_cubed() {
    let g = make_grid(GridSpec::new(16, 16, 8.0, 8.0)).unwrap();
    for speed in [Speed::Full, Speed::Reduced] {
        for sign in [Sign::Plus, Sign::Minus] {
            let blocks = tiling_blocks(speed, sign, 0.5);
            let masks: Vec<_> = blocks.iter().map(|b| block_mask(&g, b)).collect();
            for pos in 0..g.point_count() {
                let hits: f64 = masks.iter().map(|m| m.values[pos].re).sum();
                assert_eq!(hits, 1.0, "point {pos} covered {hits} times");
            }
        }
    }
}

#[test]
fn block_projections_are_orthogonal_on_16_cubed() {
    let g = make_grid(GridSpec::new(16, 16, 8.0, 8.0)).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let f = random_field(&g, Domain::Frequency, &mut rng);
    let total = l2_norm(&f).powi(2);
    for speed in [Speed::Full, Speed::Reduced] {
        let mut sum = 0.0;
        let mut rebuilt = g.zeros(Domain::Frequency);
        for b in tiling_blocks(speed, Sign::Minus, 0.3) {
            let p = project(&f, &Region::Block(b)).unwrap();
            sum += l2_norm(&p).powi(2);
            rebuilt.add_assign(&p).unwrap();
        }
        assert!(rel(sum, total) < 1e-12);
        assert_eq!(rebuilt, f);
        let masses = block_masses(&f, Sign::Minus, if speed == Speed::Full { 1.0 } else { 0.3 })
            .unwrap();
        assert!(rel(masses.values().sum::<f64>(), total) < 1e-12);
    }
}

#[test]
fn sectors_tile_the_punctured_plane() {
    let g = make_grid(GridSpec::new(2, 64, 1.0, 9.0)).unwrap();
    for a in [64u64, 128] {
        for &x in &g.xi {
            for &y in &g.xi {
                let j = sector_index([x, y], a).unwrap();
                let hits = (-(a as i64)..a as i64)
                    .filter(|&k| SectorSpec { a, j: k }.contains([x, y]))
                    .count();
                assert_eq!(hits, 1);
                assert!(SectorSpec { a, j }.contains([x, y]));
            }
        }
    }
}

#[test]
fn modulation_weights_are_equivalent() {
    let g = make_grid(GridSpec::new(64, 32, 20.0, 10.0)).unwrap();
    for &tau in &g.tau {
        for &x in &g.xi {
            for &y in &g.xi {
                for sign in [Sign::Plus, Sign::Minus] {
                    let r = weight_ratio(tau, [x, y], sign);
                    assert!((0.5..=2.0).contains(&r), "ratio {r} at {tau}, {x}, {y}");
                }
            }
        }
    }
}

#[test]
fn xsb_at_zero_exponents_is_l2() {
    let g = make_grid(GridSpec::new(8, 8, 6.0, 6.0)).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let spec = NormSpec::new(0.0, 0.0, Sign::Plus, Speed::Reduced, 0.5).unwrap();
    for _ in 0..100 {
        let f = random_field(&g, Domain::Frequency, &mut rng);
        assert!(rel(xsb_norm(&f, &spec).unwrap(), l2_norm(&f)) < 1e-12);
    }
}

#[test]
fn xsb_matches_pointwise_weighted_sum() {
    let g = make_grid(GridSpec::new(16, 16, 12.0, 12.0)).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let f = random_field(&g, Domain::Frequency, &mut rng);
    let spec = NormSpec::<f64>::new(-0.7, 0.55, Sign::Minus, Speed::Full, 0.5).unwrap();
    let mut direct = 0.0f64;
    for pos in 0..f.len() {
        let (tau, xi) = f.coords(pos);
        let (n, l) = kgz_core::decomp::block_of(tau, xi, Sign::Minus, 1.0);
        direct += spec.weight(n, l).powi(2) * f.values[pos].norm_sqr();
    }
    let direct = (direct * f.cell_measure()).sqrt();
    assert!(rel(xsb_norm(&f, &spec).unwrap(), direct) < 1e-12);
}

#[test]
fn conjugation_swaps_signs() {
    let g = make_grid(GridSpec::new(8, 8, 6.0, 6.0)).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let f = random_field(&g, Domain::Frequency, &mut rng);
    let spec = NormSpec::new(-0.5, 0.6, Sign::Plus, Speed::Reduced, 0.4).unwrap();
    let gap = conjugation_symmetry_check(&f, &spec).unwrap();
    assert!(gap <= 1e-10 * xsb_norm(&f, &spec).unwrap());
}

#[test]
fn duality_bound_on_random_pairs() {
    let g = make_grid(GridSpec::new(8, 8, 6.0, 6.0)).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let spec = NormSpec::new(-0.7, 0.55, Sign::Plus, Speed::Full, 0.5).unwrap();
    for _ in 0..50 {
        let f = random_field(&g, Domain::Frequency, &mut rng);
        let h = random_field(&g, Domain::Frequency, &mut rng);
        let lhs = dual_pairing(&f, &h).unwrap().norm();
        let rhs = xsb_norm(&f, &spec).unwrap() * xsb_norm(&h, &spec.dual()).unwrap();
        assert!(lhs <= rhs + 1e-9);
    }
}
