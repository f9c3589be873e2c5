use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbinv::orbit::{lipschitz_ratio_scan, random_element, random_signal};
use orbinv::transforms::{eval_f, eval_phi, eval_phi_f, eval_theta, make_reduction, phi_f_lipschitz_constant};
use orbinv::{orbit_distance, BetaWeights, ExponentTable, GroupSpec, PairKind, PhiMode};

fn group() -> impl Strategy<Value = GroupSpec> {
    (1usize..=2, 1usize..=4)
        .prop_flat_map(|(s, n)| prop::collection::vec(2u64..=7, s).prop_map(move |orders| (orders, n)))
        .prop_flat_map(|(orders, n)| {
            let rows: Vec<_> = orders.iter().map(|&p| prop::collection::vec(0..p as i64, n)).collect();
            (Just(orders), rows)
        })
        .prop_map(|(orders, rows)| GroupSpec::new(orders, rows).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transforms_are_invariant(g in group(), seed in any::<u64>()) {
        let t = ExponentTable::build(&g);
        let beta = BetaWeights::uniform(&t);
        let ell = make_reduction(seed, t.total_dim(), 2 * g.dim() + 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_signal(&mut rng, g.dim());
        let y = g.act(&random_element(&mut rng, &g), &x).unwrap();
        prop_assert!(eval_f(&t, &x).unwrap().approx_eq(&eval_f(&t, &y).unwrap(), 1e-10));
        prop_assert!(eval_theta(&t, &beta, &x).unwrap().approx_eq(&eval_theta(&t, &beta, &y).unwrap(), 1e-10));
        prop_assert!(eval_phi_f(&t, &x).unwrap().approx_eq(&eval_phi_f(&t, &y).unwrap(), 1e-10));
        for mode in [PhiMode::Repaired, PhiMode::AsWritten] {
            let (a, b) = (eval_phi(&t, &ell, &x, mode).unwrap(), eval_phi(&t, &ell, &y, mode).unwrap());
            prop_assert!(a.approx_eq(&b, 1e-10));
        }
    }

    #[test]
    fn phi_f_is_positively_homogeneous(g in group(), seed in any::<u64>(), s in 0.01f64..100.0) {
        let t = ExponentTable::build(&g);
        let x = random_signal(&mut ChaCha8Rng::seed_from_u64(seed), g.dim());
        let lhs = eval_phi_f(&t, &x.scale(s)).unwrap();
        let rhs: Vec<_> = eval_phi_f(&t, &x).unwrap().values().iter().map(|v| v * s).collect();
        prop_assert!(orbinv::transforms::approx_eq(lhs.values(), &rhs, 1e-10));
    }

    #[test]
    fn orbit_distance_scales_and_is_bounded(g in group(), seed in any::<u64>(), s in 0.01f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_signal(&mut rng, g.dim());
        let y = random_signal(&mut rng, g.dim());
        let d = orbit_distance(&g, &x, &y).unwrap().distance;
        let ds = orbit_distance(&g, &x.scale(s), &y.scale(s)).unwrap().distance;
        prop_assert!((ds - s * d).abs() <= 1e-9 * (1.0 + s * d));
        prop_assert!(d <= x.distance(&y) + 1e-12);
    }

    #[test]
    fn witness_realises_distance(g in group(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_signal(&mut rng, g.dim());
        let y = random_signal(&mut rng, g.dim());
        let r = orbit_distance(&g, &x, &y).unwrap();
        let moved = g.act(&r.witness, &y).unwrap();
        prop_assert!((x.distance(&moved) - r.distance).abs() <= 1e-12);
    }
}

#[test]
fn phi_f_scan_respects_bound() {
    for (n, m) in [(2, 2), (2, 3), (4, 1)] {
        let g = GroupSpec::shift(n, m).unwrap();
        let t = ExponentTable::build(&g);
        let bound = phi_f_lipschitz_constant(&t);
        for kind in [PairKind::Random, PairKind::NearOrbit] {
            let r = lipschitz_ratio_scan(&g, |x| Ok(eval_phi_f(&t, x)?.values), kind, 300, 17).unwrap();
            assert!(r.max_ratio <= bound, "{n}x{m} {kind}: {} > {bound}", r.max_ratio);
        }
    }
}
