use fibra_core::asymset::{estimate_asymptotic_set, AsymConfig};
use fibra_core::realify::RhoSpec;
use fibra_core::parse_poly_map;

fn run_in(threads: usize, f: impl FnOnce() -> String + Send) -> String {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn identical_across_thread_counts() {
    let g = parse_poly_map("z + z^2*w", &["z", "w"]).unwrap();
    let cfg = AsymConfig { seed: 4, ..AsymConfig::default() };
    let go = || format!("{:?}", estimate_asymptotic_set(&g, &RhoSpec::unit(2), &cfg).unwrap());
    let one = run_in(1, go);
    assert_eq!(one, run_in(3, go));
    assert_eq!(one, run_in(8, go));
}

#[test]
fn same_seed_same_result_and_stable_limit() {
    let g = parse_poly_map("z + z^2*w", &["z", "w"]).unwrap();
    let mut near_zero = 0;
    for seed in 0..3 {
        let cfg = AsymConfig { seed, ..AsymConfig::default() };
        let a = estimate_asymptotic_set(&g, &RhoSpec::unit(2), &cfg).unwrap();
        let b = estimate_asymptotic_set(&g, &RhoSpec::unit(2), &cfg).unwrap();
        assert_eq!(a, b);
        near_zero += usize::from(a.clusters.iter().any(|c| c.center[0].norm() < 0.1));
    }
    assert_eq!(near_zero, 3);
}

#[test]
fn zeta_gauge_is_empty_across_seeds() {
    let g = parse_poly_map("z; z*zeta^2 + w", &["z", "w", "zeta"]).unwrap();
    for seed in 10..15 {
        let cfg = AsymConfig { seed, ..AsymConfig::default() };
        let s = estimate_asymptotic_set(&g, &RhoSpec::from_ints(&[0, 0, 1]).unwrap(), &cfg).unwrap();
        assert!(s.clusters.is_empty(), "seed {seed}: {:?}", s.clusters.iter().map(|c| &c.center).collect::<Vec<_>>());
    }
}
