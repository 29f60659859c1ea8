use fibra_core::fibertop::{check_very_good_projection, euler_characteristic_plane_fiber, fiber_chi, reduce, ProjectionConfig, Tri};
use fibra_core::{parse_poly, parse_poly_map, GaussRat};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn nonzero_t() -> impl Strategy<Value = GaussRat> {
    (-20i64..=20, 1i64..=7, -20i64..=20)
        .prop_map(|(a, d, b)| GaussRat::new(BigRational::new(a.into(), d.into()), BigRational::from_integer(b.into())))
        .prop_filter("t ≠ 0", |t| !t.is_zero())
}

fn form() -> impl Strategy<Value = Vec<GaussRat>> {
    prop::collection::vec((-4i64..=4).prop_map(GaussRat::from_int), 2).prop_filter("L ≠ 0", |l| l.iter().any(|a| !a.is_zero()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    // Broughton fibers over t ≠ 0 are ℂ*
    #[test]
    fn broughton_generic_fibers(t in nonzero_t()) {
        let f = parse_poly("z + z^2*w", &["z", "w"]).unwrap();
        prop_assert_eq!(euler_characteristic_plane_fiber(&f, &t).unwrap(), 0);
    }

    #[test]
    fn reduced_fiber_agrees_with_direct_curve(t in nonzero_t()) {
        let g = parse_poly_map("z + z^2*w", &["z", "w"]).unwrap();
        let red = reduce(&g);
        let shape = red.shape().unwrap();
        prop_assert_eq!(fiber_chi(&red, &shape, &[t]).unwrap(), 0);
    }

    // an algebraic "not proper" is never contradicted by a very good verdict,
    // and nonzero scaling of L changes nothing
    #[test]
    fn projection_verdicts_are_consistent(l in form(), s in 1i64..=3) {
        let g = parse_poly_map("z + z^2*w", &["z", "w"]).unwrap();
        let t0 = [GaussRat::from_int(0)];
        let cfg = ProjectionConfig::default();
        let r = check_very_good_projection(&g, &l, &t0, &cfg).unwrap();
        if r.evidence.algebraic == Tri::No {
            prop_assert!(!r.is_very_good);
            prop_assert!(r.evidence.numeric != Tri::Yes || r.evidence.disagreement);
        }
        let scaled: Vec<GaussRat> = l.iter().map(|a| a.clone() * GaussRat::from_int(s)).collect();
        let q = check_very_good_projection(&g, &scaled, &t0, &cfg).unwrap();
        prop_assert_eq!(q.proper, r.proper);
        prop_assert_eq!(q.is_very_good, r.is_very_good);
    }
}
