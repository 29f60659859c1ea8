mod common;

use common::{int_coeff, poly_with};
use fibra_core::elim::{discriminant, gcd, resultant, roots, squarefree_part, UniPoly};
use fibra_core::fibertop::curve_chi;
use fibra_core::polycore::MPoly;
use fibra_core::{parse_poly, GaussRat};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_coeffs() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| Complex64::new(a, b)), 2..=11)
        .prop_filter("leading coefficient away from zero", |c| c.last().unwrap().norm() > 0.1)
}

fn univariate(p: &MPoly<GaussRat>) -> UniPoly<Complex64> {
    UniPoly::from_mpoly(p, 0).unwrap().to_complex()
}

fn shares_root(f: &MPoly<GaussRat>, g: &MPoly<GaussRat>) -> bool {
    let rf = roots(&univariate(f), 1e-14).unwrap();
    let rg = roots(&univariate(g), 1e-14).unwrap();
    rf.roots.iter().any(|(a, _)| rg.roots.iter().any(|(b, _)| (a - b).norm() <= 1e-6 * a.norm().max(1.0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn vieta(c in complex_coeffs()) {
        let p = UniPoly::new(c.clone());
        let rs = roots(&p, 1e-14).unwrap();
        prop_assert_eq!(rs.approximations.len(), c.len() - 1);
        let mut prod = vec![*c.last().unwrap()];
        for r in &rs.approximations {
            let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
            for (k, &q) in prod.iter().enumerate() {
                next[k + 1] += q;
                next[k] -= q * r;
            }
            prod = next;
        }
        let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let err = c.iter().zip(&prod).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale;
        prop_assert!(err < 1e-8, "Vieta residual {err:e}");
    }

    #[test]
    fn resultant_vanishes_iff_shared_root(
        f in poly_with(2, 3, 4, int_coeff()),
        g in poly_with(2, 3, 4, int_coeff()),
        common in any::<bool>(),
        a in -3i64..=3,
        b in -3i64..=3,
        y in -4i64..=4,
        df in 1u32..=3,
        dg in 1u32..=3,
    ) {
        // a pure x^k term keeps x in both after specializing y, unless it cancels
        let f = &f + &MPoly::var(2, 0).pow(df).scale(&GaussRat::from_int(7));
        let g = &g + &MPoly::var(2, 0).pow(dg).scale(&GaussRat::from_int(7));
        let (f, g) = if common {
            let l = &(&MPoly::var(2, 0) - &MPoly::var(2, 1).scale(&GaussRat::from_int(a))) - &MPoly::constant(2, GaussRat::from_int(b));
            (&f * &l, &g * &l)
        } else {
            (f, g)
        };
        let y = GaussRat::from_int(y);
        let fs = f.specialize(1, &y);
        let gs = g.specialize(1, &y);
        prop_assume!(fs.degree_in(0) >= 1 && gs.degree_in(0) >= 1);
        let res = resultant(&fs, &gs, 0).unwrap();
        prop_assert_eq!(res.is_zero(), shares_root(&fs, &gs));
        if common {
            prop_assert!(res.is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gcd_divides_and_detects_common_factor(f in poly_with(2, 3, 4, int_coeff()), g in poly_with(2, 3, 4, int_coeff()), h in poly_with(2, 2, 3, int_coeff())) {
        prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_constant());
        let d = gcd(&(&f * &h), &(&g * &h));
        // h divides the gcd; compare degrees in each variable
        for v in 0..2 {
            prop_assert!(d.degree_in(v) >= h.degree_in(v));
        }
    }

    #[test]
    fn discriminant_vanishes_iff_repeated_root(f in poly_with(1, 4, 5, int_coeff()), sq in any::<bool>(), r in -3i64..=3) {
        let f = if sq {
            let l = &MPoly::var(1, 0) - &MPoly::constant(1, GaussRat::from_int(r));
            &f * &(&l * &l)
        } else {
            f
        };
        prop_assume!(f.degree_in(0) >= 2);
        let d = discriminant(&f, 0).unwrap();
        let sf = squarefree_part(&f, 0);
        prop_assert_eq!(d.is_zero(), sf.degree_in(0) < f.degree_in(0));
        let distinct = roots(&univariate(&f), 1e-14).unwrap().distinct_count as i64;
        prop_assert_eq!(distinct, sf.degree_in(0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn chi_is_invariant_under_axis_swap_and_shear(h in poly_with(2, 4, 5, int_coeff())) {
        let Ok(chi) = curve_chi(&h) else { return Ok(()) };
        let swapped = h.remap(&[1, 0], 2);
        let shear = h.substitute(1, &(&MPoly::var(2, 1) + &MPoly::var(2, 0).scale(&GaussRat::from_int(2)))).unwrap();
        prop_assert_eq!(curve_chi(&swapped).unwrap(), chi);
        prop_assert_eq!(curve_chi(&shear).unwrap(), chi);
    }

    // union of two graphs w = p(z), w = q(z): χ = 1 + 1 − #{p = q}
    #[test]
    fn chi_is_additive_on_two_graphs(p in poly_with(1, 3, 4, int_coeff()), q in poly_with(1, 3, 4, int_coeff())) {
        prop_assume!(p != q);
        let lift = |u: &MPoly<GaussRat>| u.remap(&[0], 2);
        let w = MPoly::var(2, 1);
        let h = &(&w - &lift(&p)) * &(&w - &lift(&q));
        let diff = &p - &q;
        let meet = if diff.is_constant() { 0 } else { roots(&univariate(&diff), 1e-14).unwrap().distinct_count as i64 };
        prop_assert_eq!(curve_chi(&h).unwrap(), 2 - meet);
    }
}

#[test]
fn known_curve_values() {
    let v = ["z", "w"];
    let chi = |s: &str| curve_chi(&parse_poly(s, &v).unwrap()).unwrap();
    // a line, ℂ*, a smooth cubic minus 1 point, two crossing lines
    assert_eq!(chi("w - z^2"), 1);
    assert_eq!(chi("z*w - 1"), 0);
    assert_eq!(chi("w^2 - z^3 - z - 1"), -1);
    assert_eq!(chi("z*w"), 1);
}
