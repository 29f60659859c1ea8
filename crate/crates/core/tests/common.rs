// shared strategies, included with `mod common;`
#![allow(dead_code)]

use fibra_core::polycore::{Monomial, MPoly};
use fibra_core::GaussRat;
use num_rational::BigRational;
use proptest::prelude::*;

pub fn gauss() -> impl Strategy<Value = GaussRat> + Clone {
    (-6i64..=6, 1i64..=4, -3i64..=3).prop_map(|(a, d, b)| GaussRat::new(BigRational::new(a.into(), d.into()), BigRational::from_integer(b.into())))
}

pub fn int_coeff() -> impl Strategy<Value = GaussRat> + Clone {
    (-5i64..=5).prop_map(GaussRat::from_int)
}

/// Polynomial in `nvars` variables with at most `terms` terms of total degree ≤ `deg`.
pub fn poly_with(nvars: usize, deg: u32, terms: usize, coeff: impl Strategy<Value = GaussRat>) -> impl Strategy<Value = MPoly<GaussRat>> {
    prop::collection::vec((prop::collection::vec(0..=deg, nvars), coeff), 0..=terms).prop_map(move |ts| {
        MPoly::from_terms(
            nvars,
            ts.into_iter().map(|(mut e, c)| {
                // clamp to total degree
                while e.iter().sum::<u32>() > deg {
                    let i = e.iter().position(|&x| x > 0).unwrap();
                    e[i] -= 1;
                }
                (Monomial(e), c)
            }),
        )
    })
}

pub fn poly(nvars: usize, deg: u32, terms: usize) -> impl Strategy<Value = MPoly<GaussRat>> {
    poly_with(nvars, deg, terms, gauss())
}
