use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fibra_core::asymset::{estimate_asymptotic_set, AsymConfig};
use fibra_core::elim::{resultant, roots, UniPoly};
use fibra_core::fibertop::{chi_profile, check_very_good_projection, curve_chi, ChiConfig, ProjectionConfig};
use fibra_core::realify::{realify_map, RhoSpec};
use fibra_core::singloc::{jacobian, minor_system, sample_singular_locus, SamplerConfig};
use fibra_core::{parse_poly, parse_poly_map, GaussRat};
use num_complex::Complex64;

fn elimination(c: &mut Criterion) {
    let v = ["x", "y"];
    let f = parse_poly("x^4*y - 3*x^3 + y^2*x^2 - x + 7*y - 2", &v).unwrap();
    let g = parse_poly("x^3 + 2*x^2*y^2 - y*x + 5", &v).unwrap();
    c.bench_function("resultant bivariate 4x3", |b| b.iter(|| resultant(black_box(&f), black_box(&g), 0).unwrap()));

    let p = UniPoly::new((0..=20).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.7).cos())).collect());
    c.bench_function("roots degree 20", |b| b.iter(|| roots(black_box(&p), 1e-14).unwrap()));

    let h = parse_poly("w^3 - z^4 + z*w - 1", &["z", "w"]).unwrap();
    c.bench_function("curve chi quartic", |b| b.iter(|| curve_chi(black_box(&h)).unwrap()));
}

fn pipelines(c: &mut Criterion) {
    let broughton = parse_poly_map("z + z^2*w", &["z", "w"]).unwrap();
    let seven = parse_poly_map("z; z*zeta^2 + w", &["z", "w", "zeta"]).unwrap();
    c.bench_function("chi profile broughton", |b| b.iter(|| chi_profile(&broughton, &ChiConfig::default()).unwrap()));
    c.bench_function("chi profile two-weight example", |b| b.iter(|| chi_profile(&seven, &ChiConfig::default()).unwrap()));
    let l = [GaussRat::from_int(1), GaussRat::from_int(1)];
    let t0 = [GaussRat::from_int(0)];
    c.bench_function("very good projection z + w", |b| {
        b.iter(|| check_very_good_projection(&broughton, &l, &t0, &ProjectionConfig::default()).unwrap())
    });
    let minors = minor_system(&jacobian(&realify_map(&broughton, &RhoSpec::unit(2)).unwrap()));
    let cfg = SamplerConfig { count: 20, ..Default::default() };
    c.bench_function("sample singular locus", |b| b.iter(|| sample_singular_locus(&minors, &cfg)));

    let mut slow = c.benchmark_group("asymptotic");
    slow.sample_size(10);
    slow.bench_function("asymptotic set broughton", |b| {
        b.iter(|| estimate_asymptotic_set(&broughton, &RhoSpec::unit(2), &AsymConfig::default()).unwrap())
    });
    slow.finish();
}

criterion_group!(benches, elimination, pipelines);
criterion_main!(benches);
