//! JSON rendering of core results.
//!
//! Objects are `serde_json::Map`, which is ordered by key. Floats are printed
//! with 17 significant digits in scientific form; non-finite floats become null.

use fibra_core::asymset::{ClusterSet, Containment};
use fibra_core::fibertop::{CandidateSource, ChiReport, LeadingFormReport, ProjectionReport};
use fibra_core::polycore::format_poly;
use fibra_core::singloc::{K0Verdict, SampleOutcome};
use fibra_core::vgcloud::{Provenance, VgCloud};
use fibra_core::GaussRat;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    serde_json::from_str(&format!("{x:.16e}")).expect("formatted float is valid JSON")
}

pub fn complex(c: Complex64) -> Value {
    json!({ "re": num(c.re), "im": num(c.im) })
}

pub fn complex_vec(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|&c| complex(c)).collect())
}

pub fn floats(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

pub fn exact(v: &[GaussRat]) -> Value {
    Value::Array(v.iter().map(|g| Value::String(g.to_string())).collect())
}

/// Builds an object from `(key, value)` pairs.
pub fn obj<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

pub fn k0(v: &K0Verdict, seed: u64) -> Value {
    let base = |status: &str, extra: Value| {
        let mut m = obj([("status", status.into()), ("seed", seed.into())]);
        if let (Value::Object(m), Value::Object(e)) = (&mut m, extra) {
            m.extend(e);
        }
        m
    };
    match v {
        K0Verdict::Empty { reason } => base("empty", obj([("reason", reason.as_str().into())])),
        K0Verdict::Nonempty { witness, critical_value, numeric } => base(
            "nonempty",
            obj([
                ("witness", complex_vec(witness)),
                ("critical_value", complex_vec(critical_value)),
                ("witness_kind", if *numeric { "numeric" } else { "exact_elimination" }.into()),
            ]),
        ),
        K0Verdict::Undecided { reason } => base("undecided", obj([("reason", reason.as_str().into())])),
    }
}

pub fn chi(r: &ChiReport, seed: u64, certified: &dyn Fn(&[GaussRat]) -> bool) -> Value {
    let special: Vec<Value> = r
        .special_values
        .iter()
        .map(|s| {
            obj([
                ("t", complex_vec(&s.t)),
                ("t_exact", s.t_exact.as_deref().map_or(Value::Null, exact)),
                ("chi", s.chi.map_or(Value::Null, Value::from)),
                ("axis", s.axis.map_or(Value::Null, Value::from)),
                (
                    "source",
                    match s.source {
                        CandidateSource::Degeneration => "degeneration",
                        CandidateSource::User => "user",
                    }
                    .into(),
                ),
            ])
        })
        .collect();
    let atypical: Vec<Value> = r
        .atypical
        .iter()
        .map(|t| obj([("t", exact(t)), ("chi", r.chi_at(t).map_or(Value::Null, Value::from)), ("certified", certified(t).into())]))
        .collect();
    obj([
        ("status", "computed".into()),
        ("fiber_shape", r.shape.as_str().into()),
        ("generic_chi", r.generic_chi.into()),
        (
            "generic_samples",
            Value::Array(r.generic_samples.iter().map(|(t, c)| obj([("t", exact(t)), ("chi", (*c).into())])).collect()),
        ),
        ("special_values", Value::Array(special)),
        ("atypical", Value::Array(atypical)),
        (
            "probes",
            Value::Array(r.probes.iter().map(|p| obj([("axis", p.axis.into()), ("fixed", exact(&p.fixed))])).collect()),
        ),
        ("seed", seed.into()),
        ("exact", true.into()),
    ])
}

pub fn projection(r: &ProjectionReport) -> Value {
    let e = &r.evidence;
    obj([
        ("l", exact(&r.l)),
        ("t0", exact(&r.t0)),
        ("proper", r.proper.as_str().into()),
        (
            "evidence",
            obj([
                ("algebraic", e.algebraic.as_str().into()),
                ("algebraic_reason", e.algebraic_reason.as_str().into()),
                ("numeric", e.numeric.as_str().into()),
                ("disagreement", e.disagreement.into()),
                (
                    "escape",
                    Value::Array(
                        e.escape
                            .iter()
                            .map(|b| obj([("level", b.level.into()), ("points", b.points.into()), ("min_abs_l", num(b.min_abs_l))]))
                            .collect(),
                    ),
                ),
            ]),
        ),
        ("cardinality_constant", r.cardinality_constant.into()),
        (
            "counts",
            Value::Array(
                r.counts
                    .iter()
                    .map(|c| obj([("t", complex_vec(&c.t)), ("lambda", complex(c.lambda)), ("count", c.count.into())]))
                    .collect(),
            ),
        ),
        ("is_very_good", r.is_very_good.into()),
        ("delta", num(r.delta)),
        ("seed", r.seed.into()),
    ])
}

pub fn leading(r: &LeadingFormReport, vars: &[String]) -> Value {
    let opt = |v: Option<usize>| v.map_or(Value::Null, Value::from);
    obj([
        ("leading_forms", Value::Array(r.leading_forms.iter().map(|f| format_poly(f, vars).into()).collect())),
        ("ambient_rank", r.ambient_rank.into()),
        ("rank_estimate", opt(r.rank_estimate)),
        ("zero_set_dim_estimate", opt(r.zero_set_dim_estimate)),
        ("zero_set_points", r.zero_set_points.into()),
        ("dim_matches_corank", r.dim_matches_corank.map_or(Value::Null, Value::from)),
        ("seed", r.seed.into()),
        ("tol", num(r.tol)),
    ])
}

pub fn clusters(s: &ClusterSet) -> Value {
    let clusters: Vec<Value> = s
        .clusters
        .iter()
        .map(|c| {
            obj([
                ("center", complex_vec(&c.center)),
                ("radius", num(c.radius)),
                ("counts", c.counts.clone().into()),
                ("centers", Value::Array(c.centers.iter().map(|v| v.as_deref().map_or(Value::Null, complex_vec)).collect())),
                ("first_level", c.first_level.into()),
            ])
        })
        .collect();
    obj([
        ("clusters", Value::Array(clusters)),
        ("empty", s.clusters.is_empty().into()),
        (
            "levels",
            Value::Array(s.levels.iter().map(|l| obj([("radius", num(l.radius)), ("samples", l.samples.len().into())])).collect()),
        ),
        ("rejected", s.rejected.into()),
        ("low_confidence", s.low_confidence.into()),
        ("warnings", s.warnings.clone().into()),
        ("seed", s.seed.into()),
        ("tol", num(s.tol)),
        ("cluster_rel", num(s.cluster_rel)),
        ("kind", "numerical_estimate".into()),
    ])
}

pub fn containment(c: &Containment, atypical: usize) -> Value {
    obj([
        ("holds", c.holds.into()),
        ("atypical_values", atypical.into()),
        ("missing", c.missing.clone().into()),
        ("tol", num(c.tol)),
    ])
}

pub fn samples(o: &SampleOutcome, seed: u64, tol: f64, pca_dimension: Option<usize>) -> Value {
    let d = &o.diagnostics;
    obj([
        (
            "points",
            Value::Array(
                o.points
                    .iter()
                    .map(|p| {
                        obj([
                            ("coords", floats(&p.coords)),
                            ("residual", num(p.residual)),
                            ("scaled_residual", num(p.scaled_residual)),
                            ("rho", num(p.radius)),
                            ("slice", p.slice.into()),
                        ])
                    })
                    .collect(),
            ),
        ),
        (
            "diagnostics",
            obj([
                ("slices", d.slices.into()),
                ("starts", d.starts.into()),
                ("converged", d.converged.into()),
                ("duplicates", d.duplicates.into()),
                ("accepted", d.accepted.into()),
            ]),
        ),
        ("pca_dimension", pca_dimension.map_or(Value::Null, Value::from)),
        ("seed", seed.into()),
        ("tol", num(tol)),
    ])
}

pub fn cloud(c: &VgCloud, files: &[String]) -> Value {
    let mut interior = 0usize;
    let mut sphere = 0usize;
    let mut limit = 0usize;
    for p in &c.points {
        match p.provenance {
            Provenance::Interior { .. } => interior += 1,
            Provenance::Sphere { .. } => sphere += 1,
            Provenance::Limit { .. } => limit += 1,
        }
    }
    obj([
        ("points", c.points.len().into()),
        ("interior_points", interior.into()),
        ("sphere_points", sphere.into()),
        ("limit_points", limit.into()),
        ("divergent_points", c.points.iter().filter(|p| p.divergent).count().into()),
        ("dropped", c.dropped.into()),
        ("schedule", floats(&c.schedule)),
        ("rho", serde_json::to_value(&c.rho).expect("weights serialize")),
        ("warnings", c.warnings.clone().into()),
        ("files", files.to_vec().into()),
        ("seed", c.seed.into()),
    ])
}

/// Sorted-key, pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(num(1.5).to_string(), "1.5000000000000000e+0");
        assert_eq!(num(-0.1).to_string(), "-1.0000000000000001e-1");
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn keys_sorted() {
        let v = obj([("b", 1.into()), ("a", 2.into())]);
        assert_eq!(render(&v), "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
    }
}
