//! Commands: each turns a validated job into a JSON report.

use std::path::PathBuf;

use fibra_core::asymset::{containment_check, estimate_asymptotic_set, ClusterSet};
use fibra_core::fibertop::{chi_profile, check_very_good_projection, leading_form_report, ChiReport, ProjectionReport};
use fibra_core::numeric::task_rng;
use fibra_core::realify::realify_map;
use fibra_core::singloc::{check_k0_empty, jacobian, local_dimension, minor_system, sample_singular_locus, K0Verdict};
use fibra_core::vgcloud::{build_vg_cloud, export_cloud, CloudFormat};
use fibra_core::{Error, GaussRat};
use rand::Rng;
use rayon::prelude::*;
use serde_json::Value;

use crate::config::Job;
use crate::report::{self, exact, num, obj};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze,
    K0,
    SingularLocus,
    AsymptoticSet,
    CheckProjection,
    EulerProfile,
    BuildVg,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::K0 => "k0",
            Command::SingularLocus => "singular-locus",
            Command::AsymptoticSet => "asymptotic-set",
            Command::CheckProjection => "check-projection",
            Command::EulerProfile => "euler-profile",
            Command::BuildVg => "build-vg",
        }
    }

    /// Report file name inside the output directory.
    pub fn report_file(self) -> String {
        match self {
            Command::Analyze => "analysis-report.json".into(),
            c => format!("{}.json", c.name()),
        }
    }
}

#[derive(Debug)]
pub enum RunError {
    /// The job cannot run as configured (exit 2).
    Config(String),
    /// Writing output failed (exit 1).
    Io(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(s) | RunError::Io(s) => f.write_str(s),
        }
    }
}

pub fn run(cmd: Command, job: &Job) -> Result<Value, RunError> {
    let body = match cmd {
        Command::Analyze => analyze(job),
        Command::K0 => report::k0(&check_k0_empty(&job.map, job.seed), job.seed),
        Command::SingularLocus => singular_locus(job),
        Command::AsymptoticSet => asymptotic(job),
        Command::CheckProjection => check_projection(job),
        Command::EulerProfile => euler_profile(job),
        Command::BuildVg => build_vg(job)?,
    };
    let mut top = obj([("command", cmd.name().into()), ("input", input(job))]);
    if let (Value::Object(t), Value::Object(b)) = (&mut top, body) {
        t.extend(b.into_iter().filter(|(k, _)| k != "command" && k != "input"));
    }
    Ok(top)
}

/// Writes the report to `<out>/<file>` or returns it for stdout.
pub fn emit(cmd: Command, job: &Job, report: &Value) -> Result<Option<PathBuf>, RunError> {
    let text = report::render(report);
    match &job.out {
        None => {
            print!("{text}");
            Ok(None)
        }
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| RunError::Io(format!("{}: {e}", dir.display())))?;
            let path = dir.join(cmd.report_file());
            std::fs::write(&path, text).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
            Ok(Some(path))
        }
    }
}

fn input(job: &Job) -> Value {
    obj([
        ("map", job.map.to_text().into()),
        ("vars", job.map.vars().to_vec().into()),
        ("n", job.map.n().into()),
        ("m", job.map.m().into()),
        ("rho", serde_json::to_value(&job.rho).expect("weights serialize")),
        ("seed", job.seed.into()),
        ("tol", num(job.tol)),
        ("schedule", report::floats(&job.asym.schedule)),
    ])
}

fn failure(e: &Error) -> Value {
    let status = match e {
        Error::UnsupportedShape(_) => "unsupported",
        _ => "failed",
    };
    obj([("status", status.into()), ("reason", e.to_string().into())])
}

fn with_status(mut v: Value, status: &str) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("status".into(), status.into());
    }
    v
}

fn euler_profile(job: &Job) -> Value {
    let chi = match chi_profile(&job.map, &job.chi) {
        Ok(r) => report::chi(&r, job.seed, &|_| false),
        Err(e) => with_seed(failure(&e), job.seed),
    };
    obj([("chi", chi)])
}

fn with_seed(mut v: Value, seed: u64) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("seed".into(), seed.into());
    }
    v
}

/// The configured forms, or `count` seeded random forms with nonzero integer coefficients.
pub fn projection_forms(job: &Job) -> Vec<Vec<GaussRat>> {
    if !job.forms.is_empty() {
        return job.forms.clone();
    }
    let mut rng = task_rng(job.seed, &[0xf0f0]);
    (0..job.random_forms)
        .map(|_| {
            (0..job.map.n())
                .map(|_| {
                    let a: i64 = rng.random_range(1..=5);
                    GaussRat::from_int(if rng.random::<bool>() { a } else { -a })
                })
                .collect()
        })
        .collect()
}

fn projection_runs(job: &Job, t0s: &[Vec<GaussRat>]) -> Vec<(Vec<GaussRat>, Vec<GaussRat>, Result<ProjectionReport, String>)> {
    let forms = projection_forms(job);
    let tasks: Vec<(Vec<GaussRat>, Vec<GaussRat>)> =
        t0s.iter().flat_map(|t| forms.iter().map(move |l| (l.clone(), t.clone()))).collect();
    tasks
        .into_par_iter()
        .map(|(l, t)| {
            let r = check_very_good_projection(&job.map, &l, &t, &job.projection).map_err(|e| e.to_string());
            (l, t, r)
        })
        .collect()
}

fn projection_json(runs: &[(Vec<GaussRat>, Vec<GaussRat>, Result<ProjectionReport, String>)], seed: u64) -> Value {
    Value::Array(
        runs.iter()
            .map(|(l, t, r)| match r {
                Ok(r) => with_status(report::projection(r), "computed"),
                Err(e) => obj([
                    ("status", "unsupported".into()),
                    ("reason", e.as_str().into()),
                    ("l", exact(l)),
                    ("t0", exact(t)),
                    ("seed", seed.into()),
                ]),
            })
            .collect(),
    )
}

fn check_projection(job: &Job) -> Value {
    let t0 = job.t0.clone().unwrap_or_else(|| vec![GaussRat::from_int(0); job.map.m()]);
    obj([("projections", projection_json(&projection_runs(job, &[t0]), job.seed))])
}

fn asymptotic(job: &Job) -> Value {
    match estimate_asymptotic_set(&job.map, &job.rho, &job.asym) {
        Ok(s) => obj([("asymptotic_set", with_status(report::clusters(&s), "computed"))]),
        Err(e) => obj([("asymptotic_set", with_seed(failure(&e), job.seed))]),
    }
}

fn singular_locus(job: &Job) -> Value {
    let real = match realify_map(&job.map, &job.rho) {
        Ok(r) => r,
        Err(e) => return obj([("singular_locus", with_seed(failure(&e), job.seed))]),
    };
    let minors = minor_system(&jacobian(&real));
    let out = sample_singular_locus(&minors, &job.sampler);
    let pca = out.points.first().and_then(|p| local_dimension(&minors, &p.coords, 1e-3, 60, job.seed));
    let mut v = report::samples(&out, job.seed, job.sampler.tol, pca);
    if let Value::Object(m) = &mut v {
        m.insert("status".into(), "computed".into());
        m.insert("minors".into(), minors.len().into());
    }
    obj([("singular_locus", v)])
}

fn build_vg(job: &Job) -> Result<Value, RunError> {
    let dir = job.out.clone().ok_or_else(|| RunError::Config("build-vg needs an output directory (out / --out)".into()))?;
    let clusters = estimate_asymptotic_set(&job.map, &job.rho, &job.asym).ok();
    let cloud = match build_vg_cloud(&job.map, &job.rho, &job.sampler, clusters.as_ref()) {
        Ok(c) => c,
        Err(e) => return Ok(obj([("vg_cloud", with_seed(failure(&e), job.seed))])),
    };
    std::fs::create_dir_all(&dir).map_err(|e| RunError::Io(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    let mut notes = Vec::new();
    for f in &job.vg_formats {
        let name = match f {
            CloudFormat::Csv => "cloud.csv",
            CloudFormat::Ply => "cloud.ply",
            CloudFormat::PlotScript => "cloud.gp",
        };
        match export_cloud(&cloud, *f, &dir.join(name)) {
            Ok(()) => files.push(name.to_string()),
            Err(Error::Io(e)) => return Err(RunError::Io(format!("{}: {e}", dir.join(name).display()))),
            Err(e) => notes.push(format!("{name} not written: {e}")),
        }
    }
    let mut v = report::cloud(&cloud, &files);
    if let Value::Object(m) = &mut v {
        m.insert("status".into(), "computed".into());
        m.insert("export_notes".into(), notes.into());
    }
    Ok(obj([("vg_cloud", v)]))
}

fn analyze(job: &Job) -> Value {
    let g = &job.map;
    let n = g.n();
    let m = g.m();
    let mut diagnostics: Vec<String> = Vec::new();

    let k0 = check_k0_empty(g, job.seed);
    let k0_empty = matches!(k0, K0Verdict::Empty { .. });

    let chi = chi_profile(g, &job.chi);
    if let Err(e) = &chi {
        diagnostics.push(format!("euler profile: {e}"));
    }
    let atypical: Vec<Vec<GaussRat>> = chi.as_ref().map(|c| c.atypical.clone()).unwrap_or_default();

    // projections are tested at the atypical values, or at the configured / zero base value
    let t0s: Vec<Vec<GaussRat>> = if atypical.is_empty() {
        vec![job.t0.clone().unwrap_or_else(|| vec![GaussRat::from_int(0); m])]
    } else {
        atypical.iter().take(4).cloned().collect()
    };
    let runs = projection_runs(job, &t0s);
    let very_good_at = |t: &[GaussRat]| runs.iter().any(|(_, t0, r)| t0 == t && r.as_ref().is_ok_and(|r| r.is_very_good));

    let (leading, asym) = rayon::join(|| leading_form_report(g, &job.leading), || estimate_asymptotic_set(g, &job.rho, &job.asym));

    let mut flags = Flags { n, m, k0_empty, ..Flags::default() };
    if let Ok(c) = &chi {
        flags.chi_jump_at = jump_with_projection(c, &very_good_at);
        flags.any_jump = any_jump(c);
    }
    if let Ok(l) = &leading {
        flags.rank = l.rank_estimate;
        flags.zero_dim = l.zero_set_dim_estimate;
    }

    let chi_json = match &chi {
        Ok(c) => report::chi(c, job.seed, &very_good_at),
        Err(e) => with_seed(failure(e), job.seed),
    };
    let leading_json = match &leading {
        Ok(l) => with_status(report::leading(l, g.vars()), "computed"),
        Err(e) => with_seed(failure(e), job.seed),
    };
    let asym_json = match &asym {
        Ok(s) => with_status(report::clusters(s), "computed"),
        Err(e) => with_seed(failure(e), job.seed),
    };
    let containment = match (&chi, &asym) {
        // for m ≥ 2 the atypical values are single probe points of a positive-dimensional set
        _ if m >= 2 => obj([
            ("status", "not_applicable".into()),
            ("reason", "pointwise containment needs isolated atypical values (m = 1)".into()),
            ("tol", num(job.containment_tol)),
        ]),
        (Ok(c), Ok(s)) => containment_json(c, s, job.containment_tol, &mut diagnostics),
        _ => obj([("status", "not_computed".into()), ("tol", num(job.containment_tol))]),
    };

    let partial = chi.is_err() || leading.is_err() || asym.is_err() || runs.iter().any(|(_, _, r)| r.is_err());
    let established = flags.chi_jump_at.is_some();
    obj([
        ("status", if partial { "partial" } else { "complete" }.into()),
        ("k0", report::k0(&k0, job.seed)),
        ("chi", chi_json),
        ("projections", projection_json(&runs, job.seed)),
        ("leading_forms", leading_json),
        ("asymptotic_set", asym_json),
        ("containment", containment),
        ("corollary_flags", flags.to_json()),
        (
            "bifurcation_set_nonempty",
            obj([
                ("hypothesis", "B(G) ≠ ∅".into()),
                ("status", if established { "established" } else { "not_established" }.into()),
                ("t0", flags.chi_jump_at.as_deref().map_or(Value::Null, exact)),
                (
                    "basis",
                    if established {
                        "euler characteristic jump at t0 with a verified very good projection"
                    } else {
                        "no atypical value certified by a very good projection"
                    }
                    .into(),
                ),
            ]),
        ),
        ("diagnostics", diagnostics.into()),
    ])
}

/// First atypical value whose χ exceeds the generic one and that has a verified very good projection.
fn jump_with_projection(c: &ChiReport, very_good_at: &dyn Fn(&[GaussRat]) -> bool) -> Option<Vec<GaussRat>> {
    c.atypical
        .iter()
        .find(|t| c.chi_at(t).is_some_and(|x| x > c.generic_chi) && very_good_at(t))
        .cloned()
}

fn any_jump(c: &ChiReport) -> Option<Vec<GaussRat>> {
    c.atypical.iter().find(|t| c.chi_at(t).is_some_and(|x| x > c.generic_chi)).cloned()
}

fn containment_json(c: &ChiReport, s: &ClusterSet, tol: f64, diagnostics: &mut Vec<String>) -> Value {
    let b: Vec<Vec<num_complex::Complex64>> = c.atypical.iter().map(|t| t.iter().map(GaussRat::to_c64).collect()).collect();
    let r = containment_check(&b, s, tol);
    if !r.holds {
        diagnostics.push(format!(
            "{} atypical value(s) have no asymptotic cluster within {tol}; the cluster estimate is incomplete",
            r.missing.len()
        ));
    }
    with_status(report::containment(&r, b.len()), "computed")
}

#[derive(Default)]
struct Flags {
    n: usize,
    m: usize,
    k0_empty: bool,
    chi_jump_at: Option<Vec<GaussRat>>,
    any_jump: Option<Vec<GaussRat>>,
    rank: Option<usize>,
    zero_dim: Option<usize>,
}

impl Flags {
    fn to_json(&self) -> Value {
        let square_minus_one = self.m + 1 == self.n;
        let rank_ok = self.rank.is_some_and(|r| r + 2 >= self.n);
        let curve = self.zero_dim == Some(1);
        let vg = self.chi_jump_at.is_some();
        let jump = self.any_jump.is_some();
        let flag = |shape: &str, shape_ok: bool, t0: &Option<Vec<GaussRat>>, hyps: Vec<(&str, bool)>| {
            let verified = hyps.iter().all(|(_, b)| *b);
            let mut h = serde_json::Map::new();
            for (k, b) in hyps {
                h.insert(k.to_string(), b.into());
            }
            obj([
                ("stated_shape", shape.into()),
                ("shape_matches", shape_ok.into()),
                ("hypotheses", Value::Object(h)),
                ("hypotheses_verified", verified.into()),
                ("t0", t0.as_deref().map_or(Value::Null, exact)),
            ])
        };
        obj([
            (
                "very_good_projection_chi_jump",
                flag(
                    "n = 3, m = 2",
                    self.n == 3 && self.m == 2,
                    &self.chi_jump_at,
                    vec![("k0_empty", self.k0_empty), ("very_good_projection", vg), ("chi_exceeds_generic", vg || jump)],
                ),
            ),
            (
                "rank_condition_chi_jump",
                flag(
                    "n >= 4, m = n - 1",
                    self.n >= 4 && square_minus_one,
                    &self.chi_jump_at,
                    vec![
                        ("k0_empty", self.k0_empty),
                        ("leading_rank_at_least_n_minus_2", rank_ok),
                        ("very_good_projection", vg),
                        ("chi_exceeds_generic", vg || jump),
                    ],
                ),
            ),
            (
                "leading_curve_chi_jump",
                flag(
                    "n >= 4, m = n - 1",
                    self.n >= 4 && square_minus_one,
                    &self.any_jump,
                    vec![("k0_empty", self.k0_empty), ("leading_zero_set_dim_one", curve), ("chi_exceeds_generic", jump)],
                ),
            ),
        ])
    }
}

