//! Job configuration: a JSON file plus flag overrides, validated up front.

use std::path::{Path, PathBuf};

use fibra_core::asymset::{default_schedule, AsymConfig};
use fibra_core::fibertop::{ChiConfig, LeadingConfig, ProjectionConfig};
use fibra_core::polycore::parse_constant;
use fibra_core::realify::RhoSpec;
use fibra_core::singloc::SamplerConfig;
use fibra_core::vgcloud::CloudFormat;
use fibra_core::{parse_poly_map, GaussRat, PolyMap};
use num_rational::BigRational;
use serde::Deserialize;

/// A number in a config file: an integer, or a string such as `"3/4"` or `"1-2i"`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn parse(text: &str) -> Scalar {
        match text.trim().parse::<i64>() {
            Ok(v) => Scalar::Int(v),
            Err(_) => Scalar::Text(text.trim().to_string()),
        }
    }

    fn to_gauss(&self) -> Result<GaussRat, ConfigError> {
        match self {
            Scalar::Int(v) => Ok(GaussRat::from_int(*v)),
            Scalar::Text(s) => parse_constant(s).map_err(|e| ConfigError(format!("bad constant {s:?}: {e}"))),
        }
    }

    fn to_real(&self) -> Result<BigRational, ConfigError> {
        let g = self.to_gauss()?;
        if !g.is_real() {
            return Err(ConfigError(format!("expected a real number, got {g}")));
        }
        Ok(g.re)
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChiOpts {
    pub generic_samples: Option<usize>,
    pub extra_t: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProjectionOpts {
    /// Linear forms given by their coefficients.
    pub forms: Vec<Vec<Scalar>>,
    /// Seeded random forms used when `forms` is empty (default 5).
    pub random_forms: Option<usize>,
    /// Base value for `check-projection`; `analyze` uses the atypical values instead.
    pub t0: Option<Vec<Scalar>>,
    pub delta: Option<f64>,
    pub lambdas: Option<usize>,
    pub t_samples: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplerOpts {
    pub count: Option<usize>,
    pub radius: Option<f64>,
    pub starts_per_slice: Option<usize>,
    pub max_steps: Option<usize>,
    pub dedup: Option<f64>,
    pub slices: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AsymOpts {
    pub families: Option<usize>,
    pub starts: Option<usize>,
    pub max_steps: Option<usize>,
    pub cluster_rel: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LeadingOpts {
    pub probes: Option<usize>,
    pub starts: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VgOpts {
    /// Any of `csv`, `ply`, `plot-script`; default all three.
    pub formats: Option<Vec<String>>,
}

/// The config file as written.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JobConfig {
    pub map: Option<String>,
    pub vars: Option<Vec<String>>,
    pub rho: Option<Vec<Scalar>>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub schedule: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub containment_tol: Option<f64>,
    pub chi: ChiOpts,
    pub projection: ProjectionOpts,
    pub sampler: SamplerOpts,
    pub asym: AsymOpts,
    pub leading: LeadingOpts,
    pub vg: VgOpts,
}

/// Flag values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub map: Option<String>,
    pub vars: Option<String>,
    pub rho: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub schedule: Option<String>,
    pub tol: Option<f64>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Everything a command needs, checked.
#[derive(Clone, Debug)]
pub struct Job {
    pub map: PolyMap,
    pub rho: RhoSpec,
    pub seed: u64,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub containment_tol: f64,
    pub chi: ChiConfig,
    pub forms: Vec<Vec<GaussRat>>,
    pub random_forms: usize,
    pub t0: Option<Vec<GaussRat>>,
    pub projection: ProjectionConfig,
    pub sampler: SamplerConfig,
    pub asym: AsymConfig,
    pub leading: LeadingConfig,
    pub vg_formats: Vec<CloudFormat>,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError(format!("config: {e}")))
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        if let Some(m) = &o.map {
            self.map = Some(m.clone());
        }
        if let Some(v) = &o.vars {
            self.vars = Some(split_list(v));
        }
        if let Some(r) = &o.rho {
            self.rho = Some(split_list(r).iter().map(|s| Scalar::parse(s)).collect());
        }
        if let Some(s) = o.seed {
            self.seed = Some(s);
        }
        if let Some(p) = &o.out {
            self.out = Some(p.clone());
        }
        if let Some(s) = &o.schedule {
            let radii = split_list(s)
                .iter()
                .map(|r| r.parse::<f64>().map_err(|_| ConfigError(format!("bad radius {r:?} in --schedule"))))
                .collect::<Result<_, _>>()?;
            self.schedule = Some(radii);
        }
        if let Some(t) = o.tol {
            self.tol = Some(t);
        }
        if let Some(t) = o.threads {
            self.threads = Some(t);
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<Job, ConfigError> {
        let vars = self.vars.clone().ok_or_else(|| ConfigError("missing variable names (vars / --vars)".into()))?;
        let text = self.map.clone().ok_or_else(|| ConfigError("missing map (map / --map)".into()))?;
        let map = parse_poly_map(&text, &vars).map_err(|e| ConfigError(format!("map: {e}")))?;
        let n = map.n();
        let m = map.m();
        let rho = match &self.rho {
            None => RhoSpec::unit(n),
            Some(w) => {
                if w.len() != n {
                    return Err(ConfigError(format!("rho has {} weights for {n} variables", w.len())));
                }
                let w = w.iter().map(Scalar::to_real).collect::<Result<Vec<_>, _>>()?;
                RhoSpec::new(w).map_err(|e| ConfigError(e.to_string()))?
            }
        };
        let seed = self.seed.unwrap_or(0);
        let tol = positive("tol", self.tol.unwrap_or(1e-10))?;
        let schedule = self.schedule.clone().unwrap_or_else(default_schedule);
        let containment_tol = positive("containment_tol", self.containment_tol.unwrap_or(0.1))?;
        if self.threads == Some(0) {
            return Err(ConfigError("threads must be at least 1".into()));
        }

        let extra_t = self
            .chi
            .extra_t
            .iter()
            .map(|t| vector(t, m, "chi.extra_t"))
            .collect::<Result<Vec<_>, _>>()?;
        let generic_samples = self.chi.generic_samples.unwrap_or(3);
        if generic_samples < 3 {
            return Err(ConfigError("chi.generic_samples must be at least 3".into()));
        }
        let chi = ChiConfig { seed, generic_samples, extra_t };

        let forms = self.projection.forms.iter().map(|f| vector(f, n, "projection.forms")).collect::<Result<Vec<_>, _>>()?;
        if forms.iter().any(|f| f.iter().all(|a| a.is_zero_value())) {
            return Err(ConfigError("projection.forms: L ≠ 0 violated".into()));
        }
        let t0 = self.projection.t0.as_ref().map(|t| vector(t, m, "projection.t0")).transpose()?;
        let pd = ProjectionConfig::default();
        let projection = ProjectionConfig {
            delta: positive("projection.delta", self.projection.delta.unwrap_or(pd.delta))?,
            lambdas: at_least_one("projection.lambdas", self.projection.lambdas.unwrap_or(pd.lambdas))?,
            t_samples: at_least_one("projection.t_samples", self.projection.t_samples.unwrap_or(pd.t_samples))?,
            seed,
            levels: pd.levels,
        };

        let sd = SamplerConfig::default();
        let s = &self.sampler;
        let sampler = SamplerConfig {
            radius: positive("sampler.radius", s.radius.unwrap_or(sd.radius))?,
            count: at_least_one("sampler.count", s.count.unwrap_or(sd.count))?,
            seed,
            tol,
            starts_per_slice: at_least_one("sampler.starts_per_slice", s.starts_per_slice.unwrap_or(sd.starts_per_slice))?,
            max_steps: at_least_one("sampler.max_steps", s.max_steps.unwrap_or(sd.max_steps))?,
            dedup: positive("sampler.dedup", s.dedup.unwrap_or(sd.dedup))?,
            slices: s.slices.unwrap_or(sd.slices),
        };

        let ad = AsymConfig::default();
        let asym = AsymConfig {
            schedule,
            families: self.asym.families.unwrap_or(ad.families),
            starts: self.asym.starts.unwrap_or(ad.starts),
            seed,
            tol,
            max_steps: at_least_one("asym.max_steps", self.asym.max_steps.unwrap_or(ad.max_steps))?,
            cluster_rel: positive("asym.cluster_rel", self.asym.cluster_rel.unwrap_or(ad.cluster_rel))?,
        };
        asym.validate().map_err(|e| ConfigError(e.to_string()))?;

        let ld = LeadingConfig::default();
        let leading = LeadingConfig {
            seed,
            probes: at_least_one("leading.probes", self.leading.probes.unwrap_or(ld.probes))?,
            starts: at_least_one("leading.starts", self.leading.starts.unwrap_or(ld.starts))?,
            tol,
        };

        let vg_formats = match &self.vg.formats {
            None => vec![CloudFormat::Csv, CloudFormat::Ply, CloudFormat::PlotScript],
            Some(list) => list
                .iter()
                .map(|f| match f.as_str() {
                    "csv" => Ok(CloudFormat::Csv),
                    "ply" => Ok(CloudFormat::Ply),
                    "plot-script" => Ok(CloudFormat::PlotScript),
                    other => Err(ConfigError(format!("unknown vg format {other:?}"))),
                })
                .collect::<Result<_, _>>()?,
        };

        Ok(Job {
            map,
            rho,
            seed,
            tol,
            out: self.out.clone(),
            threads: self.threads,
            containment_tol,
            chi,
            forms,
            random_forms: self.projection.random_forms.unwrap_or(5),
            t0,
            projection,
            sampler,
            asym,
            leading,
            vg_formats,
        })
    }
}

trait ZeroValue {
    fn is_zero_value(&self) -> bool;
}

impl ZeroValue for GaussRat {
    fn is_zero_value(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

fn positive(name: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(ConfigError(format!("{name} must be > 0, got {v}")))
    }
}

fn at_least_one(name: &str, v: usize) -> Result<usize, ConfigError> {
    if v >= 1 {
        Ok(v)
    } else {
        Err(ConfigError(format!("{name} must be at least 1")))
    }
}

fn vector(v: &[Scalar], len: usize, name: &str) -> Result<Vec<GaussRat>, ConfigError> {
    if v.len() != len {
        return Err(ConfigError(format!("{name}: expected {len} entries, got {}", v.len())));
    }
    v.iter().map(Scalar::to_gauss).collect()
}

pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Job, LoadError> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| LoadError::Io(format!("{}: {e}", p.display())))?;
            JobConfig::from_json(&text).map_err(LoadError::Config)?
        }
        None => JobConfig::default(),
    };
    cfg.apply(overrides).map_err(LoadError::Config)?;
    cfg.validate().map_err(LoadError::Config)
}

#[derive(Debug)]
pub enum LoadError {
    Io(String),
    Config(ConfigError),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> JobConfig {
        JobConfig::from_json(r#"{"map": "z + z^2*w", "vars": ["z", "w"]}"#).unwrap()
    }

    #[test]
    fn defaults() {
        let job = base().validate().unwrap();
        assert_eq!(job.rho, RhoSpec::unit(2));
        assert_eq!(job.asym.schedule.len(), 7);
        assert_eq!(job.tol, 1e-10);
    }

    #[test]
    fn zero_rho_rejected() {
        let mut c = base();
        c.apply(&Overrides { rho: Some("0,0".into()), ..Default::default() }).unwrap();
        assert!(c.validate().unwrap_err().0.contains("Σ a_i² ≠ 0 violated"));
    }

    #[test]
    fn bad_values_rejected() {
        for o in [
            Overrides { tol: Some(0.0), ..Default::default() },
            Overrides { schedule: Some("10,5,20".into()), ..Default::default() },
            Overrides { vars: Some("z".into()), ..Default::default() },
        ] {
            let mut c = base();
            c.apply(&o).unwrap();
            assert!(c.validate().is_err(), "{o:?}");
        }
        assert!(JobConfig::from_json(r#"{"mapp": "z"}"#).is_err());
    }

    #[test]
    fn rational_weights_and_forms() {
        let c = JobConfig::from_json(
            r#"{"map": "z; z*t^2 + w", "vars": ["z","w","t"], "rho": [0, "1/2", 0], "projection": {"forms": [[0, 0, "1+i"]], "t0": ["1/3", 0]}}"#,
        )
        .unwrap();
        let job = c.validate().unwrap();
        assert_eq!(job.rho.weights_f64(), vec![0.0, 0.5, 0.0]);
        assert_eq!(job.forms[0][2], parse_constant("1+i").unwrap());
        assert_eq!(job.t0.unwrap()[0], GaussRat::from_ratio(1, 3));
    }
}
