//! Multistart Gauss–Newton sampling of M_G on random affine slices.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::MinorSystem;
use crate::numeric::{gauss_newton, task_rng, CompiledPoly, NewtonConfig, System};

/// Affine constraint `normal · x = offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct Slice {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Slice {
    /// Slice with the given normal through a point.
    pub fn through(normal: Vec<f64>, point: &[f64]) -> Self {
        let offset = normal.iter().zip(point).map(|(a, x)| a * x).sum();
        Slice { normal, offset }
    }

    fn compile(&self) -> CompiledPoly<f64> {
        let k = self.normal.len();
        let mut terms: Vec<(f64, Vec<u32>)> = vec![(-self.offset, vec![0; k])];
        for (j, &a) in self.normal.iter().enumerate() {
            let mut e = vec![0; k];
            e[j] = 1;
            terms.push((a, e));
        }
        CompiledPoly::from_terms(k, terms)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplerConfig {
    /// Scale R of starting points and slice offsets.
    pub radius: f64,
    /// Maximum number of returned points.
    pub count: usize,
    pub seed: u64,
    /// Residual tolerance relative to the term magnitudes, floored at 1.
    pub tol: f64,
    pub starts_per_slice: usize,
    pub max_steps: usize,
    /// Duplicate threshold relative to R.
    pub dedup: f64,
    /// Number of random slices; `0` picks `⌈count/4⌉` clamped to `[1, 64]`.
    pub slices: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { radius: 1.0, count: 50, seed: 0, tol: 1e-10, starts_per_slice: 200, max_steps: 50, dedup: 1e-6, slices: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplePoint {
    pub coords: Vec<f64>,
    /// Largest absolute minor value.
    pub residual: f64,
    /// Largest minor value divided by `max(1, Σ|c|·|x^α|)`.
    pub scaled_residual: f64,
    /// ρ at the point.
    pub radius: f64,
    pub slice: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SamplerDiagnostics {
    pub slices: usize,
    pub starts: usize,
    pub converged: usize,
    pub duplicates: usize,
    pub accepted: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleOutcome {
    pub points: Vec<SamplePoint>,
    pub diagnostics: SamplerDiagnostics,
}

/// `count` slices of codimension `2n − 2`, normals standard normal then
/// normalized, offsets uniform in `[−R, R]`.
pub fn random_slices(dim: usize, codim: usize, count: usize, radius: f64, seed: u64) -> Vec<Vec<Slice>> {
    (0..count)
        .map(|s| {
            let mut rng = task_rng(seed, &[0x511ce, s as u64]);
            (0..codim)
                .map(|_| {
                    let mut a: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                    let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
                    a.iter_mut().for_each(|v| *v /= norm);
                    Slice { normal: a, offset: radius * rng.random_range(-1.0..1.0) }
                })
                .collect()
        })
        .collect()
}

pub fn sample_singular_locus(minors: &MinorSystem, cfg: &SamplerConfig) -> SampleOutcome {
    let dim = minors.nvars();
    let nslices = if cfg.slices == 0 { cfg.count.div_ceil(4).clamp(1, 64) } else { cfg.slices };
    let slices = random_slices(dim, dim.saturating_sub(2), nslices, cfg.radius, cfg.seed);
    sample_on_slices(minors, &slices, cfg)
}

/// Random starts on each slice family, deduplicated in task order.
pub fn sample_on_slices(minors: &MinorSystem, slices: &[Vec<Slice>], cfg: &SamplerConfig) -> SampleOutcome {
    let dim = minors.nvars();
    let eqs = minors.compiled();
    let nm = eqs.len();
    let scale = cfg.radius.max(1.0);
    let systems: Vec<(System<f64>, Vec<f64>)> = slices
        .iter()
        .map(|fam| {
            let mut all = eqs.clone();
            let mut w: Vec<f64> = eqs.iter().map(|e| scale.powi(-(e.degree() as i32))).collect();
            for s in fam {
                all.push(s.compile());
                w.push(1.0 / scale);
            }
            (System::new(dim, all), w)
        })
        .collect();
    let tasks: Vec<(usize, usize)> = (0..slices.len()).flat_map(|s| (0..cfg.starts_per_slice).map(move |k| (s, k))).collect();
    let newton = NewtonConfig { max_steps: cfg.max_steps, tol: cfg.tol * 1e-3 };
    let results: Vec<Option<SamplePoint>> = tasks
        .par_iter()
        .map(|&(s, k)| {
            let mut rng = task_rng(cfg.seed, &[s as u64, k as u64]);
            let x0: Vec<f64> = (0..dim).map(|_| cfg.radius * rng.sample::<f64, _>(StandardNormal)).collect();
            let (sys, w) = &systems[s];
            let r = gauss_newton(sys, w, x0, newton);
            accept(sys, nm, &r.x, cfg.tol).map(|(residual, scaled_residual)| SamplePoint {
                radius: minors.rho(&r.x),
                coords: r.x,
                residual,
                scaled_residual,
                slice: s,
            })
        })
        .collect();
    let mut diag = SamplerDiagnostics { slices: slices.len(), starts: tasks.len(), ..Default::default() };
    let thr = cfg.dedup * cfg.radius;
    let mut points: Vec<SamplePoint> = Vec::new();
    for p in results.into_iter().flatten() {
        diag.converged += 1;
        if points.iter().any(|q| dist(&q.coords, &p.coords) <= thr) {
            diag.duplicates += 1;
            continue;
        }
        if points.len() < cfg.count {
            points.push(p);
        }
    }
    diag.accepted = points.len();
    SampleOutcome { points, diagnostics: diag }
}

/// Minor residuals if every equation (minors first, then slices) is within
/// `tol·max(1, Σ|c||x^α|)`.
fn accept(sys: &System<f64>, nminors: usize, x: &[f64], tol: f64) -> Option<(f64, f64)> {
    if x.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let res = sys.residuals(x);
    if res.iter().any(|&(a, s)| a > tol * s.max(1.0)) {
        return None;
    }
    let minors = &res[..nminors];
    let abs = minors.iter().map(|r| r.0).fold(0.0, f64::max);
    let scaled = minors.iter().map(|&(a, s)| a / s.max(1.0)).fold(0.0, f64::max);
    Some((abs, scaled))
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// PCA estimate of the local dimension of M_G at `base`: perturb by `eps`,
/// project back with Gauss–Newton on the minors alone, and count singular
/// values of the centered cloud above 5% of the largest.
pub fn local_dimension(minors: &MinorSystem, base: &[f64], eps: f64, samples: usize, seed: u64) -> Option<usize> {
    let dim = minors.nvars();
    let eqs = minors.compiled();
    let w = vec![1.0; eqs.len()];
    let sys = System::new(dim, eqs);
    let cfg = NewtonConfig { max_steps: 50, tol: 1e-13 };
    let cloud: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .filter_map(|k| {
            let mut rng = task_rng(seed, &[0xd1, k as u64]);
            let x0: Vec<f64> = base.iter().map(|b| b + eps * rng.sample::<f64, _>(StandardNormal)).collect();
            let r = gauss_newton(&sys, &w, x0, cfg);
            (r.converged && dist(&r.x, base) < 10.0 * eps).then_some(r.x)
        })
        .collect();
    if cloud.len() <= dim {
        return None;
    }
    let mean: Vec<f64> = (0..dim).map(|j| cloud.iter().map(|p| p[j]).sum::<f64>() / cloud.len() as f64).collect();
    let m = DMatrix::from_fn(cloud.len(), dim, |i, j| cloud[i][j] - mean[j]);
    let s = m.singular_values();
    let smax = s.iter().cloned().fold(0.0, f64::max);
    Some(s.iter().filter(|&&v| v > 0.05 * smax).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly_map;
    use crate::realify::{realify_map, RhoSpec};
    use crate::singloc::{jacobian, minor_system};

    fn broughton() -> MinorSystem {
        let g = parse_poly_map("z + z^2*w", &["z", "w"]).unwrap();
        minor_system(&jacobian(&realify_map(&g, &RhoSpec::unit(2)).unwrap()))
    }

    #[test]
    fn broughton_samples_are_on_locus() {
        let ms = broughton();
        let out = sample_singular_locus(&ms, &SamplerConfig { count: 30, seed: 7, ..Default::default() });
        assert!(out.points.len() >= 10, "{:?}", out.diagnostics);
        for p in &out.points {
            assert!(p.residual < 1e-10, "{}", p.residual);
        }
    }

    #[test]
    fn known_point_recovered() {
        let ms = broughton();
        let known = [1.0, 0.0, 0.5, 0.0];
        let mut rng = task_rng(3, &[]);
        let fam: Vec<Slice> = (0..2).map(|_| Slice::through((0..4).map(|_| rng.sample(StandardNormal)).collect(), &known)).collect();
        let out = sample_on_slices(&ms, &[fam], &SamplerConfig { count: 100, ..Default::default() });
        assert!(out.points.iter().any(|p| dist(&p.coords, &known) < 1e-6));
    }

    #[test]
    fn pca_dimension_two() {
        let ms = broughton();
        assert_eq!(local_dimension(&ms, &[1.0, 0.0, 0.5, 0.0], 1e-3, 60, 11), Some(2));
    }
}
