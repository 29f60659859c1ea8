//! Estimate of the asymptotic set S_G(ρ): G-values of M_G samples on growing
//! spheres, clustered across levels.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::elim::roots::single_linkage;
use crate::error::Error;
use crate::numeric::{gauss_newton, task_rng, CompiledPoly, NewtonConfig, System};
use crate::polycore::{GaussRat, MPoly, PolyMap};
use crate::realify::{realify_map, realify_poly, RhoSpec};
use crate::singloc::{jacobian, minor_system};

#[derive(Clone, Debug, PartialEq)]
pub struct AsymConfig {
    /// Sphere radii, strictly increasing.
    pub schedule: Vec<f64>,
    /// Independent pin/slice families, fixed across levels.
    pub families: usize,
    /// Fresh starts per family and level.
    pub starts: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_steps: usize,
    /// Clustering threshold factor: points link within `rel·(1 + |value|)`.
    pub cluster_rel: f64,
}

pub fn default_schedule() -> Vec<f64> {
    (0..7).map(|k| 10.0 * 2f64.powi(k)).collect()
}

impl Default for AsymConfig {
    fn default() -> Self {
        AsymConfig { schedule: default_schedule(), families: 6, starts: 60, seed: 0, tol: 1e-10, max_steps: 60, cluster_rel: 0.05 }
    }
}

impl AsymConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.schedule.len() < 3 {
            return Err(Error::Config("radius schedule needs at least 3 levels".into()));
        }
        if self.schedule.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::Config("radii must be positive".into()));
        }
        if self.schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("radius schedule must be strictly increasing".into()));
        }
        if !(self.tol > 0.0 && self.cluster_rel > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.families == 0 || self.starts == 0 {
            return Err(Error::Config("families and starts must be at least 1".into()));
        }
        Ok(())
    }
}

/// A sample of M_G on the sphere of one level.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSample {
    pub coords: Vec<f64>,
    pub value: Vec<Complex64>,
    pub family: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub radius: f64,
    pub samples: Vec<LevelSample>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    /// Center at the last level.
    pub center: Vec<Complex64>,
    /// Largest distance of a last-level member to the center.
    pub radius: f64,
    pub counts: Vec<usize>,
    pub centers: Vec<Option<Vec<Complex64>>>,
    /// First level of the populated run ending at the last level.
    pub first_level: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterSet {
    pub clusters: Vec<Cluster>,
    pub levels: Vec<Level>,
    /// Linked groups that failed the stability test.
    pub rejected: usize,
    pub low_confidence: bool,
    pub warnings: Vec<String>,
    pub seed: u64,
    pub tol: f64,
    pub cluster_rel: f64,
}

impl ClusterSet {
    pub fn schedule(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.radius).collect()
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn real_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Complex point `z_j = x_{2j} + i·x_{2j+1}`.
pub fn complex_point(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect()
}

struct Family {
    /// Pins `Re, Im (c·G − d)`, then real homogeneous slices.
    extra: Vec<CompiledPoly<f64>>,
}

fn random_gauss(rng: &mut impl Rng) -> GaussRat {
    let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    GaussRat::approximate(z, 64)
}

fn families(g: &PolyMap, cfg: &AsymConfig) -> Vec<Family> {
    let (n, m) = (g.n(), g.m());
    let dim = 2 * n;
    let total = (2 * n).saturating_sub(3);
    let pins = (m.saturating_sub(1)).min(total / 2);
    let reals = total - 2 * pins;
    (0..cfg.families)
        .map(|f| {
            let mut rng = task_rng(cfg.seed, &[0xa5e7, f as u64]);
            let mut extra = Vec::new();
            for _ in 0..pins {
                let mut p = MPoly::constant(n, -random_gauss(&mut rng));
                for gi in g.components() {
                    p = &p + &gi.scale(&random_gauss(&mut rng));
                }
                let (re, im) = realify_poly(&p);
                extra.push(CompiledPoly::compile(&re));
                extra.push(CompiledPoly::compile(&im));
            }
            for _ in 0..reals {
                let a: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                let terms = a.iter().enumerate().map(|(j, &c)| {
                    let mut e = vec![0u32; dim];
                    e[j] = 1;
                    (c, e)
                });
                extra.push(CompiledPoly::from_terms(dim, terms));
            }
            Family { extra }
        })
        .collect()
}

fn sphere(dim: usize, r: f64) -> CompiledPoly<f64> {
    let terms = (0..dim)
        .map(|j| {
            let mut e = vec![0u32; dim];
            e[j] = 2;
            (1.0, e)
        })
        .chain(std::iter::once((-r * r, vec![0u32; dim])));
    CompiledPoly::from_terms(dim, terms)
}

struct Solver<'a> {
    g: &'a PolyMap,
    minors: &'a [CompiledPoly<f64>],
    fams: &'a [Family],
    newton: NewtonConfig,
    tol: f64,
}

impl Solver<'_> {
    /// Solve on the sphere of radius `r` from each `(family, start)`.
    fn solve_at(&self, r: f64, tasks: &[(usize, Vec<f64>)]) -> Vec<Option<LevelSample>> {
        let dim = 2 * self.g.n();
        let scale = r.max(1.0);
        let systems: Vec<(System<f64>, Vec<f64>)> = self
            .fams
            .iter()
            .map(|fam| {
                let mut eqs = self.minors.to_vec();
                eqs.push(sphere(dim, r));
                eqs.extend(fam.extra.iter().cloned());
                let w = eqs.iter().map(|e| scale.powi(-(e.degree() as i32))).collect();
                (System::new(dim, eqs), w)
            })
            .collect();
        tasks
            .par_iter()
            .map(|(f, x0)| {
                let (sys, w) = &systems[*f];
                let mut x = gauss_newton(sys, w, x0.clone(), self.newton).x;
                if x.iter().any(|v| !v.is_finite()) {
                    return None;
                }
                // polish with weights from the local term sizes
                let local: Vec<f64> = sys.residuals(&x).iter().map(|&(_, s)| 1.0 / s.max(1.0)).collect();
                x = gauss_newton(sys, &local, x, self.newton).x;
                let rs = sys.residuals(&x);
                if rs.iter().any(|&(a, s)| a > self.tol * s.max(1.0)) {
                    return None;
                }
                // keep levels honest: the sphere equation must hold
                let r2: f64 = x.iter().map(|v| v * v).sum();
                if r2 < 0.9 * r * r {
                    return None;
                }
                let residual = rs[..self.minors.len()].iter().map(|p| p.0).fold(0.0, f64::max);
                let value = self.g.evaluate(&complex_point(&x)).ok()?;
                Some(LevelSample { coords: x, value, family: *f, residual })
            })
            .collect()
    }
}

/// Geometric substeps used to carry samples from one level to the next.
const SUBSTEPS: usize = 6;

pub fn estimate_asymptotic_set(g: &PolyMap, rho: &RhoSpec, cfg: &AsymConfig) -> Result<ClusterSet, Error> {
    cfg.validate()?;
    let real = realify_map(g, rho)?;
    let minors = minor_system(&jacobian(&real)).compiled();
    let dim = 2 * g.n();
    let fams = families(g, cfg);
    let solver = Solver { g, minors: &minors, fams: &fams, newton: NewtonConfig { max_steps: cfg.max_steps, tol: cfg.tol * 1e-3 }, tol: cfg.tol };
    let mut levels: Vec<Level> = Vec::new();
    let mut warnings = Vec::new();
    for (k, &r) in cfg.schedule.iter().enumerate() {
        // track the previous level's samples outward, then add fresh starts
        let mut tracked: Vec<LevelSample> = Vec::new();
        if let Some(prev) = levels.last() {
            tracked = prev.samples.clone();
            for j in 1..=SUBSTEPS {
                let rj = prev.radius * (r / prev.radius).powf(j as f64 / SUBSTEPS as f64);
                let tasks: Vec<(usize, Vec<f64>)> = tracked.iter().map(|s| (s.family, s.coords.clone())).collect();
                tracked = solver.solve_at(rj, &tasks).into_iter().flatten().collect();
            }
        }
        let mut tasks: Vec<(usize, Vec<f64>)> = Vec::new();
        for f in 0..fams.len() {
            for i in 0..cfg.starts {
                let mut rng = task_rng(cfg.seed, &[0x1e7e1, k as u64, f as u64, i as u64]);
                let mut x: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                x.iter_mut().for_each(|v| *v *= r / nx);
                tasks.push((f, x));
            }
        }
        let fresh = solver.solve_at(r, &tasks);
        let mut samples: Vec<LevelSample> = Vec::new();
        for s in tracked.into_iter().chain(fresh.into_iter().flatten()) {
            if samples.iter().any(|q| real_dist(&q.coords, &s.coords) <= 1e-6 * r) {
                continue;
            }
            samples.push(s);
        }
        levels.push(Level { radius: r, samples });
    }
    let mut run = 0;
    let mut low_confidence = false;
    for l in &levels {
        run = if l.samples.is_empty() { run + 1 } else { 0 };
        if run >= 2 && !low_confidence {
            low_confidence = true;
            warnings.push("sampler returned nothing at two or more consecutive levels".into());
        }
    }
    let (clusters, rejected) = cluster_levels(&levels, cfg.cluster_rel);
    Ok(ClusterSet { clusters, levels, rejected, low_confidence, warnings, seed: cfg.seed, tol: cfg.tol, cluster_rel: cfg.cluster_rel })
}

/// Single-linkage groups over all levels, then the stability test.
pub fn cluster_levels(levels: &[Level], rel: f64) -> (Vec<Cluster>, usize) {
    let nl = levels.len();
    let items: Vec<(usize, &Vec<Complex64>)> =
        levels.iter().enumerate().flat_map(|(k, l)| l.samples.iter().map(move |s| (k, &s.value))).collect();
    let groups = single_linkage(items.len(), |i, j| {
        let (a, b) = (items[i].1, items[j].1);
        dist(a, b) <= rel * (1.0 + norm(a).min(norm(b)))
    });
    let mut clusters = Vec::new();
    let mut rejected = 0;
    for grp in groups {
        let mut counts = vec![0usize; nl];
        let mut sums: Vec<Option<Vec<Complex64>>> = vec![None; nl];
        for &i in &grp {
            let (k, v) = items[i];
            counts[k] += 1;
            let s = sums[k].get_or_insert_with(|| vec![Complex64::new(0.0, 0.0); v.len()]);
            s.iter_mut().zip(v).for_each(|(a, b)| *a += b);
        }
        let centers: Vec<Option<Vec<Complex64>>> = sums
            .into_iter()
            .zip(&counts)
            .map(|(s, &c)| s.map(|v| v.into_iter().map(|x| x / c as f64).collect()))
            .collect();
        match stable(&centers, rel) {
            Some(first_level) => {
                let center = centers[nl - 1].clone().expect("populated");
                let radius = grp
                    .iter()
                    .filter(|&&i| items[i].0 == nl - 1)
                    .map(|&i| dist(items[i].1, &center))
                    .fold(0.0, f64::max);
                clusters.push(Cluster { center, radius, counts, centers, first_level });
            }
            None => rejected += 1,
        }
    }
    clusters.sort_by(|a, b| {
        let ka: Vec<f64> = a.center.iter().flat_map(|c| [c.re, c.im]).collect();
        let kb: Vec<f64> = b.center.iter().flat_map(|c| [c.re, c.im]).collect();
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    (clusters, rejected)
}

/// First level of the populated tail if the last three centers agree within
/// the threshold, successive steps do not grow, and no center moves away
/// from the limit by more than the threshold.
fn stable(centers: &[Option<Vec<Complex64>>], rel: f64) -> Option<usize> {
    let nl = centers.len();
    if nl < 3 {
        return None;
    }
    let tail: Vec<&Vec<Complex64>> = centers[nl - 3..].iter().map(|c| c.as_ref()).collect::<Option<_>>()?;
    let limit = tail[2];
    let thr = rel * (1.0 + norm(limit));
    if dist(tail[0], limit) > thr || dist(tail[1], limit) > thr {
        return None;
    }
    let slack = 1e-9 * (1.0 + norm(limit));
    if dist(tail[2], tail[1]) > dist(tail[1], tail[0]) + slack {
        return None;
    }
    let mut first = nl - 1;
    while first > 0 && centers[first - 1].is_some() {
        first -= 1;
    }
    for k in first..nl - 1 {
        let (a, b) = (centers[k].as_ref()?, centers[k + 1].as_ref()?);
        if dist(b, limit) > dist(a, limit) + thr {
            return None;
        }
    }
    Some(first)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Containment {
    pub holds: bool,
    /// Indices of B points with no cluster center within tol.
    pub missing: Vec<usize>,
    pub tol: f64,
}

/// Every point of `b` lies within `tol` of some cluster center.
pub fn containment_check(b: &[Vec<Complex64>], s: &ClusterSet, tol: f64) -> Containment {
    let missing: Vec<usize> =
        (0..b.len()).filter(|&i| !s.clusters.iter().any(|c| dist(&c.center, &b[i]) <= tol)).collect();
    Containment { holds: missing.is_empty(), missing, tol }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly_map;

    fn seven() -> PolyMap {
        parse_poly_map("z; z*t^2 + w", &["z", "w", "t"]).unwrap()
    }

    #[test]
    fn section_seven_zeta_gauge_is_empty() {
        let rho = RhoSpec::from_ints(&[0, 0, 1]).unwrap();
        let s = estimate_asymptotic_set(&seven(), &rho, &AsymConfig { seed: 1, ..Default::default() }).unwrap();
        assert!(s.levels.iter().all(|l| !l.samples.is_empty()));
        assert!(s.clusters.is_empty(), "{:?}", s.clusters);
    }

    #[test]
    fn section_seven_w_gauge_has_clusters() {
        let rho = RhoSpec::from_ints(&[0, 1, 0]).unwrap();
        let s = estimate_asymptotic_set(&seven(), &rho, &AsymConfig { seed: 1, ..Default::default() }).unwrap();
        assert!(!s.clusters.is_empty());
        // the limits lie on {t1 = 0}
        for c in &s.clusters {
            assert!(c.center[0].norm() < 0.05, "{:?}", c.center);
        }
    }

    #[test]
    fn broughton_cluster_at_zero() {
        let g = parse_poly_map("z + z^2*w", &["z", "w"]).unwrap();
        let s = estimate_asymptotic_set(&g, &RhoSpec::unit(2), &AsymConfig { seed: 1, ..Default::default() }).unwrap();
        let c = containment_check(&[vec![Complex64::new(0.0, 0.0)]], &s, 0.1);
        assert!(c.holds, "{:?}", s.clusters);
    }

    #[test]
    fn containment_cases() {
        let empty = ClusterSet {
            clusters: vec![],
            levels: vec![],
            rejected: 0,
            low_confidence: false,
            warnings: vec![],
            seed: 0,
            tol: 1e-10,
            cluster_rel: 0.05,
        };
        assert!(containment_check(&[], &empty, 0.1).holds);
        assert!(!containment_check(&[vec![Complex64::new(1.0, 0.0)]], &empty, 0.1).holds);
        let mut one = empty.clone();
        one.clusters.push(Cluster {
            center: vec![Complex64::new(0.003, 0.0)],
            radius: 0.0,
            counts: vec![1, 1, 1],
            centers: vec![],
            first_level: 0,
        });
        assert!(containment_check(&[vec![Complex64::new(0.0, 0.0)]], &one, 0.1).holds);
    }

    #[test]
    fn schedule_validation() {
        let cfg = AsymConfig { schedule: vec![10.0, 5.0, 20.0], ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
