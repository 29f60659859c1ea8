//! Very-good-projection check for a linear form L on the fibers near t⁰.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use num_traits::Zero;
use rand_distr::StandardNormal;

use super::reduce::{reduce, FiberShape, Reduction};
use crate::elim::resultant::resultant_any;
use crate::elim::roots::single_linkage;
use crate::elim::{roots, UniPoly};
use crate::error::Error;
use crate::numeric::task_rng;
use crate::polycore::{GaussRat, MPoly, PolyMap};

type P = MPoly<GaussRat>;

/// Three-valued verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Undecided,
}

impl Tri {
    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Yes => "true",
            Tri::No => "false",
            Tri::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionConfig {
    /// Polydisk radius around t⁰.
    pub delta: f64,
    pub lambdas: usize,
    pub t_samples: usize,
    pub seed: u64,
    /// Escape radii are `10·2^k` for `k < levels`.
    pub levels: usize,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        ProjectionConfig { delta: 0.1, lambdas: 20, t_samples: 5, seed: 0, levels: 7 }
    }
}

/// Smallest |L| among escape points whose norm falls in `[10·2^k, 10·2^{k+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct EscapeBin {
    pub level: usize,
    pub points: usize,
    pub min_abs_l: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProperEvidence {
    pub algebraic: Tri,
    pub algebraic_reason: String,
    pub numeric: Tri,
    pub escape: Vec<EscapeBin>,
    /// The two routes reached opposite decided verdicts.
    pub disagreement: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CardinalitySample {
    pub t: Vec<Complex64>,
    pub lambda: Complex64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionReport {
    pub l: Vec<GaussRat>,
    pub t0: Vec<GaussRat>,
    pub proper: Tri,
    pub evidence: ProperEvidence,
    pub cardinality_constant: bool,
    pub counts: Vec<CardinalitySample>,
    pub is_very_good: bool,
    pub delta: f64,
    pub seed: u64,
}

pub fn check_very_good_projection(g: &PolyMap, l: &[GaussRat], t0: &[GaussRat], cfg: &ProjectionConfig) -> Result<ProjectionReport, Error> {
    if l.len() != g.n() {
        return Err(Error::ArityMismatch { expected: g.n(), got: l.len() });
    }
    if t0.len() != g.m() {
        return Err(Error::ArityMismatch { expected: g.m(), got: t0.len() });
    }
    if l.iter().all(|a| a.is_zero()) {
        return Err(Error::InvalidMap("the linear form L is zero".into()));
    }
    let red = reduce(g);
    let shape = red.shape()?;
    let n = g.n();
    let lin = l.iter().enumerate().fold(MPoly::zero(n), |acc, (i, a)| &acc + &MPoly::var(n, i).scale(a));
    let lr = red.restrict(&lin);
    let study = Study::new(&red, &shape, lr);
    let (algebraic, algebraic_reason) = study.algebraic(t0);
    let (numeric, escape) = study.escape(t0, cfg.levels, cfg.delta, cfg.seed);
    let disagreement = matches!((algebraic, numeric), (Tri::Yes, Tri::No) | (Tri::No, Tri::Yes));
    let proper = if disagreement { Tri::Undecided } else { algebraic };
    let counts = study.cardinality(t0, cfg);
    let cardinality_constant = match &counts {
        Some(c) => !c.is_empty() && c.iter().all(|s| s.count == c[0].count),
        None => false,
    };
    let counts = counts.unwrap_or_default();
    Ok(ProjectionReport {
        l: l.to_vec(),
        t0: t0.to_vec(),
        proper,
        evidence: ProperEvidence { algebraic, algebraic_reason, numeric, escape, disagreement },
        is_very_good: proper == Tri::Yes && cardinality_constant,
        cardinality_constant,
        counts,
        delta: cfg.delta,
        seed: cfg.seed,
    })
}

struct Study<'a> {
    red: &'a Reduction,
    shape: &'a FiberShape,
    /// L restricted to the fiber, in the reduction ring.
    lr: P,
    /// Ring `(x, t, λ)` resultants `Res_other(h, L − λ)` for each plane variable.
    eliminants: Vec<(usize, usize, P)>,
}

impl<'a> Study<'a> {
    fn new(red: &'a Reduction, shape: &'a FiberShape, lr: P) -> Self {
        let mut eliminants = Vec::new();
        if let FiberShape::PlaneCurve { vars: (a, b), h } = shape {
            let k = red.ring() + 1;
            let lam = red.ring();
            let lift = |p: &P| p.remap(&(0..p.nvars()).collect::<Vec<_>>(), k);
            let hh = lift(h);
            let ll = &lift(&lr) - &MPoly::var(k, lam);
            for (c, o) in [(*a, *b), (*b, *a)] {
                eliminants.push((c, o, resultant_any(&hh, &ll, o)));
            }
        }
        Study { red, shape, lr, eliminants }
    }

    fn lambda_var(&self) -> usize {
        self.red.ring()
    }

    fn t_point(&self, t: &[GaussRat]) -> Vec<(usize, GaussRat)> {
        t.iter().enumerate().map(|(i, v)| (self.red.t_var(i), v.clone())).collect()
    }

    fn algebraic(&self, t0: &[GaussRat]) -> (Tri, String) {
        let at_t0 = |p: &P| self.t_point(t0).iter().fold(p.clone(), |acc, (v, x)| acc.specialize(*v, x));
        match self.shape {
            FiberShape::Affine { dim: 0 } => (Tri::Yes, "fibers are points".into()),
            FiberShape::Affine { dim: 1 } => {
                let v = self.red.free[0];
                if !self.lr.involves(v) {
                    return (Tri::No, "L is constant along every fiber".into());
                }
                let lc = self.lr.lc_in(v);
                if lc.is_constant() {
                    (Tri::Yes, "L has constant leading coefficient on the fiber line".into())
                } else if !at_t0(&lc).is_zero() {
                    (Tri::Yes, "leading coefficient of L on the fiber line is nonzero at t0".into())
                } else {
                    // the degree in v drops at t0, so a root of L = λ escapes
                    (Tri::No, "leading coefficient of L on the fiber line vanishes at t0".into())
                }
            }
            FiberShape::Affine { dim } => {
                if self.red.free.iter().all(|&v| !self.lr.involves(v)) {
                    (Tri::No, "L is constant along every fiber".into())
                } else {
                    (Tri::No, format!("fibers are {dim}-dimensional affine spaces, so level sets of L are not compact"))
                }
            }
            FiberShape::Finite { .. } => (Tri::Yes, "fibers are finite".into()),
            FiberShape::PlaneCurve { vars: (a, b), .. } => {
                if !self.lr.involves(*a) && !self.lr.involves(*b) {
                    return (Tri::No, "L is free of the fiber variables (degenerate elimination)".into());
                }
                let mut dropped = None;
                for (c, _, e) in &self.eliminants {
                    if e.is_zero() {
                        return (Tri::No, format!("L − λ shares a component with the fiber (x{} eliminant vanishes)", c + 1));
                    }
                    if !e.involves(*c) {
                        return (Tri::No, format!("x{} is unconstrained on level sets of L", c + 1));
                    }
                    let lc = e.lc_in(*c);
                    if lc.involves(self.lambda_var()) {
                        return (Tri::No, format!("leading coefficient in x{} depends on λ", c + 1));
                    }
                    // a degree drop at t0 sends a common root of h and L − λ to infinity
                    if !lc.is_constant() && at_t0(&lc).is_zero() {
                        dropped = Some(format!("leading coefficient in x{} vanishes at t0", c + 1));
                    }
                }
                match dropped {
                    Some(r) => (Tri::No, r),
                    None => (Tri::Yes, "leading coefficients of both eliminants are free of λ and nonzero at t0".into()),
                }
            }
        }
    }

    /// Fiber at t⁰ in the surviving variables as complex polynomials, plus L.
    fn local_at(&self, t: &[Complex64]) -> (Vec<usize>, Option<MPoly<Complex64>>, MPoly<Complex64>) {
        let spec = |p: &P| {
            t.iter().enumerate().fold(p.to_complex(), |acc, (i, v)| acc.specialize(self.red.t_var(i), v))
        };
        let h = match self.shape {
            FiberShape::PlaneCurve { h, .. } | FiberShape::Finite { h, .. } => Some(spec(h)),
            FiberShape::Affine { .. } => None,
        };
        (self.red.free.clone(), h, spec(&self.lr))
    }

    /// Escape samples: points at radius `10·2^k` on the fiber over t⁰, plus the
    /// points of `L = λ` on fibers over `t⁰ + (δ/2^k)·u` for two fixed unit
    /// directions `u`. Points of bounded L escaping as t → t⁰ land in outer bins.
    fn escape(&self, t0: &[GaussRat], levels: usize, delta: f64, seed: u64) -> (Tri, Vec<EscapeBin>) {
        let tc: Vec<Complex64> = t0.iter().map(|c| c.to_c64()).collect();
        let (free, h, l) = self.local_at(&tc);
        let ring = self.red.ring();
        let mut pts: Vec<(f64, f64)> = Vec::new();
        let angles: Vec<f64> = (0..16).map(|j| TAU * j as f64 / 16.0 + 0.1).collect();
        match (self.shape, &h) {
            (FiberShape::PlaneCurve { vars: (a, b), .. }, Some(h)) => {
                for k in 0..levels {
                    let r = 10.0 * 2f64.powi(k as i32);
                    for &th in &angles {
                        for (c, o) in [(*a, *b), (*b, *a)] {
                            let mut x = vec![Complex64::new(0.0, 0.0); ring];
                            x[c] = Complex64::from_polar(r, th);
                            let Ok(u) = UniPoly::specialize(h, o, &x) else { continue };
                            if u.degree() < 1 {
                                continue;
                            }
                            let Ok(rs) = roots(&u, 1e-14) else { continue };
                            for (y, _) in rs.roots {
                                x[o] = y;
                                let norm = (x[c].norm_sqr() + y.norm_sqr()).sqrt();
                                pts.push((norm, l.evaluate(&x).map(|v| v.norm()).unwrap_or(f64::NAN)));
                            }
                        }
                    }
                }
            }
            (FiberShape::Affine { dim: 1 }, None) => {
                for k in 0..levels {
                    let r = 10.0 * 2f64.powi(k as i32);
                    for &th in &angles {
                        let mut x = vec![Complex64::new(0.0, 0.0); ring];
                        x[free[0]] = Complex64::from_polar(r, th);
                        pts.push((r, l.evaluate(&x).map(|v| v.norm()).unwrap_or(f64::NAN)));
                    }
                }
            }
            _ => return (Tri::Undecided, Vec::new()),
        }
        let mut rng = task_rng(seed, &[0xe5c]);
        let normal = |rng: &mut rand_chacha::ChaCha8Rng| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let dirs: Vec<Vec<Complex64>> = (0..2)
            .map(|_| {
                let u: Vec<Complex64> = tc.iter().map(|_| normal(&mut rng)).collect();
                let norm = u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
                u.into_iter().map(|c| c / norm).collect()
            })
            .collect();
        let lambdas: Vec<Complex64> = (0..2).map(|_| normal(&mut rng)).collect();
        for k in 0..levels {
            let eps = delta / 2f64.powi(k as i32);
            for u in &dirs {
                let t: Vec<Complex64> = tc.iter().zip(u).map(|(t, d)| t + d * eps).collect();
                for &lambda in &lambdas {
                    for x in self.level_points(&t, lambda).unwrap_or_default() {
                        let norm = free.iter().map(|&v| x[v].norm_sqr()).sum::<f64>().sqrt();
                        pts.push((norm, lambda.norm()));
                    }
                }
            }
        }
        let mut bins: Vec<EscapeBin> = Vec::new();
        for (norm, al) in pts {
            if norm < 10.0 || !al.is_finite() {
                continue;
            }
            let level = ((norm / 10.0).log2().floor() as usize).min(levels - 1);
            match bins.iter_mut().find(|b| b.level == level) {
                Some(b) => {
                    b.points += 1;
                    b.min_abs_l = b.min_abs_l.min(al);
                }
                None => bins.push(EscapeBin { level, points: 1, min_abs_l: al }),
            }
        }
        bins.sort_by_key(|b| b.level);
        let tail: Vec<&EscapeBin> = bins.iter().filter(|b| b.level >= 2).collect();
        let verdict = if tail.len() < 2 {
            Tri::Undecided
        } else if tail.windows(2).all(|w| w[1].min_abs_l > w[0].min_abs_l) {
            Tri::Yes
        } else {
            Tri::No
        };
        (verdict, bins)
    }

    /// Distinct points of `L = λ` on fibers over random t in the δ-polydisk.
    fn cardinality(&self, t0: &[GaussRat], cfg: &ProjectionConfig) -> Option<Vec<CardinalitySample>> {
        if let FiberShape::Affine { dim } = self.shape {
            if *dim >= 2 {
                return None;
            }
        }
        let mut out = Vec::new();
        for s in 0..cfg.t_samples {
            let mut rng = task_rng(cfg.seed, &[0xca4d, s as u64]);
            let t: Vec<Complex64> = t0
                .iter()
                .map(|c| c.to_c64() + Complex64::from_polar(cfg.delta * rng.random::<f64>(), TAU * rng.random::<f64>()))
                .collect();
            for _ in 0..cfg.lambdas {
                let lambda = Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)) * 3.0;
                let count = self.count_points(&t, lambda)?;
                out.push(CardinalitySample { t: t.clone(), lambda, count });
            }
        }
        Some(out)
    }

    fn count_points(&self, t: &[Complex64], lambda: Complex64) -> Option<usize> {
        let pts = self.level_points(t, lambda)?;
        let free = &self.red.free;
        let groups = single_linkage(pts.len(), |i, j| {
            let d = free.iter().map(|&v| (pts[i][v] - pts[j][v]).norm_sqr()).sum::<f64>().sqrt();
            let s: f64 = free.iter().map(|&v| pts[i][v].norm()).sum();
            d <= 1e-6 * s.max(1.0)
        });
        Some(groups.len())
    }

    /// Points of `L = λ` on the fiber over t, as ring vectors with only the free
    /// coordinates set; `None` when the level set is not finite or roots fail.
    fn level_points(&self, t: &[Complex64], lambda: Complex64) -> Option<Vec<Vec<Complex64>>> {
        let (free, h, l) = self.local_at(t);
        let ring = self.red.ring();
        let lam = MPoly::constant(ring, lambda);
        let lm = &l - &lam;
        let zero = vec![Complex64::new(0.0, 0.0); ring];
        let at = |var: usize, x: Complex64| {
            let mut p = zero.clone();
            p[var] = x;
            p
        };
        match self.shape {
            FiberShape::Affine { dim: 0 } => Some(if lm.is_zero() { vec![zero.clone()] } else { Vec::new() }),
            FiberShape::Affine { .. } => {
                let u = UniPoly::specialize(&lm, free[0], &zero).ok()?;
                if u.degree() < 1 {
                    return Some(Vec::new());
                }
                Some(roots(&u, 1e-14).ok()?.roots.into_iter().map(|(x, _)| at(free[0], x)).collect())
            }
            FiberShape::Finite { var, .. } => {
                let h = h?;
                let u = UniPoly::specialize(&h, *var, &zero).ok()?;
                if u.degree() < 1 {
                    return Some(Vec::new());
                }
                let rs = roots(&u, 1e-14).ok()?;
                Some(
                    rs.roots
                        .into_iter()
                        .map(|(x, _)| at(*var, x))
                        .filter(|p| lm.evaluate(p).map(|v| v.norm() < 1e-8 * (1.0 + lambda.norm())).unwrap_or(false))
                        .collect(),
                )
            }
            FiberShape::PlaneCurve { .. } => {
                let h = h?;
                let (c, o, e) = &self.eliminants[0];
                let mut tl: Vec<Complex64> = zero.clone();
                tl.push(lambda);
                for (i, v) in t.iter().enumerate() {
                    tl[self.red.t_var(i)] = *v;
                }
                let ec = e.to_complex();
                let u = UniPoly::specialize(&ec, *c, &tl).ok()?;
                if u.degree() < 1 {
                    return None;
                }
                let rs = roots(&u, 1e-14).ok()?;
                let mut pts = Vec::new();
                for (xc, _) in rs.roots {
                    let x = at(*c, xc);
                    let uh = UniPoly::specialize(&h, *o, &x).ok()?;
                    let ul = UniPoly::specialize(&lm, *o, &x).ok()?;
                    let cands: Vec<Complex64> = if ul.degree() >= 1 {
                        roots(&ul, 1e-14).ok()?.roots.into_iter().map(|r| r.0).collect()
                    } else if ul.is_zero() && uh.degree() >= 1 {
                        roots(&uh, 1e-14).ok()?.roots.into_iter().map(|r| r.0).collect()
                    } else {
                        Vec::new()
                    };
                    for y in cands {
                        if near_zero(&uh, y) && near_zero(&ul, y) {
                            let mut p = x.clone();
                            p[*o] = y;
                            pts.push(p);
                        }
                    }
                }
                Some(pts)
            }
        }
    }
}

fn near_zero(u: &UniPoly<Complex64>, x: Complex64) -> bool {
    if u.is_zero() {
        return true;
    }
    let scale: f64 = u.coeffs().iter().enumerate().map(|(k, c)| c.norm() * x.norm().powi(k as i32)).sum();
    u.eval(&x).norm() <= 1e-6 * scale.max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly_map;

    fn g() -> PolyMap {
        parse_poly_map("z + z^2*w", &["z", "w"]).unwrap()
    }

    fn gr(v: &[i64]) -> Vec<GaussRat> {
        v.iter().map(|&x| GaussRat::from_int(x)).collect()
    }

    #[test]
    fn broughton_z_plus_w() {
        let r = check_very_good_projection(&g(), &gr(&[1, 1]), &gr(&[0]), &ProjectionConfig::default()).unwrap();
        assert_eq!(r.proper, Tri::Yes, "{:?}", r.evidence);
        assert_eq!(r.evidence.numeric, Tri::Yes);
        assert_eq!(r.counts.len(), 100);
        assert!(r.counts.iter().all(|c| c.count == 3));
        assert!(r.is_very_good);
    }

    #[test]
    fn broughton_z_is_not_proper() {
        let r = check_very_good_projection(&g(), &gr(&[1, 0]), &gr(&[0]), &ProjectionConfig::default()).unwrap();
        assert_eq!(r.proper, Tri::No);
        assert_eq!(r.evidence.numeric, Tri::No);
        assert!(!r.evidence.disagreement);
        assert!(!r.is_very_good);
    }

    #[test]
    fn broughton_w_is_not_proper() {
        let r = check_very_good_projection(&g(), &gr(&[0, 1]), &gr(&[0]), &ProjectionConfig::default()).unwrap();
        assert_eq!(r.proper, Tri::No);
    }

    #[test]
    fn section_seven_line_fibers() {
        let g = parse_poly_map("z; z*t^2 + w", &["z", "w", "t"]).unwrap();
        let r = check_very_good_projection(&g, &gr(&[0, 0, 1]), &gr(&[0, 0]), &ProjectionConfig::default()).unwrap();
        assert_eq!(r.proper, Tri::Yes);
        assert!(r.counts.iter().all(|c| c.count == 1));
        // L = z is constant on every fiber
        let r = check_very_good_projection(&g, &gr(&[1, 0, 0]), &gr(&[0, 0]), &ProjectionConfig::default()).unwrap();
        assert_eq!(r.proper, Tri::No);
    }

    #[test]
    fn broughton_generic_forms() {
        let mut rng = task_rng(7, &[1]);
        for _ in 0..5 {
            let mut pick = || loop {
                let v = rng.random_range(-9i64..=9);
                if v != 0 {
                    return GaussRat::from_ratio(v, rng.random_range(1..=5));
                }
            };
            let l = vec![pick(), pick()];
            let r = check_very_good_projection(&g(), &l, &gr(&[0]), &ProjectionConfig::default()).unwrap();
            assert!(r.is_very_good, "{l:?}: {:?}", r.evidence);
        }
    }

    #[test]
    fn zero_form_rejected() {
        assert!(check_very_good_projection(&g(), &gr(&[0, 0]), &gr(&[0]), &ProjectionConfig::default()).is_err());
    }
}
