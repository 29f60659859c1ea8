//! χ profile over the target: generic value, candidate special values from
//! degeneration loci, and χ jumps.

use num_complex::Complex64;
use rand::Rng;

use super::curve::curve_chi;
use super::reduce::{reduce, FiberShape, Reduction};
use crate::elim::resultant::resultant_any;
use crate::elim::{content_in, discriminant, exact_div, principal_subresultants, roots, squarefree_part, UniPoly};
use crate::error::Error;
use crate::numeric::task_rng;
use crate::polycore::{GaussRat, MPoly, PolyMap};

type P = MPoly<GaussRat>;

#[derive(Clone, Debug, PartialEq)]
pub struct ChiConfig {
    pub seed: u64,
    /// Random target values used for the generic χ; at least 3.
    pub generic_samples: usize,
    /// Extra target values evaluated besides the computed candidates.
    pub extra_t: Vec<Vec<GaussRat>>,
}

impl Default for ChiConfig {
    fn default() -> Self {
        ChiConfig { seed: 0, generic_samples: 3, extra_t: Vec::new() }
    }
}

/// Where a candidate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CandidateSource {
    Degeneration,
    User,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpecialValue {
    pub t: Vec<Complex64>,
    /// Exact value when the candidate is Gaussian rational.
    pub t_exact: Option<Vec<GaussRat>>,
    /// `None` when the candidate is irrational and χ could not be evaluated exactly.
    pub chi: Option<i64>,
    /// Target coordinate varied on the probe line, for m ≥ 2.
    pub axis: Option<usize>,
    pub source: CandidateSource,
}

/// A line in the target along coordinate `axis`, other coordinates fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisProbe {
    pub axis: usize,
    pub fixed: Vec<GaussRat>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiReport {
    pub shape: String,
    pub generic_chi: i64,
    pub generic_samples: Vec<(Vec<GaussRat>, i64)>,
    pub special_values: Vec<SpecialValue>,
    pub atypical: Vec<Vec<GaussRat>>,
    pub probes: Vec<AxisProbe>,
}

impl ChiReport {
    /// χ at an exact target value if it was evaluated.
    pub fn chi_at(&self, t: &[GaussRat]) -> Option<i64> {
        self.special_values.iter().find(|s| s.t_exact.as_deref() == Some(t)).and_then(|s| s.chi)
    }
}

pub fn shape_name(s: &FiberShape) -> String {
    match s {
        FiberShape::Affine { dim } => format!("affine_space_dim_{dim}"),
        FiberShape::PlaneCurve { .. } => "plane_curve".into(),
        FiberShape::Finite { .. } => "finite".into(),
    }
}

/// χ of the fiber over an exact target value.
pub fn fiber_chi(red: &Reduction, shape: &FiberShape, t: &[GaussRat]) -> Result<i64, Error> {
    if t.len() != red.m {
        return Err(Error::ArityMismatch { expected: red.m, got: t.len() });
    }
    match shape {
        FiberShape::Affine { .. } => Ok(1),
        FiberShape::PlaneCurve { vars: (a, b), h } => {
            let h2 = to_local(&specialize_t(red, h, t, None), &[*a, *b], None);
            match curve_chi(&h2) {
                Err(Error::NotACurve(_)) if h2.is_zero() => Ok(1),
                Err(Error::NotACurve(_)) => Ok(0),
                r => r,
            }
        }
        FiberShape::Finite { var, h } => {
            let h1 = to_local(&specialize_t(red, h, t, None), &[*var], None);
            if h1.is_zero() {
                Ok(1)
            } else if h1.is_constant() {
                Ok(0)
            } else {
                Ok(squarefree_part(&h1, 0).degree_in(0))
            }
        }
    }
}

/// Substitute exact values for the target variables, except `keep`.
fn specialize_t(red: &Reduction, h: &P, t: &[GaussRat], keep: Option<usize>) -> P {
    (0..red.m).filter(|&i| Some(i) != keep).fold(h.clone(), |acc, i| acc.specialize(red.t_var(i), &t[i]))
}

/// Move `vars` to `0..k` and the target variable `keep` (if any) to `k`; all
/// other variables must be absent.
fn to_local(h: &P, vars: &[usize], keep: Option<usize>) -> P {
    let mut perm = vec![0; h.nvars()];
    for (k, &v) in vars.iter().enumerate() {
        perm[v] = k;
    }
    if let Some(v) = keep {
        perm[v] = vars.len();
    }
    debug_assert!((0..h.nvars()).all(|v| vars.contains(&v) || Some(v) == keep || !h.involves(v)));
    h.remap(&perm, vars.len() + keep.is_some() as usize)
}

/// Random Gaussian rational with small numerators and denominators.
pub fn random_gauss(rng: &mut impl Rng) -> GaussRat {
    let mut part = || {
        let d = rng.random_range(1..=9);
        GaussRat::from_ratio(rng.random_range(-30..=30), d).re
    };
    let re = part();
    let im = part();
    GaussRat::new(re, im)
}

pub fn chi_profile(g: &PolyMap, cfg: &ChiConfig) -> Result<ChiReport, Error> {
    let red = reduce(g);
    let shape = red.shape()?;
    let m = red.m;
    let mut rng = task_rng(cfg.seed, &[0xc41]);
    let mut generic_samples = Vec::new();
    for _ in 0..cfg.generic_samples.max(3) {
        let t: Vec<GaussRat> = (0..m).map(|_| random_gauss(&mut rng)).collect();
        let chi = fiber_chi(&red, &shape, &t)?;
        generic_samples.push((t, chi));
    }
    let chis: Vec<i64> = generic_samples.iter().map(|s| s.1).collect();
    if chis.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::GenericChiUnstable(chis));
    }
    let generic_chi = chis[0];

    let mut probes = Vec::new();
    let mut special_values: Vec<SpecialValue> = Vec::new();
    for axis in 0..m {
        let fixed: Vec<GaussRat> = (0..m).map(|i| if i == axis { GaussRat::from_int(0) } else { random_gauss(&mut rng) }).collect();
        probes.push(AxisProbe { axis, fixed: fixed.clone() });
        let polys = match &shape {
            FiberShape::Affine { .. } => Vec::new(),
            FiberShape::PlaneCurve { vars: (a, b), h } => plane_candidates(&to_local(&specialize_t(&red, h, &fixed, Some(axis)), &[*a, *b], Some(red.t_var(axis)))),
            FiberShape::Finite { var, h } => finite_candidates(&to_local(&specialize_t(&red, h, &fixed, Some(axis)), &[*var], Some(red.t_var(axis)))),
        };
        for cand in candidate_roots(&polys)? {
            let mut t: Vec<Complex64> = fixed.iter().map(|c| c.to_c64()).collect();
            match cand {
                Candidate::Rational(q) => {
                    let mut te = fixed.clone();
                    te[axis] = q;
                    t[axis] = te[axis].to_c64();
                    let chi = fiber_chi(&red, &shape, &te)?;
                    special_values.push(SpecialValue { t, t_exact: Some(te), chi: Some(chi), axis: (m > 1).then_some(axis), source: CandidateSource::Degeneration });
                }
                Candidate::Irrational(z) => {
                    t[axis] = z;
                    special_values.push(SpecialValue { t, t_exact: None, chi: None, axis: (m > 1).then_some(axis), source: CandidateSource::Degeneration });
                }
            }
        }
    }
    for te in &cfg.extra_t {
        let chi = fiber_chi(&red, &shape, te)?;
        if special_values.iter().any(|s| s.t_exact.as_ref() == Some(te)) {
            continue;
        }
        special_values.push(SpecialValue { t: te.iter().map(|c| c.to_c64()).collect(), t_exact: Some(te.clone()), chi: Some(chi), axis: None, source: CandidateSource::User });
    }
    let atypical = special_values.iter().filter(|s| s.chi.is_some_and(|c| c > generic_chi)).filter_map(|s| s.t_exact.clone()).collect();
    Ok(ChiReport { shape: shape_name(&shape), generic_chi, generic_samples, special_values, atypical, probes })
}

const Z: usize = 0;
const W: usize = 1;

/// Polynomials in t (ring `(z, w, t)`) whose roots contain every t where the
/// ingredients of the χ count change.
fn plane_candidates(h: &P) -> Vec<P> {
    let mut out = Vec::new();
    if h.is_zero() {
        return out;
    }
    let h = squarefree_part(h, W);
    let c = content_in(&h, W);
    let r = exact_div(&h, &c).expect("content divides");
    // vertical lines
    let mut line_poly = None;
    if c.involves(Z) {
        let cc = content_in(&c, Z);
        out.push(cc.clone());
        let cz = squarefree_part(&exact_div(&c, &cc).expect("content divides"), Z);
        out.push(cz.lc_in(Z));
        if cz.degree_in(Z) > 1 {
            out.push(discriminant(&cz, Z).expect("positive degree"));
        }
        line_poly = Some(cz);
    } else {
        out.push(c.clone());
    }
    let d = r.degree_in(W);
    if d < 1 {
        return out;
    }
    let coeffs = r.coeffs_in(W);
    let mut pscs: Vec<P> = Vec::new();
    for j in 1..=d as usize {
        let rj = MPoly::from_coeffs_in(W, &coeffs[..=j], h.nvars());
        pscs.extend(principal_subresultants(&rj, &rj.diff(W), W));
    }
    let q = &r.lc_in(W) * &discriminant(&r, W).expect("positive degree");
    let qc = content_in(&q, Z);
    out.push(qc.clone());
    let mut bases: Vec<P> = Vec::new();
    if q.involves(Z) {
        let qs = squarefree_part(&exact_div(&q, &qc).expect("content divides"), Z);
        out.push(qs.lc_in(Z));
        if qs.degree_in(Z) > 1 {
            out.push(discriminant(&qs, Z).expect("positive degree"));
        }
        bases.push(qs);
    }
    bases.extend(line_poly);
    for base in &bases {
        for s in coeffs.iter().chain(&pscs) {
            out.push(resultant_any(base, s, Z));
        }
    }
    let top = &coeffs[d as usize];
    for ck in &coeffs[..d as usize] {
        out.push(resultant_any(top, ck, Z));
    }
    out
}

/// As [`plane_candidates`] for fibers in one variable, ring `(x, t)`.
fn finite_candidates(h: &P) -> Vec<P> {
    let mut out = vec![content_in(h, 0)];
    if h.degree_in(0) >= 1 {
        out.push(h.lc_in(0));
        out.push(discriminant(h, 0).expect("positive degree"));
    }
    out
}

enum Candidate {
    Rational(GaussRat),
    Irrational(Complex64),
}

/// Roots of the nonconstant candidate polynomials, each recognised as a
/// Gaussian rational when an approximation checks exactly.
fn candidate_roots(polys: &[P]) -> Result<Vec<Candidate>, Error> {
    let mut rational: Vec<GaussRat> = Vec::new();
    let mut irrational: Vec<Complex64> = Vec::new();
    for p in polys {
        if p.is_zero() || p.is_constant() {
            continue;
        }
        let t = p.nvars() - 1;
        debug_assert!(p.support_vars() == vec![t]);
        let sf = squarefree_part(p, t);
        let u = UniPoly::from_mpoly(&sf, t)?.to_complex();
        let rs = roots(&u, 1e-15)?;
        for (z, _) in rs.roots {
            let q = GaussRat::approximate(z, 1_000_000);
            if sf.specialize(t, &q).is_zero() {
                if !rational.contains(&q) {
                    rational.push(q);
                }
            } else if !irrational.iter().any(|w| (w - z).norm() <= 1e-8 * z.norm().max(1.0)) {
                irrational.push(z);
            }
        }
    }
    let key = |z: Complex64| (z.re, z.im);
    rational.sort_by(|a, b| key(a.to_c64()).partial_cmp(&key(b.to_c64())).expect("finite"));
    irrational.sort_by(|a, b| key(*a).partial_cmp(&key(*b)).expect("finite"));
    // irrational roots lying on a rational one are the same root
    irrational.retain(|z| !rational.iter().any(|q| (q.to_c64() - z).norm() <= 1e-8 * z.norm().max(1.0)));
    Ok(rational.into_iter().map(Candidate::Rational).chain(irrational.into_iter().map(Candidate::Irrational)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly_map;

    #[test]
    fn broughton_profile() {
        let g = parse_poly_map("z + z^2*w", &["z", "w"]).unwrap();
        let r = chi_profile(&g, &ChiConfig::default()).unwrap();
        assert_eq!(r.generic_chi, 0);
        assert_eq!(r.atypical, vec![vec![GaussRat::from_int(0)]]);
        assert_eq!(r.chi_at(&[GaussRat::from_int(0)]), Some(1));
        assert!(r.special_values.iter().all(|s| s.chi.is_some()));
    }

    #[test]
    fn section_seven_profile() {
        let g = parse_poly_map("z; z*t^2 + w", &["z", "w", "t"]).unwrap();
        let r = chi_profile(&g, &ChiConfig::default()).unwrap();
        assert_eq!(r.generic_chi, 1);
        assert!(r.atypical.is_empty());
        assert_eq!(r.shape, "affine_space_dim_1");
    }

    #[test]
    fn suspension_profile() {
        let g = parse_poly_map("z + z^2*w; e", &["z", "w", "e"]).unwrap();
        let r = chi_profile(&g, &ChiConfig { seed: 5, ..Default::default() }).unwrap();
        assert_eq!(r.generic_chi, 0);
        assert_eq!(r.atypical.len(), 1);
        assert_eq!(r.atypical[0][0], GaussRat::from_int(0));
        assert_eq!(r.special_values[0].axis, Some(0));
    }

    #[test]
    fn user_values_are_evaluated() {
        let g = parse_poly_map("z + z^2*w", &["z", "w"]).unwrap();
        let cfg = ChiConfig { extra_t: vec![vec![GaussRat::from_int(2)]], ..Default::default() };
        let r = chi_profile(&g, &cfg).unwrap();
        assert_eq!(r.chi_at(&[GaussRat::from_int(2)]), Some(0));
    }

    #[test]
    fn parabola_family_has_no_jump() {
        // every fiber is a parabola ≅ C
        let g = parse_poly_map("w^2 - z", &["z", "w"]).unwrap();
        let r = chi_profile(&g, &ChiConfig::default()).unwrap();
        assert_eq!(r.generic_chi, 1);
        assert!(r.atypical.is_empty());
    }

    #[test]
    fn finite_fiber_shape() {
        // two points, except the double point over t = 0
        let g = parse_poly_map("z^2", &["z"]).unwrap();
        let r = chi_profile(&g, &ChiConfig::default()).unwrap();
        assert_eq!(r.generic_chi, 2);
        assert_eq!(r.special_values.len(), 1);
        assert_eq!(r.chi_at(&[GaussRat::from_int(0)]), Some(1));
        assert!(r.atypical.is_empty());
    }
}
