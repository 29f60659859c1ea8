//! Rank of the leading-form Jacobian and dimension of the leading-form zero set.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::elim::squarefree_part;
use crate::error::Error;
use crate::numeric::{gauss_newton, numeric_rank, task_rng, CompiledPoly, NewtonConfig, System};
use crate::polycore::{GaussRat, MPoly, PolyMap};

#[derive(Clone, Debug, PartialEq)]
pub struct LeadingConfig {
    pub seed: u64,
    /// Zero-set points used for the rank estimate.
    pub probes: usize,
    /// Newton starts per slice codimension.
    pub starts: usize,
    pub tol: f64,
}

impl Default for LeadingConfig {
    fn default() -> Self {
        LeadingConfig { seed: 0, probes: 10, starts: 60, tol: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeadingFormReport {
    pub leading_forms: Vec<MPoly<GaussRat>>,
    /// Max numeric rank of (DĜ_i) at random ambient points.
    pub ambient_rank: usize,
    /// Max numeric rank of (DĜ_i) at the zero-set probes.
    pub rank_estimate: Option<usize>,
    /// Largest k such that k random affine hyperplanes still meet {Ĝ = 0}.
    pub zero_set_dim_estimate: Option<usize>,
    pub zero_set_points: usize,
    /// `dim = n − rank`, recorded as observed.
    pub dim_matches_corank: Option<bool>,
    pub seed: u64,
    pub tol: f64,
}

const RANK_TOL: f64 = 1e-8;

pub fn leading_form_report(g: &PolyMap, cfg: &LeadingConfig) -> Result<LeadingFormReport, Error> {
    let n = g.n();
    let forms: Vec<MPoly<GaussRat>> = g.components().iter().map(|c| c.leading_form()).collect::<Result<_, _>>()?;
    let jac = System::new(n, forms.iter().map(CompiledPoly::<Complex64>::compile).collect());
    let ones = vec![1.0; forms.len()];
    let rank_at = |x: &[Complex64]| numeric_rank(&jac.eval_jacobian(x, &ones).1, RANK_TOL);

    let mut rng = task_rng(cfg.seed, &[0x1ead]);
    let ambient_rank = (0..10).map(|_| rank_at(&normal_point(&mut rng, n))).max().unwrap_or(0);

    // the radical has the same zero set and regular Newton behavior
    let radicals: Vec<CompiledPoly<Complex64>> = forms.iter().map(|f| CompiledPoly::compile(&radical(f))).collect();
    let mut dim = None;
    let mut points = Vec::new();
    for k in (0..=n).rev() {
        let found = solve_sliced(&radicals, n, k, cfg, cfg.probes);
        if !found.is_empty() {
            dim = Some(k);
            points = found;
            break;
        }
    }
    let rank_estimate = points.iter().map(|x| rank_at(x)).max();
    let dim_matches_corank = match (dim, rank_estimate) {
        (Some(d), Some(r)) => Some(d + r == n),
        _ => None,
    };
    Ok(LeadingFormReport {
        leading_forms: forms,
        ambient_rank,
        rank_estimate,
        zero_set_dim_estimate: dim,
        zero_set_points: points.len(),
        dim_matches_corank,
        seed: cfg.seed,
        tol: cfg.tol,
    })
}

fn radical(f: &MPoly<GaussRat>) -> MPoly<GaussRat> {
    f.support_vars().into_iter().fold(f.clone(), |acc, v| if acc.involves(v) { squarefree_part(&acc, v) } else { acc })
}

fn normal_point(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))).collect()
}

/// Up to `want` solutions of `{f = 0} ∩ (k random affine hyperplanes)`, one per start.
fn solve_sliced(forms: &[CompiledPoly<Complex64>], n: usize, k: usize, cfg: &LeadingConfig, want: usize) -> Vec<Vec<Complex64>> {
    let mut out = Vec::new();
    for s in 0..cfg.starts {
        let mut rng = task_rng(cfg.seed, &[0x511c, k as u64, s as u64]);
        let mut eqs = forms.to_vec();
        for _ in 0..k {
            let a = normal_point(&mut rng, n);
            let b = normal_point(&mut rng, 1)[0];
            let terms = (0..n)
                .map(|i| {
                    let mut e = vec![0u32; n];
                    e[i] = 1;
                    (a[i], e)
                })
                .chain(std::iter::once((-b, vec![0u32; n])));
            eqs.push(CompiledPoly::from_terms(n, terms));
        }
        let sys = System::new(n, eqs);
        let w = vec![1.0; sys.len()];
        let x0 = normal_point(&mut rng, n);
        let r = gauss_newton(&sys, &w, x0, NewtonConfig { max_steps: 80, tol: cfg.tol * 1e-2 });
        let ok = r.converged
            && r.x.iter().all(|c| c.norm() < 1e6)
            && sys.residuals(&r.x).iter().all(|(a, s)| *a <= cfg.tol * s.max(1.0));
        if ok {
            out.push(r.x);
            if out.len() >= want {
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly_map;

    fn report(text: &str, vars: &[&str]) -> LeadingFormReport {
        leading_form_report(&parse_poly_map(text, vars).unwrap(), &LeadingConfig::default()).unwrap()
    }

    #[test]
    fn suspension_dim_one() {
        let r = report("z + z^2*w; e", &["z", "w", "e"]);
        assert_eq!(r.zero_set_dim_estimate, Some(1));
        assert_eq!(r.rank_estimate, Some(2));
        assert_eq!(r.ambient_rank, 2);
        assert_eq!(r.dim_matches_corank, Some(true));
    }

    #[test]
    fn section_seven_dim_two() {
        let r = report("z; z*t^2 + w", &["z", "w", "t"]);
        assert_eq!(r.zero_set_dim_estimate, Some(2));
        assert_eq!(r.rank_estimate, Some(1));
    }

    #[test]
    fn broughton_rank_one() {
        let r = report("z + z^2*w", &["z", "w"]);
        assert_eq!(r.zero_set_dim_estimate, Some(1));
        assert_eq!(r.rank_estimate, Some(1));
        assert_eq!(r.zero_set_points, 10);
    }

    #[test]
    fn isolated_origin() {
        let r = report("z^2 + w^2; z*w", &["z", "w"]);
        assert_eq!(r.zero_set_dim_estimate, Some(0));
    }
}
