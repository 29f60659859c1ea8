//! Simultaneous complex root finding (Aberth–Ehrlich) and root clustering.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::unipoly::UniPoly;
use crate::error::Error;

pub const MAX_ITERATIONS: usize = 200;
/// Relative single-linkage threshold for merging approximations.
pub const CLUSTER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    /// Cluster representatives with multiplicity estimates, sorted by real then
    /// imaginary part.
    pub roots: Vec<(Complex64, usize)>,
    pub distinct_count: usize,
    /// Raw approximations, one per root counted with multiplicity.
    pub approximations: Vec<Complex64>,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.approximations.len()
    }
}

/// Positive root of `x^n - Σ |a_k/a_n| x^k`, an upper bound on root moduli.
fn cauchy_bound(monic_abs: &[f64]) -> f64 {
    let n = monic_abs.len() - 1;
    let f = |x: f64| {
        let mut acc = 1.0;
        for k in (0..n).rev() {
            acc = acc * x - monic_abs[k];
        }
        acc
    };
    let mut hi = 1.0 + monic_abs[..n].iter().cloned().fold(0.0, f64::max);
    let mut lo = 0.0;
    if f(hi) < 0.0 {
        return hi;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// All complex roots of `p`. Each approximation stops moving once its Aberth
/// correction is below `tol·max(1, |z|)` or `|p(z)|` reaches the rounding level
/// of the evaluation; the latter handles multiple roots.
pub fn roots(p: &UniPoly<Complex64>, tol: f64) -> Result<RootSet, Error> {
    let deg = p.degree();
    if deg < 1 {
        return Err(Error::DegreeZero);
    }
    let c = p.coeffs();
    // exact zero roots are split off
    let zeros = c.iter().take_while(|a| **a == Complex64::new(0.0, 0.0)).count();
    let q = UniPoly::new(c[zeros..].to_vec());
    let n = q.degree() as usize;
    let mut z: Vec<Complex64> = Vec::with_capacity(n);
    let mut done = vec![false; n];
    if n > 0 {
        let lead = *q.leading().expect("nonzero");
        let monic_abs: Vec<f64> = q.coeffs().iter().map(|a| (a / lead).norm()).collect();
        let r = cauchy_bound(&monic_abs);
        for k in 0..n {
            let theta = TAU * k as f64 / n as f64 + 0.4;
            let rk = r * (1.0 + 0.01 * ((k % 3) as f64));
            z.push(Complex64::from_polar(rk, theta));
        }
        let mut converged = false;
        for _ in 0..MAX_ITERATIONS {
            for k in 0..n {
                if done[k] {
                    continue;
                }
                let (pv, dpv) = q.eval_with_derivative(z[k]);
                if pv.norm() <= q.eval_error_bound(z[k]) {
                    done[k] = true;
                    continue;
                }
                let ratio = if dpv.norm() == 0.0 { Complex64::new(1e-8 * (1.0 + z[k].norm()), 0.0) } else { pv / dpv };
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    if j != k {
                        let d = z[k] - z[j];
                        if d.norm() > 0.0 {
                            s += d.inv();
                        }
                    }
                }
                let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
                if !w.re.is_finite() || !w.im.is_finite() {
                    continue;
                }
                z[k] -= w;
                if w.norm() <= tol * z[k].norm().max(1.0) {
                    done[k] = true;
                }
            }
            if done.iter().all(|&d| d) {
                converged = true;
                break;
            }
        }
        if !converged {
            let mut partial = vec![Complex64::new(0.0, 0.0); zeros];
            partial.extend(z);
            return Err(Error::NoConvergence { iterations: MAX_ITERATIONS, partial });
        }
    }
    // inclusion radii: each connected union of discs holds as many roots as discs
    let mut radii = vec![0.0; zeros];
    let lead = q.leading().map(|a| a.norm()).unwrap_or(1.0);
    for k in 0..n {
        let pv = q.eval(&z[k]).norm() + q.eval_error_bound(z[k]);
        let prod: f64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).norm()).product();
        radii.push(if prod > 0.0 { n as f64 * pv / (lead * prod) } else { f64::INFINITY });
    }
    let mut all = vec![Complex64::new(0.0, 0.0); zeros];
    all.extend(z);
    Ok(cluster_with_radii(all, &radii))
}

/// Single-linkage clustering at `CLUSTER_TOL·max(1, |r|)`.
pub fn cluster(approximations: Vec<Complex64>) -> RootSet {
    let radii = vec![0.0; approximations.len()];
    cluster_with_radii(approximations, &radii)
}

/// As [`cluster`], additionally linking approximations whose inclusion discs
/// overlap.
pub fn cluster_with_radii(approximations: Vec<Complex64>, radii: &[f64]) -> RootSet {
    let n = approximations.len();
    let groups = single_linkage(n, |i, j| {
        let a = approximations[i];
        let b = approximations[j];
        let d = (a - b).norm();
        d <= CLUSTER_TOL * a.norm().max(b.norm()).max(1.0) || d <= radii[i] + radii[j]
    });
    let mut roots: Vec<(Complex64, usize)> = groups
        .into_iter()
        .map(|g| {
            let sum: Complex64 = g.iter().map(|&i| approximations[i]).sum();
            (sum / g.len() as f64, g.len())
        })
        .collect();
    roots.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let distinct_count = roots.len();
    RootSet { roots, distinct_count, approximations }
}

/// Connected components of the graph on `0..n` with edges where `linked`
/// holds; components are listed by smallest member, members ascending.
pub fn single_linkage(n: usize, linked: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if linked(i, j) {
                let a = find(&mut parent, i);
                let b = find(&mut parent, j);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(i);
    }
    groups
}

/// Elementary symmetric functions `e_0 = 1, …, e_n` of the given values.
pub fn elementary_symmetric(values: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for &v in values {
        e.push(Complex64::new(0.0, 0.0));
        for k in (1..e.len()).rev() {
            let prev = e[k - 1];
            e[k] += prev * v;
        }
    }
    e
}
