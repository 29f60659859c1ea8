//! Emptiness of the critical-value set K₀(G), by eliminating variables from
//! the maximal minors of the complex Jacobian.

use nalgebra::ComplexField;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::elim::{exact_div, gcd, resultant, roots, squarefree_part, UniPoly};
use crate::numeric::{gauss_newton, task_rng, CompiledPoly, NewtonConfig, System};
use crate::polycore::{GaussRat, MPoly, PolyMap};

#[derive(Clone, Debug, PartialEq)]
pub enum K0Verdict {
    Empty { reason: String },
    Nonempty { witness: Vec<Complex64>, critical_value: Vec<Complex64>, numeric: bool },
    Undecided { reason: String },
}

type P = MPoly<GaussRat>;

enum Decision {
    Empty(String),
    Point(Vec<Complex64>),
    Unknown(String),
}

/// Decide whether the maximal minors of the complex Jacobian have a common zero.
pub fn check_k0_empty(g: &PolyMap, seed: u64) -> K0Verdict {
    let n = g.n();
    let m = g.m();
    if n > 3 {
        return K0Verdict::Undecided { reason: format!("unsupported shape: n = {n} > 3") };
    }
    let jac: Vec<Vec<P>> = g.components().iter().map(|c| (0..n).map(|v| c.diff(v)).collect()).collect();
    let minors: Vec<P> = super::combinations(n, m)
        .iter()
        .map(|cols| {
            let sub: Vec<Vec<P>> = jac.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
            crate::elim::bareiss_det(sub, n)
        })
        .collect();
    let finish = |x: Vec<Complex64>, numeric: bool| {
        let critical_value = g.components().iter().map(|c| c.evaluate(&x).expect("arity n")).collect();
        K0Verdict::Nonempty { witness: x, critical_value, numeric }
    };
    match decide(minors.clone(), n) {
        Decision::Empty(reason) => K0Verdict::Empty { reason },
        Decision::Point(x) if residual_ok(&minors, &x) => finish(x, false),
        other => match numeric_witness(&minors, n, seed) {
            Some(x) => finish(x, true),
            None => {
                let why = match other {
                    Decision::Unknown(s) => s,
                    _ => "eliminated witness failed the residual check".into(),
                };
                K0Verdict::Undecided { reason: format!("{why}; no numeric critical point found") }
            }
        },
    }
}

fn residual_ok(polys: &[P], x: &[Complex64]) -> bool {
    polys.iter().all(|p| {
        let c = CompiledPoly::<Complex64>::compile(p);
        let scale = c.abs_scale_with(&crate::numeric::PowerTable::new(x, c.max_exponent()));
        c.eval(x).norm() <= 1e-8 * scale.max(1.0)
    })
}

fn decide(polys: Vec<P>, n: usize) -> Decision {
    let polys: Vec<P> = polys.into_iter().filter(|p| !p.is_zero()).collect();
    if polys.iter().any(|p| p.is_constant()) {
        return Decision::Empty("a nonzero constant lies in the eliminated system".into());
    }
    if polys.is_empty() {
        return Decision::Point(vec![Complex64::new(0.0, 0.0); n]);
    }
    let common = polys.iter().skip(1).fold(polys[0].clone(), |acc, p| gcd(&acc, p));
    if !common.is_constant() {
        return zero_of(&common, None).map_or_else(|| Decision::Unknown("no zero of common factor found".into()), Decision::Point);
    }
    let v = (0..n).rev().find(|&v| polys.iter().any(|p| p.involves(v))).expect("nonconstant");
    let (with_v, rest): (Vec<P>, Vec<P>) = polys.into_iter().partition(|p| p.involves(v));
    if with_v.len() == 1 {
        let f = &with_v[0];
        let lc = f.lc_in(v);
        if lc.is_constant() {
            // f(x', ·) has a root at every x'
            return match decide(rest, n) {
                Decision::Point(x) => extend(f, v, x),
                other => other,
            };
        }
        if rest.is_empty() {
            return match avoiding_point(&lc, n) {
                Some(x) => extend(f, v, x),
                None => Decision::Unknown("no point avoiding the leading coefficient".into()),
            };
        }
        if rest.len() == 1 {
            let t = squarefree_part(&rest[0], rest[0].support_vars().last().copied().unwrap_or(0));
            if exact_div(&lc, &t).is_none() {
                // some component of V(t) leaves V(lc)
                let keep = exact_div(&t, &gcd(&t, &lc)).expect("gcd divides");
                return match zero_of(&keep, Some(&lc)) {
                    Some(x) => extend(f, v, x),
                    None => Decision::Unknown("no zero of the residual factor found".into()),
                };
            }
        }
        // otherwise split off the leading term and recurse
        let reductum = f - &(&lc * &MPoly::var(n, v).pow(f.degree_in(v) as u32));
        let mut next = rest.clone();
        next.push(lc);
        next.push(reductum);
        return match decide(next, n) {
            Decision::Empty(_) if rest.len() <= 1 => Decision::Empty("leading-coefficient split leaves no common zero".into()),
            Decision::Point(x) => Decision::Point(x),
            Decision::Empty(_) => Decision::Unknown("leading-coefficient split inconclusive".into()),
            u => u,
        };
    }
    let ip = (0..with_v.len()).min_by_key(|&i| (with_v[i].degree_in(v), with_v[i].num_terms())).expect("nonempty");
    let mut next = rest;
    for (i, q) in with_v.iter().enumerate() {
        if i != ip {
            next.push(resultant(&with_v[ip], q, v).expect("both involve v"));
        }
    }
    match decide(next, n) {
        Decision::Empty(_) => Decision::Empty("resultants have no common zero".into()),
        Decision::Point(x) => extend(&with_v[ip], v, x),
        u => u,
    }
}

/// Solve `f(x', v) = 0` for `v`, keeping the other entries of `x`.
fn extend(f: &P, v: usize, mut x: Vec<Complex64>) -> Decision {
    let Ok(u) = UniPoly::specialize(f, v, &x) else { return Decision::Unknown("arity".into()) };
    if u.is_zero() {
        return Decision::Point(x);
    }
    if u.degree() < 1 {
        return Decision::Unknown("back-substitution hit a nonzero constant".into());
    }
    match roots(&u, 1e-14) {
        Ok(rs) => {
            x[v] = rs.roots[0].0;
            Decision::Point(x)
        }
        Err(_) => Decision::Unknown("root finder failed in back-substitution".into()),
    }
}

const PROBES: [(i64, i64); 9] = [(0, 1), (1, 1), (-1, 1), (2, 1), (1, 2), (-2, 1), (3, 1), (-1, 3), (5, 2)];

fn probe_point(n: usize, k: usize) -> Vec<Complex64> {
    let mut idx = k;
    (0..n)
        .map(|_| {
            let (a, b) = PROBES[idx % PROBES.len()];
            idx /= PROBES.len();
            Complex64::new(a as f64 / b as f64, 0.0)
        })
        .collect()
}

fn avoiding_point(lc: &P, n: usize) -> Option<Vec<Complex64>> {
    (0..200).map(|k| probe_point(n, k)).find(|x| lc.evaluate(x).map(|c| c.norm() > 1e-8).unwrap_or(false))
}

/// Some zero of a nonconstant polynomial, preferring points where `avoid` is nonzero.
fn zero_of(f: &P, avoid: Option<&P>) -> Option<Vec<Complex64>> {
    let n = f.nvars();
    let v = *f.support_vars().last()?;
    for k in 0..200 {
        let x = probe_point(n, k);
        let Ok(u) = UniPoly::specialize(f, v, &x) else { return None };
        if u.degree() < 1 {
            continue;
        }
        let Ok(rs) = roots(&u, 1e-14) else { continue };
        for (r, _) in rs.roots {
            let mut y = x.clone();
            y[v] = r;
            if avoid.is_none_or(|a| a.evaluate(&y).map(|c| c.norm() > 1e-8).unwrap_or(false)) {
                return Some(y);
            }
        }
    }
    None
}

/// Complex Gauss–Newton multistart on the minors.
fn numeric_witness(polys: &[P], n: usize, seed: u64) -> Option<Vec<Complex64>> {
    let eqs: Vec<CompiledPoly<Complex64>> = polys.iter().filter(|p| !p.is_zero()).map(CompiledPoly::compile).collect();
    if eqs.is_empty() {
        return Some(vec![Complex64::new(0.0, 0.0); n]);
    }
    let sys = System::new(n, eqs);
    let w = vec![1.0; sys.len()];
    let cfg = NewtonConfig { max_steps: 100, tol: 1e-12 };
    for s in 0..100u64 {
        let mut rng = task_rng(seed, &[0x6b30, s]);
        let x0: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
            .collect();
        let r = gauss_newton(&sys, &w, x0, cfg);
        if r.converged && r.x.iter().all(|c| c.modulus() < 1e8) && residual_ok(polys, &r.x) {
            return Some(r.x);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly_map;

    #[test]
    fn broughton_empty() {
        let g = parse_poly_map("z + z^2*w", &["z", "w"]).unwrap();
        assert!(matches!(check_k0_empty(&g, 1), K0Verdict::Empty { .. }));
    }

    #[test]
    fn square_has_critical_line() {
        let g = parse_poly_map("z^2", &["z", "w"]).unwrap();
        match check_k0_empty(&g, 1) {
            K0Verdict::Nonempty { witness, critical_value, numeric } => {
                assert!(witness[0].norm() < 1e-12);
                assert!(critical_value[0].norm() < 1e-12);
                assert!(!numeric);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn section_seven_and_suspension_empty() {
        let g = parse_poly_map("z; z*t^2 + w", &["z", "w", "t"]).unwrap();
        assert!(matches!(check_k0_empty(&g, 1), K0Verdict::Empty { .. }));
        let s = parse_poly_map("z + z^2*w; e", &["z", "w", "e"]).unwrap();
        assert!(matches!(check_k0_empty(&s, 1), K0Verdict::Empty { .. }));
    }

    #[test]
    fn cusp_critical_point() {
        // z^3 - 3z + w^2: critical points (±1, 0)
        let g = parse_poly_map("z^3 - 3z + w^2", &["z", "w"]).unwrap();
        match check_k0_empty(&g, 1) {
            K0Verdict::Nonempty { witness, critical_value, .. } => {
                assert!((witness[0].norm() - 1.0).abs() < 1e-8 && witness[1].norm() < 1e-8);
                assert!((critical_value[0].norm() - 2.0).abs() < 1e-8);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn two_component_with_critical_points() {
        // (z, w^2 + t^2): minors 2w, 2t, 0 vanish along the z-axis
        let g = parse_poly_map("z; w^2 + t^2", &["z", "w", "t"]).unwrap();
        assert!(matches!(check_k0_empty(&g, 1), K0Verdict::Nonempty { .. }));
    }
}
