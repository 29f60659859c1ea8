//! Reduction of the fiber equations `G_i − t_i = 0` to a normal shape by
//! solving equations that are linear in one variable with constant
//! coefficient.

use crate::error::Error;
use crate::polycore::{GaussRat, MPoly, PolyMap};

type P = MPoly<GaussRat>;

/// Fiber equations in the ring `(x_1, …, x_n, t_1, …, t_m)` after eliminating
/// every variable that some equation determines linearly.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub n: usize,
    pub m: usize,
    /// Fiber variables still free, ascending.
    pub free: Vec<usize>,
    /// Equations left over, in the free variables and t.
    pub equations: Vec<P>,
    /// `(x_v, expression)` for every eliminated variable, expressions in the
    /// free variables and t.
    pub solved: Vec<(usize, P)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FiberShape {
    /// Every fiber is a graph over `free`, so ≅ ℂ^dim.
    Affine { dim: usize },
    /// Every fiber is the plane curve `h = 0` in the two free variables.
    PlaneCurve { vars: (usize, usize), h: P },
    /// Every fiber is `h = 0` in one free variable.
    Finite { var: usize, h: P },
}

impl Reduction {
    pub fn ring(&self) -> usize {
        self.n + self.m
    }

    /// Index of `t_i` in the ring.
    pub fn t_var(&self, i: usize) -> usize {
        self.n + i
    }

    pub fn shape(&self) -> Result<FiberShape, Error> {
        match (self.equations.len(), self.free.len()) {
            (0, d) => Ok(FiberShape::Affine { dim: d }),
            (1, 2) => Ok(FiberShape::PlaneCurve { vars: (self.free[0], self.free[1]), h: self.equations[0].clone() }),
            (1, 1) => Ok(FiberShape::Finite { var: self.free[0], h: self.equations[0].clone() }),
            (r, f) => Err(Error::UnsupportedShape(format!("{r} equations remain in {f} fiber variables after linear elimination"))),
        }
    }

    /// A polynomial on ℂⁿ lifted to the ring and restricted to the fiber.
    pub fn restrict(&self, p: &P) -> P {
        let lifted = lift(p, self.ring());
        self.solved.iter().fold(lifted, |acc, (v, e)| acc.substitute(*v, e).expect("same arity"))
    }
}

fn lift(p: &P, ring: usize) -> P {
    let perm: Vec<usize> = (0..p.nvars()).collect();
    p.remap(&perm, ring)
}

/// Variable `v` such that `e = a·x_v + rest` with `a` a nonzero constant and
/// `rest` free of `x_v`.
fn linear_var(e: &P, candidates: &[usize]) -> Option<usize> {
    candidates.iter().copied().find(|&v| e.degree_in(v) == 1 && e.lc_in(v).is_constant())
}

pub fn reduce(g: &PolyMap) -> Reduction {
    let (n, m) = (g.n(), g.m());
    let ring = n + m;
    let mut equations: Vec<P> = g
        .components()
        .iter()
        .enumerate()
        .map(|(i, c)| &lift(c, ring) - &MPoly::var(ring, n + i))
        .collect();
    let mut free: Vec<usize> = (0..n).collect();
    let mut solved: Vec<(usize, P)> = Vec::new();
    loop {
        let hit = equations.iter().enumerate().find_map(|(i, e)| linear_var(e, &free).map(|v| (i, v)));
        let Some((i, v)) = hit else { break };
        let e = equations.remove(i);
        let a = e.lc_in(v).constant_term();
        let rest = &e - &MPoly::var(ring, v).scale(&a);
        let inv = GaussRat::from_int(-1) * &a.inv().expect("nonzero");
        let expr = rest.scale(&inv);
        for q in equations.iter_mut() {
            *q = q.substitute(v, &expr).expect("same arity");
        }
        for (_, s) in solved.iter_mut() {
            *s = s.substitute(v, &expr).expect("same arity");
        }
        solved.push((v, expr));
        free.retain(|&u| u != v);
        equations.retain(|q| !q.is_zero());
    }
    Reduction { n, m, free, equations, solved }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly_map;

    #[test]
    fn broughton_is_a_plane_curve() {
        let g = parse_poly_map("z + z^2*w", &["z", "w"]).unwrap();
        let r = reduce(&g);
        assert!(matches!(r.shape().unwrap(), FiberShape::PlaneCurve { vars: (0, 1), .. }));
    }

    #[test]
    fn section_seven_is_affine() {
        let g = parse_poly_map("z; z*t^2 + w", &["z", "w", "t"]).unwrap();
        let r = reduce(&g);
        assert_eq!(r.shape().unwrap(), FiberShape::Affine { dim: 1 });
        assert_eq!(r.free, vec![2]);
        // w = t2 - t1·t^2 on the fiber
        let w = parse_poly_map("w", &["z", "w", "t"]).unwrap();
        let expect = crate::polycore::parse_poly("u - s*t^2", &["z", "w", "t", "s", "u"]).unwrap();
        assert_eq!(r.restrict(&w.components()[0]), expect);
    }

    #[test]
    fn suspension_drops_eta() {
        let g = parse_poly_map("z + z^2*w; e", &["z", "w", "e"]).unwrap();
        let r = reduce(&g);
        match r.shape().unwrap() {
            FiberShape::PlaneCurve { vars, h } => {
                assert_eq!(vars, (0, 1));
                assert!(!h.involves(2) && !h.involves(4));
            }
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn unsupported() {
        let g = parse_poly_map("z^2 + w^2 + t^2; z*w*t", &["z", "w", "t"]).unwrap();
        assert!(matches!(reduce(&g).shape(), Err(Error::UnsupportedShape(_))));
    }
}
