//! Real Jacobian of (G, ρ), its maximal minors, the critical-value check and
//! numeric sampling of the singular locus M_G.

mod k0;
mod sampler;

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::Zero;

use crate::numeric::CompiledPoly;
use crate::polycore::MPoly;
use crate::realify::RealPolyMap;

pub use k0::{check_k0_empty, K0Verdict};
pub use sampler::{local_dimension, random_slices, sample_on_slices, sample_singular_locus, SampleOutcome, SamplePoint, SamplerConfig, SamplerDiagnostics, Slice};

/// `(2m+1) × 2n` matrix of partial derivatives; the last row is ∇ρ.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianMatrix {
    nvars: usize,
    rows: Vec<Vec<MPoly<BigRational>>>,
    rho_weights: Vec<f64>,
}

impl JacobianMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.nvars
    }

    pub fn entry(&self, i: usize, j: usize) -> &MPoly<BigRational> {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<MPoly<BigRational>>] {
        &self.rows
    }

    /// Float matrix at a real point.
    pub fn eval(&self, x: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(self.nrows(), self.nvars, |i, j| CompiledPoly::<f64>::compile(&self.rows[i][j]).eval(x))
    }

    /// Float matrix of the components only, without the ∇ρ row.
    pub fn eval_map_rows(&self, x: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(self.nrows() - 1, self.nvars, |i, j| CompiledPoly::<f64>::compile(&self.rows[i][j]).eval(x))
    }
}

pub fn jacobian(g: &RealPolyMap) -> JacobianMatrix {
    let k = 2 * g.n();
    let mut rows: Vec<Vec<MPoly<BigRational>>> = g.components().iter().map(|c| (0..k).map(|j| c.diff(j)).collect()).collect();
    rows.push((0..k).map(|j| g.rho().diff(j)).collect());
    JacobianMatrix { nvars: k, rows, rho_weights: g.rho_spec().weights_f64() }
}

/// All maximal minors of a Jacobian, columns in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorSystem {
    nvars: usize,
    minors: Vec<MPoly<BigRational>>,
    columns: Vec<Vec<usize>>,
    rho_weights: Vec<f64>,
}

impl MinorSystem {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn minors(&self) -> &[MPoly<BigRational>] {
        &self.minors
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.minors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minors.is_empty()
    }

    pub fn rho_weights(&self) -> &[f64] {
        &self.rho_weights
    }

    /// ρ at a real point.
    pub fn rho(&self, x: &[f64]) -> f64 {
        self.rho_weights.iter().enumerate().map(|(j, a)| a * (x[2 * j] * x[2 * j] + x[2 * j + 1] * x[2 * j + 1])).sum()
    }

    /// Minors as float polynomials, dropping those that vanish identically.
    pub fn compiled(&self) -> Vec<CompiledPoly<f64>> {
        self.minors.iter().filter(|m| !m.is_zero()).map(CompiledPoly::compile).collect()
    }

    /// Largest absolute minor value at a real point.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.compiled().iter().map(|m| m.eval(x).abs()).fold(0.0, f64::max)
    }
}

/// Maximal minors by Laplace expansion along the last row, memoized over
/// column subsets.
pub fn minor_system(j: &JacobianMatrix) -> MinorSystem {
    let r = j.nrows();
    let c = j.ncols();
    assert!(r <= c, "more rows than columns");
    assert!(c < 64);
    let n = j.nvars;
    let mut level: HashMap<u64, MPoly<BigRational>> = HashMap::new();
    level.insert(0, MPoly::one(n));
    for row in 0..r {
        let mut next: HashMap<u64, MPoly<BigRational>> = HashMap::new();
        for mask in subsets(c, row + 1) {
            let mut acc = MPoly::zero(n);
            let cols: Vec<usize> = (0..c).filter(|b| mask & (1 << b) != 0).collect();
            for (idx, &col) in cols.iter().enumerate() {
                let a = &j.rows[row][col];
                if a.is_zero() {
                    continue;
                }
                let sub = &level[&(mask & !(1 << col))];
                if sub.is_zero() {
                    continue;
                }
                let term = a * sub;
                if (row + idx) % 2 == 0 {
                    acc = &acc + &term;
                } else {
                    acc = &acc - &term;
                }
            }
            next.insert(mask, acc);
        }
        level = next;
    }
    let columns = combinations(c, r);
    let minors = columns.iter().map(|cols| level[&cols.iter().fold(0u64, |m, &b| m | (1 << b))].clone()).collect();
    MinorSystem { nvars: n, minors, columns, rho_weights: j.rho_weights.clone() }
}

fn subsets(c: usize, k: usize) -> Vec<u64> {
    (0u64..(1 << c)).filter(|m| m.count_ones() as usize == k).collect()
}

/// k-subsets of 0..c in lexicographic order.
pub fn combinations(c: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, c: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..c {
            if c - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, c, k, cur, out);
            cur.pop();
        }
    }
    rec(0, c, k, &mut cur, &mut out);
    out
}

/// Exact rational point evaluation, used to confirm known points of M_G.
pub fn eval_rational(p: &MPoly<BigRational>, x: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (v, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                t *= &x[v];
            }
        }
        acc += t;
    }
    acc
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_poly, parse_poly_map};
    use crate::realify::{realify_map, split_re_im, RhoSpec};
    use num_traits::One;

    fn x4(s: &str) -> MPoly<BigRational> {
        split_re_im(&parse_poly(s, &["x1", "x2", "x3", "x4"]).unwrap()).0
    }

    fn broughton() -> JacobianMatrix {
        let g = parse_poly_map("z + z^2*w", &["z", "w"]).unwrap();
        jacobian(&realify_map(&g, &RhoSpec::unit(2)).unwrap())
    }

    #[test]
    fn broughton_matrix() {
        let j = broughton();
        assert_eq!((j.nrows(), j.ncols()), (3, 4));
        assert_eq!(j.entry(0, 0), &x4("1 + 2x1*x3 - 2x2*x4"));
        assert_eq!(j.entry(0, 2), &x4("x1^2 - x2^2"));
        assert_eq!(j.entry(1, 3), &x4("x1^2 - x2^2"));
        for k in 0..4 {
            assert_eq!(j.entry(2, k), &x4(&format!("2x{}", k + 1)));
        }
    }

    #[test]
    fn identity_matrix() {
        let g = parse_poly_map("z", &["z"]).unwrap();
        let j = jacobian(&realify_map(&g, &RhoSpec::unit(1)).unwrap());
        let v = ["x1", "x2"];
        let q = |s: &str| split_re_im(&parse_poly(s, &v).unwrap()).0;
        assert_eq!(j.rows(), &[vec![q("1"), q("0")], vec![q("0"), q("1")], vec![q("2x1"), q("2x2")]]);
    }

    #[test]
    fn minors_and_known_point() {
        let ms = minor_system(&broughton());
        assert_eq!(ms.columns(), &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
        let half = BigRational::new(1.into(), 2.into());
        let pt = [BigRational::one(), BigRational::zero(), half, BigRational::zero()];
        let zero = vec![BigRational::zero(); 4];
        for m in ms.minors() {
            assert!(eval_rational(m, &pt).is_zero());
            assert!(eval_rational(m, &zero).is_zero());
        }
        assert!(ms.minors().iter().all(|m| !m.is_zero()));
    }

    #[test]
    fn laplace_matches_bareiss() {
        let ms = minor_system(&broughton());
        let j = broughton();
        for (cols, m) in ms.columns().iter().zip(ms.minors()) {
            let sub: Vec<Vec<MPoly<BigRational>>> = j.rows().iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
            assert_eq!(&crate::elim::bareiss_det(sub, 4), m);
        }
    }

    #[test]
    fn combination_order() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(6, 5).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }
}
