//! Realification of complex maps: the map in real coordinates, the weight
//! function ρ and φ = 1/(1+ρ).
//!
//! Variable `z_j` (0-based) becomes `x_{2j} + i·x_{2j+1}`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::Error;
use crate::polycore::gauss::{approx_rational, rat_to_f64};
use crate::polycore::{GaussRat, MPoly, PolyMap};

/// Weights of ρ = Σ a_j |z_j|².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoSpec {
    weights: Vec<BigRational>,
}

impl RhoSpec {
    pub fn new(weights: Vec<BigRational>) -> Result<Self, Error> {
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::InvalidRho(format!("a_i >= 0 violated (found {w})")));
        }
        if weights.iter().all(|w| w.is_zero()) {
            return Err(Error::InvalidRho("Σ a_i² ≠ 0 violated".into()));
        }
        Ok(RhoSpec { weights })
    }

    pub fn unit(n: usize) -> Self {
        RhoSpec { weights: vec![BigRational::from_integer(1.into()); n] }
    }

    pub fn from_ints(w: &[i64]) -> Result<Self, Error> {
        RhoSpec::new(w.iter().map(|&a| BigRational::from_integer(a.into())).collect())
    }

    /// ρ_L = Σ |a_i|·|z_i|² for a linear form L = Σ a_i z_i. Moduli that are not
    /// rational are replaced by continued-fraction approximations with
    /// denominator at most 10⁶.
    pub fn from_linear_form(coeffs: &[GaussRat]) -> Result<Self, Error> {
        let w = coeffs
            .iter()
            .map(|a| {
                let n2 = a.norm_sqr();
                exact_sqrt(&n2).unwrap_or_else(|| approx_rational(rat_to_f64(&n2).sqrt(), 1_000_000))
            })
            .collect();
        RhoSpec::new(w)
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(rat_to_f64).collect()
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Smallest weight as a float.
    pub fn min_weight(&self) -> f64 {
        self.weights_f64().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// ρ at a real point of length 2n.
    pub fn value(&self, x: &[f64]) -> f64 {
        self.weights_f64().iter().enumerate().map(|(j, a)| a * (x[2 * j] * x[2 * j] + x[2 * j + 1] * x[2 * j + 1])).sum()
    }

    /// ρ as a polynomial in 2n real variables.
    pub fn polynomial(&self) -> MPoly<BigRational> {
        let k = 2 * self.n();
        let mut out = MPoly::zero(k);
        for (j, a) in self.weights.iter().enumerate() {
            for v in [2 * j, 2 * j + 1] {
                let mut e = vec![0; k];
                e[v] = 2;
                out.add_term(crate::polycore::Monomial(e), a.clone());
            }
        }
        out
    }
}

impl Serialize for RhoSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.weights.iter().map(|w| w.to_string()))
    }
}

fn exact_sqrt(q: &BigRational) -> Option<BigRational> {
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// φ = 1/(1+ρ) at a real point.
pub fn phi_value(rho: &RhoSpec, point: &[f64]) -> f64 {
    1.0 / (1.0 + rho.value(point))
}

/// A complex map written in real coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPolyMap {
    n: usize,
    /// Re G_1, Im G_1, Re G_2, …
    components: Vec<MPoly<BigRational>>,
    rho: MPoly<BigRational>,
    rho_spec: RhoSpec,
}

impl RealPolyMap {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.components.len() / 2
    }

    pub fn components(&self) -> &[MPoly<BigRational>] {
        &self.components
    }

    pub fn rho(&self) -> &MPoly<BigRational> {
        &self.rho
    }

    pub fn rho_spec(&self) -> &RhoSpec {
        &self.rho_spec
    }

    /// Real variable names x1, …, x_{2n}.
    pub fn var_names(&self) -> Vec<String> {
        (1..=2 * self.n).map(|k| format!("x{k}")).collect()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>, Error> {
        let pt: Vec<num_complex::Complex64> = x.iter().map(|&v| num_complex::Complex64::new(v, 0.0)).collect();
        self.components.iter().map(|c| c.evaluate(&pt).map(|v| v.re)).collect()
    }
}

/// Real and imaginary parts of a polynomial in real variables.
pub fn split_re_im(p: &MPoly<GaussRat>) -> (MPoly<BigRational>, MPoly<BigRational>) {
    let n = p.nvars();
    let mut re = MPoly::zero(n);
    let mut im = MPoly::zero(n);
    for (m, c) in p.terms() {
        re.add_term(m.clone(), c.re.clone());
        im.add_term(m.clone(), c.im.clone());
    }
    (re, im)
}

/// Substitute `z_j = x_{2j} + i·x_{2j+1}` into a polynomial in n complex variables.
pub fn realify_poly(p: &MPoly<GaussRat>) -> (MPoly<BigRational>, MPoly<BigRational>) {
    let n = p.nvars();
    let reps: Vec<MPoly<GaussRat>> = (0..n)
        .map(|j| &MPoly::var(2 * n, 2 * j) + &MPoly::var(2 * n, 2 * j + 1).scale(&GaussRat::i()))
        .collect();
    split_re_im(&p.compose(&reps).expect("arity n"))
}

pub fn realify_map(g: &PolyMap, rho: &RhoSpec) -> Result<RealPolyMap, Error> {
    if rho.n() != g.n() {
        return Err(Error::ArityMismatch { expected: g.n(), got: rho.n() });
    }
    let mut components = Vec::with_capacity(2 * g.m());
    for c in g.components() {
        let (re, im) = realify_poly(c);
        components.push(re);
        components.push(im);
    }
    Ok(RealPolyMap { n: g.n(), components, rho: rho.polynomial(), rho_spec: rho.clone() })
}

/// Lift an exact real polynomial back to Gaussian rational coefficients.
pub fn to_gauss(p: &MPoly<BigRational>) -> MPoly<GaussRat> {
    p.map_coeffs(|c| GaussRat::real(c.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_poly, parse_poly_map};

    fn x4(s: &str) -> MPoly<BigRational> {
        let p = parse_poly(s, &["x1", "x2", "x3", "x4"]).unwrap();
        split_re_im(&p).0
    }

    #[test]
    fn broughton_display() {
        let g = parse_poly_map("z + z^2*w", &["z", "w"]).unwrap();
        let r = realify_map(&g, &RhoSpec::unit(2)).unwrap();
        assert_eq!(r.components()[0], x4("x1 + x1^2*x3 - x2^2*x3 - 2*x1*x2*x4"));
        assert_eq!(r.components()[1], x4("x2 + 2*x1*x2*x3 + x1^2*x4 - x2^2*x4"));
        assert_eq!(r.rho(), &x4("x1^2 + x2^2 + x3^2 + x4^2"));
    }

    #[test]
    fn identity_map() {
        let g = parse_poly_map("z", &["z"]).unwrap();
        let r = realify_map(&g, &RhoSpec::unit(1)).unwrap();
        let v = ["x1", "x2"];
        assert_eq!(r.components()[0], split_re_im(&parse_poly("x1", &v).unwrap()).0);
        assert_eq!(r.components()[1], split_re_im(&parse_poly("x2", &v).unwrap()).0);
    }

    #[test]
    fn zeta_weight() {
        let g = parse_poly_map("z; z*t^2 + w", &["z", "w", "t"]).unwrap();
        let r = realify_map(&g, &RhoSpec::from_ints(&[0, 0, 1]).unwrap()).unwrap();
        let v = ["x1", "x2", "x3", "x4", "x5", "x6"];
        assert_eq!(r.rho(), &split_re_im(&parse_poly("x5^2 + x6^2", &v).unwrap()).0);
    }

    #[test]
    fn rho_validation() {
        assert!(matches!(RhoSpec::from_ints(&[0, 0]), Err(Error::InvalidRho(m)) if m.contains("Σ a_i² ≠ 0 violated")));
        assert!(RhoSpec::from_ints(&[1, -1]).is_err());
        let l = RhoSpec::from_linear_form(&[GaussRat::new(BigRational::from_integer(3.into()), BigRational::from_integer(4.into())), GaussRat::from_int(0), GaussRat::from_int(2)]);
        let l = l.unwrap();
        assert_eq!(l.weights()[0], BigRational::from_integer(5.into()));
        assert_eq!(l.weights()[2], BigRational::from_integer(2.into()));
    }

    #[test]
    fn phi_examples() {
        let rho = RhoSpec::unit(2);
        assert_eq!(phi_value(&rho, &[0.0; 4]), 1.0);
        assert_eq!(phi_value(&rho, &[1.0, 1.0, 1.0, 0.0]), 0.25);
        let mut last = 1.0;
        for k in 1..20 {
            let v = phi_value(&rho, &[k as f64 * 10.0, 0.0, 0.0, 0.0]);
            assert!(v < last && v > 0.0);
            last = v;
        }
        assert!(last < 1e-4);
    }
}
