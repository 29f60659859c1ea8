use num_complex::Complex64;
use num_traits::Zero;

use crate::error::Error;
use crate::polycore::{Coeff, MPoly};

/// Dense univariate polynomial, constant term first, trimmed so the leading
/// coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<C: Coeff = Complex64> {
    coeffs: Vec<C>,
}

impl<C: Coeff> UniPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| C::from_int(k as i64) * c).collect())
    }

    /// View a polynomial that involves only `var`.
    pub fn from_mpoly(p: &MPoly<C>, var: usize) -> Result<Self, Error> {
        if var >= p.nvars() {
            return Err(Error::IndexOutOfRange { index: var, arity: p.nvars() });
        }
        if p.support_vars().iter().any(|&v| v != var) {
            return Err(Error::UnsupportedShape(format!("polynomial is not univariate in variable {var}")));
        }
        Ok(UniPoly::new(p.coeffs_in(var).iter().map(|c| c.constant_term()).collect()))
    }

    pub fn to_complex(&self) -> UniPoly<Complex64> {
        UniPoly::new(self.coeffs.iter().map(|c| c.to_complex()).collect())
    }
}

impl UniPoly<Complex64> {
    /// Specialize every variable except `var` to the entries of `point`
    /// (the entry at `var` is ignored) and collect by powers of `var`.
    pub fn specialize<C: Coeff>(p: &MPoly<C>, var: usize, point: &[Complex64]) -> Result<Self, Error> {
        if point.len() != p.nvars() {
            return Err(Error::ArityMismatch { expected: p.nvars(), got: point.len() });
        }
        let coeffs = p.coeffs_in(var).iter().map(|c| c.evaluate(point)).collect::<Result<Vec<_>, _>>()?;
        Ok(UniPoly::new(coeffs))
    }

    /// Value and first derivative by a joint Horner pass.
    pub fn eval_with_derivative(&self, x: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    /// Running-error bound for Horner evaluation at `x`.
    pub fn eval_error_bound(&self, x: Complex64) -> f64 {
        let r = x.norm();
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c.norm();
        }
        4.0 * f64::EPSILON * (self.coeffs.len() as f64) * acc
    }

    /// Polynomial with the given roots, leading coefficient 1.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::zero(); c.len() + 1];
            for (k, &a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            c = next;
        }
        UniPoly::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_poly, GaussRat};

    #[test]
    fn trimming_and_degree() {
        let p = UniPoly::new(vec![Complex64::new(1.0, 0.0), Complex64::zero()]);
        assert_eq!(p.degree(), 0);
        assert_eq!(UniPoly::<Complex64>::new(vec![]).degree(), -1);
    }

    #[test]
    fn specialize_broughton() {
        let f = parse_poly("z + z^2*w", &["z", "w"]).unwrap();
        let u = UniPoly::specialize(&f, 0, &[Complex64::zero(), Complex64::new(2.0, 0.0)]).unwrap();
        assert_eq!(u.coeffs(), &[Complex64::zero(), Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]);
        let e = UniPoly::<GaussRat>::from_mpoly(&parse_poly("3z^2 - 1", &["z", "w"]).unwrap(), 0).unwrap();
        assert_eq!(e.degree(), 2);
        assert_eq!(e.eval(&GaussRat::from_int(2)), GaussRat::from_int(11));
        assert!(UniPoly::<GaussRat>::from_mpoly(&f, 0).is_err());
    }
}
