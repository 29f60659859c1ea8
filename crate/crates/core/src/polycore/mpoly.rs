//! Sparse multivariate polynomials in graded-lex order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gauss::{rat_to_f64, GaussRat};
use crate::error::Error;

/// Coefficient ring for [`MPoly`].
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn from_int(n: i64) -> Self;
    fn to_complex(&self) -> Complex64;
}

/// Coefficient rings where division by a nonzero element is exact.
pub trait ExactField: Coeff + for<'a> std::ops::Div<&'a Self, Output = Self> {}

impl Coeff for GaussRat {
    fn from_int(n: i64) -> Self {
        GaussRat::from_int(n)
    }
    fn to_complex(&self) -> Complex64 {
        self.to_c64()
    }
}

impl ExactField for GaussRat {}

impl Coeff for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(self), 0.0)
    }
}

impl ExactField for BigRational {}

impl Coeff for Complex64 {
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// Exponent vector. Ordered graded-lexicographically: total degree first, then
/// lexicographic with the first variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self.divides(o)`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial(o.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A polynomial in `nvars` variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<C: Coeff = GaussRat> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> MPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, C::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for arity {nvars}");
        let mut p = MPoly::zero(nvars);
        p.add_term(Monomial::var(nvars, i), C::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = MPoly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree() as i64).max().unwrap_or(-1)
    }

    /// Degree in one variable; `-1` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|m| m.0[var] as i64).max().unwrap_or(-1)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.degree_in(var) > 0
    }

    pub fn is_constant(&self) -> bool {
        self.degree() <= 0
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> C {
        self.terms.get(&Monomial::one(self.nvars)).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &C) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (mm, a) in &self.terms {
            out.add_term(mm.mul(m), a.clone() * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = MPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> Result<Self, Error> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange { index: var, arity: self.nvars });
        }
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut mm = m.clone();
            mm.0[var] -= 1;
            out.add_term(mm, c.clone() * &C::from_int(e as i64));
        }
        Ok(out)
    }

    /// Same as [`derivative`](Self::derivative) for indices known to be valid.
    pub fn diff(&self, var: usize) -> Self {
        self.derivative(var).expect("variable index in range")
    }

    /// Homogeneous part of highest total degree.
    pub fn leading_form(&self) -> Result<Self, Error> {
        let d = self.degree();
        if d < 0 {
            return Err(Error::ZeroPolynomial("leading form"));
        }
        Ok(MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() as i64 == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        })
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Substitute polynomial `replacements[j]` (all of a common arity `k`) for
    /// variable `j`. The result has arity `k`.
    pub fn compose(&self, replacements: &[MPoly<C>]) -> Result<Self, Error> {
        if replacements.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: replacements.len() });
        }
        let k = replacements.first().map(|r| r.nvars).unwrap_or(0);
        if replacements.iter().any(|r| r.nvars != k) {
            return Err(Error::ArityMismatch { expected: k, got: replacements.iter().map(|r| r.nvars).find(|&a| a != k).unwrap_or(k) });
        }
        // cache powers per variable
        let mut powers: Vec<Vec<MPoly<C>>> = replacements.iter().map(|r| vec![MPoly::one(k), r.clone()]).collect();
        let mut out = MPoly::zero(k);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(k, c.clone());
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[j].len() <= e as usize {
                    let next = &powers[j][powers[j].len() - 1] * &replacements[j];
                    powers[j].push(next);
                }
                t = &t * &powers[j][e as usize];
            }
            out = out + t;
        }
        Ok(out)
    }

    /// Replace one variable by a polynomial of the same arity.
    pub fn substitute(&self, var: usize, replacement: &MPoly<C>) -> Result<Self, Error> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange { index: var, arity: self.nvars });
        }
        if replacement.nvars != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: replacement.nvars });
        }
        let reps: Vec<MPoly<C>> = (0..self.nvars)
            .map(|j| if j == var { replacement.clone() } else { MPoly::var(self.nvars, j) })
            .collect();
        self.compose(&reps)
    }

    /// Specialize one variable to a constant; the arity is kept.
    pub fn specialize(&self, var: usize, value: &C) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut mm = m.clone();
            mm.0[var] = 0;
            let mut coef = c.clone();
            for _ in 0..e {
                coef = coef * value;
            }
            out.add_term(mm, coef);
        }
        out
    }

    /// Permute variables: variable `j` becomes variable `perm[j]` of a ring of
    /// arity `new_nvars`.
    pub fn remap(&self, perm: &[usize], new_nvars: usize) -> Self {
        assert_eq!(perm.len(), self.nvars);
        let mut out = MPoly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; new_nvars];
            for (j, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[perm[j]] += x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Coefficients as a polynomial in `var`: entry `k` multiplies `var^k`.
    /// Entries keep the full arity and are free of `var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly<C>> {
        let d = self.degree_in(var);
        if d < 0 {
            return Vec::new();
        }
        let mut out = vec![MPoly::zero(self.nvars); d as usize + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut mm = m.clone();
            mm.0[var] = 0;
            out[e].add_term(mm, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(var: usize, coeffs: &[MPoly<C>], nvars: usize) -> Self {
        let mut out = MPoly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut mm = m.clone();
                mm.0[var] += k as u32;
                out.add_term(mm, a.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `var`.
    pub fn lc_in(&self, var: usize) -> MPoly<C> {
        self.coeffs_in(var).pop().unwrap_or_else(|| MPoly::zero(self.nvars))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn to_complex(&self) -> MPoly<Complex64> {
        self.map_coeffs(|c| c.to_complex())
    }

    /// Exact evaluation in the coefficient ring.
    pub fn eval_exact(&self, point: &[C]) -> Result<C, Error> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t * x;
                }
            }
            acc = acc + &t;
        }
        Ok(acc)
    }

    /// Floating-point evaluation by nested Horner schemes, one variable at a time.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64, Error> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        let mut terms: Vec<(&[u32], Complex64)> = self.terms.iter().map(|(m, c)| (m.0.as_slice(), c.to_complex())).collect();
        // pure lex, descending: groups of equal leading exponents are contiguous
        terms.sort_by(|a, b| b.0.cmp(a.0));
        Ok(horner(&terms, 0, point))
    }

    /// Variables with positive degree.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.involves(v)).collect()
    }
}

fn horner(terms: &[(&[u32], Complex64)], var: usize, x: &[Complex64]) -> Complex64 {
    if terms.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    if var == x.len() {
        return terms.iter().map(|t| t.1).sum();
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev_e: Option<u32> = None;
    let mut i = 0;
    while i < terms.len() {
        let e = terms[i].0[var];
        let mut j = i;
        while j < terms.len() && terms[j].0[var] == e {
            j += 1;
        }
        let inner = horner(&terms[i..j], var + 1, x);
        acc = match prev_e {
            None => inner,
            Some(pe) => acc * x[var].powu(pe - e) + inner,
        };
        prev_e = Some(e);
        i = j;
    }
    acc * x[var].powu(prev_e.unwrap_or(0))
}

impl<C: Coeff> Add<&MPoly<C>> for &MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, o: &MPoly<C>) -> MPoly<C> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Coeff> Add for MPoly<C> {
    type Output = MPoly<C>;
    fn add(mut self, o: MPoly<C>) -> MPoly<C> {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<C: Coeff> Neg for &MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl<C: Coeff> Neg for MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        -&self
    }
}

impl<C: Coeff> Sub<&MPoly<C>> for &MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, o: &MPoly<C>) -> MPoly<C> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, o: MPoly<C>) -> MPoly<C> {
        &self - &o
    }
}

impl<C: Coeff> Mul<&MPoly<C>> for &MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, o: &MPoly<C>) -> MPoly<C> {
        assert_eq!(self.nvars, o.nvars, "arity mismatch in product");
        let mut out = MPoly::zero(self.nvars);
        for (ma, a) in &self.terms {
            for (mb, b) in &o.terms {
                out.add_term(ma.mul(mb), a.clone() * b);
            }
        }
        out
    }
}

impl<C: Coeff> Mul for MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, o: MPoly<C>) -> MPoly<C> {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse::parse_poly;

    fn p(s: &str) -> MPoly {
        parse_poly(s, &["z", "w"]).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let g = p("z + z^2*w");
        assert_eq!(g.derivative(0).unwrap(), p("1 + 2*z*w"));
        assert_eq!(g.derivative(1).unwrap(), p("z^2"));
        assert!(p("7").derivative(0).unwrap().is_zero());
        assert!(matches!(g.derivative(2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn leading_form_examples() {
        assert_eq!(p("z + z^2*w").leading_form().unwrap(), p("z^2*w"));
        assert_eq!(p("z").leading_form().unwrap(), p("z"));
        let q = parse_poly("z*t^2 + w", &["z", "w", "t"]).unwrap();
        assert_eq!(q.leading_form().unwrap(), parse_poly("z*t^2", &["z", "w", "t"]).unwrap());
        assert!(p("0").leading_form().is_err());
    }

    #[test]
    fn zero_degree_sentinel() {
        assert_eq!(p("0").degree(), -1);
        assert_eq!(p("3").degree(), 0);
    }

    #[test]
    fn evaluate_examples() {
        let g = p("z + z^2*w");
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(g.evaluate(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(), c(2.0, 0.0));
        assert_eq!(g.evaluate(&[c(0.0, 0.0), c(5.0, 0.0)]).unwrap(), c(0.0, 0.0));
        assert_eq!(g.evaluate(&[c(1.0, 1.0), c(0.0, 0.0)]).unwrap(), c(1.0, 1.0));
        assert!(matches!(g.evaluate(&[c(1.0, 0.0)]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn substitute_examples() {
        let zw = p("z*w");
        assert_eq!(zw.substitute(1, &p("z")).unwrap(), p("z^2"));
        assert_eq!(p("z").substitute(1, &p("z^3 + 4")).unwrap(), p("z"));
        assert!(zw.substitute(5, &p("z")).is_err());
    }

    #[test]
    fn cleared_linear_substitution_matches_evaluation() {
        // b·(a z + b w) written with u = b·w is a b z + b u; clearing w = (λ − a z)/b
        // means u ← λ − a z.
        let vars = ["z", "u", "a", "b", "l"];
        let q = |s: &str| parse_poly(s, &vars).unwrap();
        let cleared = q("a*b*z + b*u").substitute(1, &q("l - a*z")).unwrap();
        assert_eq!(cleared, q("b*l"));
        let mut state = 0x1234_5678u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 2000) as f64 / 1000.0 - 1.0
        };
        for _ in 0..10 {
            let x: Vec<Complex64> = (0..5).map(|_| Complex64::new(next(), next())).collect();
            let (z, a, b, l) = (x[0], x[2], x[3], x[4]);
            let w = (l - a * z) / b;
            let direct = b * (a * z + b * w);
            assert!((cleared.evaluate(&x).unwrap() - direct).norm() < 1e-12 * (1.0 + direct.norm()));
        }
    }

    #[test]
    fn horner_matches_naive() {
        let g = parse_poly("3*x^3*y - (2+i)*x*y^2*z + y^4 - 7 + z^5*x", &["x", "y", "z"]).unwrap();
        let pt = [Complex64::new(0.3, -1.1), Complex64::new(1.7, 0.2), Complex64::new(-0.4, 0.9)];
        let naive: Complex64 = g
            .terms()
            .map(|(m, c)| {
                let mut t = c.to_c64();
                for (x, &e) in pt.iter().zip(&m.0) {
                    t *= x.powu(e);
                }
                t
            })
            .sum();
        assert!((g.evaluate(&pt).unwrap() - naive).norm() < 1e-12);
    }
}
