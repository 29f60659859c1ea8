//! Exact division, gcd, content and squarefree parts over a field.

use crate::polycore::{ExactField, MPoly, Monomial};

/// `f / g` when `g` divides `f` exactly, by leading-term division in graded-lex
/// order.
pub fn exact_div<C: ExactField>(f: &MPoly<C>, g: &MPoly<C>) -> Option<MPoly<C>> {
    assert!(!g.is_zero(), "division by the zero polynomial");
    let n = f.nvars();
    let (gm, gc) = g.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
    if g.num_terms() == 1 {
        // monomial divisor: divide term by term
        let mut q = MPoly::zero(n);
        for (m, c) in f.terms() {
            if !gm.divides(m) {
                return None;
            }
            q.add_term(gm.quotient_of(m), c.clone() / &gc);
        }
        return Some(q);
    }
    let mut r = f.clone();
    let mut q = MPoly::zero(n);
    while let Some((rm, rc)) = r.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        if !gm.divides(&rm) {
            return None;
        }
        let qm = gm.quotient_of(&rm);
        let qc = rc / &gc;
        r = &r - &g.mul_monomial(&qm, &qc);
        q.add_term(qm, qc);
    }
    Some(q)
}

/// Scale so the graded-lex leading coefficient is one.
pub fn normalize<C: ExactField>(f: &MPoly<C>) -> MPoly<C> {
    match f.leading_term() {
        None => f.clone(),
        Some((_, c)) if c.is_one() => f.clone(),
        Some((_, c)) => {
            let inv = C::one() / c;
            f.scale(&inv)
        }
    }
}

/// Sparse pseudo-remainder of `f` by `g` in `var`: some `lc(g)^k · f mod g`.
pub fn prem<C: ExactField>(f: &MPoly<C>, g: &MPoly<C>, var: usize) -> MPoly<C> {
    let dg = g.degree_in(var);
    assert!(dg >= 0, "pseudo-division by zero");
    let lcg = g.lc_in(var);
    let n = f.nvars();
    let mut r = f.clone();
    loop {
        let dr = r.degree_in(var);
        if dr < dg || r.is_zero() {
            return r;
        }
        let lcr = r.lc_in(var);
        let shift = Monomial::var(n, var);
        let mut xs = MPoly::one(n);
        for _ in 0..(dr - dg) {
            xs = xs.mul_monomial(&shift, &C::one());
        }
        r = &(&lcg * &r) - &(&(&lcr * &xs) * g);
    }
}

/// Highest-index variable occurring in either polynomial.
fn main_var<C: ExactField>(f: &MPoly<C>, g: &MPoly<C>) -> Option<usize> {
    (0..f.nvars()).rev().find(|&v| f.involves(v) || g.involves(v))
}

/// Normalized greatest common divisor.
pub fn gcd<C: ExactField>(f: &MPoly<C>, g: &MPoly<C>) -> MPoly<C> {
    let n = f.nvars();
    if f.is_zero() {
        return normalize(g);
    }
    if g.is_zero() {
        return normalize(f);
    }
    let Some(v) = main_var(f, g) else {
        return MPoly::one(n);
    };
    if !f.involves(v) {
        return gcd(f, &content_in(g, v));
    }
    if !g.involves(v) {
        return gcd(&content_in(f, v), g);
    }
    let cf = content_in(f, v);
    let cg = content_in(g, v);
    let c = gcd(&cf, &cg);
    let mut a = exact_div(f, &cf).expect("content divides");
    let mut b = exact_div(g, &cg).expect("content divides");
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return normalize(&(&c * &primitive_part(&b, v)));
        }
        if r.degree_in(v) == 0 {
            return normalize(&c);
        }
        a = b;
        b = primitive_part(&r, v);
    }
}

/// Greatest common divisor of the coefficients of `f` viewed as a polynomial in
/// `var`; normalized, and `0` only for `f = 0`.
pub fn content_in<C: ExactField>(f: &MPoly<C>, var: usize) -> MPoly<C> {
    let mut acc = MPoly::zero(f.nvars());
    for c in f.coeffs_in(var) {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c);
        if acc.is_constant() {
            return normalize(&acc);
        }
    }
    acc
}

pub fn primitive_part<C: ExactField>(f: &MPoly<C>, var: usize) -> MPoly<C> {
    if f.is_zero() {
        return f.clone();
    }
    let c = content_in(f, var);
    normalize(&exact_div(f, &c).expect("content divides"))
}

/// Product of the distinct irreducible factors of `f`: the content in `var` is
/// made squarefree recursively, the primitive part by `p / gcd(p, ∂p)`.
pub fn squarefree_part<C: ExactField>(f: &MPoly<C>, var: usize) -> MPoly<C> {
    if f.is_zero() {
        return f.clone();
    }
    let c = content_in(f, var);
    let p = exact_div(f, &c).expect("content divides");
    let p_sf = if p.degree_in(var) > 0 {
        let g = gcd(&p, &p.diff(var));
        exact_div(&p, &g).expect("gcd divides")
    } else {
        p
    };
    let c_sf = match c.support_vars().last() {
        Some(&u) => squarefree_part(&c, u),
        None => MPoly::one(f.nvars()),
    };
    normalize(&(&c_sf * &p_sf))
}

/// Exact squarefree part and degree of a polynomial in a single variable.
pub fn distinct_root_count<C: ExactField>(f: &MPoly<C>, var: usize) -> usize {
    let s = squarefree_part(f, var);
    s.degree_in(var).max(0) as usize
}
