//! Sylvester resultants, discriminants and principal subresultant coefficients,
//! all by fraction-free elimination.

use crate::error::Error;
use crate::polycore::{ExactField, MPoly};

use super::exact::exact_div;

/// Determinant by Bareiss' fraction-free elimination; every division is exact.
pub fn bareiss_det<C: ExactField>(mut m: Vec<Vec<MPoly<C>>>, nvars: usize) -> MPoly<C> {
    let n = m.len();
    if n == 0 {
        return MPoly::one(nvars);
    }
    let mut negate = false;
    let mut prev = MPoly::one(nvars);
    for k in 0..n {
        if m[k][k].is_zero() {
            // smallest nonzero pivot keeps the intermediate expressions small
            let swap = (k + 1..n).filter(|&i| !m[i][k].is_zero()).min_by_key(|&i| m[i][k].num_terms());
            match swap {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return MPoly::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = if k == 0 { num } else { exact_div(&num, &prev).expect("Bareiss division is exact") };
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Rows of the subresultant matrix: `dg - k` shifted copies of `f` followed by
/// `df - k` shifted copies of `g`, with the first `df + dg - 2k` columns kept.
fn subresultant_matrix<C: ExactField>(f: &[MPoly<C>], g: &[MPoly<C>], k: usize, nvars: usize) -> Vec<Vec<MPoly<C>>> {
    let df = f.len() - 1;
    let dg = g.len() - 1;
    let size = df + dg - 2 * k;
    let mut rows = Vec::with_capacity(size);
    // column c represents x^{df+dg-k-1-c}; leading coefficients come first
    let mut push = |coeffs: &[MPoly<C>], copies: usize| {
        let d = coeffs.len() - 1;
        for s in 0..copies {
            let mut row = vec![MPoly::zero(nvars); size];
            for (e, c) in coeffs.iter().enumerate() {
                let col = s + (d - e);
                if col < size {
                    row[col] = c.clone();
                }
            }
            rows.push(row);
        }
    };
    push(f, dg - k);
    push(g, df - k);
    rows
}

/// `Res_var(f, g)` allowing degree zero in either argument.
pub(crate) fn resultant_any<C: ExactField>(f: &MPoly<C>, g: &MPoly<C>, var: usize) -> MPoly<C> {
    let n = f.nvars();
    if f.is_zero() || g.is_zero() {
        return MPoly::zero(n);
    }
    let fc = f.coeffs_in(var);
    let gc = g.coeffs_in(var);
    bareiss_det(subresultant_matrix(&fc, &gc, 0, n), n)
}

/// Sylvester resultant eliminating `var`.
pub fn resultant<C: ExactField>(f: &MPoly<C>, g: &MPoly<C>, var: usize) -> Result<MPoly<C>, Error> {
    check_var(f, var)?;
    if f.degree_in(var) < 1 || g.degree_in(var) < 1 {
        return Err(Error::DegreeZero);
    }
    Ok(resultant_any(f, g, var))
}

/// `(-1)^{d(d-1)/2} Res(f, ∂f) / lc(f)`.
pub fn discriminant<C: ExactField>(f: &MPoly<C>, var: usize) -> Result<MPoly<C>, Error> {
    check_var(f, var)?;
    let d = f.degree_in(var);
    if d < 1 {
        return Err(Error::DegreeZero);
    }
    let r = resultant_any(f, &f.diff(var), var);
    let q = exact_div(&r, &f.lc_in(var)).expect("leading coefficient divides the resultant");
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
}

/// Principal subresultant coefficients `psc_0 = Res, psc_1, …` of `f` and `g`
/// with respect to `var`, up to `psc_{deg g}` when `deg g < deg f`. Over a point where the leading
/// coefficients survive, the gcd degree is the first index with nonzero psc.
pub fn principal_subresultants<C: ExactField>(f: &MPoly<C>, g: &MPoly<C>, var: usize) -> Vec<MPoly<C>> {
    let n = f.nvars();
    let fc = f.coeffs_in(var);
    let gc = g.coeffs_in(var);
    if fc.is_empty() || gc.is_empty() {
        return Vec::new();
    }
    let (df, dg) = (fc.len() - 1, gc.len() - 1);
    let kmax = if df == dg { df } else { df.min(dg) + 1 };
    (0..kmax).map(|k| bareiss_det(subresultant_matrix(&fc, &gc, k, n), n)).collect()
}

fn check_var<C: ExactField>(f: &MPoly<C>, var: usize) -> Result<(), Error> {
    if var >= f.nvars() {
        return Err(Error::IndexOutOfRange { index: var, arity: f.nvars() });
    }
    Ok(())
}
