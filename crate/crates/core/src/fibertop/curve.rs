//! Exact Euler characteristic of an affine plane curve h(z, w) = 0.
//!
//! Vertical lines come from the content in w; the rest is a branched cover of
//! the z-line whose fiber sizes are read off principal subresultants, so no
//! root is ever approximated.

use crate::elim::{content_in, discriminant, exact_div, gcd, normalize, principal_subresultants, squarefree_part};
use crate::error::Error;
use crate::polycore::{GaussRat, MPoly};

type P = MPoly<GaussRat>;

const Z: usize = 0;
const W: usize = 1;

/// χ of `{f = t}` for `f` in two variables `(z, w)`.
pub fn euler_characteristic_plane_fiber(f: &P, t: &GaussRat) -> Result<i64, Error> {
    if f.nvars() != 2 {
        return Err(Error::ArityMismatch { expected: 2, got: f.nvars() });
    }
    let h = f - &MPoly::constant(2, t.clone());
    curve_chi(&h)
}

/// χ of `{h = 0}` for `h` in `(z, w)`.
pub fn curve_chi(h: &P) -> Result<i64, Error> {
    if h.is_zero() {
        return Err(Error::NotACurve("the polynomial vanishes identically".into()));
    }
    if h.is_constant() {
        return Err(Error::NotACurve("the fiber is empty".into()));
    }
    let h = squarefree_part(h, W);
    let c = content_in(&h, W);
    let lines = c.degree_in(Z).max(0);
    let r = exact_div(&h, &c).expect("content divides");
    if r.degree_in(W) <= 0 {
        return Ok(lines);
    }
    let d = r.degree_in(W);
    let disc = discriminant(&r, W)?;
    let p = squarefree_z(&(&r.lc_in(W) * &disc));
    let branch = p.degree_in(Z).max(0);
    let mut chi = d * (1 - branch) + count_fiber_points(&r, &p);
    if lines > 0 {
        chi += lines - count_fiber_points(&r, &c);
    }
    Ok(chi)
}

/// Squarefree part of a nonzero polynomial in z alone.
fn squarefree_z(q: &P) -> P {
    if q.is_constant() {
        return MPoly::one(2);
    }
    squarefree_part(q, Z)
}

/// Σ over the roots `b` of the squarefree `q(z)` of the number of distinct
/// roots of `r(b, w)`; `r` must be primitive in w.
pub fn count_fiber_points(r: &P, q: &P) -> i64 {
    if q.is_constant() {
        return 0;
    }
    let coeffs = r.coeffs_in(W);
    let mut rest = normalize(q);
    let mut total = 0;
    for j in (1..coeffs.len()).rev() {
        if rest.is_constant() {
            break;
        }
        let g = gcd(&rest, &coeffs[j]);
        let here = exact_div(&rest, &g).expect("gcd divides");
        if !here.is_constant() {
            let rj = MPoly::from_coeffs_in(W, &coeffs[..=j], 2);
            total += count_with_top(&rj, &here, j as i64);
        }
        rest = g;
    }
    // roots of every coefficient down to w^1 leave a nonzero constant: no points
    total
}

/// For `rj` of exact degree `j` at every root of `here`: Σ (j − deg gcd(rj, ∂rj)).
fn count_with_top(rj: &P, here: &P, j: i64) -> i64 {
    let psc = principal_subresultants(rj, &rj.diff(W), W);
    let mut rem = here.clone();
    let mut total = 0;
    for (k, s) in psc.iter().enumerate() {
        if rem.is_constant() {
            break;
        }
        let g = gcd(&rem, s);
        let fresh = exact_div(&rem, &g).expect("gcd divides");
        total += fresh.degree_in(Z).max(0) * (j - k as i64);
        rem = g;
    }
    debug_assert!(rem.is_constant(), "psc_(j-1) is a nonzero multiple of the leading coefficient");
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly;

    fn p(s: &str) -> P {
        parse_poly(s, &["z", "w"]).unwrap()
    }

    #[test]
    fn broughton_fibers() {
        let f = p("z + z^2*w");
        assert_eq!(euler_characteristic_plane_fiber(&f, &GaussRat::from_int(0)).unwrap(), 1);
        assert_eq!(euler_characteristic_plane_fiber(&f, &GaussRat::from_int(1)).unwrap(), 0);
        assert_eq!(euler_characteristic_plane_fiber(&f, &GaussRat::from_ratio(-3, 7)).unwrap(), 0);
    }

    #[test]
    fn parabola() {
        assert_eq!(euler_characteristic_plane_fiber(&p("w^2 - z"), &GaussRat::from_int(0)).unwrap(), 1);
    }

    #[test]
    fn line_arrangements() {
        // two crossing lines: 1 + 1 - 1
        assert_eq!(curve_chi(&p("z*w")).unwrap(), 1);
        // three concurrent lines through the origin
        assert_eq!(curve_chi(&p("z*w*(z - w)")).unwrap(), 1);
        // two parallel vertical lines
        assert_eq!(curve_chi(&p("z^2 - 1")).unwrap(), 2);
        // squared component is reduced first
        assert_eq!(curve_chi(&p("(w - z)^2*(w + 1)")).unwrap(), 1);
    }

    #[test]
    fn smooth_conics_and_cubics() {
        // affine smooth conic: C minus two points
        assert_eq!(curve_chi(&p("z*w - 1")).unwrap(), 0);
        assert_eq!(curve_chi(&p("z^2 + w^2 - 1")).unwrap(), 0);
        // smooth cubic with one point at infinity: torus minus a point
        assert_eq!(curve_chi(&p("w^2 - z^3 + z")).unwrap(), -1);
        // nodal cubic: rational with a node, one place at infinity
        assert_eq!(curve_chi(&p("w^2 - z^2*(z + 1)")).unwrap(), 0);
        // cusp: homeomorphic to C
        assert_eq!(curve_chi(&p("w^2 - z^3")).unwrap(), 1);
    }

    #[test]
    fn non_curves() {
        assert!(matches!(curve_chi(&p("0")), Err(Error::NotACurve(_))));
        assert!(matches!(curve_chi(&p("3")), Err(Error::NotACurve(_))));
    }
}
