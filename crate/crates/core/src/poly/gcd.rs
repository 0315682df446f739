//! Multivariate gcd by primitive Euclidean recursion on the variables:
//! split off the content with respect to the smallest occurring variable,
//! recurse on the contents, and run a primitive pseudo-remainder sequence on
//! the primitive parts.

use super::{Monomial, SparsePoly};
use crate::error::{Error, Result};

pub(super) fn gcd(f: &SparsePoly, g: &SparsePoly) -> Result<SparsePoly> {
    f.check_same_ring(g)?;
    if f.is_zero() && g.is_zero() {
        return Err(Error::BothZero);
    }
    Ok(gcd_rec(f, g))
}

fn one_like(f: &SparsePoly) -> SparsePoly {
    SparsePoly::one(f.field, f.nvars)
}

fn gcd_rec(f: &SparsePoly, g: &SparsePoly) -> SparsePoly {
    if f.is_zero() {
        return g.normalize();
    }
    if g.is_zero() {
        return f.normalize();
    }
    if f.is_constant() || g.is_constant() {
        return one_like(f);
    }
    if f == g {
        return f.normalize();
    }
    let v = (0..f.nvars)
        .find(|&i| f.degree_in(i) > Some(0) || g.degree_in(i) > Some(0))
        .expect("nonconstant input has a variable");
    let cf = content(f, v);
    let cg = content(g, v);
    let c = gcd_rec(&cf, &cg);
    let pf = f.div_exact(&cf).expect("content divides");
    let pg = g.div_exact(&cg).expect("content divides");
    let h = primitive_gcd(pf, pg, v);
    (&c * &h).normalize()
}

/// Gcd of the coefficients of `f` viewed as a polynomial in `x_v`.
pub(crate) fn content(f: &SparsePoly, v: usize) -> SparsePoly {
    let mut acc = SparsePoly::zero(f.field, f.nvars);
    for c in f.coeffs_in(v).into_iter().rev() {
        if c.is_zero() {
            continue;
        }
        acc = gcd_rec(&acc, &c);
        if acc.is_constant() {
            break;
        }
    }
    acc
}

fn primitive_part(f: &SparsePoly, v: usize) -> SparsePoly {
    let c = content(f, v);
    f.div_exact(&c).expect("content divides")
}

fn lead_in(f: &SparsePoly, v: usize) -> (u32, SparsePoly) {
    let mut cs = f.coeffs_in(v);
    let d = cs.len() - 1;
    (d as u32, cs.swap_remove(d))
}

/// Sparse pseudo-remainder of `a` by `b` in `x_v`.
pub(crate) fn prem(a: &SparsePoly, b: &SparsePoly, v: usize) -> SparsePoly {
    let (db, lb) = lead_in(b, v);
    let mut r = a.clone();
    while !r.is_zero() {
        let (dr, lr) = lead_in(&r, v);
        if dr < db {
            break;
        }
        let shift = Monomial::var(r.nvars, v, dr - db);
        let t = (&lr * b).mul_term(&shift, &r.field.one());
        r = &(&lb * &r) - &t;
    }
    r
}

/// Gcd of two polynomials that are primitive with respect to `x_v`.
fn primitive_gcd(a: SparsePoly, b: SparsePoly, v: usize) -> SparsePoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        if b.degree_in(v) == Some(0) {
            return one_like(&a);
        }
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return b.normalize();
        }
        if r.degree_in(v) == Some(0) {
            return one_like(&a);
        }
        a = b;
        b = primitive_part(&r, v);
    }
}
