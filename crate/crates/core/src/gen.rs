//! Seeded fixture generators and the named polynomial families used by the
//! test corpora and the CLI.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{Circuit, Depth4Circuit};
use crate::field::FieldSpec;
use crate::poly::{Monomial, SparsePoly};

fn random_exps<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_deg: u32) -> Vec<u32> {
    let mut exps = vec![0u32; nvars];
    if nvars == 0 {
        return exps;
    }
    let t = rng.gen_range(0..=max_deg);
    for _ in 0..t {
        exps[rng.gen_range(0..nvars)] += 1;
    }
    exps
}

/// Random nonzero polynomial with `1..=max_terms` terms of total degree
/// `<= max_deg` and small coefficients.
pub fn random_sparse_poly<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    nvars: usize,
    max_terms: usize,
    max_deg: u32,
) -> SparsePoly {
    loop {
        let nterms = rng.gen_range(1..=max_terms.max(1));
        let mut p = SparsePoly::zero(field, nvars);
        for _ in 0..nterms {
            let c = field.random_small_nonzero(rng, 9);
            p.add_term(Monomial::new(random_exps(rng, nvars, max_deg)), c);
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// Like [`random_sparse_poly`] but of total degree exactly `deg` (at least one
/// term attains it).
pub fn random_poly_of_degree<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    nvars: usize,
    max_terms: usize,
    deg: u32,
) -> SparsePoly {
    loop {
        let mut p = random_sparse_poly(rng, field, nvars, max_terms.saturating_sub(1).max(1), deg);
        let mut top = vec![0u32; nvars];
        for _ in 0..deg {
            top[rng.gen_range(0..nvars)] += 1;
        }
        p.add_term(Monomial::new(top), field.random_small_nonzero(rng, 9));
        if p.degree() == Some(deg) {
            return p;
        }
    }
}

/// Random depth-4 circuit with `k` rows of exactly `s` nonzero factors of
/// degree `<= delta`.
pub fn random_depth4<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    nvars: usize,
    k: usize,
    s: usize,
    delta: u32,
    max_terms: usize,
) -> Depth4Circuit {
    let rows = (0..k)
        .map(|_| {
            (0..s)
                .map(|_| random_sparse_poly(rng, field, nvars, max_terms, delta))
                .collect()
        })
        .collect();
    Depth4Circuit::new(field, nvars, delta, rows).expect("generated factors are valid")
}

/// A random circuit over `y_1..y_m` computing a nonzero polynomial of degree
/// exactly `deg`.
pub fn random_outer<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, m: usize, deg: u32, max_terms: usize) -> Circuit {
    Circuit::from_poly(&random_poly_of_degree(rng, field, m, max_terms, deg))
}

/// A family of `m` polynomials in `n` variables with transcendence degree at
/// most `r`: random polynomials of degree `<= delta` in `r` random linear forms.
pub fn random_low_trdeg_family<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    n: usize,
    m: usize,
    r: usize,
    delta: u32,
    max_terms: usize,
) -> Vec<SparsePoly> {
    let forms: Vec<SparsePoly> = (0..r)
        .map(|_| loop {
            let f = random_sparse_poly(rng, field, n, n + 1, 1);
            if f.degree() == Some(1) {
                break f;
            }
        })
        .collect();
    (0..m)
        .map(|_| loop {
            let outer = random_sparse_poly(rng, field, r, max_terms, delta);
            let f = outer.substitute(&forms).expect("same ring");
            if !f.is_zero() {
                break f;
            }
        })
        .collect()
}

/// `x1, x2 - x1^δ, ..., xn - x_{n-1}^δ, xn^δ`: trdeg `n`, and every annihilator
/// has degree at least `δ^n`.
pub fn tightness_family(field: FieldSpec, n: usize, delta: u32) -> Vec<SparsePoly> {
    let x = |i| SparsePoly::var(field, n, i);
    let mut out = vec![x(0)];
    for i in 1..n {
        out.push(&x(i) - &x(i - 1).pow(delta));
    }
    out.push(x(n - 1).pow(delta));
    out
}

/// `f_i = (x1^i + x2^2 + ... + xn^2) * xn^i` for `i = 1..m`; trdeg 3 for `n >= 4, m >= 3`.
pub fn quadric_family(field: FieldSpec, n: usize, m: usize) -> Vec<SparsePoly> {
    let x = |i| SparsePoly::var(field, n, i);
    let squares = (1..n).fold(SparsePoly::zero(field, n), |a, i| &a + &x(i).pow(2));
    (1..=m as u32)
        .map(|i| &(&x(0).pow(i) + &squares) * &x(n - 1).pow(i))
        .collect()
}

/// A simple, minimal `ΣΠΣ` identity with `k = 3`, `s = 2` in two variables:
/// `(x1 + x2)(x1 - x2) + (-x1)(x1) + (x2)(x2) = 0`.
pub fn depth3_identity(field: FieldSpec) -> Depth4Circuit {
    let p = |s: &str| SparsePoly::parse(s, field, 2).expect("fixture parses");
    Depth4Circuit::new(
        field,
        2,
        1,
        vec![
            vec![p("x1 + x2"), p("x1 - x2")],
            vec![p("-x1"), p("x1")],
            vec![p("x2"), p("x2")],
        ],
    )
    .expect("valid")
}

/// A random zero `ΣΠΣ` circuit with top fan-in 2: `T - T'` where `T'` permutes
/// and rescales the linear factors of `T`.
pub fn random_depth3_zero_pair<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, n: usize, s: usize) -> Depth4Circuit {
    let forms: Vec<SparsePoly> = (0..s)
        .map(|_| loop {
            let f = random_sparse_poly(rng, field, n, n + 1, 1);
            if f.degree() == Some(1) {
                break f;
            }
        })
        .collect();
    let mut second: Vec<SparsePoly> = forms.clone();
    second.shuffle(rng);
    let c = field.random_small_nonzero(rng, 5);
    second[0] = second[0].scale(&c);
    second[1 % s] = second[1 % s].scale(&(-&c.inv().expect("nonzero")));
    if s == 1 {
        second[0] = forms[0].scale(&field.from_i64(-1));
    }
    Depth4Circuit::new(field, n, 1, vec![forms, second]).expect("valid")
}

/// A random depth-4 circuit whose rows all share one extra nonconstant factor
/// of degree `<= delta`, so its gcd part is nontrivial.
pub fn random_depth4_with_gcd<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    nvars: usize,
    k: usize,
    s: usize,
    delta: u32,
) -> Depth4Circuit {
    let c = random_depth4(rng, field, nvars, k, s, delta, 3);
    let deg = rng.gen_range(1..=delta);
    let g = random_poly_of_degree(rng, field, nvars, 3, deg);
    let rows = c
        .rows()
        .iter()
        .map(|r| std::iter::once(g.clone()).chain(r.iter().cloned()).collect())
        .collect();
    Depth4Circuit::new(field, nvars, delta, rows).expect("generated factors are valid")
}
