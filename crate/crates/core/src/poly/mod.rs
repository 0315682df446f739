//! Sparse multivariate polynomials over a [`FieldSpec`].
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`] in graded lexicographic
//! order, so the last entry is the leading term. Zero coefficients are never
//! stored.

mod gcd;
mod kronecker;
mod resultant;
mod text;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use kronecker::{kronecker, kronecker_unchecked, SparseUnivariate};
pub use text::Vars;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Exponent vector. Ordering is graded lexicographic with `x1 > x2 > ...`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial {
    // field order matters for the derived `Ord`: degree first, then lex
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { degree, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            degree: 0,
            exps: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Monomial { degree: e, exps }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial {
            degree: self.degree - other.degree,
            exps,
        })
    }

    fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut exps = self.exps.clone();
        let degree = self.degree - exps[i] + e;
        exps[i] = e;
        Monomial { degree, exps }
    }
}

/// A multivariate polynomial in `nvars` variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SparsePoly {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SparsePoly {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        SparsePoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: FieldSpec, nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(field: FieldSpec, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(field: FieldSpec, nvars: usize, i: usize) -> Self {
        Self::monomial(field, Monomial::var(nvars, i, 1), field.one())
    }

    pub fn monomial(field: FieldSpec, m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(field, m.nvars());
        p.add_term(m, c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, combining
    /// duplicates and dropping zeros.
    pub fn from_terms<I>(field: FieldSpec, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let mut p = Self::zero(field, nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    got: exps.len(),
                });
            }
            field.check(&c.field())?;
            p.add_term(Monomial::new(exps), c);
        }
        Ok(p)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Degree in variable `i`; `None` for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exps[i]).max()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.values().next_back()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// The constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Variables that occur with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m.exps[i] > 0))
            .collect()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_same_ring(&self, other: &SparsePoly) -> Result<()> {
        self.field.check(&other.field)?;
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    fn assert_same_ring(&self, other: &SparsePoly) {
        if let Err(e) = self.check_same_ring(other) {
            panic!("polynomial ring mismatch: {e}");
        }
    }

    pub fn checked_add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_same_ring(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_same_ring(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_same_ring(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Scalar) -> SparsePoly {
        if c.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        SparsePoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &Scalar) -> SparsePoly {
        SparsePoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut acc = Self::one(self.field, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Scales to leading coefficient 1 (graded-lex); zero stays zero.
    pub fn normalize(&self) -> SparsePoly {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(Scalar::is_one)
    }

    /// Exact value at `point`.
    /// Value at `point`. The coordinates may also lie in an extension of the
    /// coefficient field, in which case the coefficients are embedded.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let target = point.first().map_or(self.field, Scalar::field);
        if !target.contains(&self.field) {
            return Err(Error::FieldMismatch(self.field, target));
        }
        for v in point {
            target.check(&v.field())?;
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[Scalar]) -> Scalar {
        let target = point.first().map_or(self.field, Scalar::field);
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut t = c.lift(target);
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    t = &t * &x.pow(e as u64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// The same polynomial over `target`, which must contain its field.
    pub fn lift(&self, target: FieldSpec) -> Result<SparsePoly> {
        if !target.contains(&self.field) {
            return Err(Error::FieldMismatch(self.field, target));
        }
        Ok(SparsePoly {
            field: target,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.lift(target))).collect(),
        })
    }

    /// Formal partial derivative in variable `i` (0-based). In characteristic
    /// `p` the factor `e` is reduced mod `p`, so `x^p` differentiates to zero.
    pub fn derivative(&self, i: usize) -> Result<SparsePoly> {
        if i >= self.nvars {
            return Err(Error::VariableOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let factor = self.field.from_u64(e as u64);
            out.add_term(m.with_exp(i, e - 1), c * &factor);
        }
        Ok(out)
    }

    /// Applies the ring homomorphism `x_i -> images[i]`. The images may have
    /// coefficients in an extension of this polynomial's field.
    pub fn substitute(&self, images: &[SparsePoly]) -> Result<SparsePoly> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let (field, nvars) = match images.first() {
            Some(g) => (g.field, g.nvars),
            None => {
                return Ok(Self::constant(self.field, 0, self.constant_term()));
            }
        };
        if !field.contains(&self.field) {
            return Err(Error::FieldMismatch(self.field, field));
        }
        for g in images {
            g.check_same_ring(&images[0])?;
        }
        let mut powers: HashMap<(usize, u32), SparsePoly> = HashMap::new();
        let mut acc = Self::zero(field, nvars);
        for (m, c) in &self.terms {
            let mut t = Self::constant(field, nvars, c.lift(field));
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers.entry((i, e)).or_insert_with(|| images[i].pow(e));
                t = &t * p;
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Coefficients as a polynomial in variable `v`: entry `k` is the
    /// coefficient of `x_v^k`, a polynomial free of `x_v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<SparsePoly> {
        let Some(deg) = self.degree_in(v) else {
            return Vec::new();
        };
        let mut out = vec![Self::zero(self.field, self.nvars); deg as usize + 1];
        for (m, c) in &self.terms {
            let e = m.exps[v] as usize;
            out[e].terms.insert(m.with_exp(v, 0), c.clone());
        }
        out
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(field: FieldSpec, nvars: usize, v: usize, coeffs: &[SparsePoly]) -> Self {
        let mut out = Self::zero(field, nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                out.add_term(m.with_exp(v, k as u32), a.clone());
            }
        }
        out
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide `self`.
    pub fn div_exact(&self, g: &SparsePoly) -> Option<SparsePoly> {
        self.assert_same_ring(g);
        let (lm, lc) = g.leading_term()?;
        let lc_inv = lc.inv().expect("nonzero");
        let mut q = Self::zero(self.field, self.nvars);
        let mut r = self.clone();
        while let Some((m, c)) = r.leading_term() {
            let qm = m.div(lm)?;
            let qc = c * &lc_inv;
            r = &r - &g.mul_term(&qm, &qc);
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Re-embeds into a ring with `nvars` variables via `map[i]` = new index of `x_i`.
    pub fn rename(&self, nvars: usize, map: &[usize]) -> SparsePoly {
        let mut out = Self::zero(self.field, nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0; nvars];
            for (i, &e) in m.exps.iter().enumerate() {
                exps[map[i]] += e;
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        out
    }

    pub fn display_with(&self, vars: Vars) -> text::Display<'_> {
        text::Display { poly: self, vars }
    }

    pub fn parse(text: &str, field: FieldSpec, nvars: usize) -> Result<SparsePoly> {
        text::parse(text, field, Some(nvars), Vars::X)
    }

    pub fn parse_with(text: &str, field: FieldSpec, nvars: usize, vars: Vars) -> Result<SparsePoly> {
        text::parse(text, field, Some(nvars), vars)
    }

    /// Parses with the number of variables inferred from the largest index seen.
    pub fn parse_infer(text: &str, field: FieldSpec, vars: Vars) -> Result<SparsePoly> {
        text::parse(text, field, None, vars)
    }

    /// Largest variable count referenced by `text` (for inferring arity of lists).
    pub fn max_var_index(text: &str, vars: Vars) -> Result<usize> {
        text::max_nvars(text, vars)
    }

    pub fn gcd(&self, other: &SparsePoly) -> Result<SparsePoly> {
        gcd::gcd(self, other)
    }

    pub fn resultant(&self, other: &SparsePoly, var: usize) -> Result<SparsePoly> {
        resultant::resultant(self, other, var)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.display_with(Vars::X), f)
    }
}

impl<'a> Add<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.assert_same_ring(rhs);
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self.assert_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.assert_same_ring(rhs);
        let mut out = SparsePoly::zero(self.field, self.nvars);
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<SparsePoly> for SparsePoly {
            type Output = SparsePoly;
            fn $m(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests;
