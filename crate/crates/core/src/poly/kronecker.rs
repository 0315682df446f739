//! Univariate polynomials with arbitrary-precision exponents and the
//! Kronecker substitution `x_i -> t^(D^i)`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::{Monomial, SparsePoly};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// A sparse polynomial in one variable `t` whose exponents may exceed any
/// machine word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseUnivariate {
    field: FieldSpec,
    terms: BTreeMap<BigUint, Scalar>,
}

impl SparseUnivariate {
    pub fn zero(field: FieldSpec) -> Self {
        SparseUnivariate {
            field,
            terms: BTreeMap::new(),
        }
    }

    /// From `(exponent, coefficient)` pairs; duplicates are combined.
    pub fn from_terms<I: IntoIterator<Item = (BigUint, Scalar)>>(field: FieldSpec, terms: I) -> Self {
        let mut out = Self::zero(field);
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> Option<&BigUint> {
        self.terms.keys().next_back()
    }

    pub fn add_term(&mut self, e: BigUint, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(e, s);
        }
    }

    /// Converts to a one-variable [`SparsePoly`] when every exponent fits in `u32`.
    pub fn to_sparse_poly(&self) -> Result<SparsePoly> {
        let mut p = SparsePoly::zero(self.field, 1);
        for (e, c) in &self.terms {
            let e = e.to_u32().ok_or(Error::ExponentOverflow)?;
            p.add_term(Monomial::new(vec![e]), c.clone());
        }
        Ok(p)
    }

    pub fn from_sparse_poly(p: &SparsePoly) -> Result<Self> {
        if p.nvars() != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                got: p.nvars(),
            });
        }
        Ok(Self::from_terms(
            p.field(),
            p.terms().map(|(m, c)| (BigUint::from(m.exps()[0]), c.clone())),
        ))
    }
}

/// `x_i -> t^(D^i)` for `i = 1..n`. Requires `deg f < D`, which makes the map
/// injective on monomials.
pub fn kronecker(f: &SparsePoly, base: &BigUint) -> Result<SparseUnivariate> {
    if let Some(d) = f.degree() {
        if BigUint::from(d) >= *base {
            return Err(Error::KroneckerDegree {
                degree: d,
                base: base.to_string(),
            });
        }
    }
    Ok(kronecker_unchecked(f, base))
}

/// Same map without the injectivity precondition; distinct monomials may collide.
pub fn kronecker_unchecked(f: &SparsePoly, base: &BigUint) -> SparseUnivariate {
    let mut powers = Vec::with_capacity(f.nvars());
    let mut acc = BigUint::one();
    for _ in 0..f.nvars() {
        acc *= base;
        powers.push(acc.clone());
    }
    SparseUnivariate::from_terms(
        f.field(),
        f.terms().map(|(m, c)| {
            let e: BigUint = m
                .exps()
                .iter()
                .zip(&powers)
                .map(|(&e, d)| d * e)
                .sum();
            (e, c.clone())
        }),
    )
}
