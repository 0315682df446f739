//! Coefficient fields: prime fields `F_p` with a 64-bit modulus, their
//! extensions `F_{p^k}`, and the rationals. Every [`Scalar`] records which
//! field it belongs to.

mod ext;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::{self, pow_mod};
use ext::ExtModulus;

/// The coefficient field. A modulus of zero encodes the rationals.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldSpec {
    modulus: u64,
    ext: Option<&'static ExtModulus>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldKind {
    Prime(u64),
    /// `F_{p^k}` with `k >= 2`.
    Extension(u64, u32),
    Rational,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !primes::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec { modulus: p, ext: None })
    }

    /// `F_{p^k}`; `k = 1` gives `F_p`.
    pub fn extension(p: u64, k: u32) -> Result<Self> {
        if k == 1 {
            return FieldSpec::prime(p);
        }
        Ok(FieldSpec {
            modulus: p,
            ext: Some(ext::intern(p, k)?),
        })
    }

    pub const fn rational() -> Self {
        FieldSpec { modulus: 0, ext: None }
    }

    /// `F_p` for the largest prime below 2^62.
    pub const fn default_prime() -> Self {
        FieldSpec {
            modulus: primes::DEFAULT_PRIME,
            ext: None,
        }
    }

    pub fn kind(&self) -> FieldKind {
        match (self.modulus, self.ext) {
            (0, _) => FieldKind::Rational,
            (p, None) => FieldKind::Prime(p),
            (p, Some(m)) => FieldKind::Extension(p, m.k),
        }
    }

    /// `[K : F_p]`, and 1 for prime fields and the rationals.
    pub fn degree(&self) -> u32 {
        self.ext.map_or(1, |m| m.k)
    }

    /// The prime subfield (the field itself unless it is an extension).
    pub fn prime_subfield(&self) -> FieldSpec {
        FieldSpec {
            modulus: self.modulus,
            ext: None,
        }
    }

    /// Whether `other` is this field or its prime subfield, so that its
    /// elements embed here.
    pub fn contains(&self, other: &FieldSpec) -> bool {
        self == other || (other.ext.is_none() && other.modulus == self.modulus)
    }

    /// Exact number of elements, `None` when infinite.
    pub fn size_big(&self) -> Option<BigUint> {
        match self.modulus {
            0 => None,
            p => Some(BigUint::from(p).pow(self.degree())),
        }
    }

    /// The smallest field `F_{p^k}` over the same prime with at least `min`
    /// elements (the field itself if already large enough, or infinite).
    pub fn with_at_least(&self, min: &BigUint) -> FieldSpec {
        let Some(size) = self.size_big() else {
            return *self;
        };
        if &size >= min {
            return *self;
        }
        let p = self.modulus;
        let mut k = self.degree();
        let mut q = size;
        while &q < min {
            q *= p;
            k += 1;
        }
        FieldSpec::extension(p, k).expect("prime base")
    }

    /// The generator `w` of `F_p[w]/(g)`; `None` for prime fields and the rationals.
    pub fn generator(&self) -> Option<Scalar> {
        let m = self.ext?;
        let mut v = vec![0; m.k as usize];
        v[1] = 1;
        Some(Scalar::Ext { value: v, field: m })
    }

    /// 0 for the rationals, `p` for `F_p`.
    pub fn characteristic(&self) -> u64 {
        self.modulus
    }

    /// Number of elements (saturating at `u64::MAX`), `None` when infinite.
    pub fn size(&self) -> Option<u64> {
        self.size_big().map(|q| q.to_u64().unwrap_or(u64::MAX))
    }

    fn embed_residue(&self, r: u64) -> Scalar {
        match self.ext {
            None => Scalar::Prime {
                value: r,
                modulus: self.modulus,
            },
            Some(m) => {
                let mut v = vec![0; m.k as usize];
                v[0] = r;
                Scalar::Ext { value: v, field: m }
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_u64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        match self.modulus {
            0 => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            p => self.embed_residue(v % p),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self.modulus {
            0 => Scalar::Rational(BigRational::from_integer(v.clone())),
            p => {
                let m = BigInt::from(p);
                let mut r = v % &m;
                if r.is_negative() {
                    r += &m;
                }
                self.embed_residue(r.to_u64().expect("residue fits"))
            }
        }
    }

    /// `num / den` in this field; `None` if `den` vanishes in the field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Option<Scalar> {
        let d = self.from_bigint(den).inv()?;
        Some(&self.from_bigint(num) * &d)
    }

    /// The `k`-th element of the canonical enumeration `0, 1, 2, ...` of
    /// distinct field elements (wrapping in `F_p`). In `F_{p^k}` the base-`p`
    /// digits of `k` are the coefficients of `1, w, w^2, ...`.
    pub fn element(&self, k: u64) -> Scalar {
        self.element_big(&BigUint::from(k))
    }

    pub fn element_big(&self, k: &BigUint) -> Scalar {
        match self.ext {
            None => match self.modulus {
                0 => Scalar::Rational(BigRational::from_integer(BigInt::from(k.clone()))),
                p => self.from_u64((k % p).to_u64().expect("residue fits")),
            },
            Some(m) => {
                let mut x = k.clone();
                let value = (0..m.k)
                    .map(|_| {
                        let d = (&x % m.p).to_u64().expect("digit fits");
                        x /= m.p;
                        d
                    })
                    .collect();
                Scalar::Ext { value, field: m }
            }
        }
    }

    /// Uniform random element of `F_p`; for the rationals an integer in
    /// `[-2^20, 2^20]`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match (self.modulus, self.ext) {
            (0, _) => self.from_i64(rng.gen_range(-(1 << 20)..=(1 << 20))),
            (p, None) => self.from_u64(rng.gen_range(0..p)),
            (p, Some(m)) => Scalar::Ext {
                value: (0..m.k).map(|_| rng.gen_range(0..p)).collect(),
                field: m,
            },
        }
    }

    /// Random nonzero element with small representatives, convenient for fixtures.
    pub fn random_small_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Scalar {
        loop {
            let c = self.from_i64(rng.gen_range(-bound..=bound));
            if !c.is_zero() {
                return c;
            }
        }
    }

    pub fn check(&self, other: &FieldSpec) -> Result<()> {
        if self != other {
            return Err(Error::FieldMismatch(*self, *other));
        }
        Ok(())
    }

    /// Parses `a`, `-a` or `a/b` with integer `a`, `b` into this field. In
    /// an extension, any constant expression in the generator `w` is accepted.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        if self.ext.is_some() && s.contains('w') {
            let c = crate::poly::SparsePoly::parse(s, *self, 0)?;
            return Ok(c.constant_term());
        }
        let bad = || Error::Parse {
            pos: 0,
            msg: format!("bad scalar {s:?}"),
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                self.from_fraction(&n, &d).ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("denominator of {s:?} vanishes"),
                })
            }
            None => Ok(self.from_bigint(&s.parse().map_err(|_| bad())?)),
        }
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::default_prime()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F_{p}"),
            FieldKind::Extension(p, k) => write!(f, "F_{p}^{k}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum FieldRepr {
    Prime { p: u64 },
    Extension { p: u64, degree: u32 },
    Rational,
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.kind() {
            FieldKind::Prime(p) => FieldRepr::Prime { p },
            FieldKind::Extension(p, degree) => FieldRepr::Extension { p, degree },
            FieldKind::Rational => FieldRepr::Rational,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match FieldRepr::deserialize(d)? {
            FieldRepr::Prime { p } => FieldSpec::prime(p).map_err(serde::de::Error::custom),
            FieldRepr::Extension { p, degree } => FieldSpec::extension(p, degree).map_err(serde::de::Error::custom),
            FieldRepr::Rational => Ok(FieldSpec::rational()),
        }
    }
}

/// An element of a [`FieldSpec`], always in canonical form: a residue in
/// `[0, p)`, a reduced coefficient vector over `F_p`, or a reduced fraction.
///
/// Arithmetic operators panic when the operands live in different fields;
/// polynomial-level entry points validate fields and report [`Error::FieldMismatch`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Prime { value: u64, modulus: u64 },
    Ext { value: Vec<u64>, field: &'static ExtModulus },
    Rational(BigRational),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Prime { modulus, .. } => FieldSpec {
                modulus: *modulus,
                ext: None,
            },
            Scalar::Ext { field, .. } => FieldSpec {
                modulus: field.p,
                ext: Some(field),
            },
            Scalar::Rational(_) => FieldSpec::rational(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Prime { value, .. } => *value == 0,
            Scalar::Ext { value, .. } => value.iter().all(|&c| c == 0),
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Prime { value, .. } => *value == 1,
            Scalar::Ext { value, .. } => value[0] == 1 && value[1..].iter().all(|&c| c == 0),
            Scalar::Rational(q) => q.is_one(),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
            Scalar::Ext { value, field } => Scalar::Ext {
                value: field.inv(value).expect("nonzero"),
                field,
            },
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
        })
    }

    /// The image of this element in `target`, which must contain its field.
    pub fn lift(&self, target: FieldSpec) -> Scalar {
        let own = self.field();
        if own == target {
            return self.clone();
        }
        assert!(target.contains(&own), "{own} does not embed in {target}");
        match self {
            Scalar::Prime { value, .. } => target.embed_residue(*value),
            _ => unreachable!("only prime fields embed"),
        }
    }

    /// `Some(r)` when the element lies in the prime subfield of an `F_p` or `F_{p^k}`.
    pub fn prime_residue(&self) -> Option<u64> {
        match self {
            Scalar::Prime { value, .. } => Some(*value),
            Scalar::Ext { value, .. } => value[1..].iter().all(|&c| c == 0).then_some(value[0]),
            Scalar::Rational(_) => None,
        }
    }

    pub fn pow(&self, e: u64) -> Scalar {
        match self {
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: pow_mod(*value, e, *modulus),
                modulus: *modulus,
            },
            Scalar::Ext { .. } => {
                let mut acc = self.field().one();
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
            Scalar::Rational(q) => {
                let mut acc = BigRational::one();
                let mut base = q.clone();
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc *= &base;
                    }
                    e >>= 1;
                    if e > 0 {
                        base = &base * &base;
                    }
                }
                Scalar::Rational(acc)
            }
        }
    }

    /// `self^e` for an arbitrary-precision exponent. In a finite field of
    /// size `q` the exponent is reduced modulo `q - 1` first (for nonzero bases).
    pub fn pow_big(&self, e: &BigUint) -> Scalar {
        let Some(q) = self.field().size_big() else {
            return self.pow(e.to_u64().expect("rational exponent overflow"));
        };
        if e.is_zero() {
            return self.field().one();
        }
        if self.is_zero() {
            return self.clone();
        }
        let r = e % (q - 1u32);
        match r.to_u64() {
            Some(r) => self.pow(r),
            None => {
                let mut acc = self.field().one();
                for bit in (0..r.bits()).rev() {
                    acc = &acc * &acc;
                    if r.bit(bit) {
                        acc = &acc * self;
                    }
                }
                acc
            }
        }
    }

    /// Integer representative: the residue for `F_p`, `None` for non-integral rationals.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Prime { value, .. } => Some(BigInt::from(*value)),
            Scalar::Ext { .. } => self.prime_residue().map(BigInt::from),
            Scalar::Rational(q) => q.is_integer().then(|| q.to_integer()),
        }
    }

    /// Whether the printed form starts with a minus sign.
    pub(crate) fn is_negative_repr(&self) -> bool {
        match self {
            Scalar::Prime { value, modulus } => *value > modulus / 2,
            Scalar::Ext { field, .. } => self.prime_residue().is_some_and(|r| r > field.p / 2),
            Scalar::Rational(q) => q.is_negative(),
        }
    }

    fn same_field(&self, other: &Scalar) -> u64 {
        match (self, other) {
            (Scalar::Prime { modulus: a, .. }, Scalar::Prime { modulus: b, .. }) if a == b => *a,
            (Scalar::Rational(_), Scalar::Rational(_)) => 0,
            (Scalar::Ext { field: a, .. }, Scalar::Ext { field: b, .. }) if a == b => u64::MAX,
            _ => panic!("scalar field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    fn ext_parts(&self) -> (&[u64], &'static ExtModulus) {
        match self {
            Scalar::Ext { value, field } => (value, field),
            _ => unreachable!(),
        }
    }

    fn ext_binop(&self, rhs: &Scalar, op: fn(&ExtModulus, &[u64], &[u64]) -> Vec<u64>) -> Scalar {
        let (a, field) = self.ext_parts();
        let (b, _) = rhs.ext_parts();
        Scalar::Ext {
            value: op(field, a, b),
            field,
        }
    }
}

impl fmt::Display for Scalar {
    /// Residues above `p/2` print as negative integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Prime { value, modulus } => {
                if *value > modulus / 2 {
                    write!(f, "-{}", modulus - value)
                } else {
                    write!(f, "{value}")
                }
            }
            Scalar::Ext { value, field } => {
                if let Some(r) = self.prime_residue() {
                    return Scalar::Prime { value: r, modulus: field.p }.fmt(f);
                }
                let residue = |c: u64| FieldSpec::prime(field.p).expect("prime").from_u64(c);
                let mut first = true;
                write!(f, "(")?;
                for (i, &c) in value.iter().enumerate().rev() {
                    if c == 0 {
                        continue;
                    }
                    let s = residue(c);
                    let neg = s.is_negative_repr();
                    let abs = if neg { (-&s).to_string() } else { s.to_string() };
                    match (first, neg) {
                        (true, true) => write!(f, "-")?,
                        (true, false) => {}
                        (false, true) => write!(f, " - ")?,
                        (false, false) => write!(f, " + ")?,
                    }
                    first = false;
                    let mono = match i {
                        0 => String::new(),
                        1 => "w".to_string(),
                        _ => format!("w^{i}"),
                    };
                    match (abs == "1", mono.is_empty()) {
                        (_, true) => write!(f, "{abs}")?,
                        (true, false) => write!(f, "{mono}")?,
                        (false, false) => write!(f, "{abs}*{mono}")?,
                    }
                }
                write!(f, ")")
            }
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match self.same_field(rhs) {
            0 => match (self, rhs) {
                (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
                _ => unreachable!(),
            },
            u64::MAX => self.ext_binop(rhs, ExtModulus::add),
            p => {
                let (a, b) = (self.residue(), rhs.residue());
                let s = a as u128 + b as u128;
                Scalar::Prime {
                    value: (s % p as u128) as u64,
                    modulus: p,
                }
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match self.same_field(rhs) {
            0 => match (self, rhs) {
                (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
                _ => unreachable!(),
            },
            u64::MAX => self.ext_binop(rhs, ExtModulus::sub),
            p => {
                let (a, b) = (self.residue(), rhs.residue());
                Scalar::Prime {
                    value: if a >= b { a - b } else { p - (b - a) },
                    modulus: p,
                }
            }
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match self.same_field(rhs) {
            0 => match (self, rhs) {
                (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
                _ => unreachable!(),
            },
            u64::MAX => self.ext_binop(rhs, ExtModulus::mul),
            p => Scalar::Prime {
                value: mul_mod(self.residue(), rhs.residue(), p),
                modulus: p,
            },
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            Scalar::Ext { value, field } => Scalar::Ext {
                value: field.neg(value),
                field,
            },
            Scalar::Rational(q) => Scalar::Rational(-q),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Scalar {
    fn residue(&self) -> u64 {
        match self {
            Scalar::Prime { value, .. } => *value,
            _ => unreachable!(),
        }
    }

    /// Sign of the canonical rational (`F_p` elements report `Plus` unless zero).
    pub fn sign(&self) -> Sign {
        match self {
            Scalar::Prime { value: 0, .. } => Sign::NoSign,
            Scalar::Prime { .. } => Sign::Plus,
            Scalar::Ext { .. } if self.is_zero() => Sign::NoSign,
            Scalar::Ext { .. } => Sign::Plus,
            Scalar::Rational(q) => q.numer().sign(),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}
