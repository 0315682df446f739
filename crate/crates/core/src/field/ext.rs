//! Arithmetic in `F_p[w] / (g(w))` for a canonical irreducible `g`.
//!
//! Elements are coefficient vectors of length `k`, lowest degree first. For
//! each `(p, k)` the modulus is the first monic irreducible polynomial in a
//! fixed enumeration, so the field is reproducible from `(p, k)` alone.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::primes::{is_prime, pow_mod};

#[derive(PartialEq, Eq, Hash, Debug)]
pub struct ExtModulus {
    pub(crate) p: u64,
    pub(crate) k: u32,
    /// Monic, length `k + 1`.
    pub(crate) poly: Vec<u64>,
}

/// The interned modulus for `F_{p^k}`; each pair is built once per process.
pub(crate) fn intern(p: u64, k: u32) -> Result<&'static ExtModulus> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("extension degree {k} must be at least 2")));
    }
    static TABLE: OnceLock<Mutex<HashMap<(u64, u32), &'static ExtModulus>>> = OnceLock::new();
    let table = TABLE.get_or_init(Default::default);
    let mut guard = table.lock().expect("extension table poisoned");
    if let Some(m) = guard.get(&(p, k)) {
        return Ok(m);
    }
    let poly = first_irreducible(p, k as usize);
    let m: &'static ExtModulus = Box::leak(Box::new(ExtModulus { p, k, poly }));
    guard.insert((p, k), m);
    Ok(m)
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// `a mod g` for monic `g`; `a` need not be trimmed.
fn rem_monic(a: &mut Vec<u64>, g: &[u64], p: u64) {
    let dg = g.len() - 1;
    while a.len() > dg {
        let lead = a.pop().expect("nonempty");
        if lead == 0 {
            continue;
        }
        let off = a.len() - dg;
        for (i, &gi) in g[..dg].iter().enumerate() {
            a[off + i] = sub_mod(a[off + i], mul_mod(lead, gi, p), p);
        }
    }
}

fn mul_poly(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    out
}

fn mulmod_poly(a: &[u64], b: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut out = mul_poly(a, b, p);
    rem_monic(&mut out, g, p);
    out
}

fn powmod_poly(base: &[u64], mut e: u64, g: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_poly(&acc, &b, g, p);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod_poly(&b, &b, g, p);
        }
    }
    acc
}

fn gcd_poly(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = pow_mod(*b.last().expect("nonempty"), p - 2, p);
        let monic: Vec<u64> = b.iter().map(|&c| mul_mod(c, inv, p)).collect();
        rem_monic(&mut a, &monic, p);
        trim(&mut a);
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn prime_divisors(mut k: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= k {
        if k.is_multiple_of(q) {
            out.push(q);
            while k.is_multiple_of(q) {
                k /= q;
            }
        }
        q += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

/// Rabin's test: `g` of degree `k` is irreducible iff `w^(p^k) = w mod g`
/// and `gcd(w^(p^(k/q)) - w, g) = 1` for every prime `q | k`.
pub(crate) fn is_irreducible(g: &[u64], p: u64) -> bool {
    let k = g.len() - 1;
    let w = vec![0, 1];
    // frob[i] = w^(p^i) mod g
    let mut frob = vec![w.clone()];
    for _ in 0..k {
        let next = powmod_poly(frob.last().expect("nonempty"), p, g, p);
        frob.push(next);
    }
    let minus_w = |mut h: Vec<u64>| {
        h.resize(h.len().max(2), 0);
        h[1] = sub_mod(h[1], 1, p);
        trim(&mut h);
        h
    };
    if !minus_w(frob[k].clone()).is_empty() {
        return false;
    }
    prime_divisors(k).into_iter().all(|q| {
        let h = minus_w(frob[k / q].clone());
        gcd_poly(g.to_vec(), h, p).len() == 1
    })
}

fn first_irreducible(p: u64, k: usize) -> Vec<u64> {
    // lower coefficients run through the boxes [0, b)^k for b = 2, 3, ...,
    // each box in counter order, so small coefficients come first
    for b in 2..=p {
        let mut digits = vec![0u64; k];
        loop {
            if digits[0] != 0 && digits.contains(&(b - 1)) {
                let mut g = digits.clone();
                g.push(1);
                if is_irreducible(&g, p) {
                    return g;
                }
            }
            let Some(i) = digits.iter().position(|&d| d + 1 < b) else {
                break;
            };
            digits[i] += 1;
            digits[..i].fill(0);
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

impl ExtModulus {
    pub(crate) fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| add_mod(x, y, self.p)).collect()
    }

    pub(crate) fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| sub_mod(x, y, self.p)).collect()
    }

    pub(crate) fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| sub_mod(0, x, self.p)).collect()
    }

    pub(crate) fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = mulmod_poly(a, b, &self.poly, self.p);
        out.resize(self.k as usize, 0);
        out
    }

    /// Inverse by the extended Euclidean algorithm over `F_p[w]`.
    pub(crate) fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        let p = self.p;
        let (mut r0, mut r1) = (self.poly.clone(), a.to_vec());
        trim(&mut r1);
        if r1.is_empty() {
            return None;
        }
        let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let qs = mul_poly(&q, &s1, p);
            let mut s2 = vec![0u64; s0.len().max(qs.len())];
            for (i, x) in s2.iter_mut().enumerate() {
                *x = sub_mod(*s0.get(i).unwrap_or(&0), *qs.get(i).unwrap_or(&0), p);
            }
            trim(&mut s2);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant
        let c = pow_mod(r0[0], p - 2, p);
        let mut out: Vec<u64> = s0.iter().map(|&x| mul_mod(x, c, p)).collect();
        rem_monic(&mut out, &self.poly, p);
        out.resize(self.k as usize, 0);
        Some(out)
    }
}

fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = pow_mod(b[db], p - 2, p);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let lead = r.pop().expect("nonempty");
        if lead == 0 {
            continue;
        }
        let c = mul_mod(lead, inv, p);
        let off = r.len() - db;
        q[off] = c;
        for (i, &bi) in b[..db].iter().enumerate() {
            r[off + i] = sub_mod(r[off + i], mul_mod(c, bi, p), p);
        }
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}
