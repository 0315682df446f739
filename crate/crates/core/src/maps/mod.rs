//! Variable-reducing substitutions.
//!
//! * [`PhiMap`] keeps `r` chosen variables and sends the others to powers of
//!   a parameter `c`, with exponents `⌊D^i⌋_p` (Kronecker-style).
//! * [`PsiMap`] sends every `x_i` to a degree-1 polynomial in `z_0, …, z_r`
//!   whose coefficients are powers of `c` (Vandermonde-style).
//!
//! Both are affine in the new variables, which [`AffineMap`] captures; the
//! hitting sets evaluate them directly on grids.

mod schedule;
mod search;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

pub use schedule::{schedule, ParamSchedule, ScheduleKind, ScheduleParams};
pub use search::{
    search_phi, search_phi_with, search_psi, search_psi_with, Certified, SearchMode, SearchOptions,
};
pub(crate) use search::{characteristic_gate, nonzero_count, scan_psi, working_field, ADAPTIVE_FIELD_SIZE, Candidate, CandidateSpace};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::{Monomial, SparsePoly, Vars};
use crate::primes::pow_mod;

/// `⌊a⌋_p`: the residue of `a` in `[0, p)`.
pub fn residue(a: &BigUint, p: u64) -> u64 {
    (a % p).to_u64().expect("residue fits")
}

/// `⌊D^i⌋_p` by modular exponentiation.
pub fn power_residue(d: &BigUint, i: u64, p: u64) -> u64 {
    if p == 1 {
        return 0;
    }
    pow_mod(residue(d, p), i, p)
}

/// `x_i -> offset_i + Σ_j matrix[i][j]·z_j` for `i = 1..n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineMap {
    field: FieldSpec,
    offset: Vec<Scalar>,
    matrix: Vec<Vec<Scalar>>,
    vars: Vars,
}

impl AffineMap {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Number of source variables.
    pub fn n(&self) -> usize {
        self.offset.len()
    }

    /// Number of target variables.
    pub fn q(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    pub fn offset(&self) -> &[Scalar] {
        &self.offset
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.matrix
    }

    /// Naming scheme of the target variables.
    pub fn vars(&self) -> Vars {
        self.vars
    }

    /// The images of `x_1, …, x_n` as polynomials in the target variables.
    pub fn images(&self) -> Vec<SparsePoly> {
        let q = self.q();
        self.offset
            .iter()
            .zip(&self.matrix)
            .map(|(o, row)| {
                let mut f = SparsePoly::constant(self.field, q, o.clone());
                for (j, c) in row.iter().enumerate() {
                    f.add_term(Monomial::var(q, j, 1), c.clone());
                }
                f
            })
            .collect()
    }

    /// The image of `f` (whose field must embed in the map's field).
    pub fn apply(&self, f: &SparsePoly) -> Result<SparsePoly> {
        if f.nvars() != self.n() {
            return Err(Error::ArityMismatch {
                expected: self.n(),
                got: f.nvars(),
            });
        }
        f.substitute(&self.images())
    }

    /// The source point `(x_1(a), …, x_n(a))` for a target point `a`.
    pub fn point(&self, a: &[Scalar]) -> Vec<Scalar> {
        debug_assert_eq!(a.len(), self.q());
        self.offset
            .iter()
            .zip(&self.matrix)
            .map(|(o, row)| {
                row.iter()
                    .zip(a)
                    .filter(|(c, _)| !c.is_zero())
                    .fold(o.clone(), |acc, (c, x)| &acc + &(c * x))
            })
            .collect()
    }
}

fn check_params(n: usize, r: usize, p: u64) -> Result<()> {
    if r > n {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds n = {n}")));
    }
    if p == 0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    Ok(())
}

fn check_d(d: &BigUint, name: &str) -> Result<()> {
    if *d < BigUint::from(2u32) {
        return Err(Error::InvalidArgument(format!("{name} must be at least 2")));
    }
    Ok(())
}

/// The map keeping the variables in `kept` (0-based, sorted) as `z_1, …, z_r`
/// and sending the `t`-th remaining variable to `c^{⌊D^t⌋_p}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiMap {
    n: usize,
    kept: Vec<usize>,
    d: BigUint,
    p: u64,
    c: Scalar,
}

impl PhiMap {
    pub fn new(n: usize, kept: Vec<usize>, d: BigUint, p: u64, c: Scalar) -> Result<Self> {
        check_params(n, kept.len(), p)?;
        check_d(&d, "D")?;
        if kept.windows(2).any(|w| w[0] >= w[1]) || kept.last().is_some_and(|&i| i >= n) {
            return Err(Error::InvalidArgument(
                "kept variables must be sorted, distinct and in range".into(),
            ));
        }
        Ok(PhiMap { n, kept, d, p, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.kept.len()
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn dropped(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.kept.contains(i)).collect()
    }

    pub fn d(&self) -> &BigUint {
        &self.d
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn c(&self) -> &Scalar {
        &self.c
    }

    pub fn field(&self) -> FieldSpec {
        self.c.field()
    }

    /// Exponent of `c` for each dropped variable, in order.
    pub fn exponents(&self) -> Vec<u64> {
        (1..=(self.n - self.r()) as u64)
            .map(|t| power_residue(&self.d, t, self.p))
            .collect()
    }

    pub fn affine(&self) -> AffineMap {
        let field = self.field();
        let r = self.r();
        let mut offset = vec![field.zero(); self.n];
        let mut matrix = vec![vec![field.zero(); r]; self.n];
        for (j, &i) in self.kept.iter().enumerate() {
            matrix[i][j] = field.one();
        }
        for (&i, e) in self.dropped().iter().zip(self.exponents()) {
            offset[i] = self.c.pow(e);
        }
        AffineMap {
            field,
            offset,
            matrix,
            vars: Vars::Z1,
        }
    }

    pub fn apply(&self, f: &SparsePoly) -> Result<SparsePoly> {
        self.affine().apply(f)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": "phi",
            "field": self.field(),
            "n": self.n,
            "r": self.r(),
            "I": self.kept,
            "D": self.d.to_string(),
            "p": self.p,
            "c": self.c.to_string(),
        })
    }
}

/// `x_i -> c^{⌊D1^i⌋_p} + c^{⌊D2^i⌋_p}·z_0 + Σ_{j=1..r} c^{⌊i(n+1)^j⌋_p}·z_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PsiMap {
    n: usize,
    r: usize,
    d1: BigUint,
    d2: BigUint,
    p: u64,
    c: Scalar,
}

impl PsiMap {
    pub fn new(n: usize, r: usize, d1: BigUint, d2: BigUint, p: u64, c: Scalar) -> Result<Self> {
        check_params(n, r, p)?;
        check_d(&d1, "D1")?;
        check_d(&d2, "D2")?;
        Ok(PsiMap { n, r, d1, d2, p, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d1(&self) -> &BigUint {
        &self.d1
    }

    pub fn d2(&self) -> &BigUint {
        &self.d2
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn c(&self) -> &Scalar {
        &self.c
    }

    pub fn field(&self) -> FieldSpec {
        self.c.field()
    }

    /// Per variable `x_i`: the exponents of `c` in the constant term, the
    /// `z_0` coefficient, and the `z_1, …, z_r` coefficients.
    pub fn exponents(&self) -> Vec<(u64, u64, Vec<u64>)> {
        let p = self.p;
        let base = (self.n as u64 + 1) % p;
        (1..=self.n as u64)
            .map(|i| {
                let zs = (1..=self.r as u64)
                    .map(|j| {
                        let v = (i % p) as u128 * pow_mod(base, j, p) as u128;
                        (v % p as u128) as u64
                    })
                    .collect();
                (power_residue(&self.d1, i, p), power_residue(&self.d2, i, p), zs)
            })
            .collect()
    }

    pub fn affine(&self) -> AffineMap {
        let (offset, matrix) = self
            .exponents()
            .into_iter()
            .map(|(e1, e2, zs)| {
                let row = std::iter::once(e2).chain(zs).map(|e| self.c.pow(e)).collect();
                (self.c.pow(e1), row)
            })
            .unzip();
        AffineMap {
            field: self.field(),
            offset,
            matrix,
            vars: Vars::Z0,
        }
    }

    pub fn apply(&self, f: &SparsePoly) -> Result<SparsePoly> {
        self.affine().apply(f)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": "psi",
            "field": self.field(),
            "n": self.n,
            "r": self.r,
            "D": [self.d1.to_string(), self.d2.to_string()],
            "p": self.p,
            "c": self.c.to_string(),
        })
    }
}

/// Either map, as read back from JSON.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FaithfulMap {
    Phi(PhiMap),
    Psi(PsiMap),
}

impl FaithfulMap {
    pub fn affine(&self) -> AffineMap {
        match self {
            FaithfulMap::Phi(m) => m.affine(),
            FaithfulMap::Psi(m) => m.affine(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            FaithfulMap::Phi(m) => m.to_json(),
            FaithfulMap::Psi(m) => m.to_json(),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Json(format!("map: missing or invalid {what:?}"));
        let field: FieldSpec = serde_json::from_value(v.get("field").cloned().ok_or_else(|| bad("field"))?)?;
        let int = |k: &str| v.get(k).and_then(Value::as_u64).ok_or_else(|| bad(k));
        let big = |x: Option<&Value>, k: &str| -> Result<BigUint> {
            x.and_then(Value::as_str)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(k))
        };
        let n = int("n")? as usize;
        let r = int("r")? as usize;
        let p = int("p")?;
        let c = field.parse_scalar(v.get("c").and_then(Value::as_str).ok_or_else(|| bad("c"))?)?;
        match v.get("kind").and_then(Value::as_str) {
            Some("phi") => {
                let kept: Vec<usize> = serde_json::from_value(v.get("I").cloned().ok_or_else(|| bad("I"))?)?;
                if kept.len() != r {
                    return Err(bad("I"));
                }
                Ok(FaithfulMap::Phi(PhiMap::new(n, kept, big(v.get("D"), "D")?, p, c)?))
            }
            Some("psi") => {
                let ds = v.get("D").and_then(Value::as_array).ok_or_else(|| bad("D"))?;
                if ds.len() != 2 {
                    return Err(bad("D"));
                }
                Ok(FaithfulMap::Psi(PsiMap::new(
                    n,
                    r,
                    big(ds.first(), "D")?,
                    big(ds.get(1), "D")?,
                    p,
                    c,
                )?))
            }
            _ => Err(bad("kind")),
        }
    }
}

#[cfg(test)]
mod tests;
