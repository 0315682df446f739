//! The exact parameter schedules behind the three hitting-set constructions.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Numbers larger than this many bits are refused rather than materialized.
const MAX_BITS: u64 = 1 << 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ScheduleKind {
    /// Ψ with `D1 = (2δn)^(r+1)`, `D2 = 2`: circuits over sparse inputs in
    /// zero or large characteristic.
    SparseInputs,
    /// Φ with `D = δ^(r+1) + 1`: any characteristic.
    ArbitraryChar,
    /// Ψ with `D1 = (2δn)^(2r)`, `D2 = δ + 1`: depth-4 circuits.
    Depth4,
}

impl ScheduleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScheduleKind::SparseInputs => "sparse-inputs",
            ScheduleKind::ArbitraryChar => "arbitrary-char",
            ScheduleKind::Depth4 => "depth4",
        }
    }
}

/// Inputs to [`schedule`]; only the fields a kind uses are read.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ScheduleParams {
    pub n: u64,
    /// Degree of the circuit.
    pub d: u64,
    pub r: u64,
    pub delta: u64,
    /// Sparsity bound of the inputs.
    pub ell: u64,
    /// Top fan-in.
    pub k: u64,
    /// Multiplicative fan-in.
    pub s: u64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParamSchedule {
    pub kind: ScheduleKind,
    /// `[D]` for Φ, `[D1, D2]` for Ψ.
    pub d: Vec<BigUint>,
    pub p_max: BigUint,
    /// `|H1|`, the number of candidate values of `c`.
    pub h1: BigUint,
    /// `|H2|`, the grid side.
    pub h2: BigUint,
    pub r: u64,
}

impl ParamSchedule {
    pub fn provenance(&self) -> String {
        format!("paper-exact:{}", self.kind.as_str())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "D": self.d.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "p_max": self.p_max.to_string(),
            "H1": self.h1.to_string(),
            "H2": self.h2.to_string(),
            "r": self.r,
            "provenance": self.provenance(),
        })
    }
}

/// `⌈log2 D⌉` for `D >= 1`.
pub(crate) fn ceil_log2(d: &BigUint) -> u64 {
    if d.is_zero() {
        return 0;
    }
    (d - 1u32).bits()
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn pow(base: BigUint, e: u64) -> Result<BigUint> {
    let bits = base.bits().saturating_mul(e);
    if bits > MAX_BITS {
        return Err(Error::budget("schedule value bits", bits, MAX_BITS));
    }
    let e = u32::try_from(e).map_err(|_| Error::budget("schedule exponent", e, u32::MAX))?;
    Ok(base.pow(e))
}

fn require(names: &[(&str, u64)]) -> Result<()> {
    match names.iter().find(|(_, v)| *v == 0) {
        Some((name, _)) => Err(Error::InvalidArgument(format!("schedule parameter {name} must be at least 1"))),
        None => Ok(()),
    }
}

/// The exact schedule for `kind`.
pub fn schedule(kind: ScheduleKind, params: &ScheduleParams) -> Result<ParamSchedule> {
    let ScheduleParams {
        n,
        d,
        r,
        delta,
        ell,
        k,
        s,
    } = *params;
    match kind {
        ScheduleKind::SparseInputs => {
            require(&[("n", n), ("d", d), ("r", r), ("delta", delta), ("ell", ell)])?;
            let d1 = pow(big(2) * big(delta) * big(n), r + 1)?;
            let lg = big(ceil_log2(&d1));
            let p_max = pow(big(2) * big(n) * big(r) * big(ell), 2 * (r + 1))? * &lg * &lg + 1u32;
            let h1 = big(delta) * big(r) * &p_max;
            Ok(ParamSchedule {
                kind,
                d: vec![d1, big(2)],
                p_max,
                h1,
                h2: big(d) + 1u32,
                r,
            })
        }
        ScheduleKind::ArbitraryChar => {
            require(&[("n", n), ("d", d), ("r", r), ("delta", delta)])?;
            let delta_r = pow(big(delta), r)?;
            let dd = pow(big(delta), r + 1)? + 1u32;
            let lg = big(ceil_log2(&dd));
            let e = 8u64.saturating_mul(pow(big(delta), r + 1)?.try_into().map_err(|_| {
                Error::budget("schedule exponent", "delta^(r+1)", u64::MAX)
            })?);
            let p_max = pow(big(n) + &delta_r, e)? * &lg * &lg + 1u32;
            let h1 = &delta_r * big(r) * &p_max;
            Ok(ParamSchedule {
                kind,
                d: vec![dd],
                p_max,
                h1,
                h2: big(d) + 1u32,
                r,
            })
        }
        ScheduleKind::Depth4 => {
            require(&[("n", n), ("r", r), ("delta", delta), ("k", k), ("s", s)])?;
            let d1 = pow(big(2) * big(delta) * big(n), 2 * r)?;
            let lg = big(ceil_log2(&d1));
            let e = delta
                .checked_mul(8 * delta + 4 * r)
                .ok_or_else(|| Error::budget("schedule exponent", "8δ²+4δr", u64::MAX))?;
            let p_max = pow(big(2), 2 * (k + 1))? * pow(big(2) * big(k) * big(r) * big(s) * big(n) * big(delta).pow(2), e)? * &lg * &lg
                + BigUint::one();
            let h1 = pow(big(2), k + 2)? * big(k).pow(2) * big(r) * big(s).pow(2) * pow(big(delta), 4)? * &p_max;
            Ok(ParamSchedule {
                kind,
                d: vec![d1, big(delta) + 1u32],
                p_max,
                h1,
                h2: big(delta) * big(s) + 1u32,
                r,
            })
        }
    }
}
