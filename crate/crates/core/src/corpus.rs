//! Seeded instance corpora, each instance judged twice: by the hitting-set
//! PIT driver and by brute-force expansion.
//!
//! Instance `i` of a corpus is drawn from its own ChaCha stream, so it does
//! not depend on how many instances are requested.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::circuit::{Circuit, CircuitFile, ComposedCircuit, Depth4Circuit};
use crate::depth4::lift_identity;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::gen;
use crate::hitting::{pit_circuit, Outcome, PitOptions, PitVerdict, RankBound};
use crate::indep::{annihilator, DEFAULT_ANNIHILATOR_BUDGET};
use crate::maps::SearchOptions;
use crate::poly::SparsePoly;

/// Field of the composed and depth-4 corpora.
pub const CORPUS_PRIME: u64 = 1_000_003;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CorpusKind {
    /// `C(f_1, …, f_m)` over `F_1000003`.
    Composed,
    /// `ΣΠΣΠ_2(2, 3, 4)` over `F_1000003`.
    Depth4,
    /// Composed circuits with `δ <= 2`, `r <= 2` over `F_p`, `p` small.
    SmallChar(u64),
}

impl CorpusKind {
    pub fn name(self) -> String {
        match self {
            CorpusKind::Composed => "composed".into(),
            CorpusKind::Depth4 => "depth4".into(),
            CorpusKind::SmallChar(p) => format!("small-char-{p}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub circuit: CircuitFile,
    /// Built to be identically zero.
    pub constructed_zero: bool,
}

fn stream(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

/// `count` instances of `kind` from `seed`.
pub fn instances(kind: CorpusKind, seed: u64, count: u64) -> Result<Vec<Instance>> {
    (0..count)
        .map(|i| {
            let mut rng = stream(seed, i);
            let (circuit, constructed_zero) = match kind {
                CorpusKind::Composed => composed_instance(&mut rng, FieldSpec::prime(CORPUS_PRIME)?, 4, i)?,
                CorpusKind::SmallChar(p) => composed_instance(&mut rng, FieldSpec::prime(p)?, 3, i)?,
                CorpusKind::Depth4 => depth4_instance(&mut rng, FieldSpec::prime(CORPUS_PRIME)?, i)?,
            };
            Ok(Instance {
                name: format!("{}/{seed}/{i}", kind.name()),
                circuit,
                constructed_zero,
            })
        })
        .collect()
}

fn composed(outer: &SparsePoly, inputs: Vec<SparsePoly>) -> Result<CircuitFile> {
    Ok(CircuitFile::Composed(ComposedCircuit::new(Circuit::from_poly(outer), inputs)?))
}

/// A family with a known annihilator `A` (in `m` variables). With `linear`,
/// every member has degree at most 2.
fn dependent_family(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize, linear: bool) -> Result<(Vec<SparsePoly>, SparsePoly)> {
    let deg = if linear { 1 } else { 2 };
    let g = gen::random_poly_of_degree(rng, field, n, 3, deg);
    let h = gen::random_poly_of_degree(rng, field, n, 3, deg);
    let y = |m, i| SparsePoly::var(field, m, i);
    match rng.gen_range(0..3) {
        0 => Ok((vec![g.clone(), g.pow(2), h], &y(3, 1) - &y(3, 0).pow(2))),
        1 => Ok((vec![g.clone(), h.clone(), &g * &h], &y(3, 2) - &(&y(3, 0) * &y(3, 1)))),
        _ => {
            let fs = gen::random_low_trdeg_family(rng, field, n, 2, 1, 2, 3);
            match annihilator(&fs, 4, DEFAULT_ANNIHILATOR_BUDGET)? {
                Some(a) => Ok((fs, a)),
                None => Ok((vec![g.clone(), g.pow(2)], &y(2, 1) - &y(2, 0).pow(2))),
            }
        }
    }
}

/// Cycles through: free random family, low-trdeg family, two zero
/// constructions (annihilator times a cofactor), and a near miss.
fn composed_instance(rng: &mut ChaCha8Rng, field: FieldSpec, max_n: usize, i: u64) -> Result<(CircuitFile, bool)> {
    let small = max_n < 4;
    match i % 5 {
        0 => {
            let n = if small { 2 } else { rng.gen_range(2..=max_n) };
            let m = rng.gen_range(2..=if small { 3 } else { 4 });
            let fs = (0..m).map(|_| gen::random_sparse_poly(rng, field, n, 3, 2)).collect();
            let deg = rng.gen_range(1..=3);
            let outer = gen::random_poly_of_degree(rng, field, m, 4, deg);
            Ok((composed(&outer, fs)?, false))
        }
        1 => {
            let n = rng.gen_range(2..=max_n);
            let m = rng.gen_range(2..=if small { 3 } else { 4 });
            let r = rng.gen_range(1..=n.min(2));
            let delta = rng.gen_range(1..=2);
            let fs = gen::random_low_trdeg_family(rng, field, n, m, r, delta, 3);
            let deg = rng.gen_range(1..=3);
            let outer = gen::random_poly_of_degree(rng, field, m, 4, deg);
            Ok((composed(&outer, fs)?, false))
        }
        k => {
            let n = rng.gen_range(2..=max_n);
            let (fs, a) = dependent_family(rng, field, n, small)?;
            let m = fs.len();
            let cofactor = gen::random_sparse_poly(rng, field, m, 2, 1);
            let mut outer = &a * &cofactor;
            let zero = k != 4;
            if !zero {
                outer = &outer + &SparsePoly::var(field, m, rng.gen_range(0..m)).scale(&field.random_small_nonzero(rng, 5));
            }
            Ok((composed(&outer, fs)?, zero))
        }
    }
}

/// Cycles through: a lifted `ΣΠΣ` zero pair, `T - T'` with `T'` a permuted
/// rescaling of `T`, a near miss of the latter, and two random circuits.
fn depth4_instance(rng: &mut ChaCha8Rng, field: FieldSpec, i: u64) -> Result<(CircuitFile, bool)> {
    let (n, s, delta) = (4, 3, 2);
    let c = match i % 5 {
        0 => {
            let base = gen::random_depth3_zero_pair(rng, field, n / 2, s);
            return Ok((CircuitFile::Depth4(lift_identity(&base, delta)?), true));
        }
        1 | 2 => {
            let row: Vec<SparsePoly> = (0..s).map(|_| gen::random_sparse_poly(rng, field, n, 3, delta)).collect();
            let mut other = row.clone();
            other.shuffle(rng);
            let c = field.random_small_nonzero(rng, 7);
            other[0] = other[0].scale(&c);
            other[1] = other[1].scale(&-&c.inv().ok_or_else(|| Error::InvalidArgument("zero scalar".into()))?);
            if i % 5 == 2 {
                other[2] = &other[2] + &SparsePoly::var(field, n, rng.gen_range(0..n));
            }
            return Ok((CircuitFile::Depth4(Depth4Circuit::new(field, n, delta, vec![row, other])?), i % 5 == 1));
        }
        _ => gen::random_depth4(rng, field, n, 2, s, delta, 3),
    };
    Ok((CircuitFile::Depth4(c), false))
}

#[derive(Clone, Debug)]
pub struct Record {
    pub name: String,
    pub constructed_zero: bool,
    /// Verdict of the expansion oracle.
    pub expand_zero: bool,
    pub verdict: PitVerdict,
}

impl Record {
    /// The PIT verdict matches the expansion, and a constructed zero really
    /// expanded to zero.
    pub fn agrees(&self) -> bool {
        let pit = match self.verdict.outcome {
            Outcome::Zero => self.expand_zero,
            Outcome::Nonzero { .. } => !self.expand_zero,
            Outcome::Inconclusive => false,
        };
        pit && (!self.constructed_zero || self.expand_zero)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "constructed_zero": self.constructed_zero,
            "expand": if self.expand_zero { "zero" } else { "nonzero" },
            "verdict": self.verdict.to_json(),
            "agrees": self.agrees(),
        })
    }
}

/// Judges one instance.
pub fn judge(inst: &Instance, bound: RankBound, pit_opts: &PitOptions, search: &SearchOptions, expand_budget: usize) -> Result<Record> {
    let expand_zero = inst.circuit.expand(expand_budget)?.is_zero();
    let verdict = pit_circuit(&inst.circuit, bound, pit_opts, search)?;
    Ok(Record {
        name: inst.name.clone(),
        constructed_zero: inst.constructed_zero,
        expand_zero,
        verdict,
    })
}
