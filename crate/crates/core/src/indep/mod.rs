//! Transcendence degree and algebraic independence.
//!
//! Two routes: the Jacobian criterion (rank of `(∂f_i/∂x_j)` over the function
//! field, exact when the characteristic is zero or large enough), and a
//! brute-force search for annihilating polynomials under the Perron cap
//! `δ^r`, valid in every characteristic.

mod annihilator;
mod certificate;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use annihilator::{annihilator, annihilator_exact, DEFAULT_ANNIHILATOR_BUDGET};
pub use certificate::{CertificateMode, Relation, TrdegCertificate, Witness};

use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};
use crate::field::{FieldSpec, Scalar};
use crate::linalg;
use crate::poly::SparsePoly;

/// `J = (∂f_i / ∂x_j)`, one row per input polynomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JacobianMatrix {
    field: FieldSpec,
    nvars: usize,
    rows: Vec<Vec<SparsePoly>>,
}

impl JacobianMatrix {
    pub fn rows(&self) -> &[Vec<SparsePoly>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn entry(&self, i: usize, j: usize) -> &SparsePoly {
        &self.rows[i][j]
    }

    /// The submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<SparsePoly>> {
        rows.iter()
            .map(|&i| cols.iter().map(|&j| self.rows[i][j].clone()).collect())
            .collect()
    }

    pub fn eval(&self, point: &[Scalar]) -> Vec<Vec<Scalar>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.eval_unchecked(point)).collect())
            .collect()
    }
}

fn check_family(fs: &[SparsePoly]) -> Result<(FieldSpec, usize)> {
    let first = fs
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty polynomial list".into()))?;
    for f in fs {
        first.field().check(&f.field())?;
        if f.nvars() != first.nvars() {
            return Err(Error::ArityMismatch {
                expected: first.nvars(),
                got: f.nvars(),
            });
        }
    }
    Ok((first.field(), first.nvars()))
}

pub fn jacobian(fs: &[SparsePoly]) -> Result<JacobianMatrix> {
    let (field, nvars) = check_family(fs)?;
    let rows = fs
        .iter()
        .map(|f| (0..nvars).map(|j| f.derivative(j)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(JacobianMatrix { field, nvars, rows })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RankMethod {
    /// Exact rank over `K(x)` by fraction-free elimination.
    Symbolic,
    /// Maximum rank of `J(a)` over `trials` seeded random points `a`.
    Randomized { seed: u64, trials: usize },
}

/// Seeded generator for trial `i` of a run with master seed `seed`: each trial
/// gets its own ChaCha stream, so results do not depend on scheduling.
pub(crate) fn trial_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

pub fn jacobian_rank(j: &JacobianMatrix, method: RankMethod, par: Parallelism) -> usize {
    match method {
        RankMethod::Symbolic => linalg::rank_bareiss(j.rows.clone()).rank,
        RankMethod::Randomized { seed, trials } => {
            let ids: Vec<u64> = (0..trials as u64).collect();
            exec::map(&ids, par, |&i| {
                let mut rng = trial_rng(seed, i);
                let pt: Vec<Scalar> = (0..j.nvars).map(|_| j.field.random(&mut rng)).collect();
                linalg::rank_scalar(j.eval(&pt))
            })
            .into_iter()
            .max()
            .unwrap_or(0)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum TrdegMode {
    #[default]
    Auto,
    Jacobian,
    BruteForce,
}

#[derive(Clone, Copy, Debug)]
pub struct TrdegOptions {
    pub mode: TrdegMode,
    /// Column budget for each annihilator search.
    pub annihilator_budget: usize,
    /// Seed for locating a point where the certifying minor is nonzero.
    pub seed: u64,
}

impl Default for TrdegOptions {
    fn default() -> Self {
        TrdegOptions {
            mode: TrdegMode::Auto,
            annihilator_budget: DEFAULT_ANNIHILATOR_BUDGET,
            seed: 0,
        }
    }
}

impl TrdegOptions {
    pub fn with_mode(mode: TrdegMode) -> Self {
        TrdegOptions {
            mode,
            ..Default::default()
        }
    }
}

/// Maximal total degree of the family (at least 1).
pub(crate) fn max_degree(fs: &[SparsePoly]) -> u32 {
    fs.iter().filter_map(SparsePoly::degree).max().unwrap_or(0).max(1)
}

/// `δ^e`, saturating.
pub(crate) fn degree_power(delta: u32, e: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(delta as u128);
    }
    acc
}

/// Whether a Jacobian rank of `rank` is guaranteed to equal the transcendence
/// degree. Any independent subset of size `rank + 1` would have full Jacobian
/// rank once `ch(K) > δ^(rank+1)`, so that gate suffices; a rank equal to
/// `min(m, n)` is exact regardless.
pub fn jacobian_is_exact(field: FieldSpec, fs: &[SparsePoly], rank: usize) -> bool {
    let ch = field.characteristic();
    let n = fs.first().map_or(0, SparsePoly::nvars);
    if ch == 0 || rank == fs.len().min(n) {
        return true;
    }
    ch as u128 > degree_power(max_degree(fs), rank + 1)
}

/// Transcendence degree of `fs` with a checkable certificate.
pub fn trdeg(fs: &[SparsePoly], opts: &TrdegOptions) -> Result<TrdegCertificate> {
    let (field, _) = check_family(fs)?;
    match opts.mode {
        TrdegMode::BruteForce => bruteforce(fs, opts),
        TrdegMode::Jacobian => {
            let c = by_jacobian(fs, opts)?;
            Ok(if jacobian_is_exact(field, fs, c.r) {
                c
            } else {
                c.into_lower_bound()
            })
        }
        TrdegMode::Auto => {
            let c = by_jacobian(fs, opts)?;
            if jacobian_is_exact(field, fs, c.r) {
                return Ok(c);
            }
            match bruteforce(fs, opts) {
                Ok(b) => Ok(b),
                Err(Error::Budget { .. }) => Ok(c.into_lower_bound()),
                Err(e) => Err(e),
            }
        }
    }
}

fn by_jacobian(fs: &[SparsePoly], opts: &TrdegOptions) -> Result<TrdegCertificate> {
    let j = jacobian(fs)?;
    let pr = linalg::rank_bareiss(j.rows.clone());
    let (mut rows, mut cols) = (pr.rows, pr.cols);
    // sort the witness for readability; the minor changes at most by sign
    let mut perm: Vec<usize> = (0..rows.len()).collect();
    perm.sort_by_key(|&i| rows[i]);
    rows = perm.iter().map(|&i| rows[i]).collect();
    cols.sort_unstable();
    let determinant = if rows.is_empty() {
        SparsePoly::one(j.field, j.nvars)
    } else {
        linalg::det_bareiss(j.minor(&rows, &cols))
    };
    let point = find_nonzero_point(&determinant, opts.seed);
    Ok(TrdegCertificate {
        r: pr.rank,
        mode: CertificateMode::Jacobian,
        witness: Witness::Minor {
            rows,
            cols,
            determinant,
            point,
        },
    })
}

fn find_nonzero_point(f: &SparsePoly, seed: u64) -> Option<Vec<Scalar>> {
    (0..32).find_map(|i| {
        let mut rng = trial_rng(seed, i);
        let pt: Vec<Scalar> = (0..f.nvars()).map(|_| f.field().random(&mut rng)).collect();
        (!f.eval_unchecked(&pt).is_zero()).then_some(pt)
    })
}

fn bruteforce(fs: &[SparsePoly], opts: &TrdegOptions) -> Result<TrdegCertificate> {
    let n = fs[0].nvars();
    let mut independent: Vec<usize> = Vec::new();
    let mut relations = Vec::new();
    let mut absence_cap = 0u64;
    for i in 0..fs.len() {
        let mut subset = independent.clone();
        subset.push(i);
        let saturated = independent.len() == n;
        let polys: Vec<SparsePoly> = subset.iter().map(|&k| fs[k].clone()).collect();
        let cap = degree_power(max_degree(&polys), independent.len());
        let found = u32::try_from(cap)
            .map_err(|_| Error::budget("annihilator degree cap", cap, u32::MAX))
            .and_then(|cap| annihilator(&polys, cap, opts.annihilator_budget));
        let found = match found {
            // more polynomials than variables: dependent without a witness
            Err(Error::Budget { .. }) if saturated => {
                relations.push(Relation {
                    subset,
                    annihilator: None,
                });
                continue;
            }
            other => other?,
        };
        match found {
            Some(f) => relations.push(Relation {
                subset,
                annihilator: Some(f),
            }),
            None => {
                independent = subset;
                absence_cap = cap as u64;
            }
        }
    }
    Ok(TrdegCertificate {
        r: independent.len(),
        mode: CertificateMode::BruteForce,
        witness: Witness::Annihilators {
            independent,
            absence_cap,
            relations,
        },
    })
}

/// Greedy maximal independent subset (by Jacobian minors) scanning `order`.
/// Sound in every characteristic; exact under the Jacobian gate.
pub fn greedy_independent(fs: &[SparsePoly], order: &[usize]) -> Result<Vec<usize>> {
    check_family(fs)?;
    let mut chosen: Vec<usize> = Vec::new();
    for &i in order {
        let mut trial = chosen.clone();
        trial.push(i);
        let sub: Vec<SparsePoly> = trial.iter().map(|&k| fs[k].clone()).collect();
        let j = jacobian(&sub)?;
        if jacobian_rank(&j, RankMethod::Symbolic, Parallelism::Sequential) == trial.len() {
            chosen = trial;
        }
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests;
