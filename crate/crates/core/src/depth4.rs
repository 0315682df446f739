//! Structure of depth-4 circuits: gcd part, simple part, minimality, rank,
//! simple-part preservation under Ψ, and lifting of depth-3 identities.
//!
//! Gcd and simple parts are computed over a coprime basis of the factors
//! rather than an irreducible factorization.

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::circuit::{Depth4Circuit, DEFAULT_EXPAND_BUDGET};
use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};
use crate::field::{FieldSpec, Scalar};
use crate::hitting::{self, Outcome, PitOptions, RankBound};
use crate::indep::{self, TrdegCertificate, TrdegOptions};
use crate::maps::{
    characteristic_gate, schedule, scan_psi, working_field, ParamSchedule, PsiMap, ScheduleKind, ScheduleParams,
    SearchOptions,
};
use crate::poly::{Monomial, SparsePoly};

/// Subsets of rows are enumerated exhaustively up to this top fan-in.
pub const DEFAULT_SUBSET_CAP: usize = 12;

/// Pairwise-coprime, monic, nonconstant polynomials `b_1..b_t` with every
/// input written as `scalar · Π b_j^{e_j}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoprimeBasis {
    basis: Vec<SparsePoly>,
    inputs: Vec<(Scalar, Vec<u32>)>,
}

impl CoprimeBasis {
    /// Refines `fs` (all nonzero, same ring) by splitting off pairwise gcds.
    pub fn new(fs: &[SparsePoly], par: Parallelism) -> Result<Self> {
        if let Some(f) = fs.iter().find(|f| f.is_zero()) {
            return Err(Error::InvalidArgument(format!("zero polynomial in coprime basis input ({f})")));
        }
        let mut set: Vec<SparsePoly> = Vec::new();
        let push = |set: &mut Vec<SparsePoly>, f: SparsePoly| {
            if !f.is_constant() {
                let f = f.normalize();
                if !set.contains(&f) {
                    set.push(f);
                }
            }
        };
        for f in fs {
            push(&mut set, f.clone());
        }
        loop {
            let pairs: Vec<(usize, usize)> = (0..set.len())
                .flat_map(|i| (i + 1..set.len()).map(move |j| (i, j)))
                .collect();
            let hit = exec::find_map_first(&pairs, par, |&(i, j)| {
                let g = set[i].gcd(&set[j]).expect("nonzero");
                (!g.is_constant()).then_some(g)
            });
            let Some((idx, g)) = hit else { break };
            let (i, j) = pairs[idx];
            let b = set.remove(j);
            let a = set.remove(i);
            let qa = a.div_exact(&g).expect("gcd divides");
            let qb = b.div_exact(&g).expect("gcd divides");
            for f in [g, qa, qb] {
                push(&mut set, f);
            }
        }
        let inputs = fs
            .iter()
            .map(|f| {
                let mut rem = f.clone();
                let exps = set
                    .iter()
                    .map(|b| {
                        let mut e = 0;
                        while let Some(q) = rem.div_exact(b) {
                            rem = q;
                            e += 1;
                        }
                        e
                    })
                    .collect();
                debug_assert!(rem.is_constant());
                (rem.constant_term(), exps)
            })
            .collect();
        Ok(CoprimeBasis { basis: set, inputs })
    }

    pub fn basis(&self) -> &[SparsePoly] {
        &self.basis
    }

    /// Number of inputs the basis was built from.
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn scalar(&self, i: usize) -> &Scalar {
        &self.inputs[i].0
    }

    pub fn exponents(&self, i: usize) -> &[u32] {
        &self.inputs[i].1
    }

    /// `Π b_j^{e_j}` for an exponent vector (monic).
    pub fn power_product(&self, exps: &[u32], field: FieldSpec, nvars: usize) -> SparsePoly {
        self.basis
            .iter()
            .zip(exps)
            .filter(|(_, &e)| e > 0)
            .fold(SparsePoly::one(field, nvars), |acc, (b, &e)| &acc * &b.pow(e))
    }

    /// Input `i` rebuilt from its scalar and exponents.
    pub fn reconstruct(&self, i: usize) -> SparsePoly {
        let (c, exps) = &self.inputs[i];
        self.power_product(exps, c.field(), self.basis.first().map_or(0, SparsePoly::nvars))
            .scale(c)
    }
}

/// Coprime basis of `Sp(C)` with each row's factors located in it.
struct Factored {
    basis: CoprimeBasis,
    /// Per row, per factor: index into the basis inputs.
    index: Vec<Vec<usize>>,
}

impl Factored {
    fn new(c: &Depth4Circuit, par: Parallelism) -> Result<Self> {
        let sp = c.sparse_set();
        let basis = CoprimeBasis::new(&sp, par)?;
        let index = c
            .rows()
            .iter()
            .map(|row| row.iter().map(|f| sp.iter().position(|g| g == f).expect("in Sp(C)")).collect())
            .collect();
        Ok(Factored { basis, index })
    }

    fn row_exponents(&self, i: usize) -> Vec<u32> {
        let mut out = vec![0u32; self.basis.basis().len()];
        for &f in &self.index[i] {
            for (o, e) in out.iter_mut().zip(self.basis.exponents(f)) {
                *o += e;
            }
        }
        out
    }

    /// Componentwise minimum of the row exponents.
    fn gcd_exponents(&self) -> Vec<u32> {
        (0..self.index.len())
            .map(|i| self.row_exponents(i))
            .reduce(|a, b| a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect())
            .unwrap_or_default()
    }
}

/// `gcd(T_1, …, T_k)`, monic.
pub fn gcd_part(c: &Depth4Circuit) -> Result<SparsePoly> {
    let fac = Factored::new(c, Parallelism::Sequential)?;
    Ok(fac.basis.power_product(&fac.gcd_exponents(), c.field(), c.nvars()))
}

/// `C / gcd(C)`, dividing each row factor by factor so that every row keeps
/// at most `s` factors of degree `<= δ`.
pub fn simple_part(c: &Depth4Circuit) -> Result<Depth4Circuit> {
    let fac = Factored::new(c, Parallelism::Sequential)?;
    let quota = fac.gcd_exponents();
    let field = c.field();
    let n = c.nvars();
    let rows = c
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut left = quota.clone();
            let mut scalar = field.one();
            let mut out: Vec<SparsePoly> = Vec::new();
            for (f, &fi) in row.iter().zip(&fac.index[i]) {
                let mut g = f.clone();
                for (j, e) in fac.basis.exponents(fi).iter().enumerate() {
                    let t = left[j].min(*e);
                    if t > 0 {
                        g = g.div_exact(&fac.basis.basis()[j].pow(t)).expect("basis power divides");
                        left[j] -= t;
                    }
                }
                if g.is_constant() {
                    scalar = &scalar * &g.constant_term();
                } else {
                    out.push(g);
                }
            }
            match out.first_mut() {
                Some(first) => *first = first.scale(&scalar),
                None => out.push(SparsePoly::constant(field, n, scalar)),
            }
            out
        })
        .collect();
    Depth4Circuit::with_fanin(field, n, c.delta(), c.s(), rows)
}

/// How [`is_minimal`] decides whether a sub-circuit vanishes.
#[derive(Clone, Copy, Debug)]
pub enum ZeroTest {
    /// Full expansion under a term budget.
    Expand { budget: usize },
    /// Blackbox test on the depth-4 hitting set.
    HittingSet { rank: RankBound, max_points: u64 },
    /// Expansion, falling back to the hitting set when over budget.
    Auto {
        budget: usize,
        rank: RankBound,
        max_points: u64,
    },
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest::Auto {
            budget: DEFAULT_EXPAND_BUDGET,
            rank: RankBound::Trivial,
            max_points: hitting::DEFAULT_MAX_POINTS,
        }
    }
}

fn is_zero_by(c: &Depth4Circuit, test: ZeroTest) -> Result<bool> {
    let by_hitting_set = |rank, max_points| -> Result<bool> {
        let opts = PitOptions {
            max_points,
            parallelism: Parallelism::Sequential,
        };
        let v = hitting::pit_depth4(c, rank, &opts, &SearchOptions::default())?;
        match v.outcome {
            Outcome::Zero => Ok(true),
            Outcome::Nonzero { .. } => Ok(false),
            Outcome::Inconclusive => Err(Error::budget("depth-4 zero test points", "more", max_points)),
        }
    };
    match test {
        ZeroTest::Expand { budget } => Ok(c.expand(budget)?.is_zero()),
        ZeroTest::HittingSet { rank, max_points } => by_hitting_set(rank, max_points),
        ZeroTest::Auto {
            budget,
            rank,
            max_points,
        } => match c.expand(budget) {
            Ok(f) => Ok(f.is_zero()),
            Err(Error::Budget { .. }) => by_hitting_set(rank, max_points),
            Err(e) => Err(e),
        },
    }
}

/// The first nonempty proper row subset (0-based, by bitmask order) whose
/// sub-circuit vanishes.
pub fn vanishing_subset(c: &Depth4Circuit, test: ZeroTest, cap: usize, par: Parallelism) -> Result<Option<Vec<usize>>> {
    let k = c.k();
    if k > cap {
        return Err(Error::budget("minimality subsets: top fan-in", k, cap));
    }
    let masks: Vec<u64> = (1..(1u64 << k) - 1).collect();
    let subset = |mask: u64| -> Vec<usize> { (0..k).filter(|i| mask >> i & 1 == 1).collect() };
    let hit = exec::find_map_first(&masks, par, |&mask| {
        let sub = match c.subcircuit(&subset(mask)) {
            Ok(s) => s,
            Err(e) => return Some(Err(e)),
        };
        match is_zero_by(&sub, test) {
            Ok(true) => Some(Ok(())),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        }
    });
    match hit {
        Some((i, res)) => res.map(|()| Some(subset(masks[i]))),
        None => Ok(None),
    }
}

/// No nonempty proper subset of the rows sums to zero.
pub fn is_minimal(c: &Depth4Circuit, test: ZeroTest, cap: usize) -> Result<bool> {
    Ok(vanishing_subset(c, test, cap, Parallelism::Parallel)?.is_none())
}

/// `rk(C)`: transcendence degree of `Sp(C)`, with its certificate.
pub fn rank_certificate(c: &Depth4Circuit, opts: &TrdegOptions) -> Result<TrdegCertificate> {
    indep::trdeg(&c.sparse_set(), opts)
}

/// `rk(C)`; fails if only a lower bound could be established.
pub fn rank(c: &Depth4Circuit, opts: &TrdegOptions) -> Result<usize> {
    let cert = rank_certificate(c, opts)?;
    if !cert.is_exact() {
        return Err(Error::budget("exact rank", format!("more than {}", cert.r), "the annihilator budget"));
    }
    Ok(cert.r)
}

fn check_preservation_params(delta: u32, m: &PsiMap) -> Result<()> {
    let d = BigUint::from(delta);
    let ok = *m.d1() > BigUint::from(2u32) * &d * &d && m.d1() >= m.d2() && *m.d2() > d;
    if !ok {
        return Err(Error::InvalidArgument(
            "simple-part preservation needs D1 >= 2δ²+1 and D1 >= D2 >= δ+1".into(),
        ));
    }
    Ok(())
}

/// `Ψ(sim(C)) = sim(Ψ(C))`, compared row by row up to scalars. A map that
/// sends some factor to zero never preserves the simple part.
pub fn verify_simple_preservation(c: &Depth4Circuit, m: &PsiMap) -> Result<bool> {
    check_preservation_params(c.delta(), m)?;
    if m.n() != c.nvars() {
        return Err(Error::ArityMismatch {
            expected: c.nvars(),
            got: m.n(),
        });
    }
    preserves(c, &simple_part(c)?, &m.affine().images())
}

fn preserves(c: &Depth4Circuit, sim: &Depth4Circuit, images: &[SparsePoly]) -> Result<bool> {
    let (Ok(left), Ok(image)) = (sim.map_factors(images), c.map_factors(images)) else {
        return Ok(false);
    };
    let right = simple_part(&image)?;
    for i in 0..c.k() {
        if left.term(i)?.normalize() != right.term(i)?.normalize() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Replaces every `x_i` by `y_{i,1} ⋯ y_{i,δ}` (variable `i·δ + t`), turning a
/// `ΣΠΣ` circuit into a `ΣΠΣΠ_δ` circuit over `n·δ` variables.
pub fn lift_identity(c: &Depth4Circuit, delta: u32) -> Result<Depth4Circuit> {
    if c.delta() != 1 {
        return Err(Error::InvalidArgument(format!(
            "identity lifting needs δ = 1, got {}",
            c.delta()
        )));
    }
    if delta == 0 {
        return Err(Error::InvalidArgument("target δ must be at least 1".into()));
    }
    let n = c.nvars();
    let nn = n * delta as usize;
    let images: Vec<SparsePoly> = (0..n)
        .map(|i| {
            let mut e = vec![0u32; nn];
            e[i * delta as usize..(i + 1) * delta as usize].fill(1);
            SparsePoly::monomial(c.field(), Monomial::new(e), c.field().one())
        })
        .collect();
    let lifted = c.map_factors(&images)?;
    Depth4Circuit::with_fanin(c.field(), nn, delta, c.s(), lifted.rows().to_vec())
}

/// The `R` to use for a circuit with top fan-in `k`.
pub fn resolve_rank_bound(bound: RankBound, delta: u32, k: usize, s: usize) -> usize {
    if k <= 2 {
        return 1;
    }
    match bound {
        RankBound::Trivial => k * s,
        RankBound::Given(r) => r.max(1),
        RankBound::Conjecture => (delta as usize * k).min(k * s).max(1),
    }
}

/// A Ψ certified for every row subset of a depth-4 circuit.
#[derive(Clone, Debug)]
pub struct Depth4Map {
    pub map: PsiMap,
    /// The rank bound `R` in force.
    pub rank_bound: usize,
    pub schedule: ParamSchedule,
    pub candidates: u64,
}

impl Depth4Map {
    pub fn to_json(&self) -> Value {
        json!({
            "map": self.map.to_json(),
            "R": self.rank_bound,
            "schedule": self.schedule.to_json(),
            "candidates": self.candidates,
        })
    }
}

/// Per row subset: the circuit, its simple part and the rank the image must keep.
struct SubsetCheck {
    circuit: Depth4Circuit,
    simple: Depth4Circuit,
    sparse: Vec<SparsePoly>,
    want: usize,
}

/// The first Ψ (with `D1 = (2δn)^(2r)`, `D2 = δ+1`) that, for every nonempty
/// row subset `I`, preserves `sim(C_I)` and keeps `min(rk(sim(C_I)), r)` of its
/// rank. For `k >= 3` this requires `ch(K) = 0` or `ch(K) > δ^R`.
pub fn search_map(c: &Depth4Circuit, bound: RankBound, opts: &SearchOptions) -> Result<Depth4Map> {
    let (n, k, s) = (c.nvars(), c.k(), c.s());
    if k > DEFAULT_SUBSET_CAP {
        return Err(Error::budget("row subsets: top fan-in", k, DEFAULT_SUBSET_CAP));
    }
    let delta = c.delta().max(1);
    let big_r = resolve_rank_bound(bound, delta, k, s);
    if k >= 3 {
        characteristic_gate(c.field(), delta, big_r)?;
    }
    let r = big_r.min(n).max(1);
    let sched = schedule(
        ScheduleKind::Depth4,
        &ScheduleParams {
            n: n as u64,
            r: big_r as u64,
            delta: delta as u64,
            k: k as u64,
            s: s as u64,
            ..Default::default()
        },
    )?;
    let d1 = sched.d[0].clone();
    let d2 = sched.d[1].clone();
    let checks = (1u64..1 << k)
        .map(|mask| {
            let rows: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let circuit = c.subcircuit(&rows)?;
            let simple = simple_part(&circuit)?;
            let sparse: Vec<SparsePoly> = simple.sparse_set().into_iter().filter(|f| !f.is_constant()).collect();
            let want = if sparse.is_empty() {
                0
            } else {
                indep::trdeg(&sparse, &opts.trdeg)?.r.min(r)
            };
            Ok(SubsetCheck {
                circuit,
                simple,
                sparse,
                want,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let work = working_field(c.field(), opts, &sched.h1)?;
    let per_p = BigUint::from(2u32).pow(k as u32 + 2)
        * BigUint::from(k * k * r * s * s)
        * BigUint::from(delta).pow(4);
    let (map, tried) = scan_psi(n, r, (&d1, &d2), work, &sched, per_p, opts, |map| {
        let images = map.affine().images();
        for ch in &checks {
            if !preserves(&ch.circuit, &ch.simple, &images)? {
                return Ok(None);
            }
            if ch.want > 0 {
                let mapped = ch.sparse.iter().map(|f| f.substitute(&images)).collect::<Result<Vec<_>>>()?;
                if indep::trdeg(&mapped, &opts.trdeg)?.r < ch.want {
                    return Ok(None);
                }
            }
        }
        Ok(Some(map))
    })?;
    Ok(Depth4Map {
        map,
        rank_bound: big_r,
        schedule: sched,
        candidates: tried,
    })
}

/// Everything [`analyze`] reports.
#[derive(Clone, Debug)]
pub struct Depth4Report {
    pub gcd_part: SparsePoly,
    pub simple: Depth4Circuit,
    pub minimal: bool,
    pub rank: TrdegCertificate,
}

impl Depth4Report {
    pub fn to_json(&self) -> Value {
        json!({
            "gcd_part": self.gcd_part.to_string(),
            "simple": serde_json::from_str::<Value>(&self.simple.to_json()).expect("valid json"),
            "minimal": self.minimal,
            "rank": self.rank.r,
            "certificates": [self.rank.to_json()],
        })
    }
}

pub fn analyze(c: &Depth4Circuit, test: ZeroTest, trdeg: &TrdegOptions) -> Result<Depth4Report> {
    Ok(Depth4Report {
        gcd_part: gcd_part(c)?,
        simple: simple_part(c)?,
        minimal: is_minimal(c, test, DEFAULT_SUBSET_CAP)?,
        rank: rank_certificate(c, trdeg)?,
    })
}
