//! Hitting sets and the blackbox PIT driver.
//!
//! A [`HittingSet`] is a lazy, restartable stream of points: a sequence of
//! affine maps (one per schedule candidate) each composed with a grid
//! `H^q` in odometer order. [`pit`] walks it in chunks, evaluating a chunk in
//! parallel and keeping the first witness in stream order.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::circuit::{Blackbox, CircuitFile, ComposedCircuit, Depth4Circuit};
use crate::depth4;
use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};
use crate::field::{FieldSpec, Scalar};
use crate::poly::SparsePoly;
use crate::indep::{self, max_degree};
use crate::maps::{
    characteristic_gate, nonzero_count, schedule, search_phi, search_psi, AffineMap, Candidate, CandidateSpace,
    PhiMap, PsiMap, ScheduleKind, ScheduleParams, SearchMode, SearchOptions, ADAPTIVE_FIELD_SIZE,
};

/// Default point budget for [`pit`].
pub const DEFAULT_MAX_POINTS: u64 = 1_000_000;

const CHUNK: usize = 256;

/// What a Zero verdict is worth.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Guarantee {
    /// The full paper-exact set (or a Schwartz–Zippel grid) was exhausted;
    /// also used for Nonzero, whose witness is its own proof.
    Certified,
    /// An adaptive family of certified maps was exhausted.
    Corpus,
    /// Nothing is claimed.
    Inconclusive,
}

impl Guarantee {
    pub fn as_str(self) -> &'static str {
        match self {
            Guarantee::Certified => "certified",
            Guarantee::Corpus => "corpus",
            Guarantee::Inconclusive => "inconclusive",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "certified" => Some(Guarantee::Certified),
            "corpus" => Some(Guarantee::Corpus),
            "inconclusive" => Some(Guarantee::Inconclusive),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Construction {
    Grid,
    SparseInputs,
    ArbitraryChar,
    Depth4,
}

impl Construction {
    pub fn as_str(self) -> &'static str {
        match self {
            Construction::Grid => "sz-grid",
            Construction::SparseInputs => "sparse-inputs",
            Construction::ArbitraryChar => "arbitrary-char",
            Construction::Depth4 => "depth4",
        }
    }
}

/// The rank bound `R` for depth-4 hitting sets with `k >= 3` (`k = 2` always
/// uses `R = 1`).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum RankBound {
    /// `R = ks`.
    #[default]
    Trivial,
    /// A caller-supplied bound.
    Given(usize),
    /// `R = min(δk, ks)`: an unproven bound, only on request.
    Conjecture,
}

enum Blocks {
    /// The grid itself in `q` coordinates.
    Identity(usize),
    Fixed(Vec<AffineMap>),
    Lazy {
        space: CandidateSpace,
        build: Box<dyn Fn(&Candidate) -> AffineMap + Send + Sync>,
    },
}

pub struct HittingSet {
    n: usize,
    field: FieldSpec,
    construction: Construction,
    mode: SearchMode,
    exhaustion: Guarantee,
    provenance: String,
    params: Value,
    grid: Vec<Scalar>,
    cardinality: Option<BigUint>,
    blocks: Blocks,
}

struct Odometer {
    idx: Vec<usize>,
    base: usize,
    done: bool,
}

impl Iterator for Odometer {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        self.done = true;
        for d in self.idx.iter_mut().rev() {
            *d += 1;
            if *d < self.base {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(out)
    }
}

fn odometer(q: usize, base: usize) -> Odometer {
    Odometer {
        idx: vec![0; q],
        base,
        done: base == 0 && q > 0,
    }
}

impl HittingSet {
    /// Number of coordinates of every point.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Field the coordinates lie in.
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn mode(&self) -> SearchMode {
        self.mode
    }

    /// Guarantee a Zero verdict earns once the set is exhausted.
    pub fn exhaustion_guarantee(&self) -> Guarantee {
        self.exhaustion
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn grid(&self) -> &[Scalar] {
        &self.grid
    }

    /// Total number of points, when it can be computed.
    pub fn cardinality(&self) -> Option<&BigUint> {
        self.cardinality.as_ref()
    }

    pub fn describe(&self) -> Value {
        json!({
            "construction": self.construction.as_str(),
            "mode": self.mode.as_str(),
            "n": self.n,
            "field": self.field,
            "grid": self.grid.len(),
            "cardinality": self.cardinality.as_ref().map(ToString::to_string),
            "provenance": self.provenance,
            "params": self.params,
        })
    }

    /// Points in enumeration order.
    pub fn points(&self) -> Box<dyn Iterator<Item = Vec<Scalar>> + '_> {
        let base = self.grid.len();
        let grid = &self.grid;
        match &self.blocks {
            Blocks::Identity(q) => Box::new(odometer(*q, base).map(move |a| a.iter().map(|&i| grid[i].clone()).collect())),
            Blocks::Fixed(maps) => Box::new(maps.iter().flat_map(move |m| {
                odometer(m.q(), base).map(move |a| {
                    let a: Vec<Scalar> = a.iter().map(|&i| grid[i].clone()).collect();
                    m.point(&a)
                })
            })),
            Blocks::Lazy { space, build } => Box::new(space.iter().flat_map(move |cand| {
                let m = build(&cand);
                odometer(m.q(), base).map(move |a| {
                    let a: Vec<Scalar> = a.iter().map(|&i| grid[i].clone()).collect();
                    m.point(&a)
                })
            })),
        }
    }
}

fn first_elements(field: FieldSpec, count: u64) -> Vec<Scalar> {
    (0..count).map(|i| field.element(i)).collect()
}

fn small(v: &BigUint, what: &'static str) -> Result<u64> {
    v.to_u64()
        .filter(|&x| x <= 1 << 24)
        .ok_or_else(|| Error::budget(what, v, 1u64 << 24))
}

/// `H^r` for distinct `values` with `|H| >= d + 1`: hits every nonzero
/// polynomial of degree `<= d` in `r` variables.
pub fn sz_grid(values: Vec<Scalar>, r: usize, d: u32) -> Result<HittingSet> {
    if values.len() < d as usize + 1 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least {} values, got {}",
            d as u64 + 1,
            values.len()
        )));
    }
    let field = values[0].field();
    for (i, v) in values.iter().enumerate() {
        field.check(&v.field())?;
        if values[..i].contains(v) {
            return Err(Error::InvalidArgument(format!("grid value {v} repeated")));
        }
    }
    Ok(HittingSet {
        n: r,
        field,
        construction: Construction::Grid,
        mode: SearchMode::PaperExact,
        exhaustion: Guarantee::Certified,
        provenance: "sz-grid".into(),
        params: json!({"r": r, "d": d, "H": values.iter().map(ToString::to_string).collect::<Vec<_>>()}),
        cardinality: Some(BigUint::from(values.len()).pow(r as u32)),
        grid: values,
        blocks: Blocks::Identity(r),
    })
}

/// Field holding `H1` (paper-exact) or a comfortable adaptive range, and `H2`.
fn point_field(field: FieldSpec, mode: SearchMode, h1: &BigUint, h2: u64) -> FieldSpec {
    let min = match mode {
        SearchMode::PaperExact => h1 + 1u32,
        SearchMode::Adaptive => BigUint::from(ADAPTIVE_FIELD_SIZE),
    };
    field.with_at_least(&min.max(BigUint::from(h2)))
}

fn schedule_space(mode: SearchMode, p_max: &BigUint, h1: &BigUint, per_p: BigUint, field: FieldSpec, subsets: Option<(usize, usize)>) -> CandidateSpace {
    let h1 = h1.clone();
    CandidateSpace {
        mode,
        p_max: p_max.clone(),
        c_count: Box::new(move |p| match mode {
            SearchMode::PaperExact => h1.clone(),
            SearchMode::Adaptive => &per_p * p,
        }),
        nonzero: nonzero_count(field),
        subsets,
    }
}

/// Paper-exact size: `p_max · min(|H1|, q - 1) · subsets · |H2|^dim`.
fn paper_cardinality(mode: SearchMode, p_max: &BigUint, h1: &BigUint, field: FieldSpec, subsets: BigUint, grid: usize, dim: usize) -> Option<BigUint> {
    if mode != SearchMode::PaperExact {
        return None;
    }
    let c = match nonzero_count(field) {
        Some(q) => h1.clone().min(q),
        None => h1.clone(),
    };
    Some(p_max * c * subsets * BigUint::from(grid).pow(dim as u32))
}

fn binomial(n: usize, r: usize) -> BigUint {
    (0..r).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// The Ψ-based set for degree-`d` circuits whose inputs are `ℓ`-sparse,
/// of degree `<= δ` and of transcendence degree `<= r`, over `field`
/// (`ch = 0` or `ch > δ^r`).
pub fn sparse_inputs(params: &ScheduleParams, field: FieldSpec, mode: SearchMode) -> Result<HittingSet> {
    characteristic_gate(field, params.delta as u32, params.r as usize)?;
    if params.r > params.n {
        return Err(Error::InvalidArgument(format!("r = {} exceeds n = {}", params.r, params.n)));
    }
    let sched = schedule(ScheduleKind::SparseInputs, params)?;
    let h2 = small(&sched.h2, "grid size")?;
    let field = point_field(field, mode, &sched.h1, h2);
    let (n, r) = (params.n as usize, params.r as usize);
    let (d1, d2) = (sched.d[0].clone(), sched.d[1].clone());
    let per_p = BigUint::from(params.delta * params.r);
    let space = schedule_space(mode, &sched.p_max, &sched.h1, per_p, field, None);
    let cardinality = paper_cardinality(mode, &sched.p_max, &sched.h1, field, BigUint::one(), h2 as usize, r + 1);
    Ok(HittingSet {
        n,
        field,
        construction: Construction::SparseInputs,
        mode,
        exhaustion: exhaustion(mode),
        provenance: provenance(mode, Construction::SparseInputs),
        params: sched.to_json(),
        grid: first_elements(field, h2),
        cardinality,
        blocks: Blocks::Lazy {
            space,
            build: Box::new(move |c| {
                PsiMap::new(n, r, d1.clone(), d2.clone(), c.p, field.element_big(&c.c_index))
                    .expect("schedule parameters are valid")
                    .affine()
            }),
        },
    })
}

/// The Φ-based set for degree-`d` circuits whose inputs have degree `<= δ`
/// and transcendence degree `<= r`, in any characteristic.
pub fn arbitrary_char(params: &ScheduleParams, field: FieldSpec, mode: SearchMode) -> Result<HittingSet> {
    if params.r > params.n {
        return Err(Error::InvalidArgument(format!("r = {} exceeds n = {}", params.r, params.n)));
    }
    let sched = schedule(ScheduleKind::ArbitraryChar, params)?;
    let h2 = small(&sched.h2, "grid size")?;
    let field = point_field(field, mode, &sched.h1, h2);
    let (n, r) = (params.n as usize, params.r as usize);
    let d = sched.d[0].clone();
    let per_p = BigUint::from(params.delta).pow(params.r as u32) * BigUint::from(params.r);
    let space = schedule_space(mode, &sched.p_max, &sched.h1, per_p, field, Some((n, r)));
    let cardinality = paper_cardinality(mode, &sched.p_max, &sched.h1, field, binomial(n, r), h2 as usize, r);
    Ok(HittingSet {
        n,
        field,
        construction: Construction::ArbitraryChar,
        mode,
        exhaustion: exhaustion(mode),
        provenance: provenance(mode, Construction::ArbitraryChar),
        params: sched.to_json(),
        grid: first_elements(field, h2),
        cardinality,
        blocks: Blocks::Lazy {
            space,
            build: Box::new(move |c| {
                PhiMap::new(n, c.subset.clone(), d.clone(), c.p, field.element_big(&c.c_index))
                    .expect("schedule parameters are valid")
                    .affine()
            }),
        },
    })
}

/// Parameters of the depth-4 construction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Depth4Params {
    pub n: usize,
    pub delta: u32,
    pub k: usize,
    pub s: usize,
}

/// The Ψ-based set for `ΣΠΣΠ_δ(k, s, n)` circuits with rank bound `R`
/// (`R = 1` for `k = 2`, where no characteristic condition applies).
pub fn depth4(params: Depth4Params, bound: RankBound, field: FieldSpec, mode: SearchMode) -> Result<HittingSet> {
    let Depth4Params { n, delta, k, s } = params;
    let big_r = depth4::resolve_rank_bound(bound, delta, k, s);
    if k >= 3 {
        characteristic_gate(field, delta, big_r)?;
    }
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
    let r = big_r.min(n).max(1);
    let h2 = small(&sched.h2, "grid size")?;
    let field = point_field(field, mode, &sched.h1, h2);
    let (d1, d2) = (sched.d[0].clone(), sched.d[1].clone());
    let per_p = BigUint::from(2u32).pow(k as u32 + 2)
        * BigUint::from(k * k * r * s * s)
        * BigUint::from(delta).pow(4);
    let space = schedule_space(mode, &sched.p_max, &sched.h1, per_p, field, None);
    let cardinality = paper_cardinality(mode, &sched.p_max, &sched.h1, field, BigUint::one(), h2 as usize, r + 1);
    let mut info = sched.to_json();
    info["R"] = json!(big_r);
    Ok(HittingSet {
        n,
        field,
        construction: Construction::Depth4,
        mode,
        exhaustion: exhaustion(mode),
        provenance: provenance(mode, Construction::Depth4),
        params: info,
        grid: first_elements(field, h2),
        cardinality,
        blocks: Blocks::Lazy {
            space,
            build: Box::new(move |c| {
                PsiMap::new(n, r, d1.clone(), d2.clone(), c.p, field.element_big(&c.c_index))
                    .expect("schedule parameters are valid")
                    .affine()
            }),
        },
    })
}

fn exhaustion(mode: SearchMode) -> Guarantee {
    match mode {
        SearchMode::PaperExact => Guarantee::Certified,
        SearchMode::Adaptive => Guarantee::Corpus,
    }
}

fn provenance(mode: SearchMode, c: Construction) -> String {
    format!("{}:{}", mode.as_str(), c.as_str())
}

fn certified_set(n: usize, map: AffineMap, construction: Construction, grid_size: u64, params: Value) -> HittingSet {
    let field = map.field();
    let q = map.q();
    HittingSet {
        n,
        field,
        construction,
        mode: SearchMode::Adaptive,
        exhaustion: Guarantee::Corpus,
        provenance: format!("adaptive:{}:certified-map", construction.as_str()),
        params,
        grid: first_elements(field, grid_size),
        cardinality: Some(BigUint::from(grid_size).pow(q as u32)),
        blocks: Blocks::Fixed(vec![map]),
    }
}

fn search_options_for(field: FieldSpec, grid: u64, opts: &SearchOptions) -> SearchOptions {
    let min = BigUint::from(ADAPTIVE_FIELD_SIZE.max(grid));
    SearchOptions {
        field: Some(opts.field.unwrap_or_else(|| field.with_at_least(&min))),
        ..*opts
    }
}

/// A certified Ψ for the inputs of `c` composed with the grid `H2^(r+1)`,
/// `|H2| = deg(c) + 1`.
pub fn sparse_inputs_certified(c: &ComposedCircuit, opts: &SearchOptions) -> Result<HittingSet> {
    let fs = c.inputs();
    let grid = c.degree_bound() as u64 + 1;
    let r = indep::trdeg(fs, &opts.trdeg)?.r.max(1);
    let cert = search_psi(fs, r, &search_options_for(c.field(), grid, opts))?;
    let params = json!({"r": r, "map": cert.map.to_json(), "candidates": cert.candidates});
    Ok(certified_set(c.nvars(), cert.map.affine(), Construction::SparseInputs, grid, params))
}

/// A certified Φ for the inputs of `c` composed with the grid `H2^r`.
pub fn arbitrary_char_certified(c: &ComposedCircuit, opts: &SearchOptions) -> Result<HittingSet> {
    let fs = c.inputs();
    let grid = c.degree_bound() as u64 + 1;
    let r = indep::trdeg(fs, &opts.trdeg)?.r;
    let cert = search_phi(fs, r, &search_options_for(c.field(), grid, opts))?;
    let params = json!({"r": r, "map": cert.map.to_json(), "candidates": cert.candidates});
    Ok(certified_set(c.nvars(), cert.map.affine(), Construction::ArbitraryChar, grid, params))
}

/// A Ψ certified for every row subset of `c` composed with `H2^(r+1)`,
/// `|H2| = δs + 1`.
pub fn depth4_certified(c: &Depth4Circuit, bound: RankBound, opts: &SearchOptions) -> Result<HittingSet> {
    let grid = c.delta() as u64 * c.s() as u64 + 1;
    let m = depth4::search_map(c, bound, &search_options_for(c.field(), grid, opts))?;
    let params = m.to_json();
    Ok(certified_set(c.nvars(), m.map.affine(), Construction::Depth4, grid, params))
}

#[derive(Clone, Copy, Debug)]
pub struct PitOptions {
    pub max_points: u64,
    pub parallelism: Parallelism,
}

impl Default for PitOptions {
    fn default() -> Self {
        PitOptions {
            max_points: DEFAULT_MAX_POINTS,
            parallelism: Parallelism::Parallel,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Outcome {
    Zero,
    Nonzero { witness: Vec<Scalar>, value: Scalar },
    /// The point budget ran out first.
    Inconclusive,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PitVerdict {
    pub outcome: Outcome,
    /// Points evaluated, including the witness.
    pub points_exhausted: u64,
    pub guarantee: Guarantee,
    /// `paper-exact`, `adaptive` or `randomized`.
    pub mode: String,
    pub provenance: String,
    /// Field the witness coordinates lie in.
    pub field: FieldSpec,
}

impl PitVerdict {
    pub fn is_zero(&self) -> bool {
        self.outcome == Outcome::Zero
    }

    pub fn is_nonzero(&self) -> bool {
        matches!(self.outcome, Outcome::Nonzero { .. })
    }

    pub fn outcome_str(&self) -> &'static str {
        match self.outcome {
            Outcome::Zero => "zero",
            Outcome::Nonzero { .. } => "nonzero",
            Outcome::Inconclusive => "inconclusive-budget",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "outcome": self.outcome_str(),
            "points_exhausted": self.points_exhausted,
            "guarantee": self.guarantee.as_str(),
            "mode": self.mode,
            "provenance": self.provenance,
            "field": self.field,
        });
        if let Outcome::Nonzero { witness, value } = &self.outcome {
            v["witness"] = json!(witness.iter().map(ToString::to_string).collect::<Vec<_>>());
            v["value"] = json!(value.to_string());
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Json(format!("verdict: missing or invalid {what:?}"));
        let text = |k: &str| v.get(k).and_then(Value::as_str).ok_or_else(|| bad(k));
        let field: FieldSpec = serde_json::from_value(v.get("field").cloned().ok_or_else(|| bad("field"))?)?;
        let outcome = match text("outcome")? {
            "zero" => Outcome::Zero,
            "inconclusive-budget" => Outcome::Inconclusive,
            "nonzero" => {
                let witness = v
                    .get("witness")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("witness"))?
                    .iter()
                    .map(|x| field.parse_scalar(x.as_str().ok_or_else(|| bad("witness"))?))
                    .collect::<Result<Vec<_>>>()?;
                Outcome::Nonzero {
                    witness,
                    value: field.parse_scalar(text("value")?)?,
                }
            }
            _ => return Err(bad("outcome")),
        };
        Ok(PitVerdict {
            outcome,
            points_exhausted: v.get("points_exhausted").and_then(Value::as_u64).ok_or_else(|| bad("points_exhausted"))?,
            guarantee: Guarantee::parse(text("guarantee")?).ok_or_else(|| bad("guarantee"))?,
            mode: text("mode")?.to_string(),
            provenance: text("provenance")?.to_string(),
            field,
        })
    }

    /// Re-evaluates a Nonzero witness; other outcomes carry nothing to check.
    pub fn verify(&self, oracle: &dyn Blackbox) -> bool {
        match &self.outcome {
            Outcome::Nonzero { witness, value } => {
                witness.len() == oracle.arity()
                    && self.field.contains(&oracle.field())
                    && witness.iter().all(|x| x.field() == self.field)
                    && !value.is_zero()
                    && oracle.query(witness) == *value
            }
            _ => true,
        }
    }
}

/// Evaluates `oracle` on `hs` until a nonzero value appears or the set or
/// the point budget is exhausted.
pub fn pit(oracle: &dyn Blackbox, hs: &HittingSet, opts: &PitOptions) -> Result<PitVerdict> {
    if oracle.arity() != hs.n() {
        return Err(Error::ArityMismatch {
            expected: oracle.arity(),
            got: hs.n(),
        });
    }
    if !hs.field().contains(&oracle.field()) {
        return Err(Error::FieldMismatch(oracle.field(), hs.field()));
    }
    let verdict = |outcome, points, guarantee| PitVerdict {
        outcome,
        points_exhausted: points,
        guarantee,
        mode: hs.mode().as_str().into(),
        provenance: hs.provenance().into(),
        field: hs.field(),
    };
    let mut points = hs.points();
    let mut done: u64 = 0;
    loop {
        let room = (opts.max_points - done).min(CHUNK as u64) as usize;
        let chunk: Vec<Vec<Scalar>> = points.by_ref().take(room).collect();
        if chunk.is_empty() {
            if done >= opts.max_points && points.next().is_some() {
                return Ok(verdict(Outcome::Inconclusive, done, Guarantee::Inconclusive));
            }
            return Ok(verdict(Outcome::Zero, done, hs.exhaustion_guarantee()));
        }
        let hit = exec::find_map_first(&chunk, opts.parallelism, |a| {
            let v = oracle.query(a);
            (!v.is_zero()).then_some(v)
        });
        if let Some((i, value)) = hit {
            let witness = chunk[i].clone();
            return Ok(verdict(Outcome::Nonzero { witness, value }, done + i as u64 + 1, Guarantee::Certified));
        }
        done += chunk.len() as u64;
    }
}

/// Which construction drives [`pit_composed`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComposedKind {
    /// Ψ; needs `ch = 0` or `ch > δ^r`.
    SparseInputs,
    /// Φ; any characteristic.
    ArbitraryChar,
}

/// PIT for `C(f_1..f_m)`. Adaptive mode exhausts a certified map; paper-exact
/// mode walks the full schedule with `r` (default: the inputs' trdeg).
pub fn pit_composed(
    c: &ComposedCircuit,
    kind: ComposedKind,
    r: Option<usize>,
    pit_opts: &PitOptions,
    search: &SearchOptions,
) -> Result<PitVerdict> {
    let hs = match search.mode {
        SearchMode::Adaptive => match kind {
            ComposedKind::SparseInputs => sparse_inputs_certified(c, search)?,
            ComposedKind::ArbitraryChar => arbitrary_char_certified(c, search)?,
        },
        SearchMode::PaperExact => {
            let r = match r {
                Some(r) => r,
                None => {
                    let cert = indep::trdeg(c.inputs(), &search.trdeg)?;
                    if !cert.is_exact() {
                        return Err(Error::budget("exact transcendence degree of the inputs", "more", "the annihilator budget"));
                    }
                    cert.r
                }
            };
            let params = ScheduleParams {
                n: c.nvars() as u64,
                d: c.degree_bound().max(1) as u64,
                r: r.max(1) as u64,
                delta: max_degree(c.inputs()) as u64,
                ell: c.ell() as u64,
                ..Default::default()
            };
            match kind {
                ComposedKind::SparseInputs => sparse_inputs(&params, c.field(), SearchMode::PaperExact)?,
                ComposedKind::ArbitraryChar => arbitrary_char(&params, c.field(), SearchMode::PaperExact)?,
            }
        }
    };
    pit(c, &hs, pit_opts)
}

/// PIT for a depth-4 circuit: adaptive mode exhausts a certified map,
/// paper-exact mode walks the full schedule.
pub fn pit_depth4(c: &Depth4Circuit, bound: RankBound, pit_opts: &PitOptions, search: &SearchOptions) -> Result<PitVerdict> {
    let hs = match search.mode {
        SearchMode::Adaptive => depth4_certified(c, bound, search)?,
        SearchMode::PaperExact => depth4(
            Depth4Params {
                n: c.nvars(),
                delta: c.delta().max(1),
                k: c.k(),
                s: c.s(),
            },
            bound,
            c.field(),
            SearchMode::PaperExact,
        )?,
    };
    pit(c, &hs, pit_opts)
}

/// PIT for any circuit file. Composed circuits go through Ψ, or Φ when the
/// characteristic is too small for Ψ; a plain DAG is treated as composed with
/// the variables themselves.
pub fn pit_circuit(c: &CircuitFile, bound: RankBound, pit_opts: &PitOptions, search: &SearchOptions) -> Result<PitVerdict> {
    let composed = |cc: &ComposedCircuit| match pit_composed(cc, ComposedKind::SparseInputs, None, pit_opts, search) {
        Err(Error::CharacteristicGate { .. }) => pit_composed(cc, ComposedKind::ArbitraryChar, None, pit_opts, search),
        other => other,
    };
    match c {
        CircuitFile::Depth4(d) => pit_depth4(d, bound, pit_opts, search),
        CircuitFile::Composed(cc) => composed(cc),
        CircuitFile::Dag(dag) => {
            let vars = (0..dag.nvars()).map(|i| SparsePoly::var(dag.field(), dag.nvars(), i)).collect();
            composed(&ComposedCircuit::new(dag.clone(), vars)?)
        }
    }
}

/// Schwartz–Zippel cross-check: `trials` random points from a field with at
/// least `max(1024, 2·deg)` elements. A Zero here claims nothing.
pub fn pit_randomized(oracle: &dyn Blackbox, trials: u64, seed: u64) -> Result<PitVerdict> {
    let deg = oracle.degree_bound().unwrap_or(0) as u64;
    let field = oracle
        .field()
        .with_at_least(&BigUint::from(ADAPTIVE_FIELD_SIZE.max(2 * deg)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let a: Vec<Scalar> = (0..oracle.arity()).map(|_| field.random(&mut rng)).collect();
        let v = oracle.query(&a);
        if !v.is_zero() {
            return Ok(PitVerdict {
                outcome: Outcome::Nonzero { witness: a, value: v },
                points_exhausted: t + 1,
                guarantee: Guarantee::Certified,
                mode: "randomized".into(),
                provenance: format!("randomized:seed={seed}"),
                field,
            });
        }
    }
    Ok(PitVerdict {
        outcome: Outcome::Zero,
        points_exhausted: trials,
        guarantee: Guarantee::Inconclusive,
        mode: "randomized".into(),
        provenance: format!("randomized:seed={seed}"),
        field,
    })
}

#[cfg(test)]
mod tests;
