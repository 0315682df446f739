//! Certified searches for faithful `(I, p, c)`.
//!
//! Candidates are scanned in a fixed order in parallel chunks, and the winner
//! is always the first certified candidate in that order. Paper-exact mode
//! runs p ascending, then c, then I lexicographic. Adaptive mode interleaves
//! `(p, c)` so that a bad prime cannot hold the scan for long.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::schedule::{schedule, ParamSchedule, ScheduleKind, ScheduleParams};
use super::{PhiMap, PsiMap};
use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};
use crate::field::FieldSpec;
use crate::indep::{self, degree_power, max_degree, TrdegCertificate, TrdegOptions};
use crate::poly::SparsePoly;
use crate::primes;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SearchMode {
    /// `p` over every integer in `[p_max]`, `c` over the first `|H1|`
    /// nonzero field elements.
    PaperExact,
    /// `p` over primes, `c` over the first `size(p)` nonzero elements, where
    /// `size(p)` is the subset size the faithfulness lemma promises to contain
    /// a good `c`. Round `t` admits the `t`-th prime and tries the next `c`
    /// for every prime admitted so far.
    #[default]
    Adaptive,
}

impl SearchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::PaperExact => "paper-exact",
            SearchMode::Adaptive => "adaptive",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub mode: SearchMode,
    /// Candidates tried before giving up with a budget error.
    pub max_candidates: u64,
    pub parallelism: Parallelism,
    pub trdeg: TrdegOptions,
    /// Field that `c` is drawn from; must contain the input field. By default
    /// a finite input field is extended until it has enough elements.
    pub field: Option<FieldSpec>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: SearchMode::Adaptive,
            max_candidates: 100_000,
            parallelism: Parallelism::Parallel,
            trdeg: TrdegOptions::default(),
            field: None,
        }
    }
}

/// Fewest elements a field for adaptive `c` candidates should have.
pub(crate) const ADAPTIVE_FIELD_SIZE: u64 = 1 << 10;

/// The field to draw `c` from: `field` itself when it has at least `min`
/// elements, otherwise its smallest large-enough extension.
pub(crate) fn candidate_field(field: FieldSpec, min: &BigUint) -> FieldSpec {
    field.with_at_least(min)
}

/// A certified map with the evidence on both sides.
#[derive(Clone, Debug)]
pub struct Certified<M> {
    pub map: M,
    /// Transcendence degree of the inputs.
    pub source: TrdegCertificate,
    /// Transcendence degree of the images (equal to the source's).
    pub image: TrdegCertificate,
    /// Candidates examined, including the winner.
    pub candidates: u64,
}

/// Lazy enumeration of `(p, c-index, subset)` triples.
pub(crate) struct CandidateSpace {
    pub mode: SearchMode,
    pub p_max: BigUint,
    /// Number of `c` values to try for a given `p`.
    pub c_count: Box<dyn Fn(u64) -> BigUint + Send + Sync>,
    /// Number of nonzero field elements available.
    pub nonzero: Option<BigUint>,
    /// `Some((n, r))` to enumerate `r`-subsets of `[n]` (for Φ).
    pub subsets: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Candidate {
    pub p: u64,
    pub c_index: BigUint,
    pub subset: Vec<usize>,
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let r = c.len();
    for i in (0..r).rev() {
        if c[i] < n - r + i {
            c[i] += 1;
            for j in i + 1..r {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl CandidateSpace {
    fn count(&self, p: u64) -> BigUint {
        let count = (self.c_count)(p);
        match &self.nonzero {
            Some(avail) => count.min(avail.clone()),
            None => count,
        }
    }

    fn subsets(&self) -> impl Iterator<Item = Vec<usize>> {
        let (n, r) = self.subsets.unwrap_or((0, 0));
        let mut cur: Option<Vec<usize>> = Some((0..r).collect());
        std::iter::from_fn(move || {
            let out = cur.take()?;
            let mut next = out.clone();
            if next_combination(&mut next, n) {
                cur = Some(next);
            }
            Some(out)
        })
    }

    /// `(p, c-index)` pairs. Paper-exact mode runs through every `c` of one
    /// `p` before the next; adaptive mode goes in rounds, each admitting the
    /// next prime and advancing every admitted prime by one `c`.
    fn pairs(&self) -> Box<dyn Iterator<Item = (u64, BigUint)> + '_> {
        let p_cap = self.p_max.to_u64().unwrap_or(u64::MAX);
        match self.mode {
            SearchMode::PaperExact => Box::new((1..=p_cap).flat_map(move |p| {
                let count = self.count(p);
                let mut c = BigUint::zero();
                std::iter::from_fn(move || {
                    if c >= count {
                        return None;
                    }
                    c += 1u32;
                    Some((p, c.clone()))
                })
            })),
            SearchMode::Adaptive => {
                let mut primes = primes::primes().take_while(move |&p| p <= p_cap).fuse();
                // (p, last c issued, count)
                let mut active: Vec<(u64, BigUint, BigUint)> = Vec::new();
                let mut round: std::vec::IntoIter<(u64, BigUint)> = Vec::new().into_iter();
                Box::new(std::iter::from_fn(move || loop {
                    if let Some(x) = round.next() {
                        return Some(x);
                    }
                    if let Some(p) = primes.next() {
                        active.push((p, BigUint::zero(), self.count(p)));
                    }
                    active.retain(|(_, c, count)| c < count);
                    if active.is_empty() {
                        return None;
                    }
                    let next: Vec<(u64, BigUint)> = active
                        .iter_mut()
                        .map(|(p, c, _)| {
                            *c += 1u32;
                            (*p, c.clone())
                        })
                        .collect();
                    round = next.into_iter();
                }))
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Candidate> + '_ {
        self.pairs().flat_map(move |(p, c_index)| {
            self.subsets().map(move |subset| Candidate {
                p,
                c_index: c_index.clone(),
                subset,
            })
        })
    }
}

const CHUNK: usize = 64;

/// First candidate (in enumeration order) accepted by `test`.
pub(crate) fn scan<T, F>(
    space: &CandidateSpace,
    max_candidates: u64,
    par: Parallelism,
    test: F,
) -> Result<(Candidate, T, u64)>
where
    T: Send,
    F: Fn(&Candidate) -> Result<Option<T>> + Sync + Send,
{
    let mut it = space.iter();
    let mut tried: u64 = 0;
    loop {
        let room = (max_candidates - tried).min(CHUNK as u64) as usize;
        let chunk: Vec<Candidate> = it.by_ref().take(room).collect();
        if chunk.is_empty() {
            return Err(if tried >= max_candidates {
                Error::budget("map candidates", format!("more than {tried}"), max_candidates)
            } else {
                Error::Exhausted(tried)
            });
        }
        let hit = exec::find_map_first(&chunk, par, |cand| match test(cand) {
            Ok(Some(t)) => Some(Ok(t)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        });
        match hit {
            Some((i, res)) => {
                let t = res?;
                return Ok((chunk[i].clone(), t, tried + i as u64 + 1));
            }
            None => tried += chunk.len() as u64,
        }
    }
}

fn family_info(fs: &[SparsePoly]) -> Result<(FieldSpec, usize)> {
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

fn source_trdeg(fs: &[SparsePoly], r: usize, opts: &SearchOptions) -> Result<TrdegCertificate> {
    let source = indep::trdeg(fs, &opts.trdeg)?;
    if !source.is_exact() {
        return Err(Error::budget("exact transcendence degree of the inputs", "more", "the annihilator budget"));
    }
    if source.r > r {
        return Err(Error::InvalidArgument(format!(
            "transcendence degree {} exceeds r = {r}",
            source.r
        )));
    }
    Ok(source)
}

pub(crate) fn working_field(field: FieldSpec, opts: &SearchOptions, h1: &BigUint) -> Result<FieldSpec> {
    if let Some(f) = opts.field {
        if !f.contains(&field) {
            return Err(Error::FieldMismatch(field, f));
        }
        return Ok(f);
    }
    let min = match opts.mode {
        SearchMode::Adaptive => BigUint::from(ADAPTIVE_FIELD_SIZE),
        SearchMode::PaperExact => h1 + 1u32,
    };
    Ok(candidate_field(field, &min))
}

pub(crate) fn nonzero_count(field: FieldSpec) -> Option<BigUint> {
    field.size_big().map(|q| q - 1u32)
}

/// Certify `images` against the source transcendence degree.
fn certify(images: &[SparsePoly], want: usize, opts: &TrdegOptions) -> Result<Option<TrdegCertificate>> {
    let cert = indep::trdeg(images, opts)?;
    Ok((cert.r == want && cert.is_exact()).then_some(cert))
}

/// A faithful Φ for `fs` with `r` kept variables and `D = δ^(r+1) + 1`.
pub fn search_phi(fs: &[SparsePoly], r: usize, opts: &SearchOptions) -> Result<Certified<PhiMap>> {
    let delta = max_degree(fs) as u64;
    let d = BigUint::from(delta).pow(r as u32 + 1) + 1u32;
    search_phi_with(fs, r, &d, opts)
}

/// [`search_phi`] with an explicit `D` (at least `δ^(r+1) + 1`).
pub fn search_phi_with(fs: &[SparsePoly], r: usize, d: &BigUint, opts: &SearchOptions) -> Result<Certified<PhiMap>> {
    let (field, n) = family_info(fs)?;
    if r > n {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds n = {n}")));
    }
    let delta = max_degree(fs) as u64;
    if *d <= BigUint::from(delta).pow(r as u32 + 1) {
        return Err(Error::InvalidArgument("D must exceed δ^(r+1)".into()));
    }
    let source = source_trdeg(fs, r, opts)?;
    let sched = schedule(
        ScheduleKind::ArbitraryChar,
        &ScheduleParams {
            n: n as u64,
            d: 1,
            r: r.max(1) as u64,
            delta,
            ..Default::default()
        },
    )?;
    let work = working_field(field, opts, &sched.h1)?;
    let per_p = BigUint::from(degree_power(delta as u32, r).max(1)) * BigUint::from(r.max(1));
    let h1 = sched.h1.clone();
    let mode = opts.mode;
    let space = CandidateSpace {
        mode,
        p_max: sched.p_max,
        c_count: Box::new(move |p| match mode {
            SearchMode::PaperExact => h1.clone(),
            SearchMode::Adaptive => &per_p * p,
        }),
        nonzero: nonzero_count(work),
        subsets: Some((n, r)),
    };
    let (_, (map, image), tried) = scan(&space, opts.max_candidates, opts.parallelism, |cand| {
        let map = PhiMap::new(n, cand.subset.clone(), d.clone(), cand.p, work.element_big(&cand.c_index))?;
        let aff = map.affine();
        let images = fs.iter().map(|f| aff.apply(f)).collect::<Result<Vec<_>>>()?;
        Ok(certify(&images, source.r, &opts.trdeg)?.map(|c| (map, c)))
    })?;
    Ok(Certified {
        map,
        source,
        image,
        candidates: tried,
    })
}

/// Enforces `ch(K) = 0` or `ch(K) > δ^r`.
pub(crate) fn characteristic_gate(field: FieldSpec, delta: u32, r: usize) -> Result<()> {
    let ch = field.characteristic();
    let bound = degree_power(delta, r);
    if ch != 0 && (ch as u128) <= bound {
        return Err(Error::CharacteristicGate {
            characteristic: ch,
            bound: bound.to_string(),
        });
    }
    Ok(())
}

/// A faithful Ψ for `fs` with `D1 = (2δn)^(r+1)`, `D2 = 2`.
pub fn search_psi(fs: &[SparsePoly], r: usize, opts: &SearchOptions) -> Result<Certified<PsiMap>> {
    let (_, n) = family_info(fs)?;
    let delta = max_degree(fs) as u64;
    let d1 = (BigUint::from(2u32) * delta * n as u64).pow(r as u32 + 1);
    search_psi_with(fs, r, &d1, &BigUint::from(2u32), opts)
}

/// [`search_psi`] with explicit `D1 >= max(δr + 1, (n+1)^(r+1))` and `D2 >= 2`.
pub fn search_psi_with(
    fs: &[SparsePoly],
    r: usize,
    d1: &BigUint,
    d2: &BigUint,
    opts: &SearchOptions,
) -> Result<Certified<PsiMap>> {
    let (field, n) = family_info(fs)?;
    if r == 0 || r > n {
        return Err(Error::InvalidArgument(format!("r = {r} must lie in 1..={n}")));
    }
    let delta = max_degree(fs);
    characteristic_gate(field, delta, r)?;
    let lower = BigUint::from(delta as u64 * r as u64 + 1).max(BigUint::from(n as u64 + 1).pow(r as u32 + 1));
    if *d1 < lower || *d2 < BigUint::from(2u32) {
        return Err(Error::InvalidArgument(
            "need D1 >= max(δr+1, (n+1)^(r+1)) and D2 >= 2".into(),
        ));
    }
    let source = source_trdeg(fs, r, opts)?;
    let ell = fs.iter().map(SparsePoly::sparsity).max().unwrap_or(1).max(1);
    let sched = schedule(
        ScheduleKind::SparseInputs,
        &ScheduleParams {
            n: n as u64,
            d: 1,
            r: r as u64,
            delta: delta as u64,
            ell: ell as u64,
            ..Default::default()
        },
    )?;
    let work = working_field(field, opts, &sched.h1)?;
    let per_p = BigUint::from(delta as u64 * r as u64);
    let ((map, image), tried) = scan_psi(n, r, (d1, d2), work, &sched, per_p, opts, |map| {
        let aff = map.affine();
        let images = fs.iter().map(|f| aff.apply(f)).collect::<Result<Vec<_>>>()?;
        Ok(certify(&images, source.r, &opts.trdeg)?.map(|c| (map, c)))
    })?;
    Ok(Certified {
        map,
        source,
        image,
        candidates: tried,
    })
}

/// Scans Ψ candidates over `work` in the order fixed by `sched` and `opts.mode`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn scan_psi<T, F>(
    n: usize,
    r: usize,
    (d1, d2): (&BigUint, &BigUint),
    work: FieldSpec,
    sched: &ParamSchedule,
    per_p: BigUint,
    opts: &SearchOptions,
    test: F,
) -> Result<(T, u64)>
where
    T: Send,
    F: Fn(PsiMap) -> Result<Option<T>> + Sync + Send,
{
    let h1 = sched.h1.clone();
    let mode = opts.mode;
    let space = CandidateSpace {
        mode,
        p_max: sched.p_max.clone(),
        c_count: Box::new(move |p| match mode {
            SearchMode::PaperExact => h1.clone(),
            SearchMode::Adaptive => &per_p * p,
        }),
        nonzero: nonzero_count(work),
        subsets: None,
    };
    let (_, t, tried) = scan(&space, opts.max_candidates, opts.parallelism, |cand| {
        test(PsiMap::new(n, r, d1.clone(), d2.clone(), cand.p, work.element_big(&cand.c_index))?)
    })?;
    Ok((t, tried))
}

impl<M> Certified<M> {
    /// Recomputes both transcendence degrees from scratch.
    pub fn verify_with(&self, fs: &[SparsePoly], apply: impl Fn(&SparsePoly) -> Result<SparsePoly>) -> Result<bool> {
        let images = fs.iter().map(apply).collect::<Result<Vec<_>>>()?;
        let opts = TrdegOptions::default();
        let a = indep::trdeg(fs, &opts)?;
        let b = indep::trdeg(&images, &opts)?;
        Ok(a.is_exact()
            && b.is_exact()
            && a.r == b.r
            && a.r == self.source.r
            && self.source.verify(fs)?
            && self.image.verify(&images)?)
    }
}

impl Certified<PhiMap> {
    pub fn verify(&self, fs: &[SparsePoly]) -> Result<bool> {
        self.verify_with(fs, |f| self.map.apply(f))
    }
}

impl Certified<PsiMap> {
    pub fn verify(&self, fs: &[SparsePoly]) -> Result<bool> {
        self.verify_with(fs, |f| self.map.apply(f))
    }
}
