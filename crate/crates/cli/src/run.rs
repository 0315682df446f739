//! Executes a [`RunConfig`], emitting JSON values one per output line.

use anyhow::{bail, Context};
use faithful::circuit::{CircuitFile, Depth4Circuit};
use faithful::corpus::{self, CorpusKind};
use faithful::depth4::{self, ZeroTest};
use faithful::hitting::{self, Depth4Params, Guarantee, HittingSet, Outcome, PitVerdict};
use faithful::indep::{self, TrdegMode};
use faithful::maps::{search_phi, search_psi, ScheduleParams};
use faithful::{Error, Vars};
use serde_json::{json, Value};

use crate::config::{read, Construction, CorpusArg, MapKind, PolyList, RunConfig, Task, ZeroTestArg};

pub type Emit<'a> = dyn FnMut(Value) -> anyhow::Result<()> + 'a;

/// Runs the task and returns the process exit code.
pub fn run(cfg: &RunConfig, emit: &mut Emit) -> anyhow::Result<u8> {
    let config = cfg.to_json();
    let with_config = |mut v: Value| {
        v["config"] = config.clone();
        v
    };
    match &cfg.task {
        Task::Pit { input, randomized } => {
            let c = load_circuit(input, cfg)?;
            let verdict = match randomized {
                Some(trials) => hitting::pit_randomized(&c, *trials, cfg.seed)?,
                None => hitting::pit_circuit(&c, cfg.rank_bound(), &cfg.pit(), &cfg.search())?,
            };
            emit(with_config(verdict.to_json()))?;
            Ok(verdict_code(&verdict))
        }
        Task::Trdeg { input, method } => {
            let list = PolyList::load(input, cfg)?;
            let cert = indep::trdeg(&list.polys, &cfg.trdeg((*method).into()))?;
            emit(with_config(json!({
                "field": list.field,
                "r": cert.r,
                "exact": cert.is_exact(),
                "certificate": cert.to_json(),
            })))?;
            Ok(0)
        }
        Task::Annihilator { input, cap } => {
            let list = PolyList::load(input, cfg)?;
            let a = indep::annihilator(&list.polys, *cap, cfg.budgets.annihilator_columns)?;
            emit(with_config(json!({
                "field": list.field,
                "cap": cap,
                "annihilator": a.map_or("none".to_string(), |a| a.display_with(Vars::Y).to_string()),
            })))?;
            Ok(0)
        }
        Task::Depth4 { input, zero_test } => {
            let c = load_depth4(input, cfg)?;
            let test = match zero_test {
                ZeroTestArg::Expand => ZeroTest::Expand {
                    budget: cfg.budgets.expand_terms,
                },
                ZeroTestArg::HittingSet => ZeroTest::HittingSet {
                    rank: cfg.rank_bound(),
                    max_points: cfg.budgets.pit_points,
                },
                ZeroTestArg::Auto => ZeroTest::Auto {
                    budget: cfg.budgets.expand_terms,
                    rank: cfg.rank_bound(),
                    max_points: cfg.budgets.pit_points,
                },
            };
            let report = depth4::analyze(&c, test, &cfg.trdeg(TrdegMode::Auto))?;
            emit(with_config(report.to_json()))?;
            Ok(0)
        }
        Task::HittingSet { construction, params } => {
            let hs = hitting_set(cfg, *construction, params)?;
            emit(json!({"hitting_set": hs.describe(), "max_points": cfg.budgets.pit_points, "config": config}))?;
            let (mut points, mut emitted) = (hs.points(), 0u64);
            let complete = loop {
                if emitted == cfg.budgets.pit_points {
                    break points.next().is_none();
                }
                let Some(point) = points.next() else { break true };
                emit(json!({"point": point.iter().map(ToString::to_string).collect::<Vec<_>>()}))?;
                emitted += 1;
            };
            emit(json!({"summary": {"points": emitted, "complete": complete}}))?;
            Ok(0)
        }
        Task::Faithful { input, kind, r } => {
            let list = PolyList::load(input, cfg)?;
            let opts = cfg.search();
            let r = match r {
                Some(r) => *r,
                None => {
                    let cert = indep::trdeg(&list.polys, &opts.trdeg)?;
                    if !cert.is_exact() {
                        bail!(Error::InvalidArgument(format!(
                            "only a lower bound r >= {} is known; pass --r",
                            cert.r
                        )));
                    }
                    cert.r
                }
            };
            let (map, source, image, candidates) = match kind {
                MapKind::Phi => {
                    let c = search_phi(&list.polys, r, &opts)?;
                    (c.map.to_json(), c.source, c.image, c.candidates)
                }
                MapKind::Psi => {
                    let c = search_psi(&list.polys, r, &opts)?;
                    (c.map.to_json(), c.source, c.image, c.candidates)
                }
            };
            emit(with_config(json!({
                "field": list.field,
                "r": r,
                "map": map,
                "source": source.to_json(),
                "image": image.to_json(),
                "candidates": candidates,
            })))?;
            Ok(0)
        }
        Task::Corpus { kind, p, count } => {
            let kind = match kind {
                CorpusArg::Composed => CorpusKind::Composed,
                CorpusArg::Depth4 => CorpusKind::Depth4,
                CorpusArg::SmallChar => CorpusKind::SmallChar(*p),
            };
            emit(json!({"corpus": kind.name(), "seed": cfg.seed, "count": count, "config": config}))?;
            let (mut agree, mut zeros) = (0u64, 0u64);
            for inst in corpus::instances(kind, cfg.seed, *count)? {
                let rec = corpus::judge(&inst, cfg.rank_bound(), &cfg.pit(), &cfg.search(), cfg.budgets.expand_terms)?;
                agree += u64::from(rec.agrees());
                zeros += u64::from(rec.constructed_zero);
                emit(rec.to_json())?;
            }
            emit(json!({"summary": {"instances": count, "agree": agree, "constructed_zero": zeros}}))?;
            Ok(if agree == *count { 0 } else { 1 })
        }
    }
}

/// 0 for a certified or corpus-level Zero, 1 for Nonzero, 2 otherwise.
pub fn verdict_code(v: &PitVerdict) -> u8 {
    match v.outcome {
        Outcome::Nonzero { .. } => 1,
        Outcome::Zero if v.guarantee != Guarantee::Inconclusive => 0,
        _ => 2,
    }
}

pub fn load_circuit(path: &std::path::Path, cfg: &RunConfig) -> anyhow::Result<CircuitFile> {
    let c = CircuitFile::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    cfg.resolve_field(Some(c.field()))?;
    Ok(c)
}

fn load_depth4(path: &std::path::Path, cfg: &RunConfig) -> anyhow::Result<Depth4Circuit> {
    let c = Depth4Circuit::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    cfg.resolve_field(Some(c.field()))?;
    Ok(c)
}

fn hitting_set(cfg: &RunConfig, construction: Construction, p: &crate::config::SetParams) -> anyhow::Result<HittingSet> {
    let field = cfg.field.unwrap_or_else(faithful::FieldSpec::default_prime);
    let mode = cfg.mode.into();
    let params = ScheduleParams {
        n: p.n,
        d: p.d,
        r: p.r,
        delta: p.delta,
        ell: p.ell,
        k: p.k,
        s: p.s,
    };
    let usize_of = |x: u64, what: &str| usize::try_from(x).map_err(|_| Error::InvalidArgument(format!("{what} too large")));
    Ok(match construction {
        Construction::SzGrid => {
            let d = u32::try_from(p.d).map_err(|_| Error::InvalidArgument("d too large".into()))?;
            if field.size().is_some_and(|q| q <= p.d) {
                bail!(Error::InvalidArgument(format!("{field} has fewer than d + 1 = {} elements", p.d + 1)));
            }
            let values = (0..=p.d).map(|i| field.element(i)).collect();
            hitting::sz_grid(values, usize_of(p.n, "n")?, d)?
        }
        Construction::SparseInputs => hitting::sparse_inputs(&params, field, mode)?,
        Construction::ArbitraryChar => hitting::arbitrary_char(&params, field, mode)?,
        Construction::Depth4 => {
            let delta = u32::try_from(p.delta).map_err(|_| Error::InvalidArgument("delta too large".into()))?;
            let dp = Depth4Params {
                n: usize_of(p.n, "n")?,
                delta,
                k: usize_of(p.k, "k")?,
                s: usize_of(p.s, "s")?,
            };
            hitting::depth4(dp, cfg.rank_bound(), field, mode)?
        }
    })
}
