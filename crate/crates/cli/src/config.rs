//! The run configuration: everything needed to reproduce an output, embedded
//! in that output as `"config"`.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::ValueEnum;
use faithful::circuit::DEFAULT_EXPAND_BUDGET;
use faithful::exec::Parallelism;
use faithful::hitting::{PitOptions, RankBound, DEFAULT_MAX_POINTS};
use faithful::indep::{TrdegMode, TrdegOptions, DEFAULT_ANNIHILATOR_BUDGET};
use faithful::maps::{SearchMode, SearchOptions};
use faithful::{Error, FieldSpec, SparsePoly};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    PaperExact,
    Adaptive,
}

impl From<Mode> for SearchMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::PaperExact => SearchMode::PaperExact,
            Mode::Adaptive => SearchMode::Adaptive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Auto,
    Jacobian,
    BruteForce,
}

impl From<Method> for TrdegMode {
    fn from(m: Method) -> Self {
        match m {
            Method::Auto => TrdegMode::Auto,
            Method::Jacobian => TrdegMode::Jacobian,
            Method::BruteForce => TrdegMode::BruteForce,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroTestArg {
    /// Expansion, falling back to the hitting set.
    Auto,
    Expand,
    HittingSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    SzGrid,
    SparseInputs,
    ArbitraryChar,
    Depth4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Phi,
    Psi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusArg {
    Composed,
    Depth4,
    SmallChar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetParams {
    pub n: u64,
    pub d: u64,
    pub r: u64,
    pub delta: u64,
    pub ell: u64,
    pub k: u64,
    pub s: u64,
}

/// One command with its own arguments. Input paths are kept as given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Task {
    Pit { input: PathBuf, randomized: Option<u64> },
    Trdeg { input: PathBuf, method: Method },
    Annihilator { input: PathBuf, cap: u32 },
    Depth4 { input: PathBuf, zero_test: ZeroTestArg },
    HittingSet { construction: Construction, params: SetParams },
    Faithful { input: PathBuf, kind: MapKind, r: Option<usize> },
    Corpus { kind: CorpusArg, p: u64, count: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub expand_terms: usize,
    pub pit_points: u64,
    pub annihilator_columns: usize,
    pub map_candidates: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            expand_terms: DEFAULT_EXPAND_BUDGET,
            pit_points: DEFAULT_MAX_POINTS,
            annihilator_columns: DEFAULT_ANNIHILATOR_BUDGET,
            map_candidates: SearchOptions::default().max_candidates,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankArg {
    Trivial,
    Given(usize),
    Conjecture,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub task: Task,
    /// As given by `--field`; input files carry their own.
    pub field: Option<FieldSpec>,
    pub mode: Mode,
    pub seed: u64,
    pub budgets: Budgets,
    pub rank_bound: RankArg,
    pub sequential: bool,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }

    pub fn from_json(v: &Value) -> anyhow::Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Json(format!("config: {e}")).into())
    }

    pub fn parallelism(&self) -> Parallelism {
        if self.sequential {
            Parallelism::Sequential
        } else {
            Parallelism::Parallel
        }
    }

    pub fn rank_bound(&self) -> RankBound {
        match self.rank_bound {
            RankArg::Trivial => RankBound::Trivial,
            RankArg::Given(r) => RankBound::Given(r),
            RankArg::Conjecture => RankBound::Conjecture,
        }
    }

    pub fn trdeg(&self, mode: TrdegMode) -> TrdegOptions {
        TrdegOptions {
            mode,
            annihilator_budget: self.budgets.annihilator_columns,
            seed: self.seed,
        }
    }

    pub fn search(&self) -> SearchOptions {
        SearchOptions {
            mode: self.mode.into(),
            max_candidates: self.budgets.map_candidates,
            parallelism: self.parallelism(),
            trdeg: self.trdeg(TrdegMode::Auto),
            field: None,
        }
    }

    pub fn pit(&self) -> PitOptions {
        PitOptions {
            max_points: self.budgets.pit_points,
            parallelism: self.parallelism(),
        }
    }

    /// The field of an input, checked against `--field`.
    pub fn resolve_field(&self, file: Option<FieldSpec>) -> anyhow::Result<FieldSpec> {
        match (file, self.field) {
            (Some(a), Some(b)) if a != b => bail!(Error::FieldMismatch(a, b)),
            (Some(a), _) | (None, Some(a)) => Ok(a),
            (None, None) => Ok(FieldSpec::rational()),
        }
    }
}

/// `rational`/`Q`, a prime `p`, or `p^k`, optionally written `F_p`/`F_p^k`.
pub fn parse_field(s: &str) -> Result<FieldSpec, String> {
    let t = s.trim();
    if matches!(t, "rational" | "Q" | "q") {
        return Ok(FieldSpec::rational());
    }
    let t = t.strip_prefix("F_").unwrap_or(t);
    let num = |x: &str| x.trim().parse::<u64>().map_err(|_| format!("bad field {s:?}: expected p, p^k or rational"));
    let spec = match t.split_once('^') {
        Some((p, k)) => {
            let k = u32::try_from(num(k)?).map_err(|_| format!("degree in {s:?} too large"))?;
            FieldSpec::extension(num(p)?, k)
        }
        None => FieldSpec::prime(num(t)?),
    };
    spec.map_err(|e| e.to_string())
}

/// A list of polynomials: `{"field": ..., "nvars": n, "polys": ["x1 + x2", ...]}`.
/// `field` may be omitted and supplied by `--field`.
pub struct PolyList {
    pub field: FieldSpec,
    pub nvars: usize,
    pub polys: Vec<SparsePoly>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyListFile {
    field: Option<FieldSpec>,
    nvars: usize,
    polys: Vec<String>,
}

impl PolyList {
    pub fn load(path: &Path, cfg: &RunConfig) -> anyhow::Result<Self> {
        let text = read(path)?;
        let file: PolyListFile =
            serde_json::from_str(&text).map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
        let field = cfg.resolve_field(file.field)?;
        let polys = file
            .polys
            .iter()
            .map(|s| SparsePoly::parse(s, field, file.nvars))
            .collect::<faithful::Result<Vec<_>>>()
            .with_context(|| format!("parsing {}", path.display()))?;
        Ok(PolyList {
            field,
            nvars: file.nvars,
            polys,
        })
    }
}

pub fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}
