//! JSON circuit files. Depth-4:
//! `{"field":{..},"nvars":n,"kind":"depth4","delta":d,"rows":[["poly",..],..]}`
//! (with an optional `"s"` when the fan-in exceeds the longest row).
//! DAG: `{"field":{..},"nvars":n,"kind":"dag","nodes":[..],"output":id}` with
//! nodes `{"op":"input","index":i}`, `{"op":"const","value":"c"}`,
//! `{"op":"add","args":[..]}`, `{"op":"mul","args":[..]}`.
//! Composed: `{"field":{..},"nvars":n,"kind":"composed","outer":<dag>,"inputs":["poly",..]}`
//! where the outer DAG has one input per polynomial.

use serde::{Deserialize, Serialize};

use super::{Blackbox, Circuit, ComposedCircuit, Depth4Circuit, Node};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::SparsePoly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CircuitFile {
    Dag(Circuit),
    Depth4(Depth4Circuit),
    Composed(ComposedCircuit),
}

#[derive(Serialize, Deserialize)]
struct ComposedRepr {
    field: FieldSpec,
    nvars: usize,
    kind: String,
    outer: serde_json::Value,
    inputs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct Depth4Repr {
    field: FieldSpec,
    nvars: usize,
    kind: String,
    delta: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<usize>,
    rows: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum NodeRepr {
    Input { index: usize },
    Const { value: String },
    Add { args: Vec<usize> },
    Mul { args: Vec<usize> },
}

#[derive(Serialize, Deserialize)]
struct DagRepr {
    field: FieldSpec,
    nvars: usize,
    kind: String,
    nodes: Vec<NodeRepr>,
    output: usize,
}

#[derive(Deserialize)]
struct KindProbe {
    kind: String,
}

impl CircuitFile {
    pub fn from_json(text: &str) -> Result<CircuitFile> {
        let probe: KindProbe = serde_json::from_str(text)?;
        match probe.kind.as_str() {
            "depth4" => {
                let r: Depth4Repr = serde_json::from_str(text)?;
                let rows = r
                    .rows
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|t| SparsePoly::parse(t, r.field, r.nvars))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let c = match r.s {
                    Some(s) => Depth4Circuit::with_fanin(r.field, r.nvars, r.delta, s, rows)?,
                    None => Depth4Circuit::new(r.field, r.nvars, r.delta, rows)?,
                };
                Ok(CircuitFile::Depth4(c))
            }
            "dag" => {
                let r: DagRepr = serde_json::from_str(text)?;
                let nodes = r
                    .nodes
                    .into_iter()
                    .map(|n| {
                        Ok(match n {
                            NodeRepr::Input { index } => Node::Input(index),
                            NodeRepr::Const { value } => Node::Const(r.field.parse_scalar(&value)?),
                            NodeRepr::Add { args } => Node::Add(args),
                            NodeRepr::Mul { args } => Node::Mul(args),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CircuitFile::Dag(Circuit::new(r.field, r.nvars, nodes, r.output)?))
            }
            "composed" => {
                let r: ComposedRepr = serde_json::from_str(text)?;
                let outer = Circuit::from_json(&r.outer.to_string())?;
                r.field.check(&outer.field())?;
                let inputs = r
                    .inputs
                    .iter()
                    .map(|t| SparsePoly::parse(t, r.field, r.nvars))
                    .collect::<Result<Vec<_>>>()?;
                Ok(CircuitFile::Composed(ComposedCircuit::new(outer, inputs)?))
            }
            other => Err(Error::Json(format!("unknown circuit kind {other:?}"))),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            CircuitFile::Depth4(c) => c.to_json(),
            CircuitFile::Dag(c) => c.to_json(),
            CircuitFile::Composed(c) => c.to_json(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            CircuitFile::Dag(c) => c.field(),
            CircuitFile::Depth4(c) => c.field(),
            CircuitFile::Composed(c) => c.field(),
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            CircuitFile::Dag(c) => c.nvars(),
            CircuitFile::Depth4(c) => c.nvars(),
            CircuitFile::Composed(c) => c.nvars(),
        }
    }

    pub fn expand(&self, budget: usize) -> Result<SparsePoly> {
        match self {
            CircuitFile::Dag(c) => c.expand(budget),
            CircuitFile::Depth4(c) => c.expand(budget),
            CircuitFile::Composed(c) => c.expand(budget),
        }
    }

    fn oracle(&self) -> &dyn Blackbox {
        match self {
            CircuitFile::Dag(c) => c,
            CircuitFile::Depth4(c) => c,
            CircuitFile::Composed(c) => c,
        }
    }
}

impl Blackbox for CircuitFile {
    fn field(&self) -> FieldSpec {
        CircuitFile::field(self)
    }
    fn arity(&self) -> usize {
        self.nvars()
    }
    fn query(&self, point: &[Scalar]) -> Scalar {
        self.oracle().query(point)
    }
    fn degree_bound(&self) -> Option<u32> {
        self.oracle().degree_bound()
    }
}

impl ComposedCircuit {
    pub fn to_json(&self) -> String {
        let outer: serde_json::Value = serde_json::from_str(&self.outer.to_json()).expect("valid json");
        let r = ComposedRepr {
            field: self.field(),
            nvars: self.nvars(),
            kind: "composed".into(),
            outer,
            inputs: self.inputs.iter().map(ToString::to_string).collect(),
        };
        serde_json::to_string(&r).expect("serializable")
    }
}

impl Depth4Circuit {
    pub fn to_json(&self) -> String {
        let longest = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let r = Depth4Repr {
            field: self.field,
            nvars: self.nvars,
            kind: "depth4".into(),
            delta: self.delta,
            s: (self.s != longest).then_some(self.s),
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(ToString::to_string).collect())
                .collect(),
        };
        serde_json::to_string(&r).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Depth4Circuit> {
        match CircuitFile::from_json(text)? {
            CircuitFile::Depth4(c) => Ok(c),
            _ => Err(Error::Json("expected a depth4 circuit".into())),
        }
    }
}

impl Circuit {
    pub fn to_json(&self) -> String {
        let r = DagRepr {
            field: self.field,
            nvars: self.nvars,
            kind: "dag".into(),
            nodes: self
                .nodes
                .iter()
                .map(|n| match n {
                    Node::Input(i) => NodeRepr::Input { index: *i },
                    Node::Const(c) => NodeRepr::Const { value: c.to_string() },
                    Node::Add(a) => NodeRepr::Add { args: a.clone() },
                    Node::Mul(a) => NodeRepr::Mul { args: a.clone() },
                })
                .collect(),
            output: self.output,
        };
        serde_json::to_string(&r).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        match CircuitFile::from_json(text)? {
            CircuitFile::Dag(c) => Ok(c),
            _ => Err(Error::Json("expected a dag circuit".into())),
        }
    }
}
