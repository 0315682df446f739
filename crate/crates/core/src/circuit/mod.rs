//! Arithmetic circuits: general DAGs with n-ary add/mul gates, and depth-4
//! `ΣΠΣΠ_δ(k, s, n)` circuits `Σ_i Π_j f_ij` with sparse factors.

mod json;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::SparsePoly;

pub use json::CircuitFile;

/// Default term budget for [`Circuit::expand`] and [`Depth4Circuit::expand`].
pub const DEFAULT_EXPAND_BUDGET: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Node {
    /// Variable `x_{i+1}`.
    Input(usize),
    Const(Scalar),
    Add(Vec<usize>),
    Mul(Vec<usize>),
}

/// A DAG circuit. Nodes are stored in topological order (children precede
/// parents) and every node is reachable from `output`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Circuit {
    field: FieldSpec,
    nvars: usize,
    nodes: Vec<Node>,
    output: usize,
}

/// Evaluation-only access to a polynomial. Implementations must be
/// deterministic.
pub trait Blackbox: Sync {
    fn field(&self) -> FieldSpec;
    fn arity(&self) -> usize;
    /// Value at `point`. Callers guarantee `point.len() == arity()` and that
    /// all coordinates lie in `field()` or in one common extension of it.
    fn query(&self, point: &[Scalar]) -> Scalar;
    /// Declared upper bound on the total degree, if known.
    fn degree_bound(&self) -> Option<u32> {
        None
    }
}

/// Wraps a closure as a [`Blackbox`].
pub struct FnOracle<F> {
    pub field: FieldSpec,
    pub arity: usize,
    pub degree: Option<u32>,
    pub f: F,
}

impl<F: Fn(&[Scalar]) -> Scalar + Sync> Blackbox for FnOracle<F> {
    fn field(&self) -> FieldSpec {
        self.field
    }
    fn arity(&self) -> usize {
        self.arity
    }
    fn query(&self, point: &[Scalar]) -> Scalar {
        (self.f)(point)
    }
    fn degree_bound(&self) -> Option<u32> {
        self.degree
    }
}

impl Blackbox for SparsePoly {
    fn field(&self) -> FieldSpec {
        SparsePoly::field(self)
    }
    fn arity(&self) -> usize {
        self.nvars()
    }
    fn query(&self, point: &[Scalar]) -> Scalar {
        self.eval_unchecked(point)
    }
    fn degree_bound(&self) -> Option<u32> {
        Some(self.degree().unwrap_or(0))
    }
}

fn check_point(field: FieldSpec, nvars: usize, point: &[Scalar]) -> Result<()> {
    if point.len() != nvars {
        return Err(Error::ArityMismatch {
            expected: nvars,
            got: point.len(),
        });
    }
    let target = point.first().map_or(field, Scalar::field);
    if !target.contains(&field) {
        return Err(Error::FieldMismatch(field, target));
    }
    point.iter().try_for_each(|v| target.check(&v.field()))
}

/// The field the coordinates of `point` live in.
fn point_field(own: FieldSpec, point: &[Scalar]) -> FieldSpec {
    point.first().map_or(own, Scalar::field)
}

/// Upper bound on the number of monomials of degree `<= d` in `n` variables,
/// saturating at `cap + 1`.
fn monomial_count_bound(n: usize, d: u32, cap: usize) -> usize {
    // C(n + d, n), computed incrementally and clipped
    let mut acc: u128 = 1;
    for i in 1..=n as u128 {
        acc = acc * (d as u128 + i) / i;
        if acc > cap as u128 {
            return cap + 1;
        }
    }
    acc as usize
}

impl Circuit {
    pub fn new(field: FieldSpec, nvars: usize, nodes: Vec<Node>, output: usize) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidCircuit(m));
        if output >= nodes.len() {
            return bad(format!("output {output} out of range"));
        }
        for (id, node) in nodes.iter().enumerate() {
            match node {
                Node::Input(i) if *i >= nvars => {
                    return bad(format!("node {id}: input {i} out of range for {nvars} variables"))
                }
                Node::Const(c) if c.field() != field => return bad(format!("node {id}: constant field mismatch")),
                Node::Add(ch) | Node::Mul(ch) => {
                    if let Some(c) = ch.iter().find(|&&c| c >= id) {
                        return bad(format!("node {id}: child {c} does not precede it"));
                    }
                }
                _ => {}
            }
        }
        let mut reach = vec![false; nodes.len()];
        reach[output] = true;
        for id in (0..nodes.len()).rev() {
            if !reach[id] {
                continue;
            }
            if let Node::Add(ch) | Node::Mul(ch) = &nodes[id] {
                for &c in ch {
                    reach[c] = true;
                }
            }
        }
        if let Some(id) = reach.iter().position(|r| !r) {
            return bad(format!("node {id} is unreachable from the output"));
        }
        Ok(Circuit {
            field,
            nvars,
            nodes,
            output,
        })
    }

    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        Circuit {
            field,
            nvars,
            nodes: vec![Node::Const(field.zero())],
            output: 0,
        }
    }

    /// A sum-of-products circuit computing `f`.
    pub fn from_poly(f: &SparsePoly) -> Self {
        let mut b = CircuitBuilder::new(f.field(), f.nvars());
        let out = b.poly(f);
        b.finish(out)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        check_point(self.field, self.nvars, point)?;
        Ok(self.eval_unchecked(point))
    }

    fn eval_unchecked(&self, point: &[Scalar]) -> Scalar {
        let target = point_field(self.field, point);
        let mut vals: Vec<Scalar> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node {
                Node::Input(i) => point[*i].clone(),
                Node::Const(c) => c.lift(target),
                Node::Add(ch) => ch.iter().fold(target.zero(), |a, &c| &a + &vals[c]),
                Node::Mul(ch) => ch.iter().fold(target.one(), |a, &c| &a * &vals[c]),
            };
            vals.push(v);
        }
        vals.swap_remove(self.output)
    }

    /// Syntactic degree bound, computed bottom-up.
    pub fn degree_bound(&self) -> u32 {
        let mut deg: Vec<u32> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let d = match node {
                Node::Input(_) => 1,
                Node::Const(_) => 0,
                Node::Add(ch) => ch.iter().map(|&c| deg[c]).max().unwrap_or(0),
                Node::Mul(ch) => ch.iter().map(|&c| deg[c]).sum(),
            };
            deg.push(d);
        }
        deg[self.output]
    }

    /// The polynomial computed, failing with [`Error::Budget`] once an
    /// intermediate result could exceed `budget` terms.
    pub fn expand(&self, budget: usize) -> Result<SparsePoly> {
        let n = self.nvars;
        let mut polys: Vec<SparsePoly> = Vec::with_capacity(self.nodes.len());
        let mut degs: Vec<u32> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let (p, d) = match node {
                Node::Input(i) => (SparsePoly::var(self.field, n, *i), 1),
                Node::Const(c) => (SparsePoly::constant(self.field, n, c.clone()), 0),
                Node::Add(ch) => {
                    let est: usize = ch.iter().map(|&c| polys[c].sparsity()).sum();
                    let d = ch.iter().map(|&c| degs[c]).max().unwrap_or(0);
                    let est = est.min(monomial_count_bound(n, d, budget));
                    if est > budget {
                        return Err(Error::budget("expand", est, budget));
                    }
                    let mut acc = SparsePoly::zero(self.field, n);
                    for &c in ch {
                        acc = &acc + &polys[c];
                    }
                    (acc, d)
                }
                Node::Mul(ch) => {
                    let mut acc = SparsePoly::one(self.field, n);
                    let mut d = 0;
                    for &c in ch {
                        d += degs[c];
                        let est = acc
                            .sparsity()
                            .saturating_mul(polys[c].sparsity())
                            .min(monomial_count_bound(n, d, budget));
                        if est > budget {
                            return Err(Error::budget("expand", est, budget));
                        }
                        acc = &acc * &polys[c];
                    }
                    (acc, d)
                }
            };
            polys.push(p);
            degs.push(d);
        }
        Ok(polys.swap_remove(self.output))
    }

    /// `outer(inner_1, ..., inner_m)`: each input `y_i` of `outer` is replaced by
    /// a sum-of-products sub-DAG computing `inner[i]`.
    pub fn compose(outer: &Circuit, inner: &[SparsePoly]) -> Result<Circuit> {
        if inner.len() != outer.nvars {
            return Err(Error::ArityMismatch {
                expected: outer.nvars,
                got: inner.len(),
            });
        }
        let Some(first) = inner.first() else {
            return Err(Error::InvalidArgument("compose needs at least one inner polynomial".into()));
        };
        for f in inner {
            outer.field.check(&f.field())?;
            if f.nvars() != first.nvars() {
                return Err(Error::ArityMismatch {
                    expected: first.nvars(),
                    got: f.nvars(),
                });
            }
        }
        let mut b = CircuitBuilder::new(outer.field, first.nvars());
        let roots: Vec<usize> = inner.iter().map(|f| b.poly(f)).collect();
        let mut map = Vec::with_capacity(outer.nodes.len());
        for node in &outer.nodes {
            let id = match node {
                Node::Input(i) => roots[*i],
                Node::Const(c) => b.constant(c.clone()),
                Node::Add(ch) => b.add(ch.iter().map(|&c| map[c]).collect()),
                Node::Mul(ch) => b.mul(ch.iter().map(|&c| map[c]).collect()),
            };
            map.push(id);
        }
        Ok(b.finish(map[outer.output]))
    }
}

impl Blackbox for Circuit {
    fn field(&self) -> FieldSpec {
        self.field
    }
    fn arity(&self) -> usize {
        self.nvars
    }
    fn query(&self, point: &[Scalar]) -> Scalar {
        self.eval_unchecked(point)
    }
    fn degree_bound(&self) -> Option<u32> {
        Some(Circuit::degree_bound(self))
    }
}

/// Incremental construction of a [`Circuit`]; [`finish`](Self::finish) drops
/// nodes not reachable from the output.
pub struct CircuitBuilder {
    field: FieldSpec,
    nvars: usize,
    nodes: Vec<Node>,
    inputs: HashMap<usize, usize>,
}

impl CircuitBuilder {
    pub fn new(field: FieldSpec, nvars: usize) -> Self {
        CircuitBuilder {
            field,
            nvars,
            nodes: Vec::new(),
            inputs: HashMap::new(),
        }
    }

    fn push(&mut self, n: Node) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    pub fn input(&mut self, i: usize) -> usize {
        assert!(i < self.nvars, "input {i} out of range");
        if let Some(&id) = self.inputs.get(&i) {
            return id;
        }
        let id = self.push(Node::Input(i));
        self.inputs.insert(i, id);
        id
    }

    pub fn constant(&mut self, c: Scalar) -> usize {
        assert_eq!(c.field(), self.field, "constant field mismatch");
        self.push(Node::Const(c))
    }

    pub fn add(&mut self, children: Vec<usize>) -> usize {
        self.push(Node::Add(children))
    }

    pub fn mul(&mut self, children: Vec<usize>) -> usize {
        self.push(Node::Mul(children))
    }

    /// Sum-of-products sub-DAG for `f`; powers become repeated children.
    pub fn poly(&mut self, f: &SparsePoly) -> usize {
        assert_eq!(f.nvars(), self.nvars, "polynomial arity mismatch");
        if f.is_zero() {
            return self.constant(self.field.zero());
        }
        let mut terms = Vec::with_capacity(f.sparsity());
        for (m, c) in f.terms() {
            let mut ch = Vec::new();
            if !c.is_one() || m.is_one() {
                ch.push(self.constant(c.clone()));
            }
            for (i, &e) in m.exps().iter().enumerate() {
                let x = self.input(i);
                ch.extend(std::iter::repeat_n(x, e as usize));
            }
            terms.push(if ch.len() == 1 { ch[0] } else { self.mul(ch) });
        }
        if terms.len() == 1 {
            terms[0]
        } else {
            self.add(terms)
        }
    }

    pub fn finish(self, output: usize) -> Circuit {
        let mut reach = vec![false; self.nodes.len()];
        reach[output] = true;
        for id in (0..self.nodes.len()).rev() {
            if !reach[id] {
                continue;
            }
            if let Node::Add(ch) | Node::Mul(ch) = &self.nodes[id] {
                for &c in ch {
                    reach[c] = true;
                }
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (id, node) in self.nodes.into_iter().enumerate() {
            if !reach[id] {
                continue;
            }
            remap[id] = nodes.len();
            nodes.push(match node {
                Node::Add(ch) => Node::Add(ch.into_iter().map(|c| remap[c]).collect()),
                Node::Mul(ch) => Node::Mul(ch.into_iter().map(|c| remap[c]).collect()),
                other => other,
            });
        }
        Circuit {
            field: self.field,
            nvars: self.nvars,
            nodes,
            output: remap[output],
        }
    }
}

/// `C = Σ_{i=1}^k Π_{j} f_ij` with every factor nonzero and of degree `<= δ`,
/// at most `s` factors per row.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Depth4Circuit {
    field: FieldSpec,
    nvars: usize,
    delta: u32,
    s: usize,
    rows: Vec<Vec<SparsePoly>>,
}

impl Depth4Circuit {
    /// Validates the rows; `s` defaults to the longest row.
    pub fn new(field: FieldSpec, nvars: usize, delta: u32, rows: Vec<Vec<SparsePoly>>) -> Result<Self> {
        let s = rows.iter().map(Vec::len).max().unwrap_or(0);
        Self::with_fanin(field, nvars, delta, s, rows)
    }

    pub fn with_fanin(
        field: FieldSpec,
        nvars: usize,
        delta: u32,
        s: usize,
        rows: Vec<Vec<SparsePoly>>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidCircuit(m));
        if rows.is_empty() {
            return bad("a depth-4 circuit needs at least one row".into());
        }
        for (i, row) in rows.iter().enumerate() {
            if row.is_empty() {
                return bad(format!("row {} is empty", i + 1));
            }
            if row.len() > s {
                return bad(format!("row {} has {} factors, more than s = {s}", i + 1, row.len()));
            }
            for (j, f) in row.iter().enumerate() {
                field.check(&f.field())?;
                if f.nvars() != nvars {
                    return Err(Error::ArityMismatch {
                        expected: nvars,
                        got: f.nvars(),
                    });
                }
                match f.degree() {
                    None => return bad(format!("factor ({}, {}) is zero", i + 1, j + 1)),
                    Some(d) if d > delta => {
                        return bad(format!("factor ({}, {}) has degree {d} > δ = {delta}", i + 1, j + 1))
                    }
                    _ => {}
                }
            }
        }
        Ok(Depth4Circuit {
            field,
            nvars,
            delta,
            s,
            rows,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    /// Top fan-in.
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// Maximal number of factors per row.
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn rows(&self) -> &[Vec<SparsePoly>] {
        &self.rows
    }

    /// All factors `f_ij` in row-major order (with repetitions).
    pub fn factors(&self) -> impl Iterator<Item = &SparsePoly> {
        self.rows.iter().flatten()
    }

    /// `Sp(C)`: the distinct factors, in first-occurrence order.
    pub fn sparse_set(&self) -> Vec<SparsePoly> {
        let mut out: Vec<SparsePoly> = Vec::new();
        for f in self.factors() {
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
        out
    }

    /// `deg(C) <= δ s`.
    pub fn degree_bound(&self) -> u32 {
        self.delta * self.s as u32
    }

    /// Multiplication term `T_i` (0-based row index).
    pub fn term(&self, i: usize) -> Result<SparsePoly> {
        let row = self.rows.get(i).ok_or_else(|| {
            Error::InvalidArgument(format!("row index {i} out of range for k = {}", self.k()))
        })?;
        Ok(row
            .iter()
            .fold(SparsePoly::one(self.field, self.nvars), |a, f| &a * f))
    }

    /// `C_I`: keeps the rows listed in `subset` (0-based, in the given order).
    pub fn subcircuit(&self, subset: &[usize]) -> Result<Depth4Circuit> {
        if subset.is_empty() {
            return Err(Error::InvalidArgument("empty row subset".into()));
        }
        let mut rows = Vec::with_capacity(subset.len());
        for &i in subset {
            rows.push(
                self.rows
                    .get(i)
                    .ok_or_else(|| Error::InvalidArgument(format!("row index {i} out of range")))?
                    .clone(),
            );
        }
        Ok(Depth4Circuit { rows, ..self.clone_empty() })
    }

    fn clone_empty(&self) -> Depth4Circuit {
        Depth4Circuit {
            field: self.field,
            nvars: self.nvars,
            delta: self.delta,
            s: self.s,
            rows: Vec::new(),
        }
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        check_point(self.field, self.nvars, point)?;
        Ok(self.eval_unchecked(point))
    }

    fn eval_unchecked(&self, point: &[Scalar]) -> Scalar {
        let target = point_field(self.field, point);
        let mut acc = target.zero();
        for row in &self.rows {
            let mut t = target.one();
            for f in row {
                t = &t * &f.eval_unchecked(point);
                if t.is_zero() {
                    break;
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn expand(&self, budget: usize) -> Result<SparsePoly> {
        let mut acc = SparsePoly::zero(self.field, self.nvars);
        for row in &self.rows {
            let mut t = SparsePoly::one(self.field, self.nvars);
            let mut d = 0;
            for f in row {
                d += f.degree().unwrap_or(0);
                let est = t
                    .sparsity()
                    .saturating_mul(f.sparsity())
                    .min(monomial_count_bound(self.nvars, d, budget));
                if est > budget {
                    return Err(Error::budget("expand", est, budget));
                }
                t = &t * f;
            }
            if acc.sparsity() + t.sparsity() > budget {
                return Err(Error::budget("expand", acc.sparsity() + t.sparsity(), budget));
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Applies `images` (a substitution for `x_1..x_n`) to every factor.
    /// Fails if a factor maps to zero or the degree bound would be violated.
    pub fn map_factors(&self, images: &[SparsePoly]) -> Result<Depth4Circuit> {
        let Some(first) = images.first() else {
            return Err(Error::InvalidArgument("empty substitution".into()));
        };
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|f| f.substitute(images)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let delta = rows
            .iter()
            .flatten()
            .filter_map(SparsePoly::degree)
            .max()
            .unwrap_or(0)
            .max(self.delta);
        Depth4Circuit::with_fanin(first.field(), first.nvars(), delta, self.s, rows)
    }

    /// The same polynomial as a DAG circuit.
    pub fn to_circuit(&self) -> Circuit {
        let mut b = CircuitBuilder::new(self.field, self.nvars);
        let terms: Vec<usize> = self
            .rows
            .iter()
            .map(|row| {
                let ch: Vec<usize> = row.iter().map(|f| b.poly(f)).collect();
                b.mul(ch)
            })
            .collect();
        let out = b.add(terms);
        b.finish(out)
    }
}

impl Blackbox for Depth4Circuit {
    fn field(&self) -> FieldSpec {
        self.field
    }
    fn arity(&self) -> usize {
        self.nvars
    }
    fn query(&self, point: &[Scalar]) -> Scalar {
        self.eval_unchecked(point)
    }
    fn degree_bound(&self) -> Option<u32> {
        Some(Depth4Circuit::degree_bound(self))
    }
}

/// `C(f_1, …, f_m)`: an outer DAG over `y_1..y_m` fed with sparse inputs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComposedCircuit {
    outer: Circuit,
    inputs: Vec<SparsePoly>,
}

impl ComposedCircuit {
    pub fn new(outer: Circuit, inputs: Vec<SparsePoly>) -> Result<Self> {
        if inputs.len() != outer.nvars {
            return Err(Error::ArityMismatch {
                expected: outer.nvars,
                got: inputs.len(),
            });
        }
        let Some(first) = inputs.first() else {
            return Err(Error::InvalidCircuit("a composed circuit needs at least one input".into()));
        };
        for f in &inputs {
            outer.field.check(&f.field())?;
            if f.nvars() != first.nvars() {
                return Err(Error::ArityMismatch {
                    expected: first.nvars(),
                    got: f.nvars(),
                });
            }
        }
        Ok(ComposedCircuit { outer, inputs })
    }

    pub fn field(&self) -> FieldSpec {
        self.outer.field
    }

    pub fn nvars(&self) -> usize {
        self.inputs[0].nvars()
    }

    pub fn outer(&self) -> &Circuit {
        &self.outer
    }

    pub fn inputs(&self) -> &[SparsePoly] {
        &self.inputs
    }

    /// Largest input degree (at least 1).
    pub fn delta(&self) -> u32 {
        self.inputs.iter().filter_map(SparsePoly::degree).max().unwrap_or(0).max(1)
    }

    /// Largest input sparsity (at least 1).
    pub fn ell(&self) -> usize {
        self.inputs.iter().map(SparsePoly::sparsity).max().unwrap_or(0).max(1)
    }

    /// Outer degree bound times the largest input degree.
    pub fn degree_bound(&self) -> u32 {
        let inner = self.inputs.iter().filter_map(SparsePoly::degree).max().unwrap_or(0);
        self.outer.degree_bound() * inner
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        check_point(self.field(), self.nvars(), point)?;
        Ok(self.eval_unchecked(point))
    }

    fn eval_unchecked(&self, point: &[Scalar]) -> Scalar {
        let ys: Vec<Scalar> = self.inputs.iter().map(|f| f.eval_unchecked(point)).collect();
        self.outer.eval_unchecked(&ys)
    }

    pub fn expand(&self, budget: usize) -> Result<SparsePoly> {
        Circuit::compose(&self.outer, &self.inputs)?.expand(budget)
    }

    /// The same polynomial as one DAG.
    pub fn to_circuit(&self) -> Circuit {
        Circuit::compose(&self.outer, &self.inputs).expect("validated on construction")
    }
}

impl Blackbox for ComposedCircuit {
    fn field(&self) -> FieldSpec {
        ComposedCircuit::field(self)
    }
    fn arity(&self) -> usize {
        self.nvars()
    }
    fn query(&self, point: &[Scalar]) -> Scalar {
        self.eval_unchecked(point)
    }
    fn degree_bound(&self) -> Option<u32> {
        Some(ComposedCircuit::degree_bound(self))
    }
}
