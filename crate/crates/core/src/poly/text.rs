//! Text format: `3*x1^2*x2 - x3 + 7`. Parsing accepts `+ - * / ^` and
//! parentheses; printing is canonical (descending graded-lex, residues above
//! `p/2` shown negative) and re-parses to the same polynomial.

use std::fmt;

use num_bigint::BigInt;

use super::SparsePoly;
use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Variable naming scheme.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Vars {
    /// `x1, x2, ...`
    #[default]
    X,
    /// `y1, y2, ...` (annihilator variables)
    Y,
    /// `z0, z1, ...`
    Z0,
    /// `z1, z2, ...`
    Z1,
    /// `t` (univariate), `t1, t2, ...` otherwise
    T,
}

impl Vars {
    fn prefix(self) -> char {
        match self {
            Vars::X => 'x',
            Vars::Y => 'y',
            Vars::Z0 | Vars::Z1 => 'z',
            Vars::T => 't',
        }
    }

    fn first(self) -> usize {
        match self {
            Vars::Z0 => 0,
            _ => 1,
        }
    }

    pub fn name(self, i: usize, nvars: usize) -> String {
        if self == Vars::T && nvars == 1 {
            return "t".into();
        }
        format!("{}{}", self.prefix(), i + self.first())
    }
}

pub struct Display<'a> {
    pub(super) poly: &'a SparsePoly,
    pub(super) vars: Vars,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.poly;
        if p.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in p.terms.iter().rev().enumerate() {
            let neg = c.is_negative_repr();
            let mag = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts = Vec::new();
            if !mag.is_one() || m.is_one() {
                parts.push(mag.to_string());
            }
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.vars.name(i, p.nvars)),
                    _ => parts.push(format!("{}^{}", self.vars.name(i, p.nvars), e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    /// The generator `w` of an extension field.
    Gen,
    Op(char),
}

fn lex(s: &str, vars: Vars) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(s[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            i += 1;
            let ds = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if c == 'w' && ds == i {
                out.push((start, Tok::Gen));
                continue;
            }
            if c != vars.prefix() {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unexpected variable prefix {c:?}, expected {:?}", vars.prefix()),
                });
            }
            let idx = if ds == i {
                if vars != Vars::T {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "variable without index".into(),
                    });
                }
                0
            } else {
                let k: usize = s[ds..i].parse().map_err(|_| Error::Parse {
                    pos: ds,
                    msg: "bad variable index".into(),
                })?;
                k.checked_sub(vars.first()).ok_or(Error::Parse {
                    pos: ds,
                    msg: format!("variable indices start at {}", vars.first()),
                })?
            };
            out.push((start, Tok::Var(idx)));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

pub(super) fn max_nvars(s: &str, vars: Vars) -> Result<usize> {
    Ok(lex(s, vars)?
        .iter()
        .filter_map(|(_, t)| match t {
            Tok::Var(i) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    field: FieldSpec,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<SparsePoly> {
        let mut neg = false;
        if let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            neg = *c == '-';
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let sub = *c == '-';
            self.pos += 1;
            let t = self.term()?;
            acc = if sub { &acc - &t } else { &acc + &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SparsePoly> {
        let mut acc = self.power()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let div = *c == '/';
            self.pos += 1;
            let f = self.power()?;
            if div {
                if !f.is_constant() || f.is_zero() {
                    return self.err("division only by nonzero constants");
                }
                acc = acc.scale(&f.constant_term().inv().unwrap());
            } else {
                acc = &acc * &f;
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<SparsePoly> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<SparsePoly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(SparsePoly::constant(self.field, self.nvars, self.field.from_bigint(&n)))
            }
            Some(Tok::Var(i)) => {
                if i >= self.nvars {
                    return self.err(format!("variable index {} exceeds {} variables", i, self.nvars));
                }
                self.pos += 1;
                Ok(SparsePoly::var(self.field, self.nvars, i))
            }
            Some(Tok::Gen) => match self.field.generator() {
                Some(w) => {
                    self.pos += 1;
                    Ok(SparsePoly::constant(self.field, self.nvars, w))
                }
                None => self.err(format!("{} has no generator w", self.field)),
            },
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-&self.power()?)
            }
            _ => self.err("expected number, variable or '('"),
        }
    }
}

pub(super) fn parse(s: &str, field: FieldSpec, nvars: Option<usize>, vars: Vars) -> Result<SparsePoly> {
    let toks = lex(s, vars)?;
    let nvars = match nvars {
        Some(n) => n,
        None => toks
            .iter()
            .filter_map(|(_, t)| match t {
                Tok::Var(i) => Some(i + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0),
    };
    if toks.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty polynomial".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: s.len(),
        field,
        nvars,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}
