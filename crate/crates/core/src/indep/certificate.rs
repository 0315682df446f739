//! Checkable evidence for a transcendence degree.

use serde_json::{json, Value};

use super::{annihilator_exact, jacobian, max_degree, DEFAULT_ANNIHILATOR_BUDGET};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg;
use crate::poly::{SparsePoly, Vars};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CertificateMode {
    /// Jacobian rank with the characteristic gate satisfied.
    Jacobian,
    /// Annihilator search under the Perron cap.
    BruteForce,
    /// Jacobian rank without the gate: a lower bound only.
    JacobianLowerBound,
}

impl CertificateMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateMode::Jacobian => "jacobian",
            CertificateMode::BruteForce => "bruteforce",
            CertificateMode::JacobianLowerBound => "jacobian_lower_bound",
        }
    }
}

/// `subset` is algebraically dependent. `annihilator` is `None` exactly when
/// the subset is larger than the number of variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    pub subset: Vec<usize>,
    pub annihilator: Option<SparsePoly>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Witness {
    /// A nonzero `r x r` minor of the Jacobian on `rows` × `cols`.
    Minor {
        rows: Vec<usize>,
        cols: Vec<usize>,
        determinant: SparsePoly,
        /// A point where the determinant does not vanish, when one was found.
        point: Option<Vec<Scalar>>,
    },
    /// `independent` has no annihilator of degree at most `absence_cap`
    /// (enough by the Perron bound), and every other input is dependent on it.
    Annihilators {
        independent: Vec<usize>,
        absence_cap: u64,
        relations: Vec<Relation>,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TrdegCertificate {
    pub r: usize,
    pub mode: CertificateMode,
    pub witness: Witness,
}

impl TrdegCertificate {
    pub(crate) fn into_lower_bound(mut self) -> Self {
        self.mode = CertificateMode::JacobianLowerBound;
        self
    }

    /// Whether `r` is guaranteed exact rather than a lower bound.
    pub fn is_exact(&self) -> bool {
        self.mode != CertificateMode::JacobianLowerBound
    }

    /// Re-checks the witness against `fs` from scratch.
    pub fn verify(&self, fs: &[SparsePoly]) -> Result<bool> {
        match &self.witness {
            Witness::Minor {
                rows,
                cols,
                determinant,
                point,
            } => {
                if rows.len() != self.r || cols.len() != self.r || determinant.is_zero() {
                    return Ok(false);
                }
                if self.r == 0 {
                    return Ok(true);
                }
                let j = jacobian(fs)?;
                if rows.iter().any(|&i| i >= j.nrows()) || cols.iter().any(|&c| c >= j.ncols()) {
                    return Ok(false);
                }
                let det = linalg::det_bareiss(j.minor(rows, cols));
                if det != *determinant {
                    return Ok(false);
                }
                Ok(match point {
                    Some(pt) => !det.eval(pt)?.is_zero(),
                    None => true,
                })
            }
            Witness::Annihilators {
                independent,
                absence_cap,
                relations,
            } => {
                if independent.len() != self.r {
                    return Ok(false);
                }
                let n = fs[0].nvars();
                let mut covered = vec![false; fs.len()];
                for &i in independent {
                    covered[i] = true;
                }
                for rel in relations {
                    let polys: Vec<SparsePoly> = rel.subset.iter().map(|&k| fs[k].clone()).collect();
                    let ok = match &rel.annihilator {
                        None => rel.subset.len() > n,
                        Some(f) => !f.is_zero() && f.substitute(&polys)?.is_zero(),
                    };
                    let Some((&last, base)) = rel.subset.split_last() else {
                        return Ok(false);
                    };
                    let within = base.iter().all(|k| independent.contains(k)) && !independent.contains(&last);
                    if !ok || !within || last >= fs.len() {
                        return Ok(false);
                    }
                    covered[last] = true;
                }
                if covered.iter().any(|c| !c) {
                    return Ok(false);
                }
                if independent.is_empty() {
                    return Ok(true);
                }
                let polys: Vec<SparsePoly> = independent.iter().map(|&k| fs[k].clone()).collect();
                let needed = super::degree_power(max_degree(&polys), independent.len() - 1);
                if (*absence_cap as u128) < needed {
                    return Ok(false);
                }
                Ok(annihilator_exact(&polys, *absence_cap as u32, DEFAULT_ANNIHILATOR_BUDGET)?.is_none())
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let witness = match &self.witness {
            Witness::Minor {
                rows,
                cols,
                determinant,
                point,
            } => json!({
                "kind": "minor",
                "rows": rows,
                "cols": cols,
                "determinant": determinant.to_string(),
                "point": point.as_ref().map(|p| p.iter().map(Scalar::to_string).collect::<Vec<_>>()),
            }),
            Witness::Annihilators {
                independent,
                absence_cap,
                relations,
            } => json!({
                "kind": "annihilators",
                "independent": independent,
                "absence_cap": absence_cap,
                "relations": relations.iter().map(|r| json!({
                    "subset": r.subset,
                    "annihilator": r.annihilator.as_ref().map(|f| f.display_with(Vars::Y).to_string()),
                })).collect::<Vec<_>>(),
            }),
        };
        json!({
            "r": self.r,
            "mode": self.mode.as_str(),
            "exact": self.is_exact(),
            "witness": witness,
        })
    }

    /// Reads back [`to_json`](Self::to_json) output for a family of polynomials
    /// over `field` in `nvars` variables.
    pub fn from_json(v: &Value, field: FieldSpec, nvars: usize) -> Result<Self> {
        let bad = |what: &str| Error::Json(format!("certificate: missing or invalid {what:?}"));
        let indices = |x: &Value, what: &str| -> Result<Vec<usize>> {
            serde_json::from_value(x.get(what).cloned().ok_or_else(|| bad(what))?).map_err(Error::from)
        };
        let r = v.get("r").and_then(Value::as_u64).ok_or_else(|| bad("r"))? as usize;
        let mode = match v.get("mode").and_then(Value::as_str) {
            Some("jacobian") => CertificateMode::Jacobian,
            Some("bruteforce") => CertificateMode::BruteForce,
            Some("jacobian_lower_bound") => CertificateMode::JacobianLowerBound,
            _ => return Err(bad("mode")),
        };
        let w = v.get("witness").ok_or_else(|| bad("witness"))?;
        let witness = match w.get("kind").and_then(Value::as_str) {
            Some("minor") => {
                let det = w.get("determinant").and_then(Value::as_str).ok_or_else(|| bad("determinant"))?;
                let point = match w.get("point") {
                    None | Some(Value::Null) => None,
                    Some(Value::Array(xs)) => Some(
                        xs.iter()
                            .map(|x| field.parse_scalar(x.as_str().ok_or_else(|| bad("point"))?))
                            .collect::<Result<Vec<_>>>()?,
                    ),
                    Some(_) => return Err(bad("point")),
                };
                Witness::Minor {
                    rows: indices(w, "rows")?,
                    cols: indices(w, "cols")?,
                    determinant: SparsePoly::parse(det, field, nvars)?,
                    point,
                }
            }
            Some("annihilators") => {
                let relations = w
                    .get("relations")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("relations"))?
                    .iter()
                    .map(|rel| {
                        let subset = indices(rel, "subset")?;
                        let annihilator = match rel.get("annihilator") {
                            Some(Value::String(t)) => Some(SparsePoly::parse_with(t, field, subset.len(), Vars::Y)?),
                            None | Some(Value::Null) => None,
                            Some(_) => return Err(bad("annihilator")),
                        };
                        Ok(Relation { subset, annihilator })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Witness::Annihilators {
                    independent: indices(w, "independent")?,
                    absence_cap: w.get("absence_cap").and_then(Value::as_u64).ok_or_else(|| bad("absence_cap"))?,
                    relations,
                }
            }
            _ => return Err(bad("witness kind")),
        };
        Ok(TrdegCertificate { r, mode, witness })
    }
}
