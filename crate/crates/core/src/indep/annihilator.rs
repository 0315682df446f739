//! Annihilating polynomials by linear algebra on the monomials `f^α`.

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::check_family;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::{Monomial, SparsePoly};

/// Maximal number of candidate monomials `y^α` per search.
pub const DEFAULT_ANNIHILATOR_BUDGET: usize = 50_000;

/// `C(cap + m, m)`, saturating.
fn column_count(m: usize, cap: u32) -> u128 {
    let mut acc: u128 = 1;
    for i in 1..=m as u128 {
        acc = acc.saturating_mul(cap as u128 + i) / i;
    }
    acc
}

/// All monomials in `m` variables of degree at most `cap`, ascending.
fn y_monomials(m: usize, cap: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, cap, &mut vec![0; m], &mut out);
    out.sort();
    out
}

fn prepare(fs: &[SparsePoly], cap: u32, budget: usize) -> Result<Vec<Monomial>> {
    check_family(fs)?;
    let cols = column_count(fs.len(), cap);
    if cols > budget as u128 {
        return Err(Error::budget("annihilator columns", cols, budget));
    }
    Ok(y_monomials(fs.len(), cap))
}

fn finish(fs: &[SparsePoly], f: SparsePoly) -> Option<SparsePoly> {
    let f = f.normalize();
    let image = f.substitute(fs).expect("image ring matches");
    image.is_zero().then_some(f)
}

/// A nonzero `F` with `deg F <= cap` and `F(f_1, …, f_m) = 0`, monic under
/// graded-lex order in `y_1, …, y_m`, or `None` if no such `F` exists.
///
/// Random evaluations settle the common case quickly: an evaluation matrix
/// of full column rank proves that no annihilator exists, and a kernel vector
/// is accepted only after exact substitution. Anything else falls back to
/// [`annihilator_exact`].
pub fn annihilator(fs: &[SparsePoly], cap: u32, budget: usize) -> Result<Option<SparsePoly>> {
    let monos = prepare(fs, cap, budget)?;
    let field = fs[0].field();
    if field.size().is_none() {
        // a primitive annihilator over Q stays nonzero mod p, so full rank
        // mod p still rules one out
        if let Some(reduced) = reduce_mod_p(fs) {
            if let Probe::Independent = by_evaluation(&reduced, &monos) {
                return Ok(None);
            }
        }
    } else if field.size().is_some_and(|q| q > 4 * monos.len() as u64) {
        match by_evaluation(fs, &monos) {
            Probe::Independent => return Ok(None),
            Probe::Candidate(f) => {
                if let Some(f) = finish(fs, f) {
                    return Ok(Some(f));
                }
            }
        }
    }
    Ok(exact(fs, &monos))
}

/// The same search by exact elimination on the coefficient vectors of `f^α`.
pub fn annihilator_exact(fs: &[SparsePoly], cap: u32, budget: usize) -> Result<Option<SparsePoly>> {
    let monos = prepare(fs, cap, budget)?;
    Ok(exact(fs, &monos))
}

fn exact(fs: &[SparsePoly], monos: &[Monomial]) -> Option<SparsePoly> {
    let field = fs[0].field();
    let m = fs.len();
    let mut powers: HashMap<Monomial, SparsePoly> = HashMap::new();
    let mut basis: BTreeMap<Monomial, (SparsePoly, SparsePoly)> = BTreeMap::new();
    for alpha in monos {
        let v = match alpha.exps().iter().rposition(|&e| e > 0) {
            None => SparsePoly::one(field, fs[0].nvars()),
            Some(j) => {
                let prev = alpha.div(&Monomial::var(m, j, 1)).expect("positive exponent");
                &powers[&prev] * &fs[j]
            }
        };
        powers.insert(alpha.clone(), v.clone());
        let mut v = v;
        let mut combo = SparsePoly::monomial(field, alpha.clone(), field.one());
        loop {
            let Some((lm, lc)) = v.leading_term() else {
                return finish(fs, combo);
            };
            match basis.get(lm) {
                Some((bv, bc)) => {
                    let factor = lc * &bv.leading_coeff().expect("nonzero").inv().expect("unit");
                    v = &v - &bv.scale(&factor);
                    combo = &combo - &bc.scale(&factor);
                }
                None => {
                    basis.insert(lm.clone(), (v, combo));
                    break;
                }
            }
        }
    }
    None
}

/// The family reduced modulo a large prime, unless a denominator vanishes there.
fn reduce_mod_p(fs: &[SparsePoly]) -> Option<Vec<SparsePoly>> {
    let target = FieldSpec::default_prime();
    fs.iter()
        .map(|f| {
            let terms = f
                .terms()
                .map(|(mono, c)| match c {
                    Scalar::Rational(q) => Some((mono.exps().to_vec(), target.from_fraction(q.numer(), q.denom())?)),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()?;
            SparsePoly::from_terms(target, f.nvars(), terms).ok()
        })
        .collect()
}

enum Probe {
    Independent,
    Candidate(SparsePoly),
}

fn by_evaluation(fs: &[SparsePoly], monos: &[Monomial]) -> Probe {
    let field = fs[0].field();
    let m = fs.len();
    let npts = monos.len() + 8;
    let mut rng = ChaCha8Rng::seed_from_u64(0x616e_6e69);
    let values: Vec<Vec<Scalar>> = (0..npts)
        .map(|_| {
            let pt: Vec<Scalar> = (0..fs[0].nvars()).map(|_| field.random(&mut rng)).collect();
            fs.iter().map(|f| f.eval_unchecked(&pt)).collect()
        })
        .collect();
    // column for y^α: (f(a)^α) over all sample points a
    let mut cols: HashMap<Monomial, Vec<Scalar>> = HashMap::new();
    let mut basis: Vec<(usize, Vec<Scalar>, Vec<Scalar>)> = Vec::new();
    for (idx, alpha) in monos.iter().enumerate() {
        let col: Vec<Scalar> = match alpha.exps().iter().rposition(|&e| e > 0) {
            None => vec![field.one(); npts],
            Some(j) => {
                let prev = &cols[&alpha.div(&Monomial::var(m, j, 1)).expect("positive exponent")];
                prev.iter().zip(&values).map(|(a, v)| a * &v[j]).collect()
            }
        };
        cols.insert(alpha.clone(), col.clone());
        let mut v = col;
        let mut combo = vec![field.zero(); monos.len()];
        combo[idx] = field.one();
        for (piv, bv, bc) in &basis {
            if v[*piv].is_zero() {
                continue;
            }
            let factor = &v[*piv] * &bv[*piv].inv().expect("unit");
            for (x, b) in v.iter_mut().zip(bv) {
                if !b.is_zero() {
                    *x = &*x - &(&factor * b);
                }
            }
            for (x, b) in combo.iter_mut().zip(bc).take(idx + 1) {
                if !b.is_zero() {
                    *x = &*x - &(&factor * b);
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(piv) => basis.push((piv, v, combo)),
            None => {
                let f = SparsePoly::from_terms(
                    field,
                    m,
                    monos.iter().zip(combo).map(|(mono, c)| (mono.exps().to_vec(), c)),
                )
                .expect("valid terms");
                return Probe::Candidate(f);
            }
        }
    }
    Probe::Independent
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_count_is_binomial() {
        assert_eq!(column_count(2, 4), 15);
        assert_eq!(column_count(3, 9), 220);
        assert_eq!(y_monomials(3, 9).len(), 220);
    }

    #[test]
    fn monomials_ascend() {
        let ms = y_monomials(2, 2);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
        assert!(ms[0].is_one());
    }

    #[test]
    fn budget_is_enforced() {
        let q = FieldSpec::rational();
        let fs: Vec<SparsePoly> = (0..3).map(|i| SparsePoly::var(q, 3, i)).collect();
        assert!(matches!(annihilator(&fs, 100, 1000), Err(Error::Budget { .. })));
    }
}
