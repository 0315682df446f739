//! Exact elimination kernels: fraction-free (Bareiss) elimination over
//! polynomial rings and plain Gaussian elimination over the base field.

use crate::field::Scalar;
use crate::poly::SparsePoly;

/// Outcome of fraction-free elimination: the rank over the fraction field and
/// the original indices of a nonzero `rank x rank` minor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRank {
    pub rank: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// The value of that minor (the last Bareiss pivot).
    pub minor: Option<SparsePoly>,
}

fn pivot_key(p: &SparsePoly) -> (u32, usize) {
    (p.degree().unwrap_or(0), p.sparsity())
}

/// Rank of a polynomial matrix over its fraction field by Bareiss elimination
/// with full pivoting on the lowest-degree (then sparsest) nonzero entry.
pub fn rank_bareiss(mut a: Vec<Vec<SparsePoly>>) -> PolyRank {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut row_ids: Vec<usize> = (0..m).collect();
    let mut col_ids: Vec<usize> = (0..n).collect();
    let mut prev: Option<SparsePoly> = None;
    let mut k = 0;
    while k < m.min(n) {
        let mut best: Option<((u32, usize), usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate().skip(k) {
                if e.is_zero() {
                    continue;
                }
                let key = pivot_key(e);
                if best.as_ref().is_none_or(|(b, _, _)| key < *b) {
                    best = Some((key, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(k, pi);
        row_ids.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        col_ids.swap(k, pj);
        eliminate(&mut a, k, prev.as_ref());
        prev = Some(a[k][k].clone());
        k += 1;
    }
    row_ids.truncate(k);
    col_ids.truncate(k);
    PolyRank {
        rank: k,
        rows: row_ids,
        cols: col_ids,
        minor: prev,
    }
}

fn eliminate(a: &mut [Vec<SparsePoly>], k: usize, prev: Option<&SparsePoly>) {
    let (top, rest) = a.split_at_mut(k + 1);
    let pivot_row = &top[k];
    let pivot = &pivot_row[k];
    for row in rest.iter_mut() {
        let lead = std::mem::replace(&mut row[k], SparsePoly::zero(pivot.field(), pivot.nvars()));
        for j in k + 1..row.len() {
            let num = &(pivot * &row[j]) - &(&lead * &pivot_row[j]);
            row[j] = match prev {
                Some(d) => num.div_exact(d).expect("Bareiss division is exact"),
                None => num,
            };
        }
    }
}

/// Determinant of a square polynomial matrix by Bareiss elimination.
pub fn det_bareiss(mut a: Vec<Vec<SparsePoly>>) -> SparsePoly {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "square matrix required");
    let Some(sample) = a.first().and_then(|r| r.first()).cloned() else {
        panic!("empty matrix");
    };
    let mut negate = false;
    let mut prev: Option<SparsePoly> = None;
    for k in 0..n {
        let Some(pi) = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| pivot_key(&a[i][k]))
        else {
            return SparsePoly::zero(sample.field(), sample.nvars());
        };
        if pi != k {
            a.swap(k, pi);
            negate = !negate;
        }
        eliminate(&mut a, k, prev.as_ref());
        prev = Some(a[k][k].clone());
    }
    let d = prev.expect("n >= 1");
    if negate {
        -&d
    } else {
        d
    }
}

/// Rank of a matrix over the base field.
pub fn rank_scalar(mut a: Vec<Vec<Scalar>>) -> usize {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n {
        let Some(pi) = (rank..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pi);
        let inv = a[rank][col].inv().expect("nonzero pivot");
        let pivot_row: Vec<Scalar> = a[rank].iter().map(|x| x * &inv).collect();
        for row in a.iter_mut().skip(rank + 1) {
            let f = row[col].clone();
            if f.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = &*x - &(&f * p);
            }
        }
        a[rank] = pivot_row;
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn p(s: &str) -> SparsePoly {
        SparsePoly::parse(s, FieldSpec::rational(), 2).unwrap()
    }

    #[test]
    fn det_2x2_symbolic() {
        let m = vec![vec![p("x1"), p("x2")], vec![p("x2"), p("x1")]];
        assert_eq!(det_bareiss(m), p("x1^2 - x2^2"));
    }

    #[test]
    fn det_needs_row_swap() {
        let m = vec![
            vec![p("0"), p("1"), p("0")],
            vec![p("1"), p("0"), p("0")],
            vec![p("0"), p("0"), p("x1")],
        ];
        assert_eq!(det_bareiss(m), p("-x1"));
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let m = vec![
            vec![p("x1 + 1"), p("x2"), p("3")],
            vec![p("x1*x2"), p("x1 - x2"), p("1")],
            vec![p("2"), p("x2^2"), p("x1")],
        ];
        let c = |i: usize, j: usize| m[i][j].clone();
        let expected = &(&(&c(0, 0) * &(&(&c(1, 1) * &c(2, 2)) - &(&c(1, 2) * &c(2, 1))))
            - &(&c(0, 1) * &(&(&c(1, 0) * &c(2, 2)) - &(&c(1, 2) * &c(2, 0)))))
            + &(&c(0, 2) * &(&(&c(1, 0) * &c(2, 1)) - &(&c(1, 1) * &c(2, 0))));
        assert_eq!(det_bareiss(m.clone()), expected);
    }

    #[test]
    fn rank_with_dependent_rows() {
        let m = vec![
            vec![p("1"), p("0")],
            vec![p("-2*x1"), p("1")],
            vec![p("0"), p("2*x2")],
        ];
        let r = rank_bareiss(m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.rows.len(), 2);
        let m = vec![vec![p("x1"), p("x2")], vec![p("x1^2"), p("x1*x2")]];
        assert_eq!(rank_bareiss(m).rank, 1);
        assert_eq!(rank_bareiss(vec![vec![p("0"), p("0")]]).rank, 0);
    }

    #[test]
    fn scalar_rank() {
        let f = FieldSpec::prime(7).unwrap();
        let s = |v: i64| f.from_i64(v);
        assert_eq!(rank_scalar(vec![vec![s(1), s(2)], vec![s(2), s(4)]]), 1);
        assert_eq!(rank_scalar(vec![vec![s(1), s(2)], vec![s(2), s(5)]]), 2);
        assert_eq!(rank_scalar(vec![vec![s(0), s(0)]]), 0);
    }
}
