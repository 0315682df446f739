use super::SparsePoly;
use crate::error::{Error, Result};
use crate::linalg;

/// Sylvester matrix of `f` and `g` with respect to `x_var`: `deg g` shifted
/// rows of `f`'s coefficients followed by `deg f` shifted rows of `g`'s,
/// highest power first.
pub(crate) fn sylvester(f: &SparsePoly, g: &SparsePoly, var: usize) -> Result<Vec<Vec<SparsePoly>>> {
    f.check_same_ring(g)?;
    if var >= f.nvars {
        return Err(Error::VariableOutOfRange {
            index: var,
            nvars: f.nvars,
        });
    }
    let df = f.degree_in(var).unwrap_or(0) as usize;
    let dg = g.degree_in(var).unwrap_or(0) as usize;
    if df == 0 {
        return Err(Error::ZeroVariableDegree(var));
    }
    if dg == 0 {
        return Err(Error::ZeroVariableDegree(var));
    }
    let size = df + dg;
    let zero = SparsePoly::zero(f.field, f.nvars);
    let fc = f.coeffs_in(var);
    let gc = g.coeffs_in(var);
    let mut rows = Vec::with_capacity(size);
    for (coeffs, deg, copies) in [(&fc, df, dg), (&gc, dg, df)] {
        for shift in 0..copies {
            let mut row = vec![zero.clone(); size];
            for k in 0..=deg {
                row[shift + k] = coeffs[deg - k].clone();
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

pub(super) fn resultant(f: &SparsePoly, g: &SparsePoly, var: usize) -> Result<SparsePoly> {
    let m = sylvester(f, g, var)?;
    Ok(linalg::det_bareiss(m))
}
