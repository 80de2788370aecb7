//! Dense Gaussian elimination over a [`FieldCtx`] on packed values.

use crate::ff::FieldCtx;

/// Row-reduces `rows` in place; returns the pivot column of each nonzero row.
pub(crate) fn rref(ctx: &FieldCtx, rows: &mut [Vec<u64>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ctx.inv(rows[r][c]).unwrap();
        for v in rows[r].iter_mut() {
            *v = ctx.mul(*v, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    let t = ctx.mul(f, rows[r][j]);
                    rows[i][j] = ctx.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Basis of `{v : A v = 0}`, one vector per free column, in column order.
pub(crate) fn kernel(ctx: &FieldCtx, rows: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
    let mut m = rows.to_vec();
    let pivots = rref(ctx, &mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = ctx.neg(m[row][free]);
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix, `None` when singular.
pub(crate) fn inverse(ctx: &FieldCtx, a: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let n = a.len();
    let mut aug: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    let pivots = rref(ctx, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub(crate) fn determinant(ctx: &FieldCtx, a: &[Vec<u64>]) -> u64 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = 1u64;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| m[i][c] != 0) else {
            return 0;
        };
        if pr != c {
            m.swap(pr, c);
            det = ctx.neg(det);
        }
        det = ctx.mul(det, m[c][c]);
        let inv = ctx.inv(m[c][c]).unwrap();
        for i in c + 1..n {
            if m[i][c] == 0 {
                continue;
            }
            let f = ctx.mul(m[i][c], inv);
            for j in c..n {
                let t = ctx.mul(f, m[c][j]);
                m[i][j] = ctx.sub(m[i][j], t);
            }
        }
    }
    det
}
