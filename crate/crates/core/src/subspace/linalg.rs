//! Row reduction over `Z/q`.

use crate::arith::Modulus;

/// Reduced row echelon form of `rows` (all of equal length), computed in
/// place alongside a record of the row operations.
///
/// Returns the pivot columns. Zero rows are dropped from `rows`; `ops` keeps
/// the matching rows of the transform, so `rows = ops * original`.
pub(crate) fn rref(q: Modulus, rows: &mut Vec<Vec<u8>>, ops: &mut Vec<Vec<u8>>) -> Vec<usize> {
    let qq = q.get();
    let n = rows.len();
    *ops = (0..n)
        .map(|i| (0..n).map(|j| u8::from(i == j)).collect())
        .collect();
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        ops.swap(r, p);
        let inv = q.inv(rows[r][c] as u32);
        scale_row(&mut rows[r], inv, qq);
        scale_row(&mut ops[r], inv, qq);
        for i in 0..n {
            if i != r && rows[i][c] != 0 {
                let f = qq - rows[i][c] as u32;
                let (src, src_ops) = (rows[r].clone(), ops[r].clone());
                axpy(&mut rows[i], f, &src, qq);
                axpy(&mut ops[i], f, &src_ops, qq);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    ops.truncate(r);
    pivots
}

pub(crate) fn rank(q: Modulus, rows: &[Vec<u8>]) -> usize {
    let mut rows = rows.to_vec();
    let mut ops = Vec::new();
    rref(q, &mut rows, &mut ops).len()
}

fn scale_row(row: &mut [u8], c: u32, q: u32) {
    for x in row.iter_mut() {
        *x = ((*x as u32 * c) % q) as u8;
    }
}

/// `row += c * src`.
pub(crate) fn axpy(row: &mut [u8], c: u32, src: &[u8], q: u32) {
    if c % q == 0 {
        return;
    }
    for (x, &s) in row.iter_mut().zip(src) {
        *x = ((*x as u32 + c * s as u32) % q) as u8;
    }
}

/// Clears the pivot entries of `v` against an RREF basis; returns the
/// coefficients used, so `v_before = sum coeffs[i] rows[i] + v_after`.
pub(crate) fn reduce(q: Modulus, v: &mut [u8], rows: &[Vec<u8>], pivots: &[usize]) -> Vec<u8> {
    let qq = q.get();
    let mut coeffs = Vec::with_capacity(rows.len());
    for (row, &p) in rows.iter().zip(pivots) {
        let c = v[p];
        coeffs.push(c);
        if c != 0 {
            axpy(v, qq - c as u32, row, qq);
        }
    }
    coeffs
}
