//! Howell normal form for submodules of (Z/p^E)^n.

use crate::modular::{inv_mod, ipow, valuation};

/// Canonical Howell form of the row span. Rows are returned in pivot order.
pub(crate) fn howell_form(p: u64, e: u32, mut rows: Vec<Vec<u64>>, ncols: usize) -> Vec<Vec<u64>> {
    let q = ipow(p, e);
    for row in rows.iter_mut() {
        debug_assert_eq!(row.len(), ncols);
        row.iter_mut().for_each(|x| *x %= q);
    }
    rows.retain(|r| r.iter().any(|&x| x != 0));
    let mut r = 0;
    for c in 0..ncols {
        let mut best: Option<(u32, usize)> = None;
        for (i, row) in rows.iter().enumerate().skip(r) {
            let x = row[c];
            if x != 0 {
                let v = valuation(x, p, e);
                if best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, i));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let Some((a, idx)) = best else {
            continue;
        };
        rows.swap(r, idx);
        let pa = ipow(p, a);
        let unit = rows[r][c] / pa;
        if unit != 1 {
            let inv = inv_mod(unit % q, q).expect("unit part");
            for x in rows[r].iter_mut() {
                *x = (*x as u128 * inv as u128 % q as u128) as u64;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let m = row[c] / pa;
            if m == 0 {
                continue;
            }
            if i > r {
                debug_assert_eq!(row[c] % pa, 0);
            }
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                let sub = (m as u128 * y as u128 % q as u128) as u64;
                *x = (*x + q - sub) % q;
            }
        }
        if a > 0 {
            let scale = ipow(p, e - a);
            let ann: Vec<u64> = pivot_row
                .iter()
                .map(|&y| (y as u128 * scale as u128 % q as u128) as u64)
                .collect();
            if ann.iter().any(|&x| x != 0) {
                rows.push(ann);
            }
        }
        r += 1;
        rows.retain(|row| row.iter().any(|&x| x != 0));
    }
    rows.truncate(r);
    rows
}

pub(crate) fn pivot(row: &[u64]) -> Option<usize> {
    row.iter().position(|&x| x != 0)
}

/// Reduces `v` against a Howell form; the result is the canonical coset
/// representative, zero exactly when `v` lies in the span.
pub(crate) fn reduce(p: u64, e: u32, form: &[Vec<u64>], v: &mut [u64]) {
    let q = ipow(p, e);
    for x in v.iter_mut() {
        *x %= q;
    }
    for row in form {
        let c = pivot(row).expect("nonzero Howell row");
        let m = v[c] / row[c];
        if m == 0 {
            continue;
        }
        for (x, &y) in v.iter_mut().zip(row) {
            let sub = (m as u128 * y as u128 % q as u128) as u64;
            *x = (*x + q - sub) % q;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_generator_of_order_three() {
        let f = howell_form(3, 2, vec![vec![3]], 1);
        assert_eq!(f, vec![vec![3]]);
    }

    #[test]
    fn annihilator_rows_are_added() {
        let f = howell_form(3, 2, vec![vec![3, 1]], 2);
        assert_eq!(f, vec![vec![3, 1], vec![0, 3]]);
    }

    #[test]
    fn membership_by_reduction() {
        let f = howell_form(3, 2, vec![vec![3, 1]], 2);
        let mut v = vec![6, 2];
        reduce(3, 2, &f, &mut v);
        assert_eq!(v, vec![0, 0]);
        let mut w = vec![0, 1];
        reduce(3, 2, &f, &mut w);
        assert_ne!(w, vec![0, 0]);
    }
}
