//! Diagonalization of relation matrices over Z/p^E with tracked column transforms.

use crate::modular::{inv_mod, ipow, valuation};

pub(crate) struct SmithData {
    /// Valuation of each diagonal entry, `e` where the column carries no relation.
    pub diag: Vec<u32>,
    /// Column transform V: new coordinates are x·V.
    pub v: Vec<Vec<u64>>,
    /// V^{-1}: row t is a lift of the t-th new basis vector.
    pub v_inv: Vec<Vec<u64>>,
}

/// Smith form of the relation rows (k columns) modulo p^e.
pub(crate) fn smith(p: u64, e: u32, mut rel: Vec<Vec<u64>>, k: usize) -> SmithData {
    let q = ipow(p, e);
    let mulq = |a: u64, b: u64| (a as u128 * b as u128 % q as u128) as u64;
    let mut v: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut v_inv = v.clone();
    for row in rel.iter_mut() {
        row.iter_mut().for_each(|x| *x %= q);
    }
    rel.retain(|r| r.iter().any(|&x| x != 0));
    let mut diag = vec![e; k];
    let mut t = 0;
    while t < k && t < rel.len() {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in rel.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let val = valuation(x, p, e);
                    if best.is_none_or(|(b, _, _)| val < b) {
                        best = Some((val, i, j));
                    }
                }
            }
        }
        let Some((a, i, j)) = best else {
            break;
        };
        rel.swap(t, i);
        if j != t {
            for row in rel.iter_mut() {
                row.swap(t, j);
            }
            for row in v.iter_mut() {
                row.swap(t, j);
            }
            v_inv.swap(t, j);
        }
        let pa = ipow(p, a);
        let unit = rel[t][t] / pa;
        let inv = inv_mod(unit % q, q).expect("unit part");
        for x in rel[t].iter_mut() {
            *x = mulq(*x, inv);
        }
        let pivot_row = rel[t].clone();
        for row in rel.iter_mut().skip(t + 1) {
            let m = row[t] / pa;
            if m != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + q - mulq(m, y)) % q;
                }
            }
        }
        for jj in t + 1..k {
            let c = rel[t][jj] / pa;
            if c == 0 {
                continue;
            }
            for row in rel.iter_mut() {
                let s = mulq(c, row[t]);
                row[jj] = (row[jj] + q - s) % q;
            }
            for row in v.iter_mut() {
                let s = mulq(c, row[t]);
                row[jj] = (row[jj] + q - s) % q;
            }
            let src = v_inv[jj].clone();
            for (x, &y) in v_inv[t].iter_mut().zip(&src) {
                *x = (*x + mulq(c, y)) % q;
            }
        }
        diag[t] = a;
        t += 1;
    }
    SmithData { diag, v, v_inv }
}
