//! Small integer helpers for residue arithmetic modulo prime powers.

/// `base^exp` as a plain integer.
pub fn ipow(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("prime power overflow")
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Reduces a signed integer into `[0, m)`.
pub fn reduce(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

pub fn neg_mod(a: u64, m: u64) -> u64 {
    if a % m == 0 {
        0
    } else {
        m - a % m
    }
}

/// p-adic valuation of `x` (with `cap` returned for zero).
pub fn valuation(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 && v < cap {
        x /= p;
        v += 1;
    }
    v
}

/// Legendre symbol `(a | p)` as -1, 0 or 1.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = reduce(a as i128, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn is_square_mod(a: u64, p: u64) -> bool {
    legendre(a as i64, p) == 1
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant of a square matrix over F_p by elimination.
pub fn det_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| m[r][c] % p != 0) else {
            return 0;
        };
        if piv != c {
            m.swap(piv, c);
            det = neg_mod(det, p);
        }
        let pv = m[c][c] % p;
        det = mul_mod(det, pv, p);
        let inv = inv_mod(pv, p).expect("unit pivot");
        for r in c + 1..n {
            let factor = mul_mod(m[r][c] % p, inv, p);
            if factor == 0 {
                continue;
            }
            for k in c..n {
                let sub = mul_mod(factor, m[c][k] % p, p);
                m[r][k] = (m[r][k] % p + p - sub) % p;
            }
        }
    }
    det
}

/// Rank of a matrix over F_p.
pub fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] % p != 0) else {
            continue;
        };
        m.swap(piv, rank);
        let inv = inv_mod(m[rank][c] % p, p).unwrap();
        for r in 0..rows {
            if r != rank && m[r][c] % p != 0 {
                let factor = mul_mod(m[r][c] % p, inv, p);
                for k in 0..cols {
                    let sub = mul_mod(factor, m[rank][k] % p, p);
                    m[r][k] = (m[r][k] % p + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(2, 9), Some(5));
        assert_eq!(inv_mod(3, 9), None);
        assert_eq!(inv_mod(4, 25), Some(19));
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(legendre(4, 5), 1);
        assert_eq!(legendre(-1, 3), -1);
        assert_eq!(legendre(-1, 13), 1);
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(18, 3, 5), 2);
        assert_eq!(valuation(0, 3, 4), 4);
        assert_eq!(valuation(7, 3, 4), 0);
    }

    #[test]
    fn small_dets() {
        assert_eq!(det_mod_p(vec![vec![0, 1], vec![1, 0]], 3), 2);
        assert_eq!(det_mod_p(vec![vec![2, 1], vec![4, 2]], 5), 0);
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 4]], 5), 1);
    }
}
