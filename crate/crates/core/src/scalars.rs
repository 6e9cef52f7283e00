//! Exact arithmetic in the cyclotomic field Q(ζ_N).
//!
//! Elements are stored as integer numerators over one positive common
//! denominator, in the power basis reduced modulo the N-th cyclotomic
//! polynomial.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::{gcd, legendre};

#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u64,
    degree: usize,
    /// Reduced form of ζ^k for 0 ≤ k < N, as sparse (index, coefficient) lists.
    roots: Vec<Vec<(usize, i128)>>,
}

fn poly_divide_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn];
    let mut quot = vec![0i128; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn] / lead;
        quot[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn cyclotomic_poly(n: u64) -> Vec<i128> {
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = poly_divide_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

impl CyclotomicField {
    pub fn new(conductor: u64) -> Arc<Self> {
        assert!(conductor >= 1);
        let phi = cyclotomic_poly(conductor);
        let degree = phi.len() - 1;
        let mut roots = Vec::with_capacity(conductor as usize);
        let mut cur = vec![0i128; degree];
        cur[0] = 1;
        for _ in 0..conductor {
            roots.push(
                cur.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (i, c))
                    .collect(),
            );
            // multiply by x and reduce with the monic polynomial phi
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..degree {
                    cur[i] -= top * phi[i];
                }
            }
        }
        Arc::new(CyclotomicField {
            conductor,
            degree,
            roots,
        })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// An exact element of Q(ζ_N).
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    num: Vec<i128>,
    den: i128,
}

/// A root of unity ζ_order^exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub order: u64,
    pub exponent: u64,
}

impl RootOfUnity {
    pub fn new(order: u64, exponent: i64) -> Self {
        RootOfUnity {
            order,
            exponent: exponent.rem_euclid(order as i64) as u64,
        }
    }

    pub fn one() -> Self {
        RootOfUnity {
            order: 1,
            exponent: 0,
        }
    }

    pub fn to_cyclotomic(&self, field: &Arc<CyclotomicField>) -> Result<Cyclotomic> {
        let n = field.conductor;
        if n % self.order != 0 {
            return Err(Error::ConductorTooSmall {
                conductor: n,
                needed: self.order,
            });
        }
        Ok(Cyclotomic::root(field, (n / self.order) * self.exponent))
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let order = lcm(self.order, other.order);
        let e = self.exponent * (order / self.order) + other.exponent * (order / other.order);
        RootOfUnity::new(order, (e % order) as i64)
    }

    pub fn inverse(&self) -> RootOfUnity {
        RootOfUnity::new(self.order, -(self.exponent as i64))
    }

    pub fn is_one(&self) -> bool {
        self.exponent % self.order == 0
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a as i128, b as i128) as u64 * b
}

impl Cyclotomic {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Cyclotomic {
            field: field.clone(),
            num: vec![0; field.degree],
            den: 1,
        }
    }

    pub fn from_int(field: &Arc<CyclotomicField>, n: i128) -> Self {
        let mut z = Self::zero(field);
        z.num[0] = n;
        z
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, n: i128, d: i128) -> Result<Self> {
        Self::from_int(field, n).div_rational(d)
    }

    /// ζ_N^k.
    pub fn root(field: &Arc<CyclotomicField>, k: u64) -> Self {
        Self::root_sum(field, &[(k, 1)])
    }

    /// Σ c · ζ_N^k over the listed (k, c) pairs.
    pub fn root_sum(field: &Arc<CyclotomicField>, terms: &[(u64, i128)]) -> Self {
        let mut z = Self::zero(field);
        for &(k, c) in terms {
            if c == 0 {
                continue;
            }
            for &(i, r) in &field.roots[(k % field.conductor) as usize] {
                z.num[i] += c * r;
            }
        }
        z
    }

    /// Σ counts[k] · ζ_N^k for a dense count vector of length N.
    pub fn from_root_counts(field: &Arc<CyclotomicField>, counts: &[i128]) -> Self {
        let mut z = Self::zero(field);
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                for &(i, r) in &field.roots[k] {
                    z.num[i] += c * r;
                }
            }
        }
        z
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor
    }

    pub fn numerators(&self) -> &[i128] {
        &self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.den == 1 && self.num[0] == 1 && self.num[1..].iter().all(|&c| c == 0)
    }

    fn normalize(mut self) -> Self {
        if self.den < 0 {
            self.den = -self.den;
            self.num.iter_mut().for_each(|c| *c = -*c);
        }
        if self.den != 1 {
            let mut g = self.den;
            for &c in &self.num {
                if g == 1 {
                    break;
                }
                g = gcd(g, c);
            }
            if g > 1 {
                self.den /= g;
                self.num.iter_mut().for_each(|c| *c /= g);
            }
        }
        self
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field.conductor == other.field.conductor {
            Ok(())
        } else {
            Err(Error::ConductorMismatch(
                self.field.conductor,
                other.field.conductor,
            ))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.combine(other, 1))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.combine(other, -1))
    }

    fn combine(&self, other: &Self, sign: i128) -> Self {
        let (num, den) = if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| a + sign * b)
                .collect();
            (num, self.den)
        } else {
            let g = gcd(self.den, other.den);
            let (fa, fb) = (other.den / g, self.den / g);
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| a * fa + sign * b * fb)
                .collect();
            (num, self.den * fa)
        };
        Cyclotomic {
            field: self.field.clone(),
            num,
            den,
        }
        .normalize()
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let d = self.field.degree;
        let mut prod = vec![0i128; 2 * d - 1];
        for (i, &a) in self.num.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.num.iter().enumerate() {
                if b != 0 {
                    prod[i + j] += a * b;
                }
            }
        }
        for k in d..2 * d - 1 {
            let c = prod[k];
            if c != 0 {
                for &(i, r) in &self.field.roots[k] {
                    prod[i] += c * r;
                }
            }
        }
        prod.truncate(d);
        Ok(Cyclotomic {
            field: self.field.clone(),
            num: prod,
            den: self.den * other.den,
        }
        .normalize())
    }

    pub fn scale(&self, n: i128) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            num: self.num.iter().map(|c| c * n).collect(),
            den: self.den,
        }
        .normalize()
    }

    pub fn div_rational(&self, d: i128) -> Result<Self> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Cyclotomic {
            field: self.field.clone(),
            num: self.num.clone(),
            den: self.den * d,
        }
        .normalize())
    }

    /// Complex conjugation: ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let n = self.field.conductor;
        let terms: Vec<(u64, i128)> = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| ((n - k as u64) % n, c))
            .collect();
        let mut z = Self::root_sum(&self.field, &terms);
        z.den = self.den;
        z.normalize()
    }

    /// a · conj(a).
    pub fn abs_squared(&self) -> Self {
        self * &self.conj()
    }

    /// Inverse of an element of absolute value 1.
    pub fn inverse_unit(&self) -> Option<Self> {
        if self.abs_squared().is_one() {
            Some(self.conj())
        } else {
            None
        }
    }

    /// Integer power of a unit-modulus element (negative exponents use conj).
    pub fn pow_unit(&self, e: i64) -> Self {
        let base = if e < 0 {
            self.inverse_unit().expect("unit modulus required")
        } else {
            self.clone()
        };
        let mut acc = Self::one(&self.field);
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<(i128, i128)> {
        if self.num[1..].iter().all(|&c| c == 0) {
            Some((self.num[0], self.den))
        } else {
            None
        }
    }

    /// Which root of unity this is, if any (ζ_N^k ↦ k).
    pub fn root_exponent(&self) -> Option<u64> {
        if self.den != 1 {
            return None;
        }
        (0..self.field.conductor).find(|&k| {
            let r = &self.field.roots[k as usize];
            let mut dense = vec![0i128; self.field.degree];
            for &(i, c) in r {
                dense[i] = c;
            }
            dense == self.num
        })
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.field.conductor as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (k, &c) in self.num.iter().enumerate() {
            if c != 0 {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n;
                re += c as f64 * t.cos();
                im += c as f64 * t.sin();
            }
        }
        (re / self.den as f64, im / self.den as f64)
    }

    /// Positive real square root of the odd prime p, as a Gauss sum.
    pub fn sqrt_p(field: &Arc<CyclotomicField>, p: u64) -> Result<Self> {
        let n = field.conductor;
        if n % (4 * p) != 0 {
            return Err(Error::ConductorTooSmall {
                conductor: n,
                needed: 4 * p,
            });
        }
        let step = n / p;
        let terms: Vec<(u64, i128)> = (1..p)
            .map(|x| (x * step, legendre(x as i64, p) as i128))
            .collect();
        let g = Self::root_sum(field, &terms);
        if p % 4 == 3 {
            Ok(&g * &Self::root(field, 3 * n / 4))
        } else {
            Ok(g)
        }
    }

    pub fn to_json(&self) -> CyclotomicJson {
        let (re, im) = self.to_complex();
        CyclotomicJson {
            conductor: self.field.conductor,
            coeffs: self
                .num
                .iter()
                .map(|&c| {
                    let g = gcd(c, self.den).max(1);
                    let (n, d) = (c / g, self.den / g);
                    if d == 1 {
                        n.to_string()
                    } else {
                        format!("{n}/{d}")
                    }
                })
                .collect(),
            re,
            im,
        }
    }
}

/// Serialized form: exact coefficients plus a float rendering.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CyclotomicJson {
    pub conductor: u64,
    pub coeffs: Vec<String>,
    pub re: f64,
    pub im: f64,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.den == other.den && self.num == other.num
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{k}"),
            });
        }
        let body = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        };
        if self.den == 1 {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.try_add(rhs).expect("conductor mismatch")
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.try_sub(rhs).expect("conductor mismatch")
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.try_mul(rhs).expect("conductor mismatch")
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale(-1)
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: (f64, f64), b: (f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12
    }

    #[test]
    fn i_squared_is_minus_one() {
        let f = CyclotomicField::new(4);
        let i = Cyclotomic::root(&f, 1);
        assert_eq!(&i * &i, Cyclotomic::from_int(&f, -1));
    }

    #[test]
    fn nontrivial_cube_roots_sum_to_minus_one() {
        let f = CyclotomicField::new(12);
        let s = &Cyclotomic::root(&f, 4) + &Cyclotomic::root(&f, 8);
        assert_eq!(s, Cyclotomic::from_int(&f, -1));
    }

    #[test]
    fn conj_inverts_roots() {
        let f = CyclotomicField::new(36);
        for k in 0..36 {
            assert_eq!(Cyclotomic::root(&f, k).conj(), Cyclotomic::root(&f, (36 - k) % 36));
        }
    }

    #[test]
    fn sqrt_p_numerics_and_square() {
        for p in [3u64, 5, 7, 11, 13] {
            let f = CyclotomicField::new(4 * p);
            let s = Cyclotomic::sqrt_p(&f, p).unwrap();
            assert!(close(s.to_complex(), ((p as f64).sqrt(), 0.0)));
            assert_eq!(&s * &s, Cyclotomic::from_int(&f, p as i128));
        }
    }

    #[test]
    fn sqrt_p_needs_conductor() {
        let f = CyclotomicField::new(12);
        assert!(Cyclotomic::sqrt_p(&f, 5).is_err());
    }

    #[test]
    fn complex_embedding() {
        let f = CyclotomicField::new(20);
        assert!(close(Cyclotomic::from_int(&f, -1).to_complex(), (-1.0, 0.0)));
        assert!(close(Cyclotomic::root(&f, 5).to_complex(), (0.0, 1.0)));
    }

    #[test]
    fn rational_division() {
        let f = CyclotomicField::new(12);
        let half = Cyclotomic::from_rational(&f, 1, 2).unwrap();
        assert_eq!(&half + &half, Cyclotomic::one(&f));
        assert_eq!(Cyclotomic::one(&f).div_rational(0), Err(Error::DivisionByZero));
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Cyclotomic::one(&CyclotomicField::new(12));
        let b = Cyclotomic::one(&CyclotomicField::new(20));
        assert!(matches!(a.try_add(&b), Err(Error::ConductorMismatch(12, 20))));
    }

    #[test]
    fn root_exponent_recovery() {
        let f = CyclotomicField::new(36);
        assert_eq!(Cyclotomic::root(&f, 7).root_exponent(), Some(7));
        assert_eq!(Cyclotomic::from_int(&f, 2).root_exponent(), None);
    }
}
