//! Nilpotent Lie rings on finite abelian p-groups and the group Exp(𝔤).

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abelian::{AbelianGroup, Element, GroupCharacter, Hom, Subgroup};
use crate::error::{Error, Result};
use crate::modular::{gcd, inv_mod, ipow};
use crate::scalars::{Cyclotomic, CyclotomicField};

/// Highest nilpotence class supported by the Campbell–Hausdorff evaluator.
pub const MAX_CLASS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub value: Vec<u64>,
}

/// Word in the letters x (bit 0) and y (bit 1), first letter in the highest
/// bit, with its coefficient modulo p^E.
#[derive(Clone, Debug)]
struct BchTerm {
    len: usize,
    mask: usize,
    coeff: u64,
}

#[derive(Clone, Debug)]
pub struct LieRing {
    carrier: AbelianGroup,
    /// Nonzero [g_i, g_j] for i < j.
    sparse: Vec<(usize, usize, Element)>,
    class: usize,
    bch: Arc<Vec<BchTerm>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class: usize,
    /// log_p of |γ_k| for k = 1, 2, …, ending with 0.
    pub lower_central_series: Vec<u32>,
}

impl LieRing {
    /// Validates the bracket table; rejects rings of class ≥ p.
    pub fn new(carrier: &AbelianGroup, brackets: &[BracketEntry]) -> Result<Self> {
        let k = carrier.rank();
        let mut seen = BTreeSet::new();
        let mut sparse = Vec::new();
        for b in brackets {
            if b.i >= b.j || b.j >= k {
                return Err(Error::InvalidLieRing {
                    axiom: "bracket entries must satisfy i < j < rank".into(),
                    witness: vec![b.i, b.j],
                });
            }
            if !seen.insert((b.i, b.j)) {
                return Err(Error::InvalidLieRing {
                    axiom: "duplicate bracket entry".into(),
                    witness: vec![b.i, b.j],
                });
            }
            if !carrier.is_element(&b.value) {
                return Err(Error::InvalidLieRing {
                    axiom: "bracket value is not a reduced element".into(),
                    witness: vec![b.i, b.j],
                });
            }
            let m = carrier.modulus(b.i).min(carrier.modulus(b.j));
            if carrier.scale(m, &b.value).iter().any(|&c| c != 0) {
                return Err(Error::InvalidLieRing {
                    axiom: "bi-additivity: p^min(e_i,e_j) [g_i,g_j] must vanish".into(),
                    witness: vec![b.i, b.j],
                });
            }
            if b.value.iter().any(|&c| c != 0) {
                sparse.push((b.i, b.j, b.value.clone()));
            }
        }
        let mut ring = LieRing {
            carrier: carrier.clone(),
            sparse,
            class: 0,
            bch: Arc::new(Vec::new()),
        };
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    let (x, y, z) = (
                        carrier.basis_vector(a),
                        carrier.basis_vector(b),
                        carrier.basis_vector(c),
                    );
                    let t1 = ring.bracket(&x, &ring.bracket(&y, &z));
                    let t2 = ring.bracket(&y, &ring.bracket(&z, &x));
                    let t3 = ring.bracket(&z, &ring.bracket(&x, &y));
                    let s = carrier.add(&carrier.add(&t1, &t2), &t3);
                    if s.iter().any(|&v| v != 0) {
                        return Err(Error::InvalidLieRing {
                            axiom: "Jacobi identity".into(),
                            witness: vec![a, b, c],
                        });
                    }
                }
            }
        }
        let report = ring.lower_central_series_report();
        let p = carrier.p();
        if report.class as u64 >= p {
            return Err(Error::ClassTooLarge {
                class: report.class,
                p,
            });
        }
        if report.class > MAX_CLASS {
            return Err(Error::ClassTooLarge {
                class: report.class,
                p,
            });
        }
        ring.class = report.class;
        ring.bch = Arc::new(bch_terms(report.class, p, carrier.max_exp()));
        Ok(ring)
    }

    pub fn abelian(carrier: &AbelianGroup) -> Self {
        LieRing::new(carrier, &[]).expect("abelian ring is valid")
    }

    pub fn carrier(&self) -> &AbelianGroup {
        &self.carrier
    }

    pub fn p(&self) -> u64 {
        self.carrier.p()
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn order(&self) -> u64 {
        self.carrier.order()
    }

    pub fn bracket_entries(&self) -> Vec<BracketEntry> {
        self.sparse
            .iter()
            .map(|(i, j, v)| BracketEntry {
                i: *i,
                j: *j,
                value: v.clone(),
            })
            .collect()
    }

    pub fn bracket(&self, x: &[u64], y: &[u64]) -> Element {
        let mut acc = vec![0i128; self.carrier.rank()];
        for (i, j, v) in &self.sparse {
            let c = x[*i] as i128 * y[*j] as i128 - x[*j] as i128 * y[*i] as i128;
            if c != 0 {
                for (a, &b) in acc.iter_mut().zip(v) {
                    *a += c * b as i128;
                }
            }
        }
        self.carrier.reduce_signed(&acc)
    }

    /// Class and the sizes of γ_1 ⊇ γ_2 ⊇ ….
    pub fn lower_central_series_report(&self) -> ClassReport {
        let series = self.lower_central_series();
        ClassReport {
            class: series.iter().filter(|s| !s.is_empty()).count(),
            lower_central_series: series
                .iter()
                .filter(|s| !s.is_empty())
                .map(|s| s.len())
                .chain([0])
                .collect(),
        }
    }

    /// γ_1 = 𝔤, γ_{k+1} = [𝔤, γ_k], up to the last nonzero term.
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let a = &self.carrier;
        let mut out = Vec::new();
        let mut cur = Subgroup::full(a);
        while !cur.is_empty() {
            out.push(cur.clone());
            cur = self.bracket_subgroups(&Subgroup::full(a), &cur);
            if out.len() > a.len() as usize + 1 {
                break;
            }
        }
        if out.is_empty() {
            out.push(Subgroup::zero(a));
        }
        out
    }

    /// [S, T] as a subgroup.
    pub fn bracket_subgroups(&self, s: &Subgroup, t: &Subgroup) -> Subgroup {
        let gs = s.generators();
        let gt = t.generators();
        let mut gens = Vec::new();
        for x in &gs {
            for y in &gt {
                let b = self.bracket(x, y);
                if b.iter().any(|&c| c != 0) {
                    gens.push(b);
                }
            }
        }
        Subgroup::from_generators(&self.carrier, &gens)
    }

    pub fn is_subring(&self, s: &Subgroup) -> bool {
        let g = s.generators();
        g.iter()
            .all(|x| g.iter().all(|y| s.contains(&self.bracket(x, y))))
    }

    pub fn center(&self) -> Subgroup {
        let a = &self.carrier;
        let images: Vec<Element> = (0..a.rank())
            .map(|i| {
                let x = a.basis_vector(i);
                (0..a.rank())
                    .flat_map(|j| self.bracket(&x, &a.basis_vector(j)))
                    .collect()
            })
            .collect();
        let target = a.power(a.rank());
        Hom::new(a, &target, images)
            .expect("bracket is additive")
            .kernel()
    }

    // ----- the group Exp(𝔤) -----

    pub fn identity(&self) -> Element {
        self.carrier.zero()
    }

    pub fn inverse(&self, x: &[u64]) -> Element {
        self.carrier.neg(x)
    }

    pub fn power(&self, x: &[u64], n: i64) -> Element {
        let m = ipow(self.p(), self.carrier.max_exp()) as i64;
        self.carrier.scale(n.rem_euclid(m) as u64, x)
    }

    /// Campbell–Hausdorff product x * y.
    pub fn mul(&self, x: &[u64], y: &[u64]) -> Element {
        let a = &self.carrier;
        match self.class {
            0 | 1 => a.add(x, y),
            2 => {
                let half = (ipow(self.p(), a.max_exp()) + 1) / 2;
                let b = self.bracket(x, y);
                a.add(&a.add(x, y), &a.scale(half, &b))
            }
            c => {
                // nested brackets of every word, indexed by (length, mask)
                let id = |len: usize, mask: usize| (1usize << len) - 2 + mask;
                let mut nested: Vec<Option<Element>> = vec![None; (1usize << (c + 1)) - 2];
                nested[id(1, 0)] = Some(x.to_vec());
                nested[id(1, 1)] = Some(y.to_vec());
                for len in 2..=c {
                    for mask in 0..(1usize << len) {
                        let suffix = mask & ((1 << (len - 1)) - 1);
                        let Some(inner) = &nested[id(len - 1, suffix)] else {
                            continue;
                        };
                        let letter = if mask >> (len - 1) & 1 == 1 { y } else { x };
                        let v = self.bracket(letter, inner);
                        if v.iter().any(|&c| c != 0) {
                            nested[id(len, mask)] = Some(v);
                        }
                    }
                }
                let mut acc = vec![0i128; a.rank()];
                for term in self.bch.iter() {
                    if let Some(v) = &nested[id(term.len, term.mask)] {
                        for (s, &b) in acc.iter_mut().zip(v) {
                            *s += term.coeff as i128 * b as i128;
                        }
                    }
                }
                a.reduce_signed(&acc)
            }
        }
    }

    /// g * x * g^{-1}.
    pub fn conjugate(&self, g: &[u64], x: &[u64]) -> Element {
        self.mul(&self.mul(g, x), &self.inverse(g))
    }

    pub fn commutator(&self, x: &[u64], y: &[u64]) -> Element {
        let xy = self.mul(x, y);
        let xinv_yinv = self.mul(&self.inverse(x), &self.inverse(y));
        self.mul(&xy, &xinv_yinv)
    }

    /// The additive map x ↦ g * x * g^{-1}.
    pub fn adjoint(&self, g: &[u64]) -> Hom {
        let a = &self.carrier;
        let images = (0..a.rank())
            .map(|i| self.conjugate(g, &a.basis_vector(i)))
            .collect();
        Hom::new(a, a, images).expect("conjugation is additive")
    }

    fn generator_adjoints(&self) -> Vec<Hom> {
        (0..self.carrier.rank())
            .map(|i| self.adjoint(&self.carrier.basis_vector(i)))
            .collect()
    }

    // ----- coadjoint orbits -----

    /// f ∘ φ for an additive map φ of the carrier.
    pub fn pull_back(&self, f: &GroupCharacter, phi: &Hom) -> GroupCharacter {
        let a = &self.carrier;
        let e = a.max_exp();
        let coeffs = (0..a.rank())
            .map(|i| {
                let v = f.eval_exp(&phi.images()[i]);
                let s = ipow(a.p(), e - a.exponents()[i]);
                debug_assert_eq!(v % s, 0);
                v / s
            })
            .collect();
        GroupCharacter::new(a, coeffs).expect("shape preserved")
    }

    pub fn coadjoint_orbit(&self, f: &GroupCharacter) -> Orbit {
        let gens = self.generator_adjoints();
        let mut members: BTreeSet<Vec<u64>> = BTreeSet::new();
        members.insert(f.coeffs().to_vec());
        let mut frontier = vec![f.clone()];
        while let Some(h) = frontier.pop() {
            for phi in &gens {
                let g = self.pull_back(&h, phi);
                if members.insert(g.coeffs().to_vec()) {
                    frontier.push(g);
                }
            }
        }
        Orbit {
            carrier: self.carrier.clone(),
            members: members.into_iter().collect(),
        }
    }

    /// All coadjoint orbits, ordered by their least member.
    pub fn all_orbits(&self) -> Vec<Orbit> {
        let a = &self.carrier;
        let gens = self.generator_adjoints();
        let mut seen = vec![false; a.order() as usize];
        let mut out = Vec::new();
        for idx in 0..a.order() as usize {
            if seen[idx] {
                continue;
            }
            let start = a.element_at(idx);
            seen[idx] = true;
            let mut members = vec![start.clone()];
            let mut frontier = vec![start];
            while let Some(c) = frontier.pop() {
                let h = GroupCharacter::new(a, c).expect("shape");
                for phi in &gens {
                    let g = self.pull_back(&h, phi);
                    let gi = a.index_of(g.coeffs());
                    if !seen[gi] {
                        seen[gi] = true;
                        members.push(g.coeffs().to_vec());
                        frontier.push(g.coeffs().to_vec());
                    }
                }
            }
            members.sort();
            out.push(Orbit {
                carrier: a.clone(),
                members,
            });
        }
        out
    }

    /// Conjugacy classes of Exp(𝔤), ordered by least member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Element>> {
        let a = &self.carrier;
        let gens = self.generator_adjoints();
        let mut seen = vec![false; a.order() as usize];
        let mut out = Vec::new();
        for idx in 0..a.order() as usize {
            if seen[idx] {
                continue;
            }
            let start = a.element_at(idx);
            seen[idx] = true;
            let mut members = vec![start.clone()];
            let mut frontier = vec![start];
            while let Some(x) = frontier.pop() {
                for phi in &gens {
                    let y = phi.apply(&x);
                    let yi = a.index_of(&y);
                    if !seen[yi] {
                        seen[yi] = true;
                        members.push(y.clone());
                        frontier.push(y);
                    }
                }
            }
            members.sort();
            out.push(members);
        }
        out
    }

    pub fn functional(&self, coeffs: Vec<u64>) -> Result<GroupCharacter> {
        GroupCharacter::new(&self.carrier, coeffs)
    }
}

/// A coadjoint orbit, stored as sorted coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    carrier: AbelianGroup,
    members: Vec<Vec<u64>>,
}

impl Orbit {
    pub fn members(&self) -> &[Vec<u64>] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Lexicographically least member.
    pub fn representative(&self) -> GroupCharacter {
        GroupCharacter::new(&self.carrier, self.members[0].clone()).expect("shape")
    }

    pub fn contains(&self, f: &GroupCharacter) -> bool {
        self.members.binary_search(&f.coeffs().to_vec()).is_ok()
    }

    /// √|Ω| as a power of p: returns the exponent d with |Ω| = p^{2d}.
    pub fn half_len(&self) -> Option<u32> {
        let p = self.carrier.p() as usize;
        let mut n = self.members.len();
        let mut e = 0;
        while n > 1 {
            if n % p != 0 {
                return None;
            }
            n /= p;
            e += 1;
        }
        (e % 2 == 0).then_some(e / 2)
    }

    /// |Ω|^{-1/2} Σ_{f ∈ Ω} f(g).
    pub fn character(&self, field: &Arc<CyclotomicField>, g: &[u64]) -> Cyclotomic {
        let a = &self.carrier;
        let e = a.max_exp();
        let n = field.conductor();
        let step = n / ipow(a.p(), e);
        let mut counts = vec![0i128; n as usize];
        for m in &self.members {
            let f = GroupCharacter::new(a, m.clone()).expect("shape");
            counts[(f.eval_exp(g) * step) as usize] += 1;
        }
        let d = self.half_len().expect("orbit size is an even power of p");
        Cyclotomic::from_root_counts(field, &counts)
            .div_rational(ipow(a.p(), d) as i128)
            .expect("nonzero")
    }
}

/// Dynkin coefficients of the Campbell–Hausdorff series up to word length `class`,
/// reduced modulo p^e.
fn bch_terms(class: usize, p: u64, e: u32) -> Vec<BchTerm> {
    let q = ipow(p, e.max(1));
    let mut out = Vec::new();
    for len in 1..=class {
        for mask in 0..(1u32 << len) {
            let word: Vec<bool> = (0..len).map(|k| mask >> (len - 1 - k) & 1 == 1).collect();
            if len >= 2 && word[len - 1] == word[len - 2] {
                continue;
            }
            let (num, den) = dynkin_coefficient(&word);
            if num == 0 {
                continue;
            }
            let inv = inv_mod(den.rem_euclid(q as i128) as u64, q).expect("denominator prime to p");
            let c = (num.rem_euclid(q as i128) as u128 * inv as u128 % q as u128) as u64;
            if c != 0 {
                out.push(BchTerm {
                    len,
                    mask: mask as usize,
                    coeff: c,
                });
            }
        }
    }
    out
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

/// Σ over splittings of the word into blocks x^r y^s of
/// (-1)^{n-1} / (n · len · Π r_i! s_i!).
fn dynkin_coefficient(word: &[bool]) -> (i128, i128) {
    let m = word.len();
    let (mut num, mut den) = (0i128, 1i128);
    for cuts in 0..(1u32 << (m - 1)) {
        let mut blocks: Vec<&[bool]> = Vec::new();
        let mut start = 0;
        for k in 0..m - 1 {
            if cuts >> k & 1 == 1 {
                blocks.push(&word[start..=k]);
                start = k + 1;
            }
        }
        blocks.push(&word[start..]);
        let mut weight = 1i128;
        let mut ok = true;
        for b in &blocks {
            let r = b.iter().take_while(|&&l| !l).count();
            if b[r..].iter().any(|&l| !l) {
                ok = false;
                break;
            }
            weight *= factorial(r) * factorial(b.len() - r);
        }
        if !ok {
            continue;
        }
        let n = blocks.len() as i128;
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let d = n * m as i128 * weight;
        num = num * d + sign * den;
        den *= d;
        let g = gcd(num, den);
        if g > 1 {
            num /= g;
            den /= g;
        }
    }
    (num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dynkin_low_order() {
        assert_eq!(dynkin_coefficient(&[false]), (1, 1));
        // xy and yx together give [x,y]/2
        assert_eq!(dynkin_coefficient(&[false, true]), (1, 4));
        assert_eq!(dynkin_coefficient(&[true, false]), (-1, 4));
    }

    #[test]
    fn abelian_class() {
        let a = AbelianGroup::new(3, vec![1, 1]).unwrap();
        let r = LieRing::abelian(&a);
        assert!(r.class() <= 1);
    }
}
