//! Finite abelian p-groups with a distinguished basis, subgroups, morphisms,
//! characters, pairings and determinant lines.

mod det;
pub(crate) mod howell;
mod pairing;
mod smith;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::{ipow, neg_mod, valuation};

pub use det::{
    canonical_filtration, det_automorphism, det_pairing, exact_sequence_factor, orient_ratio,
    series_value, standard_series, GradedPiece, Orientation,
};
pub use pairing::{GroupCharacter, Pairing};

/// A coordinate vector; entry i is a residue modulo p^{e_i}.
pub type Element = Vec<u64>;

/// ⊕_i Z/p^{e_i} with its ordered basis g_1, …, g_k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    p: u64,
    exponents: Vec<u32>,
}

impl AbelianGroup {
    /// Exponents must be positive and sorted descending.
    pub fn new(p: u64, exponents: Vec<u32>) -> Result<Self> {
        if !crate::modular::is_odd_prime(p) {
            return Err(Error::Input(format!("{p} is not an odd prime")));
        }
        if exponents.iter().any(|&e| e == 0) {
            return Err(Error::Input("exponents must be positive".into()));
        }
        if exponents.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Input("exponents must be sorted descending".into()));
        }
        Ok(AbelianGroup { p, exponents })
    }

    /// Internal constructor for product groups whose exponents need not be sorted.
    pub(crate) fn raw(p: u64, exponents: Vec<u32>) -> Self {
        debug_assert!(exponents.iter().all(|&e| e > 0));
        AbelianGroup { p, exponents }
    }

    pub fn trivial(p: u64) -> Self {
        AbelianGroup {
            p,
            exponents: vec![],
        }
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        assert_eq!(self.p, other.p);
        let mut ex = self.exponents.clone();
        ex.extend_from_slice(&other.exponents);
        AbelianGroup::raw(self.p, ex)
    }

    pub fn power(&self, m: usize) -> AbelianGroup {
        AbelianGroup::raw(self.p, self.exponents.repeat(m))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// log_p |A|.
    pub fn len(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn order(&self) -> u64 {
        ipow(self.p, self.len())
    }

    pub fn max_exp(&self) -> u32 {
        self.exponents.iter().copied().max().unwrap_or(0)
    }

    pub fn modulus(&self, i: usize) -> u64 {
        ipow(self.p, self.exponents[i])
    }

    pub fn is_sorted(&self) -> bool {
        self.exponents.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn zero(&self) -> Element {
        vec![0; self.rank()]
    }

    pub fn basis_vector(&self, i: usize) -> Element {
        let mut x = self.zero();
        x[i] = 1;
        x
    }

    pub fn is_element(&self, x: &[u64]) -> bool {
        x.len() == self.rank() && x.iter().enumerate().all(|(i, &c)| c < self.modulus(i))
    }

    pub fn reduce_signed(&self, x: &[i128]) -> Element {
        x.iter()
            .enumerate()
            .map(|(i, &c)| c.rem_euclid(self.modulus(i) as i128) as u64)
            .collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Element {
        x.iter()
            .zip(y)
            .enumerate()
            .map(|(i, (&a, &b))| (a + b) % self.modulus(i))
            .collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Element {
        x.iter()
            .zip(y)
            .enumerate()
            .map(|(i, (&a, &b))| {
                let m = self.modulus(i);
                (a + m - b % m) % m
            })
            .collect()
    }

    pub fn neg(&self, x: &[u64]) -> Element {
        x.iter()
            .enumerate()
            .map(|(i, &a)| neg_mod(a, self.modulus(i)))
            .collect()
    }

    pub fn scale(&self, c: u64, x: &[u64]) -> Element {
        x.iter()
            .enumerate()
            .map(|(i, &a)| {
                let m = self.modulus(i);
                ((c % m) as u128 * a as u128 % m as u128) as u64
            })
            .collect()
    }

    /// Order of x as a power of p: returns the exponent.
    pub fn element_order_exp(&self, x: &[u64]) -> u32 {
        x.iter()
            .enumerate()
            .map(|(i, &a)| self.exponents[i] - valuation(a, self.p, self.exponents[i]))
            .max()
            .unwrap_or(0)
    }

    /// Index of x in lexicographic enumeration order.
    pub fn index_of(&self, x: &[u64]) -> usize {
        let mut idx = 0usize;
        for (i, &a) in x.iter().enumerate() {
            idx = idx * self.modulus(i) as usize + a as usize;
        }
        idx
    }

    pub fn element_at(&self, mut idx: usize) -> Element {
        let mut x = self.zero();
        for i in (0..self.rank()).rev() {
            let m = self.modulus(i) as usize;
            x[i] = (idx % m) as u64;
            idx /= m;
        }
        x
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order() as usize).map(|i| self.element_at(i))
    }

    pub(crate) fn embed(&self, x: &[u64]) -> Vec<u64> {
        let e = self.max_exp();
        x.iter()
            .enumerate()
            .map(|(i, &a)| a * ipow(self.p, e - self.exponents[i]))
            .collect()
    }

    pub(crate) fn unembed(&self, v: &[u64]) -> Element {
        let e = self.max_exp();
        v.iter()
            .enumerate()
            .map(|(i, &a)| {
                let s = ipow(self.p, e - self.exponents[i]);
                debug_assert_eq!(a % s, 0);
                (a / s) % self.modulus(i)
            })
            .collect()
    }
}

/// A subgroup stored by the Howell form of its embedded generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    ambient: AbelianGroup,
    rows: Vec<Vec<u64>>,
}

impl Subgroup {
    pub fn from_generators(ambient: &AbelianGroup, gens: &[Element]) -> Self {
        let rows: Vec<Vec<u64>> = gens.iter().map(|g| ambient.embed(g)).collect();
        Self::from_embedded_rows(ambient, rows)
    }

    fn from_embedded_rows(ambient: &AbelianGroup, rows: Vec<Vec<u64>>) -> Self {
        let rows = howell::howell_form(ambient.p, ambient.max_exp(), rows, ambient.rank());
        Subgroup {
            ambient: ambient.clone(),
            rows,
        }
    }

    pub fn zero(ambient: &AbelianGroup) -> Self {
        Subgroup {
            ambient: ambient.clone(),
            rows: vec![],
        }
    }

    pub fn full(ambient: &AbelianGroup) -> Self {
        let gens: Vec<Element> = (0..ambient.rank()).map(|i| ambient.basis_vector(i)).collect();
        Self::from_generators(ambient, &gens)
    }

    pub fn ambient(&self) -> &AbelianGroup {
        &self.ambient
    }

    /// Howell generators in ambient coordinates.
    pub fn generators(&self) -> Vec<Element> {
        self.rows.iter().map(|r| self.ambient.unembed(r)).collect()
    }

    fn pivot_exps(&self) -> Vec<u32> {
        let (p, e) = (self.ambient.p, self.ambient.max_exp());
        self.rows
            .iter()
            .map(|r| {
                let c = howell::pivot(r).unwrap();
                e - valuation(r[c], p, e)
            })
            .collect()
    }

    /// log_p |S|.
    pub fn len(&self) -> u32 {
        self.pivot_exps().iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn order(&self) -> u64 {
        ipow(self.ambient.p, self.len())
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        let mut v = self.ambient.embed(x);
        howell::reduce(self.ambient.p, self.ambient.max_exp(), &self.rows, &mut v);
        v.iter().all(|&c| c == 0)
    }

    /// Canonical representative of x + S.
    pub fn coset_rep(&self, x: &[u64]) -> Element {
        let mut v = self.ambient.embed(x);
        howell::reduce(self.ambient.p, self.ambient.max_exp(), &self.rows, &mut v);
        self.ambient.unembed(&v)
    }

    fn check(&self, other: &Subgroup) -> Result<()> {
        if self.ambient != other.ambient {
            Err(Error::AmbientMismatch)
        } else {
            Ok(())
        }
    }

    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Self::from_embedded_rows(&self.ambient, rows))
    }

    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check(other)?;
        let k = self.ambient.rank();
        let mut rows = Vec::new();
        for s in &self.rows {
            let mut r = s.clone();
            r.extend_from_slice(s);
            rows.push(r);
        }
        for t in &other.rows {
            let mut r = t.clone();
            r.extend(std::iter::repeat_n(0, k));
            rows.push(r);
        }
        let form = howell::howell_form(self.ambient.p, self.ambient.max_exp(), rows, 2 * k);
        let kept: Vec<Vec<u64>> = form
            .into_iter()
            .filter(|r| r[..k].iter().all(|&x| x == 0))
            .map(|r| r[k..].to_vec())
            .collect();
        Ok(Self::from_embedded_rows(&self.ambient, kept))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.generators().iter().all(|g| other.contains(g))
    }

    /// Every element exactly once.
    pub fn elements(&self) -> Vec<Element> {
        let a = &self.ambient;
        let q = ipow(a.p, a.max_exp());
        let ranges: Vec<u64> = self.pivot_exps().iter().map(|&d| ipow(a.p, d)).collect();
        let mut out = Vec::with_capacity(ranges.iter().product::<u64>() as usize);
        let mut counter = vec![0u64; ranges.len()];
        let mut acc = vec![0u64; a.rank()];
        loop {
            out.push(a.unembed(&acc));
            let mut i = ranges.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                counter[i] += 1;
                for (x, &y) in acc.iter_mut().zip(&self.rows[i]) {
                    *x = (*x + y) % q;
                }
                if counter[i] < ranges[i] {
                    break;
                }
                counter[i] = 0;
                for (x, &y) in acc.iter_mut().zip(&self.rows[i]) {
                    let s = (y as u128 * ranges[i] as u128 % q as u128) as u64;
                    *x = (*x + q - s) % q;
                }
            }
        }
    }

    /// S + p^n S style multiple: {c·s}.
    pub fn scaled(&self, c: u64) -> Subgroup {
        let gens: Vec<Element> = self
            .generators()
            .iter()
            .map(|g| self.ambient.scale(c, g))
            .collect();
        Subgroup::from_generators(&self.ambient, &gens)
    }
}

/// A homomorphism given by the images of the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hom {
    src: AbelianGroup,
    dst: AbelianGroup,
    images: Vec<Element>,
}

impl Hom {
    pub fn new(src: &AbelianGroup, dst: &AbelianGroup, images: Vec<Element>) -> Result<Self> {
        if images.len() != src.rank() || images.iter().any(|x| !dst.is_element(x)) {
            return Err(Error::Input("morphism images have wrong shape".into()));
        }
        for (i, x) in images.iter().enumerate() {
            if dst.scale(src.modulus(i), x).iter().any(|&c| c != 0) {
                return Err(Error::Input(format!(
                    "image of basis element {i} has order exceeding its source order"
                )));
            }
        }
        Ok(Hom {
            src: src.clone(),
            dst: dst.clone(),
            images,
        })
    }

    pub fn identity(a: &AbelianGroup) -> Self {
        Hom {
            src: a.clone(),
            dst: a.clone(),
            images: (0..a.rank()).map(|i| a.basis_vector(i)).collect(),
        }
    }

    pub fn src(&self) -> &AbelianGroup {
        &self.src
    }

    pub fn dst(&self) -> &AbelianGroup {
        &self.dst
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn apply(&self, x: &[u64]) -> Element {
        let mut acc: Vec<i128> = vec![0; self.dst.rank()];
        for (c, img) in x.iter().zip(&self.images) {
            if *c == 0 {
                continue;
            }
            for (a, &y) in acc.iter_mut().zip(img) {
                *a += *c as i128 * y as i128;
            }
        }
        self.dst.reduce_signed(&acc)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Hom) -> Result<Hom> {
        if other.dst != self.src {
            return Err(Error::AmbientMismatch);
        }
        let images = other.images.iter().map(|x| self.apply(x)).collect();
        Ok(Hom {
            src: other.src.clone(),
            dst: self.dst.clone(),
            images,
        })
    }

    pub fn image(&self, s: &Subgroup) -> Subgroup {
        let gens: Vec<Element> = s.generators().iter().map(|g| self.apply(g)).collect();
        Subgroup::from_generators(&self.dst, &gens)
    }

    fn graph_rows(&self, prod: &AbelianGroup) -> Vec<Vec<u64>> {
        (0..self.src.rank())
            .map(|i| {
                let mut x = self.images[i].clone();
                x.extend(self.src.basis_vector(i));
                prod.embed(&x)
            })
            .collect()
    }

    /// {a : φ(a) ∈ T}.
    pub fn preimage(&self, t: &Subgroup) -> Subgroup {
        let prod = self.dst.direct_sum(&self.src);
        let mut rows = self.graph_rows(&prod);
        let k = self.dst.rank();
        for g in t.generators() {
            let mut x = g.clone();
            x.extend(self.src.zero());
            rows.push(prod.embed(&x));
        }
        let form = howell::howell_form(prod.p, prod.max_exp(), rows, prod.rank());
        let gens: Vec<Element> = form
            .into_iter()
            .filter(|r| r[..k].iter().all(|&x| x == 0))
            .map(|r| prod.unembed(&r)[k..].to_vec())
            .collect();
        Subgroup::from_generators(&self.src, &gens)
    }

    pub fn kernel(&self) -> Subgroup {
        self.preimage(&Subgroup::zero(&self.dst))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_empty()
    }

    /// Some a with φ(a) = y, if one exists.
    pub fn solve(&self, y: &[u64]) -> Option<Element> {
        let prod = self.dst.direct_sum(&self.src);
        let rows = self.graph_rows(&prod);
        let (p, e) = (prod.p, prod.max_exp());
        let form = howell::howell_form(p, e, rows, prod.rank());
        let mut x = y.to_vec();
        x.extend(self.src.zero());
        let mut v = prod.embed(&x);
        howell::reduce(p, e, &form, &mut v);
        let k = self.dst.rank();
        if v[..k].iter().any(|&c| c != 0) {
            return None;
        }
        let rest = prod.unembed(&v)[k..].to_vec();
        Some(self.src.neg(&rest))
    }

    pub fn is_automorphism(&self) -> bool {
        self.src == self.dst && self.is_injective()
    }
}

/// A quotient A/S in sorted-exponent form with projection and section.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: AbelianGroup,
    pub projection: Hom,
    /// Lifts in A of the quotient basis vectors.
    pub lifts: Vec<Element>,
}

impl Quotient {
    /// Set-theoretic section: Σ y_t · lift_t.
    pub fn section(&self, y: &[u64]) -> Element {
        let a = self.projection.src();
        let mut acc = a.zero();
        for (c, l) in y.iter().zip(&self.lifts) {
            acc = a.add(&acc, &a.scale(*c, l));
        }
        acc
    }
}

/// A/S, presented by a Smith diagonalization of the relations.
pub fn quotient(a: &AbelianGroup, s: &Subgroup) -> Result<Quotient> {
    if s.ambient() != a {
        return Err(Error::AmbientMismatch);
    }
    let (p, e, k) = (a.p, a.max_exp(), a.rank());
    let mut rel: Vec<Vec<u64>> = Vec::new();
    for i in 0..k {
        if a.exponents[i] < e {
            let mut r = vec![0; k];
            r[i] = a.modulus(i);
            rel.push(r);
        }
    }
    rel.extend(s.generators());
    let sm = smith::smith(p, e, rel, k);
    let mut cols: Vec<(u32, usize)> = sm
        .diag
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(t, &d)| (d, t))
        .collect();
    cols.sort_by(|x, y| y.0.cmp(&x.0));
    let group = AbelianGroup::raw(p, cols.iter().map(|c| c.0).collect());
    let images: Vec<Element> = (0..k)
        .map(|i| {
            cols.iter()
                .map(|&(d, t)| sm.v[i][t] % ipow(p, d))
                .collect()
        })
        .collect();
    let projection = Hom::new(a, &group, images)
        .map_err(|err| Error::InconsistentQuotient(err.to_string()))?;
    let lifts: Vec<Element> = cols
        .iter()
        .map(|&(_, t)| {
            let l: Vec<i128> = sm.v_inv[t].iter().map(|&x| x as i128).collect();
            a.reduce_signed(&l)
        })
        .collect();
    Ok(Quotient {
        group,
        projection,
        lifts,
    })
}

/// A basis of a subgroup: an abstract sorted group with an injective
/// inclusion into the ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    subgroup: Subgroup,
    inclusion: Hom,
}

impl Presentation {
    /// Canonical basis derived from the Howell generators.
    pub fn canonical(s: &Subgroup) -> Presentation {
        let a = s.ambient();
        let h = s.generators();
        let m = h.len();
        let e = a.max_exp().max(1);
        let free = AbelianGroup::raw(a.p, vec![e; m]);
        let sum = Hom::new(&free, a, h.clone()).expect("generators lie in ambient");
        let ker = sum.kernel();
        let q = quotient(&free, &ker).expect("kernel of free group");
        let basis: Vec<Element> = q.lifts.iter().map(|l| sum.apply(l)).collect();
        let inclusion = Hom {
            src: q.group.clone(),
            dst: a.clone(),
            images: basis,
        };
        Presentation {
            subgroup: s.clone(),
            inclusion,
        }
    }

    /// The identity presentation of a sorted group.
    pub fn standard(a: &AbelianGroup) -> Presentation {
        Presentation {
            subgroup: Subgroup::full(a),
            inclusion: Hom::identity(a),
        }
    }

    /// A presentation from an explicit basis (validated).
    pub fn from_basis(s: &Subgroup, basis: Vec<Element>) -> Result<Presentation> {
        let a = s.ambient();
        let exps: Vec<u32> = basis.iter().map(|b| a.element_order_exp(b)).collect();
        if exps.iter().any(|&x| x == 0) {
            return Err(Error::Input("basis contains zero".into()));
        }
        let group = AbelianGroup::raw(a.p, exps);
        let inclusion = Hom::new(&group, a, basis)?;
        if !inclusion.is_injective() || group.len() != s.len() {
            return Err(Error::Input("not a basis of the subgroup".into()));
        }
        if !inclusion.images.iter().all(|b| s.contains(b)) {
            return Err(Error::Input("basis leaves the subgroup".into()));
        }
        Ok(Presentation {
            subgroup: s.clone(),
            inclusion,
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.inclusion.src
    }

    pub fn inclusion(&self) -> &Hom {
        &self.inclusion
    }

    pub fn basis(&self) -> &[Element] {
        &self.inclusion.images
    }

    /// Coordinates of x ∈ S in this basis.
    pub fn coords(&self, x: &[u64]) -> Option<Element> {
        self.inclusion.solve(x)
    }

    /// Another basis of the same subgroup: b'_i = u_i b_i + Σ_{j<i} c_ij b_j with
    /// units u_i and each added term of order at most that of b_i.
    pub fn random_basis<R: rand::Rng>(&self, rng: &mut R) -> Vec<Element> {
        let a = self.subgroup.ambient();
        let p = a.p;
        let b = self.basis();
        let exps = self.group().exponents();
        (0..b.len())
            .map(|i| {
                let unit = loop {
                    let u = rng.gen_range(1..ipow(p, exps[i]).max(2));
                    if u % p != 0 {
                        break u;
                    }
                };
                let mut x = a.scale(unit, &b[i]);
                for j in 0..i {
                    let step = ipow(p, exps[j].saturating_sub(exps[i]));
                    let c = rng.gen_range(0..ipow(p, exps[j])) * step;
                    x = a.add(&x, &a.scale(c, &b[j]));
                }
                x
            })
            .collect()
    }
}

/// Every subgroup of A with |S| ≤ max_order, each exactly once.
pub fn enumerate_subgroups(a: &AbelianGroup, max_order: u64) -> Result<Vec<Subgroup>> {
    const LIMIT: u64 = 15625;
    if a.order() > LIMIT {
        return Err(Error::SizeGuard {
            order: a.order(),
            limit: LIMIT,
        });
    }
    grow_subgroups(a, max_order, |_| true)
}

/// Breadth-first growth by index-p steps, keeping only subgroups that pass
/// `keep` (which must be inherited by subgroups).
pub(crate) fn grow_subgroups(
    a: &AbelianGroup,
    max_order: u64,
    keep: impl Fn(&Subgroup) -> bool,
) -> Result<Vec<Subgroup>> {
    use std::collections::HashSet;
    let elems: Vec<Element> = a.elements().collect();
    let mut seen: HashSet<Subgroup> = HashSet::new();
    let zero = Subgroup::zero(a);
    seen.insert(zero.clone());
    let mut out = vec![zero.clone()];
    let mut layer = vec![zero];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for s in &layer {
            if s.order() * a.p > max_order {
                continue;
            }
            for x in &elems {
                if s.contains(x) || !s.contains(&a.scale(a.p, x)) {
                    continue;
                }
                let mut gens = s.generators();
                gens.push(x.clone());
                let t = Subgroup::from_generators(a, &gens);
                if seen.contains(&t) || !keep(&t) {
                    continue;
                }
                seen.insert(t.clone());
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u64, e: &[u32]) -> AbelianGroup {
        AbelianGroup::new(p, e.to_vec()).unwrap()
    }

    #[test]
    fn cyclic_subgroup_of_z9() {
        let a = g(3, &[2]);
        let s = Subgroup::from_generators(&a, &[vec![3]]);
        assert_eq!(s.order(), 3);
        assert_eq!(Subgroup::from_generators(&a, &[]).order(), 1);
    }

    #[test]
    fn two_generators_span_plane() {
        let a = g(3, &[1, 1]);
        let s = Subgroup::from_generators(&a, &[vec![1, 0], vec![1, 1]]);
        assert_eq!(s, Subgroup::full(&a));
    }

    #[test]
    fn intersection_in_z9_z3() {
        let a = g(3, &[2, 1]);
        let s = Subgroup::from_generators(&a, &[vec![1, 0]]);
        let t = Subgroup::from_generators(&a, &[vec![3, 0], vec![0, 1]]);
        let i = s.intersect(&t).unwrap();
        assert_eq!(i, Subgroup::from_generators(&a, &[vec![3, 0]]));
        assert_eq!(i.order(), 3);
        // brute force
        let brute: Vec<Element> = a.elements().filter(|x| s.contains(x) && t.contains(x)).collect();
        assert_eq!(brute.len(), 3);
    }

    #[test]
    fn element_enumeration_matches_order() {
        let a = g(3, &[2, 2, 1]);
        let s = Subgroup::from_generators(&a, &[vec![3, 1, 0], vec![0, 3, 1]]);
        let els = s.elements();
        assert_eq!(els.len() as u64, s.order());
        let brute = a.elements().filter(|x| s.contains(x)).count();
        assert_eq!(brute as u64, s.order());
        let set: std::collections::HashSet<_> = els.iter().cloned().collect();
        assert_eq!(set.len(), els.len());
        assert!(els.iter().all(|x| s.contains(x)));
    }

    #[test]
    fn quotients() {
        let a = g(3, &[2]);
        let q = quotient(&a, &Subgroup::from_generators(&a, &[vec![3]])).unwrap();
        assert_eq!(q.group.exponents(), &[1]);
        let q0 = quotient(&a, &Subgroup::zero(&a)).unwrap();
        assert_eq!(q0.group.exponents(), &[2]);
        let b = g(3, &[2, 1]);
        let q = quotient(&b, &Subgroup::from_generators(&b, &[vec![1, 1]])).unwrap();
        assert_eq!(q.group.order(), 3);
        for y in q.group.elements() {
            assert_eq!(q.projection.apply(&q.section(&y)), y);
        }
    }

    #[test]
    fn presentation_is_a_basis() {
        let a = g(3, &[2, 2, 1]);
        let s = Subgroup::from_generators(&a, &[vec![3, 1, 0], vec![0, 3, 1], vec![1, 1, 1]]);
        let pr = Presentation::canonical(&s);
        assert!(pr.group().is_sorted());
        assert_eq!(pr.group().len(), s.len());
        for x in s.elements() {
            let c = pr.coords(&x).unwrap();
            assert_eq!(pr.inclusion().apply(&c), x);
        }
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(enumerate_subgroups(&g(5, &[1]), 5).unwrap().len(), 2);
        assert_eq!(enumerate_subgroups(&g(3, &[1, 1]), 9).unwrap().len(), 6);
        assert_eq!(enumerate_subgroups(&g(3, &[2]), 9).unwrap().len(), 3);
    }

    #[test]
    fn kernel_and_preimage() {
        let a = g(3, &[2]);
        let b = g(3, &[1]);
        let phi = Hom::new(&a, &b, vec![vec![1]]).unwrap();
        assert_eq!(phi.kernel(), Subgroup::from_generators(&a, &[vec![3]]));
        assert_eq!(phi.solve(&[2]).map(|x| phi.apply(&x)), Some(vec![2]));
    }
}
