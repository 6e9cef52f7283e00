//! Induced representations ρ_{f,p}, the intertwiners Φ and Ψ, and the cocycles
//! α and β.
//!
//! Group elements are addressed by their index in the carrier. Every value that
//! arises (matrix entries of ρ and Φ, the cocycle α) is a power of √p times a
//! sum of p^E-th roots of unity, so it is carried as a [`RootSum`] and only
//! turned into a [`Cyclotomic`] when compared.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::abelian::{quotient, Element, GroupCharacter, Presentation, Subgroup};
use crate::error::{Error, Result};
use crate::liering::LieRing;
use crate::modular::ipow;
use crate::polar::{
    neighbor_check, relative_orientation_scalar, skew_form, OrientedPolarization, Polarization,
};
use crate::scalars::{Cyclotomic, CyclotomicJson, RootOfUnity};
use crate::session::Session;
use crate::witt::gamma_scalar;

const NONE: u32 = u32::MAX;

/// p^{half_scale/2} · Σ_k counts[k] ζ_{p^e}^k, with counts reduced so that the
/// least entry of every fiber of k ↦ k mod p^{e-1} is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootSum {
    pub p: u64,
    pub half_scale: i32,
    pub counts: Vec<i64>,
}

impl RootSum {
    pub fn new(p: u64, half_scale: i32, mut counts: Vec<i64>) -> Self {
        let q = counts.len();
        if q > 1 {
            let b = q / p as usize;
            for j in 0..b {
                let m = (0..p as usize).map(|t| counts[j + t * b]).min().unwrap();
                for t in 0..p as usize {
                    counts[j + t * b] -= m;
                }
            }
        }
        RootSum {
            p,
            half_scale,
            counts,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn to_cyclotomic(&self, s: &Session) -> Cyclotomic {
        let n = s.conductor() as usize;
        let step = n / self.counts.len();
        let mut dense = vec![0i128; n];
        for (k, &c) in self.counts.iter().enumerate() {
            dense[k * step] += c as i128;
        }
        let z = Cyclotomic::from_root_counts(s.field(), &dense);
        &z * &sqrt_p_pow(s, self.half_scale)
    }
}

/// p^{k/2} for any integer k.
pub fn sqrt_p_pow(s: &Session, k: i32) -> Cyclotomic {
    if k < 0 {
        return s.inv_sqrt_p_pow((-k) as u32);
    }
    let k = k as u32;
    let base = if k % 2 == 1 { s.sqrt_p() } else { s.one() };
    base.scale(ipow(s.p(), k / 2) as i128)
}

/// Index-addressed view of Exp(𝔤).
#[derive(Clone, Debug)]
pub struct GroupTables {
    ring: LieRing,
    n: usize,
    rank: usize,
    coords: Vec<u64>,
    neg: Vec<u32>,
    /// Class of each element modulo the center of 𝔤.
    center_class: Vec<u32>,
    center_len: u32,
}

impl GroupTables {
    pub fn new(ring: &LieRing) -> Self {
        let a = ring.carrier();
        let n = a.order() as usize;
        let rank = a.rank();
        let mut coords = Vec::with_capacity(n * rank);
        for i in 0..n {
            coords.extend(a.element_at(i));
        }
        let mut neg = vec![0u32; n];
        for i in 0..n {
            neg[i] = a.index_of(&a.neg(&coords[i * rank..(i + 1) * rank])) as u32;
        }
        let center = ring.center();
        let mut center_class = vec![NONE; n];
        let mut next = 0u32;
        for i in 0..n {
            if center_class[i] != NONE {
                continue;
            }
            let x = &coords[i * rank..(i + 1) * rank];
            for z in center.elements() {
                center_class[a.index_of(&a.add(x, &z))] = next;
            }
            next += 1;
        }
        GroupTables {
            ring: ring.clone(),
            n,
            rank,
            coords,
            neg,
            center_class,
            center_len: center.len(),
        }
    }

    pub fn ring(&self) -> &LieRing {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn element(&self, i: usize) -> &[u64] {
        &self.coords[i * self.rank..(i + 1) * self.rank]
    }

    pub fn index(&self, x: &[u64]) -> usize {
        self.ring.carrier().index_of(x)
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.index(&self.ring.mul(self.element(i), self.element(j)))
    }
}

/// ρ_{f,p} = ind_P^G χ_f in the basis of functions δ_r supported on P·r with
/// δ_r(r) = 1, r running over a transversal of P\G.
#[derive(Clone, Debug)]
pub struct InducedRep {
    polarization: Polarization,
    level: u64,
    members: Vec<u32>,
    members_mod_center: Vec<u32>,
    reps: Vec<u32>,
    rep_of: Vec<u32>,
    /// f(g·r^{-1}) for g ∈ P·r.
    part: Vec<u32>,
    add_coset: Option<Vec<u32>>,
}

/// A monomial matrix: row r has its single entry ζ^{exps[r]} in column cols[r].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialMatrix {
    pub level: u64,
    pub cols: Vec<u32>,
    pub exps: Vec<u32>,
}

impl MonomialMatrix {
    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn mul(&self, other: &MonomialMatrix) -> MonomialMatrix {
        let cols = self.cols.iter().map(|&c| other.cols[c as usize]).collect();
        let exps = self
            .cols
            .iter()
            .zip(&self.exps)
            .map(|(&c, &e)| ((e as u64 + other.exps[c as usize] as u64) % self.level) as u32)
            .collect();
        MonomialMatrix {
            level: self.level,
            cols,
            exps,
        }
    }

    pub fn to_dense(&self, s: &Session) -> Intertwiner {
        let d = self.dim();
        let mut m = Intertwiner::zero(s, d, d);
        let e = exp_of_level(s.p(), self.level);
        for r in 0..d {
            m.entries[r * d + self.cols[r] as usize] = s.root(e, self.exps[r] as u64);
        }
        m
    }
}

fn exp_of_level(p: u64, q: u64) -> u32 {
    let mut e = 0;
    let mut x = 1;
    while x < q {
        x *= p;
        e += 1;
    }
    e
}

impl InducedRep {
    fn build(t: &GroupTables, f_exp: &[u32], level: u64, pol: &Polarization) -> Self {
        let a = t.ring.carrier();
        let n = t.n;
        let members: Vec<u32> = pol
            .subgroup()
            .elements()
            .iter()
            .map(|x| a.index_of(x) as u32)
            .collect();
        let mut seen_class = HashMap::new();
        let mut members_mod_center = Vec::new();
        for &m in &members {
            if seen_class.insert(t.center_class[m as usize], ()).is_none() {
                members_mod_center.push(m);
            }
        }
        let mut rep_of = vec![NONE; n];
        let mut part = vec![0u32; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if rep_of[g] != NONE {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(g as u32);
            for &q in &members {
                let h = t.mul(q as usize, g);
                rep_of[h] = idx;
                part[h] = f_exp[q as usize];
            }
        }
        InducedRep {
            polarization: pol.clone(),
            level,
            members,
            members_mod_center,
            reps,
            rep_of,
            part,
            add_coset: None,
        }
    }

    pub fn polarization(&self) -> &Polarization {
        &self.polarization
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Element indices of the transversal; the identity comes first.
    pub fn transversal(&self) -> &[u32] {
        &self.reps
    }

    /// ρ(h): row r has its entry in column rep(r·h), equal to χ_f(r·h·rep(r·h)^{-1}).
    pub fn matrix(&self, t: &GroupTables, h: usize) -> MonomialMatrix {
        let (cols, exps) = self
            .reps
            .iter()
            .map(|&r| {
                let g = t.mul(r as usize, h);
                (self.rep_of[g], self.part[g])
            })
            .unzip();
        MonomialMatrix {
            level: self.level,
            cols,
            exps,
        }
    }

    /// tr ρ(h) as root counts.
    pub fn trace_counts(&self, t: &GroupTables, h: usize) -> Vec<i64> {
        let mut counts = vec![0i64; self.level as usize];
        for (i, &r) in self.reps.iter().enumerate() {
            let g = t.mul(r as usize, h);
            if self.rep_of[g] as usize == i {
                counts[self.part[g] as usize] += 1;
            }
        }
        counts
    }

    fn ensure_add_cosets(&mut self, t: &GroupTables) {
        if self.add_coset.is_some() {
            return;
        }
        let a = t.ring.carrier();
        let q = quotient(a, self.polarization.subgroup()).expect("subgroup of the carrier");
        let ids = (0..t.n)
            .map(|g| q.group.index_of(&q.projection.apply(t.element(g))) as u32)
            .collect();
        self.add_coset = Some(ids);
    }
}

/// A matrix whose nonzero entries are p^{-k/2} ζ^{e}, stored as exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootMatrix {
    pub rows: usize,
    pub cols: usize,
    pub level: u64,
    /// Entries are p^{-scale/2} times a root of unity.
    pub scale: u32,
    pub exps: Vec<u32>,
}

impl RootMatrix {
    pub fn get(&self, r: usize, c: usize) -> Option<u32> {
        let e = self.exps[r * self.cols + c];
        (e != NONE).then_some(e)
    }

    pub fn to_dense(&self, s: &Session) -> Intertwiner {
        let mut m = Intertwiner::zero(s, self.rows, self.cols);
        let e = exp_of_level(s.p(), self.level);
        let c = s.inv_sqrt_p_pow(self.scale);
        for (i, &x) in self.exps.iter().enumerate() {
            if x != NONE {
                m.entries[i] = &s.root(e, x as u64) * &c;
            }
        }
        m
    }
}

/// Dense exact matrix over the session field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Intertwiner {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Cyclotomic>,
}

impl Intertwiner {
    pub fn zero(s: &Session, rows: usize, cols: usize) -> Self {
        Intertwiner {
            rows,
            cols,
            entries: vec![s.zero(); rows * cols],
        }
    }

    pub fn identity(s: &Session, d: usize) -> Self {
        let mut m = Self::zero(s, d, d);
        for i in 0..d {
            m.entries[i * d + i] = s.one();
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Cyclotomic {
        &self.entries[r * self.cols + c]
    }

    pub fn mul(&self, other: &Intertwiner) -> Intertwiner {
        assert_eq!(self.cols, other.rows);
        let field = self.entries.first().or(other.entries.first()).map(|z| z.field().clone());
        let zero = |f: &Option<_>| match f {
            Some(f) => Cyclotomic::zero(f),
            None => unreachable!("empty matrices are not multiplied"),
        };
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = zero(&field);
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    let b = other.get(k, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Intertwiner {
            rows: self.rows,
            cols: other.cols,
            entries,
        }
    }

    pub fn scaled(&self, c: &Cyclotomic) -> Intertwiner {
        Intertwiner {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Intertwiner {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).conj());
            }
        }
        Intertwiner {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// Some(λ) when the matrix is λ·Id.
    pub fn scalar(&self) -> Option<Cyclotomic> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let l = self.get(0, 0).clone();
        let ok = (0..self.rows).all(|r| {
            (0..self.cols).all(|c| {
                let x = self.get(r, c);
                if r == c {
                    *x == l
                } else {
                    x.is_zero()
                }
            })
        });
        ok.then_some(l)
    }
}

/// Counts-valued matrix p^{-scale/2}·Σ counts ζ^k, produced by products of root matrices.
#[derive(Clone, Debug)]
pub struct CountMatrix {
    pub rows: usize,
    pub cols: usize,
    pub level: usize,
    pub scale: u32,
    pub counts: Vec<i64>,
}

impl CountMatrix {
    pub fn from_roots(a: &RootMatrix) -> Self {
        let q = a.level as usize;
        let mut counts = vec![0i64; a.rows * a.cols * q];
        for (i, &e) in a.exps.iter().enumerate() {
            if e != NONE {
                counts[i * q + e as usize] += 1;
            }
        }
        CountMatrix {
            rows: a.rows,
            cols: a.cols,
            level: q,
            scale: a.scale,
            counts,
        }
    }

    pub fn mul_roots(&self, b: &RootMatrix) -> CountMatrix {
        assert_eq!(self.cols, b.rows);
        let q = self.level;
        let mut counts = vec![0i64; self.rows * b.cols * q];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let src = &self.counts[(r * self.cols + k) * q..(r * self.cols + k + 1) * q];
                if src.iter().all(|&c| c == 0) {
                    continue;
                }
                for c in 0..b.cols {
                    let Some(e) = b.get(k, c) else { continue };
                    let dst = (r * b.cols + c) * q;
                    for (j, &v) in src.iter().enumerate() {
                        if v != 0 {
                            counts[dst + (j + e as usize) % q] += v;
                        }
                    }
                }
            }
        }
        CountMatrix {
            rows: self.rows,
            cols: b.cols,
            level: q,
            scale: self.scale + b.scale,
            counts,
        }
    }

    pub fn entry(&self, p: u64, r: usize, c: usize) -> RootSum {
        let q = self.level;
        let i = r * self.cols + c;
        RootSum::new(p, -(self.scale as i32), self.counts[i * q..(i + 1) * q].to_vec())
    }

    /// Some(λ) when the matrix is λ·Id.
    pub fn scalar(&self, p: u64) -> Option<RootSum> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let l = self.entry(p, 0, 0);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let x = self.entry(p, r, c);
                if r == c && x != l || r != c && !x.is_zero() {
                    return None;
                }
            }
        }
        Some(l)
    }
}

/// α computed three ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaValues {
    pub compose: Cyclotomic,
    pub formula: Cyclotomic,
    pub neighbor: Option<Cyclotomic>,
}

impl AlphaValues {
    pub fn agree(&self) -> bool {
        self.compose == self.formula && self.neighbor.as_ref().is_none_or(|n| *n == self.compose)
    }

    /// |α| = 1 exactly.
    pub fn is_unit(&self) -> bool {
        (&self.compose * &self.compose.conj()).is_one()
    }
}

/// All representation-theoretic data for one functional f, with polarizations
/// registered by index.
pub struct Engine {
    session: Session,
    tables: GroupTables,
    f: GroupCharacter,
    f_exp: Vec<u32>,
    level: u64,
    /// B_f(e_a, e_b) as exponents at `level`.
    bmat: Vec<Vec<u64>>,
    skew: crate::abelian::Pairing,
    kernel_len: u32,
    models: Vec<InducedRep>,
    index: HashMap<Polarization, usize>,
    phi: HashMap<(usize, usize), RootMatrix>,
    inter: HashMap<(usize, usize), u32>,
    meet: HashMap<(usize, usize), Vec<u32>>,
    neighbor_tables: HashMap<(usize, usize), Vec<u32>>,
    neighbors: HashMap<(usize, usize), bool>,
    gamma: HashMap<u64, Cyclotomic>,
    values: HashMap<RootSum, Cyclotomic>,
}

impl Engine {
    pub fn new(ring: &LieRing, f: &GroupCharacter, session: &Session) -> Result<Self> {
        Self::with_tables(GroupTables::new(ring), f, session)
    }

    pub fn with_tables(tables: GroupTables, f: &GroupCharacter, session: &Session) -> Result<Self> {
        let ring = tables.ring.clone();
        let a = ring.carrier();
        if f.group() != a {
            return Err(Error::AmbientMismatch);
        }
        if a.max_exp() > session.max_exp() {
            return Err(Error::ConductorTooSmall {
                conductor: session.conductor(),
                needed: 4 * ipow(a.p(), a.max_exp()),
            });
        }
        let level = ipow(a.p(), a.max_exp());
        let f_exp = (0..tables.n)
            .map(|i| f.eval_exp(tables.element(i)) as u32)
            .collect();
        let k = a.rank();
        let bmat = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| f.eval_exp(&ring.bracket(&a.basis_vector(i), &a.basis_vector(j))))
                    .collect()
            })
            .collect();
        let sf = skew_form(&ring, f);
        Ok(Engine {
            session: session.clone(),
            tables,
            f: f.clone(),
            f_exp,
            level,
            bmat,
            kernel_len: sf.kernel.len(),
            skew: sf.pairing,
            models: Vec::new(),
            index: HashMap::new(),
            phi: HashMap::new(),
            inter: HashMap::new(),
            meet: HashMap::new(),
            neighbor_tables: HashMap::new(),
            neighbors: HashMap::new(),
            gamma: HashMap::new(),
            values: HashMap::new(),
        })
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    pub fn tables(&self) -> &GroupTables {
        &self.tables
    }

    pub fn ring(&self) -> &LieRing {
        &self.tables.ring
    }

    pub fn functional(&self) -> &GroupCharacter {
        &self.f
    }

    pub fn p(&self) -> u64 {
        self.session.p()
    }

    /// Registers a polarization and returns its index.
    pub fn add(&mut self, pol: &Polarization) -> usize {
        if let Some(&i) = self.index.get(pol) {
            return i;
        }
        let m = InducedRep::build(&self.tables, &self.f_exp, self.level, pol);
        let i = self.models.len();
        self.models.push(m);
        self.index.insert(pol.clone(), i);
        i
    }

    pub fn model(&self, i: usize) -> &InducedRep {
        &self.models[i]
    }

    pub fn count(&self) -> usize {
        self.models.len()
    }

    pub fn to_cyclotomic(&mut self, v: &RootSum) -> Cyclotomic {
        if let Some(c) = self.values.get(v) {
            return c.clone();
        }
        let c = v.to_cyclotomic(&self.session);
        if self.values.len() < 1 << 16 {
            self.values.insert(v.clone(), c.clone());
        }
        c
    }

    /// χ_f(x) for x in the polarization with index i.
    pub fn chi(&self, i: usize, x: &[u64]) -> Result<RootOfUnity> {
        if !self.models[i].polarization.subgroup().contains(x) {
            return Err(Error::Input("element outside the polarization".into()));
        }
        Ok(self.f.value(x))
    }

    /// log_p |p_i ∩ p_j|.
    pub fn intersection_len(&mut self, i: usize, j: usize) -> u32 {
        let key = (i.min(j), i.max(j));
        if let Some(&l) = self.inter.get(&key) {
            return l;
        }
        let s = self.models[i]
            .polarization
            .subgroup()
            .intersect(self.models[j].polarization.subgroup())
            .expect("same ambient");
        self.inter.insert(key, s.len());
        s.len()
    }

    fn pol_len(&self, i: usize) -> u32 {
        self.models[i].polarization.len()
    }

    /// Φ_{p_i,p_j} : V_{f,p_j} → V_{f,p_i}.
    pub fn phi(&mut self, i: usize, j: usize) -> &RootMatrix {
        if !self.phi.contains_key(&(i, j)) {
            let m = self.build_phi(i, j);
            self.phi.insert((i, j), m);
        }
        &self.phi[&(i, j)]
    }

    fn build_phi(&mut self, i: usize, j: usize) -> RootMatrix {
        let scale = self.pol_len(i) - self.intersection_len(i, j);
        let q = self.level;
        let (m1, m2) = (&self.models[i], &self.models[j]);
        let (d1, d2) = (m1.dim(), m2.dim());
        let mut exps = vec![NONE; d1 * d2];
        for (r1, &g1) in m1.reps.iter().enumerate() {
            for &p in &m1.members_mod_center {
                let g = self.tables.mul(p as usize, g1 as usize);
                let r2 = m2.rep_of[g] as usize;
                let e = ((m2.part[g] as u64 + q - self.f_exp[p as usize] as u64) % q) as u32;
                let slot = &mut exps[r1 * d2 + r2];
                debug_assert!(*slot == NONE || *slot == e);
                *slot = e;
            }
        }
        RootMatrix {
            rows: d1,
            cols: d2,
            level: q,
            scale,
            exps,
        }
    }

    /// α from the composite Φ_{12}Φ_{23}Φ_{31} applied to the delta vector at the
    /// identity and evaluated there.
    pub fn alpha_compose(&mut self, i: usize, j: usize, k: usize) -> RootSum {
        self.phi(i, j);
        self.phi(j, k);
        self.phi(k, i);
        let (a, b, c) = (&self.phi[&(i, j)], &self.phi[&(j, k)], &self.phi[&(k, i)]);
        let q = self.level as usize;
        let mut counts = vec![0i64; q];
        for x in 0..a.cols {
            let Some(e1) = a.get(0, x) else { continue };
            for y in 0..b.cols {
                let Some(e2) = b.get(x, y) else { continue };
                let Some(e3) = c.get(y, 0) else { continue };
                counts[(e1 + e2 + e3) as usize % q] += 1;
            }
        }
        RootSum::new(self.p(), -((a.scale + b.scale + c.scale) as i32), counts)
    }

    /// Φ_{12}Φ_{23}Φ_{31} as a whole; Some(α) when it is scalar.
    pub fn composite_scalar(&mut self, i: usize, j: usize, k: usize) -> Option<RootSum> {
        self.phi(i, j);
        self.phi(j, k);
        self.phi(k, i);
        let prod = CountMatrix::from_roots(&self.phi[&(i, j)])
            .mul_roots(&self.phi[&(j, k)])
            .mul_roots(&self.phi[&(k, i)]);
        prod.scalar(self.p())
    }

    /// log_p of the factor N(p1,p2,p3)·|p1∩p3|·|𝔷(𝔤)|, doubled.
    fn formula_half_scale(&mut self, i: usize, j: usize, k: usize) -> i32 {
        let g = self.ring().carrier().len() as i32;
        let (n1, n2, n3) = (self.pol_len(i) as i32, self.pol_len(j) as i32, self.pol_len(k) as i32);
        let n12 = self.intersection_len(i, j) as i32;
        let n23 = self.intersection_len(j, k) as i32;
        let n31 = self.intersection_len(k, i) as i32;
        let z = self.tables.center_len as i32;
        g + self.kernel_len as i32 - n1 - n2 - n3 - n12 - n23 - n31 + 2 * (n31 + z)
    }

    /// For each coset P_k·r, an element of P_k·r ∩ P_i (or none).
    fn meet_table(&mut self, k: usize, i: usize) -> &Vec<u32> {
        if !self.meet.contains_key(&(k, i)) {
            let (mk, mi) = (&self.models[k], &self.models[i]);
            let mut t = vec![NONE; mk.dim()];
            for &u in &mi.members {
                let r = mk.rep_of[u as usize] as usize;
                if t[r] == NONE {
                    t[r] = u;
                }
            }
            self.meet.insert((k, i), t);
        }
        &self.meet[&(k, i)]
    }

    /// α = N Σ_{p3 p2 p1 = 1} (χ(p3)χ(p2)χ(p1))^{-1}, summing over p2.
    pub fn alpha_formula(&mut self, i: usize, j: usize, k: usize) -> RootSum {
        let half_scale = self.formula_half_scale(i, j, k);
        self.meet_table(k, i);
        let meet = &self.meet[&(k, i)];
        let (m2, m3) = (&self.models[j], &self.models[k]);
        let q = self.level;
        let mut counts = vec![0i64; q as usize];
        for &p2 in &m2.members_mod_center {
            let p2 = p2 as usize;
            let u = meet[m3.rep_of[p2] as usize];
            if u == NONE {
                continue;
            }
            let u = u as usize;
            let e = m3.part[p2] as u64 + self.f_exp[u] as u64 + 2 * q
                - m3.part[u] as u64
                - self.f_exp[p2] as u64;
            counts[(e % q) as usize] += 1;
        }
        RootSum::new(self.p(), half_scale, counts)
    }

    fn dot_b(&self, x: &[u64], w: &[u64]) -> u64 {
        x.iter()
            .zip(w)
            .fold(0u64, |acc, (&a, &b)| (acc + a * b) % self.level)
    }

    /// w with B_f(x, y) = x·w.
    fn b_column(&self, y: &[u64]) -> Vec<u64> {
        self.bmat
            .iter()
            .map(|row| self.dot_b(row, y))
            .collect()
    }

    /// Per class of 𝔤 mod center: exponent of f(½[x, q1(x)]) or NONE.
    fn neighbor_table(&mut self, i: usize, k: usize) {
        if self.neighbor_tables.contains_key(&(i, k)) {
            return;
        }
        self.models[k].ensure_add_cosets(&self.tables);
        let pi = self.models[i].polarization.subgroup().clone();
        let pk = self.models[k].polarization.subgroup().clone();
        let meet = pi.intersect(&pk).expect("same ambient");
        let kills: Vec<Vec<u64>> = meet.generators().iter().map(|a| self.b_column(a)).collect();
        let mk = &self.models[k];
        let cosets = mk.add_coset.as_ref().unwrap();
        let n_cosets = self.tables.n / mk.members.len();
        let mut q1 = vec![NONE; n_cosets];
        for &u in &self.models[i].members {
            let c = cosets[u as usize] as usize;
            if q1[c] == NONE {
                q1[c] = u;
            }
        }
        let cols: Vec<Option<Vec<u64>>> = q1
            .iter()
            .map(|&u| (u != NONE).then(|| self.b_column(self.tables.element(u as usize))))
            .collect();
        let n_classes = *self.tables.center_class.iter().max().unwrap_or(&0) as usize + 1;
        let half = (self.level + 1) / 2;
        let mut table = vec![NONE; n_classes];
        let mut done = vec![false; n_classes];
        for g in 0..self.tables.n {
            let cl = self.tables.center_class[g] as usize;
            if done[cl] {
                continue;
            }
            done[cl] = true;
            let x = self.tables.element(g);
            if kills.iter().any(|w| self.dot_b(x, w) != 0) {
                continue;
            }
            let c = cosets[self.tables.neg[g] as usize] as usize;
            if let Some(w) = &cols[c] {
                table[cl] = (self.dot_b(x, w) * half % self.level) as u32;
            }
        }
        self.neighbor_tables.insert((i, k), table);
    }

    /// [p_i, p_j] ⊆ p_i ∩ p_j.
    pub fn are_neighbors(&mut self, i: usize, j: usize) -> bool {
        let key = (i.min(j), i.max(j));
        if let Some(&b) = self.neighbors.get(&key) {
            return b;
        }
        let b = neighbor_check(self.ring(), &self.models[i].polarization, &self.models[j].polarization);
        self.neighbors.insert(key, b);
        b
    }

    /// α = N Σ_{q1+q2+q3=0} f(½[q2,q1]) for neighbors p1, p2.
    pub fn alpha_neighbor(&mut self, i: usize, j: usize, k: usize) -> Result<RootSum> {
        if !self.are_neighbors(i, j) {
            return Err(Error::Input("first two polarizations are not neighbors".into()));
        }
        Ok(self.alpha_neighbor_unchecked(i, j, k))
    }

    fn alpha_neighbor_unchecked(&mut self, i: usize, j: usize, k: usize) -> RootSum {
        let half_scale = self.formula_half_scale(i, j, k);
        self.neighbor_table(i, k);
        let table = &self.neighbor_tables[&(i, k)];
        let mut counts = vec![0i64; self.level as usize];
        for &q2 in &self.models[j].members_mod_center {
            let e = table[self.tables.center_class[q2 as usize] as usize];
            if e != NONE {
                counts[e as usize] += 1;
            }
        }
        RootSum::new(self.p(), half_scale, counts)
    }

    /// α by every applicable method.
    pub fn alpha_all(&mut self, i: usize, j: usize, k: usize, neighbors: Option<bool>) -> AlphaValues {
        let c = self.alpha_compose(i, j, k);
        let f = self.alpha_formula(i, j, k);
        let nb = match neighbors {
            Some(b) => b,
            None => self.are_neighbors(i, j),
        };
        let n = nb.then(|| self.alpha_neighbor_unchecked(i, j, k));
        let compose = self.to_cyclotomic(&c);
        let formula = if f == c { compose.clone() } else { self.to_cyclotomic(&f) };
        let neighbor = n.map(|n| if n == c { compose.clone() } else { self.to_cyclotomic(&n) });
        AlphaValues {
            compose,
            formula,
            neighbor,
        }
    }

    pub fn gamma(&mut self, a: u64) -> Cyclotomic {
        let p = self.p();
        let a = a % p;
        if let Some(g) = self.gamma.get(&a) {
            return g.clone();
        }
        let g = gamma_scalar(&self.session, a).expect("unit argument");
        self.gamma.insert(a, g.clone());
        g
    }

    /// θ(p̃1, p̃2) ∈ F_p^×.
    pub fn theta(&self, op1: &OrientedPolarization, op2: &OrientedPolarization) -> Result<u64> {
        relative_orientation_scalar(
            &self.skew,
            (&op1.presentation, op1.orientation),
            (&op2.presentation, op2.orientation),
            self.session.psi(),
        )
    }

    /// β(p̃1, p̃2) = γ(1)^{-m²} γ(θ), m = len p1 − len p1∩p2 − 1.
    pub fn beta(&mut self, op1: &OrientedPolarization, op2: &OrientedPolarization) -> Result<Cyclotomic> {
        let t = self.theta(op1, op2)?;
        let inter = op1
            .polarization
            .subgroup()
            .intersect(op2.polarization.subgroup())?;
        let m = op1.polarization.len() as i64 - inter.len() as i64 - 1;
        Ok(beta_from(&self.gamma(1), &self.gamma(t), m))
    }

    /// Ψ = β^{-1}·Φ as a dense matrix.
    pub fn psi(&mut self, op1: &OrientedPolarization, op2: &OrientedPolarization) -> Result<Intertwiner> {
        let b = self.beta(op1, op2)?.inverse_unit().ok_or(Error::NotInvertible)?;
        let i = self.add(&op1.polarization);
        let j = self.add(&op2.polarization);
        let s = self.session.clone();
        Ok(self.phi(i, j).to_dense(&s).scaled(&b))
    }

    /// ρ_i(g)Φ_{ij} = Φ_{ij}ρ_j(g) for the given element indices.
    pub fn phi_intertwines(&mut self, i: usize, j: usize, gens: &[usize]) -> bool {
        self.phi(i, j);
        let phi = &self.phi[&(i, j)];
        let q = self.level as u32;
        gens.iter().all(|&g| {
            let r1 = self.models[i].matrix(&self.tables, g);
            let r2 = self.models[j].matrix(&self.tables, g);
            let mut inv2 = vec![0usize; r2.dim()];
            for (s, &c) in r2.cols.iter().enumerate() {
                inv2[c as usize] = s;
            }
            (0..phi.rows).all(|r| {
                (0..phi.cols).all(|c| {
                    let left = phi.get(r1.cols[r] as usize, c).map(|e| (e + r1.exps[r]) % q);
                    let s = inv2[c];
                    let right = phi.get(r, s).map(|e| (e + r2.exps[s]) % q);
                    left == right
                })
            })
        })
    }

    /// Φ_{ij}Φ_{ij}^* = Id.
    pub fn phi_unitary(&mut self, i: usize, j: usize) -> bool {
        self.phi(i, j);
        let phi = &self.phi[&(i, j)];
        let q = self.level;
        let mut adj = RootMatrix {
            rows: phi.cols,
            cols: phi.rows,
            level: q,
            scale: phi.scale,
            exps: vec![NONE; phi.exps.len()],
        };
        for r in 0..phi.rows {
            for c in 0..phi.cols {
                if let Some(e) = phi.get(r, c) {
                    adj.exps[c * phi.rows + r] = ((q - e as u64) % q) as u32;
                }
            }
        }
        let prod = CountMatrix::from_roots(phi).mul_roots(&adj);
        self.is_identity_counts(&prod)
    }

    /// Φ_{ij}Φ_{ji} = Id.
    pub fn phi_inverse_pair(&mut self, i: usize, j: usize) -> bool {
        self.phi(i, j);
        self.phi(j, i);
        let prod = CountMatrix::from_roots(&self.phi[&(i, j)]).mul_roots(&self.phi[&(j, i)]);
        self.is_identity_counts(&prod)
    }

    fn is_identity_counts(&mut self, m: &CountMatrix) -> bool {
        match m.scalar(self.p()) {
            Some(l) => self.to_cyclotomic(&l).is_one(),
            None => false,
        }
    }

    /// Indices of a generating set of Exp(𝔤) (the basis vectors).
    pub fn generator_indices(&self) -> Vec<usize> {
        let a = self.ring().carrier();
        (0..a.rank()).map(|i| a.index_of(&a.basis_vector(i))).collect()
    }

    /// ρ(g)ρ(h) = ρ(g*h) over the given pairs of element indices.
    pub fn homomorphism_holds(&self, i: usize, pairs: &[(usize, usize)]) -> bool {
        let m = &self.models[i];
        pairs.iter().all(|&(g, h)| {
            m.matrix(&self.tables, g).mul(&m.matrix(&self.tables, h))
                == m.matrix(&self.tables, self.tables.mul(g, h))
        })
    }
}

pub fn beta_from(gamma_one: &Cyclotomic, gamma_theta: &Cyclotomic, m: i64) -> Cyclotomic {
    let g1 = gamma_one.pow_unit(-(m * m).rem_euclid(4));
    &g1 * gamma_theta
}

/// χ_f(x) = f(log x) on a polarization.
pub fn chi_f(pol: &Polarization, f: &GroupCharacter, x: &[u64]) -> Result<RootOfUnity> {
    if !pol.subgroup().contains(x) {
        return Err(Error::Input("element outside the polarization".into()));
    }
    Ok(f.value(x))
}

/// Induces χ_f from a certified polarization.
pub fn induce(tables: &GroupTables, f: &GroupCharacter, pol: &Polarization) -> InducedRep {
    let level = ipow(f.group().p(), f.group().max_exp());
    let f_exp: Vec<u32> = (0..tables.order())
        .map(|i| f.eval_exp(tables.element(i)) as u32)
        .collect();
    InducedRep::build(tables, &f_exp, level, pol)
}

/// Exact JSON view of a value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueJson {
    pub exact: CyclotomicJson,
    pub re: f64,
    pub im: f64,
}

impl From<&Cyclotomic> for ValueJson {
    fn from(c: &Cyclotomic) -> Self {
        let (re, im) = c.to_complex();
        ValueJson {
            exact: c.to_json(),
            re,
            im,
        }
    }
}

/// One verified triple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub triple: [usize; 3],
    pub orientations: [u64; 3],
    pub alpha: ValueJson,
    pub beta_product: ValueJson,
    pub methods_agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dense_cycle_identity: Option<bool>,
    pub equal: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CompatReport {
    pub checked: usize,
    pub full_composites: usize,
    pub dense_cycles: usize,
    pub failures: Vec<TripleRecord>,
    pub records: Vec<TripleRecord>,
}

impl CompatReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Appends another report, keeping order.
    pub fn merge(&mut self, other: CompatReport) {
        self.checked += other.checked;
        self.full_composites += other.full_composites;
        self.dense_cycles += other.dense_cycles;
        self.failures.extend(other.failures);
        self.records.extend(other.records);
    }
}

/// Oriented polarization triples given by indices into `pols` plus orientation scalars.
pub type OrientedTriple = ([usize; 3], [u64; 3]);

/// How much of each triple to check beyond α = β12β23β31.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompatDepth {
    /// Leading triples whose composite Φ12Φ23Φ31 is checked to be α·Id.
    pub full: usize,
    /// Leading triples whose dense product Ψ12Ψ23Ψ31 is checked to be Id.
    pub dense: usize,
    pub keep_records: bool,
}

/// Checks α = β12β23β31 for each triple, which makes Ψ12Ψ23Ψ31 = Id, with α
/// computed by all applicable methods.
pub fn verify_compatibility(
    engine: &mut Engine,
    pols: &[Polarization],
    triples: &[OrientedTriple],
    depth: CompatDepth,
) -> Result<CompatReport> {
    let ids: Vec<usize> = pols.iter().map(|p| engine.add(p)).collect();
    let mut report = CompatReport::default();
    type Key = (usize, usize, u64, u64);
    let mut betas: HashMap<Key, Cyclotomic> = HashMap::new();
    let mut psis: HashMap<Key, Intertwiner> = HashMap::new();
    for (t, &(tri, ors)) in triples.iter().enumerate() {
        let [a, b, c] = tri.map(|x| ids[x]);
        let vals = engine.alpha_all(a, b, c, None);
        let mut prod = engine.session.one();
        let mut keys = Vec::new();
        for (x, y) in [(0usize, 1usize), (1, 2), (2, 0)] {
            let key = (tri[x], tri[y], ors[x], ors[y]);
            let beta = match betas.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let o1 = OrientedPolarization::new(pols[tri[x]].clone(), ors[x]);
                    let o2 = OrientedPolarization::new(pols[tri[y]].clone(), ors[y]);
                    let v = engine.beta(&o1, &o2)?;
                    betas.insert(key, v.clone());
                    v
                }
            };
            prod = &prod * &beta;
            keys.push(key);
        }
        let mut equal = vals.compose == prod;
        if t < depth.full {
            report.full_composites += 1;
            equal &= match engine.composite_scalar(a, b, c) {
                Some(l) => engine.to_cyclotomic(&l) == vals.compose,
                None => false,
            };
        }
        let mut dense = None;
        if t < depth.dense {
            report.dense_cycles += 1;
            let mut m: Option<Intertwiner> = None;
            for key in &keys {
                if !psis.contains_key(key) {
                    let o1 = OrientedPolarization::new(pols[key.0].clone(), key.2);
                    let o2 = OrientedPolarization::new(pols[key.1].clone(), key.3);
                    psis.insert(*key, engine.psi(&o1, &o2)?);
                }
                let x = &psis[key];
                m = Some(match m {
                    None => x.clone(),
                    Some(acc) => acc.mul(x),
                });
            }
            let id = m.map(|m| m.is_identity()).unwrap_or(false);
            equal &= id;
            dense = Some(id);
        }
        let agree = vals.agree() && vals.is_unit();
        report.checked += 1;
        if !(equal && agree) || depth.keep_records {
            let rec = TripleRecord {
                triple: tri,
                orientations: ors,
                alpha: (&vals.compose).into(),
                beta_product: (&prod).into(),
                methods_agree: agree,
                dense_cycle_identity: dense,
                equal,
            };
            if !(equal && agree) {
                report.failures.push(rec.clone());
            }
            if depth.keep_records {
                report.records.push(rec);
            }
        }
    }
    Ok(report)
}

/// Literal check Ψ12Ψ23Ψ31 = Id with dense matrices.
pub fn psi_cycle_is_identity(
    engine: &mut Engine,
    ops: [&OrientedPolarization; 3],
) -> Result<bool> {
    let a = engine.psi(ops[0], ops[1])?;
    let b = engine.psi(ops[1], ops[2])?;
    let c = engine.psi(ops[2], ops[0])?;
    Ok(a.mul(&b).mul(&c).is_identity())
}

/// Both sides of α(p1,p2,p3) = α(p1^f,p2^f,p3^f).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionRecord {
    pub triple: [usize; 3],
    pub alpha: ValueJson,
    pub alpha_reduced: ValueJson,
    pub methods_agree: bool,
    pub equal: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub checked: usize,
    pub failures: Vec<ReductionRecord>,
    pub records: Vec<ReductionRecord>,
}

impl ReductionReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: ReductionReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self.records.extend(other.records);
    }
}

/// Computes α in (𝔤, f) and in the Heisenberg reduction (𝔤^f, f̄).
pub fn verify_reduction(
    engine: &mut Engine,
    reduced: &mut Engine,
    data: &crate::polar::HeisenbergData,
    pols: &[Polarization],
    triples: &[[usize; 3]],
    keep_records: bool,
) -> Result<ReductionReport> {
    let ids: Vec<usize> = pols.iter().map(|p| engine.add(p)).collect();
    let rids: Vec<usize> = pols
        .iter()
        .map(|p| reduced.add(&data.reduce_polarization(p)))
        .collect();
    let mut report = ReductionReport::default();
    for &tri in triples {
        let [a, b, c] = tri.map(|x| ids[x]);
        let [ra, rb, rc] = tri.map(|x| rids[x]);
        let lhs = engine.alpha_all(a, b, c, None);
        let rhs = reduced.alpha_all(ra, rb, rc, None);
        let agree = lhs.agree() && rhs.agree() && lhs.is_unit();
        let (l, r) = (lhs.compose, rhs.compose);
        let equal = l == r && agree;
        report.checked += 1;
        if !equal || keep_records {
            let rec = ReductionRecord {
                triple: tri,
                alpha: (&l).into(),
                alpha_reduced: (&r).into(),
                methods_agree: agree,
                equal,
            };
            if !equal {
                report.failures.push(rec.clone());
            }
            if keep_records {
                report.records.push(rec);
            }
        }
    }
    Ok(report)
}

/// α(p1,p2,p3) against Π_{i=2}^{m-1} α(q_{i+1},q_i,p1) · Π_{i=1}^{m-1} α(q_i,q_{i+1},p3)
/// for a neighbor chain q from p1 to p2. Every factor is evaluated by the
/// neighbor formula.
pub fn chain_product_check(
    engine: &mut Engine,
    chain: &[Polarization],
    p3: &Polarization,
) -> Result<(Cyclotomic, Cyclotomic)> {
    chain_product(engine, chain, p3, false)
}

/// The same product with each neighbor pair taken in the opposite order; it
/// equals α(p1,p2,p3)^{-1}.
pub fn chain_product_swapped(
    engine: &mut Engine,
    chain: &[Polarization],
    p3: &Polarization,
) -> Result<(Cyclotomic, Cyclotomic)> {
    chain_product(engine, chain, p3, true)
}

fn chain_product(
    engine: &mut Engine,
    chain: &[Polarization],
    p3: &Polarization,
    swapped: bool,
) -> Result<(Cyclotomic, Cyclotomic)> {
    if chain.len() < 2 {
        return Err(Error::Input("chain needs two ends".into()));
    }
    let q: Vec<usize> = chain.iter().map(|p| engine.add(p)).collect();
    let k = engine.add(p3);
    let m = q.len();
    let direct = engine.alpha_formula(q[0], q[m - 1], k);
    let direct = engine.to_cyclotomic(&direct);
    let order = |a: usize, b: usize| if swapped { (b, a) } else { (a, b) };
    let mut prod = engine.session.one();
    for i in 1..m - 1 {
        let (x, y) = order(q[i + 1], q[i]);
        let v = engine.alpha_neighbor(x, y, q[0])?;
        prod = &prod * &engine.to_cyclotomic(&v);
    }
    for i in 0..m - 1 {
        let (x, y) = order(q[i], q[i + 1]);
        let v = engine.alpha_neighbor(x, y, k)?;
        prod = &prod * &engine.to_cyclotomic(&v);
    }
    Ok((direct, prod))
}

/// Outcome of the Stone–von Neumann comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SvnReport {
    pub polarizations: usize,
    pub dimension: usize,
    pub same_character: bool,
    pub matching_orbits: usize,
    pub matches_orbit_character: bool,
    pub vanishes_off_center: bool,
}

impl SvnReport {
    pub fn ok(&self) -> bool {
        self.same_character
            && self.matching_orbits == 1
            && self.matches_orbit_character
            && self.vanishes_off_center
    }
}

/// All Lagrangian-induced representations of a Heisenberg ring share one
/// character, which is the unique orbit character with the given central character.
pub fn stone_von_neumann_check(engine: &mut Engine, pols: &[Polarization]) -> Result<SvnReport> {
    let ids: Vec<usize> = pols.iter().map(|p| engine.add(p)).collect();
    if ids.is_empty() {
        return Err(Error::Input("no polarizations".into()));
    }
    let t = engine.tables.clone();
    let n = t.order();
    let p = engine.p();
    let traces: Vec<Vec<RootSum>> = ids
        .iter()
        .map(|&i| {
            (0..n)
                .map(|g| RootSum::new(p, 0, engine.models[i].trace_counts(&t, g)))
                .collect()
        })
        .collect();
    let same_character = traces.iter().all(|tr| *tr == traces[0]);
    let ring = engine.ring().clone();
    let center = ring.center();
    let f = engine.f.clone();
    let on_center = |c: &[u64]| {
        let h = GroupCharacter::new(ring.carrier(), c.to_vec()).expect("shape");
        center.elements().iter().all(|z| h.eval_exp(z) == f.eval_exp(z))
    };
    let orbits = ring.all_orbits();
    let matching: Vec<_> = orbits
        .iter()
        .filter(|o| o.members().iter().all(|m| on_center(m)))
        .collect();
    let dim = engine.models[ids[0]].dim() as i64;
    let mut matches_orbit_character = matching.len() == 1;
    if let Some(o) = matching.first() {
        for g in 0..n {
            let counts = orbit_counts(o.members(), t.element(g), engine.ring().carrier(), engine.level);
            let scaled: Vec<i64> = traces[0][g].counts.iter().map(|&c| c * dim).collect();
            if RootSum::new(p, 0, counts) != RootSum::new(p, 0, scaled) {
                matches_orbit_character = false;
                break;
            }
        }
    }
    let vanishes_off_center = (0..n).all(|g| center.contains(t.element(g)) || traces[0][g].is_zero());
    Ok(SvnReport {
        polarizations: ids.len(),
        dimension: dim as usize,
        same_character,
        matching_orbits: matching.len(),
        matches_orbit_character,
        vanishes_off_center,
    })
}

/// Σ_{f ∈ Ω} ζ^{f(g)} as counts at `level`.
pub fn orbit_counts(
    members: &[Vec<u64>],
    g: &[u64],
    carrier: &crate::abelian::AbelianGroup,
    level: u64,
) -> Vec<i64> {
    let p = carrier.p();
    let e = carrier.max_exp();
    let weights: Vec<u64> = carrier
        .exponents()
        .iter()
        .zip(g)
        .map(|(&ei, &gi)| gi * ipow(p, e - ei) % level)
        .collect();
    let mut counts = vec![0i64; level as usize];
    for m in members {
        let v = m
            .iter()
            .zip(&weights)
            .fold(0u64, |acc, (&c, &w)| (acc + c * w) % level);
        counts[v as usize] += 1;
    }
    counts
}

/// Trace of ρ(g) for every element, and the orbit formula, compared exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitMethodReport {
    pub orbits: usize,
    pub dimension_squares: u64,
    pub group_order: u64,
    pub traces_match: bool,
    pub irreducible: bool,
    pub orthogonal: bool,
}

impl OrbitMethodReport {
    pub fn ok(&self) -> bool {
        self.traces_match && self.irreducible && self.orthogonal && self.dimension_squares == self.group_order
    }
}

/// Orbit characters at class representatives, as RootSums with scale −2d.
pub struct CharacterTable {
    pub classes: Vec<Vec<Element>>,
    pub orbit_sizes: Vec<usize>,
    pub dims: Vec<u64>,
    /// values[o][c]
    pub values: Vec<Vec<RootSum>>,
}

pub fn character_table(ring: &LieRing) -> CharacterTable {
    let a = ring.carrier();
    let p = a.p();
    let level = ipow(p, a.max_exp());
    let orbits = ring.all_orbits();
    let classes = ring.conjugacy_classes();
    let mut dims = Vec::new();
    let mut values = Vec::new();
    for o in &orbits {
        let d = o.half_len().expect("orbit sizes are even powers of p");
        dims.push(ipow(p, d));
        values.push(
            classes
                .iter()
                .map(|c| RootSum::new(p, -2 * d as i32, orbit_counts(o.members(), &c[0], a, level)))
                .collect(),
        );
    }
    CharacterTable {
        classes,
        orbit_sizes: orbits.iter().map(|o| o.size()).collect(),
        dims,
        values,
    }
}

/// Row orthogonality: Σ_C |C| χ_i(C) conj(χ_j(C)) = |G| δ_ij, exactly.
pub fn rows_orthogonal(table: &CharacterTable, order: u64) -> bool {
    let n = table.values.len();
    for i in 0..n {
        for j in i..n {
            let (vi, vj) = (&table.values[i], &table.values[j]);
            let q = vi[0].counts.len();
            let mut acc = vec![0i64; q];
            for (c, class) in table.classes.iter().enumerate() {
                let w = class.len() as i64;
                let (x, y) = (&vi[c].counts, &vj[c].counts);
                for (s, &a) in x.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    for (t, &b) in y.iter().enumerate() {
                        if b != 0 {
                            acc[(s + q - t) % q] += w * a * b;
                        }
                    }
                }
            }
            // value = p^{-(d_i + d_j)} · acc where d are the halves of the scales
            let scale = (table.dims[i] * table.dims[j]) as i64;
            let mut want = vec![0i64; q];
            if i == j {
                want[0] = order as i64 * scale;
            }
            let p = vi[0].p;
            if RootSum::new(p, 0, acc) != RootSum::new(p, 0, want) {
                return false;
            }
        }
    }
    true
}

/// For every orbit: induce from a polarization of its representative and compare
/// traces with the orbit formula on every element; check Σ|tr|² = |G|.
pub fn orbit_method_check(ring: &LieRing) -> Result<OrbitMethodReport> {
    let a = ring.carrier();
    let p = a.p();
    let level = ipow(p, a.max_exp());
    let tables = GroupTables::new(ring);
    let n = tables.order();
    let orbits = ring.all_orbits();
    let mut traces_match = true;
    let mut irreducible = true;
    let mut dimension_squares = 0u64;
    for o in &orbits {
        let f = o.representative();
        let pol = crate::polar::find_polarization(ring, &f)?;
        let rep = induce(&tables, &f, &pol);
        let dim = rep.dim() as i64;
        dimension_squares += (dim * dim) as u64;
        let mut norm = vec![0i64; level as usize];
        let q = level as usize;
        for g in 0..n {
            let tr = rep.trace_counts(&tables, g);
            let orbit = orbit_counts(o.members(), tables.element(g), a, level);
            let scaled: Vec<i64> = tr.iter().map(|&c| c * dim).collect();
            if traces_match && RootSum::new(p, 0, orbit) != RootSum::new(p, 0, scaled) {
                traces_match = false;
            }
            for (s, &x) in tr.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (t, &y) in tr.iter().enumerate() {
                    if y != 0 {
                        norm[(s + q - t) % q] += x * y;
                    }
                }
            }
        }
        let mut want = vec![0i64; q];
        want[0] = n as i64;
        if RootSum::new(p, 0, norm) != RootSum::new(p, 0, want) {
            irreducible = false;
        }
    }
    let table = character_table(ring);
    Ok(OrbitMethodReport {
        orbits: orbits.len(),
        dimension_squares,
        group_order: n as u64,
        traces_match,
        irreducible,
        orthogonal: rows_orthogonal(&table, n as u64),
    })
}

/// A deterministic list of the Lagrangian polarizations' presentations, used by
/// rechoice tests.
pub fn canonical_presentations(pols: &[Polarization]) -> Vec<Presentation> {
    pols.iter().map(|p| Presentation::canonical(p.subgroup())).collect()
}

/// Elements of a subgroup as indices.
pub fn subgroup_indices(t: &GroupTables, s: &Subgroup) -> Vec<usize> {
    s.elements().iter().map(|x| t.index(x)).collect()
}
