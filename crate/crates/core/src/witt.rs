//! Quadratic modules, the Witt group Z/2 × F_p^×/(F_p^×)², Maslov indices of
//! Lagrangian tuples and the γ-index.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::{
    det_pairing, quotient, AbelianGroup, Element, Hom, Orientation, Pairing, Presentation,
    Subgroup,
};
use crate::error::{Error, Result};
use crate::modular::{inv_mod, ipow, is_square_mod, mul_mod, neg_mod};
use crate::polar::relative_orientation_scalar;
use crate::scalars::Cyclotomic;
use crate::session::Session;

/// A finite abelian p-group with a perfect symmetric pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticModule {
    form: Pairing,
}

impl QuadraticModule {
    pub fn new(form: Pairing) -> Result<Self> {
        if !form.is_symmetric() {
            return Err(Error::Input("quadratic form must be symmetric".into()));
        }
        if !form.is_perfect() {
            return Err(Error::Degenerate);
        }
        Ok(QuadraticModule { form })
    }

    pub fn zero(p: u64) -> Self {
        let a = AbelianGroup::trivial(p);
        QuadraticModule {
            form: Pairing::new(&a, &a, 1, vec![]).expect("empty form"),
        }
    }

    /// ⟨a_1, …, a_d⟩ on F_p^d, read through x ↦ ζ_p^{psi·x}.
    pub fn diagonal(p: u64, diag: &[u64], psi: u64) -> Result<Self> {
        if diag.is_empty() {
            return Ok(Self::zero(p));
        }
        let a = AbelianGroup::new(p, vec![1; diag.len()])?;
        let matrix = (0..diag.len())
            .map(|i| {
                (0..diag.len())
                    .map(|j| if i == j { mul_mod(diag[i] % p, psi % p, p) } else { 0 })
                    .collect()
            })
            .collect();
        Self::new(Pairing::new(&a, &a, 1, matrix)?)
    }

    /// A random perfect symmetric form on the group with the given exponents.
    pub fn random<R: Rng>(rng: &mut R, p: u64, exponents: &[u32]) -> Result<Self> {
        let a = AbelianGroup::new(p, exponents.to_vec())?;
        let level = a.max_exp();
        let k = a.rank();
        for _ in 0..1000 {
            let mut m = vec![vec![0u64; k]; k];
            for i in 0..k {
                for j in i..k {
                    let e = exponents[i].min(exponents[j]);
                    let v = rng.gen_range(0..ipow(p, e)) * ipow(p, level - e);
                    m[i][j] = v;
                    m[j][i] = v;
                }
            }
            if let Ok(q) = Self::new(Pairing::new(&a, &a, level, m)?) {
                return Ok(q);
            }
        }
        Err(Error::Degenerate)
    }

    pub fn form(&self) -> &Pairing {
        &self.form
    }

    pub fn group(&self) -> &AbelianGroup {
        self.form.left()
    }

    pub fn p(&self) -> u64 {
        self.group().p()
    }

    pub fn len(&self) -> u32 {
        self.group().len()
    }

    pub fn is_empty(&self) -> bool {
        self.group().is_empty()
    }

    /// A° : the inverse form.
    pub fn opposite(&self) -> Self {
        QuadraticModule {
            form: self.form.opposite(),
        }
    }

    pub fn orthogonal_sum(&self, other: &QuadraticModule) -> Result<Self> {
        let form = self.form.orthogonal_sum(other.form());
        if form.left().is_sorted() {
            return Ok(QuadraticModule { form });
        }
        // re-sort the coordinates so that the carrier is a sorted group
        let ex = form.left().exponents().to_vec();
        let mut order: Vec<usize> = (0..ex.len()).collect();
        order.sort_by(|&i, &j| ex[j].cmp(&ex[i]));
        let a = AbelianGroup::new(form.left().p(), order.iter().map(|&i| ex[i]).collect())?;
        let m = form.matrix();
        let matrix = order
            .iter()
            .map(|&i| order.iter().map(|&j| m[i][j]).collect())
            .collect();
        Self::new(Pairing::new(&a, &a, form.level(), matrix)?)
    }

    /// δ(q) ∈ F_p^× against the standard orientation on both sides.
    pub fn discriminant(&self, psi: u64) -> Result<u64> {
        det_pairing(
            &self.form,
            Orientation { scalar: 1 },
            Orientation { scalar: 1 },
            psi,
        )
    }

    /// (len mod 2, δ).
    pub fn witt_class(&self, psi: u64) -> Result<WittClass> {
        Ok(WittClass::new(
            self.p(),
            (self.len() % 2) as u8,
            self.discriminant(psi)?,
        ))
    }

    /// I^⊥/I for an isotropic subgroup I.
    pub fn reduce_by(&self, i: &Subgroup) -> Result<QuadraticModule> {
        if !self.form.is_isotropic(i) {
            return Err(Error::Input("reduction subgroup must be isotropic".into()));
        }
        let perp = self.form.perp(i)?;
        let pres = Presentation::canonical(&perp);
        let inner = pres.inclusion().preimage(i);
        let q = quotient(pres.group(), &inner)?;
        let lifts: Vec<Element> = q.lifts.iter().map(|l| pres.inclusion().apply(l)).collect();
        let matrix = lifts
            .iter()
            .map(|x| lifts.iter().map(|y| self.form.eval(x, y)).collect())
            .collect();
        if q.group.is_empty() {
            return Ok(Self::zero(self.p()));
        }
        Self::new(Pairing::new(&q.group, &q.group, self.form.level(), matrix)?)
    }

    /// Witt class by reduction to an F_p-form and diagonalization.
    pub fn witt_class_reduce(&self, psi: u64) -> Result<WittClass> {
        let p = self.p();
        let mut cur = self.clone();
        while cur.group().max_exp() >= 2 {
            let a = cur.group();
            let n = a.max_exp();
            let gens: Vec<Element> = (0..a.rank())
                .map(|i| a.scale(ipow(p, n - 1), &a.basis_vector(i)))
                .collect();
            let i = Subgroup::from_generators(a, &gens);
            cur = cur.reduce_by(&i)?;
        }
        let diag = cur.diagonalize(psi)?;
        let d = diag.len();
        let mut disc = diag.iter().fold(1u64, |acc, &x| mul_mod(acc, x, p));
        if (d * d.saturating_sub(1) / 2) % 2 == 1 {
            disc = neg_mod(disc, p);
        }
        Ok(WittClass::new(p, (d % 2) as u8, disc))
    }

    /// Diagonal entries of an F_p-form after Gram–Schmidt, divided by psi.
    pub fn diagonalize(&self, psi: u64) -> Result<Vec<u64>> {
        let a = self.group();
        let p = a.p();
        if a.max_exp() > 1 {
            return Err(Error::Input("diagonalization needs an elementary abelian group".into()));
        }
        let shift = ipow(p, self.form.level() - 1);
        let k = a.rank();
        let mut m: Vec<Vec<u64>> = self
            .form
            .matrix()
            .iter()
            .map(|r| r.iter().map(|&x| x / shift % p).collect())
            .collect();
        let inv_psi = inv_mod(psi % p, p).ok_or(Error::NotInvertible)?;
        let mut out = Vec::new();
        let mut alive: Vec<usize> = (0..k).collect();
        while !alive.is_empty() {
            // pick a non-isotropic vector; if all diagonal entries vanish use e_i + e_j
            let piv = alive.iter().position(|&i| m[i][i] != 0);
            let piv = match piv {
                Some(t) => t,
                None => {
                    let i = alive[0];
                    let j = *alive
                        .iter()
                        .find(|&&j| m[i][j] != 0)
                        .ok_or(Error::Degenerate)?;
                    // replace e_i by e_i + e_j
                    for &t in &alive {
                        m[i][t] = (m[i][t] + m[j][t]) % p;
                    }
                    for &t in &alive {
                        m[t][i] = m[i][t];
                    }
                    m[i][i] = (m[i][i] + m[i][j]) % p;
                    if m[i][i] == 0 {
                        return Err(Error::Degenerate);
                    }
                    0
                }
            };
            let i = alive.remove(piv);
            let d = m[i][i];
            let dinv = inv_mod(d, p).unwrap();
            for &s in &alive {
                let c = mul_mod(m[s][i], dinv, p);
                for &t in &alive {
                    m[s][t] = (m[s][t] + p - mul_mod(c, m[i][t], p)) % p;
                }
            }
            out.push(mul_mod(d, inv_psi, p));
        }
        Ok(out)
    }

    /// γ(q) = |A|^{-1/2} Σ_a q(a, a/2).
    pub fn gamma(&self, s: &Session) -> Result<Cyclotomic> {
        let a = self.group();
        let level = self.form.level();
        if level > s.max_exp() {
            return Err(Error::ConductorTooSmall {
                conductor: s.conductor(),
                needed: 4 * ipow(a.p(), level),
            });
        }
        let q = ipow(a.p(), level);
        let half = (ipow(a.p(), a.max_exp().max(1)) + 1) / 2;
        let mut counts = vec![0i128; s.conductor() as usize];
        let step = s.conductor() / q;
        for x in a.elements() {
            let h = a.scale(half, &x);
            let e = self.form.eval(&x, &h) % q;
            counts[(e * step) as usize] += 1;
        }
        Ok(&Cyclotomic::from_root_counts(s.field(), &counts) * &s.inv_sqrt_p_pow(a.len()))
    }
}

/// γ(a) := γ(⟨a⟩).
pub fn gamma_scalar(s: &Session, a: u64) -> Result<Cyclotomic> {
    QuadraticModule::diagonal(s.p(), &[a], s.psi())?.gamma(s)
}

/// An element (e, d) of W₀ = Z/2 × F_p^×/(F_p^×)².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WittClass {
    pub p: u64,
    pub parity: u8,
    /// Whether d is a square.
    pub square: bool,
}

/// Least quadratic nonresidue mod p.
pub fn least_nonsquare(p: u64) -> u64 {
    (2..p).find(|&a| !is_square_mod(a, p)).expect("odd prime")
}

impl WittClass {
    pub fn new(p: u64, parity: u8, d: u64) -> Self {
        assert!(d % p != 0, "discriminant must be a unit");
        WittClass {
            p,
            parity: parity % 2,
            square: is_square_mod(d % p, p),
        }
    }

    pub fn identity(p: u64) -> Self {
        WittClass::new(p, 0, 1)
    }

    /// 1 or the least nonsquare.
    pub fn d(&self) -> u64 {
        if self.square {
            1
        } else {
            least_nonsquare(self.p)
        }
    }

    pub fn mul(&self, other: &WittClass) -> WittClass {
        let p = self.p;
        let mut d = mul_mod(self.d(), other.d(), p);
        if self.parity == 1 && other.parity == 1 {
            d = neg_mod(d, p);
        }
        WittClass::new(p, self.parity + other.parity, d)
    }

    pub fn inverse(&self) -> WittClass {
        let p = self.p;
        let mut d = inv_mod(self.d(), p).unwrap();
        if self.parity == 1 {
            d = neg_mod(d, p);
        }
        WittClass::new(p, self.parity, d)
    }

    pub fn pow(&self, n: u32) -> WittClass {
        (0..n).fold(WittClass::identity(self.p), |acc, _| acc.mul(self))
    }

    pub fn is_identity(&self) -> bool {
        self.parity == 0 && self.square
    }

    /// qm: (1, a) ↦ ⟨a⟩, (0, a) ↦ ⟨−1, a⟩.
    pub fn realize(&self, psi: u64) -> Result<QuadraticModule> {
        let p = self.p;
        if self.parity == 1 {
            QuadraticModule::diagonal(p, &[self.d()], psi)
        } else {
            QuadraticModule::diagonal(p, &[p - 1, self.d()], psi)
        }
    }

    /// γ(1)^{−(d−1)²} γ(δ).
    pub fn gamma(&self, s: &Session) -> Result<Cyclotomic> {
        let g = gamma_scalar(s, self.d())?;
        if self.parity == 1 {
            Ok(g)
        } else {
            let g1 = gamma_scalar(s, 1)?;
            Ok(&g * &g1.inverse_unit().ok_or(Error::NotInvertible)?)
        }
    }
}

impl fmt::Display for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.parity, self.d())
    }
}

/// (T_L, q_L) for a cyclic tuple of Lagrangians.
#[derive(Clone, Debug)]
pub struct MaslovData {
    pub module: QuadraticModule,
    /// Lifts of the basis of T_L to ⊕ L_i ⊆ A^m.
    pub lifts: Vec<Element>,
}

/// The complex ⊕ L_i ∩ L_{i+1} → ⊕ L_i → A, its middle homology T_L and
/// q_L(a, b) = Π_{i>j} ω(a_i, b_j).
pub fn maslov_data(omega: &Pairing, ls: &[Subgroup]) -> Result<MaslovData> {
    let a = omega.left();
    let p = a.p();
    for l in ls {
        if !omega.is_lagrangian(l) {
            return Err(Error::NotLagrangian(format!("{:?}", l.generators())));
        }
    }
    let m = ls.len();
    if m == 0 {
        return Ok(MaslovData {
            module: QuadraticModule::zero(p),
            lifts: vec![],
        });
    }
    let k = a.rank();
    let big = a.power(m);
    let block = |i: usize, x: &[u64]| {
        let mut v = big.zero();
        v[i * k..(i + 1) * k].copy_from_slice(x);
        v
    };
    let mut gens = Vec::new();
    for (i, l) in ls.iter().enumerate() {
        for g in l.generators() {
            gens.push(block(i, &g));
        }
    }
    let sum_l = Subgroup::from_generators(&big, &gens);
    let images: Vec<Element> = (0..big.rank()).map(|t| a.basis_vector(t % k)).collect();
    let sigma = Hom::new(&big, a, images)?;
    let cycles = sigma.kernel().intersect(&sum_l)?;
    let mut bgens = Vec::new();
    for i in 0..m {
        let j = (i + 1) % m;
        let inter = ls[i].intersect(&ls[j])?;
        for g in inter.generators() {
            let mut v = block(i, &g);
            let w = block(j, &a.neg(&g));
            v = big.add(&v, &w);
            bgens.push(v);
        }
    }
    let boundaries = Subgroup::from_generators(&big, &bgens);
    let pres = Presentation::canonical(&cycles);
    let inner = pres.inclusion().preimage(&boundaries);
    let q = quotient(pres.group(), &inner)?;
    let lifts: Vec<Element> = q.lifts.iter().map(|l| pres.inclusion().apply(l)).collect();
    if q.group.is_empty() {
        return Ok(MaslovData {
            module: QuadraticModule::zero(p),
            lifts,
        });
    }
    let ql = |x: &[u64], y: &[u64]| -> u64 {
        let mut acc = 0u64;
        let md = omega.modulus();
        for i in 0..m {
            for j in 0..i {
                acc = (acc + omega.eval(&x[i * k..(i + 1) * k], &y[j * k..(j + 1) * k])) % md;
            }
        }
        acc
    };
    let matrix = lifts
        .iter()
        .map(|x| lifts.iter().map(|y| ql(x, y)).collect())
        .collect();
    let form = Pairing::new(&q.group, &q.group, omega.level(), matrix)?;
    if !form.is_symmetric() {
        return Err(Error::Input("q_L is not symmetric".into()));
    }
    Ok(MaslovData {
        module: QuadraticModule::new(form)?,
        lifts,
    })
}

pub fn maslov_index(omega: &Pairing, ls: &[Subgroup], psi: u64) -> Result<WittClass> {
    maslov_data(omega, ls)?.module.witt_class(psi)
}

/// Θ(L̃1, L̃2) = qm(len(L1/L1∩L2), θ(L̃1, L̃2)) as a Witt class.
pub fn theta_class(
    omega: &Pairing,
    l1: (&Presentation, Orientation),
    l2: (&Presentation, Orientation),
    psi: u64,
) -> Result<WittClass> {
    let p = omega.left().p();
    let inter = l1.0.subgroup().intersect(l2.0.subgroup())?;
    let m = l1.0.subgroup().len() - inter.len();
    let t = relative_orientation_scalar(omega, l1, l2, psi)?;
    Ok(WittClass::new(p, (m % 2) as u8, t))
}

/// Outcome of the length, discriminant and coboundary identities for one tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaslovReport {
    pub length: u32,
    pub length_formula: i64,
    pub discriminant_square: bool,
    pub discriminant_formula_square: bool,
    pub tau: String,
    pub theta_sum: String,
    pub ok: bool,
}

/// Checks len(T_L), δ(q_L) against Π θ, and τ = Σ Θ for oriented Lagrangians.
pub fn maslov_invariant_checks(
    omega: &Pairing,
    ls: &[(Presentation, Orientation)],
    psi: u64,
) -> Result<MaslovReport> {
    let a = omega.left();
    let p = a.p();
    let m = ls.len();
    let subs: Vec<Subgroup> = ls.iter().map(|(pr, _)| pr.subgroup().clone()).collect();
    let data = maslov_data(omega, &subs)?;
    let length = data.module.len();
    let mut formula = (m as i64 - 2) * a.len() as i64 / 2;
    let mut all = subs[0].clone();
    for s in &subs {
        all = all.intersect(s)?;
    }
    formula += 2 * all.len() as i64;
    let mut mi = Vec::new();
    for i in 0..m {
        let j = (i + 1) % m;
        let inter = subs[i].intersect(&subs[j])?;
        formula -= inter.len() as i64;
        mi.push((subs[i].len() - inter.len()) as u64);
    }
    let disc = data.module.discriminant(psi)?;
    let mut prod = 1u64;
    let mut sum_theta = WittClass::identity(p);
    for i in 0..m {
        let j = (i + 1) % m;
        let (x, y) = (&ls[i], &ls[j]);
        let t = relative_orientation_scalar(omega, (&x.0, x.1), (&y.0, y.1), psi)?;
        prod = mul_mod(prod, t, p);
        sum_theta = sum_theta.mul(&WittClass::new(p, (mi[i] % 2) as u8, t));
    }
    let total: u64 = mi.iter().sum();
    let sq: u64 = mi.iter().map(|x| x * x).sum();
    // ½ Σ_{i≠j} m_i m_j
    let exponent = (total * total - sq) / 2;
    if exponent % 2 == 1 {
        prod = neg_mod(prod, p);
    }
    let tau = data.module.witt_class(psi)?;
    let discriminant_square = is_square_mod(disc, p);
    let discriminant_formula_square = is_square_mod(prod, p);
    let ok = length as i64 == formula && discriminant_square == discriminant_formula_square && tau == sum_theta;
    Ok(MaslovReport {
        length,
        length_formula: formula,
        discriminant_square,
        discriminant_formula_square,
        tau: tau.to_string(),
        theta_sum: sum_theta.to_string(),
        ok,
    })
}

/// L31 = {(a, c) | ∃ b: (a, b) ∈ L21, (b, c) ∈ L32}, certified Lagrangian in A1° ⊕ A3.
pub fn compose_correspondence(
    q1: &QuadraticModule,
    q2: &QuadraticModule,
    q3: &QuadraticModule,
    l21: &Subgroup,
    l32: &Subgroup,
) -> Result<Subgroup> {
    let (a1, a2, a3) = (q1.group(), q2.group(), q3.group());
    let f12 = q1.form().opposite().orthogonal_sum(q2.form());
    let f23 = q2.form().opposite().orthogonal_sum(q3.form());
    if !f12.is_lagrangian(l21) || !f23.is_lagrangian(l32) {
        return Err(Error::NotLagrangian("correspondence input".into()));
    }
    let (k1, k2, k3) = (a1.rank(), a2.rank(), a3.rank());
    let total = a1.direct_sum(a2).direct_sum(a3);
    let pad = |x: &[u64], at: usize| {
        let mut v = total.zero();
        v[at..at + x.len()].copy_from_slice(x);
        v
    };
    let mut g1: Vec<Element> = l21.generators().iter().map(|x| pad(x, 0)).collect();
    g1.extend((0..k3).map(|i| total.basis_vector(k1 + k2 + i)));
    let mut g2: Vec<Element> = l32.generators().iter().map(|x| pad(x, k1)).collect();
    g2.extend((0..k1).map(|i| total.basis_vector(i)));
    let s = Subgroup::from_generators(&total, &g1).intersect(&Subgroup::from_generators(&total, &g2))?;
    let target = a1.direct_sum(a3);
    let images = (0..total.rank())
        .map(|t| {
            if t < k1 {
                target.basis_vector(t)
            } else if t < k1 + k2 {
                target.zero()
            } else {
                target.basis_vector(t - k2)
            }
        })
        .collect();
    let proj = Hom::new(&total, &target, images)?;
    let out = proj.image(&s);
    let f13 = q1.form().opposite().orthogonal_sum(q3.form());
    if !f13.is_lagrangian(&out) {
        return Err(Error::NotLagrangian("composite".into()));
    }
    Ok(out)
}

/// The graph of an isometry-like map A1 → A2 given on basis vectors.
pub fn graph(a1: &AbelianGroup, a2: &AbelianGroup, images: &[Element]) -> Subgroup {
    let total = a1.direct_sum(a2);
    let gens: Vec<Element> = (0..a1.rank())
        .map(|i| {
            let mut v = a1.basis_vector(i);
            v.extend_from_slice(&images[i]);
            v
        })
        .collect();
    Subgroup::from_generators(&total, &gens)
}

/// The diagonal {(a, a)} in A° ⊕ A.
pub fn diagonal_correspondence(q: &QuadraticModule) -> Subgroup {
    let a = q.group();
    let images: Vec<Element> = (0..a.rank()).map(|i| a.basis_vector(i)).collect();
    graph(a, a, &images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::enumerate_subgroups;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn symplectic(p: u64, exps: Vec<u32>) -> Pairing {
        let a = AbelianGroup::new(p, exps).unwrap();
        let level = a.max_exp();
        let k = a.rank();
        let q = ipow(p, level);
        let mut m = vec![vec![0; k]; k];
        for t in (0..k).step_by(2) {
            let e = a.exponents()[t];
            m[t][t + 1] = ipow(p, level - e);
            m[t + 1][t] = q - ipow(p, level - e);
        }
        Pairing::new(&a, &a, level, m).unwrap()
    }

    #[test]
    fn diagonal_discriminant() {
        for p in [3u64, 5, 7] {
            for a in 1..p {
                for b in 1..p {
                    let q = QuadraticModule::diagonal(p, &[a, b], 1).unwrap();
                    let want = neg_mod(mul_mod(a, b, p), p);
                    assert_eq!(q.discriminant(1).unwrap(), want);
                    assert_eq!(q.witt_class(1).unwrap(), q.witt_class_reduce(1).unwrap());
                }
            }
        }
    }

    #[test]
    fn w0_table() {
        let p = 5;
        let one = WittClass::new(p, 1, 1);
        assert_eq!(one.mul(&one), WittClass::new(p, 0, p - 1));
        let p = 3;
        let one = WittClass::new(p, 1, 1);
        assert_eq!(one.pow(2), WittClass::new(p, 0, 2));
        assert!(one.pow(4).is_identity());
        for parity in 0..2 {
            for d in 1..p {
                let c = WittClass::new(p, parity, d);
                assert!(c.mul(&c.inverse()).is_identity());
                assert_eq!(c.realize(1).unwrap().witt_class(1).unwrap(), c);
            }
        }
    }

    #[test]
    fn gamma_closed_form() {
        for p in [3u64, 5, 7, 13] {
            let s = Session::new(p, 1).unwrap();
            let eps = if p % 4 == 1 { s.one() } else { s.i_pow(1) };
            for a in 1..p {
                let g = gamma_scalar(&s, a).unwrap();
                let want = if is_square_mod(mul_mod(2, a, p), p) { eps.clone() } else { -&eps };
                assert_eq!(g, want, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn hyperbolic_gamma_is_one() {
        let s = Session::new(5, 1).unwrap();
        let q = QuadraticModule::diagonal(5, &[1, 4], 1).unwrap();
        assert!(q.gamma(&s).unwrap().is_one());
        assert!(q.witt_class(1).unwrap().is_identity());
    }

    #[test]
    fn cyclic_nine_module() {
        let a = AbelianGroup::new(3, vec![2]).unwrap();
        let q = QuadraticModule::new(Pairing::new(&a, &a, 2, vec![vec![1]]).unwrap()).unwrap();
        assert_eq!(q.witt_class(1).unwrap(), q.witt_class_reduce(1).unwrap());
        let s = Session::new(3, 2).unwrap();
        let g = q.gamma(&s).unwrap();
        assert!(g.pow(4).is_one());
    }

    #[test]
    fn random_modules_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for shape in [vec![2, 1], vec![2], vec![1, 1, 1], vec![2, 2]] {
            for _ in 0..10 {
                let q = QuadraticModule::random(&mut rng, 3, &shape).unwrap();
                assert_eq!(q.witt_class(1).unwrap(), q.witt_class_reduce(1).unwrap(), "{shape:?}");
            }
        }
    }

    #[test]
    fn maslov_small_cases() {
        let w = symplectic(3, vec![1, 1]);
        let lines: Vec<Subgroup> = enumerate_subgroups(w.left(), 3)
            .unwrap()
            .into_iter()
            .filter(|s| s.len() == 1)
            .collect();
        assert_eq!(lines.len(), 4);
        let d = maslov_data(&w, &lines[0..2]).unwrap();
        assert_eq!(d.module.len(), 0);
        let d = maslov_data(&w, &lines[0..3]).unwrap();
        assert_eq!(d.module.len(), 1);
        let same = vec![lines[0].clone(); 3];
        assert!(maslov_index(&w, &same, 1).unwrap().is_identity());
        let t = maslov_index(&w, &lines[0..3], 1).unwrap();
        let rev: Vec<Subgroup> = lines[0..3].iter().rev().cloned().collect();
        assert_eq!(maslov_index(&w, &rev, 1).unwrap(), t.inverse());
    }

    #[test]
    fn correspondence_of_graphs() {
        let q = QuadraticModule::diagonal(5, &[1, 2], 1).unwrap();
        let a = q.group();
        let diag = diagonal_correspondence(&q);
        let neg: Vec<Element> = (0..2).map(|i| a.neg(&a.basis_vector(i))).collect();
        let g = graph(a, a, &neg);
        let c = compose_correspondence(&q, &q, &q, &diag, &g).unwrap();
        assert_eq!(c, g);
        let c = compose_correspondence(&q, &q, &q, &g, &g).unwrap();
        assert_eq!(c, diag);
    }

    fn oriented_tuples(w: &Pairing, seed: u64, count: usize) -> Vec<Vec<(Presentation, Orientation)>> {
        let lags = crate::polar::enumerate_lagrangians(w).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = w.left().p();
        (0..count)
            .map(|_| {
                let m = rng.gen_range(2..=5);
                (0..m)
                    .map(|_| {
                        let l = &lags[rng.gen_range(0..lags.len())];
                        let o = Orientation { scalar: rng.gen_range(1..p) };
                        (Presentation::canonical(l), o)
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn maslov_identities_random() {
        for (w, seed) in [(symplectic(3, vec![1, 1, 1, 1]), 1), (symplectic(3, vec![2, 2]), 2)] {
            for t in oriented_tuples(&w, seed, 40) {
                let r = maslov_invariant_checks(&w, &t, 1).unwrap();
                assert!(r.ok, "{r:?}");
            }
        }
    }
}
