//! Skew forms B_f, polarizations, neighbor chains, the Heisenberg reduction
//! and relative orientations.

use serde::{Deserialize, Serialize};

use crate::abelian::{
    det_pairing, exact_sequence_factor, grow_subgroups, orient_ratio, quotient, AbelianGroup,
    Element, GroupCharacter, Hom, Orientation, Pairing, Presentation, Quotient, Subgroup,
};
use crate::error::{Error, Result};
use crate::liering::{BracketEntry, LieRing};
use crate::modular::{inv_mod, ipow, is_square_mod, mul_mod, valuation};

/// B_f(x, y) = f([x, y]) with its kernel and the order of its image.
#[derive(Clone, Debug)]
pub struct SkewForm {
    pub pairing: Pairing,
    pub kernel: Subgroup,
    /// |𝔷| = p^image_exp.
    pub image_exp: u32,
}

pub fn skew_form(ring: &LieRing, f: &GroupCharacter) -> SkewForm {
    let a = ring.carrier();
    let level = a.max_exp();
    let pairing = Pairing::from_fn(a, a, level, |x, y| f.eval_exp(&ring.bracket(x, y)))
        .expect("B_f is bi-additive");
    let kernel = pairing.perp(&Subgroup::full(a)).expect("same group");
    let min_val = pairing
        .matrix()
        .iter()
        .flatten()
        .map(|&v| valuation(v, a.p(), level))
        .min()
        .unwrap_or(level);
    SkewForm {
        pairing,
        kernel,
        image_exp: level - min_val,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub subring: bool,
    pub isotropic: bool,
    pub size: bool,
}

impl Certificate {
    pub fn ok(&self) -> bool {
        self.subring && self.isotropic && self.size
    }
}

pub fn is_polarization(ring: &LieRing, f: &GroupCharacter, s: &Subgroup) -> Certificate {
    let sf = skew_form(ring, f);
    certify(ring, &sf, s)
}

fn certify(ring: &LieRing, sf: &SkewForm, s: &Subgroup) -> Certificate {
    Certificate {
        subring: ring.is_subring(s),
        isotropic: sf.pairing.is_isotropic(s),
        size: 2 * s.len() == ring.carrier().len() + sf.kernel.len(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polarization {
    subgroup: Subgroup,
}

impl Polarization {
    /// Certifies S as a polarization for f.
    pub fn new(ring: &LieRing, f: &GroupCharacter, s: Subgroup) -> Result<Self> {
        let c = is_polarization(ring, f, &s);
        if !c.ok() {
            return Err(Error::NotPolarization(format!("{c:?}")));
        }
        Ok(Polarization { subgroup: s })
    }

    pub(crate) fn trusted(s: Subgroup) -> Self {
        Polarization { subgroup: s }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn len(&self) -> u32 {
        self.subgroup.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroup.is_empty()
    }
}

/// Kernel of an additive map defined on a subgroup S, as a subgroup of the ambient.
fn kernel_on(s: &Subgroup, target: &AbelianGroup, map: impl Fn(&Element) -> Element) -> Subgroup {
    let pres = Presentation::canonical(s);
    let images: Vec<Element> = pres.basis().iter().map(|b| map(b)).collect();
    let hom = Hom::new(pres.group(), target, images).expect("additive on S");
    pres.inclusion().image(&hom.kernel())
}

/// Recursive descent state: a subring H and an ideal N ⊆ ker f of H.
struct Descent<'a> {
    ring: &'a LieRing,
    f: &'a GroupCharacter,
    bf: &'a Pairing,
}

enum Step {
    /// 𝔤_0 ⊋ N: enlarge N.
    Central(Subgroup),
    /// H/N abelian with trivial 𝔤_0: H is the answer.
    Done,
    /// Descend to h = x^⊥ ∩ H.
    Descend(Subgroup),
}

impl Descent<'_> {
    fn step(&self, h: &Subgroup, n: &Subgroup) -> Step {
        let a = self.ring.carrier();
        let qn = quotient(a, n).expect("N ⊆ 𝔤");
        let hg = h.generators();
        let mut target = qn.group.power(hg.len());
        let level = self.f.level().max(1);
        target = target.direct_sum(&AbelianGroup::raw(a.p(), vec![level]));
        let g0 = kernel_on(h, &target, |x| {
            let mut out: Element = hg
                .iter()
                .flat_map(|y| qn.projection.apply(&self.ring.bracket(x, y)))
                .collect();
            out.push(self.f.eval_exp(x));
            out
        })
        .sum(n)
        .expect("same ambient");
        if &g0 != n {
            return Step::Central(g0);
        }
        // lower central series of H modulo N
        let mut series = vec![h.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self
                .ring
                .bracket_subgroups(h, last)
                .sum(n)
                .expect("same ambient");
            if &next == n || next.is_subgroup_of(n) {
                break;
            }
            series.push(next);
        }
        if series.len() == 1 {
            return Step::Done;
        }
        let candidates = &series[series.len() - 2];
        for x in candidates.generators() {
            if hg.iter().any(|y| self.bf.eval(&x, y) != 0) {
                let perp = kernel_on(h, &AbelianGroup::raw(a.p(), vec![level]), |y| {
                    vec![self.bf.eval(y, &x)]
                });
                return Step::Descend(perp);
            }
        }
        unreachable!("some generator pairs nontrivially with H")
    }

    /// h^⊥ inside H.
    fn perp_in(&self, h_sub: &Subgroup, big: &Subgroup) -> Subgroup {
        let a = self.ring.carrier();
        let gens = h_sub.generators();
        let level = self.f.level().max(1);
        let target = AbelianGroup::raw(a.p(), vec![level; gens.len().max(1)]);
        kernel_on(big, &target, |y| {
            let mut v: Element = gens.iter().map(|g| self.bf.eval(y, g)).collect();
            if v.is_empty() {
                v.push(0);
            }
            v
        })
    }
}

/// Constructs a polarization by central reduction and descent to x^⊥.
pub fn find_polarization(ring: &LieRing, f: &GroupCharacter) -> Result<Polarization> {
    let sf = skew_form(ring, f);
    let d = Descent {
        ring,
        f,
        bf: &sf.pairing,
    };
    let a = ring.carrier();
    let mut h = Subgroup::full(a);
    let mut n = Subgroup::zero(a);
    loop {
        match d.step(&h, &n) {
            Step::Central(g0) => n = g0,
            Step::Done => break,
            Step::Descend(next) => h = next,
        }
    }
    let cert = certify(ring, &sf, &h);
    if !cert.ok() {
        return Err(Error::NotPolarization(format!("descent produced {cert:?}")));
    }
    Ok(Polarization { subgroup: h })
}

/// [p1, p2] ⊆ p1 ∩ p2.
pub fn neighbor_check(ring: &LieRing, p1: &Polarization, p2: &Polarization) -> bool {
    let inter = p1.subgroup.intersect(&p2.subgroup).expect("same ambient");
    let br = ring.bracket_subgroups(&p1.subgroup, &p2.subgroup);
    br.is_subgroup_of(&inter)
}

/// A chain p1 = q_1, …, q_m = p2 of polarizations with consecutive neighbors.
pub fn neighbor_chain(
    ring: &LieRing,
    f: &GroupCharacter,
    p1: &Polarization,
    p2: &Polarization,
) -> Result<Vec<Polarization>> {
    let sf = skew_form(ring, f);
    let d = Descent {
        ring,
        f,
        bf: &sf.pairing,
    };
    let a = ring.carrier();
    let chain = chain_rec(
        &d,
        &Subgroup::full(a),
        &Subgroup::zero(a),
        p1.subgroup.clone(),
        p2.subgroup.clone(),
    );
    let mut out: Vec<Polarization> = Vec::new();
    for s in chain {
        if out.last().map(|l| l.subgroup != s).unwrap_or(true) {
            let c = certify(ring, &sf, &s);
            if !c.ok() {
                return Err(Error::NotPolarization(format!("chain node {c:?}")));
            }
            out.push(Polarization { subgroup: s });
        }
    }
    for w in out.windows(2) {
        if !neighbor_check(ring, &w[0], &w[1]) {
            return Err(Error::NotNeighbors);
        }
    }
    Ok(out)
}

fn chain_rec(d: &Descent, h: &Subgroup, n: &Subgroup, q1: Subgroup, q2: Subgroup) -> Vec<Subgroup> {
    if q1 == q2 {
        return vec![q1];
    }
    if neighbor_check(d.ring, &Polarization::trusted(q1.clone()), &Polarization::trusted(q2.clone())) {
        return vec![q1, q2];
    }
    match d.step(h, n) {
        Step::Central(g0) => chain_rec(d, h, &g0, q1, q2),
        Step::Done => vec![q1, q2],
        Step::Descend(small) => {
            let sp = d.perp_in(&small, h);
            let lift = |q: &Subgroup| {
                q.intersect(&small)
                    .and_then(|x| x.sum(&sp))
                    .expect("same ambient")
            };
            let (r1, r2) = (lift(&q1), lift(&q2));
            let mut out = vec![q1];
            out.extend(chain_rec(d, &small, n, r1, r2));
            out.push(q2);
            out
        }
    }
}

/// All polarizations: preimages of Lagrangians of 𝔤/Ker B_f that are subrings.
pub fn enumerate_polarizations(ring: &LieRing, f: &GroupCharacter) -> Result<Vec<Polarization>> {
    let h = heisenberg_reduction(ring, f)?;
    let lags = enumerate_lagrangians(&h.omega)?;
    let mut out = Vec::new();
    for l in lags {
        let gens: Vec<Element> = l.generators().iter().map(|x| h.abar.section(x)).collect();
        let s = Subgroup::from_generators(ring.carrier(), &gens)
            .sum(&h.kernel)
            .expect("same ambient");
        if ring.is_subring(&s) {
            out.push(Polarization { subgroup: s });
        }
    }
    Ok(out)
}

/// All L with L = L^⊥ for a perfect skew form.
pub fn enumerate_lagrangians(omega: &Pairing) -> Result<Vec<Subgroup>> {
    if !omega.is_skew() || !omega.is_perfect() {
        return Err(Error::NotPerfect);
    }
    let a = omega.left();
    const LIMIT: u64 = 15625;
    if a.order() > LIMIT {
        return Err(Error::SizeGuard {
            order: a.order(),
            limit: LIMIT,
        });
    }
    let half = a.len() / 2;
    let all = grow_subgroups(a, ipow(a.p(), half), |s| omega.is_isotropic(s))?;
    Ok(all.into_iter().filter(|s| s.len() == half).collect())
}

/// Ā = 𝔤/Ker B_f with ω, and the Heisenberg ring 𝔤^f = Ā ⊕ 𝔷 with f̄.
#[derive(Clone, Debug)]
pub struct HeisenbergData {
    pub kernel: Subgroup,
    pub abar: Quotient,
    pub omega: Pairing,
    /// |𝔷| = p^z_exp.
    pub z_exp: u32,
    /// Position of the 𝔷 coordinate in the carrier of 𝔤^f.
    pub z_index: usize,
    pub ring: LieRing,
    pub fbar: GroupCharacter,
    level: u32,
}

pub fn heisenberg_reduction(ring: &LieRing, f: &GroupCharacter) -> Result<HeisenbergData> {
    let sf = skew_form(ring, f);
    let a = ring.carrier();
    let p = a.p();
    let level = a.max_exp();
    let abar = quotient(a, &sf.kernel)?;
    let d = sf.image_exp;
    let shift = ipow(p, level - d);
    let ab = &abar.group;
    let omega = Pairing::from_fn(ab, ab, d, |x, y| {
        sf.pairing.eval(&abar.section(x), &abar.section(y)) / shift
    })?;
    let z_index = ab.exponents().iter().filter(|&&e| e >= d).count();
    let mut exps = ab.exponents().to_vec();
    if d > 0 {
        exps.insert(z_index, d);
    }
    let pos = |i: usize| if i < z_index { i } else { i + 1 };
    let carrier = if exps.is_empty() {
        AbelianGroup::trivial(p)
    } else {
        AbelianGroup::new(p, exps)?
    };
    let k = ab.rank();
    let mut brackets = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let w = omega.matrix()[i][j];
            if w != 0 {
                let mut value = vec![0; k + 1];
                value[z_index] = w;
                brackets.push(BracketEntry {
                    i: pos(i),
                    j: pos(j),
                    value,
                });
            }
        }
    }
    let hring = LieRing::new(&carrier, &brackets)?;
    let mut coeffs = vec![0; carrier.rank()];
    if d > 0 {
        coeffs[z_index] = 1;
    }
    let fbar = GroupCharacter::new(&carrier, coeffs)?;
    Ok(HeisenbergData {
        kernel: sf.kernel,
        abar,
        omega,
        z_exp: d,
        z_index,
        ring: hring,
        fbar,
        level,
    })
}

impl HeisenbergData {
    /// The element (π(x), 0) of 𝔤^f.
    pub fn embed_abar(&self, a: &[u64]) -> Element {
        let mut v = a.to_vec();
        if self.z_exp > 0 {
            v.insert(self.z_index, 0);
        }
        v
    }

    pub fn z_subgroup(&self) -> Subgroup {
        let c = self.ring.carrier();
        if self.z_exp == 0 {
            return Subgroup::zero(c);
        }
        Subgroup::from_generators(c, &[c.basis_vector(self.z_index)])
    }

    /// p ↦ p^f = p/Ker B_f ⊕ 𝔷.
    pub fn reduce_polarization(&self, pol: &Polarization) -> Polarization {
        let c = self.ring.carrier();
        let gens: Vec<Element> = pol
            .subgroup
            .generators()
            .iter()
            .map(|x| self.embed_abar(&self.abar.projection.apply(x)))
            .collect();
        let s = Subgroup::from_generators(c, &gens)
            .sum(&self.z_subgroup())
            .expect("same ambient");
        Polarization { subgroup: s }
    }

    /// Transports an orientation of p to p^f, with the standard orientations of
    /// Ker B_f and 𝔷.
    pub fn reduce_orientation(&self, op: &OrientedPolarization) -> Result<OrientedPolarization> {
        let p = self.ring.p();
        let pf = self.reduce_polarization(&op.polarization);
        let pf_pres = Presentation::canonical(pf.subgroup());
        // det p ≅ det Ker ⊗ det(p/Ker)
        let (lam1, kap1, q1, inc1) = split_off(&op.presentation, &self.kernel)?;
        // det p^f ≅ det 𝔷 ⊗ det(p^f/𝔷)
        let (lam2, kap2, q2, inc2) = split_off(&pf_pres, &self.z_subgroup())?;
        // q1 → q2 through 𝔤 → Ā → 𝔤^f
        let images: Vec<Element> = q1
            .lifts
            .iter()
            .map(|l| {
                let x = op.presentation.inclusion().apply(l);
                let y = self.embed_abar(&self.abar.projection.apply(&x));
                let coords = pf_pres.coords(&y).expect("lies in p^f");
                q2.projection.apply(&coords)
            })
            .collect();
        let q2_std = Presentation::standard(&q2.group);
        let mu = orient_ratio(&q2_std, &images)?;
        let _ = (inc1, inc2);
        let num = mul_mod(mul_mod(op.orientation.scalar % p, lam1, p), mul_mod(kap1, mu, p), p);
        let den = mul_mod(lam2, kap2, p);
        let scalar = mul_mod(num, inv_mod(den, p).unwrap(), p);
        Ok(OrientedPolarization {
            polarization: pf,
            presentation: pf_pres,
            orientation: Orientation { scalar },
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }
}

/// For a presented subgroup S ⊇ T: returns (λ, κ, S/T, T-inclusion) with
/// std(S) ↦ λ·κ · std(canonical T) ⊗ std(S/T).
fn split_off(pres: &Presentation, t: &Subgroup) -> Result<(u64, u64, Quotient, Hom)> {
    let g = pres.group();
    let k_sub = pres.inclusion().preimage(t);
    let pk = Presentation::canonical(&k_sub);
    let t_pres = Presentation::canonical(t);
    let k_in_amb: Vec<Element> = pk
        .basis()
        .iter()
        .map(|b| pres.inclusion().apply(b))
        .collect();
    let kappa = orient_ratio(&t_pres, &k_in_amb)?;
    let q = quotient(g, &k_sub)?;
    let lam = exact_sequence_factor(pk.inclusion(), &q.projection)?;
    Ok((lam, kappa, q, pk.inclusion().clone()))
}

/// A polarization with an orientation against a chosen presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedPolarization {
    pub polarization: Polarization,
    pub presentation: Presentation,
    pub orientation: Orientation,
}

impl OrientedPolarization {
    pub fn new(pol: Polarization, scalar: u64) -> Self {
        let presentation = Presentation::canonical(&pol.subgroup);
        OrientedPolarization {
            polarization: pol,
            presentation,
            orientation: Orientation { scalar },
        }
    }

    /// The same determinant element expressed against another basis.
    pub fn represented_by(&self, basis: Vec<Element>) -> Result<Self> {
        let p = self.polarization.subgroup.ambient().p();
        let pres = Presentation::from_basis(&self.polarization.subgroup, basis)?;
        let r = orient_ratio(&self.presentation, pres.basis())?;
        let scalar = mul_mod(self.orientation.scalar, inv_mod(r, p).unwrap(), p);
        Ok(OrientedPolarization {
            polarization: self.polarization.clone(),
            presentation: pres,
            orientation: Orientation { scalar },
        })
    }

    pub fn rescaled(&self, c: u64) -> Self {
        let p = self.polarization.subgroup.ambient().p();
        let mut out = self.clone();
        out.orientation.scalar = mul_mod(self.orientation.scalar, c % p, p);
        out
    }
}

/// The scalar θ ∈ F_p^× for two oriented isotropic subgroups under a skew form,
/// with the choice of ō on the intersection fixed to its canonical basis.
pub fn relative_orientation_scalar(
    form: &Pairing,
    (pres1, o1): (&Presentation, Orientation),
    (pres2, o2): (&Presentation, Orientation),
    psi: u64,
) -> Result<u64> {
    relative_orientation_with(form, (pres1, o1), (pres2, o2), psi, None)
}

/// As above, with an explicit basis for ō on p1 ∩ p2 (used for rechoice tests).
pub fn relative_orientation_with(
    form: &Pairing,
    (pres1, o1): (&Presentation, Orientation),
    (pres2, o2): (&Presentation, Orientation),
    psi: u64,
    inter_basis: Option<Vec<Element>>,
) -> Result<u64> {
    let choice = Choices {
        inter_basis,
        ..Choices::default()
    };
    relative_orientation_choosing(form, (pres1, o1), (pres2, o2), psi, &choice)
}

/// Auxiliary choices made while computing θ: a basis of p1 ∩ p2 for ō, and
/// elements of p1 ∩ p2 added to the lifts of the quotient bases.
#[derive(Clone, Debug, Default)]
pub struct Choices {
    pub inter_basis: Option<Vec<Element>>,
    pub shifts1: Vec<Element>,
    pub shifts2: Vec<Element>,
}

pub fn relative_orientation_choosing(
    form: &Pairing,
    (pres1, o1): (&Presentation, Orientation),
    (pres2, o2): (&Presentation, Orientation),
    psi: u64,
    choice: &Choices,
) -> Result<u64> {
    let s1 = pres1.subgroup();
    let s2 = pres2.subgroup();
    let amb = s1.ambient();
    let p = amb.p();
    let p12 = s1.intersect(s2)?;
    let p12_pres = match &choice.inter_basis {
        Some(b) => Presentation::from_basis(&p12, b.clone())?,
        None => Presentation::canonical(&p12),
    };
    let mut scal = Vec::new();
    let mut quots = Vec::new();
    for (pres, o) in [(pres1, o1), (pres2, o2)] {
        let (lam, kap, q, _) = split_off(pres, &p12)?;
        let kap_total = mul_mod(kap, orient_ratio(&p12_pres, Presentation::canonical(&p12).basis())?, p);
        scal.push(mul_mod(mul_mod(o.scalar % p, lam, p), kap_total, p));
        quots.push((q, pres.inclusion().clone()));
    }
    let shifted = |lifts: Vec<Element>, shifts: &[Element]| -> Result<Vec<Element>> {
        lifts
            .into_iter()
            .enumerate()
            .map(|(i, l)| match shifts.get(i) {
                Some(t) if p12.contains(t) => Ok(amb.add(&l, t)),
                Some(_) => Err(Error::Input("lift shift outside the intersection".into())),
                None => Ok(l),
            })
            .collect()
    };
    let (q1, i1) = &quots[0];
    let (q2, i2) = &quots[1];
    let lifts1 = shifted(q1.lifts.iter().map(|l| i1.apply(l)).collect(), &choice.shifts1)?;
    let lifts2 = shifted(q2.lifts.iter().map(|l| i2.apply(l)).collect(), &choice.shifts2)?;
    let matrix = lifts1
        .iter()
        .map(|x| lifts2.iter().map(|y| form.eval(x, y)).collect())
        .collect();
    let b = Pairing::new(&q1.group, &q2.group, form.level(), matrix)?;
    det_pairing(
        &b,
        Orientation { scalar: scal[0] },
        Orientation { scalar: scal[1] },
        psi,
    )
}

/// θ(op1, op2) ∈ F_p^× for oriented polarizations of f.
pub fn relative_orientation(
    ring: &LieRing,
    f: &GroupCharacter,
    op1: &OrientedPolarization,
    op2: &OrientedPolarization,
    psi: u64,
) -> Result<u64> {
    let sf = skew_form(ring, f);
    relative_orientation_scalar(
        &sf.pairing,
        (&op1.presentation, op1.orientation),
        (&op2.presentation, op2.orientation),
        psi,
    )
}

/// Square class of θ: true when θ is a square.
pub fn relative_orientation_class(
    ring: &LieRing,
    f: &GroupCharacter,
    op1: &OrientedPolarization,
    op2: &OrientedPolarization,
    psi: u64,
) -> Result<bool> {
    let t = relative_orientation(ring, f, op1, op2, psi)?;
    Ok(is_square_mod(t, ring.p()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn abelian_ring_polarizes_to_itself() {
        let (r, f) = catalog::abelian_27();
        let pol = find_polarization(&r, &f).unwrap();
        assert_eq!(pol.subgroup(), &Subgroup::full(r.carrier()));
        assert_eq!(skew_form(&r, &f).kernel, Subgroup::full(r.carrier()));
    }

    #[test]
    fn heisenberg_polarization_and_kernel() {
        let (r, f) = catalog::heisenberg(3, 1);
        let sf = skew_form(&r, &f);
        assert_eq!(sf.kernel.order(), 3);
        let pol = find_polarization(&r, &f).unwrap();
        assert_eq!(pol.subgroup().order(), 9);
        let z = Subgroup::from_generators(r.carrier(), &[vec![0, 0, 1]]);
        assert!(!is_polarization(&r, &f, &z).ok());
    }

    #[test]
    fn ut4_polarization_size() {
        let (r, f) = catalog::ut4(5);
        assert_eq!(skew_form(&r, &f).kernel.order(), 25);
        let pol = find_polarization(&r, &f).unwrap();
        assert_eq!(pol.subgroup().order(), 625);
    }
}
