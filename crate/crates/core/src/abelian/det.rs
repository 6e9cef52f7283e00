//! Determinant lines: standard bases of gr_n(A) = p^n A / p^{n+1} A, orientation
//! ratios, values of composition series, the isomorphism attached to a short
//! exact sequence, and the determinant of a perfect pairing.

use serde::{Deserialize, Serialize};

use super::{AbelianGroup, Element, Hom, Pairing, Presentation, Subgroup};
use crate::error::{Error, Result};
use crate::modular::{det_mod_p, inv_mod, ipow, mul_mod};

/// A nonzero scalar c meaning c · std of some fixed presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation {
    pub scalar: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub level: u32,
    /// Images of p^n g_i with e_i > n, as elements of A.
    pub basis: Vec<Element>,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn canonical_filtration(a: &AbelianGroup) -> Vec<GradedPiece> {
    (0..a.max_exp())
        .map(|n| GradedPiece {
            level: n,
            basis: (0..a.rank())
                .filter(|&i| a.exponents()[i] > n)
                .map(|i| a.scale(ipow(a.p(), n), &a.basis_vector(i)))
                .collect(),
        })
        .collect()
}

/// The scalar r with std(y) = r · std(x), for two bases of the same subgroup.
pub fn orient_ratio(x: &Presentation, y: &[Element]) -> Result<u64> {
    let amb = x.subgroup().ambient();
    let p = amb.p();
    let xo = x.group().exponents().to_vec();
    let yo: Vec<u32> = y.iter().map(|b| amb.element_order_exp(b)).collect();
    let coords: Vec<Element> = y
        .iter()
        .map(|b| x.coords(b).ok_or(Error::Input("basis element outside subgroup".into())))
        .collect::<Result<_>>()?;
    let top = xo.iter().chain(&yo).copied().max().unwrap_or(0);
    let mut ratio = 1u64;
    for n in 0..top {
        let ix: Vec<usize> = (0..xo.len()).filter(|&i| xo[i] > n).collect();
        let jy: Vec<usize> = (0..yo.len()).filter(|&j| yo[j] > n).collect();
        if ix.len() != jy.len() {
            return Err(Error::Input("bases have different graded dimensions".into()));
        }
        let m: Vec<Vec<u64>> = jy
            .iter()
            .map(|&j| ix.iter().map(|&i| coords[j][i] % p).collect())
            .collect();
        ratio = mul_mod(ratio, det_mod_p(m, p), p);
    }
    if ratio == 0 {
        return Err(Error::Input("not a basis".into()));
    }
    Ok(ratio)
}

/// Π_n det(gr_n φ) for an automorphism φ.
pub fn det_automorphism(phi: &Hom) -> Result<u64> {
    if !phi.is_automorphism() {
        return Err(Error::NotInvertible);
    }
    let a = phi.src();
    orient_ratio(&Presentation::standard(a), phi.images())
}

/// Level and leading vector of each step of a composition series.
struct Step {
    level: u32,
    lead: Vec<u64>,
    scale: u64,
}

/// The value R(c) of the series 0 ⊂ ⟨c1⟩ ⊂ ⟨c1,c2⟩ ⊂ … (each step of index p)
/// against the standard element ⊗_n std(gr_n A), gr_0 first.
///
/// Step i contributes to exactly one gr_ℓ; its leading vector is the image in
/// gr_ℓ of some x ∈ C_i ∩ p^ℓA with x ≡ μ c_i mod C_{i-1}. The value is
/// Π μ_i^{-1} · Π_ℓ (wedge of the leading vectors at level ℓ) times the Koszul
/// sign of sorting the steps by level.
pub fn series_value(a: &AbelianGroup, series: &[Element]) -> Result<u64> {
    let p = a.p();
    let top = a.max_exp();
    if series.len() != a.len() as usize {
        return Err(Error::Input("series has the wrong length".into()));
    }
    let powers: Vec<Subgroup> = (0..=top)
        .map(|h| Subgroup::full(a).scaled(ipow(p, h)))
        .collect();
    let mut prev = Subgroup::zero(a);
    let mut prev_dims = vec![0u32; top as usize + 1];
    let mut steps: Vec<Step> = Vec::with_capacity(series.len());
    for c in series {
        let cur = prev.sum(&Subgroup::from_generators(a, std::slice::from_ref(c)))?;
        if cur.len() != prev.len() + 1 {
            return Err(Error::Input("series step is not of index p".into()));
        }
        let dims: Vec<u32> = powers
            .iter()
            .map(|f| cur.intersect(f).map(|s| s.len()))
            .collect::<Result<_>>()?;
        let level = (0..top as usize)
            .find(|&h| dims[h] - dims[h + 1] != prev_dims[h] - prev_dims[h + 1])
            .ok_or(Error::Input("series step has no level".into()))? as u32;
        let lower = prev
            .intersect(&powers[level as usize])?
            .sum(&powers[level as usize + 1])?;
        let x = cur
            .intersect(&powers[level as usize])?
            .generators()
            .into_iter()
            .find(|g| !lower.contains(g))
            .ok_or(Error::Input("no leading element".into()))?;
        let mu = (1..p)
            .find(|&m| prev.contains(&a.sub(&x, &a.scale(m, c))))
            .ok_or(Error::Input("leading element outside the step".into()))?;
        let pl = ipow(p, level);
        let lead = (0..a.rank())
            .filter(|&j| a.exponents()[j] > level)
            .map(|j| x[j] / pl % p)
            .collect();
        steps.push(Step { level, lead, scale: mu });
        prev = cur;
        prev_dims = dims;
    }
    let mut value = 1u64;
    let mut inversions = 0usize;
    for (i, s) in steps.iter().enumerate() {
        value = mul_mod(value, inv_mod(s.scale, p).unwrap(), p);
        inversions += steps[..i].iter().filter(|t| t.level > s.level).count();
    }
    for level in 0..top {
        let rows: Vec<Vec<u64>> = steps
            .iter()
            .filter(|s| s.level == level)
            .map(|s| s.lead.clone())
            .collect();
        if !rows.is_empty() {
            value = mul_mod(value, det_mod_p(rows, p), p);
        }
    }
    if value == 0 {
        return Err(Error::Input("series is not a composition series".into()));
    }
    if inversions % 2 == 1 {
        value = p - value;
    }
    Ok(value)
}

/// The composition series of the standard basis: p^{N-1}A first, down to gr_0.
pub fn standard_series(a: &AbelianGroup) -> Vec<Element> {
    let mut out = Vec::with_capacity(a.len() as usize);
    for h in (0..a.max_exp()).rev() {
        for j in 0..a.rank() {
            if a.exponents()[j] > h {
                out.push(a.scale(ipow(a.p(), h), &a.basis_vector(j)));
            }
        }
    }
    out
}

/// The scalar λ with {Σ}(std A) = λ · std K ⊗ std Q for the exact sequence
/// 0 → K --inc--> A --proj--> Q → 0 of sorted groups with standard bases.
pub fn exact_sequence_factor(inc: &Hom, proj: &Hom) -> Result<u64> {
    let (k, a, q) = (inc.src(), inc.dst(), proj.dst());
    let p = a.p();
    if proj.src() != a {
        return Err(Error::InconsistentQuotient("maps do not compose".into()));
    }
    if !inc.is_injective() {
        return Err(Error::InconsistentQuotient("first map is not injective".into()));
    }
    if proj.image(&Subgroup::full(a)) != Subgroup::full(q) {
        return Err(Error::InconsistentQuotient("second map is not surjective".into()));
    }
    if k.len() + q.len() != a.len() || !inc.images().iter().all(|x| proj.apply(x).iter().all(|&c| c == 0)) {
        return Err(Error::InconsistentQuotient("sequence is not exact".into()));
    }
    let sk = standard_series(k);
    let sq = standard_series(q);
    let mut series: Vec<Element> = sk.iter().map(|x| inc.apply(x)).collect();
    for y in &sq {
        series.push(proj.solve(y).ok_or(Error::InconsistentQuotient("no lift".into()))?);
    }
    let ra = series_value(a, &series)?;
    let rk = series_value(k, &sk)?;
    let rq = series_value(q, &sq)?;
    Ok(mul_mod(mul_mod(rk, rq, p), inv_mod(ra, p).unwrap(), p))
}

/// det(b)(oA ⊗ oB) ∈ F_p^× for a perfect pairing b on sorted groups A ⊗ B,
/// where `psi` is the multiplier of the fixed additive character of F_p.
pub fn det_pairing(b: &Pairing, o_a: Orientation, o_b: Orientation, psi: u64) -> Result<u64> {
    let (a, bg) = (b.left(), b.right());
    let p = a.p();
    if !b.is_perfect() {
        return Err(Error::NotPerfect);
    }
    let scalars = mul_mod(o_a.scalar % p, o_b.scalar % p, p);
    if scalars == 0 {
        return Err(Error::Input("orientation scalar is zero".into()));
    }
    if a.is_empty() {
        return Ok(scalars);
    }
    let level = b.level();
    let rmap = b.right_map();
    let mut dual: Vec<Element> = Vec::with_capacity(a.rank());
    for j in 0..a.rank() {
        let target: Vec<u64> = (0..a.rank())
            .map(|i| {
                if i == j {
                    psi % p * ipow(p, level - a.exponents()[i])
                } else {
                    0
                }
            })
            .collect();
        dual.push(rmap.solve(&target).ok_or(Error::NotPerfect)?);
    }
    dual.reverse();
    let ratio = orient_ratio(&Presentation::standard(bg), &dual)?;
    let mut out = mul_mod(scalars, inv_mod(ratio, p).unwrap(), p);
    if shape_sign(a) {
        out = p - out;
    }
    Ok(out)
}

/// Whether reversing within each graded piece and reversing the odd-length
/// cyclic factors as a whole differ by a sign.
fn shape_sign(a: &AbelianGroup) -> bool {
    let odd = a.exponents().iter().filter(|&&e| e % 2 == 1).count();
    let mut flips = odd * odd.saturating_sub(1) / 2;
    for n in 0..a.max_exp() {
        let d = a.exponents().iter().filter(|&&e| e > n).count();
        flips += d * d.saturating_sub(1) / 2;
    }
    flips % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::quotient;

    fn g(p: u64, e: &[u32]) -> AbelianGroup {
        AbelianGroup::new(p, e.to_vec()).unwrap()
    }

    #[test]
    fn filtration_dimensions() {
        let dims = |e: &[u32]| -> Vec<usize> {
            canonical_filtration(&g(3, e)).iter().map(|x| x.dim()).collect()
        };
        assert_eq!(dims(&[1, 1]), vec![2]);
        assert_eq!(dims(&[2]), vec![1, 1]);
        assert_eq!(dims(&[2, 1]), vec![2, 1]);
    }

    #[test]
    fn automorphism_determinants() {
        let z9 = g(3, &[2]);
        assert_eq!(det_automorphism(&Hom::identity(&z9)).unwrap(), 1);
        let two = Hom::new(&z9, &z9, vec![vec![2]]).unwrap();
        assert_eq!(det_automorphism(&two).unwrap(), 1);
        let plane = g(3, &[1, 1]);
        let swap = Hom::new(&plane, &plane, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(det_automorphism(&swap).unwrap(), 2);
        let three = Hom::new(&z9, &z9, vec![vec![3]]).unwrap();
        assert_eq!(det_automorphism(&three), Err(Error::NotInvertible));
    }

    #[test]
    fn trivial_kernel_gives_one() {
        let a = g(3, &[2, 1]);
        let k = AbelianGroup::trivial(3);
        let inc = Hom::new(&k, &a, vec![]).unwrap();
        assert_eq!(exact_sequence_factor(&inc, &Hom::identity(&a)).unwrap(), 1);
        let s = Subgroup::zero(&a);
        let q = quotient(&a, &s).unwrap();
        let lam = exact_sequence_factor(&inc, &q.projection).unwrap();
        assert_eq!(lam, inv_mod(det_automorphism_between(&q.projection), 3).unwrap());
    }

    fn det_automorphism_between(phi: &Hom) -> u64 {
        orient_ratio(&Presentation::standard(phi.src()), phi.images()).unwrap()
    }

    #[test]
    fn split_sequences() {
        let a = g(5, &[1, 1]);
        let k = g(5, &[1]);
        let inc1 = Hom::new(&k, &a, vec![vec![1, 0]]).unwrap();
        let pr1 = Hom::new(&a, &k, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(exact_sequence_factor(&inc1, &pr1).unwrap(), 1);
        let inc2 = Hom::new(&k, &a, vec![vec![0, 1]]).unwrap();
        let pr2 = Hom::new(&a, &k, vec![vec![1], vec![0]]).unwrap();
        assert_eq!(exact_sequence_factor(&inc2, &pr2).unwrap(), 4);
    }

    #[test]
    fn z9_over_3z9() {
        let z9 = g(3, &[2]);
        let z3 = g(3, &[1]);
        let inc = Hom::new(&z3, &z9, vec![vec![3]]).unwrap();
        let pr = Hom::new(&z9, &z3, vec![vec![1]]).unwrap();
        let lam = exact_sequence_factor(&inc, &pr).unwrap();
        assert!(lam == 1 || lam == 2);
    }

    #[test]
    fn non_exact_input_is_rejected() {
        let z9 = g(3, &[2]);
        let z3 = g(3, &[1]);
        let inc = Hom::new(&z3, &z9, vec![vec![3]]).unwrap();
        let bad = Hom::new(&z9, &z3, vec![vec![0]]).unwrap();
        assert!(exact_sequence_factor(&inc, &bad).is_err());
    }

    #[test]
    fn one_dimensional_pairing() {
        let a = g(5, &[1]);
        let b = Pairing::new(&a, &a, 1, vec![vec![1]]).unwrap();
        let one = Orientation { scalar: 1 };
        assert_eq!(det_pairing(&b, one, one, 1).unwrap(), 1);
        assert_eq!(det_pairing(&b, Orientation { scalar: 3 }, one, 1).unwrap(), 3);
    }

    #[test]
    fn diagonal_forms_match_discriminant_formula() {
        // δ(<a1..ad>) = (-1)^{d(d-1)/2} Π a_i
        let p = 7;
        let a = g(p, &[1, 1, 1]);
        let diag = [3u64, 5, 6];
        let m: Vec<Vec<u64>> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { diag[i] } else { 0 }).collect())
            .collect();
        let b = Pairing::new(&a, &a, 1, m).unwrap();
        let one = Orientation { scalar: 1 };
        let expected = (p - 1) * 3 * 5 * 6 % p; // d = 3: sign (-1)^3
        assert_eq!(det_pairing(&b, one, one, 1).unwrap(), expected);
    }

    #[test]
    fn hyperbolic_plane_over_f3() {
        let a = g(3, &[1, 1]);
        let b = Pairing::new(&a, &a, 1, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let one = Orientation { scalar: 1 };
        // dual basis v1 = e2, v2 = e1; orient(v2, v1) = e1 ∧ e2 = std
        assert_eq!(det_pairing(&b, one, one, 1).unwrap(), 1);
    }

    #[test]
    fn degenerate_pairing_rejected() {
        let a = g(3, &[1, 1]);
        let b = Pairing::new(&a, &a, 1, vec![vec![1, 0], vec![0, 0]]).unwrap();
        let one = Orientation { scalar: 1 };
        assert_eq!(det_pairing(&b, one, one, 1), Err(Error::NotPerfect));
    }
}
