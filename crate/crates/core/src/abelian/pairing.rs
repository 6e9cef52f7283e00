use serde::{Deserialize, Serialize};

use super::{AbelianGroup, Element, Hom, Subgroup};
use crate::error::{Error, Result};
use crate::modular::{ipow, neg_mod};
use crate::scalars::RootOfUnity;

/// x ↦ ζ_{p^E}^{Σ c_i x_i p^{E-e_i}}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupCharacter {
    group: AbelianGroup,
    coeffs: Vec<u64>,
}

impl GroupCharacter {
    pub fn new(group: &AbelianGroup, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != group.rank() {
            return Err(Error::Input("character has the wrong number of coefficients".into()));
        }
        let coeffs = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c % group.modulus(i))
            .collect();
        Ok(GroupCharacter {
            group: group.clone(),
            coeffs,
        })
    }

    pub fn trivial(group: &AbelianGroup) -> Self {
        GroupCharacter {
            group: group.clone(),
            coeffs: group.zero(),
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn level(&self) -> u32 {
        self.group.max_exp()
    }

    /// Exponent of the value at level p^E.
    pub fn eval_exp(&self, x: &[u64]) -> u64 {
        let e = self.level();
        let q = ipow(self.group.p(), e);
        let mut acc = 0u128;
        for (i, (&c, &a)) in self.coeffs.iter().zip(x).enumerate() {
            let s = ipow(self.group.p(), e - self.group.exponents()[i]);
            acc += c as u128 * a as u128 % q as u128 * s as u128;
        }
        (acc % q as u128) as u64
    }

    pub fn value(&self, x: &[u64]) -> RootOfUnity {
        RootOfUnity::new(ipow(self.group.p(), self.level()), self.eval_exp(x) as i64)
    }

    /// The character as a morphism to Z/p^E.
    pub fn as_hom(&self) -> Hom {
        let e = self.level().max(1);
        let target = AbelianGroup::raw(self.group.p(), vec![e]);
        let images = (0..self.group.rank())
            .map(|i| vec![self.eval_exp(&self.group.basis_vector(i))])
            .collect();
        Hom::new(&self.group, &target, images).expect("character is additive")
    }

    pub fn kernel(&self) -> Subgroup {
        self.as_hom().kernel()
    }
}

/// A bi-additive map A ⊗ B → μ_{p^L}, b(g_i, h_j) = ζ_{p^L}^{M_ij}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    left: AbelianGroup,
    right: AbelianGroup,
    level: u32,
    matrix: Vec<Vec<u64>>,
}

impl Pairing {
    pub fn new(
        left: &AbelianGroup,
        right: &AbelianGroup,
        level: u32,
        matrix: Vec<Vec<u64>>,
    ) -> Result<Self> {
        let level = level.max(1);
        let q = ipow(left.p(), level);
        if matrix.len() != left.rank() || matrix.iter().any(|r| r.len() != right.rank()) {
            return Err(Error::Input("pairing matrix has the wrong shape".into()));
        }
        let matrix: Vec<Vec<u64>> = matrix
            .into_iter()
            .map(|r| r.into_iter().map(|x| x % q).collect())
            .collect();
        for (i, row) in matrix.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let ok_l = (x as u128 * left.modulus(i) as u128) % q as u128 == 0;
                let ok_r = (x as u128 * right.modulus(j) as u128) % q as u128 == 0;
                if !ok_l || !ok_r {
                    return Err(Error::Input(format!("pairing entry ({i},{j}) is not bi-additive")));
                }
            }
        }
        Ok(Pairing {
            left: left.clone(),
            right: right.clone(),
            level,
            matrix,
        })
    }

    /// Builds the pairing from an evaluation function on basis pairs.
    pub fn from_fn(
        left: &AbelianGroup,
        right: &AbelianGroup,
        level: u32,
        f: impl Fn(&Element, &Element) -> u64,
    ) -> Result<Self> {
        let matrix = (0..left.rank())
            .map(|i| {
                (0..right.rank())
                    .map(|j| f(&left.basis_vector(i), &right.basis_vector(j)))
                    .collect()
            })
            .collect();
        Pairing::new(left, right, level, matrix)
    }

    /// The standard skew form on a group whose basis comes in pairs of equal
    /// order: b(g_{2t}, g_{2t+1}) = ζ of that order.
    pub fn hyperbolic(a: &AbelianGroup) -> Result<Self> {
        let k = a.rank();
        let e = a.exponents();
        if k % 2 != 0 || (0..k).step_by(2).any(|t| e[t] != e[t + 1]) {
            return Err(Error::Input("basis does not come in pairs of equal order".into()));
        }
        let level = a.max_exp();
        let q = ipow(a.p(), level);
        let mut m = vec![vec![0; k]; k];
        for t in (0..k).step_by(2) {
            let w = ipow(a.p(), level - e[t]);
            m[t][t + 1] = w;
            m[t + 1][t] = q - w;
        }
        Pairing::new(a, a, level, m)
    }

    pub fn left(&self) -> &AbelianGroup {
        &self.left
    }

    pub fn right(&self) -> &AbelianGroup {
        &self.right
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn modulus(&self) -> u64 {
        ipow(self.left.p(), self.level)
    }

    pub fn eval(&self, x: &[u64], y: &[u64]) -> u64 {
        let q = self.modulus() as u128;
        let mut acc = 0u128;
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut inner = 0u128;
            for (j, &b) in y.iter().enumerate() {
                if b != 0 {
                    inner += self.matrix[i][j] as u128 * b as u128 % q;
                }
            }
            acc += a as u128 * (inner % q) % q;
        }
        (acc % q) as u64
    }

    pub fn is_symmetric(&self) -> bool {
        self.left == self.right
            && (0..self.left.rank())
                .all(|i| (0..i).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    pub fn is_skew(&self) -> bool {
        let q = self.modulus();
        self.left == self.right
            && (0..self.left.rank()).all(|i| {
                self.matrix[i][i] == 0
                    && (0..i).all(|j| self.matrix[i][j] == neg_mod(self.matrix[j][i], q))
            })
    }

    /// x ↦ (b(x, h_j))_j.
    pub fn left_map(&self) -> Hom {
        let target = AbelianGroup::raw(self.left.p(), vec![self.level; self.right.rank()]);
        Hom::new(&self.left, &target, self.matrix.clone()).expect("bi-additive")
    }

    /// y ↦ (b(g_i, y))_i.
    pub fn right_map(&self) -> Hom {
        let target = AbelianGroup::raw(self.left.p(), vec![self.level; self.left.rank()]);
        let images = (0..self.right.rank())
            .map(|j| (0..self.left.rank()).map(|i| self.matrix[i][j]).collect())
            .collect();
        Hom::new(&self.right, &target, images).expect("bi-additive")
    }

    pub fn is_perfect(&self) -> bool {
        self.left.order() == self.right.order()
            && self.left_map().is_injective()
            && self.right_map().is_injective()
    }

    /// {y ∈ B : b(s, y) = 1 for all s ∈ S}.
    pub fn perp(&self, s: &Subgroup) -> Result<Subgroup> {
        if s.ambient() != &self.left {
            return Err(Error::AmbientMismatch);
        }
        let gens = s.generators();
        if gens.is_empty() {
            return Ok(Subgroup::full(&self.right));
        }
        let target = AbelianGroup::raw(self.left.p(), vec![self.level; gens.len()]);
        let images = (0..self.right.rank())
            .map(|j| {
                let h = self.right.basis_vector(j);
                gens.iter().map(|g| self.eval(g, &h)).collect()
            })
            .collect();
        Ok(Hom::new(&self.right, &target, images)?.kernel())
    }

    /// {x ∈ A : b(x, t) = 1 for all t ∈ T}.
    pub fn left_perp(&self, t: &Subgroup) -> Result<Subgroup> {
        self.transpose().perp(t)
    }

    pub fn transpose(&self) -> Pairing {
        let matrix = (0..self.right.rank())
            .map(|j| (0..self.left.rank()).map(|i| self.matrix[i][j]).collect())
            .collect();
        Pairing {
            left: self.right.clone(),
            right: self.left.clone(),
            level: self.level,
            matrix,
        }
    }

    /// The same groups with the inverse pairing.
    pub fn opposite(&self) -> Pairing {
        let q = self.modulus();
        Pairing {
            left: self.left.clone(),
            right: self.right.clone(),
            level: self.level,
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|&x| neg_mod(x, q)).collect())
                .collect(),
        }
    }

    /// Orthogonal direct sum of two forms on A ⊗ A and A' ⊗ A'.
    pub fn orthogonal_sum(&self, other: &Pairing) -> Pairing {
        let level = self.level.max(other.level);
        let lift = |pr: &Pairing, x: u64| x * ipow(pr.left.p(), level - pr.level);
        let (n1, n2) = (self.left.rank(), other.left.rank());
        let (m1, m2) = (self.right.rank(), other.right.rank());
        let mut matrix = vec![vec![0u64; m1 + m2]; n1 + n2];
        for i in 0..n1 {
            for j in 0..m1 {
                matrix[i][j] = lift(self, self.matrix[i][j]);
            }
        }
        for i in 0..n2 {
            for j in 0..m2 {
                matrix[n1 + i][m1 + j] = lift(other, other.matrix[i][j]);
            }
        }
        Pairing {
            left: self.left.direct_sum(&other.left),
            right: self.right.direct_sum(&other.right),
            level,
            matrix,
        }
    }

    /// Is S isotropic: b(s, t) = 1 on S × S.
    pub fn is_isotropic(&self, s: &Subgroup) -> bool {
        let gens = s.generators();
        gens.iter()
            .all(|x| gens.iter().all(|y| self.eval(x, y) == 0))
    }

    /// Is L = L^⊥.
    pub fn is_lagrangian(&self, l: &Subgroup) -> bool {
        self.perp(l).map(|lp| &lp == l).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z9z9_symplectic() -> Pairing {
        let a = AbelianGroup::new(3, vec![2, 2]).unwrap();
        Pairing::new(&a, &a, 2, vec![vec![0, 1], vec![8, 0]]).unwrap()
    }

    #[test]
    fn perp_of_zero_and_line() {
        let a = AbelianGroup::new(3, vec![1, 1]).unwrap();
        let w = Pairing::new(&a, &a, 1, vec![vec![0, 1], vec![2, 0]]).unwrap();
        assert!(w.is_skew() && w.is_perfect());
        assert_eq!(w.perp(&Subgroup::zero(&a)).unwrap(), Subgroup::full(&a));
        let line = Subgroup::from_generators(&a, &[vec![1, 0]]);
        assert_eq!(w.perp(&line).unwrap(), line);
    }

    #[test]
    fn perp_in_z9_squared_against_brute_force() {
        let w = z9z9_symplectic();
        let a = w.left().clone();
        let s = Subgroup::from_generators(&a, &[vec![3, 0]]);
        let perp = w.perp(&s).unwrap();
        let brute: Vec<Element> = a.elements().filter(|y| w.eval(&[3, 0], y) == 0).collect();
        assert_eq!(brute.len(), 27);
        assert_eq!(perp.order(), 27);
        assert!(brute.iter().all(|y| perp.contains(y)));
        assert_eq!(perp, Subgroup::from_generators(&a, &[vec![1, 0], vec![0, 3]]));
        assert_eq!(w.perp(&perp).unwrap(), s);
    }

    #[test]
    fn non_additive_entries_are_rejected() {
        let a = AbelianGroup::new(3, vec![2, 1]).unwrap();
        assert!(Pairing::new(&a, &a, 2, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(Pairing::new(&a, &a, 2, vec![vec![0, 3], vec![6, 0]]).is_ok());
    }

    #[test]
    fn character_values() {
        let a = AbelianGroup::new(3, vec![2, 1]).unwrap();
        let chi = GroupCharacter::new(&a, vec![1, 1]).unwrap();
        assert_eq!(chi.eval_exp(&[1, 0]), 1);
        assert_eq!(chi.eval_exp(&[0, 1]), 3);
        assert_eq!(chi.kernel().order(), 3);
    }
}
