//! Bundled example rings with their default functionals.

use crate::abelian::{AbelianGroup, GroupCharacter};
use crate::liering::{BracketEntry, LieRing};

fn entry(i: usize, j: usize, value: Vec<u64>) -> BracketEntry {
    BracketEntry { i, j, value }
}

fn build(p: u64, exponents: Vec<u32>, brackets: &[BracketEntry], f: Vec<u64>) -> (LieRing, GroupCharacter) {
    let carrier = AbelianGroup::new(p, exponents).expect("bundled carrier");
    let ring = LieRing::new(&carrier, brackets).expect("bundled ring");
    let f = GroupCharacter::new(&carrier, f).expect("bundled functional");
    (ring, f)
}

/// (Z/p^e)² ⊕ Z/p^e with [g1, g2] = g3 and f dual to g3.
pub fn heisenberg(p: u64, e: u32) -> (LieRing, GroupCharacter) {
    build(p, vec![e; 3], &[entry(0, 1, vec![0, 0, 1])], vec![0, 0, 1])
}

/// Z/9 ⊕ Z/9 ⊕ Z/9 ⊕ Z/3 ⊕ Z/3 with [g1, g2] = g3, [g4, g5] = 3 g3.
pub fn heisenberg_mixed() -> (LieRing, GroupCharacter) {
    build(
        3,
        vec![2, 2, 2, 1, 1],
        &[entry(0, 1, vec![0, 0, 1, 0, 0]), entry(3, 4, vec![0, 0, 3, 0, 0])],
        vec![0, 0, 1, 0, 0],
    )
}

/// Strictly upper triangular 4×4 matrices over F_p with basis
/// E12, E13, E14, E23, E24, E34 and f dual to E14.
pub fn ut4(p: u64) -> (LieRing, GroupCharacter) {
    let unit = |k: usize| {
        let mut v = vec![0; 6];
        v[k] = 1;
        v
    };
    build(
        p,
        vec![1; 6],
        &[
            entry(0, 3, unit(1)),
            entry(0, 4, unit(2)),
            entry(1, 5, unit(2)),
            entry(3, 5, unit(4)),
        ],
        vec![0, 0, 1, 0, 0, 0],
    )
}

/// The abelian ring Z/9 ⊕ Z/3.
pub fn abelian_27() -> (LieRing, GroupCharacter) {
    build(3, vec![2, 1], &[], vec![1, 1])
}

/// Bundled names with their rings, in a fixed order.
pub fn all() -> Vec<(&'static str, LieRing, GroupCharacter)> {
    let mut out = Vec::new();
    for (name, (r, f)) in [
        ("heisenberg_3", heisenberg(3, 1)),
        ("heisenberg_9", heisenberg(3, 2)),
        ("heisenberg_mixed", heisenberg_mixed()),
        ("ut4_5", ut4(5)),
        ("abelian_27", abelian_27()),
    ] {
        out.push((name, r, f));
    }
    out
}

pub fn by_name(name: &str) -> Option<(LieRing, GroupCharacter)> {
    all().into_iter().find(|(n, _, _)| *n == name).map(|(_, r, f)| (r, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        let classes: Vec<usize> = all().iter().map(|(_, r, _)| r.class()).collect();
        assert_eq!(classes, vec![2, 2, 2, 3, 1]);
        assert_eq!(ut4(5).0.lower_central_series_report().lower_central_series, vec![6, 3, 1, 0]);
    }
}
