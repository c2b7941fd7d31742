use crate::nary_core::AssocViolation;
use crate::{Error, Result};

use super::{check_nsg_associativity, NSemigroupTable};

/// A ternary operation with an inverse map `g ↦ ḡ`; the axioms are checked
/// by [`check_ternary_group`], not on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryGroup {
    table: NSemigroupTable,
    inverse: Vec<usize>,
}

impl TernaryGroup {
    pub fn new(table: NSemigroupTable, inverse: Vec<usize>) -> Result<Self> {
        if table.arity() != 3 {
            return Err(Error::Arity { expected: 3, found: table.arity() });
        }
        if inverse.len() != table.size() {
            return Err(Error::DimensionMismatch { expected: table.size(), found: inverse.len() });
        }
        if inverse.iter().any(|&i| i >= table.size()) {
            return Err(Error::Invalid("inverse value out of range".into()));
        }
        Ok(TernaryGroup { table, inverse })
    }

    pub fn table(&self) -> &NSemigroupTable {
        &self.table
    }

    pub fn name(&self) -> &str {
        self.table.name()
    }

    pub fn size(&self) -> usize {
        self.table.size()
    }

    pub fn elements(&self) -> &[String] {
        self.table.elements()
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverse
    }

    pub fn m(&self, a: usize, b: usize, c: usize) -> usize {
        self.table.op(&[a, b, c])
    }
}

/// Outcome of [`check_ternary_group`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryReport {
    pub associativity: Option<AssocViolation>,
    /// First `(g, h)` with `m(g, ḡ, h) ≠ h` or `m(h, g, ḡ) ≠ h`.
    pub inverse_violation: Option<(usize, usize)>,
}

impl TernaryReport {
    pub fn pass(&self) -> bool {
        self.associativity.is_none() && self.inverse_violation.is_none()
    }
}

pub fn check_ternary_group(g: &TernaryGroup) -> Result<TernaryReport> {
    let associativity = check_nsg_associativity(&g.table)?.witness;
    let k = g.size();
    let inverse_violation = (0..k)
        .flat_map(|x| (0..k).map(move |h| (x, h)))
        .find(|&(x, h)| g.m(x, g.inverse[x], h) != h || g.m(h, x, g.inverse[x]) != h);
    Ok(TernaryReport { associativity, inverse_violation })
}

/// Outcome of [`conjugation_hom_check`] for `φ(h) = m(ḡ, h, g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationReport {
    pub element: usize,
    pub map: Vec<usize>,
    pub homomorphism: bool,
    pub injective: bool,
    pub bijective: bool,
    /// `h ↦ m(g, h, ḡ)` is a two-sided inverse of `φ`.
    pub inverse_map_ok: bool,
    pub is_identity: bool,
}

impl ConjugationReport {
    pub fn pass(&self) -> bool {
        self.homomorphism && self.injective && self.bijective && self.inverse_map_ok
    }
}

pub fn conjugation_hom_check(g: &TernaryGroup, element: usize) -> Result<ConjugationReport> {
    let k = g.size();
    if element >= k {
        return Err(Error::Invalid(format!("element index {element} out of range")));
    }
    let gi = g.inverse[element];
    let map: Vec<usize> = (0..k).map(|h| g.m(gi, h, element)).collect();
    let back: Vec<usize> = (0..k).map(|h| g.m(element, h, gi)).collect();
    let homomorphism = (0..k).all(|a| {
        (0..k).all(|b| (0..k).all(|c| map[g.m(a, b, c)] == g.m(map[a], map[b], map[c])))
    });
    let mut seen = vec![false; k];
    let injective = map.iter().all(|&v| !std::mem::replace(&mut seen[v], true));
    let bijective = injective && seen.iter().all(|&s| s);
    let inverse_map_ok = (0..k).all(|h| back[map[h]] == h && map[back[h]] == h);
    let is_identity = map.iter().enumerate().all(|(h, &v)| h == v);
    Ok(ConjugationReport { element, map, homomorphism, injective, bijective, inverse_map_ok, is_identity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nsemigroup::{graded_group_ternary, odd_residues_product, odd_residues_sum, GroupTable};

    pub(crate) fn odds_additive(m: usize) -> TernaryGroup {
        let t = odd_residues_sum(m, 3).unwrap();
        let inverse = (0..t.size()).map(|i| t.element_index(&((m - (2 * i + 1)) % m).to_string()).unwrap()).collect();
        TernaryGroup::new(t, inverse).unwrap()
    }

    fn odds_multiplicative_8() -> TernaryGroup {
        // every odd residue mod 8 is its own inverse
        TernaryGroup::new(odd_residues_product(8, 3).unwrap(), vec![0, 1, 2, 3]).unwrap()
    }

    #[test]
    fn residue_examples_pass() {
        for k in 1..=4 {
            let g = odds_additive(2 * k);
            assert!(check_ternary_group(&g).unwrap().pass(), "mod {}", 2 * k);
            for e in 0..g.size() {
                let r = conjugation_hom_check(&g, e).unwrap();
                assert!(r.pass() && r.is_identity);
            }
        }
        let g = odds_multiplicative_8();
        assert!(check_ternary_group(&g).unwrap().pass());
        assert!(conjugation_hom_check(&g, 1).unwrap().is_identity);
    }

    #[test]
    fn permuted_inverse_fails() {
        let g = odds_additive(8);
        let mut inv = g.inverses().to_vec();
        inv.rotate_left(1);
        let bad = TernaryGroup::new(g.table().clone(), inv).unwrap();
        let r = check_ternary_group(&bad).unwrap();
        assert!(!r.pass());
        let (x, h) = r.inverse_violation.unwrap();
        assert!(bad.m(x, bad.inverse(x), h) != h || bad.m(h, x, bad.inverse(x)) != h);
    }

    #[test]
    fn dihedral_reflections() {
        let d4 = GroupTable::dihedral(4);
        let grading: Vec<usize> = (0..8).map(|x| usize::from(d4.labels()[x].starts_with('s'))).collect();
        let g = graded_group_ternary(&d4, &grading).unwrap();
        assert_eq!(g.size(), 4);
        assert!(check_ternary_group(&g).unwrap().pass());
        let reports: Vec<ConjugationReport> = (0..4).map(|e| conjugation_hom_check(&g, e).unwrap()).collect();
        assert!(reports.iter().all(ConjugationReport::pass));
        assert!(reports.iter().any(|r| !r.is_identity));
    }
}
