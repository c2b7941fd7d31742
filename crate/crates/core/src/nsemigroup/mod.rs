//! Finite n-ary semigroups, their universal graded semigroup envelopes,
//! ternary groups, and a search for embeddings of ternary groups into
//! ℤ₂-graded groups.

mod envelope;
mod groups;
mod ternary;

use std::collections::{BTreeMap, HashSet};

use crate::guard;
use crate::nary_core::{AssocViolation, Tuples};
use crate::{Error, Result};

pub use envelope::{
    build_sg_envelope, default_max_len, sg_stabilization, sg_universality_check, GradedSemigroup, SgClass,
    SgEnvelope, UniversalityReport,
};
pub use groups::{
    canonical_form, enumerate_groups, graded_group_degree1, graded_group_ternary, gradings, search_group_embedding,
    verify_witness, EmbeddingReport, EmbeddingWitness, GroupTable, MAX_SEARCH_ORDER,
};
pub use ternary::{check_ternary_group, conjugation_hom_check, ConjugationReport, TernaryGroup, TernaryReport};

/// A total n-ary operation on a finite set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NSemigroupTable {
    name: String,
    arity: usize,
    elements: Vec<String>,
    /// Indexed by the n-tuple read as a base-`|elements|` number.
    table: Vec<usize>,
}

impl NSemigroupTable {
    /// Fails on a missing tuple, naming it.
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        elements: Vec<String>,
        entries: &BTreeMap<Vec<usize>, usize>,
    ) -> Result<Self> {
        let size = elements.len();
        check_shape(arity, &elements)?;
        guard::check("n-semigroup table", guard::power(size, arity), guard::assoc_budget())?;
        let mut table = Vec::with_capacity(size.pow(arity as u32));
        for t in Tuples::new(size, arity) {
            match entries.get(&t) {
                Some(&v) if v < size => table.push(v),
                Some(&v) => return Err(Error::Invalid(format!("table value {v} out of range"))),
                None => {
                    let labels: Vec<&str> = t.iter().map(|&i| elements[i].as_str()).collect();
                    return Err(Error::Invalid(format!("missing table entry for ({})", labels.join(", "))));
                }
            }
        }
        if entries.keys().any(|k| k.len() != arity || k.iter().any(|&i| i >= size)) {
            return Err(Error::Invalid("table entry with a malformed tuple".into()));
        }
        Ok(NSemigroupTable { name: name.into(), arity, elements, table })
    }

    pub fn from_fn(
        name: impl Into<String>,
        arity: usize,
        elements: Vec<String>,
        op: impl Fn(&[usize]) -> usize,
    ) -> Result<Self> {
        let size = elements.len();
        check_shape(arity, &elements)?;
        guard::check("n-semigroup table", guard::power(size, arity), guard::assoc_budget())?;
        let mut table = Vec::with_capacity(size.pow(arity as u32));
        for t in Tuples::new(size, arity) {
            let v = op(&t);
            if v >= size {
                return Err(Error::Invalid(format!("table value {v} out of range")));
            }
            table.push(v);
        }
        Ok(NSemigroupTable { name: name.into(), arity, elements, table })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_index(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    /// `m(t_1, …, t_n)`.
    pub fn op(&self, t: &[usize]) -> usize {
        debug_assert_eq!(t.len(), self.arity);
        self.table[t.iter().fold(0, |acc, &x| acc * self.size() + x)]
    }

    /// Iterates over `(tuple, value)` in lexicographic order of tuples.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, usize)> + '_ {
        Tuples::new(self.size(), self.arity).zip(self.table.iter().copied())
    }

    /// Leftmost evaluation of a word of length `≡ 1 mod n−1`.
    pub fn evaluate(&self, word: &[usize]) -> Option<usize> {
        let n = self.arity;
        if word.is_empty() || (word.len() - 1) % (n - 1) != 0 {
            return None;
        }
        let mut acc = word[0];
        let mut buf = vec![0; n];
        for chunk in word[1..].chunks(n - 1) {
            buf[0] = acc;
            buf[1..].copy_from_slice(chunk);
            acc = self.op(&buf);
        }
        Some(acc)
    }
}

fn check_shape(arity: usize, elements: &[String]) -> Result<()> {
    if arity < 2 {
        return Err(Error::Invalid(format!("arity must be at least 2, got {arity}")));
    }
    if elements.is_empty() {
        return Err(Error::Invalid("an n-semigroup needs at least one element".into()));
    }
    let mut seen = HashSet::new();
    if let Some(e) = elements.iter().find(|e| !seen.insert(e.as_str())) {
        return Err(Error::Invalid(format!("duplicate element `{e}`")));
    }
    Ok(())
}

/// Outcome of [`check_nsg_associativity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NsgAssocReport {
    pub pass: bool,
    pub witness: Option<AssocViolation>,
}

/// Exhaustive check that all placements of the inner product in a
/// (2n−1)-tuple agree.
pub fn check_nsg_associativity(t: &NSemigroupTable) -> Result<NsgAssocReport> {
    let n = t.arity;
    guard::check("n-semigroup associativity", guard::power(t.size(), 2 * n - 1), guard::assoc_budget())?;
    let mut outer = vec![0; n];
    for tuple in Tuples::new(t.size(), 2 * n - 1) {
        let mut first = None;
        for p in 0..n {
            outer[..p].copy_from_slice(&tuple[..p]);
            outer[p] = t.op(&tuple[p..p + n]);
            outer[p + 1..].copy_from_slice(&tuple[p + n..]);
            let v = t.op(&outer);
            match first {
                None => first = Some(v),
                Some(f) if f != v => {
                    return Ok(NsgAssocReport {
                        pass: false,
                        witness: Some(AssocViolation { tuple, i: 1, j: p + 1 }),
                    })
                }
                Some(_) => {}
            }
        }
    }
    Ok(NsgAssocReport { pass: true, witness: None })
}

fn residue_labels(values: &[usize]) -> Vec<String> {
    values.iter().map(usize::to_string).collect()
}

/// Odd residues mod `m` (even `m`) under the n-fold product.
pub fn odd_residues_product(m: usize, n: usize) -> Result<NSemigroupTable> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::Invalid(format!("modulus must be even and at least 2, got {m}")));
    }
    let odds: Vec<usize> = (1..m).step_by(2).collect();
    let index = |v: usize| (v - 1) / 2;
    NSemigroupTable::from_fn(format!("odds{m}_mul"), n, residue_labels(&odds), |t| {
        index(t.iter().fold(1, |acc, &i| acc * odds[i] % m))
    })
}

/// Odd residues mod `m` (even `m`) under the n-fold sum (odd `n`).
pub fn odd_residues_sum(m: usize, n: usize) -> Result<NSemigroupTable> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::Invalid(format!("modulus must be even and at least 2, got {m}")));
    }
    if n % 2 == 0 {
        return Err(Error::Invalid(format!("a sum of {n} odd residues is even")));
    }
    let odds: Vec<usize> = (1..m).step_by(2).collect();
    NSemigroupTable::from_fn(format!("odds{m}_add"), n, residue_labels(&odds), |t| {
        (t.iter().map(|&i| odds[i]).sum::<usize>() % m - 1) / 2
    })
}

/// The one-element n-semigroup.
pub fn trivial_nsemigroup(n: usize) -> NSemigroupTable {
    NSemigroupTable::from_fn("trivial", n, vec!["e".into()], |_| 0).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_tables() {
        let t = odd_residues_product(8, 3).unwrap();
        assert_eq!(t.elements(), ["1", "3", "5", "7"]);
        assert_eq!(t.op(&[1, 2, 3]), t.element_index("1").unwrap()); // 3·5·7 = 105 ≡ 1
        let s = odd_residues_sum(4, 3).unwrap();
        assert_eq!(s.op(&[0, 0, 0]), 1); // 1+1+1 = 3
        assert!(odd_residues_sum(4, 2).is_err());
        assert_eq!(t.evaluate(&[1, 1, 1, 1, 1]), Some(1));
        assert_eq!(t.evaluate(&[1, 1]), None);
    }

    #[test]
    fn associativity_examples() {
        assert!(check_nsg_associativity(&odd_residues_product(8, 3).unwrap()).unwrap().pass);
        assert!(check_nsg_associativity(&trivial_nsemigroup(4)).unwrap().pass);
        let c = NSemigroupTable::from_fn("const", 3, vec!["a".into(), "b".into()], |_| 1).unwrap();
        assert!(check_nsg_associativity(&c).unwrap().pass);
    }

    #[test]
    fn swapped_entry_fails_with_witness() {
        let t = odd_residues_product(8, 3).unwrap();
        let mut entries: BTreeMap<Vec<usize>, usize> = t.entries().collect();
        let (a, b) = (entries[&vec![0, 0, 1]], entries[&vec![0, 0, 2]]);
        entries.insert(vec![0, 0, 1], b);
        entries.insert(vec![0, 0, 2], a);
        let bad = NSemigroupTable::new("bad", 3, t.elements().to_vec(), &entries).unwrap();
        let r = check_nsg_associativity(&bad).unwrap();
        assert!(!r.pass);
        let w = r.witness.unwrap();
        // the witness really disagrees
        let left = bad.op(&[bad.op(&w.tuple[0..3]), w.tuple[3], w.tuple[4]]);
        let p = w.j - 1;
        let mut outer = w.tuple[..p].to_vec();
        outer.push(bad.op(&w.tuple[p..p + 3]));
        outer.extend_from_slice(&w.tuple[p + 3..]);
        assert_ne!(left, bad.op(&outer));
    }

    #[test]
    fn missing_entry_is_named() {
        let mut entries = BTreeMap::new();
        entries.insert(vec![0, 0, 0], 0);
        let err = NSemigroupTable::new("t", 3, vec!["a".into(), "b".into()], &entries).unwrap_err();
        assert_eq!(err, Error::Invalid("missing table entry for (a, a, b)".into()));
    }
}
