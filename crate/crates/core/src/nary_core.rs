//! Finite-dimensional n-ary algebras given by structure constants.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::exactlin::{RowSpace, Scalar, Vector};
use crate::guard;
use crate::{Error, Result};

/// Coefficient field of an algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    /// ℚ
    Rational,
    /// ℚ(ω)
    Cyclotomic,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Rational => "Q",
            Field::Cyclotomic => "Qw",
        })
    }
}

impl Field {
    pub fn admits(&self, c: &Scalar) -> bool {
        matches!(self, Field::Cyclotomic) || c.is_rational()
    }

    /// The smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Rational && other == Field::Rational {
            Field::Rational
        } else {
            Field::Cyclotomic
        }
    }
}

/// An n-linear product `m: A^{⊗n} → A` on a finite basis.
///
/// Tuples missing from the structure-constant table multiply to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NAryAlgebra {
    name: String,
    arity: usize,
    field: Field,
    labels: Vec<String>,
    constants: BTreeMap<Vec<usize>, Vector>,
    generators: Vec<usize>,
}

impl NAryAlgebra {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        field: Field,
        labels: Vec<String>,
        constants: BTreeMap<Vec<usize>, Vector>,
        generators: Option<Vec<usize>>,
    ) -> Result<Self> {
        if arity < 2 {
            return Err(Error::Invalid(format!("arity must be at least 2, got {arity}")));
        }
        if labels.is_empty() {
            return Err(Error::Invalid("an algebra needs at least one basis element".into()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Invalid(format!("duplicate basis label `{l}`")));
            }
        }
        let dim = labels.len();
        let generators = generators.unwrap_or_else(|| (0..dim).collect());
        if let Some(&g) = generators.iter().find(|&&g| g >= dim) {
            return Err(Error::Invalid(format!("generator index {g} out of range")));
        }
        let mut alg = NAryAlgebra {
            name: name.into(),
            arity,
            field,
            labels,
            constants: BTreeMap::new(),
            generators,
        };
        for (tuple, v) in constants {
            alg.set_product(tuple, v)?;
        }
        Ok(alg)
    }

    /// Overwrites one structure constant `m(e_{t_1}, …, e_{t_n})`.
    pub fn set_product(&mut self, tuple: Vec<usize>, value: Vector) -> Result<()> {
        if tuple.len() != self.arity {
            return Err(Error::Arity { expected: self.arity, found: tuple.len() });
        }
        if tuple.iter().any(|&i| i >= self.dim()) || value.extent() > self.dim() {
            return Err(Error::Invalid(format!("structure constant index out of range in {tuple:?}")));
        }
        if let Some((_, c)) = value.iter().find(|(_, c)| !self.field.admits(c)) {
            return Err(Error::Invalid(format!("coefficient {c} is not in {}", self.field)));
        }
        if value.is_zero() {
            self.constants.remove(&tuple);
        } else {
            self.constants.insert(tuple, value);
        }
        Ok(())
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

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Basis indices spanning the generator subspace (the whole basis unless set).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn structure_constants(&self) -> impl Iterator<Item = (&[usize], &Vector)> + '_ {
        self.constants.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// `m(e_{t_1}, …, e_{t_n})`, or `None` for the zero product.
    pub fn basis_product(&self, tuple: &[usize]) -> Option<&Vector> {
        self.constants.get(tuple)
    }

    /// n-linear extension of the structure constants.
    pub fn multiply(&self, args: &[Vector]) -> Result<Vector> {
        if args.len() != self.arity {
            return Err(Error::Arity { expected: self.arity, found: args.len() });
        }
        let mut out = Vector::new();
        if args.iter().any(Vector::is_zero) {
            return Ok(out);
        }
        let supports: Vec<Vec<(usize, &Scalar)>> = args.iter().map(|a| a.iter().collect()).collect();
        let mut pos = vec![0usize; self.arity];
        let mut tuple = vec![0usize; self.arity];
        loop {
            let mut coeff = Scalar::one();
            for (k, &p) in pos.iter().enumerate() {
                let (idx, c) = supports[k][p];
                tuple[k] = idx;
                coeff = &coeff * c;
            }
            if let Some(v) = self.constants.get(&tuple) {
                out.add_scaled(&coeff, v);
            }
            // odometer over the supports
            let mut k = self.arity;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                pos[k] += 1;
                if pos[k] < supports[k].len() {
                    break;
                }
                pos[k] = 0;
            }
        }
    }

    /// Product where slot `k` is the basis vector `tuple[k]`, except slot
    /// `at`, which holds the arbitrary vector `v`.
    pub(crate) fn multiply_with_slot(&self, tuple: &[usize], at: usize, v: &Vector) -> Vector {
        let mut key = tuple.to_vec();
        let mut out = Vector::new();
        for (idx, c) in v.iter() {
            key[at] = idx;
            if let Some(p) = self.constants.get(&key) {
                out.add_scaled(c, p);
            }
        }
        out
    }
}

/// Outcome of [`check_associativity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocReport {
    pub pass: bool,
    pub first_violation: Option<AssocViolation>,
}

/// A (2n−1)-tuple of basis indices on which the compositions with the inner
/// product at 1-based positions `i` and `j` differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocViolation {
    pub tuple: Vec<usize>,
    pub i: usize,
    pub j: usize,
}

/// Iterates over all tuples in `0..base` of the given length, lexicographically.
pub(crate) struct Tuples {
    base: usize,
    cur: Option<Vec<usize>>,
}

impl Tuples {
    pub(crate) fn new(base: usize, len: usize) -> Self {
        let cur = if base == 0 && len > 0 { None } else { Some(vec![0; len]) };
        Tuples { base, cur }
    }
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let cur = self.cur.as_mut().unwrap();
        let mut k = cur.len();
        loop {
            if k == 0 {
                self.cur = None;
                break;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < self.base {
                break;
            }
            cur[k] = 0;
        }
        Some(out)
    }
}

/// Composition `m(a_1, …, m(a_p, …, a_{p+n−1}), …, a_{2n−1})` with the inner
/// product starting at 0-based slot `p`.
fn composition(a: &NAryAlgebra, tuple: &[usize], p: usize) -> Vector {
    let n = a.arity;
    let Some(inner) = a.basis_product(&tuple[p..p + n]) else {
        return Vector::new();
    };
    let mut outer: Vec<usize> = Vec::with_capacity(n);
    outer.extend_from_slice(&tuple[..p]);
    outer.push(0);
    outer.extend_from_slice(&tuple[p + n..]);
    a.multiply_with_slot(&outer, p, inner)
}

/// Exhaustive full-associativity check over all (2n−1)-tuples of basis elements.
pub fn check_associativity(a: &NAryAlgebra) -> Result<AssocReport> {
    let n = a.arity;
    let len = 2 * n - 1;
    guard::check("associativity check", guard::power(a.dim(), len), guard::assoc_budget())?;
    for tuple in Tuples::new(a.dim(), len) {
        let first = composition(a, &tuple, 0);
        for p in 1..n {
            if composition(a, &tuple, p) != first {
                return Ok(AssocReport {
                    pass: false,
                    first_violation: Some(AssocViolation { tuple, i: 1, j: p + 1 }),
                });
            }
        }
    }
    Ok(AssocReport { pass: true, first_violation: None })
}

pub fn require_associative(a: &NAryAlgebra) -> Result<()> {
    let report = check_associativity(a)?;
    match report.first_violation {
        None => Ok(()),
        Some(v) => {
            let labels: Vec<&str> = v.tuple.iter().map(|&i| a.labels[i].as_str()).collect();
            Err(Error::NotAssociative(format!(
                "{}: positions {} and {} disagree on ({})",
                a.name,
                v.i,
                v.j,
                labels.join(", ")
            )))
        }
    }
}

/// The n-ary algebra `m(a_1, …, a_n) = a_1(a_2(⋯ a_n))` of an associative binary algebra.
pub fn nary_from_binary(b: &NAryAlgebra, n: usize) -> Result<NAryAlgebra> {
    if b.arity != 2 {
        return Err(Error::Arity { expected: 2, found: b.arity });
    }
    if n < 2 {
        return Err(Error::Invalid(format!("arity must be at least 2, got {n}")));
    }
    require_associative(b)?;
    guard::check("structure constants", guard::power(b.dim(), n), guard::assoc_budget())?;
    let mut constants = BTreeMap::new();
    for tuple in Tuples::new(b.dim(), n) {
        let mut acc = Vector::unit(tuple[n - 1]);
        for &x in tuple[..n - 1].iter().rev() {
            acc = b.multiply_with_slot(&[x, 0], 1, &acc);
            if acc.is_zero() {
                break;
            }
        }
        if !acc.is_zero() {
            constants.insert(tuple, acc);
        }
    }
    NAryAlgebra::new(
        format!("{}^{n}", b.name),
        n,
        b.field,
        b.labels.clone(),
        constants,
        Some(b.generators.clone()),
    )
}

/// ℚ as a one-dimensional binary algebra with `e·e = e`.
pub fn rationals() -> NAryAlgebra {
    let constants = BTreeMap::from([(vec![0, 0], Vector::unit(0))]);
    NAryAlgebra::new("Q", 2, Field::Rational, vec!["e".into()], constants, None).expect("valid")
}

/// The full matrix algebra M_k(ℚ) with basis `E{i}{j}` (1-based).
pub fn matrix_algebra(k: usize) -> NAryAlgebra {
    assert!(k >= 1);
    let label = |i: usize, j: usize| {
        if k <= 9 {
            format!("E{}{}", i + 1, j + 1)
        } else {
            format!("E{}_{}", i + 1, j + 1)
        }
    };
    let mut labels = Vec::new();
    for i in 0..k {
        for j in 0..k {
            labels.push(label(i, j));
        }
    }
    let mut constants = BTreeMap::new();
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                constants.insert(vec![i * k + j, j * k + l], Vector::unit(i * k + l));
            }
        }
    }
    NAryAlgebra::new(format!("M{k}"), 2, Field::Rational, labels, constants, None).expect("valid")
}

/// The algebra of dimension `dim` whose n-ary product is identically zero.
pub fn zero_algebra(n: usize, dim: usize) -> NAryAlgebra {
    let labels = (1..=dim).map(|i| format!("z{i}")).collect();
    NAryAlgebra::new(format!("zero{n}_{dim}"), n, Field::Rational, labels, BTreeMap::new(), None)
        .expect("valid")
}

/// Sign of `e_a ∧ e_b` for wedge monomials given as bitmasks, or `None` when
/// they share a factor.
pub(crate) fn wedge_sign(a: u32, b: u32) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    // each factor of b passes over the factors of a above it
    let mut swaps = 0;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        swaps += (a >> (y + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

pub(crate) fn monomial_label(mask: u32, n: usize) -> String {
    if mask == 0 {
        return "1".into();
    }
    let idx: Vec<String> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    if n <= 9 {
        format!("e{}", idx.concat())
    } else {
        format!("e{}", idx.join("_"))
    }
}

/// Wedge monomials of Λℝᴺ, ordered by degree and then lexicographically.
pub(crate) fn wedge_monomials(n: usize, keep: impl Fn(u32) -> bool) -> Vec<u32> {
    let mut masks: Vec<u32> = (0u32..(1 << n)).filter(|&m| keep(m.count_ones())).collect();
    masks.sort_by_key(|&m| {
        let bits: Vec<u32> = (0..n as u32).filter(|i| m >> i & 1 == 1).collect();
        (m.count_ones(), bits)
    });
    masks
}

/// Odd-degree part of the exterior algebra Λℝᴺ as a ternary algebra under
/// the triple wedge product. The degree-one monomials are the generators.
pub fn exterior_odd(n: usize) -> Result<NAryAlgebra> {
    if !(1..=20).contains(&n) {
        return Err(Error::Invalid(format!("exterior_odd needs 1 <= N <= 20, got {n}")));
    }
    let masks = wedge_monomials(n, |deg| deg % 2 == 1);
    let index: BTreeMap<u32, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let labels = masks.iter().map(|&m| monomial_label(m, n)).collect();
    let mut constants = BTreeMap::new();
    for (i, &a) in masks.iter().enumerate() {
        for (j, &b) in masks.iter().enumerate() {
            let Some(s1) = wedge_sign(a, b) else { continue };
            for (k, &c) in masks.iter().enumerate() {
                let Some(s2) = wedge_sign(a | b, c) else { continue };
                constants.insert(vec![i, j, k], Vector::scaled_unit(index[&(a | b | c)], Scalar::from(s1 * s2)));
            }
        }
    }
    let generators = masks
        .iter()
        .enumerate()
        .filter(|(_, m)| m.count_ones() == 1)
        .map(|(i, _)| i)
        .collect();
    NAryAlgebra::new(format!("exterior_odd{n}"), 3, Field::Rational, labels, constants, Some(generators))
}

/// Monomials `x^d` of ℚ[x]/(x^t) with `d ≡ 1 mod n−1`, under the truncated
/// n-fold product.
pub fn truncated_poly_nary(n: usize, t: usize) -> Result<NAryAlgebra> {
    if n < 2 || t < n {
        return Err(Error::Invalid(format!("truncated_poly_nary needs n >= 2 and t >= n, got n={n}, t={t}")));
    }
    let degrees: Vec<usize> = (1..t).filter(|d| (d - 1) % (n - 1) == 0).collect();
    let index: BTreeMap<usize, usize> = degrees.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let labels = degrees
        .iter()
        .map(|&d| if d == 1 { "x".to_string() } else { format!("x^{d}") })
        .collect();
    let mut constants = BTreeMap::new();
    for tuple in Tuples::new(degrees.len(), n) {
        let total: usize = tuple.iter().map(|&i| degrees[i]).sum();
        if total < t {
            constants.insert(tuple, Vector::unit(index[&total]));
        }
    }
    NAryAlgebra::new(format!("trunc_poly{n}_{t}"), n, Field::Rational, labels, constants, None)
}

/// Checks `m(a,b,c) = j·m(b,c,a) = j²·m(c,a,b)` on all basis triples.
pub fn is_j_commutative(a: &NAryAlgebra, j: &Scalar) -> Result<bool> {
    if a.arity != 3 {
        return Err(Error::Arity { expected: 3, found: a.arity });
    }
    if !j.pow(3).is_one() {
        return Err(Error::NotCubeRoot(j.to_string()));
    }
    let j2 = j.pow(2);
    let zero = Vector::new();
    let get = |t: &[usize]| a.basis_product(t).unwrap_or(&zero);
    for t in Tuples::new(a.dim(), 3) {
        let abc = get(&t);
        let bca = get(&[t[1], t[2], t[0]]);
        let cab = get(&[t[2], t[0], t[1]]);
        if *abc != bca.scale(j) || *abc != cab.scale(&j2) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A subalgebra presented in its own basis together with its inclusion.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub algebra: NAryAlgebra,
    /// Basis of the subalgebra as vectors of the ambient algebra.
    pub basis: Vec<Vector>,
}

/// Restricts `a` to the span of `vectors`, failing unless the span is closed
/// under the product. The basis is the reduced echelon basis of the span.
pub fn subalgebra(a: &NAryAlgebra, vectors: &[Vector]) -> Result<Subalgebra> {
    let space = RowSpace::spanned_by(a.dim(), vectors);
    if space.rank() == 0 {
        return Err(Error::NotSubalgebra("the span is zero".into()));
    }
    let basis: Vec<Vector> = space.basis().cloned().collect();
    let r = basis.len();
    guard::check("subalgebra structure constants", guard::power(r, a.arity), guard::assoc_budget())?;
    let mut constants = BTreeMap::new();
    for tuple in Tuples::new(r, a.arity) {
        let args: Vec<Vector> = tuple.iter().map(|&i| basis[i].clone()).collect();
        let p = a.multiply(&args)?;
        let coords = space.coordinates(&p).ok_or_else(|| {
            Error::NotSubalgebra(format!("product of basis elements {tuple:?} leaves the span"))
        })?;
        if !coords.is_zero() {
            constants.insert(tuple, coords);
        }
    }
    let labels = (1..=r).map(|i| format!("b{i}")).collect();
    let algebra = NAryAlgebra::new(format!("{}_sub", a.name), a.arity, a.field, labels, constants, None)?;
    Ok(Subalgebra { algebra, basis })
}

/// Smallest subalgebra containing `vectors`, returned with its inclusion.
pub fn generated_subalgebra(a: &NAryAlgebra, vectors: &[Vector]) -> Result<Subalgebra> {
    let mut space = RowSpace::spanned_by(a.dim(), vectors);
    loop {
        let basis: Vec<Vector> = space.basis().cloned().collect();
        let mut grew = false;
        for tuple in Tuples::new(basis.len(), a.arity) {
            let args: Vec<Vector> = tuple.iter().map(|&i| basis[i].clone()).collect();
            grew |= space.insert(a.multiply(&args)?);
        }
        if !grew {
            break;
        }
    }
    let basis: Vec<Vector> = space.basis().cloned().collect();
    subalgebra(a, &basis)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn e(a: &NAryAlgebra, l: &str) -> Vector {
        Vector::unit(a.label_index(l).unwrap())
    }

    #[test]
    fn exterior_bases() {
        let a2 = exterior_odd(2).unwrap();
        assert_eq!(a2.labels(), ["e1", "e2"]);
        assert_eq!(a2.structure_constants().count(), 0);
        let a3 = exterior_odd(3).unwrap();
        assert_eq!(a3.labels(), ["e1", "e2", "e3", "e123"]);
        assert_eq!(a3.generators(), [0, 1, 2]);
        let a1 = exterior_odd(1).unwrap();
        assert_eq!(a1.dim(), 1);
        assert_eq!(a1.structure_constants().count(), 0);
        for n in 1..=6 {
            assert_eq!(exterior_odd(n).unwrap().dim(), 1 << (n - 1));
        }
    }

    #[test]
    fn multiply_examples() {
        let a = exterior_odd(3).unwrap();
        let p = a.multiply(&[e(&a, "e1"), e(&a, "e2"), e(&a, "e3")]).unwrap();
        assert_eq!(p, e(&a, "e123"));
        assert!(a.multiply(&[e(&a, "e1"), e(&a, "e1"), e(&a, "e2")]).unwrap().is_zero());
        let two = Scalar::from(2);
        let p2 = a.multiply(&[e(&a, "e1").scale(&two), e(&a, "e2"), e(&a, "e3")]).unwrap();
        assert_eq!(p2, p.scale(&two));
        assert!(matches!(a.multiply(&[e(&a, "e1")]), Err(Error::Arity { expected: 3, found: 1 })));
    }

    #[test]
    fn matrix_algebra_ternary() {
        let m3 = nary_from_binary(&matrix_algebra(2), 3).unwrap();
        let p = m3.multiply(&[e(&m3, "E11"), e(&m3, "E12"), e(&m3, "E22")]).unwrap();
        assert_eq!(p, e(&m3, "E12"));
        assert!(check_associativity(&m3).unwrap().pass);
    }

    #[test]
    fn from_binary_edge_cases() {
        let q3 = nary_from_binary(&rationals(), 3).unwrap();
        assert_eq!(q3.basis_product(&[0, 0, 0]), Some(&Vector::unit(0)));
        let z = nary_from_binary(&zero_algebra(2, 2), 4).unwrap();
        assert_eq!(z.structure_constants().count(), 0);
        assert!(matches!(nary_from_binary(&exterior_odd(3).unwrap(), 3), Err(Error::Arity { .. })));
        // (x·y)·y ≠ x·(y·y) when y·y = x and x·y = y
        let mut c = BTreeMap::new();
        c.insert(vec![1, 1], Vector::unit(0));
        c.insert(vec![0, 1], Vector::unit(1));
        let bad = NAryAlgebra::new("bad", 2, Field::Rational, vec!["x".into(), "y".into()], c, None).unwrap();
        assert!(matches!(nary_from_binary(&bad, 3), Err(Error::NotAssociative(_))));
    }

    #[test]
    fn truncated_poly_examples() {
        let a = truncated_poly_nary(4, 6).unwrap();
        assert_eq!(a.labels(), ["x", "x^4"]);
        let consts: Vec<_> = a.structure_constants().collect();
        assert_eq!(consts, vec![(&[0usize, 0, 0, 0][..], &Vector::unit(1))]);
        assert_eq!(truncated_poly_nary(2, 3).unwrap().labels(), ["x", "x^2"]);
        let b = truncated_poly_nary(4, 4).unwrap();
        assert_eq!(b.dim(), 1);
        assert_eq!(b.structure_constants().count(), 0);
        assert!(truncated_poly_nary(4, 3).is_err());
    }

    #[test]
    fn perturbation_breaks_associativity() {
        let mut a = exterior_odd(3).unwrap();
        // m(e1,e2,e3) = e123 + e1
        a.set_product(vec![0, 1, 2], &Vector::unit(3) + &Vector::unit(0)).unwrap();
        let report = check_associativity(&a).unwrap();
        assert!(!report.pass);
        let v = report.first_violation.unwrap();
        assert_eq!(v.tuple.len(), 5);
        assert_eq!(v.i, 1);
        // the witness separates the two placements of the inner product
        let first = composition(&a, &v.tuple, 0);
        let other = composition(&a, &v.tuple, v.j - 1);
        assert_ne!(first, other);
    }

    #[test]
    fn j_commutativity() {
        let a2 = exterior_odd(2).unwrap();
        assert!(is_j_commutative(&a2, &Scalar::one()).unwrap());
        let a3 = exterior_odd(3).unwrap();
        assert!(is_j_commutative(&a3, &Scalar::one()).unwrap());
        assert!(!is_j_commutative(&a3, &Scalar::omega()).unwrap());
        assert!(matches!(is_j_commutative(&a3, &Scalar::from(2)), Err(Error::NotCubeRoot(_))));
        assert!(matches!(is_j_commutative(&matrix_algebra(2), &Scalar::one()), Err(Error::Arity { .. })));
    }

    #[test]
    fn subalgebra_closure() {
        let a = exterior_odd(3).unwrap();
        let sub = subalgebra(&a, &[e(&a, "e1"), e(&a, "e2")]).unwrap();
        assert_eq!(sub.algebra.dim(), 2);
        assert_eq!(sub.algebra.structure_constants().count(), 0);
        let mixed = subalgebra(&a, &[&e(&a, "e1") + &e(&a, "e123")]).unwrap();
        assert_eq!(mixed.algebra.dim(), 1);
        assert!(matches!(
            subalgebra(&a, &[e(&a, "e1"), e(&a, "e2"), e(&a, "e3")]),
            Err(Error::NotSubalgebra(_))
        ));
        let gen = generated_subalgebra(&a, &[e(&a, "e1"), e(&a, "e2"), e(&a, "e3")]).unwrap();
        assert_eq!(gen.algebra.dim(), 4);
    }

    #[test]
    fn rejects_bad_definitions() {
        let labels = vec!["a".to_string(), "a".to_string()];
        assert!(NAryAlgebra::new("d", 3, Field::Rational, labels, BTreeMap::new(), None).is_err());
        let c = BTreeMap::from([(vec![0, 0, 0], Vector::scaled_unit(0, Scalar::omega()))]);
        assert!(NAryAlgebra::new("w", 3, Field::Rational, vec!["a".into()], c.clone(), None).is_err());
        assert!(NAryAlgebra::new("w", 3, Field::Cyclotomic, vec!["a".into()], c, None).is_ok());
    }

    fn small_rational() -> impl Strategy<Value = Scalar> {
        (-3i64..=3, 1i64..=2).prop_map(|(p, q)| Scalar::ratio(p, q))
    }

    fn arb_vector(dim: usize) -> impl Strategy<Value = Vector> {
        proptest::collection::vec(small_rational(), dim).prop_map(|c| Vector::from_dense(&c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn powers_of_binary_subalgebras_are_associative(
            k in 2usize..=3,
            seeds in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 9), 1..=2),
            n in 3usize..=4,
        ) {
            let m = matrix_algebra(k);
            let gens: Vec<Vector> = seeds
                .iter()
                .map(|s| Vector::from_dense(&s[..k * k].iter().map(|&x| Scalar::from(x)).collect::<Vec<_>>()))
                .collect();
            let sub = generated_subalgebra(&m, &gens).unwrap();
            prop_assume!(sub.algebra.dim().pow(2 * n as u32 - 1) <= 200_000);
            let a = nary_from_binary(&sub.algebra, n).unwrap();
            prop_assert!(check_associativity(&a).unwrap().pass);
        }

        #[test]
        fn multiply_is_multilinear(
            slot in 0usize..3,
            args in proptest::collection::vec(arb_vector(4), 3),
            y in arb_vector(4),
            alpha in small_rational(),
            beta in small_rational(),
        ) {
            let a = nary_from_binary(&matrix_algebra(2), 3).unwrap();
            let mut mixed = args.clone();
            mixed[slot] = &args[slot].scale(&alpha) + &y.scale(&beta);
            let mut with_y = args.clone();
            with_y[slot] = y.clone();
            let lhs = a.multiply(&mixed).unwrap();
            let rhs = &a.multiply(&args).unwrap().scale(&alpha) + &a.multiply(&with_y).unwrap().scale(&beta);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cyclically_invariant_constants_are_one_commutative(
            cells in proptest::collection::vec(proptest::option::weighted(0.4, (0usize..2, small_rational())), 8),
        ) {
            let mut constants = BTreeMap::new();
            for (t, c) in Tuples::new(2, 3).zip(cells) {
                let Some((k, s)) = c else { continue };
                // the least rotation of each orbit decides the whole orbit
                let rots = [t.clone(), vec![t[1], t[2], t[0]], vec![t[2], t[0], t[1]]];
                if rots.iter().min() == Some(&t) {
                    for r in rots {
                        constants.insert(r, Vector::scaled_unit(k, s.clone()));
                    }
                }
            }
            let a = NAryAlgebra::new("cyc", 3, Field::Rational, vec!["a".into(), "b".into()], constants, None).unwrap();
            prop_assert!(is_j_commutative(&a, &Scalar::one()).unwrap());
        }
    }
}
