//! Truncated universal ℤ_{n-1}-graded envelope `O(A) = T(A)/I`.
//!
//! Words of the tensor algebra are rewritten by contracting the leftmost `n`
//! letters with the n-ary product until at most `n − 1` letters remain. The
//! degree-`d` component of the envelope is `A^{⊗d} / R_d`, where `R_d` is
//! the part of the ideal that lands on words of length `d` through words of
//! length at most `d + K(n − 1)` (`K` is the closure depth).

mod graded;
mod ideal;

use std::collections::BTreeMap;
use std::fmt;

use crate::exactlin::{Matrix, RowSpace, Scalar, Vector};
use crate::guard;
use crate::nary_core::{require_associative, subalgebra, NAryAlgebra, Tuples};
use crate::{Error, Result};

pub use graded::{annihilator_check, exterior_algebra, GradedAlgebra, ProductKey};
pub use ideal::{ideal_avoids_image, ideal_closure, quotient_envelope, quotient_graded, GradedIdeal, QuotientEnvelope};

pub const DEFAULT_CLOSURE_DEPTH: usize = 2;

/// `((d + e − 1) mod m) + 1`: degree arithmetic with `m` acting as zero.
pub fn combine_degrees(d: usize, e: usize, modulus: usize) -> usize {
    (d + e - 1) % modulus + 1
}

/// Degree of a word of length `len` in the ℤ_{n-1} grading.
pub fn degree_of_length(len: usize, n: usize) -> usize {
    (len - 1) % (n - 1) + 1
}

/// A basis word `a_1 ⊗ ⋯ ⊗ a_L` of the tensor algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    /// Position of the word in the lexicographically ordered basis of `A^{⊗L}`.
    pub fn index(&self, dim: usize) -> usize {
        self.0.iter().fold(0, |acc, &a| acc * dim + a)
    }

    pub fn from_index(mut idx: usize, len: usize, dim: usize) -> Word {
        let mut letters = vec![0; len];
        for slot in letters.iter_mut().rev() {
            *slot = idx % dim;
            idx /= dim;
        }
        Word(letters)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn render(&self, labels: &[String]) -> String {
        self.0.iter().map(|&a| labels[a].as_str()).collect::<Vec<_>>().join("*")
    }
}

/// Homogeneous element of `A^{⊗L}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordVector {
    len: usize,
    coeffs: BTreeMap<Word, Scalar>,
}

impl WordVector {
    pub fn zero(len: usize) -> Self {
        WordVector { len, coeffs: BTreeMap::new() }
    }

    pub fn word(w: Word) -> Self {
        let mut v = WordVector::zero(w.len());
        v.coeffs.insert(w, Scalar::one());
        v
    }

    pub fn from_terms(len: usize, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Result<Self> {
        let mut v = WordVector::zero(len);
        for (w, c) in terms {
            v.add_term(w, &c)?;
        }
        Ok(v)
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) -> Result<()> {
        if w.len() != self.len {
            return Err(Error::DimensionMismatch { expected: self.len, found: w.len() });
        }
        let slot = self.coeffs.entry(w.clone()).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&w);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> + '_ {
        self.coeffs.iter()
    }

    pub fn to_vector(&self, dim: usize) -> Vector {
        self.coeffs.iter().map(|(w, c)| (w.index(dim), c.clone())).collect()
    }

    pub fn from_vector(v: &Vector, len: usize, dim: usize) -> Self {
        WordVector {
            len,
            coeffs: v.iter().map(|(i, c)| (Word::from_index(i, len, dim), c.clone())).collect(),
        }
    }
}

/// Tensor product of vectors of `A`, in the word basis of `A^{⊗k}`.
pub fn tensor(factors: &[Vector], dim: usize) -> Vector {
    let mut acc = Vector::unit(0);
    for f in factors {
        let mut next = Vector::new();
        for (i, a) in acc.iter() {
            for (j, b) in f.iter() {
                next.add_at(i * dim + j, &(a * b));
            }
        }
        acc = next;
    }
    acc
}

/// Partial leftmost reduction: a homogeneous vector on words of length at
/// most `n − 1`, indexed in the word basis of `A^{⊗len}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct State {
    pub len: usize,
    pub v: Vector,
}

/// Leftmost rewriting as a left fold: letters are appended one at a time and
/// the whole buffer is contracted as soon as it reaches `n` letters.
pub(crate) struct Reducer<'a> {
    alg: &'a NAryAlgebra,
    n: usize,
    dim: usize,
}

impl<'a> Reducer<'a> {
    pub fn new(alg: &'a NAryAlgebra) -> Self {
        Reducer { alg, n: alg.arity(), dim: alg.dim() }
    }

    pub fn empty() -> State {
        State { len: 0, v: Vector::unit(0) }
    }

    /// Appends a linear combination of letters.
    pub fn push(&self, s: &State, letter: &Vector) -> State {
        if s.len + 1 < self.n {
            let mut out = Vector::new();
            for (i, a) in s.v.iter() {
                for (j, b) in letter.iter() {
                    out.add_at(i * self.dim + j, &(a * b));
                }
            }
            return State { len: s.len + 1, v: out };
        }
        let mut out = Vector::new();
        let mut tuple = vec![0; self.n];
        for (i, a) in s.v.iter() {
            tuple[..self.n - 1].copy_from_slice(&Word::from_index(i, self.n - 1, self.dim).0);
            let p = self.alg.multiply_with_slot(&tuple, self.n - 1, letter);
            out.add_scaled(a, &p);
        }
        State { len: 1, v: out }
    }

    pub fn push_letter(&self, s: &State, a: usize) -> State {
        self.push(s, &Vector::unit(a))
    }

    pub fn fold(&self, s: &State, letters: &[usize]) -> State {
        letters.iter().fold(s.clone(), |acc, &a| self.push_letter(&acc, a))
    }

    pub fn reduce_word(&self, w: &[usize]) -> State {
        self.fold(&Self::empty(), w)
    }

    /// Leftmost reduction of a homogeneous vector given in the word basis of `A^{⊗len}`.
    pub fn reduce_vector(&self, v: &Vector, len: usize) -> State {
        let target = if len == 0 { 0 } else { degree_of_length(len, self.n) };
        let mut out = Vector::new();
        for (i, c) in v.iter() {
            let s = self.reduce_word(&Word::from_index(i, len, self.dim).0);
            out.add_scaled(c, &s.v);
        }
        State { len: target, v: out }
    }
}

/// Contraction `c_i`: letters `i..i+n` (0-based) are replaced by their product.
pub fn contract(a: &NAryAlgebra, w: &Word, i: usize) -> Result<WordVector> {
    let n = a.arity();
    if i + n > w.len() {
        return Err(Error::Invalid(format!("contraction at {i} needs {n} letters, word has {}", w.len())));
    }
    let mut out = WordVector::zero(w.len() - n + 1);
    if let Some(p) = a.basis_product(&w.0[i..i + n]) {
        for (k, c) in p.iter() {
            let mut letters = w.0[..i].to_vec();
            letters.push(k);
            letters.extend_from_slice(&w.0[i + n..]);
            out.add_term(Word(letters), c)?;
        }
    }
    Ok(out)
}

/// Rewrites `w` by contracting the leftmost `n` letters until at most `n − 1`
/// remain. The result has length `((L − 1) mod (n − 1)) + 1`.
pub fn reduce_word(a: &NAryAlgebra, w: &WordVector) -> WordVector {
    if w.len() < a.arity() {
        return w.clone();
    }
    let r = Reducer::new(a);
    let s = r.reduce_vector(&w.to_vector(a.dim()), w.len());
    WordVector::from_vector(&s.v, s.len, a.dim())
}

fn check_degree(a: &NAryAlgebra, d: usize) -> Result<()> {
    if !(1..a.arity()).contains(&d) {
        return Err(Error::Invalid(format!("degree {d} outside 1..={}", a.arity() - 1)));
    }
    Ok(())
}

/// Relations of degree `d` at closure depth `K`, in `A^{⊗d}` coordinates.
///
/// Spanned by `π(c_i W) − π(W)` over all basis words `W` of length
/// `d + j(n − 1)`, `1 ≤ j ≤ K`, and all contraction positions `i`, where `π`
/// is leftmost reduction. This is the same span as the recursive description
/// `R_d(1) = span{c_i w − c_j w}`, `R_d(t) = R_d(1) + Σ_i c_i(R_{d+n−1}(t − 1))`.
pub fn relation_space(a: &NAryAlgebra, d: usize, depth: usize) -> Result<RowSpace> {
    check_degree(a, d)?;
    if depth == 0 {
        return Err(Error::Invalid("closure depth must be at least 1".into()));
    }
    let n = a.arity();
    let dim = a.dim();
    let longest = d + depth * (n - 1);
    guard::check(format!("relation space (words of length {longest})"), guard::power(dim, longest), guard::coord_budget())?;
    let r = Reducer::new(a);
    let mut space = RowSpace::new(guard::power(dim, d) as usize);
    let mut prefixes: Vec<State> = Vec::with_capacity(longest + 1);
    for j in 1..=depth {
        let len = d + j * (n - 1);
        for w in Tuples::new(dim, len) {
            prefixes.clear();
            prefixes.push(Reducer::empty());
            for &x in &w {
                let next = r.push_letter(prefixes.last().unwrap(), x);
                prefixes.push(next);
            }
            let base = &prefixes[len].v;
            for i in 1..=len - n {
                let Some(p) = a.basis_product(&w[i..i + n]) else {
                    if !base.is_zero() {
                        space.insert(base.clone());
                    }
                    continue;
                };
                let s = r.push(&prefixes[i], p);
                let s = r.fold(&s, &w[i + n..]);
                let diff = &s.v - base;
                if !diff.is_zero() {
                    space.insert(diff);
                }
            }
        }
    }
    Ok(space)
}

/// Degree-`d` slice of the envelope: `A^{⊗d}` modulo its relation space.
#[derive(Clone, Debug)]
pub struct GradedComponent {
    degree: usize,
    ambient_dim: usize,
    relations: RowSpace,
    /// Word indices of the non-pivot columns, in increasing order.
    representatives: Vec<usize>,
    position: BTreeMap<usize, usize>,
}

impl GradedComponent {
    fn new(degree: usize, relations: RowSpace) -> Self {
        let representatives = relations.complement_indices();
        let position = representatives.iter().enumerate().map(|(k, &w)| (w, k)).collect();
        GradedComponent { degree, ambient_dim: relations.ambient_dim(), relations, representatives, position }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn relations(&self) -> &RowSpace {
        &self.relations
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representative(&self, k: usize, dim: usize) -> Word {
        Word::from_index(self.representatives[k], self.degree, dim)
    }

    /// Class of a vector of `A^{⊗d}` in representative coordinates.
    pub fn project(&self, v: &Vector) -> Vector {
        self.relations.reduce(v).iter().map(|(i, c)| (self.position[&i], c.clone())).collect()
    }
}

/// Truncated model of `O(A)` at closure depth `K`.
#[derive(Clone, Debug)]
pub struct Envelope {
    algebra: NAryAlgebra,
    depth: usize,
    components: Vec<GradedComponent>,
    graded: GradedAlgebra,
}

/// Builds the envelope of an associative algebra at closure depth `depth`.
pub fn build_envelope(a: &NAryAlgebra, depth: usize) -> Result<Envelope> {
    require_associative(a)?;
    let n = a.arity();
    let dim = a.dim();
    let mut components = Vec::with_capacity(n - 1);
    for d in 1..n {
        components.push(GradedComponent::new(d, relation_space(a, d, depth)?));
    }
    let r = Reducer::new(a);
    let labels: Vec<Vec<String>> = components
        .iter()
        .map(|c| (0..c.dim()).map(|k| c.representative(k, dim).render(a.labels())).collect())
        .collect();
    let mut products = BTreeMap::new();
    for x in &components {
        for y in &components {
            let target = &components[combine_degrees(x.degree, y.degree, n - 1) - 1];
            for i in 0..x.dim() {
                let left = r.reduce_word(&x.representative(i, dim).0);
                for j in 0..y.dim() {
                    let s = r.fold(&left, &y.representative(j, dim).0);
                    debug_assert_eq!(s.len, target.degree);
                    let v = target.project(&s.v);
                    if !v.is_zero() {
                        products.insert((x.degree, i, y.degree, j), v);
                    }
                }
            }
        }
    }
    let graded = GradedAlgebra::new(format!("O({})", a.name()), a.field(), n - 1, labels, products)?;
    Ok(Envelope { algebra: a.clone(), depth, components, graded })
}

impl Envelope {
    pub fn algebra(&self) -> &NAryAlgebra {
        &self.algebra
    }

    pub fn closure_depth(&self) -> usize {
        self.depth
    }

    pub fn component(&self, d: usize) -> &GradedComponent {
        &self.components[d - 1]
    }

    pub fn components(&self) -> &[GradedComponent] {
        &self.components
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(GradedComponent::dim).collect()
    }

    pub fn graded(&self) -> &GradedAlgebra {
        &self.graded
    }

    /// Degree and coordinates of the class of a homogeneous tensor.
    pub fn class_of(&self, w: &WordVector) -> Result<(usize, Vector)> {
        if w.len() == 0 {
            return Err(Error::Invalid("empty word".into()));
        }
        let s = Reducer::new(&self.algebra).reduce_vector(&w.to_vector(self.algebra.dim()), w.len());
        Ok((s.len, self.component(s.len).project(&s.v)))
    }

    /// The embedding `i: A → O(A)_1`, one column per basis element of `A`.
    pub fn embedding(&self) -> Matrix {
        let c = self.component(1);
        let cols: Vec<Vector> = (0..self.algebra.dim()).map(|k| c.project(&Vector::unit(k))).collect();
        Matrix::from_columns(c.dim(), &cols)
    }

    /// Product of envelope elements in representative coordinates.
    pub fn product(&self, d: usize, x: &Vector, e: usize, y: &Vector) -> Result<Vector> {
        self.graded.multiply(d, x, e, y)
    }

    /// Relation vectors `r` and words `u` for which the reduction of `r ⊗ u`
    /// or `u ⊗ r` falls outside the target relation space. Empty when the
    /// truncated relation spaces are closed under the ideal operations.
    pub fn well_definedness_violations(&self) -> Vec<WellDefinednessViolation> {
        let a = &self.algebra;
        let n = a.arity();
        let dim = a.dim();
        let r = Reducer::new(a);
        let mut out = Vec::new();
        for comp in &self.components {
            for rel in comp.relations.basis() {
                for e in 1..n {
                    let target = self.component(combine_degrees(comp.degree, e, n - 1));
                    for u in Tuples::new(dim, e) {
                        let u_vec = Vector::unit(Word(u.clone()).index(dim));
                        let right = tensor_words(rel, &u_vec, e, dim);
                        let left = tensor_words(&u_vec, rel, comp.degree, dim);
                        for (side, v) in [(Side::Right, right), (Side::Left, left)] {
                            let s = r.reduce_vector(&v, comp.degree + e);
                            if !target.relations.contains(&s.v) {
                                out.push(WellDefinednessViolation {
                                    degree: comp.degree,
                                    relation: rel.clone(),
                                    word: Word(u.clone()),
                                    side,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Which side the word was attached to in a well-definedness check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellDefinednessViolation {
    pub degree: usize,
    pub relation: Vector,
    pub word: Word,
    pub side: Side,
}

/// `x ⊗ y` in word coordinates, where `y` lives in `A^{⊗ylen}`.
fn tensor_words(x: &Vector, y: &Vector, ylen: usize, dim: usize) -> Vector {
    let shift = guard::power(dim, ylen) as usize;
    let mut out = Vector::new();
    for (i, a) in x.iter() {
        for (j, b) in y.iter() {
            out.add_at(i * shift + j, &(a * b));
        }
    }
    out
}

/// Ranks of `R_1, …, R_{n−1}` for closure depths `1..=max_depth`.
pub fn stabilization(a: &NAryAlgebra, max_depth: usize) -> Result<Vec<Vec<usize>>> {
    let mut rows = Vec::new();
    for k in 1..=max_depth {
        let mut ranks = Vec::new();
        for d in 1..a.arity() {
            ranks.push(relation_space(a, d, k)?.rank());
        }
        rows.push(ranks);
    }
    Ok(rows)
}

/// Maps between truncated envelopes induced by a linear map `phi: A → B`
/// (columns are images of basis elements): the class of `a_1 ⊗ ⋯ ⊗ a_d`
/// goes to the class of `φ(a_1) ⊗ ⋯ ⊗ φ(a_d)`. Fails if a relation of the
/// source does not map into the relations of the target.
pub fn induced_map(src: &Envelope, dst: &Envelope, phi: &Matrix) -> Result<Vec<Matrix>> {
    let (a, b) = (src.algebra(), dst.algebra());
    if a.arity() != b.arity() {
        return Err(Error::Invalid("source and target have different arities".into()));
    }
    if phi.cols() != a.dim() || phi.rows() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim() * b.dim(), found: phi.cols() * phi.rows() });
    }
    let images: Vec<Vector> = (0..a.dim()).map(|k| phi.column(k)).collect();
    let tensor_image = |w: &Word| -> Vector {
        let factors: Vec<Vector> = w.0.iter().map(|&x| images[x].clone()).collect();
        tensor(&factors, b.dim())
    };
    let mut out = Vec::new();
    for (sc, dc) in src.components.iter().zip(&dst.components) {
        for rel in sc.relations.basis() {
            let mut img = Vector::new();
            for (i, c) in rel.iter() {
                img.add_scaled(c, &tensor_image(&Word::from_index(i, sc.degree, a.dim())));
            }
            if !dc.relations.contains(&img) {
                return Err(Error::IllDefined(format!(
                    "a degree-{} relation of {} maps outside the relations of {}",
                    sc.degree,
                    a.name(),
                    b.name()
                )));
            }
        }
        let cols: Vec<Vector> = (0..sc.dim())
            .map(|k| dc.project(&tensor_image(&sc.representative(k, a.dim()))))
            .collect();
        out.push(Matrix::from_columns(dc.dim(), &cols));
    }
    Ok(out)
}

/// Result of [`check_subalgebra_inclusion`].
#[derive(Clone, Debug)]
pub struct InclusionReport {
    pub sub_dims: Vec<usize>,
    pub ambient_dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub injective: Vec<bool>,
    pub closure_depth: usize,
}

/// Builds `O(B)` and `O(A)` for the subalgebra `B` spanned by `b_basis` and
/// reports, per degree, whether the induced graded map is injective.
pub fn check_subalgebra_inclusion(a: &NAryAlgebra, b_basis: &[Vector], depth: usize) -> Result<InclusionReport> {
    let sub = subalgebra(a, b_basis)?;
    let ob = build_envelope(&sub.algebra, depth)?;
    let oa = build_envelope(a, depth)?;
    let incl = Matrix::from_columns(a.dim(), &sub.basis);
    let maps = induced_map(&ob, &oa, &incl)?;
    let ranks: Vec<usize> = maps.iter().map(Matrix::rank).collect();
    Ok(InclusionReport {
        sub_dims: ob.dims(),
        ambient_dims: oa.dims(),
        injective: ranks.iter().zip(ob.dims()).map(|(&r, d)| r == d).collect(),
        ranks,
        closure_depth: depth,
    })
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}
