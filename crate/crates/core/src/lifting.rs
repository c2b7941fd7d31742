//! Lifts of n-ary homomorphisms `ρ: A → M_1` to graded homomorphisms
//! `ρ̃: O(A) → M`, and the envelope functor `φ ↦ O(φ)`.

use std::collections::BTreeMap;

use crate::envelope::{build_envelope, induced_map, Envelope, GradedAlgebra};
use crate::exactlin::{Matrix, RowSpace, Vector};
use crate::guard;
use crate::nary_core::{NAryAlgebra, Tuples};
use crate::{Error, Result};

/// A linear map between n-ary algebras that commutes with the products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NAryHom {
    source: NAryAlgebra,
    target: NAryAlgebra,
    matrix: Matrix,
}

impl NAryHom {
    /// `matrix` is `target.dim() × source.dim()`; column `k` is the image of
    /// basis element `k`. Verified on every basis tuple.
    pub fn new(source: NAryAlgebra, target: NAryAlgebra, matrix: Matrix) -> Result<Self> {
        if source.arity() != target.arity() {
            return Err(Error::Arity { expected: source.arity(), found: target.arity() });
        }
        if matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch { expected: source.dim(), found: matrix.cols() });
        }
        if matrix.rows() != target.dim() {
            return Err(Error::DimensionMismatch { expected: target.dim(), found: matrix.rows() });
        }
        let n = source.arity();
        guard::check("homomorphism check", guard::power(source.dim(), n), guard::assoc_budget())?;
        let images: Vec<Vector> = (0..source.dim()).map(|k| matrix.column(k)).collect();
        for t in Tuples::new(source.dim(), n) {
            let lhs = match source.basis_product(&t) {
                Some(p) => matrix.apply(p),
                None => Vector::new(),
            };
            let args: Vec<Vector> = t.iter().map(|&k| images[k].clone()).collect();
            if lhs != target.multiply(&args)? {
                let labels: Vec<&str> = t.iter().map(|&k| source.labels()[k].as_str()).collect();
                return Err(Error::NotHomomorphism(format!(
                    "{} → {} fails on ({})",
                    source.name(),
                    target.name(),
                    labels.join(", ")
                )));
            }
        }
        Ok(NAryHom { source, target, matrix })
    }

    pub fn identity(a: &NAryAlgebra) -> Self {
        NAryHom { source: a.clone(), target: a.clone(), matrix: Matrix::identity(a.dim()) }
    }

    pub fn zero(source: &NAryAlgebra, target: &NAryAlgebra) -> Result<Self> {
        NAryHom::new(source.clone(), target.clone(), Matrix::zeros(target.dim(), source.dim()))
    }

    pub fn source(&self) -> &NAryAlgebra {
        &self.source
    }

    pub fn target(&self) -> &NAryAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &NAryHom) -> Result<NAryHom> {
        if first.target != self.source {
            return Err(Error::Invalid("composition of non-adjacent homomorphisms".into()));
        }
        Ok(NAryHom {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix)?,
        })
    }
}

/// The degree-1 part of a ℤ_{n−1}-graded algebra with the n-ary product
/// `m(x_1, …, x_n) = x_1 ⋯ x_n`.
pub fn degree_one_part(m: &GradedAlgebra) -> Result<NAryAlgebra> {
    let n = m.modulus() + 1;
    let dim = m.dim(1);
    if dim == 0 {
        return Err(Error::Invalid(format!("{} has an empty degree-1 part", m.name())));
    }
    guard::check("degree-1 structure constants", guard::power(dim, n), guard::assoc_budget())?;
    let mut constants = BTreeMap::new();
    for t in Tuples::new(dim, n) {
        let factors: Vec<(usize, Vector)> = t.iter().map(|&k| (1, Vector::unit(k))).collect();
        let (_, p) = m.multiply_many(&factors)?;
        if !p.is_zero() {
            constants.insert(t, p);
        }
    }
    NAryAlgebra::new(format!("{}_1", m.name()), n, m.field(), m.labels(1).to_vec(), constants, None)
}

/// Degree-preserving linear map between graded algebras of the same modulus,
/// one matrix per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedHom {
    source: GradedAlgebra,
    target: GradedAlgebra,
    maps: Vec<Matrix>,
}

/// Basis pair `(x, y)` of the source, each `(degree, index)`, with
/// `f(xy) ≠ f(x)f(y)`.
pub type MultiplicativityViolation = [(usize, usize); 2];

impl GradedHom {
    pub fn new(source: GradedAlgebra, target: GradedAlgebra, maps: Vec<Matrix>) -> Result<Self> {
        if source.modulus() != target.modulus() {
            return Err(Error::Invalid(format!(
                "grading moduli differ: {} and {}",
                source.modulus(),
                target.modulus()
            )));
        }
        if maps.len() != source.modulus() {
            return Err(Error::DimensionMismatch { expected: source.modulus(), found: maps.len() });
        }
        for (d, f) in source.degrees().zip(&maps) {
            if f.cols() != source.dim(d) || f.rows() != target.dim(d) {
                return Err(Error::Invalid(format!(
                    "degree-{d} matrix is {}×{}, expected {}×{}",
                    f.rows(),
                    f.cols(),
                    target.dim(d),
                    source.dim(d)
                )));
            }
        }
        Ok(GradedHom { source, target, maps })
    }

    pub fn identity(g: &GradedAlgebra) -> Self {
        let maps = g.degrees().map(|d| Matrix::identity(g.dim(d))).collect();
        GradedHom { source: g.clone(), target: g.clone(), maps }
    }

    pub fn source(&self) -> &GradedAlgebra {
        &self.source
    }

    pub fn target(&self) -> &GradedAlgebra {
        &self.target
    }

    pub fn map(&self, d: usize) -> &Matrix {
        &self.maps[d - 1]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.maps.iter().map(Matrix::rank).collect()
    }

    pub fn kernel_dims(&self) -> Vec<usize> {
        self.maps.iter().map(|f| f.cols() - f.rank()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Matrix::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.maps.iter().all(|f| *f == Matrix::identity(f.cols()))
    }

    pub fn apply(&self, d: usize, x: &Vector) -> Vector {
        self.maps[d - 1].apply(x)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GradedHom) -> Result<GradedHom> {
        if first.target != self.source {
            return Err(Error::Invalid("composition of non-adjacent graded maps".into()));
        }
        let maps = self.maps.iter().zip(&first.maps).map(|(g, f)| g.mul(f)).collect::<Result<_>>()?;
        Ok(GradedHom { source: first.source.clone(), target: self.target.clone(), maps })
    }

    pub fn multiplicativity_violation(&self) -> Option<MultiplicativityViolation> {
        let s = &self.source;
        for d in s.degrees() {
            for e in s.degrees() {
                let de = s.product_degree(d, e);
                for i in 0..s.dim(d) {
                    for j in 0..s.dim(e) {
                        let (x, y) = (Vector::unit(i), Vector::unit(j));
                        let lhs = self.apply(de, &s.multiply(d, &x, e, &y).expect("valid degrees"));
                        let rhs = self
                            .target
                            .multiply(d, &self.apply(d, &x), e, &self.apply(e, &y))
                            .expect("valid degrees");
                        if lhs != rhs {
                            return Some([(d, i), (e, j)]);
                        }
                    }
                }
            }
        }
        None
    }
}

/// `ρ̃` together with the data it was built from.
#[derive(Clone, Debug)]
pub struct Lift {
    pub envelope: Envelope,
    pub rho: NAryHom,
    pub hom: GradedHom,
    /// `ρ̃ ∘ i = ρ` on every basis element of `A`.
    pub commutes: bool,
    pub multiplicativity_violation: Option<MultiplicativityViolation>,
}

/// Lifts `rho` (columns: images of the basis of `a` in degree 1 of `m`) to
/// `ρ̃: O(A) → M`, sending the class of `a_1 ⊗ ⋯ ⊗ a_d` to `ρ(a_1)⋯ρ(a_d)`.
pub fn lift_hom(a: &NAryAlgebra, m: &GradedAlgebra, rho: &Matrix, depth: usize) -> Result<Lift> {
    let n = a.arity();
    if m.modulus() != n - 1 {
        return Err(Error::Invalid(format!(
            "target grading modulus is {}, expected {}",
            m.modulus(),
            n - 1
        )));
    }
    if let Some(t) = m.associativity_violation() {
        let labels: Vec<&str> = t.iter().map(|&(d, i)| m.labels(d)[i].as_str()).collect();
        return Err(Error::NotAssociative(format!("{}: ({})", m.name(), labels.join(", "))));
    }
    let rho = NAryHom::new(a.clone(), degree_one_part(m)?, rho.clone())?;
    let envelope = build_envelope(a, depth)?;
    let images: Vec<Vector> = (0..a.dim()).map(|k| rho.matrix.column(k)).collect();
    let word_image = |letters: &[usize]| -> Result<Vector> {
        let factors: Vec<(usize, Vector)> = letters.iter().map(|&k| (1, images[k].clone())).collect();
        Ok(m.multiply_many(&factors)?.1)
    };
    let mut maps = Vec::with_capacity(n - 1);
    for c in envelope.components() {
        let d = c.degree();
        for rel in c.relations().basis() {
            let mut img = Vector::new();
            for (w, coef) in rel.iter() {
                img.add_scaled(coef, &word_image(&crate::envelope::Word::from_index(w, d, a.dim()).0)?);
            }
            if !img.is_zero() {
                return Err(Error::IllDefined(format!(
                    "a degree-{d} relation of O({}) at closure depth {depth} maps to a nonzero element of {}",
                    a.name(),
                    m.name()
                )));
            }
        }
        let cols = (0..c.dim())
            .map(|k| word_image(&c.representative(k, a.dim()).0))
            .collect::<Result<Vec<_>>>()?;
        maps.push(Matrix::from_columns(m.dim(d), &cols));
    }
    let hom = GradedHom::new(envelope.graded().clone(), m.clone(), maps)?;
    let emb = envelope.embedding();
    let commutes = (0..a.dim()).all(|k| hom.apply(1, &emb.column(k)) == images[k]);
    let multiplicativity_violation = hom.multiplicativity_violation();
    Ok(Lift { envelope, rho, hom, commutes, multiplicativity_violation })
}

/// Image and kernel of a lift, compared with the subalgebra of `M`
/// generated by `ρ(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageReport {
    pub source_dims: Vec<usize>,
    pub image_dims: Vec<usize>,
    pub kernel_dims: Vec<usize>,
    /// Dimensions of the graded subalgebra of `M` generated by `ρ(A)`.
    pub generated_dims: Vec<usize>,
    /// `generated = image` and `image + kernel = source` in every degree.
    pub consistent: bool,
}

/// Smallest graded subalgebra of `m` containing `seed` in degree 1.
pub fn generated_graded_subalgebra(m: &GradedAlgebra, seed: &[Vector]) -> Result<Vec<RowSpace>> {
    let mut spaces: Vec<RowSpace> = m.degrees().map(|d| RowSpace::new(m.dim(d))).collect();
    let mut queue: Vec<(usize, Vector)> = Vec::new();
    for v in seed {
        if spaces[0].insert(v.clone()) {
            queue.push((1, v.clone()));
        }
    }
    // every new vector is multiplied with everything accepted so far, on both sides
    let mut accepted: Vec<(usize, Vector)> = Vec::new();
    while let Some((d, x)) = queue.pop() {
        accepted.push((d, x.clone()));
        for (e, y) in accepted.clone() {
            let de = m.product_degree(d, e);
            let ed = m.product_degree(e, d);
            for (deg, p) in [(de, m.multiply(d, &x, e, &y)?), (ed, m.multiply(e, &y, d, &x)?)] {
                if spaces[deg - 1].insert(p.clone()) {
                    queue.push((deg, p));
                }
            }
        }
    }
    Ok(spaces)
}

pub fn image_subalgebra(lift: &Lift) -> Result<ImageReport> {
    let seed: Vec<Vector> = (0..lift.rho.matrix.cols()).map(|k| lift.rho.matrix.column(k)).collect();
    let generated = generated_graded_subalgebra(&lift.hom.target, &seed)?;
    let source_dims = lift.hom.source.dims();
    let image_dims = lift.hom.ranks();
    let kernel_dims = lift.hom.kernel_dims();
    let generated_dims: Vec<usize> = generated.iter().map(RowSpace::rank).collect();
    let image_spaces: Vec<RowSpace> = lift.hom.maps.iter().map(|f| f.transpose().row_space()).collect();
    let consistent = generated_dims == image_dims
        && generated.iter().zip(&image_spaces).all(|(g, i)| g.is_subspace_of(i))
        && source_dims.iter().zip(&image_dims).zip(&kernel_dims).all(|((s, i), k)| s == &(i + k));
    Ok(ImageReport { source_dims, image_dims, kernel_dims, generated_dims, consistent })
}

/// `O(φ): O(A) → O(B)` with the check `O(φ) ∘ ξ_A = ξ_B ∘ φ`.
#[derive(Clone, Debug)]
pub struct Functor {
    pub source: Envelope,
    pub target: Envelope,
    pub hom: GradedHom,
    pub commutes: bool,
}

pub fn envelope_functor(phi: &NAryHom, depth: usize) -> Result<Functor> {
    let source = build_envelope(&phi.source, depth)?;
    let target = build_envelope(&phi.target, depth)?;
    envelope_functor_between(phi, source, target)
}

/// As [`envelope_functor`], reusing envelopes that are already built.
pub fn envelope_functor_between(phi: &NAryHom, source: Envelope, target: Envelope) -> Result<Functor> {
    if source.algebra() != &phi.source || target.algebra() != &phi.target {
        return Err(Error::Invalid("envelopes do not match the homomorphism".into()));
    }
    let maps = induced_map(&source, &target, &phi.matrix)?;
    let hom = GradedHom::new(source.graded().clone(), target.graded().clone(), maps)?;
    let (ea, eb) = (source.embedding(), target.embedding());
    let commutes = (0..phi.source.dim())
        .all(|k| hom.apply(1, &ea.column(k)) == eb.apply(&phi.matrix.column(k)));
    Ok(Functor { source, target, hom, commutes })
}
