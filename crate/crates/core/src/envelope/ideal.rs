use std::collections::{BTreeMap, VecDeque};

use crate::exactlin::{Matrix, RowSpace, Vector};
use crate::{Error, Result};

use super::{Envelope, GradedAlgebra};

/// Per-degree subspaces of a graded algebra, closed under multiplication by
/// every basis element on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedIdeal {
    subspaces: Vec<RowSpace>,
}

impl GradedIdeal {
    pub fn zero(g: &GradedAlgebra) -> Self {
        GradedIdeal { subspaces: g.degrees().map(|d| RowSpace::new(g.dim(d))).collect() }
    }

    pub fn subspace(&self, d: usize) -> &RowSpace {
        &self.subspaces[d - 1]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subspaces.iter().map(RowSpace::rank).collect()
    }

    /// Coordinates of the class of `v` (degree `d`) in the quotient by this ideal.
    pub fn project(&self, d: usize, v: &Vector) -> Vector {
        let space = &self.subspaces[d - 1];
        let position: BTreeMap<usize, usize> =
            space.complement_indices().into_iter().enumerate().map(|(k, c)| (c, k)).collect();
        space.reduce(v).iter().map(|(i, c)| (position[&i], c.clone())).collect()
    }

    /// Checks the two-sided closure property on every basis vector of the ideal.
    pub fn is_closed_in(&self, g: &GradedAlgebra) -> bool {
        for d in g.degrees() {
            for x in self.subspace(d).basis() {
                for e in g.degrees() {
                    let target = self.subspace(g.product_degree(d, e));
                    for j in 0..g.dim(e) {
                        let b = Vector::unit(j);
                        let right = g.multiply(d, x, e, &b).expect("valid degrees");
                        let left = g.multiply(e, &b, d, x).expect("valid degrees");
                        if !target.contains(&right) || !target.contains(&left) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Smallest graded ideal containing the homogeneous `generators`, given as
/// `(degree, coordinates)`. Computed as a fixpoint: every vector that enlarges
/// the ideal is multiplied by every basis element on both sides.
pub fn ideal_closure(g: &GradedAlgebra, generators: &[(usize, Vector)]) -> Result<GradedIdeal> {
    let mut ideal = GradedIdeal::zero(g);
    let mut queue: VecDeque<(usize, Vector)> = VecDeque::new();
    for (d, v) in generators {
        if !g.degrees().contains(d) {
            return Err(Error::Invalid(format!("generator degree {d} outside 1..={}", g.modulus())));
        }
        if v.extent() > g.dim(*d) {
            return Err(Error::DimensionMismatch { expected: g.dim(*d), found: v.extent() });
        }
        if ideal.subspaces[d - 1].insert(v.clone()) {
            queue.push_back((*d, v.clone()));
        }
    }
    while let Some((d, x)) = queue.pop_front() {
        for e in g.degrees() {
            let target = g.product_degree(d, e);
            for j in 0..g.dim(e) {
                let b = Vector::unit(j);
                for p in [g.multiply(d, &x, e, &b)?, g.multiply(e, &b, d, &x)?] {
                    if ideal.subspaces[target - 1].insert(p.clone()) {
                        queue.push_back((target, p));
                    }
                }
            }
        }
    }
    Ok(ideal)
}

/// True iff the degree-1 part of the ideal meets the image of `A` only in 0.
pub fn ideal_avoids_image(e: &Envelope, ideal: &GradedIdeal) -> bool {
    image_intersection(e, ideal) == 0
}

fn image_intersection(e: &Envelope, ideal: &GradedIdeal) -> usize {
    let emb = e.embedding();
    let image = RowSpace::spanned_by(emb.rows(), &(0..emb.cols()).map(|k| emb.column(k)).collect::<Vec<_>>());
    image.intersection_dim(ideal.subspace(1))
}

/// Quotient of a graded algebra by a graded ideal, with bases given by the
/// non-pivot coordinates of each ideal subspace.
pub fn quotient_graded(g: &GradedAlgebra, ideal: &GradedIdeal) -> Result<GradedAlgebra> {
    let reps: Vec<Vec<usize>> = g.degrees().map(|d| ideal.subspace(d).complement_indices()).collect();
    let labels = g
        .degrees()
        .map(|d| reps[d - 1].iter().map(|&i| g.labels(d)[i].clone()).collect())
        .collect();
    let mut products = BTreeMap::new();
    for d in g.degrees() {
        for e in g.degrees() {
            let target = g.product_degree(d, e);
            for (i, &x) in reps[d - 1].iter().enumerate() {
                for (j, &y) in reps[e - 1].iter().enumerate() {
                    let p = g.multiply(d, &Vector::unit(x), e, &Vector::unit(y))?;
                    let v = ideal.project(target, &p);
                    if !v.is_zero() {
                        products.insert((d, i, e, j), v);
                    }
                }
            }
        }
    }
    GradedAlgebra::new(format!("{}/I", g.name()), g.field(), g.modulus(), labels, products)
}

/// `O(A)/I`, refused when `I` meets the image of `A`.
pub fn quotient_envelope(e: &Envelope, ideal: &GradedIdeal) -> Result<QuotientEnvelope> {
    let meet = image_intersection(e, ideal);
    if meet != 0 {
        return Err(Error::IdealMeetsImage(meet));
    }
    let algebra = quotient_graded(e.graded(), ideal)?;
    let emb = e.embedding();
    let cols: Vec<Vector> = (0..emb.cols()).map(|k| ideal.project(1, &emb.column(k))).collect();
    let embedding = Matrix::from_columns(algebra.dim(1), &cols);
    Ok(QuotientEnvelope { algebra, embedding })
}

/// A quotient of an envelope together with the induced embedding of `A`.
#[derive(Clone, Debug)]
pub struct QuotientEnvelope {
    pub algebra: GradedAlgebra,
    /// Columns are the images of the basis of `A` in degree 1.
    pub embedding: Matrix,
}

impl QuotientEnvelope {
    pub fn dims(&self) -> Vec<usize> {
        self.algebra.dims()
    }

    pub fn embedding_is_injective(&self) -> bool {
        self.embedding.rank() == self.embedding.cols()
    }
}
