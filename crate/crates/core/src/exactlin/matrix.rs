use std::collections::BTreeMap;

use super::Scalar;
use crate::Error;

/// Sparse vector over ℚ(ω). Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct Vector(BTreeMap<usize, Scalar>);

impl Vector {
    pub fn new() -> Self {
        Vector(BTreeMap::new())
    }

    pub fn unit(i: usize) -> Self {
        Vector::scaled_unit(i, Scalar::one())
    }

    pub fn scaled_unit(i: usize, c: Scalar) -> Self {
        let mut v = Vector::new();
        v.set(i, c);
        v
    }

    pub fn from_dense(entries: &[Scalar]) -> Self {
        entries.iter().cloned().enumerate().collect()
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); len];
        for (i, c) in self.iter() {
            out[i] = c.clone();
        }
        out
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.0.get(&i)
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.0.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            self.0.remove(&i);
        } else {
            self.0.insert(i, c);
        }
    }

    pub fn add_at(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(i).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&i);
        }
    }

    /// self += c * other
    pub fn add_scaled(&mut self, c: &Scalar, other: &Vector) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_at(i, &(c * x));
        }
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        if c.is_zero() {
            return Vector::new();
        }
        Vector(self.0.iter().map(|(&i, x)| (i, c * x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.0.iter().map(|(&i, c)| (i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    /// Largest stored index plus one, zero for the zero vector.
    pub fn extent(&self) -> usize {
        self.0.keys().next_back().map_or(0, |&i| i + 1)
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.0.iter().next().map(|(&i, c)| (i, c))
    }
}

impl FromIterator<(usize, Scalar)> for Vector {
    fn from_iter<T: IntoIterator<Item = (usize, Scalar)>>(iter: T) -> Self {
        let mut v = Vector::new();
        for (i, c) in iter {
            v.add_at(i, &c);
        }
        v
    }
}

impl std::ops::Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(&Scalar::one(), rhs);
        out
    }
}

impl std::ops::Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(&-Scalar::one(), rhs);
        out
    }
}

/// Subspace of a coordinate space kept in fully reduced row echelon form.
///
/// Each stored row has a leading 1 at its pivot column and zeros in every
/// other pivot column. The pivot of a new row is its first nonzero column, so
/// the stored form depends only on the span, never on insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSpace {
    dim: usize,
    rows: BTreeMap<usize, Vector>,
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        RowSpace { dim, rows: BTreeMap::new() }
    }

    pub fn spanned_by<'a>(dim: usize, vectors: impl IntoIterator<Item = &'a Vector>) -> Self {
        let mut s = RowSpace::new(dim);
        for v in vectors {
            s.insert(v.clone());
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Reduced basis rows, ordered by pivot.
    pub fn basis(&self) -> impl Iterator<Item = &Vector> + '_ {
        self.rows.values()
    }

    /// Remainder of `v` modulo the subspace; supported on non-pivot columns only.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut out = v.clone();
        let hits: Vec<usize> = v.support().filter(|c| self.rows.contains_key(c)).collect();
        for p in hits {
            let c = out.coeff(p);
            if !c.is_zero() {
                out.add_scaled(&-c, &self.rows[&p]);
            }
        }
        out
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns true when the rank grew.
    pub fn insert(&mut self, v: Vector) -> bool {
        debug_assert!(v.extent() <= self.dim);
        let r = self.reduce(&v);
        let Some((pivot, lead)) = r.leading() else {
            return false;
        };
        let r = r.scale(&lead.inv().expect("nonzero leading coefficient"));
        for row in self.rows.values_mut() {
            let c = row.coeff(pivot);
            if !c.is_zero() {
                row.add_scaled(&-c, &r);
            }
        }
        self.rows.insert(pivot, r);
        true
    }

    /// Coordinates of `v` relative to the reduced basis, indexed by basis
    /// position; `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &Vector) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(
            self.rows
                .keys()
                .enumerate()
                .map(|(k, &p)| (k, v.coeff(p)))
                .collect(),
        )
    }

    /// Standard-basis indices that are not pivots: a basis of the quotient.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.dim).filter(|c| !self.rows.contains_key(c)).collect()
    }

    pub fn is_subspace_of(&self, other: &RowSpace) -> bool {
        self.basis().all(|v| other.contains(v))
    }

    pub fn intersection_dim(&self, other: &RowSpace) -> usize {
        let mut sum = self.clone();
        for v in other.basis() {
            sum.insert(v.clone());
        }
        self.rank() + other.rank() - sum.rank()
    }
}

/// Row-sparse matrix with sorted iteration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vector>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vector::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data = rows.iter().map(|r| Vector::from_dense(r)).collect();
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vector>) -> Self {
        debug_assert!(rows.iter().all(|r| r.extent() <= cols));
        Matrix { rows: rows.len(), cols, data: rows }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, c) in col.iter() {
                m.data[i].set(j, c.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &Vector {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].coeff(j)
    }

    pub fn set(&mut self, i: usize, j: usize, c: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.data[i].set(j, c);
    }

    pub fn add_at(&mut self, i: usize, j: usize, c: &Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.data[i].add_at(j, c);
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vector::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vector::is_zero)
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, c)| (i, j, c)))
    }

    pub fn column(&self, j: usize) -> Vector {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.get(j).map(|c| (i, c.clone())))
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for (i, j, c) in self.entries() {
            t.data[j].set(i, c.clone());
        }
        t
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = Scalar::zero();
            for (j, c) in row.iter() {
                if let Some(x) = v.get(j) {
                    acc += &(c * x);
                }
            }
            out.set(i, acc);
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, Error> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = Vector::new();
            for (k, c) in row.iter() {
                acc.add_scaled(c, &rhs.data[k]);
            }
            out.data[i] = acc;
        }
        Ok(out)
    }

    pub fn row_space(&self) -> RowSpace {
        RowSpace::spanned_by(self.cols, &self.data)
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }
}

/// Rank over ℚ(ω) by Gauss–Jordan elimination, pivoting on the first nonzero column.
pub fn rank(m: &Matrix) -> usize {
    m.row_space().rank()
}

fn check_len(expected: usize, v: &[Scalar]) -> Result<(), Error> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch { expected, found: v.len() });
    }
    Ok(())
}

pub fn in_span(v: &[Scalar], basis: &[Vec<Scalar>]) -> Result<bool, Error> {
    let dim = v.len();
    for b in basis {
        check_len(dim, b)?;
    }
    let space = RowSpace::spanned_by(dim, &basis.iter().map(|b| Vector::from_dense(b)).collect::<Vec<_>>());
    Ok(space.contains(&Vector::from_dense(v)))
}

/// Representatives of a basis of `V / S`: the standard basis vectors whose
/// indices are not pivot columns of the reduced echelon form of `S`.
pub fn quotient_basis(ambient_dim: usize, subspace: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>, Error> {
    for s in subspace {
        check_len(ambient_dim, s)?;
    }
    let vecs: Vec<Vector> = subspace.iter().map(|s| Vector::from_dense(s)).collect();
    let space = RowSpace::spanned_by(ambient_dim, &vecs);
    Ok(space
        .complement_indices()
        .into_iter()
        .map(|i| Vector::unit(i).to_dense(ambient_dim))
        .collect())
}
