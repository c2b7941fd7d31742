use std::collections::{BTreeMap, HashSet};

use crate::exactlin::{Scalar, Vector};
use crate::nary_core::{monomial_label, wedge_monomials, wedge_sign, Field, Tuples};
use crate::{Error, Result};

use super::combine_degrees;

/// Key of a basis product: `(d, i, e, j)` is the product of basis element `i`
/// of degree `d` with basis element `j` of degree `e`.
pub type ProductKey = (usize, usize, usize, usize);

/// A ℤ_m-graded algebra with degrees `1..=m`, where `m` plays the role of 0.
///
/// The product of degree `d` and degree `e` lands in degree
/// `((d + e − 1) mod m) + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    name: String,
    field: Field,
    modulus: usize,
    labels: Vec<Vec<String>>,
    products: BTreeMap<ProductKey, Vector>,
}

impl GradedAlgebra {
    /// `labels[d - 1]` lists the basis of degree `d`.
    pub fn new(
        name: impl Into<String>,
        field: Field,
        modulus: usize,
        labels: Vec<Vec<String>>,
        products: BTreeMap<ProductKey, Vector>,
    ) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::Invalid("grading modulus must be at least 1".into()));
        }
        if labels.len() != modulus {
            return Err(Error::Invalid(format!(
                "expected bases for {modulus} degrees, found {}",
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        for l in labels.iter().flatten() {
            if !seen.insert(l.as_str()) {
                return Err(Error::Invalid(format!("duplicate basis label `{l}`")));
            }
        }
        let mut g = GradedAlgebra { name: name.into(), field, modulus, labels, products: BTreeMap::new() };
        for (key, v) in products {
            g.set_product(key, v)?;
        }
        Ok(g)
    }

    pub fn set_product(&mut self, key: ProductKey, v: Vector) -> Result<()> {
        let (d, i, e, j) = key;
        if !(1..=self.modulus).contains(&d) || !(1..=self.modulus).contains(&e) {
            return Err(Error::Invalid(format!("degree out of range in product {key:?}")));
        }
        if i >= self.dim(d) || j >= self.dim(e) {
            return Err(Error::Invalid(format!("basis index out of range in product {key:?}")));
        }
        let target = self.product_degree(d, e);
        if v.extent() > self.dim(target) {
            return Err(Error::Invalid(format!(
                "product {} * {} must land in degree {target}",
                self.labels[d - 1][i],
                self.labels[e - 1][j]
            )));
        }
        if let Some((_, c)) = v.iter().find(|(_, c)| !self.field.admits(c)) {
            return Err(Error::Invalid(format!("coefficient {c} is not in {}", self.field)));
        }
        if v.is_zero() {
            self.products.remove(&key);
        } else {
            self.products.insert(key, v);
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.modulus
    }

    pub fn dim(&self, d: usize) -> usize {
        self.labels[d - 1].len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn labels(&self, d: usize) -> &[String] {
        &self.labels[d - 1]
    }

    /// Degree and index of a basis label.
    pub fn find_label(&self, label: &str) -> Option<(usize, usize)> {
        self.labels
            .iter()
            .enumerate()
            .find_map(|(d, ls)| ls.iter().position(|l| l == label).map(|i| (d + 1, i)))
    }

    pub fn product_degree(&self, d: usize, e: usize) -> usize {
        combine_degrees(d, e, self.modulus)
    }

    pub fn basis_product(&self, d: usize, i: usize, e: usize, j: usize) -> Option<&Vector> {
        self.products.get(&(d, i, e, j))
    }

    pub fn products(&self) -> impl Iterator<Item = (&ProductKey, &Vector)> + '_ {
        self.products.iter()
    }

    /// Bilinear product of homogeneous elements `x` (degree `d`) and `y` (degree `e`).
    pub fn multiply(&self, d: usize, x: &Vector, e: usize, y: &Vector) -> Result<Vector> {
        for deg in [d, e] {
            if !(1..=self.modulus).contains(&deg) {
                return Err(Error::Invalid(format!("degree {deg} outside 1..={}", self.modulus)));
            }
        }
        let mut out = Vector::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                if let Some(p) = self.products.get(&(d, i, e, j)) {
                    out.add_scaled(&(a * b), p);
                }
            }
        }
        Ok(out)
    }

    /// Left-to-right product of homogeneous elements; returns the degree and value.
    pub fn multiply_many(&self, factors: &[(usize, Vector)]) -> Result<(usize, Vector)> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::Invalid("empty product".into()))?;
        let (mut deg, mut acc) = first.clone();
        for (e, y) in rest {
            acc = self.multiply(deg, &acc, *e, y)?;
            deg = self.product_degree(deg, *e);
        }
        Ok((deg, acc))
    }

    /// First basis triple `(x, y, z)` with `(xy)z ≠ x(yz)`, each given as
    /// `(degree, index)`.
    pub fn associativity_violation(&self) -> Option<[(usize, usize); 3]> {
        let elems: Vec<(usize, usize)> =
            self.degrees().flat_map(|d| (0..self.dim(d)).map(move |i| (d, i))).collect();
        for t in Tuples::new(elems.len(), 3) {
            let [x, y, z] = [elems[t[0]], elems[t[1]], elems[t[2]]];
            let (vx, vy, vz) = (Vector::unit(x.1), Vector::unit(y.1), Vector::unit(z.1));
            let xy = self.multiply(x.0, &vx, y.0, &vy).expect("valid degrees");
            let left = self.multiply(self.product_degree(x.0, y.0), &xy, z.0, &vz).expect("valid degrees");
            let yz = self.multiply(y.0, &vy, z.0, &vz).expect("valid degrees");
            let right = self.multiply(x.0, &vx, self.product_degree(y.0, z.0), &yz).expect("valid degrees");
            if left != right {
                return Some([x, y, z]);
            }
        }
        None
    }
}

/// True iff `x` (homogeneous of degree `d`) is killed by every basis element
/// of every degree on both sides.
pub fn annihilator_check(g: &GradedAlgebra, d: usize, x: &Vector) -> Result<bool> {
    if x.is_zero() {
        return Ok(true);
    }
    for e in g.degrees() {
        for j in 0..g.dim(e) {
            let b = Vector::unit(j);
            if !g.multiply(d, x, e, &b)?.is_zero() || !g.multiply(e, &b, d, x)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The full exterior algebra Λℝᴺ with its ℤ₂ grading: degree 1 holds the odd
/// monomials, degree 2 the even ones including the unit `1`.
pub fn exterior_algebra(n: usize) -> Result<GradedAlgebra> {
    if !(1..=20).contains(&n) {
        return Err(Error::Invalid(format!("exterior algebra needs 1 <= N <= 20, got {n}")));
    }
    let parts = [wedge_monomials(n, |k| k % 2 == 1), wedge_monomials(n, |k| k % 2 == 0)];
    let index = |mask: u32| -> (usize, usize) {
        let d = if mask.count_ones() % 2 == 1 { 1 } else { 2 };
        (d, parts[d - 1].iter().position(|&m| m == mask).expect("monomial present"))
    };
    let mut products = BTreeMap::new();
    for (dx, px) in parts.iter().enumerate() {
        for (dy, py) in parts.iter().enumerate() {
            for (i, &a) in px.iter().enumerate() {
                for (j, &b) in py.iter().enumerate() {
                    if let Some(s) = wedge_sign(a, b) {
                        let (_, k) = index(a | b);
                        products.insert((dx + 1, i, dy + 1, j), Vector::scaled_unit(k, Scalar::from(s)));
                    }
                }
            }
        }
    }
    let labels = parts.iter().map(|p| p.iter().map(|&m| monomial_label(m, n)).collect()).collect();
    GradedAlgebra::new(format!("exterior{n}"), Field::Rational, 2, labels, products)
}
