use std::collections::BTreeMap;

use crate::envelope::{combine_degrees, degree_of_length};
use crate::guard;
use crate::nary_core::Tuples;
use crate::{Error, Result};

use super::{check_nsg_associativity, GroupTable, NSemigroupTable};

/// Default word cap `2(2n − 1)`.
pub fn default_max_len(n: usize) -> usize {
    2 * (2 * n - 1)
}

/// A congruence class of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SgClass {
    pub degree: usize,
    /// Shortest, then lexicographically least, word in the class.
    pub representative: Vec<usize>,
    /// Number of words of length at most the cap in the class.
    pub size: usize,
}

/// Words of length `1..=L` modulo the congruence generated by contracting
/// any `n` consecutive letters to their product.
#[derive(Clone, Debug)]
pub struct SgEnvelope {
    table: NSemigroupTable,
    max_len: usize,
    offsets: Vec<usize>,
    word_class: Vec<usize>,
    classes: Vec<SgClass>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

fn word_index(w: &[usize], k: usize) -> usize {
    w.iter().fold(0, |acc, &x| acc * k + x)
}

/// Builds the congruence by union-find over every word of length at most
/// `max_len`, uniting each word with each of its single contractions.
pub fn build_sg_envelope(t: &NSemigroupTable, max_len: usize) -> Result<SgEnvelope> {
    let n = t.arity();
    if max_len < 2 * n - 1 {
        return Err(Error::Invalid(format!("word cap {max_len} is below 2n-1 = {}", 2 * n - 1)));
    }
    if let Some(w) = check_nsg_associativity(t)?.witness {
        return Err(Error::NotAssociative(format!(
            "{}: positions {} and {} disagree on {:?}",
            t.name(),
            w.i,
            w.j,
            w.tuple
        )));
    }
    let k = t.size();
    let total: u128 = (1..=max_len).map(|l| guard::power(k, l)).sum();
    guard::check(format!("words of length <= {max_len}"), total, guard::coord_budget())?;
    let mut offsets = vec![0; max_len + 2];
    for l in 1..=max_len {
        offsets[l + 1] = offsets[l] + k.pow(l as u32);
    }
    let total = offsets[max_len + 1];
    let mut uf = UnionFind((0..total).collect());
    let mut shorter = Vec::with_capacity(max_len);
    for len in n..=max_len {
        for (idx, w) in Tuples::new(k, len).enumerate() {
            for i in 0..=len - n {
                shorter.clear();
                shorter.extend_from_slice(&w[..i]);
                shorter.push(t.op(&w[i..i + n]));
                shorter.extend_from_slice(&w[i + n..]);
                let sid = offsets[shorter.len()] + word_index(&shorter, k);
                uf.union(offsets[len] + idx, sid);
            }
        }
    }
    // roots are the least word ids, hence the shortest-then-least words
    let mut root_class: BTreeMap<usize, usize> = BTreeMap::new();
    let mut word_class = vec![0; total];
    let mut found: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    for len in 1..=max_len {
        for (idx, w) in Tuples::new(k, len).enumerate() {
            let id = offsets[len] + idx;
            let root = uf.find(id);
            let c = *root_class.entry(root).or_insert_with(|| {
                found.push((degree_of_length(len, n), w.clone(), 0));
                found.len() - 1
            });
            found[c].2 += 1;
            word_class[id] = c;
        }
    }
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&found[a], &found[b]);
        (x.0, x.1.len(), &x.1).cmp(&(y.0, y.1.len(), &y.1))
    });
    let mut renumber = vec![0; found.len()];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new;
    }
    for c in &mut word_class {
        *c = renumber[*c];
    }
    let classes = order
        .into_iter()
        .map(|c| {
            let (degree, representative, size) = found[c].clone();
            SgClass { degree, representative, size }
        })
        .collect();
    Ok(SgEnvelope { table: t.clone(), max_len, offsets, word_class, classes })
}

impl SgEnvelope {
    pub fn table(&self) -> &NSemigroupTable {
        &self.table
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn modulus(&self) -> usize {
        self.table.arity() - 1
    }

    pub fn classes(&self) -> &[SgClass] {
        &self.classes
    }

    /// Class indices of degree `d`.
    pub fn classes_of_degree(&self, d: usize) -> Vec<usize> {
        (0..self.classes.len()).filter(|&c| self.classes[c].degree == d).collect()
    }

    pub fn counts(&self) -> Vec<usize> {
        (1..=self.modulus()).map(|d| self.classes_of_degree(d).len()).collect()
    }

    /// Class of a nonempty word; words beyond the cap are first shortened by
    /// contracting their leftmost `n` letters.
    pub fn class_of(&self, word: &[usize]) -> Result<usize> {
        if word.is_empty() || word.iter().any(|&x| x >= self.table.size()) {
            return Err(Error::Invalid(format!("not a word over the table: {word:?}")));
        }
        let n = self.table.arity();
        let mut w = word.to_vec();
        while w.len() > self.max_len {
            let head = self.table.op(&w[..n]);
            w.splice(..n, [head]);
        }
        Ok(self.word_class[self.offsets[w.len()] + word_index(&w, self.table.size())])
    }

    /// Class of the one-letter word `g`.
    pub fn embed(&self, g: usize) -> usize {
        self.word_class[self.offsets[1] + g]
    }

    /// Concatenation of representatives.
    pub fn product(&self, a: usize, b: usize) -> usize {
        let mut w = self.classes[a].representative.clone();
        w.extend_from_slice(&self.classes[b].representative);
        self.class_of(&w).expect("representatives are words")
    }

    /// Degree-1 classes are exactly the one-letter words, pairwise distinct.
    pub fn degree_one_is_bijective(&self) -> bool {
        let ones = self.classes_of_degree(1);
        let mut hit = vec![false; self.classes.len()];
        for g in 0..self.table.size() {
            let c = self.embed(g);
            if hit[c] {
                return false;
            }
            hit[c] = true;
        }
        ones.len() == self.table.size()
    }

    /// Checks `w ∼ w′ ⇒ xw ∼ xw′ and wx ∼ w′x` for every word `w` below the
    /// cap, every letter `x`, and `w′` the representative of `w`.
    pub fn congruence_is_sound(&self) -> bool {
        let k = self.table.size();
        for len in 1..self.max_len {
            for (idx, w) in Tuples::new(k, len).enumerate() {
                let rep = &self.classes[self.word_class[self.offsets[len] + idx]].representative;
                for x in 0..k {
                    let (mut xw, mut xr) = (vec![x], vec![x]);
                    xw.extend_from_slice(&w);
                    xr.extend_from_slice(rep);
                    let (mut wx, mut rx) = (w.clone(), rep.clone());
                    wx.push(x);
                    rx.push(x);
                    let same = |a: &[usize], b: &[usize]| self.class_of(a).ok() == self.class_of(b).ok();
                    if !same(&xw, &xr) || !same(&wx, &rx) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn render_class(&self, c: usize) -> String {
        let e = self.table.elements();
        self.classes[c].representative.iter().map(|&x| e[x].as_str()).collect::<Vec<_>>().join("*")
    }

    /// The envelope as an explicit graded semigroup on its classes.
    pub fn to_graded(&self) -> GradedSemigroup {
        let m = self.classes.len();
        GradedSemigroup {
            name: format!("O({})", self.table.name()),
            modulus: self.modulus(),
            elements: (0..m).map(|c| self.render_class(c)).collect(),
            degrees: self.classes.iter().map(|c| c.degree).collect(),
            table: (0..m).map(|a| (0..m).map(|b| self.product(a, b)).collect()).collect(),
        }
    }
}

/// Class counts per degree for each word cap.
pub fn sg_stabilization(t: &NSemigroupTable, caps: &[usize]) -> Result<Vec<(usize, Vec<usize>)>> {
    caps.iter().map(|&l| Ok((l, build_sg_envelope(t, l)?.counts()))).collect()
}

/// A finite semigroup with a ℤ_m grading on its elements (degrees `1..=m`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSemigroup {
    name: String,
    modulus: usize,
    elements: Vec<String>,
    degrees: Vec<usize>,
    table: Vec<Vec<usize>>,
}

impl GradedSemigroup {
    /// Checks closure, associativity and `deg(xy) = deg(x) ∘ deg(y)`.
    pub fn new(
        name: impl Into<String>,
        modulus: usize,
        elements: Vec<String>,
        degrees: Vec<usize>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let size = elements.len();
        if modulus < 1 || degrees.len() != size || table.len() != size || table.iter().any(|r| r.len() != size) {
            return Err(Error::Invalid("graded semigroup has inconsistent sizes".into()));
        }
        if degrees.iter().any(|d| !(1..=modulus).contains(d)) || table.iter().flatten().any(|&v| v >= size) {
            return Err(Error::Invalid("graded semigroup entry out of range".into()));
        }
        for x in 0..size {
            for y in 0..size {
                if degrees[table[x][y]] != combine_degrees(degrees[x], degrees[y], modulus) {
                    return Err(Error::Invalid(format!(
                        "{} * {} has the wrong degree",
                        elements[x], elements[y]
                    )));
                }
                for z in 0..size {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(Error::NotAssociative(format!(
                            "({}, {}, {})",
                            elements[x], elements[y], elements[z]
                        )));
                    }
                }
            }
        }
        Ok(GradedSemigroup { name: name.into(), modulus, elements, degrees, table })
    }

    /// A group graded by a homomorphism `γ: H → ℤ_m` given as residues `0..m`;
    /// residue 0 becomes degree `m`.
    pub fn from_group(h: &GroupTable, grading: &[usize], modulus: usize) -> Result<Self> {
        if grading.len() != h.order() {
            return Err(Error::DimensionMismatch { expected: h.order(), found: grading.len() });
        }
        let degrees = grading.iter().map(|&r| if r % modulus == 0 { modulus } else { r % modulus }).collect();
        let table = (0..h.order()).map(|x| (0..h.order()).map(|y| h.mul(x, y)).collect()).collect();
        GradedSemigroup::new(h.name(), modulus, h.labels().to_vec(), degrees, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn degree(&self, x: usize) -> usize {
        self.degrees[x]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn element_index(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }
}

/// Outcome of [`sg_universality_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalityReport {
    pub max_len: usize,
    /// `ρ̂` on envelope classes.
    pub class_map: Vec<usize>,
    /// Every word of a class has the same image.
    pub well_defined: bool,
    /// `ρ̂([g]) = ρ(g)` for every element.
    pub commutes: bool,
    /// `ρ̂(ab) = ρ̂(a)ρ̂(b)` on all class pairs.
    pub multiplicative: bool,
    /// Image of the classes of each degree, as sorted element indices of `N`.
    pub image_by_degree: Vec<Vec<usize>>,
}

/// Extends `rho: T → N_1` to envelope classes by multiplying the images of
/// the letters, and checks the extension on every word up to `max_len`.
pub fn sg_universality_check(
    t: &NSemigroupTable,
    target: &GradedSemigroup,
    rho: &[usize],
    max_len: usize,
) -> Result<UniversalityReport> {
    let n = t.arity();
    if target.modulus != n - 1 {
        return Err(Error::Invalid(format!(
            "target grading modulus is {}, expected {}",
            target.modulus,
            n - 1
        )));
    }
    if rho.len() != t.size() {
        return Err(Error::DimensionMismatch { expected: t.size(), found: rho.len() });
    }
    if let Some(g) = (0..t.size()).find(|&g| rho[g] >= target.size() || target.degrees[rho[g]] != 1) {
        return Err(Error::NotHomomorphism(format!("{} is not sent into degree 1", t.elements()[g])));
    }
    for (tuple, v) in t.entries() {
        let prod = tuple[1..].iter().fold(rho[tuple[0]], |acc, &x| target.mul(acc, rho[x]));
        if prod != rho[v] {
            let labels: Vec<&str> = tuple.iter().map(|&x| t.elements()[x].as_str()).collect();
            return Err(Error::NotHomomorphism(format!("fails on ({})", labels.join(", "))));
        }
    }
    let env = build_sg_envelope(t, max_len)?;
    let k = t.size();
    let mut class_map: Vec<Option<usize>> = vec![None; env.classes.len()];
    let mut well_defined = true;
    let mut prev: Vec<usize> = vec![];
    for len in 1..=max_len {
        let mut images = Vec::with_capacity(k.pow(len as u32));
        for (idx, w) in Tuples::new(k, len).enumerate() {
            let img = if len == 1 { rho[w[0]] } else { target.mul(prev[idx / k], rho[w[len - 1]]) };
            images.push(img);
            let c = env.word_class[env.offsets[len] + idx];
            match class_map[c] {
                None => class_map[c] = Some(img),
                Some(v) if v != img => well_defined = false,
                Some(_) => {}
            }
        }
        prev = images;
    }
    let class_map: Vec<usize> = class_map.into_iter().map(|c| c.expect("every class has a word")).collect();
    let commutes = (0..k).all(|g| class_map[env.embed(g)] == rho[g]);
    let m = env.classes.len();
    let multiplicative =
        (0..m).all(|a| (0..m).all(|b| class_map[env.product(a, b)] == target.mul(class_map[a], class_map[b])));
    let image_by_degree = (1..n)
        .map(|d| {
            let mut img: Vec<usize> = env.classes_of_degree(d).iter().map(|&c| class_map[c]).collect();
            img.sort_unstable();
            img.dedup();
            img
        })
        .collect();
    Ok(UniversalityReport { max_len, class_map, well_defined, commutes, multiplicative, image_by_degree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nsemigroup::{odd_residues_product, odd_residues_sum, trivial_nsemigroup};

    /// Classes by brute-force closure of single contractions and their
    /// inverses, independent of the union-find.
    fn oracle_counts(t: &NSemigroupTable, max_len: usize) -> Vec<usize> {
        let n = t.arity();
        let k = t.size();
        let mut words: Vec<Vec<usize>> = Vec::new();
        for l in 1..=max_len {
            words.extend(Tuples::new(k, l));
        }
        let index: BTreeMap<Vec<usize>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); words.len()];
        for (id, w) in words.iter().enumerate() {
            for i in 0..(w.len() + 1).saturating_sub(n) {
                let mut s = w[..i].to_vec();
                s.push(t.op(&w[i..i + n]));
                s.extend_from_slice(&w[i + n..]);
                let sid = index[&s];
                adj[id].push(sid);
                adj[sid].push(id);
            }
        }
        let mut comp = vec![usize::MAX; words.len()];
        let mut counts = vec![0; n - 1];
        for start in 0..words.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            counts[degree_of_length(words[start].len(), n) - 1] += 1;
            let mut stack = vec![start];
            comp[start] = start;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = start;
                        stack.push(y);
                    }
                }
            }
        }
        counts
    }

    #[test]
    fn odd_residues_mod_8() {
        let t = odd_residues_product(8, 3).unwrap();
        let e = build_sg_envelope(&t, 5).unwrap();
        assert_eq!(e.counts(), vec![4, 4]);
        assert_eq!(oracle_counts(&t, 5), vec![4, 4]);
        assert!(e.degree_one_is_bijective());
        assert!(e.congruence_is_sound());
        assert_eq!(build_sg_envelope(&t, 7).unwrap().counts(), vec![4, 4]);
        // (u, d) ∼ (1, ud): every degree-2 class has a representative starting with 1
        for c in e.classes_of_degree(2) {
            assert_eq!(e.classes()[c].representative[0], 0);
        }
    }

    #[test]
    fn small_examples() {
        let e = build_sg_envelope(&trivial_nsemigroup(3), 5).unwrap();
        assert_eq!(e.counts(), vec![1, 1]);
        let t = odd_residues_sum(4, 3).unwrap();
        let e = build_sg_envelope(&t, 5).unwrap();
        assert_eq!(e.counts()[0], 2);
        assert_eq!(e.counts(), oracle_counts(&t, 5));
        let e4 = build_sg_envelope(&trivial_nsemigroup(4), 7).unwrap();
        assert_eq!(e4.counts(), vec![1, 1, 1]);
    }

    #[test]
    fn envelope_matches_oracle_and_is_graded() {
        for t in [odd_residues_product(8, 3).unwrap(), odd_residues_sum(8, 3).unwrap(), odd_residues_product(4, 4).unwrap()] {
            let l = 2 * t.arity() - 1;
            let e = build_sg_envelope(&t, l).unwrap();
            assert_eq!(e.counts(), oracle_counts(&t, l), "{}", t.name());
            assert!(e.degree_one_is_bijective());
            assert!(e.congruence_is_sound());
            let g = e.to_graded();
            // associativity and degree rule are checked by the constructor
            GradedSemigroup::new("copy", g.modulus, g.elements.clone(), g.degrees.clone(), g.table.clone()).unwrap();
        }
    }

    #[test]
    fn rejects_bad_input() {
        let t = odd_residues_product(8, 3).unwrap();
        assert!(build_sg_envelope(&t, 4).is_err());
        // middle projection: m(m(a,b,c),d,e) = d but m(a,m(b,c,d),e) = c
        let bad = NSemigroupTable::from_fn("middle", 3, vec!["a".into(), "b".into()], |w| w[1]).unwrap();
        assert!(matches!(build_sg_envelope(&bad, 5), Err(Error::NotAssociative(_))));
    }

    #[test]
    fn universality_into_own_envelope() {
        let t = odd_residues_product(8, 3).unwrap();
        let e = build_sg_envelope(&t, 5).unwrap();
        let n = e.to_graded();
        let rho: Vec<usize> = (0..t.size()).map(|g| e.embed(g)).collect();
        let r = sg_universality_check(&t, &n, &rho, 5).unwrap();
        assert!(r.well_defined && r.commutes && r.multiplicative);
        assert_eq!(r.class_map, (0..e.classes().len()).collect::<Vec<_>>());
    }

    #[test]
    fn universality_into_z4() {
        let t = odd_residues_sum(4, 3).unwrap();
        let z4 = GroupTable::cyclic(4);
        let n = GradedSemigroup::from_group(&z4, &[0, 1, 0, 1], 2).unwrap();
        let rho = [n.element_index("1").unwrap(), n.element_index("3").unwrap()];
        let r = sg_universality_check(&t, &n, &rho, 5).unwrap();
        assert!(r.well_defined && r.commutes && r.multiplicative);
        let evens = vec![n.element_index("0").unwrap(), n.element_index("2").unwrap()];
        assert_eq!(r.image_by_degree[1], evens);
        let one = n.element_index("1").unwrap();
        assert!(matches!(sg_universality_check(&t, &n, &[one, one], 5), Err(Error::NotHomomorphism(_))));
    }
}
