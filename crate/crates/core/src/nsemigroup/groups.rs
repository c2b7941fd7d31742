use std::collections::{BTreeMap, HashSet};

use crate::{Error, Result};

use super::{NSemigroupTable, TernaryGroup};

/// Largest group order the enumerator accepts.
pub const MAX_SEARCH_ORDER: usize = 12;

/// A finite group given by its Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(name: impl Into<String>, labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("group table must be square and nonempty".into()));
        }
        let mut seen = HashSet::new();
        if let Some(l) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::Invalid(format!("duplicate element `{l}`")));
        }
        if table.iter().flatten().any(|&v| v >= n) {
            return Err(Error::Invalid("group table entry out of range".into()));
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(Error::NotAssociative(format!("({}, {}, {})", labels[x], labels[y], labels[z])));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Invalid("no identity element".into()))?;
        let inverse = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x][y] == identity && table[y][x] == identity)
                    .ok_or_else(|| Error::Invalid(format!("{} has no inverse", labels[x])))
            })
            .collect::<Result<_>>()?;
        Ok(GroupTable { name: name.into(), labels, table, identity, inverse })
    }

    fn from_fn(name: impl Into<String>, labels: Vec<String>, f: impl Fn(usize, usize) -> usize) -> Self {
        let n = labels.len();
        let table = (0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect();
        GroupTable::new(name, labels, table).expect("builder produces a group")
    }

    /// ℤ_k with elements `0..k`.
    pub fn cyclic(k: usize) -> Self {
        assert!(k >= 1);
        GroupTable::from_fn(format!("Z{k}"), (0..k).map(|i| i.to_string()).collect(), |x, y| (x + y) % k)
    }

    /// The dihedral group of order `2k`: rotations `r0..`, reflections `s0..`
    /// with `s_i = s·r^i`.
    pub fn dihedral(k: usize) -> Self {
        assert!(k >= 1);
        let labels = (0..k).map(|i| format!("r{i}")).chain((0..k).map(|i| format!("s{i}"))).collect();
        GroupTable::from_fn(format!("D{k}"), labels, |x, y| {
            let (a, i) = (x / k, x % k);
            let (b, j) = (y / k, y % k);
            let i = if b == 1 { (k - i) % k } else { i };
            ((a + b) % 2) * k + (i + j) % k
        })
    }

    /// The unit group (ℤ_m)^×.
    pub fn units_mod(m: usize) -> Self {
        assert!(m >= 2);
        let units: Vec<usize> = (1..m).filter(|&u| gcd(u, m) == 1).collect();
        let index: BTreeMap<usize, usize> = units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let labels = units.iter().map(usize::to_string).collect();
        GroupTable::from_fn(format!("U{m}"), labels, |x, y| index[&(units[x] * units[y] % m)])
    }

    pub fn direct_product(a: &GroupTable, b: &GroupTable) -> Self {
        let (na, nb) = (a.order(), b.order());
        let labels = (0..na)
            .flat_map(|x| (0..nb).map(move |y| (x, y)))
            .map(|(x, y)| format!("({},{})", a.labels[x], b.labels[y]))
            .collect();
        GroupTable::from_fn(format!("{}x{}", a.name, b.name), labels, |x, y| {
            a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Elements in breadth-first order from the identity, multiplying on the
    /// right by `gens`; `None` unless `gens` generate the group.
    fn bfs_order(&self, gens: &[usize]) -> Option<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut order = vec![self.identity];
        seen[self.identity] = true;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                }
            }
            i += 1;
        }
        (order.len() == n).then_some(order)
    }

    /// A generating tuple of least size, least in lexicographic order.
    pub fn minimal_generators(&self) -> Vec<usize> {
        self.canonical().1
    }

    /// Canonical table and the generating tuple that realises it.
    fn canonical(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.order();
        for r in 0..=n {
            let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
            for gens in tuples(n, r) {
                let Some(order) = self.bfs_order(&gens) else { continue };
                let mut label = vec![0; n];
                for (i, &x) in order.iter().enumerate() {
                    label[x] = i;
                }
                let mut form = Vec::with_capacity(n * n);
                for &x in &order {
                    for &y in &order {
                        form.push(label[self.mul(x, y)]);
                    }
                }
                if best.as_ref().map_or(true, |(b, _)| form < *b) {
                    best = Some((form, gens));
                }
            }
            if let Some(b) = best {
                return b;
            }
        }
        unreachable!("the whole group generates itself")
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn tuples(base: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    crate::nary_core::Tuples::new(base, len)
}

/// The multiplication table relabelled by breadth-first search from the
/// least generating tuple (of minimum size) that makes it lexicographically
/// least. Two groups are isomorphic iff their canonical forms are equal.
pub fn canonical_form(h: &GroupTable) -> Vec<usize> {
    h.canonical().0
}

fn from_canonical(order: usize, form: &[usize], name: String) -> GroupTable {
    let labels = (0..order).map(|i| format!("h{i}")).collect();
    let table = form.chunks(order).map(<[usize]>::to_vec).collect();
    GroupTable::new(name, labels, table).expect("canonical tables are groups")
}

const UNSET: usize = usize::MAX;

/// Cayley-table completion for groups of order `n` with an element `a` of
/// maximal order `k`. Element `c·k + j` stands for `r_c a^j`, where `r_c`
/// runs over representatives of the left cosets of `⟨a⟩` and `r_0 = e`,
/// so every product `x·a^j` is known in advance and each row is fixed by
/// its entries in the representative columns `c·k`.
struct Completion {
    n: usize,
    k: usize,
    t: Vec<usize>,
    /// `row_pos[x·n + v]`: the column `y` with `x·y = v`.
    row_pos: Vec<usize>,
    /// `col_pos[y·n + v]`: the row `x` with `x·y = v`.
    col_pos: Vec<usize>,
    trail: Vec<(usize, usize)>,
    queue: Vec<(usize, usize)>,
    found: BTreeMap<Vec<usize>, ()>,
}

impl Completion {
    fn new(n: usize, k: usize) -> Option<Self> {
        let mut s = Completion {
            n,
            k,
            t: vec![UNSET; n * n],
            row_pos: vec![UNSET; n * n],
            col_pos: vec![UNSET; n * n],
            trail: Vec::new(),
            queue: Vec::new(),
            found: BTreeMap::new(),
        };
        for x in 0..n {
            for j in 0..k {
                if !s.set(x, j, s.shift(x, j)) {
                    return None;
                }
            }
        }
        for c in 1..n / k {
            if !s.assign(0, c * k, c * k) {
                return None;
            }
        }
        s.propagate().then_some(s)
    }

    fn shift(&self, u: usize, j: usize) -> usize {
        (u / self.k) * self.k + (u % self.k + j) % self.k
    }

    fn get(&self, x: usize, y: usize) -> usize {
        self.t[x * self.n + y]
    }

    fn set(&mut self, x: usize, y: usize, v: usize) -> bool {
        let n = self.n;
        let cur = self.t[x * n + y];
        if cur != UNSET {
            return cur == v;
        }
        if self.row_pos[x * n + v] != UNSET || self.col_pos[y * n + v] != UNSET {
            return false;
        }
        self.t[x * n + y] = v;
        self.row_pos[x * n + v] = y;
        self.col_pos[y * n + v] = x;
        self.trail.push((x, y));
        self.queue.push((x, y));
        true
    }

    /// Sets `x·y = v` together with the forced entries `x·(y a^j)`.
    fn assign(&mut self, x: usize, y: usize, v: usize) -> bool {
        let cur = self.get(x, y);
        if cur != UNSET {
            return cur == v;
        }
        let (c, j) = (y / self.k, y % self.k);
        let base = self.shift(v, self.k - j);
        (0..self.k).all(|jj| {
            let u = self.shift(base, jj);
            self.set(x, c * self.k + jj, u)
        })
    }

    fn undo(&mut self, mark: usize) {
        let n = self.n;
        while self.trail.len() > mark {
            let (x, y) = self.trail.pop().unwrap();
            let v = self.t[x * n + y];
            self.t[x * n + y] = UNSET;
            self.row_pos[x * n + v] = UNSET;
            self.col_pos[y * n + v] = UNSET;
        }
        self.queue.clear();
    }

    /// Enforces `(pq)r = p(qr)` around every newly set cell, deducing
    /// entries when one side is known.
    fn propagate(&mut self) -> bool {
        let n = self.n;
        while let Some((x, y)) = self.queue.pop() {
            let v = self.get(x, y);
            for r in 0..n {
                // (x y) r = x (y r)
                let w = self.get(y, r);
                if w == UNSET {
                    continue;
                }
                let (lhs, rhs) = (self.get(v, r), self.get(x, w));
                let ok = match (lhs == UNSET, rhs == UNSET) {
                    (false, false) => lhs == rhs,
                    (false, true) => self.assign(x, w, lhs),
                    (true, false) => self.assign(v, r, rhs),
                    (true, true) => true,
                };
                if !ok {
                    return false;
                }
            }
            for p in 0..n {
                // (p x) y = p (x y)
                let u = self.get(p, x);
                if u == UNSET {
                    continue;
                }
                let (lhs, rhs) = (self.get(u, y), self.get(p, v));
                let ok = match (lhs == UNSET, rhs == UNSET) {
                    (false, false) => lhs == rhs,
                    (false, true) => self.assign(p, v, lhs),
                    (true, false) => self.assign(u, y, rhs),
                    (true, true) => true,
                };
                if !ok {
                    return false;
                }
            }
            for p in 0..n {
                // x = p q: (p q) y = p (q y), so q y is the column of v in row p
                let q = self.row_pos[p * n + x];
                if q == UNSET {
                    continue;
                }
                let w = self.get(q, y);
                let ok = if w != UNSET {
                    let rhs = self.get(p, w);
                    if rhs == UNSET {
                        self.assign(p, w, v)
                    } else {
                        rhs == v
                    }
                } else {
                    let z = self.row_pos[p * n + v];
                    z == UNSET || self.assign(q, y, z)
                };
                if !ok {
                    return false;
                }
            }
            for q in 0..n {
                // y = q r: x (q r) = (x q) r, so x q is the row of v in column r
                let r = self.row_pos[q * n + y];
                if r == UNSET {
                    continue;
                }
                let u = self.get(x, q);
                let ok = if u != UNSET {
                    let lhs = self.get(u, r);
                    if lhs == UNSET {
                        self.assign(u, r, v)
                    } else {
                        lhs == v
                    }
                } else {
                    let z = self.col_pos[r * n + v];
                    z == UNSET || self.assign(x, q, z)
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn next_free(&self) -> Option<(usize, usize)> {
        let blocks = self.n / self.k;
        (0..self.n)
            .flat_map(|x| (1..blocks).map(move |c| (x, c * self.k)))
            .find(|&(x, y)| self.get(x, y) == UNSET)
    }

    /// Some element provably has order above `k`.
    fn order_exceeds_k(&self) -> bool {
        (1..self.n).any(|x| {
            let mut y = x;
            for _ in 1..self.k {
                y = self.get(y, x);
                if y == 0 || y == UNSET {
                    return false;
                }
            }
            true
        })
    }

    fn search(&mut self) {
        if self.order_exceeds_k() {
            return;
        }
        let Some((x, y)) = self.next_free() else {
            self.record();
            return;
        };
        for v in 0..self.n {
            if self.row_pos[x * self.n + v] != UNSET {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(x, y, v) && self.propagate() {
                self.search();
            }
            self.undo(mark);
        }
    }

    fn record(&mut self) {
        let n = self.n;
        let table: Vec<Vec<usize>> = self.t.chunks(n).map(<[usize]>::to_vec).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        let Ok(g) = GroupTable::new("candidate", labels, table) else { return };
        if (0..n).all(|x| g.element_order(x) <= self.k) {
            self.found.insert(canonical_form(&g), ());
        }
    }
}

/// All groups of order `n` up to isomorphism, sorted by canonical form and
/// named `G<n>_<i>`.
pub fn enumerate_groups(n: usize) -> Result<Vec<GroupTable>> {
    if n == 0 || n > MAX_SEARCH_ORDER {
        return Err(Error::Invalid(format!("group order must be in 1..={MAX_SEARCH_ORDER}, got {n}")));
    }
    let mut forms: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
    for k in (1..=n).filter(|&k| n % k == 0 && (k > 1 || n == 1)) {
        if let Some(mut s) = Completion::new(n, k) {
            s.search();
            forms.append(&mut s.found);
        }
    }
    Ok(forms
        .into_keys()
        .enumerate()
        .map(|(i, f)| from_canonical(n, &f, format!("G{n}_{}", i + 1)))
        .collect())
}

/// All surjective homomorphisms `H → ℤ_m`, as residue vectors, sorted.
pub fn gradings(h: &GroupTable, m: usize) -> Vec<Vec<usize>> {
    let gens = h.minimal_generators();
    let mut out = Vec::new();
    for values in tuples(m, gens.len()) {
        let Some(order) = h.bfs_order(&gens) else { continue };
        let mut gamma = vec![UNSET; h.order()];
        gamma[h.identity()] = 0;
        for &x in &order {
            for (g, &val) in gens.iter().zip(&values) {
                let y = h.mul(x, *g);
                if gamma[y] == UNSET {
                    gamma[y] = (gamma[x] + val) % m;
                }
            }
        }
        let n = h.order();
        let hom = (0..n).all(|x| (0..n).all(|y| gamma[h.mul(x, y)] == (gamma[x] + gamma[y]) % m));
        let onto = (0..m).all(|r| gamma.contains(&r));
        if hom && onto {
            out.push(gamma);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn check_grading(h: &GroupTable, grading: &[usize], m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::Invalid(format!("grading modulus must be at least 2, got {m}")));
    }
    if grading.len() != h.order() {
        return Err(Error::DimensionMismatch { expected: h.order(), found: grading.len() });
    }
    let n = h.order();
    for x in 0..n {
        for y in 0..n {
            if grading[h.mul(x, y)] % m != (grading[x] + grading[y]) % m {
                return Err(Error::NotHomomorphism(format!(
                    "grading of {} fails on ({}, {})",
                    h.name(),
                    h.labels()[x],
                    h.labels()[y]
                )));
            }
        }
    }
    Ok(())
}

/// The fiber over 1 of a grading `γ: H → ℤ_m` as an (m+1)-ary semigroup
/// under the group product.
pub fn graded_group_degree1(h: &GroupTable, grading: &[usize], m: usize) -> Result<NSemigroupTable> {
    check_grading(h, grading, m)?;
    let fiber: Vec<usize> = (0..h.order()).filter(|&x| grading[x] % m == 1).collect();
    if fiber.is_empty() {
        return Err(Error::Invalid(format!("the degree-1 fiber of {} is empty", h.name())));
    }
    let index: BTreeMap<usize, usize> = fiber.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let labels = fiber.iter().map(|&x| h.labels()[x].clone()).collect();
    NSemigroupTable::from_fn(format!("{}_1", h.name()), m + 1, labels, |t| {
        index[&t.iter().fold(h.identity(), |acc, &i| h.mul(acc, fiber[i]))]
    })
}

/// The degree-1 part of a ℤ₂-graded group as a ternary group, with the
/// inverse inherited from the group.
pub fn graded_group_ternary(h: &GroupTable, grading: &[usize]) -> Result<TernaryGroup> {
    let table = graded_group_degree1(h, grading, 2)?;
    let fiber: Vec<usize> = (0..h.order()).filter(|&x| grading[x] % 2 == 1).collect();
    let inverse = fiber
        .iter()
        .map(|&x| fiber.iter().position(|&y| y == h.inverse(x)).expect("inverse of degree 1 has degree 1"))
        .collect();
    TernaryGroup::new(table, inverse)
}

/// A ℤ₂-graded group with an injection of the ternary group into its
/// degree-1 part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingWitness {
    pub group: GroupTable,
    pub grading: Vec<usize>,
    /// `injection[g]` is the element of `group` that `g` is sent to.
    pub injection: Vec<usize>,
}

/// Outcome of [`search_group_embedding`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub found: Option<EmbeddingWitness>,
    /// The only order that needs enumerating: `2|G|`.
    pub searched_order: usize,
    pub groups_examined: usize,
    /// When nothing is found: no group of order up to this bound works.
    pub exhausted_order: Option<usize>,
}

/// Looks for a group `H` with a grading onto ℤ₂ and an injection of `G`
/// into the degree-1 part that preserves the ternary product and the
/// inverse.
///
/// If such an `H` exists, the subgroup generated by the image has degree-1
/// part exactly the image and order exactly `2|G|`, so enumerating the
/// groups of order `2|G|` decides the question for every `max_order`.
pub fn search_group_embedding(g: &TernaryGroup, max_order: usize) -> Result<EmbeddingReport> {
    let order = 2 * g.size();
    if max_order < order {
        return Err(Error::Invalid(format!("max order {max_order} is below 2|G| = {order}")));
    }
    let groups = enumerate_groups(order)?;
    let mut examined = 0;
    for h in groups {
        examined += 1;
        for grading in gradings(&h, 2) {
            let fiber: Vec<usize> = (0..h.order()).filter(|&x| grading[x] == 1).collect();
            let mut injection = vec![UNSET; g.size()];
            let mut used = vec![false; h.order()];
            if find_injection(g, &h, &fiber, 0, &mut injection, &mut used) {
                return Ok(EmbeddingReport {
                    found: Some(EmbeddingWitness { group: h, grading, injection }),
                    searched_order: order,
                    groups_examined: examined,
                    exhausted_order: None,
                });
            }
        }
    }
    Ok(EmbeddingReport { found: None, searched_order: order, groups_examined: examined, exhausted_order: Some(max_order) })
}

fn find_injection(
    g: &TernaryGroup,
    h: &GroupTable,
    fiber: &[usize],
    next: usize,
    injection: &mut [usize],
    used: &mut [bool],
) -> bool {
    if next == g.size() {
        return true;
    }
    for &x in fiber {
        if used[x] {
            continue;
        }
        injection[next] = x;
        used[x] = true;
        if consistent(g, h, injection, next) && find_injection(g, h, fiber, next + 1, injection, used) {
            return true;
        }
        used[x] = false;
        injection[next] = UNSET;
    }
    false
}

/// Checks every constraint that involves `last` and only assigned elements.
fn consistent(g: &TernaryGroup, h: &GroupTable, inj: &[usize], last: usize) -> bool {
    let assigned = |x: usize| inj[x] != UNSET;
    let inv = g.inverse(last);
    if assigned(inv) && inj[inv] != h.inverse(inj[last]) {
        return false;
    }
    let k = g.size();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                if ![a, b, c].contains(&last) && g.m(a, b, c) != last {
                    continue;
                }
                let d = g.m(a, b, c);
                if [a, b, c, d].iter().all(|&x| assigned(x))
                    && inj[d] != h.mul(h.mul(inj[a], inj[b]), inj[c])
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Checks a witness independently of the search.
pub fn verify_witness(g: &TernaryGroup, w: &EmbeddingWitness) -> bool {
    let h = &w.group;
    let k = g.size();
    let distinct: HashSet<usize> = w.injection.iter().copied().collect();
    distinct.len() == k
        && check_grading(h, &w.grading, 2).is_ok()
        && w.injection.iter().all(|&x| w.grading[x] == 1)
        && (0..k).all(|x| w.injection[g.inverse(x)] == h.inverse(w.injection[x]))
        && (0..k).all(|a| {
            (0..k).all(|b| {
                (0..k).all(|c| {
                    w.injection[g.m(a, b, c)] == h.mul(h.mul(w.injection[a], w.injection[b]), w.injection[c])
                })
            })
        })
}
