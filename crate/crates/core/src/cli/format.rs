//! The line-oriented stanza format read and written by the command-line tool.
//!
//! ```text
//! algebra ext3          # a stanza runs from its header to `end`
//! field Q
//! n 3
//! dim 4
//! basis e1 e2 e3 e123
//! prod e1 e2 e3 : 1 e123
//! end
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::envelope::{degree_of_length, GradedAlgebra, ProductKey};
use crate::exactlin::{Matrix, Scalar, Vector};
use crate::nary_core::{Field, NAryAlgebra};
use crate::nsemigroup::{NSemigroupTable, TernaryGroup};
use crate::{Error, Result};

/// A linear map given on basis elements, `to` being an algebra or the degree-1
/// part of a graded algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDef {
    pub name: String,
    pub from: String,
    pub to: String,
    pub source_labels: Vec<String>,
    pub target_labels: Vec<String>,
    /// Image of each source basis element, in target coordinates.
    pub images: Vec<Vector>,
}

impl MapDef {
    /// One column per source basis element.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(self.target_labels.len(), &self.images)
    }
}

/// A homogeneous generator: a combination of tensor words of the same degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealGenerator {
    pub degree: usize,
    pub terms: Vec<(Scalar, Vec<usize>)>,
}

/// Generators of a two-sided ideal in the envelope of an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealDef {
    pub name: String,
    pub within: String,
    pub labels: Vec<String>,
    pub generators: Vec<IdealGenerator>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Algebra(NAryAlgebra),
    Graded(GradedAlgebra),
    NSemigroup(NSemigroupTable),
    TernaryGroup(TernaryGroup),
    Map(MapDef),
    Ideal(IdealDef),
}

impl Object {
    pub fn name(&self) -> &str {
        match self {
            Object::Algebra(a) => a.name(),
            Object::Graded(g) => g.name(),
            Object::NSemigroup(t) => t.name(),
            Object::TernaryGroup(t) => t.name(),
            Object::Map(m) => &m.name,
            Object::Ideal(i) => &i.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Object::Algebra(_) => "algebra",
            Object::Graded(_) => "gradedalgebra",
            Object::NSemigroup(_) => "nsemigroup",
            Object::TernaryGroup(_) => "ternarygroup",
            Object::Map(_) => "map",
            Object::Ideal(_) => "ideal",
        }
    }
}

/// Parsed stanzas in file order; names are unique.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecFile {
    objects: Vec<Object>,
}

impl SpecFile {
    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn get(&self, name: &str) -> Option<&Object> {
        self.objects.iter().find(|o| o.name() == name)
    }

    pub fn push(&mut self, o: Object) -> Result<()> {
        if self.get(o.name()).is_some() {
            return Err(Error::Invalid(format!("duplicate stanza name `{}`", o.name())));
        }
        self.objects.push(o);
        Ok(())
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// One content line of a stanza: its number, keyword and the rest.
struct Line<'a> {
    no: usize,
    key: &'a str,
    rest: &'a str,
}

impl<'a> Line<'a> {
    fn tokens(&self) -> Vec<&'a str> {
        self.rest.split_whitespace().collect()
    }

    /// Splits `lhs : rhs` into token lists.
    fn colon(&self) -> Result<(Vec<&'a str>, Vec<&'a str>)> {
        let (l, r) = self
            .rest
            .split_once(':')
            .ok_or_else(|| perr(self.no, format!("`{}` line needs a `:`", self.key)))?;
        Ok((l.split_whitespace().collect(), r.split_whitespace().collect()))
    }

    fn single(&self) -> Result<&'a str> {
        match self.tokens()[..] {
            [t] => Ok(t),
            _ => Err(perr(self.no, format!("`{}` takes exactly one value", self.key))),
        }
    }

    fn int(&self) -> Result<usize> {
        let t = self.single()?;
        t.parse().map_err(|_| perr(self.no, format!("`{t}` is not a nonnegative integer")))
    }
}

struct Stanza<'a> {
    header: usize,
    kind: &'a str,
    args: Vec<&'a str>,
    lines: Vec<Line<'a>>,
}

impl<'a> Stanza<'a> {
    fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.lines.iter().find(|l| !allowed.contains(&l.key)) {
            Some(l) => Err(perr(l.no, format!("unknown keyword `{}` in {} stanza", l.key, self.kind))),
            None => Ok(()),
        }
    }

    fn unique(&self, key: &str) -> Result<Option<&Line<'a>>> {
        let mut it = self.lines.iter().filter(|l| l.key == key);
        let first = it.next();
        match it.next() {
            Some(l) => Err(perr(l.no, format!("repeated `{key}` line"))),
            None => Ok(first),
        }
    }

    fn required(&self, key: &str) -> Result<&Line<'a>> {
        self.unique(key)?.ok_or_else(|| perr(self.header, format!("{} stanza lacks a `{key}` line", self.kind)))
    }

    fn all(&self, key: &'a str) -> impl Iterator<Item = &Line<'a>> + '_ {
        self.lines.iter().filter(move |l| l.key == key)
    }

    fn name(&self) -> Result<String> {
        let name = self.args.first().ok_or_else(|| perr(self.header, format!("{} stanza needs a name", self.kind)))?;
        check_token(self.header, name)?;
        Ok(name.to_string())
    }
}

fn check_token(line: usize, t: &str) -> Result<()> {
    if t.contains([':', '*', '#']) {
        return Err(perr(line, format!("`{t}` may not contain `:`, `*` or `#`")));
    }
    Ok(())
}

fn label_list(line: usize, tokens: &[&str]) -> Result<Vec<String>> {
    let mut seen = HashSet::new();
    for t in tokens {
        check_token(line, t)?;
        if !seen.insert(*t) {
            return Err(perr(line, format!("duplicate label `{t}`")));
        }
    }
    Ok(tokens.iter().map(|t| t.to_string()).collect())
}

fn index_of(line: usize, labels: &[String], t: &str) -> Result<usize> {
    labels.iter().position(|l| l == t).ok_or_else(|| perr(line, format!("unknown label `{t}`")))
}

fn scalar(line: usize, t: &str) -> Result<Scalar> {
    t.parse().map_err(|e: Error| perr(line, e.to_string()))
}

fn field(line: &Line) -> Result<Field> {
    match line.single()? {
        "Q" => Ok(Field::Rational),
        "Qw" => Ok(Field::Cyclotomic),
        other => Err(perr(line.no, format!("unknown field `{other}`, expected Q or Qw"))),
    }
}

/// `<coef> <label> ...` as a vector over `labels`.
fn linear_terms(line: usize, tokens: &[&str], labels: &[String]) -> Result<Vector> {
    if tokens.len() % 2 != 0 {
        return Err(perr(line, "terms must be `<coef> <label>` pairs"));
    }
    let mut v = Vector::new();
    for pair in tokens.chunks(2) {
        v.add_at(index_of(line, labels, pair[1])?, &scalar(line, pair[0])?);
    }
    Ok(v)
}

/// `<coef> <word> ...` with words of labels joined by `*`.
pub fn word_terms(line: usize, tokens: &[&str], labels: &[String]) -> Result<Vec<(Scalar, Vec<usize>)>> {
    if tokens.len() % 2 != 0 || tokens.is_empty() {
        return Err(perr(line, "terms must be nonempty `<coef> <word>` pairs"));
    }
    tokens
        .chunks(2)
        .map(|pair| {
            let word = pair[1].split('*').map(|t| index_of(line, labels, t)).collect::<Result<Vec<_>>>()?;
            Ok((scalar(line, pair[0])?, word))
        })
        .collect()
}

/// Parses every stanza; semantic failures are reported at the stanza header.
pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let mut file = SpecFile::default();
    let mut current: Option<Stanza> = None;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        match current.as_mut() {
            None => {
                if !["algebra", "gradedalgebra", "nsemigroup", "ternarygroup", "map", "ideal"].contains(&key) {
                    return Err(perr(no, format!("expected a stanza header, found `{key}`")));
                }
                current = Some(Stanza { header: no, kind: key, args: rest.split_whitespace().collect(), lines: vec![] });
            }
            Some(_) if key == "end" => {
                if !rest.trim().is_empty() {
                    return Err(perr(no, "`end` takes no arguments"));
                }
                let s = current.take().unwrap();
                let header = s.header;
                let obj = build(&s, &file)?;
                file.push(obj).map_err(|e| perr(header, e.to_string()))?;
            }
            Some(s) => s.lines.push(Line { no, key, rest }),
        }
    }
    if let Some(s) = current {
        return Err(perr(s.header, format!("{} stanza is not closed by `end`", s.kind)));
    }
    Ok(file)
}

fn build(s: &Stanza, file: &SpecFile) -> Result<Object> {
    let wrap = |e: Error| match e {
        Error::Parse { .. } => e,
        other => perr(s.header, other.to_string()),
    };
    match s.kind {
        "algebra" => build_algebra(s).map(Object::Algebra),
        "gradedalgebra" => build_graded(s).map(Object::Graded),
        "nsemigroup" => build_nsemigroup(s).map(Object::NSemigroup),
        "ternarygroup" => build_ternary(s).map(Object::TernaryGroup),
        "map" => build_map(s, file).map(Object::Map),
        "ideal" => build_ideal(s, file).map(Object::Ideal),
        _ => unreachable!("header kinds are checked"),
    }
    .map_err(wrap)
}

fn build_algebra(s: &Stanza) -> Result<NAryAlgebra> {
    s.only(&["field", "n", "dim", "basis", "generators", "prod"])?;
    let name = s.name()?;
    let field = field(s.required("field")?)?;
    let n = s.required("n")?.int()?;
    let dim_line = s.required("dim")?;
    let basis_line = s.required("basis")?;
    let labels = label_list(basis_line.no, &basis_line.tokens())?;
    if labels.len() != dim_line.int()? {
        return Err(perr(dim_line.no, format!("dim is {} but the basis has {} labels", dim_line.int()?, labels.len())));
    }
    let generators = match s.unique("generators")? {
        Some(l) => Some(l.tokens().iter().map(|t| index_of(l.no, &labels, t)).collect::<Result<Vec<_>>>()?),
        None => None,
    };
    let mut constants = BTreeMap::new();
    for l in s.all("prod") {
        let (lhs, rhs) = l.colon()?;
        if lhs.len() != n {
            return Err(perr(l.no, format!("product needs {n} labels, found {}", lhs.len())));
        }
        let tuple = lhs.iter().map(|t| index_of(l.no, &labels, t)).collect::<Result<Vec<_>>>()?;
        let v = linear_terms(l.no, &rhs, &labels)?;
        if constants.insert(tuple, v).is_some() {
            return Err(perr(l.no, "repeated product"));
        }
    }
    NAryAlgebra::new(name, n, field, labels, constants, generators)
}

fn build_graded(s: &Stanza) -> Result<GradedAlgebra> {
    s.only(&["field", "modulus", "degree", "prod"])?;
    let name = s.name()?;
    let field = field(s.required("field")?)?;
    let modulus_line = s.required("modulus")?;
    let modulus = modulus_line.int()?;
    let mut bases: Vec<Option<Vec<String>>> = vec![None; modulus];
    for l in s.all("degree") {
        let (d, labels) = l.colon()?;
        let d: usize = match d[..] {
            [d] => d.parse().map_err(|_| perr(l.no, format!("bad degree `{d}`")))?,
            _ => return Err(perr(l.no, "expected `degree <d> : <labels>`")),
        };
        if !(1..=modulus).contains(&d) {
            return Err(perr(l.no, format!("degree {d} outside 1..={modulus}")));
        }
        if bases[d - 1].replace(label_list(l.no, &labels)?).is_some() {
            return Err(perr(l.no, format!("degree {d} listed twice")));
        }
    }
    let labels = bases
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| perr(modulus_line.no, format!("missing `degree {}` line", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let mut g = GradedAlgebra::new(name, field, modulus, labels, BTreeMap::new())?;
    let mut seen: HashSet<ProductKey> = HashSet::new();
    for l in s.all("prod") {
        let (lhs, rhs) = l.colon()?;
        let [x, y] = lhs[..] else {
            return Err(perr(l.no, "a graded product takes two labels"));
        };
        let find = |t: &str| g.find_label(t).ok_or_else(|| perr(l.no, format!("unknown label `{t}`")));
        let ((d, i), (e, j)) = (find(x)?, find(y)?);
        let target = g.product_degree(d, e);
        let v = linear_terms(l.no, &rhs, g.labels(target)).map_err(|_| {
            perr(l.no, format!("product {x} {y} must be a combination of degree-{target} labels"))
        })?;
        if !seen.insert((d, i, e, j)) {
            return Err(perr(l.no, "repeated product"));
        }
        g.set_product((d, i, e, j), v).map_err(|e| perr(l.no, e.to_string()))?;
    }
    Ok(g)
}

fn semigroup_table(s: &Stanza) -> Result<NSemigroupTable> {
    let name = s.name()?;
    let n = s.required("n")?.int()?;
    let el = s.required("elements")?;
    let elements = label_list(el.no, &el.tokens())?;
    let mut entries = BTreeMap::new();
    for l in s.all("prod") {
        let (lhs, rhs) = l.colon()?;
        if lhs.len() != n {
            return Err(perr(l.no, format!("product needs {n} elements, found {}", lhs.len())));
        }
        let tuple = lhs.iter().map(|t| index_of(l.no, &elements, t)).collect::<Result<Vec<_>>>()?;
        let [v] = rhs[..] else {
            return Err(perr(l.no, "a semigroup product has exactly one value"));
        };
        if entries.insert(tuple, index_of(l.no, &elements, v)?).is_some() {
            return Err(perr(l.no, "repeated product"));
        }
    }
    NSemigroupTable::new(name, n, elements, &entries)
}

fn build_nsemigroup(s: &Stanza) -> Result<NSemigroupTable> {
    s.only(&["n", "elements", "prod"])?;
    semigroup_table(s)
}

fn build_ternary(s: &Stanza) -> Result<TernaryGroup> {
    s.only(&["n", "elements", "prod", "inverse"])?;
    let table = semigroup_table(s)?;
    let mut inverse = vec![None; table.size()];
    for l in s.all("inverse") {
        let (lhs, rhs) = l.colon()?;
        let ([x], [y]) = (&lhs[..], &rhs[..]) else {
            return Err(perr(l.no, "expected `inverse <element> : <element>`"));
        };
        let x = index_of(l.no, table.elements(), x)?;
        if inverse[x].replace(index_of(l.no, table.elements(), y)?).is_some() {
            return Err(perr(l.no, "repeated inverse"));
        }
    }
    let inverse = inverse
        .iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| perr(s.header, format!("missing inverse of {}", table.elements()[i]))))
        .collect::<Result<Vec<_>>>()?;
    TernaryGroup::new(table, inverse)
}

fn build_map(s: &Stanza, file: &SpecFile) -> Result<MapDef> {
    s.only(&["send"])?;
    let name = s.name()?;
    let (from, to) = match s.args[..] {
        [_, "from", a, "to", b] => (a, b),
        _ => return Err(perr(s.header, "expected `map <name> from <object> to <object>`")),
    };
    let source_labels = match file.get(from) {
        Some(Object::Algebra(a)) => a.labels().to_vec(),
        Some(o) => return Err(perr(s.header, format!("map source `{from}` is a {}, not an algebra", o.kind()))),
        None => return Err(perr(s.header, format!("unknown object `{from}`"))),
    };
    let target_labels = match file.get(to) {
        Some(Object::Algebra(a)) => a.labels().to_vec(),
        Some(Object::Graded(g)) => g.labels(1).to_vec(),
        Some(o) => return Err(perr(s.header, format!("map target `{to}` is a {}", o.kind()))),
        None => return Err(perr(s.header, format!("unknown object `{to}`"))),
    };
    let mut images: Vec<Option<Vector>> = vec![None; source_labels.len()];
    for l in s.all("send") {
        let (lhs, rhs) = l.colon()?;
        let [x] = lhs[..] else {
            return Err(perr(l.no, "expected `send <label> : <terms>`"));
        };
        let x = index_of(l.no, &source_labels, x)?;
        if images[x].replace(linear_terms(l.no, &rhs, &target_labels)?).is_some() {
            return Err(perr(l.no, "repeated send"));
        }
    }
    Ok(MapDef {
        name,
        from: from.to_string(),
        to: to.to_string(),
        source_labels,
        target_labels,
        images: images.into_iter().map(Option::unwrap_or_default).collect(),
    })
}

fn build_ideal(s: &Stanza, file: &SpecFile) -> Result<IdealDef> {
    s.only(&["gen"])?;
    let name = s.name()?;
    let within = match s.args[..] {
        [_, "in", a] => a,
        _ => return Err(perr(s.header, "expected `ideal <name> in <algebra>`")),
    };
    let a = match file.get(within) {
        Some(Object::Algebra(a)) => a,
        Some(o) => return Err(perr(s.header, format!("`{within}` is a {}, not an algebra", o.kind()))),
        None => return Err(perr(s.header, format!("unknown object `{within}`"))),
    };
    let n = a.arity();
    let mut generators = Vec::new();
    for l in s.all("gen") {
        let (d, rhs) = l.colon()?;
        let degree: usize = match d[..] {
            [d] => d.parse().map_err(|_| perr(l.no, format!("bad degree `{d}`")))?,
            _ => return Err(perr(l.no, "expected `gen <degree> : <terms>`")),
        };
        if !(1..n).contains(&degree) {
            return Err(perr(l.no, format!("degree {degree} outside 1..={}", n - 1)));
        }
        let terms = word_terms(l.no, &rhs, a.labels())?;
        if let Some((_, w)) = terms.iter().find(|(_, w)| degree_of_length(w.len(), n) != degree) {
            return Err(perr(l.no, format!("a word of length {} does not have degree {degree}", w.len())));
        }
        generators.push(IdealGenerator { degree, terms });
    }
    Ok(IdealDef { name, within: within.to_string(), labels: a.labels().to_vec(), generators })
}

fn write_terms(out: &mut String, v: &Vector, labels: &[String]) {
    for (k, c) in v.iter() {
        let _ = write!(out, " {c} {}", labels[k]);
    }
}

/// Writes stanzas that [`parse_spec`] reads back to equal objects.
pub fn serialize_spec(file: &SpecFile) -> String {
    let mut out = String::new();
    for (i, o) in file.objects.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        serialize_object(&mut out, o);
    }
    out
}

pub fn serialize_object(out: &mut String, o: &Object) {
    match o {
        Object::Algebra(a) => {
            let labels = a.labels();
            let _ = writeln!(out, "algebra {}\nfield {}\nn {}\ndim {}", a.name(), a.field(), a.arity(), a.dim());
            let _ = writeln!(out, "basis {}", labels.join(" "));
            let gens: Vec<&str> = a.generators().iter().map(|&g| labels[g].as_str()).collect();
            let _ = writeln!(out, "generators {}", gens.join(" "));
            for (t, v) in a.structure_constants() {
                let lhs: Vec<&str> = t.iter().map(|&k| labels[k].as_str()).collect();
                let _ = write!(out, "prod {} :", lhs.join(" "));
                write_terms(out, v, labels);
                out.push('\n');
            }
        }
        Object::Graded(g) => {
            let _ = writeln!(out, "gradedalgebra {}\nfield {}\nmodulus {}", g.name(), g.field(), g.modulus());
            for d in g.degrees() {
                let _ = writeln!(out, "degree {d} : {}", g.labels(d).join(" ").trim_end());
            }
            for (&(d, i, e, j), v) in g.products() {
                let _ = write!(out, "prod {} {} :", g.labels(d)[i], g.labels(e)[j]);
                write_terms(out, v, g.labels(g.product_degree(d, e)));
                out.push('\n');
            }
        }
        Object::NSemigroup(t) => {
            let _ = writeln!(out, "nsemigroup {}", t.name());
            write_table(out, t);
        }
        Object::TernaryGroup(g) => {
            let _ = writeln!(out, "ternarygroup {}", g.name());
            write_table(out, g.table());
            for (x, &y) in g.inverses().iter().enumerate() {
                let _ = writeln!(out, "inverse {} : {}", g.elements()[x], g.elements()[y]);
            }
        }
        Object::Map(m) => {
            let _ = writeln!(out, "map {} from {} to {}", m.name, m.from, m.to);
            for (x, v) in m.images.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let _ = write!(out, "send {} :", m.source_labels[x]);
                write_terms(out, v, &m.target_labels);
                out.push('\n');
            }
        }
        Object::Ideal(id) => {
            let _ = writeln!(out, "ideal {} in {}", id.name, id.within);
            for g in &id.generators {
                let _ = write!(out, "gen {} :", g.degree);
                for (c, w) in &g.terms {
                    let word: Vec<&str> = w.iter().map(|&k| id.labels[k].as_str()).collect();
                    let _ = write!(out, " {c} {}", word.join("*"));
                }
                out.push('\n');
            }
        }
    }
    out.push_str("end\n");
}

fn write_table(out: &mut String, t: &NSemigroupTable) {
    let el = t.elements();
    let _ = writeln!(out, "n {}\nelements {}", t.arity(), el.join(" "));
    for (tuple, v) in t.entries() {
        let lhs: Vec<&str> = tuple.iter().map(|&k| el[k].as_str()).collect();
        let _ = writeln!(out, "prod {} : {}", lhs.join(" "), el[v]);
    }
}
