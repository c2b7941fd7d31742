//! Command-line front end: reads stanza files, runs one computation and
//! reports `RESULT key=value` lines followed by a single `SUMMARY` line.
//!
//! Exit codes: 0 success, 1 mathematical failure, 2 usage or input error.

pub mod format;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::envelope::{
    annihilator_check, build_envelope, ideal_avoids_image, ideal_closure, quotient_envelope, Envelope, GradedIdeal,
    Word, WordVector,
};
use crate::exactlin::{Scalar, Vector};
use crate::homology::{check_d_squared, homology_ranks, CONVENTION};
use crate::lifting::{envelope_functor, image_subalgebra, lift_hom, NAryHom};
use crate::nary_core::{check_associativity, is_j_commutative, AssocViolation, NAryAlgebra};
use crate::nsemigroup::{
    build_sg_envelope, check_nsg_associativity, check_ternary_group, conjugation_hom_check, default_max_len,
    search_group_embedding, NSemigroupTable, TernaryGroup,
};
use crate::Error;

use format::{parse_spec, word_terms, IdealDef, MapDef, Object, SpecFile};

#[derive(Parser, Debug)]
#[command(name = "nary", version, about = "Exact computations with n-ary algebras and n-ary semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural checks.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Universal graded envelope of an algebra.
    Envelope {
        #[command(subcommand)]
        what: EnvelopeCmd,
    },
    /// Lift a map A → M_1 to the envelope.
    Lift(MapArgs),
    /// Envelope map induced by an algebra homomorphism.
    Functor(MapArgs),
    /// Ranks of the n-ary bar complex.
    Homology {
        file: PathBuf,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        object: Option<String>,
    },
    /// n-ary semigroups.
    Sg {
        #[command(subcommand)]
        what: SgCmd,
    },
    /// Ternary groups.
    Tg {
        #[command(subcommand)]
        what: TgCmd,
    },
    /// j-commutativity of a ternary algebra.
    Jcomm {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        j: String,
        #[arg(long)]
        object: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    /// Full associativity of an algebra, graded algebra or n-ary semigroup.
    Assoc {
        file: PathBuf,
        #[arg(long)]
        object: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum EnvelopeCmd {
    Build {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        closure: usize,
        #[arg(long)]
        object: Option<String>,
    },
    /// Quotient by the ideal generated by an `ideal` stanza.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        ideal: String,
        #[arg(long, default_value_t = 2)]
        closure: usize,
    },
    /// Whether an element, given as `<coef> <word> ...`, is killed from both sides.
    Annihilate {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        object: Option<String>,
        /// Work in the quotient by this ideal.
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long, default_value_t = 2)]
        closure: usize,
    },
}

#[derive(Args, Debug)]
struct MapArgs {
    file: PathBuf,
    #[arg(long)]
    map: String,
    #[arg(long, default_value_t = 2)]
    closure: usize,
}

#[derive(Subcommand, Debug)]
enum SgCmd {
    /// Congruence-closure envelope on words up to a length cap.
    Envelope {
        file: PathBuf,
        #[arg(long)]
        maxlen: Option<usize>,
        #[arg(long)]
        object: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum TgCmd {
    /// Ternary group axioms and conjugation maps.
    Check {
        file: PathBuf,
        #[arg(long)]
        object: Option<String>,
    },
    /// Embedding into the degree-1 part of a ℤ₂-graded group.
    EmbedSearch {
        file: PathBuf,
        #[arg(long)]
        max_order: usize,
        #[arg(long)]
        object: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotAssociative(_)
            | Error::NotHomomorphism(_)
            | Error::IllDefined(_)
            | Error::NotSubalgebra(_)
            | Error::IdealMeetsImage(_)
            | Error::NotAComplex(_) => Failure::Math(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

#[derive(Default)]
struct Report {
    lines: Vec<String>,
}

impl Report {
    fn result(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("RESULT {key}={value}"));
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Runs one command line (including the program name) and returns the exit
/// code with the full report.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let label = command_label(&cli.command);
    let mut report = Report::default();
    let (code, status) = match execute(cli.command, &mut report) {
        Ok(true) => (0, "pass".to_string()),
        Ok(false) => (1, "fail".to_string()),
        Err(Failure::Math(m)) => {
            report.line(format!("ERROR {m}"));
            (1, format!("fail: {m}"))
        }
        Err(Failure::Usage(m)) => {
            report.line(format!("ERROR {m}"));
            (2, format!("error: {m}"))
        }
    };
    report.line(format!("SUMMARY {label} {status}"));
    let mut out = report.lines.join("\n");
    out.push('\n');
    (code, out)
}

fn command_label(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check assoc",
        Command::Envelope { what: EnvelopeCmd::Build { .. } } => "envelope build",
        Command::Envelope { what: EnvelopeCmd::Quotient { .. } } => "envelope quotient",
        Command::Envelope { what: EnvelopeCmd::Annihilate { .. } } => "envelope annihilate",
        Command::Lift(_) => "lift",
        Command::Functor(_) => "functor",
        Command::Homology { .. } => "homology",
        Command::Sg { .. } => "sg envelope",
        Command::Tg { what: TgCmd::Check { .. } } => "tg check",
        Command::Tg { what: TgCmd::EmbedSearch { .. } } => "tg embed-search",
        Command::Jcomm { .. } => "jcomm",
    }
}

fn load(path: &Path) -> std::result::Result<SpecFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_spec(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// The named object, or the first one `pick` accepts.
fn select<'a, T>(
    file: &'a SpecFile,
    name: Option<&str>,
    what: &str,
    pick: impl Fn(&'a Object) -> Option<T>,
) -> std::result::Result<T, Failure> {
    match name {
        Some(n) => {
            let o = file.get(n).ok_or_else(|| Failure::Usage(format!("no object named `{n}`")))?;
            pick(o).ok_or_else(|| Failure::Usage(format!("`{n}` is a {}, expected {what}", o.kind())))
        }
        None => file
            .objects()
            .iter()
            .find_map(pick)
            .ok_or_else(|| Failure::Usage(format!("the file contains no {what}"))),
    }
}

fn algebra<'a>(file: &'a SpecFile, name: Option<&str>) -> std::result::Result<&'a NAryAlgebra, Failure> {
    select(file, name, "algebra", |o| match o {
        Object::Algebra(a) => Some(a),
        _ => None,
    })
}

fn semigroup<'a>(file: &'a SpecFile, name: Option<&str>) -> std::result::Result<&'a NSemigroupTable, Failure> {
    select(file, name, "nsemigroup or ternarygroup", |o| match o {
        Object::NSemigroup(t) => Some(t),
        Object::TernaryGroup(g) => Some(g.table()),
        _ => None,
    })
}

fn ternary<'a>(file: &'a SpecFile, name: Option<&str>) -> std::result::Result<&'a TernaryGroup, Failure> {
    select(file, name, "ternarygroup", |o| match o {
        Object::TernaryGroup(g) => Some(g),
        _ => None,
    })
}

fn map_def<'a>(file: &'a SpecFile, name: &str) -> std::result::Result<&'a MapDef, Failure> {
    select(file, Some(name), "map", |o| match o {
        Object::Map(m) => Some(m),
        _ => None,
    })
}

fn ideal_def<'a>(file: &'a SpecFile, name: &str) -> std::result::Result<&'a IdealDef, Failure> {
    select(file, Some(name), "ideal", |o| match o {
        Object::Ideal(i) => Some(i),
        _ => None,
    })
}

/// Class in the envelope of a combination of tensor words of one degree.
fn envelope_element(e: &Envelope, terms: &[(Scalar, Vec<usize>)]) -> std::result::Result<(usize, Vector), Failure> {
    let mut degree = None;
    let mut sum = Vector::new();
    for (c, w) in terms {
        let (d, v) = e.class_of(&WordVector::word(Word(w.clone())))?;
        if *degree.get_or_insert(d) != d {
            return Err(Failure::Usage("element is not homogeneous".into()));
        }
        sum.add_scaled(c, &v);
    }
    degree.map(|d| (d, sum)).ok_or_else(|| Failure::Usage("empty element".into()))
}

fn closed_ideal(e: &Envelope, def: &IdealDef) -> std::result::Result<GradedIdeal, Failure> {
    let gens = def
        .generators
        .iter()
        .map(|g| envelope_element(e, &g.terms))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(ideal_closure(e.graded(), &gens)?)
}

fn render_violation(v: &AssocViolation, labels: &[String]) -> String {
    let t: Vec<&str> = v.tuple.iter().map(|&k| labels[k].as_str()).collect();
    format!("({});i={};j={}", t.join(","), v.i, v.j)
}

fn execute(command: Command, r: &mut Report) -> Outcome {
    match command {
        Command::Check { what: CheckCmd::Assoc { file, object } } => {
            let f = load(&file)?;
            let o = select(&f, object.as_deref(), "algebra, graded algebra or n-ary semigroup", |o| match o {
                Object::Map(_) | Object::Ideal(_) => None,
                o => Some(o),
            })?;
            let witness = match o {
                Object::Algebra(a) => {
                    check_associativity(a)?.first_violation.map(|v| render_violation(&v, a.labels()))
                }
                Object::Graded(g) => g.associativity_violation().map(|t| {
                    let l: Vec<&str> = t.iter().map(|&(d, i)| g.labels(d)[i].as_str()).collect();
                    format!("({})", l.join(","))
                }),
                Object::NSemigroup(t) => check_nsg_associativity(t)?.witness.map(|v| render_violation(&v, t.elements())),
                Object::TernaryGroup(g) => {
                    check_nsg_associativity(g.table())?.witness.map(|v| render_violation(&v, g.elements()))
                }
                Object::Map(_) | Object::Ideal(_) => unreachable!(),
            };
            r.result("assoc.object", o.name());
            r.result("assoc", if witness.is_none() { "pass" } else { "fail" });
            if let Some(w) = &witness {
                r.result("assoc.witness", w);
            }
            Ok(witness.is_none())
        }
        Command::Envelope { what: EnvelopeCmd::Build { file, closure, object } } => {
            let f = load(&file)?;
            let e = build_envelope(algebra(&f, object.as_deref())?, closure)?;
            r.result("envelope.dims", join(&e.dims()));
            r.result("envelope.closure_depth", closure);
            Ok(true)
        }
        Command::Envelope { what: EnvelopeCmd::Quotient { file, ideal, closure } } => {
            let f = load(&file)?;
            let def = ideal_def(&f, &ideal)?;
            let e = build_envelope(algebra(&f, Some(&def.within))?, closure)?;
            r.result("envelope.dims", join(&e.dims()));
            r.result("envelope.closure_depth", closure);
            let i = closed_ideal(&e, def)?;
            r.result("ideal.dims", join(&i.dims()));
            let avoids = ideal_avoids_image(&e, &i);
            r.result("ideal.avoids_image", avoids);
            let q = quotient_envelope(&e, &i)?;
            r.result("quotient.dims", join(&q.dims()));
            Ok(true)
        }
        Command::Envelope { what: EnvelopeCmd::Annihilate { file, element, object, ideal, closure } } => {
            let f = load(&file)?;
            let def = ideal.as_deref().map(|n| ideal_def(&f, n)).transpose()?;
            let name = def.map(|s| s.within.as_str()).or(object.as_deref());
            let a = algebra(&f, name)?;
            let e = build_envelope(a, closure)?;
            let tokens: Vec<&str> = element.split_whitespace().collect();
            let terms = word_terms(0, &tokens, a.labels())
                .map_err(|e| Failure::Usage(format!("--element: {}", e.to_string().trim_start_matches("line 0: "))))?;
            let (d, x) = envelope_element(&e, &terms)?;
            let killed = match def {
                Some(s) => {
                    let i = closed_ideal(&e, s)?;
                    let q = quotient_envelope(&e, &i)?;
                    annihilator_check(&q.algebra, d, &i.project(d, &x))?
                }
                None => annihilator_check(e.graded(), d, &x)?,
            };
            r.result("annihilator.degree", d);
            r.result("annihilator", killed);
            Ok(killed)
        }
        Command::Lift(MapArgs { file, map, closure }) => {
            let f = load(&file)?;
            let m = map_def(&f, &map)?;
            let a = algebra(&f, Some(&m.from))?;
            let target = select(&f, Some(&m.to), "graded algebra", |o| match o {
                Object::Graded(g) => Some(g),
                _ => None,
            })?;
            let lift = lift_hom(a, target, &m.matrix(), closure)?;
            let image = image_subalgebra(&lift)?;
            r.result("envelope.dims", join(&lift.envelope.dims()));
            r.result("envelope.closure_depth", closure);
            r.result("lift.commutes", lift.commutes);
            r.result("lift.multiplicative", lift.multiplicativity_violation.is_none());
            r.result("lift.image.dims", join(&image.image_dims));
            r.result("lift.kernel.dims", join(&image.kernel_dims));
            Ok(lift.commutes && lift.multiplicativity_violation.is_none())
        }
        Command::Functor(MapArgs { file, map, closure }) => {
            let f = load(&file)?;
            let m = map_def(&f, &map)?;
            let a = algebra(&f, Some(&m.from))?;
            let b = algebra(&f, Some(&m.to))?;
            let phi = NAryHom::new(a.clone(), b.clone(), m.matrix())?;
            let fun = envelope_functor(&phi, closure)?;
            let multiplicative = fun.hom.multiplicativity_violation().is_none();
            r.result("functor.source.dims", join(&fun.source.dims()));
            r.result("functor.target.dims", join(&fun.target.dims()));
            r.result("functor.ranks", join(&fun.hom.ranks()));
            r.result("functor.commutes", fun.commutes);
            r.result("functor.multiplicative", multiplicative);
            Ok(fun.commutes && multiplicative)
        }
        Command::Homology { file, kmax, object } => {
            let f = load(&file)?;
            let a = algebra(&f, object.as_deref())?;
            r.line(format!("CONVENTION {CONVENTION}"));
            let d2 = check_d_squared(a, kmax)?;
            for (k, z) in d2.zero.iter().enumerate() {
                r.result(&format!("homology.d2zero.k{}", k + 1), z);
            }
            if !d2.all_zero() {
                return Ok(false);
            }
            for (k, h) in homology_ranks(a, kmax)?.iter().enumerate() {
                r.result(&format!("homology.h{k}"), h);
            }
            Ok(true)
        }
        Command::Sg { what: SgCmd::Envelope { file, maxlen, object } } => {
            let f = load(&file)?;
            let t = semigroup(&f, object.as_deref())?;
            let l = maxlen.unwrap_or_else(|| default_max_len(t.arity()));
            let e = build_sg_envelope(t, l)?;
            r.result("sg.max_len", l);
            for (d, c) in e.counts().iter().enumerate() {
                r.result(&format!("sg.classes.deg{}", d + 1), c);
            }
            r.result("sg.degree1_bijective", e.degree_one_is_bijective());
            Ok(true)
        }
        Command::Tg { what: TgCmd::Check { file, object } } => {
            let f = load(&file)?;
            let g = ternary(&f, object.as_deref())?;
            let axioms = check_ternary_group(g)?.pass();
            r.result("tg.axioms", if axioms { "pass" } else { "fail" });
            let mut all = true;
            for e in 0..g.size() {
                let c = conjugation_hom_check(g, e)?;
                all &= c.pass();
                r.result(&format!("tg.conjugation.{}", g.elements()[e]), if c.pass() { "bijective_hom" } else { "fail" });
            }
            Ok(axioms && all)
        }
        Command::Tg { what: TgCmd::EmbedSearch { file, max_order, object } } => {
            let f = load(&file)?;
            let g = ternary(&f, object.as_deref())?;
            let rep = search_group_embedding(g, max_order)?;
            r.result("tg.embed.found", rep.found.is_some());
            r.result("tg.embed.searched_order", rep.searched_order);
            r.result("tg.embed.groups_examined", rep.groups_examined);
            match &rep.found {
                Some(w) => {
                    let h = &w.group;
                    r.result("tg.embed.group", h.name());
                    r.result("tg.embed.group_abelian", h.is_abelian());
                    let cyclic = (0..h.order()).any(|x| h.element_order(x) == h.order());
                    r.result("tg.embed.group_cyclic", cyclic);
                    let pairs: Vec<String> = w
                        .injection
                        .iter()
                        .enumerate()
                        .map(|(x, &y)| format!("{}->{}", g.elements()[x], h.labels()[y]))
                        .collect();
                    r.result("tg.embed.injection", pairs.join(","));
                }
                None => r.result("tg.embed.exhausted_order", rep.exhausted_order.unwrap_or(max_order)),
            }
            Ok(rep.found.is_some())
        }
        Command::Jcomm { file, j, object } => {
            let f = load(&file)?;
            let a = algebra(&f, object.as_deref())?;
            let j: Scalar = j.parse()?;
            let holds = is_j_commutative(a, &j)?;
            r.result("jcomm.j", &j);
            r.result("jcomm", holds);
            Ok(holds)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        let (code, out) = run(["nary", "envelope", "build"]);
        assert_eq!(code, 2, "{out}");
        let (code, out) = run(["nary", "check", "assoc", "/nonexistent/file.alg"]);
        assert_eq!(code, 2);
        assert!(out.lines().last().unwrap().starts_with("SUMMARY check assoc error"));
        let (code, _) = run(["nary", "--help"]);
        assert_eq!(code, 0);
    }
}
