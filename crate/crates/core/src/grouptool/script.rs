//! Checkable proofs that a group is not the fundamental group of a complete
//! finite-volume hyperbolic 3-manifold.
//!
//! Such a group is torsion-free, has trivial centre, its maximal abelian
//! subgroups are disjoint apart from the identity, and commutation obeys:
//!
//! * `[x^n, y^m] = 1` with `n, m != 0` implies `[x, y] = 1` (`power`);
//! * `[x, y x y^-1] = 1` implies `[x, y] = 1` (`conjugacy`);
//! * `[x, y] = [y, z] = 1` with `y != 1` implies `[x, z] = 1` (`transitive`);
//! * `w^n = 1` with `n != 0` implies `w = 1` (`root`).
//!
//! In any group, `x^n y^m x^-k y^m = 1` implies `[x^(n+k), y^m] = 1`
//! (`grouplem`). A script rewrites the presentation by Tietze moves, derives
//! trivial words ("facts") by these rules or by explicit derivation, and
//! ends in a contradiction: the group is abelian, or has a nontrivial
//! central element.

use std::fmt;

use super::presentation::{parse_presentation, parse_word, ParseError, Presentation};
use super::search::{assert_trivial_word, replay, SearchConfig, DEFAULT_DEPTH};
use super::snf::{abelian_invariants, has_infinite_order_image, AbelianInvariants};
use super::word::{generator_of, Word};

/// One script step. Words are kept as text and parsed against the
/// generators current at that point of the script.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Assert { word: String, depth: Option<usize> },
    Power { x: String, n: i64, y: String, m: i64 },
    Conjugacy { x: String, y: String },
    GroupLem { x: String, y: String, n: i64, m: i64, k: i64 },
    Transitive { x: String, y: String, z: String },
    Root { word: String, n: i64 },
    Substitute { target: usize, source: usize, segment: String, replacement: String, all: bool },
    Rewrite { relator: usize, word: String, depth: Option<usize> },
    Introduce { name: String, definition: String },
    Eliminate { generator: String, relator: usize },
    Change { old: String, new: String, definition: String },
    Swap { a: String, b: String },
    Expect { presentation: String },
    ConcludeAbelian,
    ConcludeTrivial { generator: String },
    ConcludeCenter { word: String },
}

impl Step {
    pub fn is_rewrite(&self) -> bool {
        matches!(
            self,
            Step::Substitute { .. }
                | Step::Rewrite { .. }
                | Step::Introduce { .. }
                | Step::Eliminate { .. }
                | Step::Change { .. }
                | Step::Swap { .. }
        )
    }

    pub fn is_conclusion(&self) -> bool {
        matches!(self, Step::ConcludeAbelian | Step::ConcludeTrivial { .. } | Step::ConcludeCenter { .. })
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Assert { word, depth: None } => write!(f, "assert {word}"),
            Step::Assert { word, depth: Some(d) } => write!(f, "assert {word} depth={d}"),
            Step::Power { x, n, y, m } => write!(f, "power {x} {n} {y} {m}"),
            Step::Conjugacy { x, y } => write!(f, "conjugacy {x} {y}"),
            Step::GroupLem { x, y, n, m, k } => write!(f, "grouplem {x} {y} {n} {m} {k}"),
            Step::Transitive { x, y, z } => write!(f, "transitive {x} {y} {z}"),
            Step::Root { word, n } => write!(f, "root {word} {n}"),
            Step::Substitute { target, source, segment, replacement, all } => {
                write!(f, "substitute {target} {source} {segment} -> {replacement}")?;
                if *all {
                    write!(f, " all")?;
                }
                Ok(())
            }
            Step::Rewrite { relator, word, depth: None } => write!(f, "rewrite {relator} {word}"),
            Step::Rewrite { relator, word, depth: Some(d) } => write!(f, "rewrite {relator} {word} depth={d}"),
            Step::Introduce { name, definition } => write!(f, "introduce {name} = {definition}"),
            Step::Eliminate { generator, relator } => write!(f, "eliminate {generator} {relator}"),
            Step::Change { old, new, definition } => write!(f, "change {old} {new} = {definition}"),
            Step::Swap { a, b } => write!(f, "swap {a} {b}"),
            Step::Expect { presentation } => write!(f, "expect {presentation}"),
            Step::ConcludeAbelian => write!(f, "conclude abelian"),
            Step::ConcludeTrivial { generator } => write!(f, "conclude trivial {generator}"),
            Step::ConcludeCenter { word } => write!(f, "conclude center {word}"),
        }
    }
}

/// An optional group header plus an ordered list of steps.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProofScript {
    pub group: Option<String>,
    pub steps: Vec<Step>,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ScriptParseError {
    pub line: usize,
    pub message: String,
}

impl ProofScript {
    /// Parse the line-oriented script format (`#` starts a comment).
    pub fn parse(text: &str) -> Result<ProofScript, ScriptParseError> {
        let mut script = ProofScript::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ScriptParseError { line: i + 1, message };
            if let Some(rest) = line.strip_prefix("group ") {
                if script.group.is_some() || !script.steps.is_empty() {
                    return Err(err("group header must come first".into()));
                }
                script.group = Some(rest.trim().to_string());
                continue;
            }
            script.steps.push(parse_step(line).map_err(err)?);
        }
        Ok(script)
    }
}

impl fmt::Display for ProofScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = &self.group {
            writeln!(f, "group {g}")?;
        }
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

fn int(s: &str) -> Result<i64, String> {
    s.parse().map_err(|_| format!("expected an integer, got '{s}'"))
}

fn index(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(i) if i >= 1 => Ok(i),
        _ => Err(format!("expected a 1-based relator index, got '{s}'")),
    }
}

fn depth_arg(tok: Option<&&str>) -> Result<Option<usize>, String> {
    match tok {
        None => Ok(None),
        Some(t) => {
            let d = t.strip_prefix("depth=").ok_or("expected depth=N")?;
            Ok(Some(d.parse().map_err(|_| format!("bad depth '{d}'"))?))
        }
    }
}

fn parse_step(line: &str) -> Result<Step, String> {
    let tok: Vec<&str> = line.split_whitespace().collect();
    let arity = |n: usize| {
        if tok.len() == n {
            Ok(())
        } else {
            Err(format!("'{}' takes {} arguments", tok[0], n - 1))
        }
    };
    let s = |i: usize| tok[i].to_string();
    match tok[0] {
        "assert" => {
            if !(2..=3).contains(&tok.len()) {
                return Err("usage: assert <word> [depth=N]".into());
            }
            Ok(Step::Assert { word: s(1), depth: depth_arg(tok.get(2))? })
        }
        "power" => {
            arity(5)?;
            Ok(Step::Power { x: s(1), n: int(tok[2])?, y: s(3), m: int(tok[4])? })
        }
        "conjugacy" => {
            arity(3)?;
            Ok(Step::Conjugacy { x: s(1), y: s(2) })
        }
        "grouplem" => {
            arity(6)?;
            Ok(Step::GroupLem { x: s(1), y: s(2), n: int(tok[3])?, m: int(tok[4])?, k: int(tok[5])? })
        }
        "transitive" => {
            arity(4)?;
            Ok(Step::Transitive { x: s(1), y: s(2), z: s(3) })
        }
        "root" => {
            arity(3)?;
            Ok(Step::Root { word: s(1), n: int(tok[2])? })
        }
        "substitute" => {
            let all = tok.last() == Some(&"all");
            let n = if all { tok.len() - 1 } else { tok.len() };
            if n != 6 || tok[4] != "->" {
                return Err("usage: substitute <target> <source> <segment> -> <replacement> [all]".into());
            }
            Ok(Step::Substitute {
                target: index(tok[1])?,
                source: index(tok[2])?,
                segment: s(3),
                replacement: s(5),
                all,
            })
        }
        "rewrite" => {
            if !(3..=4).contains(&tok.len()) {
                return Err("usage: rewrite <relator> <word> [depth=N]".into());
            }
            Ok(Step::Rewrite { relator: index(tok[1])?, word: s(2), depth: depth_arg(tok.get(3))? })
        }
        "introduce" => {
            if tok.len() != 4 || tok[2] != "=" {
                return Err("usage: introduce <name> = <word>".into());
            }
            Ok(Step::Introduce { name: s(1), definition: s(3) })
        }
        "eliminate" => {
            arity(3)?;
            Ok(Step::Eliminate { generator: s(1), relator: index(tok[2])? })
        }
        "change" => {
            if tok.len() != 5 || tok[3] != "=" {
                return Err("usage: change <old> <new> = <word>".into());
            }
            Ok(Step::Change { old: s(1), new: s(2), definition: s(4) })
        }
        "swap" => {
            arity(3)?;
            Ok(Step::Swap { a: s(1), b: s(2) })
        }
        "expect" => {
            let rest = line["expect".len()..].trim();
            if rest.is_empty() {
                return Err("usage: expect <presentation>".into());
            }
            Ok(Step::Expect { presentation: rest.to_string() })
        }
        "conclude" => match tok.get(1).copied() {
            Some("abelian") if tok.len() == 2 => Ok(Step::ConcludeAbelian),
            Some("trivial") if tok.len() == 3 => Ok(Step::ConcludeTrivial { generator: s(2) }),
            Some("center") if tok.len() == 3 => Ok(Step::ConcludeCenter { word: s(2) }),
            _ => Err("usage: conclude abelian | trivial <generator> | center <word>".into()),
        },
        other => Err(format!("unknown step '{other}'")),
    }
}

/// Which contradiction a proof reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    /// Every pair of generators commutes, but the centre must be trivial.
    Abelian,
    /// A generator is trivial and the remaining ones commute.
    TrivialGenerator(String),
    /// A nontrivial element commutes with every generator.
    NontrivialCenter(String),
    /// Single relator `x^n y^m`: torsion or a nontrivial centre.
    PowerRelator { n: i64, m: i64 },
    /// Single relator `x^n y^m x^-k y^m`.
    PowerExchange { n: i64, m: i64, k: i64 },
}

impl Reason {
    pub fn tag(&self) -> &'static str {
        match self {
            Reason::Abelian => "abelian",
            Reason::TrivialGenerator(_) => "trivial-generator",
            Reason::NontrivialCenter(_) => "nontrivial-center",
            Reason::PowerRelator { .. } => "power-relator",
            Reason::PowerExchange { .. } => "power-exchange",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Abelian => write!(f, "abelian"),
            Reason::TrivialGenerator(g) => write!(f, "trivial-generator {g}"),
            Reason::NontrivialCenter(w) => write!(f, "nontrivial-center {w}"),
            Reason::PowerRelator { n, m } => write!(f, "power-relator n={n} m={m}"),
            Reason::PowerExchange { n, m, k } => write!(f, "power-exchange n={n} m={m} k={k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NonHyperbolic {
        reason: Reason,
    },
    /// `step` is the 1-based index of the first step that failed, if any.
    Inconclusive {
        step: Option<usize>,
        message: String,
    },
}

impl Verdict {
    pub fn is_nonhyperbolic(&self) -> bool {
        matches!(self, Verdict::NonHyperbolic { .. })
    }

    pub fn inconclusive(message: impl Into<String>) -> Verdict {
        Verdict::Inconclusive { step: None, message: message.into() }
    }
}

/// Result of checking a script, with the abelianization seen after each
/// presentation-rewriting step (index 0 is the input presentation).
#[derive(Clone, Debug)]
pub struct ScriptReport {
    pub verdict: Verdict,
    pub invariants: Vec<(usize, AbelianInvariants)>,
    pub facts: usize,
}

/// Mutable proof state: the current presentation and known-trivial words.
#[derive(Clone, Debug)]
pub struct ProofState {
    pub presentation: Presentation,
    pub facts: Vec<Word>,
}

impl ProofState {
    pub fn new(p: &Presentation) -> Self {
        ProofState { presentation: p.clone(), facts: Vec::new() }
    }

    fn word(&self, s: &str) -> Result<Word, String> {
        self.presentation.parse_word(s).map_err(|e: ParseError| format!("in '{s}': {e}"))
    }

    fn pool(&self) -> Vec<Word> {
        self.presentation.relators().iter().chain(&self.facts).cloned().collect()
    }

    /// Cyclically equal, up to inversion, to a relator or fact.
    pub fn known_trivial(&self, w: &Word) -> bool {
        let c = w.cyclic_class();
        c.is_empty() || self.pool().iter().any(|r| r.cyclic_class() == c)
    }

    fn require(&self, w: &Word, what: &str) -> Result<(), String> {
        if self.known_trivial(w) {
            Ok(())
        } else {
            Err(format!("{what} {} is not a known relation", self.presentation.show(w)))
        }
    }

    fn add_fact(&mut self, w: Word) {
        let c = w.cyclic_reduce();
        if !c.is_empty() && !self.known_trivial(&c) {
            self.facts.push(c);
        }
    }

    fn commute_known(&self, g: usize, h: usize) -> bool {
        let (x, y) = (Word::generator(g), Word::generator(h));
        self.known_trivial(&Word::commutator(&x, &y)) || self.known_trivial(&x) || self.known_trivial(&y)
    }

    /// Replace the presentation after a Tietze move, rewriting facts by
    /// `images` (one image per old generator, in the new generators).
    fn rewrite(&mut self, generators: Vec<String>, relators: Vec<Word>, images: Option<&[Word]>) -> Result<(), String> {
        let relators: Vec<Word> = relators.into_iter().map(|r| r.cyclic_reduce()).filter(|r| !r.is_empty()).collect();
        self.presentation = Presentation::new(generators, relators).map_err(|e| e.to_string())?;
        if let Some(images) = images {
            self.facts =
                self.facts.iter().map(|f| f.substitute(images).cyclic_reduce()).filter(|f| !f.is_empty()).collect();
        }
        Ok(())
    }

    /// Apply one step; `Ok(Some(reason))` for a successful conclusion.
    pub fn apply(&mut self, step: &Step) -> Result<Option<Reason>, String> {
        match step {
            Step::Assert { word, depth } => {
                let w = self.word(word)?;
                if !self.known_trivial(&w) {
                    derive(&self.pool(), &w, SearchConfig::with_depth(depth.unwrap_or(DEFAULT_DEPTH)))?;
                }
                self.add_fact(w);
            }
            Step::Power { x, n, y, m } => {
                if *n == 0 || *m == 0 {
                    return Err("power rule needs nonzero exponents".into());
                }
                let (x, y) = (self.word(x)?, self.word(y)?);
                self.require(&Word::commutator(&x.pow(*n), &y.pow(*m)), "commutator")?;
                self.add_fact(Word::commutator(&x, &y));
            }
            Step::Conjugacy { x, y } => {
                let (x, y) = (self.word(x)?, self.word(y)?);
                self.require(&Word::commutator(&x, &x.conjugate_by(&y)), "commutator")?;
                self.add_fact(Word::commutator(&x, &y));
            }
            Step::GroupLem { x, y, n, m, k } => {
                let (x, y) = (self.word(x)?, self.word(y)?);
                let rel = x.pow(*n).concat(&y.pow(*m)).concat(&x.pow(-*k)).concat(&y.pow(*m));
                self.require(&rel, "relation")?;
                self.add_fact(Word::commutator(&x.pow(n + k), &y.pow(*m)));
            }
            Step::Transitive { x, y, z } => {
                let (x, y, z) = (self.word(x)?, self.word(y)?, self.word(z)?);
                self.require(&Word::commutator(&x, &y), "commutator")?;
                self.require(&Word::commutator(&y, &z), "commutator")?;
                if !has_infinite_order_image(&self.presentation, &y) {
                    return Err(format!("cannot show {} is nontrivial", self.presentation.show(&y)));
                }
                self.add_fact(Word::commutator(&x, &z));
            }
            Step::Root { word, n } => {
                if *n == 0 {
                    return Err("root needs a nonzero exponent".into());
                }
                let w = self.word(word)?;
                self.require(&w.pow(*n), "power")?;
                self.add_fact(w);
            }
            Step::Substitute { target, source, segment, replacement, all } => {
                let rels = self.presentation.relators();
                let (t, s) = (target - 1, source - 1);
                if t >= rels.len() || s >= rels.len() || t == s {
                    return Err("substitution needs two distinct existing relators".into());
                }
                let (seg, rep) = (self.word(segment)?, self.word(replacement)?);
                if seg.is_empty() {
                    return Err("empty segment".into());
                }
                if seg.concat(&rep.inverse()).cyclic_class() != rels[s].cyclic_class() {
                    return Err(format!("segment * replacement^-1 is not a conjugate of relator {source}"));
                }
                let new = replace_cyclic(&rels[t], &seg, &rep, *all)
                    .ok_or_else(|| format!("segment not found in relator {target}"))?;
                let mut relators = rels.to_vec();
                relators[t] = new;
                let gens = self.presentation.generators().to_vec();
                self.rewrite(gens, relators, None)?;
            }
            Step::Rewrite { relator, word, depth } => {
                let rels = self.presentation.relators().to_vec();
                let i = relator - 1;
                if i >= rels.len() {
                    return Err(format!("no relator {relator}"));
                }
                let w = self.word(word)?;
                let cfg = SearchConfig::with_depth(depth.unwrap_or(DEFAULT_DEPTH));
                // the new relator follows from the old ones, and conversely
                derive(&rels, &w, cfg).map_err(|e| format!("new relator: {e}"))?;
                let mut others = rels.clone();
                others[i] = w.clone();
                derive(&others, &rels[i], cfg).map_err(|e| format!("old relator: {e}"))?;
                let gens = self.presentation.generators().to_vec();
                self.rewrite(gens, others, None)?;
            }
            Step::Introduce { name, definition } => {
                let w = self.word(definition)?;
                let mut gens = self.presentation.generators().to_vec();
                gens.push(name.clone());
                let x = Word::generator(gens.len() - 1);
                let mut relators = self.presentation.relators().to_vec();
                relators.push(x.inverse().concat(&w));
                self.rewrite(gens, relators, None)?;
            }
            Step::Eliminate { generator, relator } => self.eliminate(generator, *relator)?,
            Step::Change { old, new, definition } => {
                let w = self.word(definition)?;
                let g = self.generator(old)?;
                if w.occurrences(g) != 1 {
                    return Err(format!("{old} must occur exactly once in the new generator's definition"));
                }
                self.apply(&Step::Introduce { name: new.clone(), definition: definition.clone() })?;
                let idx = self.presentation.relators().len();
                self.eliminate(old, idx)?;
            }
            Step::Swap { a, b } => {
                let (i, j) = (self.generator(a)?, self.generator(b)?);
                let mut gens = self.presentation.generators().to_vec();
                gens.swap(i, j);
                let relators = self.presentation.relators().to_vec();
                self.rewrite(gens, relators, None)?;
            }
            Step::Expect { presentation } => {
                let expected = parse_presentation(presentation).map_err(|e| e.to_string())?;
                if !same_presentation(&self.presentation, &expected) {
                    return Err(format!("presentation is {}, expected {presentation}", self.presentation));
                }
            }
            Step::ConcludeAbelian => {
                self.all_commute()?;
                return Ok(Some(Reason::Abelian));
            }
            Step::ConcludeTrivial { generator } => {
                let g = self.generator(generator)?;
                self.require(&Word::generator(g), "generator")?;
                self.all_commute()?;
                return Ok(Some(Reason::TrivialGenerator(generator.clone())));
            }
            Step::ConcludeCenter { word } => {
                let w = self.word(word)?;
                for g in 0..self.presentation.generators().len() {
                    self.require(&Word::commutator(&w, &Word::generator(g)), "commutator")?;
                }
                if !has_infinite_order_image(&self.presentation, &w) {
                    return Err(format!("cannot show {word} is nontrivial"));
                }
                return Ok(Some(Reason::NontrivialCenter(word.clone())));
            }
        }
        Ok(None)
    }

    fn generator(&self, name: &str) -> Result<usize, String> {
        self.presentation.generator_index(name).ok_or_else(|| format!("no generator '{name}'"))
    }

    fn all_commute(&self) -> Result<(), String> {
        let n = self.presentation.generators().len();
        for g in 0..n {
            for h in g + 1..n {
                if !self.commute_known(g, h) {
                    let names = self.presentation.generators();
                    return Err(format!("no proof that {} and {} commute", names[g], names[h]));
                }
            }
        }
        Ok(())
    }

    fn eliminate(&mut self, name: &str, relator: usize) -> Result<(), String> {
        let g = self.generator(name)?;
        let rels = self.presentation.relators();
        let r = rels.get(relator - 1).ok_or_else(|| format!("no relator {relator}"))?;
        if r.occurrences(g) != 1 {
            return Err(format!("{name} must occur exactly once in relator {relator}"));
        }
        // rotate so the generator comes first: r ~ g^e v, so g = v^-e
        let pos = r.letters().iter().position(|&l| generator_of(l) == g).unwrap();
        let rot = r.rotate(pos);
        let rest = Word::new(rot.letters()[1..].iter().copied());
        let value = if rot.letters()[0] > 0 { rest.inverse() } else { rest };
        let n = self.presentation.generators().len();
        let reindex = |h: usize| if h > g { h - 1 } else { h };
        let mut images: Vec<Word> = (0..n).map(|h| Word::generator(reindex(h))).collect();
        images[g] = value.substitute(&images);
        let mut gens = self.presentation.generators().to_vec();
        gens.remove(g);
        let relators: Vec<Word> =
            rels.iter().enumerate().filter(|&(i, _)| i != relator - 1).map(|(_, w)| w.substitute(&images)).collect();
        self.rewrite(gens, relators, Some(&images))
    }
}

/// Search for a derivation and replay it.
fn derive(pool: &[Word], w: &Word, cfg: SearchConfig) -> Result<(), String> {
    let d = assert_trivial_word(pool, w, cfg).map_err(|e| e.to_string())?;
    if replay(&d, pool) {
        Ok(())
    } else {
        Err("derivation failed to replay".into())
    }
}

/// Same generator names (any order) and the same relators up to rotation,
/// inversion and order.
pub fn same_presentation(current: &Presentation, expected: &Presentation) -> bool {
    let (cg, eg) = (current.generators(), expected.generators());
    if cg.len() != eg.len() {
        return false;
    }
    let mut images = Vec::with_capacity(eg.len());
    for name in eg {
        match current.generator_index(name) {
            Some(i) => images.push(Word::generator(i)),
            None => return false,
        }
    }
    let relators: Vec<Word> = expected.relators().iter().map(|r| r.substitute(&images)).collect();
    match Presentation::new(cg.to_vec(), relators) {
        Ok(mapped) => current.equivalent(&mapped),
        Err(_) => false,
    }
}

/// Replace an occurrence of `seg` in the cyclic word `r` by `rep`.
fn replace_cyclic(r: &Word, seg: &Word, rep: &Word, all: bool) -> Option<Word> {
    let n = r.len();
    let s = seg.letters();
    if s.len() > n {
        return None;
    }
    let start = (0..n).find(|&o| (0..s.len()).all(|i| r.letters()[(o + i) % n] == s[i]))?;
    let rot = r.rotate(start);
    let l = rot.letters();
    let mut out: Vec<i32> = Vec::with_capacity(n);
    let mut i = 0;
    let mut first = true;
    while i < n {
        if (first || all) && i + s.len() <= n && l[i..i + s.len()] == *s {
            out.extend_from_slice(rep.letters());
            i += s.len();
            first = false;
        } else {
            out.push(l[i]);
            i += 1;
        }
    }
    Some(Word::new(out).cyclic_reduce())
}

/// Check a script against a presentation.
pub fn verify_script(p: &Presentation, script: &ProofScript) -> Verdict {
    verify_script_report(p, script).verdict
}

pub fn verify_script_report(p: &Presentation, script: &ProofScript) -> ScriptReport {
    let mut state = ProofState::new(p);
    let base = abelian_invariants(p);
    let mut invariants = vec![(0, base.clone())];
    let fail = |step: usize, message: String, invariants, facts| ScriptReport {
        verdict: Verdict::Inconclusive { step: Some(step), message },
        invariants,
        facts,
    };
    if let Some(g) = &script.group {
        match parse_presentation(g) {
            Ok(h) if same_presentation(p, &h) => {}
            Ok(_) => return fail(0, "script header names a different presentation".into(), invariants, 0),
            Err(e) => return fail(0, format!("bad group header: {e}"), invariants, 0),
        }
    }
    for (i, step) in script.steps.iter().enumerate() {
        let n = i + 1;
        match state.apply(step) {
            Ok(Some(reason)) => {
                if n != script.steps.len() {
                    return fail(n + 1, "steps after the conclusion".into(), invariants, state.facts.len());
                }
                return ScriptReport {
                    verdict: Verdict::NonHyperbolic { reason },
                    invariants,
                    facts: state.facts.len(),
                };
            }
            Ok(None) => {}
            Err(msg) => return fail(n, msg, invariants, state.facts.len()),
        }
        if step.is_rewrite() {
            let inv = abelian_invariants(&state.presentation);
            if inv != base {
                return fail(n, "abelianization changed; not a Tietze move".into(), invariants, state.facts.len());
            }
            invariants.push((n, inv));
        }
    }
    ScriptReport {
        verdict: Verdict::Inconclusive { step: None, message: "script ends without a conclusion".into() },
        invariants,
        facts: state.facts.len(),
    }
}

/// Parse a word in a fixed two-generator alphabet; convenience for tests.
pub fn word_ab(s: &str) -> Result<Word, ParseError> {
    parse_word(s, &["a".to_string(), "b".to_string()])
}
