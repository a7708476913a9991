//! Quantitative assumption-based argumentation frameworks.
//!
//! An [`Abaf`] holds the sentence vocabulary, the assumptions, the inference
//! rules, a contrary for every assumption and a base score in `[0, 1]` for
//! every assumption. Frameworks are read from and written to a small
//! line-oriented text format:
//!
//! ```text
//! a <atom>                 declare assumption
//! c <asm> <atom>           contrary of <asm>
//! r <head> <b1> ... <bn>   rule (n = 0 is a fact)
//! w <asm> <float>          base score in [0, 1]
//! ```
//!
//! `#` starts a comment. Non-assumption sentences are declared implicitly on
//! first use.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use thiserror::Error;

/// Base score given to assumptions that have no `w` line.
pub const DEFAULT_BASE_SCORE: f64 = 0.5;

/// Interned sentence handle, valid for the [`Abaf`] that created it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SentenceId(pub u32);

impl SentenceId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: SentenceId,
    pub body: BTreeSet<SentenceId>,
}

/// Result of [`check_flat`]: `flat` holds iff no rule derives an assumption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flatness {
    pub flat: bool,
    pub witnesses: Vec<Rule>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    UnknownDirective(String),
    WrongArity {
        directive: char,
        expected: &'static str,
    },
    InvalidNumber(String),
    DuplicateContrary(String),
    DuplicateWeight(String),
    WeightOutOfRange {
        assumption: String,
        value: f64,
    },
    WeightForNonAssumption(String),
    ContraryForNonAssumption(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownDirective(d) => write!(f, "unknown directive `{d}`"),
            ParseErrorKind::WrongArity {
                directive,
                expected,
            } => write!(f, "directive `{directive}` expects {expected}"),
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number `{s}`"),
            ParseErrorKind::DuplicateContrary(a) => {
                write!(f, "duplicate contrary declaration for `{a}`")
            }
            ParseErrorKind::DuplicateWeight(a) => write!(f, "duplicate weight for `{a}`"),
            ParseErrorKind::WeightOutOfRange { assumption, value } => {
                write!(f, "weight {value} for `{assumption}` is outside [0, 1]")
            }
            ParseErrorKind::WeightForNonAssumption(s) => {
                write!(f, "weight given for non-assumption `{s}`")
            }
            ParseErrorKind::ContraryForNonAssumption(s) => {
                write!(f, "contrary given for non-assumption `{s}`")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AbafError {
    #[error("line {line}, column {column}: {kind}")]
    Parse {
        line: usize,
        column: usize,
        kind: ParseErrorKind,
    },
    #[error("framework has no assumptions")]
    NoAssumptions,
    #[error("assumption `{0}` has no contrary")]
    MissingContrary(String),
    #[error("base score {value} for `{assumption}` is outside [0, 1]")]
    BaseScoreOutOfRange { assumption: String, value: f64 },
    #[error("unknown sentence `{0}`")]
    UnknownSentence(String),
    #[error("`{0}` is not an assumption")]
    NotAnAssumption(String),
}

/// A weighted ABA framework. Immutable once built.
#[derive(Debug, Clone)]
pub struct Abaf {
    names: Vec<String>,
    index: HashMap<String, SentenceId>,
    /// Assumptions in declaration order. Position in this vector is the
    /// assumption index used by every downstream structure.
    assumptions: Vec<SentenceId>,
    asm_index: HashMap<SentenceId, usize>,
    rules: Vec<Rule>,
    contrary: Vec<SentenceId>,
    tau: Vec<f64>,
}

impl Abaf {
    pub fn sentence_count(&self) -> usize {
        self.names.len()
    }

    pub fn sentences(&self) -> impl Iterator<Item = SentenceId> + '_ {
        (0..self.names.len() as u32).map(SentenceId)
    }

    pub fn name(&self, s: SentenceId) -> &str {
        &self.names[s.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<SentenceId> {
        self.index.get(name).copied()
    }

    pub fn assumptions(&self) -> &[SentenceId] {
        &self.assumptions
    }

    pub fn assumption_count(&self) -> usize {
        self.assumptions.len()
    }

    /// Position of `s` among the assumptions, if it is one.
    pub fn assumption_index(&self, s: SentenceId) -> Option<usize> {
        self.asm_index.get(&s).copied()
    }

    pub fn is_assumption(&self, s: SentenceId) -> bool {
        self.asm_index.contains_key(&s)
    }

    pub fn assumption_name(&self, i: usize) -> &str {
        self.name(self.assumptions[i])
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Contrary of the `i`-th assumption.
    pub fn contrary(&self, i: usize) -> SentenceId {
        self.contrary[i]
    }

    /// Base scores indexed by assumption position.
    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    /// Copy of this framework with different base scores.
    pub fn with_tau(&self, tau: Vec<f64>) -> Result<Abaf, AbafError> {
        assert_eq!(
            tau.len(),
            self.assumptions.len(),
            "tau must cover every assumption"
        );
        for (i, &v) in tau.iter().enumerate() {
            check_score(self.assumption_name(i), v)?;
        }
        Ok(Abaf {
            tau,
            ..self.clone()
        })
    }

    /// Mean rule body size, 0 for rule-free frameworks.
    pub fn avg_body_size(&self) -> f64 {
        if self.rules.is_empty() {
            return 0.0;
        }
        self.rules.iter().map(|r| r.body.len()).sum::<usize>() as f64 / self.rules.len() as f64
    }

    /// Rule `head <- body` rendered with sentence names.
    pub fn display_rule(&self, r: &Rule) -> String {
        let mut out = format!("{} <-", self.name(r.head));
        for b in &r.body {
            out.push(' ');
            out.push_str(self.name(*b));
        }
        out
    }

    fn canonical(&self) -> CanonicalAbaf<'_> {
        let names = |set: &BTreeSet<SentenceId>| -> BTreeSet<&str> {
            set.iter().map(|s| self.name(*s)).collect()
        };
        CanonicalAbaf {
            sentences: self.names.iter().map(String::as_str).collect(),
            rules: self
                .rules
                .iter()
                .map(|r| (self.name(r.head), names(&r.body)))
                .collect(),
            assumptions: self
                .assumptions
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    (
                        self.name(*a),
                        (self.name(self.contrary[i]), self.tau[i].to_bits()),
                    )
                })
                .collect(),
        }
    }
}

#[derive(PartialEq)]
struct CanonicalAbaf<'a> {
    sentences: BTreeSet<&'a str>,
    rules: BTreeSet<(&'a str, BTreeSet<&'a str>)>,
    assumptions: BTreeMap<&'a str, (&'a str, u64)>,
}

/// Structural equality: same vocabulary, rules, contraries and base scores,
/// independent of declaration order.
impl PartialEq for Abaf {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

fn check_score(name: &str, value: f64) -> Result<(), AbafError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(AbafError::BaseScoreOutOfRange {
            assumption: name.to_string(),
            value,
        })
    }
}

/// Programmatic construction of an [`Abaf`].
#[derive(Debug, Default, Clone)]
pub struct AbafBuilder {
    names: Vec<String>,
    index: HashMap<String, SentenceId>,
    assumptions: Vec<SentenceId>,
    asm_set: HashMap<SentenceId, usize>,
    contrary: HashMap<SentenceId, SentenceId>,
    weights: HashMap<SentenceId, f64>,
    rules: BTreeSet<Rule>,
    rule_order: Vec<Rule>,
}

impl AbafBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> SentenceId {
        if let Some(id) = self.index.get(name) {
            return *id;
        }
        let id = SentenceId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn assumption(&mut self, name: &str) -> &mut Self {
        let id = self.intern(name);
        if !self.asm_set.contains_key(&id) {
            self.asm_set.insert(id, self.assumptions.len());
            self.assumptions.push(id);
        }
        self
    }

    /// Sets the contrary, replacing any previous one.
    pub fn contrary(&mut self, asm: &str, contrary: &str) -> &mut Self {
        let a = self.intern(asm);
        let c = self.intern(contrary);
        self.contrary.insert(a, c);
        self
    }

    pub fn weight(&mut self, asm: &str, w: f64) -> &mut Self {
        let a = self.intern(asm);
        self.weights.insert(a, w);
        self
    }

    pub fn rule<'a>(&mut self, head: &str, body: impl IntoIterator<Item = &'a str>) -> &mut Self {
        let head = self.intern(head);
        let body = body.into_iter().map(|b| self.intern(b)).collect();
        let rule = Rule { head, body };
        if self.rules.insert(rule.clone()) {
            self.rule_order.push(rule);
        }
        self
    }

    fn has_contrary(&self, asm: &str) -> bool {
        self.index
            .get(asm)
            .is_some_and(|id| self.contrary.contains_key(id))
    }

    fn has_weight(&self, asm: &str) -> bool {
        self.index
            .get(asm)
            .is_some_and(|id| self.weights.contains_key(id))
    }

    fn is_assumption(&self, name: &str) -> bool {
        self.index
            .get(name)
            .is_some_and(|id| self.asm_set.contains_key(id))
    }

    /// Validates and builds. Assumptions without a weight get `default_weight`.
    pub fn build_with_default(self, default_weight: f64) -> Result<Abaf, AbafError> {
        if self.assumptions.is_empty() {
            return Err(AbafError::NoAssumptions);
        }
        for id in self.contrary.keys() {
            if !self.asm_set.contains_key(id) {
                return Err(AbafError::NotAnAssumption(self.names[id.index()].clone()));
            }
        }
        let mut contrary = Vec::with_capacity(self.assumptions.len());
        let mut tau = Vec::with_capacity(self.assumptions.len());
        for a in &self.assumptions {
            let name = &self.names[a.index()];
            let c = self
                .contrary
                .get(a)
                .ok_or_else(|| AbafError::MissingContrary(name.clone()))?;
            contrary.push(*c);
            let w = self.weights.get(a).copied().unwrap_or(default_weight);
            check_score(name, w)?;
            tau.push(w);
        }
        for id in self.weights.keys() {
            if !self.asm_set.contains_key(id) {
                return Err(AbafError::NotAnAssumption(self.names[id.index()].clone()));
            }
        }
        Ok(Abaf {
            names: self.names,
            index: self.index,
            asm_index: self.asm_set,
            assumptions: self.assumptions,
            rules: self.rule_order,
            contrary,
            tau,
        })
    }

    pub fn build(self) -> Result<Abaf, AbafError> {
        self.build_with_default(DEFAULT_BASE_SCORE)
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &content[s..i],
                    column: content[..s].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &content[s..],
            column: content[..s].chars().count() + 1,
        });
    }
    out
}

struct Located<T> {
    line: usize,
    column: usize,
    value: T,
}

/// Parses the text format with base score 0.5 for unweighted assumptions.
pub fn parse_abaf(text: &str) -> Result<Abaf, AbafError> {
    parse_abaf_with_default(text, DEFAULT_BASE_SCORE)
}

pub fn parse_abaf_with_default(text: &str, default_weight: f64) -> Result<Abaf, AbafError> {
    let err =
        |line: usize, column: usize, kind: ParseErrorKind| AbafError::Parse { line, column, kind };

    let mut builder = AbafBuilder::new();
    // Contraries and weights are checked after all assumptions are known, so
    // directive order within the file does not matter.
    let mut contraries: Vec<Located<(String, String)>> = Vec::new();
    let mut weights: Vec<Located<(String, f64)>> = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let tokens = tokenize(line);
        let Some(first) = tokens.first() else {
            continue;
        };
        match first.text {
            "a" => {
                if tokens.len() != 2 {
                    return Err(err(
                        lineno,
                        first.column,
                        ParseErrorKind::WrongArity {
                            directive: 'a',
                            expected: "one atom",
                        },
                    ));
                }
                builder.assumption(tokens[1].text);
            }
            "c" => {
                if tokens.len() != 3 {
                    return Err(err(
                        lineno,
                        first.column,
                        ParseErrorKind::WrongArity {
                            directive: 'c',
                            expected: "an assumption and an atom",
                        },
                    ));
                }
                contraries.push(Located {
                    line: lineno,
                    column: tokens[1].column,
                    value: (tokens[1].text.to_string(), tokens[2].text.to_string()),
                });
            }
            "r" => {
                if tokens.len() < 2 {
                    return Err(err(
                        lineno,
                        first.column,
                        ParseErrorKind::WrongArity {
                            directive: 'r',
                            expected: "a head and zero or more body atoms",
                        },
                    ));
                }
                builder.rule(tokens[1].text, tokens[2..].iter().map(|t| t.text));
            }
            "w" => {
                if tokens.len() != 3 {
                    return Err(err(
                        lineno,
                        first.column,
                        ParseErrorKind::WrongArity {
                            directive: 'w',
                            expected: "an assumption and a number",
                        },
                    ));
                }
                let value: f64 = tokens[2].text.parse().map_err(|_| {
                    err(
                        lineno,
                        tokens[2].column,
                        ParseErrorKind::InvalidNumber(tokens[2].text.to_string()),
                    )
                })?;
                weights.push(Located {
                    line: lineno,
                    column: tokens[1].column,
                    value: (tokens[1].text.to_string(), value),
                });
            }
            // ICCMA-style header line, carries nothing we need.
            "p" => {}
            other => {
                return Err(err(
                    lineno,
                    first.column,
                    ParseErrorKind::UnknownDirective(other.to_string()),
                ))
            }
        }
    }

    for Located {
        line,
        column,
        value: (asm, c),
    } in contraries
    {
        if !builder.is_assumption(&asm) {
            return Err(err(
                line,
                column,
                ParseErrorKind::ContraryForNonAssumption(asm),
            ));
        }
        if builder.has_contrary(&asm) {
            return Err(err(line, column, ParseErrorKind::DuplicateContrary(asm)));
        }
        builder.contrary(&asm, &c);
    }
    for Located {
        line,
        column,
        value: (asm, w),
    } in weights
    {
        if !builder.is_assumption(&asm) {
            return Err(err(
                line,
                column,
                ParseErrorKind::WeightForNonAssumption(asm),
            ));
        }
        if builder.has_weight(&asm) {
            return Err(err(line, column, ParseErrorKind::DuplicateWeight(asm)));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(err(
                line,
                column,
                ParseErrorKind::WeightOutOfRange {
                    assumption: asm,
                    value: w,
                },
            ));
        }
        builder.weight(&asm, w);
    }
    builder.build_with_default(default_weight)
}

/// Writes `d` in the text format. Every assumption gets an explicit `w` line;
/// weights use Rust's shortest round-trip float formatting.
pub fn serialize_abaf(d: &Abaf) -> String {
    let mut out = String::new();
    for i in 0..d.assumption_count() {
        let _ = writeln!(out, "a {}", d.assumption_name(i));
    }
    for i in 0..d.assumption_count() {
        let _ = writeln!(out, "c {} {}", d.assumption_name(i), d.name(d.contrary(i)));
    }
    for r in d.rules() {
        out.push_str("r ");
        out.push_str(d.name(r.head));
        for b in &r.body {
            out.push(' ');
            out.push_str(d.name(*b));
        }
        out.push('\n');
    }
    for i in 0..d.assumption_count() {
        let _ = writeln!(out, "w {} {}", d.assumption_name(i), d.tau()[i]);
    }
    out
}

pub fn check_flat(d: &Abaf) -> Flatness {
    let witnesses: Vec<Rule> = d
        .rules()
        .iter()
        .filter(|r| d.is_assumption(r.head))
        .cloned()
        .collect();
    Flatness {
        flat: witnesses.is_empty(),
        witnesses,
    }
}
