//! From an [`Abaf`] to the abstract frameworks the semantics run on.
//!
//! [`saturate`] computes every derivable `(support, claim)` pair as a least
//! fixed point; derivation trees are never built. [`build_bsaf`] turns the
//! pairs into set-attacks and set-supports between assumptions, and
//! [`build_baf`] into the argument graph of the argument-level baseline.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::aba::{Abaf, SentenceId};
use crate::kernels::SetAgg;

/// Set of assumptions, stored as a bitset over assumption indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AsmSet {
    words: Vec<u64>,
}

impl AsmSet {
    pub fn empty(universe: usize) -> Self {
        AsmSet {
            words: vec![0; universe.div_ceil(64).max(1)],
        }
    }

    pub fn singleton(universe: usize, i: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(i);
        s
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn union_with(&mut self, other: &AsmSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn is_subset(&self, other: &AsmSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(w, o)| w & !o == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// A derivable pair `support ⊢ claim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedPair {
    pub support: AsmSet,
    pub claim: SentenceId,
    /// Some derivation of this pair uses at least one rule.
    pub rule_based: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaturationLimits {
    pub max_pairs: usize,
    pub wall_time: Duration,
}

impl Default for SaturationLimits {
    fn default() -> Self {
        SaturationLimits {
            max_pairs: 1_000_000,
            wall_time: Duration::from_secs(600),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiationError {
    #[error("instantiation exceeded {0} derived pairs")]
    TooManyPairs(usize),
    #[error("instantiation exceeded {0:?} wall time")]
    Timeout(Duration),
}

struct Deadline {
    start: Instant,
    limit: Duration,
    ticks: u32,
}

impl Deadline {
    fn new(limit: Duration) -> Self {
        Deadline {
            start: Instant::now(),
            limit,
            ticks: 0,
        }
    }

    fn check(&mut self) -> Result<(), InstantiationError> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(1024) && self.start.elapsed() > self.limit {
            return Err(InstantiationError::Timeout(self.limit));
        }
        Ok(())
    }
}

/// All derivable pairs of `d`, each exactly once, in derivation order.
pub fn saturate(
    d: &Abaf,
    limits: SaturationLimits,
) -> Result<Vec<DerivedPair>, InstantiationError> {
    let n = d.assumption_count();
    let mut deadline = Deadline::new(limits.wall_time);

    // rules whose body mentions each sentence
    let mut rules_using: Vec<Vec<usize>> = vec![Vec::new(); d.sentence_count()];
    let bodies: Vec<Vec<SentenceId>> = d
        .rules()
        .iter()
        .map(|r| r.body.iter().copied().collect())
        .collect();
    for (ri, body) in bodies.iter().enumerate() {
        for s in body {
            rules_using[s.index()].push(ri);
        }
    }

    let mut pairs: Vec<DerivedPair> = Vec::new();
    let mut lookup: HashMap<(SentenceId, AsmSet), usize> = HashMap::new();
    // supports derived so far, per sentence
    let mut by_claim: Vec<Vec<usize>> = vec![Vec::new(); d.sentence_count()];
    let mut queue: Vec<usize> = Vec::new();

    let mut add = |support: AsmSet,
                   claim: SentenceId,
                   rule_based: bool,
                   pairs: &mut Vec<DerivedPair>,
                   by_claim: &mut Vec<Vec<usize>>,
                   queue: &mut Vec<usize>|
     -> Result<(), InstantiationError> {
        match lookup.get(&(claim, support.clone())) {
            Some(&i) => {
                pairs[i].rule_based |= rule_based;
            }
            None => {
                if pairs.len() >= limits.max_pairs {
                    return Err(InstantiationError::TooManyPairs(limits.max_pairs));
                }
                let i = pairs.len();
                lookup.insert((claim, support.clone()), i);
                pairs.push(DerivedPair {
                    support,
                    claim,
                    rule_based,
                });
                by_claim[claim.index()].push(i);
                queue.push(i);
            }
        }
        Ok(())
    };

    for (i, a) in d.assumptions().iter().enumerate() {
        add(
            AsmSet::singleton(n, i),
            *a,
            false,
            &mut pairs,
            &mut by_claim,
            &mut queue,
        )?;
    }
    for (ri, r) in d.rules().iter().enumerate() {
        if bodies[ri].is_empty() {
            add(
                AsmSet::empty(n),
                r.head,
                true,
                &mut pairs,
                &mut by_claim,
                &mut queue,
            )?;
        }
    }

    let mut head = 0;
    while head < queue.len() {
        let new = queue[head];
        head += 1;
        let new_claim = pairs[new].claim;
        for &ri in &rules_using[new_claim.index()] {
            let body = &bodies[ri];
            let rule_head = d.rules()[ri].head;
            // the new pair at its own position, everything derived so far
            // elsewhere; partial unions are deduplicated per position
            let mut partial: HashSet<AsmSet> = HashSet::from([pairs[new].support.clone()]);
            for s in body.iter().filter(|s| **s != new_claim) {
                let options = &by_claim[s.index()];
                if options.is_empty() {
                    partial.clear();
                    break;
                }
                let mut next = HashSet::with_capacity(partial.len());
                for u in &partial {
                    for &o in options {
                        deadline.check()?;
                        let mut support = u.clone();
                        support.union_with(&pairs[o].support);
                        next.insert(support);
                    }
                }
                partial = next;
            }
            let mut found: Vec<AsmSet> = partial.into_iter().collect();
            found.sort_unstable();
            for support in found {
                add(
                    support,
                    rule_head,
                    true,
                    &mut pairs,
                    &mut by_claim,
                    &mut queue,
                )?;
            }
        }
    }
    Ok(pairs)
}

/// A set-attack or set-support `(members, target)` over assumption indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetEdge {
    /// Sorted, duplicate-free assumption indices.
    pub members: Vec<usize>,
    pub target: usize,
}

impl SetEdge {
    pub fn new(members: impl IntoIterator<Item = usize>, target: usize) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        SetEdge { members, target }
    }
}

/// Bipolar set-argumentation framework over assumptions, with base scores.
#[derive(Debug, Clone, PartialEq)]
pub struct Bsaf {
    names: Vec<String>,
    tau: Vec<f64>,
    attacks: Vec<SetEdge>,
    supports: Vec<SetEdge>,
    attacks_on: Vec<Vec<usize>>,
    supports_on: Vec<Vec<usize>>,
}

impl Bsaf {
    /// Builds a BSAF; duplicate edges are dropped and edges are kept sorted.
    ///
    /// Panics if an edge references a node outside `0..names.len()` or if
    /// `tau` has the wrong length.
    pub fn new(
        names: Vec<String>,
        tau: Vec<f64>,
        mut attacks: Vec<SetEdge>,
        mut supports: Vec<SetEdge>,
    ) -> Self {
        let n = names.len();
        assert_eq!(tau.len(), n, "tau must cover every node");
        for e in attacks.iter().chain(&supports) {
            assert!(
                e.target < n && e.members.iter().all(|m| *m < n),
                "edge out of range"
            );
        }
        attacks.sort();
        attacks.dedup();
        supports.sort();
        supports.dedup();
        let index = |edges: &[SetEdge]| {
            let mut on = vec![Vec::new(); n];
            for (i, e) in edges.iter().enumerate() {
                on[e.target].push(i);
            }
            on
        };
        Bsaf {
            attacks_on: index(&attacks),
            supports_on: index(&supports),
            names,
            tau,
            attacks,
            supports,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn attacks(&self) -> &[SetEdge] {
        &self.attacks
    }

    pub fn supports(&self) -> &[SetEdge] {
        &self.supports
    }

    /// Attacking edges of node `a`.
    pub fn attackers_of(&self, a: usize) -> impl Iterator<Item = &SetEdge> {
        self.attacks_on[a].iter().map(|&i| &self.attacks[i])
    }

    pub fn supporters_of(&self, a: usize) -> impl Iterator<Item = &SetEdge> {
        self.supports_on[a].iter().map(|&i| &self.supports[i])
    }

    pub fn with_tau(&self, tau: Vec<f64>) -> Bsaf {
        assert_eq!(tau.len(), self.len());
        Bsaf {
            tau,
            ..self.clone()
        }
    }

    /// Same framework with one more edge.
    pub fn with_edge(&self, edge: SetEdge, support: bool) -> Bsaf {
        let mut attacks = self.attacks.clone();
        let mut supports = self.supports.clone();
        if support {
            supports.push(edge);
        } else {
            attacks.push(edge);
        }
        Bsaf::new(self.names.clone(), self.tau.clone(), attacks, supports)
    }

    /// Line-oriented debug dump: `att <target> <members..>` / `sup ...`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (kind, edges) in [("att", &self.attacks), ("sup", &self.supports)] {
            for e in edges {
                out.push_str(kind);
                out.push(' ');
                out.push_str(&self.names[e.target]);
                for m in &e.members {
                    out.push(' ');
                    out.push_str(&self.names[*m]);
                }
                out.push('\n');
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BsafOptions {
    /// Drop attacking/supporting sets that strictly contain another set with
    /// the same claim.
    pub minimal_only: bool,
}

fn minimal_filter(pairs: &[DerivedPair], keep: &mut [bool]) {
    let mut by_claim: HashMap<SentenceId, Vec<usize>> = HashMap::new();
    for (i, p) in pairs.iter().enumerate() {
        by_claim.entry(p.claim).or_default().push(i);
    }
    for group in by_claim.values() {
        for &i in group {
            let si = &pairs[i].support;
            let dominated = group.iter().any(|&j| {
                let sj = &pairs[j].support;
                j != i && sj.is_subset(si) && sj != si
            });
            if dominated {
                keep[i] = false;
            }
        }
    }
}

pub fn bsaf_from_pairs(d: &Abaf, pairs: &[DerivedPair], options: BsafOptions) -> Bsaf {
    let mut keep = vec![true; pairs.len()];
    if options.minimal_only {
        minimal_filter(pairs, &mut keep);
    }
    // assumptions whose contrary is a given sentence
    let mut attacked_via: HashMap<SentenceId, Vec<usize>> = HashMap::new();
    for i in 0..d.assumption_count() {
        attacked_via.entry(d.contrary(i)).or_default().push(i);
    }
    let mut attacks = Vec::new();
    let mut supports = Vec::new();
    for (p, _) in pairs.iter().zip(&keep).filter(|(_, k)| **k) {
        if let Some(targets) = attacked_via.get(&p.claim) {
            for &t in targets {
                attacks.push(SetEdge::new(p.support.iter(), t));
            }
        }
        if p.rule_based {
            if let Some(t) = d.assumption_index(p.claim) {
                supports.push(SetEdge::new(p.support.iter(), t));
            }
        }
    }
    let names = (0..d.assumption_count())
        .map(|i| d.assumption_name(i).to_string())
        .collect();
    Bsaf::new(names, d.tau().to_vec(), attacks, supports)
}

pub fn build_bsaf(
    d: &Abaf,
    limits: SaturationLimits,
    options: BsafOptions,
) -> Result<Bsaf, InstantiationError> {
    let pairs = saturate(d, limits)?;
    Ok(bsaf_from_pairs(d, &pairs, options))
}

/// Assumption-based argument base score function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseScoreFn {
    Prod,
    Min,
}

crate::kernels::names!(BaseScoreFn { "prod" => BaseScoreFn::Prod, "min" => BaseScoreFn::Min });

impl BaseScoreFn {
    pub fn eval(self, strengths: &[f64]) -> f64 {
        match self {
            BaseScoreFn::Prod => beta_prod(strengths),
            BaseScoreFn::Min => beta_min(strengths),
        }
    }
}

pub fn beta_prod(strengths: &[f64]) -> f64 {
    SetAgg::Prod.eval(strengths)
}

pub fn beta_min(strengths: &[f64]) -> f64 {
    SetAgg::Min.eval(strengths)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Argument {
    pub support: Vec<usize>,
    pub claim: SentenceId,
    pub rule_based: bool,
}

/// Bipolar argumentation framework over ABA arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct Baf {
    pub arguments: Vec<Argument>,
    /// `(attacker, target)` argument indices, sorted.
    pub attacks: Vec<(usize, usize)>,
    pub supports: Vec<(usize, usize)>,
    pub beta: Vec<f64>,
}

impl Baf {
    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    /// Argument indices grouped by claim.
    pub fn arguments_by_claim(&self) -> HashMap<SentenceId, Vec<usize>> {
        let mut by_claim: HashMap<SentenceId, Vec<usize>> = HashMap::new();
        for (i, x) in self.arguments.iter().enumerate() {
            by_claim.entry(x.claim).or_default().push(i);
        }
        by_claim
    }

    /// Line-oriented debug dump: `arg <id> <claim> <asms..>` then edges as
    /// `att <target> <attacker>` / `sup <target> <supporter>`.
    pub fn dump(&self, d: &Abaf) -> String {
        let mut out = String::new();
        for (i, x) in self.arguments.iter().enumerate() {
            let _ = write!(out, "arg x{i} {}", d.name(x.claim));
            for a in &x.support {
                let _ = write!(out, " {}", d.assumption_name(*a));
            }
            out.push('\n');
        }
        for (kind, edges) in [("att", &self.attacks), ("sup", &self.supports)] {
            for (x, y) in edges {
                let _ = writeln!(out, "{kind} x{y} x{x}");
            }
        }
        out
    }
}

pub fn baf_from_pairs(
    d: &Abaf,
    pairs: &[DerivedPair],
    beta_fn: BaseScoreFn,
    tau: &[f64],
    limits: SaturationLimits,
) -> Result<Baf, InstantiationError> {
    assert_eq!(tau.len(), d.assumption_count());
    let mut deadline = Deadline::new(limits.wall_time);
    let mut order: Vec<&DerivedPair> = pairs.iter().collect();
    order.sort_by(|x, y| (x.claim, &x.support).cmp(&(y.claim, &y.support)));

    let arguments: Vec<Argument> = order
        .iter()
        .map(|p| Argument {
            support: p.support.to_vec(),
            claim: p.claim,
            rule_based: p.rule_based,
        })
        .collect();
    let mut by_claim: HashMap<SentenceId, Vec<usize>> = HashMap::new();
    for (i, x) in arguments.iter().enumerate() {
        by_claim.entry(x.claim).or_default().push(i);
    }

    let mut attacks = Vec::new();
    let mut supports = Vec::new();
    let mut scratch: Vec<SentenceId> = Vec::new();
    for (y, arg) in arguments.iter().enumerate() {
        scratch.clear();
        scratch.extend(arg.support.iter().map(|&a| d.contrary(a)));
        scratch.sort_unstable();
        scratch.dedup();
        for c in &scratch {
            for &x in by_claim.get(c).map(Vec::as_slice).unwrap_or(&[]) {
                deadline.check()?;
                attacks.push((x, y));
            }
        }
        for &a in &arg.support {
            for &x in by_claim
                .get(&d.assumptions()[a])
                .map(Vec::as_slice)
                .unwrap_or(&[])
            {
                if arguments[x].rule_based {
                    deadline.check()?;
                    supports.push((x, y));
                }
            }
        }
        if attacks.len() + supports.len() > limits.max_pairs.saturating_mul(16) {
            return Err(InstantiationError::TooManyPairs(limits.max_pairs));
        }
    }
    attacks.sort_unstable();
    attacks.dedup();
    supports.sort_unstable();
    supports.dedup();

    let beta = arguments
        .iter()
        .map(|x| {
            let strengths: Vec<f64> = x.support.iter().map(|&a| tau[a]).collect();
            beta_fn.eval(&strengths)
        })
        .collect();
    Ok(Baf {
        arguments,
        attacks,
        supports,
        beta,
    })
}

pub fn build_baf(
    d: &Abaf,
    beta_fn: BaseScoreFn,
    tau: &[f64],
    limits: SaturationLimits,
) -> Result<Baf, InstantiationError> {
    let pairs = saturate(d, limits)?;
    baf_from_pairs(d, &pairs, beta_fn, tau, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aba::parse_abaf;

    const EXAMPLE_TWO: &str = "a a\na b\na c\na d\nc a na\nc b nb\nc c nc\nc d nd\n\
                               r c a b\nr nb a\nr nc b d\n";

    fn pair_set(d: &Abaf, pairs: &[DerivedPair]) -> Vec<(Vec<String>, String, bool)> {
        let mut v: Vec<_> = pairs
            .iter()
            .map(|p| {
                (
                    p.support
                        .iter()
                        .map(|a| d.assumption_name(a).to_string())
                        .collect(),
                    d.name(p.claim).to_string(),
                    p.rule_based,
                )
            })
            .collect();
        v.sort();
        v
    }

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn asmset_basics() {
        let mut x = AsmSet::from_indices(70, [1, 65]);
        assert_eq!(x.len(), 2);
        assert!(x.contains(65) && !x.contains(64));
        let y = AsmSet::singleton(70, 3);
        assert!(!y.is_subset(&x));
        x.union_with(&y);
        assert!(y.is_subset(&x));
        assert_eq!(x.to_vec(), vec![1, 3, 65]);
        assert!(AsmSet::empty(70).is_empty());
    }

    #[test]
    fn saturate_example_two() {
        let d = parse_abaf(EXAMPLE_TWO).unwrap();
        let pairs = saturate(&d, SaturationLimits::default()).unwrap();
        let got = pair_set(&d, &pairs);
        assert_eq!(
            got,
            vec![
                (s(&["a"]), "a".into(), false),
                (s(&["a"]), "nb".into(), true),
                (s(&["a", "b"]), "c".into(), true),
                (s(&["b"]), "b".into(), false),
                (s(&["b", "d"]), "nc".into(), true),
                (s(&["c"]), "c".into(), false),
                (s(&["d"]), "d".into(), false),
            ]
        );
    }

    #[test]
    fn saturate_rule_free_and_chain() {
        let d = parse_abaf("a a\na b\nc a b\nc b x").unwrap();
        let pairs = saturate(&d, SaturationLimits::default()).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!(pairs.iter().all(|p| !p.rule_based && p.support.len() == 1));

        let d = parse_abaf("a a\nc a z\nr p a\nr q p").unwrap();
        let got = pair_set(&d, &saturate(&d, SaturationLimits::default()).unwrap());
        assert_eq!(
            got,
            vec![
                (s(&["a"]), "a".into(), false),
                (s(&["a"]), "p".into(), true),
                (s(&["a"]), "q".into(), true),
            ]
        );
    }

    #[test]
    fn saturate_terminates_on_cycles() {
        let d = parse_abaf("a a\na b\nc a p\nc b q\nr p q\nr q p\nr p b\nr b p").unwrap();
        let got = pair_set(&d, &saturate(&d, SaturationLimits::default()).unwrap());
        // b is derivable from itself through the p/q cycle
        assert!(got.contains(&(s(&["b"]), "b".into(), true)));
        assert!(got.contains(&(s(&["b"]), "q".into(), true)));
        assert_eq!(got.len(), 4);
    }

    #[test]
    fn fact_rule_gives_empty_support() {
        let d = parse_abaf("a a\nc a x\nr x").unwrap();
        let pairs = saturate(&d, SaturationLimits::default()).unwrap();
        assert!(pairs
            .iter()
            .any(|p| p.support.is_empty() && d.name(p.claim) == "x"));
        let f = build_bsaf(&d, SaturationLimits::default(), BsafOptions::default()).unwrap();
        assert_eq!(f.attacks(), &[SetEdge::new([], 0)]);
    }

    #[test]
    fn pair_budget_is_enforced() {
        let d = parse_abaf(EXAMPLE_TWO).unwrap();
        let limits = SaturationLimits {
            max_pairs: 5,
            ..Default::default()
        };
        assert_eq!(
            saturate(&d, limits).unwrap_err(),
            InstantiationError::TooManyPairs(5)
        );
    }

    #[test]
    fn bsaf_example_two() {
        let d = parse_abaf(EXAMPLE_TWO).unwrap();
        let f = build_bsaf(&d, SaturationLimits::default(), BsafOptions::default()).unwrap();
        let (a, b, c, dd) = (0, 1, 2, 3);
        assert_eq!(
            f.attacks(),
            &[SetEdge::new([a], b), SetEdge::new([b, dd], c)]
        );
        assert_eq!(f.supports(), &[SetEdge::new([a, b], c)]);
        assert_eq!(f.dump(), "att b a\natt c b d\nsup c a b\n");
    }

    #[test]
    fn bsaf_example_one_and_rule_free() {
        let d = parse_abaf("a a\na b\na c\nc a q\nc b x\nc c y\nr q b c").unwrap();
        let f = build_bsaf(&d, SaturationLimits::default(), BsafOptions::default()).unwrap();
        assert_eq!(f.attacks(), &[SetEdge::new([1, 2], 0)]);
        assert!(f.supports().is_empty());

        let d = parse_abaf("a a\na b\nc a b\nc b x").unwrap();
        let f = build_bsaf(&d, SaturationLimits::default(), BsafOptions::default()).unwrap();
        assert_eq!(f.attacks(), &[SetEdge::new([1], 0)]);
        assert!(f.supports().is_empty());
    }

    #[test]
    fn minimal_only_filter() {
        let d = parse_abaf("a a\na b\na c\nc a p\nc b x\nc c y\nr p b\nr p b c").unwrap();
        let all = build_bsaf(&d, SaturationLimits::default(), BsafOptions::default()).unwrap();
        assert_eq!(all.attacks().len(), 2);
        let min = build_bsaf(
            &d,
            SaturationLimits::default(),
            BsafOptions { minimal_only: true },
        )
        .unwrap();
        assert_eq!(min.attacks(), &[SetEdge::new([1], 0)]);
    }

    #[test]
    fn baf_example_two_without_r1() {
        let d = parse_abaf(&EXAMPLE_TWO.replace("r c a b\n", "")).unwrap();
        let baf = build_baf(&d, BaseScoreFn::Prod, d.tau(), SaturationLimits::default()).unwrap();
        assert_eq!(baf.len(), 6);
        assert!(baf.supports.is_empty());
        let find = |claim: &str| {
            baf.arguments
                .iter()
                .position(|x| d.name(x.claim) == claim)
                .unwrap()
        };
        let (b, c, x1, x2) = (find("b"), find("c"), find("nb"), find("nc"));
        let mut expected = vec![(x1, b), (x1, x2), (x2, c)];
        expected.sort();
        assert_eq!(baf.attacks, expected);
        assert_eq!(baf.beta[x2], 0.25);
    }

    #[test]
    fn baf_non_flat_supports() {
        let d = parse_abaf(EXAMPLE_TWO).unwrap();
        let baf = build_baf(&d, BaseScoreFn::Prod, d.tau(), SaturationLimits::default()).unwrap();
        assert_eq!(baf.len(), 7);
        // x = {a,b} ⊢ c supports every argument using c: only {c} ⊢ c
        assert_eq!(baf.supports.len(), 1);
        let (x, y) = baf.supports[0];
        assert!(baf.arguments[x].rule_based);
        assert_eq!(d.name(baf.arguments[x].claim), "c");
        assert_eq!(baf.arguments[y].support, vec![2]);
        // nc attacks the single argument built on assumption c
        let nc = baf
            .arguments
            .iter()
            .position(|x| d.name(x.claim) == "nc")
            .unwrap();
        assert_eq!(baf.attacks.iter().filter(|(x, _)| *x == nc).count(), 1);
        let dump = baf.dump(&d);
        assert!(dump
            .lines()
            .any(|l| l.starts_with("arg x") && l.ends_with(" c a b")));
    }

    #[test]
    fn assumption_argument_base_score_is_tau() {
        let d = parse_abaf("a a\na b\nc a b\nc b x\nw a 0.3\nw b 0.9").unwrap();
        for f in [BaseScoreFn::Prod, BaseScoreFn::Min] {
            let baf = build_baf(&d, f, d.tau(), SaturationLimits::default()).unwrap();
            assert_eq!(baf.beta, vec![0.3, 0.9]);
        }
    }

    #[test]
    fn empty_support_argument_scores_one() {
        let d = parse_abaf("a a\nc a x\nr x\nw a 0.2").unwrap();
        let baf = build_baf(&d, BaseScoreFn::Min, d.tau(), SaturationLimits::default()).unwrap();
        let fact = baf
            .arguments
            .iter()
            .position(|x| x.support.is_empty())
            .unwrap();
        assert_eq!(baf.beta[fact], 1.0);
    }

    #[test]
    fn beta_functions() {
        assert_eq!(beta_prod(&[0.5, 0.5]), 0.25);
        assert_eq!(beta_min(&[]), 1.0);
        assert_eq!(beta_prod(&[]), 1.0);
        assert_eq!(beta_prod(&[0.0, 0.9]), 0.0);
        assert_eq!(beta_min(&[0.4, 0.7]), 0.4);
    }
}
