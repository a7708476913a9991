//! Randomised sweeps over the algebraic and semantic properties, with stored
//! counterexamples for the set aggregations that are known to fail them.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::HarnessError;
use crate::aba::SentenceId;
use crate::engine::{
    convergence_guarantee, iterate, longest_primal_path, run, step_baf, step_bsaf, EvolutionConfig,
};
use crate::generator::{gen_bsaf, rng_for, BsafParams, TauDist};
use crate::instantiation::{Argument, Baf, Bsaf, SetEdge};
use crate::kernels::{Agg, Influence, InfluenceKind, Kernel, SetAgg};
use crate::order::{
    alpha_zeta_clauses, balanced, check_preservation, dominates, sup_equivalent, superior,
    SetFamily, StrengthMultiset,
};

/// Tolerance for the balance and monotonicity properties of the semantics.
pub const SEMANTICS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZetaProperty {
    /// Adding elements never increases the set strength.
    Order,
    /// The empty set has maximal strength.
    Facts,
    /// Elements of maximal strength are ignored.
    Neutrality,
    /// Singletons keep their strength.
    Identity,
    /// A set is no stronger than its weakest member.
    WeakestLink,
    /// A member of strength zero voids the set.
    Void,
}

impl ZetaProperty {
    pub const ALL: [ZetaProperty; 6] = [
        ZetaProperty::Order,
        ZetaProperty::Facts,
        ZetaProperty::Neutrality,
        ZetaProperty::Identity,
        ZetaProperty::WeakestLink,
        ZetaProperty::Void,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ZetaProperty::Order => "OR",
            ZetaProperty::Facts => "F",
            ZetaProperty::Neutrality => "N",
            ZetaProperty::Identity => "ID",
            ZetaProperty::WeakestLink => "WL",
            ZetaProperty::Void => "V",
        }
    }

    /// Whether the instance `(s, s2)` satisfies the property; `s2` is only
    /// used by `Order`, as a sub-multiset of `s`.
    pub fn holds(self, z: SetAgg, s: &[f64], s2: &[f64]) -> bool {
        match self {
            ZetaProperty::Order => z.eval(s) <= z.eval(s2),
            ZetaProperty::Facts => z.eval(&[]) == z.max_value(),
            ZetaProperty::Neutrality => {
                let stripped: Vec<f64> = s.iter().copied().filter(|x| *x != 1.0).collect();
                z.eval(s) == z.eval(&stripped)
            }
            ZetaProperty::Identity => s.iter().all(|x| z.eval(&[*x]) == *x),
            ZetaProperty::WeakestLink => z.eval(s) <= s.iter().copied().fold(1.0, f64::min),
            ZetaProperty::Void => !s.contains(&0.0) || z.eval(s) == 0.0,
        }
    }

    /// Whether `z` is expected to satisfy the property.
    pub fn expected(self, z: SetAgg) -> bool {
        matches!(z, SetAgg::Prod | SetAgg::Min) || self == ZetaProperty::Identity
    }

    /// A known violation `(s, s2)` for aggregations that fail the property.
    pub fn stored_counterexample(self, z: SetAgg) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.expected(z) {
            return None;
        }
        Some(match (self, z) {
            (ZetaProperty::Order, _) => (vec![0.2, 0.3], vec![0.2]),
            (ZetaProperty::Facts, _) => (vec![], vec![]),
            (ZetaProperty::Neutrality, _) => (vec![0.3, 1.0], vec![]),
            (ZetaProperty::WeakestLink, SetAgg::Sum) => (vec![0.5, 0.5], vec![]),
            (ZetaProperty::WeakestLink, _) => (vec![0.2, 0.3], vec![]),
            (ZetaProperty::Void, _) => (vec![0.0, 0.5], vec![]),
            (ZetaProperty::Identity, _) => unreachable!(),
        })
    }
}

/// Multiset of 0..=8 strengths mixing exact 0 and 1, a 0.05 grid and
/// uniform draws.
pub fn sample_multiset<R: Rng>(rng: &mut R, max_len: usize) -> Vec<f64> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| sample_strength(rng)).collect()
}

pub fn sample_strength<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..10) {
        0 => 0.0,
        1 => 1.0,
        2..=5 => f64::from(rng.gen_range(0..=20u32)) * 0.05,
        _ => rng.gen::<f64>(),
    }
}

pub fn sample_family<R: Rng>(rng: &mut R, max_members: usize, max_len: usize) -> SetFamily {
    let n = rng.gen_range(0..=max_members);
    SetFamily::new((0..n).map(|_| StrengthMultiset::new(sample_multiset(rng, max_len))))
}

/// Random sub-multiset.
fn sample_subset<R: Rng>(rng: &mut R, s: &[f64]) -> Vec<f64> {
    s.iter().copied().filter(|_| rng.gen_bool(0.5)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail(String),
    /// Fails, as it should, on the given counterexample.
    ExpectedFail(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: String,
    pub trials: usize,
    /// Trials in which the hypothesis of the property held.
    pub fired: usize,
    pub status: Status,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        !matches!(self.status, Status::Fail(_))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            Status::Pass => write!(
                f,
                "PASS {} ({} trials, {} fired)",
                self.name, self.trials, self.fired
            ),
            Status::Fail(c) => write!(f, "FAIL {}: {c}", self.name),
            Status::ExpectedFail(c) => write!(f, "XFAIL {}: {c}", self.name),
        }
    }
}

/// Accumulates one property sweep.
struct Sweep {
    name: String,
    trials: usize,
    fired: usize,
    failure: Option<String>,
}

impl Sweep {
    fn new(name: impl Into<String>) -> Self {
        Sweep {
            name: name.into(),
            trials: 0,
            fired: 0,
            failure: None,
        }
    }

    /// Records one trial; `fired` tells whether the hypothesis held.
    fn record(&mut self, fired: bool, ok: bool, describe: impl FnOnce() -> String) {
        self.trials += 1;
        self.fired += usize::from(fired);
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn finish(self) -> Outcome {
        Outcome {
            name: self.name,
            trials: self.trials,
            fired: self.fired,
            status: self.failure.map_or(Status::Pass, Status::Fail),
        }
    }
}

/// Random sweep for the properties a set aggregation should satisfy, and
/// the stored counterexamples for the ones it should not.
pub fn zeta_properties(z: SetAgg, trials: usize, rng: &mut ChaCha8Rng) -> Vec<Outcome> {
    ZetaProperty::ALL
        .iter()
        .map(|&p| {
            let name = format!("zeta {z} ({})", p.tag());
            if let Some((s, s2)) = p.stored_counterexample(z) {
                let status = if p.holds(z, &s, &s2) {
                    Status::Fail(format!(
                        "stored counterexample {s:?} / {s2:?} does not fail"
                    ))
                } else {
                    Status::ExpectedFail(format!("{s:?} / {s2:?}"))
                };
                return Outcome {
                    name,
                    trials: 1,
                    fired: 1,
                    status,
                };
            }
            let mut sweep = Sweep::new(name);
            for _ in 0..trials {
                let s = sample_multiset(rng, 8);
                let s2 = sample_subset(rng, &s);
                sweep.record(true, p.holds(z, &s, &s2), || format!("{s:?} / {s2:?}"));
            }
            sweep.finish()
        })
        .collect()
}

/// Balance, monotonicity and range of an influence function on a grid.
pub fn influence_properties(iota: Influence) -> Outcome {
    let mut sweep = Sweep::new(format!("influence {:?} k={}", iota.kind, iota.k));
    let grid: Vec<f64> = (0..=20).map(|i| f64::from(i) * 0.05).collect();
    let ws: Vec<f64> = (-40..=40).map(|i| f64::from(i) * 0.25).collect();
    for &b in &grid {
        sweep.record(true, iota.eval(b, 0.0) == b, || format!("balance at b={b}"));
        for pair in ws.windows(2) {
            let (lo, hi) = (iota.eval(b, pair[0]), iota.eval(b, pair[1]));
            sweep.record(true, lo <= hi, || {
                format!("not monotone in w at b={b}, w={:?}", pair)
            });
        }
        for &w in &ws {
            let v = iota.eval(b, w);
            let bounded = match iota.kind {
                InfluenceKind::Linear => w.abs() > iota.k || (0.0..=1.0).contains(&v),
                InfluenceKind::QuadraticEnergyStandard => (0.0..=1.0).contains(&v),
                InfluenceKind::QuadraticEnergyPrinted => true,
            };
            sweep.record(true, bounded, || {
                format!("out of range at b={b}, w={w}: {v}")
            });
        }
    }
    // linear influence leaves [0, 1] beyond |w| = k, where b-monotonicity fails
    for &w in ws
        .iter()
        .filter(|w| iota.kind != InfluenceKind::Linear || w.abs() <= iota.k)
    {
        for pair in grid.windows(2) {
            let (lo, hi) = (iota.eval(pair[0], w), iota.eval(pair[1], w));
            sweep.record(true, lo <= hi, || {
                format!("not monotone in b at w={w}, b={:?}", pair)
            });
        }
    }
    sweep.finish()
}

pub fn superiority_properties(trials: usize, rng: &mut ChaCha8Rng) -> Vec<Outcome> {
    let mut reflexive = Sweep::new("superiority reflexive");
    let mut transitive = Sweep::new("superiority transitive");
    let mut equivalence = Sweep::new("sup-equivalence is mutual superiority");
    for _ in 0..trials {
        let a = StrengthMultiset::new(sample_multiset(rng, 6));
        let b = StrengthMultiset::new(sample_multiset(rng, 6));
        let c = StrengthMultiset::new(sample_multiset(rng, 6));
        reflexive.record(true, superior(&a, &a), || format!("{a:?}"));
        let fired = superior(&a, &b) && superior(&b, &c);
        transitive.record(fired, !fired || superior(&a, &c), || {
            format!("{a:?} {b:?} {c:?}")
        });
        // equal non-fact parts are rare at random; build some on purpose
        let b = if rng.gen_bool(0.3) {
            let mut v = a.nonmax();
            v.extend(std::iter::repeat_n(1.0, rng.gen_range(0..3)));
            v.shuffle(rng);
            StrengthMultiset::new(v)
        } else {
            b
        };
        let eq = sup_equivalent(&a, &b);
        equivalence.record(eq, eq == (superior(&a, &b) && superior(&b, &a)), || {
            format!("{a:?} {b:?}")
        });
    }
    vec![
        reflexive.finish(),
        transitive.finish(),
        equivalence.finish(),
    ]
}

/// ⪰-preservation for every set aggregation; `Sum` and `Max` are expected
/// to fail on a stored counterexample.
pub fn preservation_properties(trials: usize, rng: &mut ChaCha8Rng) -> Vec<Outcome> {
    SetAgg::ALL
        .iter()
        .map(|&z| {
            let name = format!("preservation {z}");
            if matches!(z, SetAgg::Sum | SetAgg::Max) {
                let (a, s) = match z {
                    SetAgg::Sum => (
                        SetFamily::from_values([vec![0.2]]),
                        SetFamily::from_values([vec![0.1, 0.1, 0.1]]),
                    ),
                    _ => (
                        SetFamily::from_values([vec![0.3]]),
                        SetFamily::from_values([vec![0.2, 1.0]]),
                    ),
                };
                let status = if check_preservation(z, &a, &s) {
                    Status::Fail("stored counterexample does not fail".into())
                } else {
                    Status::ExpectedFail(format!("{a:?} vs {s:?}"))
                };
                return Outcome {
                    name,
                    trials: 1,
                    fired: 1,
                    status,
                };
            }
            let mut sweep = Sweep::new(name);
            for _ in 0..trials {
                let (a, s) = dominating_pair(rng);
                let fired = dominates(&a, &s);
                sweep.record(fired, check_preservation(z, &a, &s), || {
                    format!("{a:?} vs {s:?}")
                });
            }
            sweep.finish()
        })
        .collect()
}

/// A pair of families where the first often dominates the second: the
/// second is built by weakening members of the first.
fn dominating_pair<R: Rng>(rng: &mut R) -> (SetFamily, SetFamily) {
    let a = sample_family(rng, 4, 4);
    if rng.gen_bool(0.5) {
        return (a, sample_family(rng, 4, 4));
    }
    let mut s = Vec::new();
    for m in a.members() {
        if rng.gen_bool(0.2) {
            continue;
        }
        let mut v: Vec<f64> = m
            .values()
            .iter()
            .map(|x| x * rng.gen_range(0.5..=1.0))
            .collect();
        if rng.gen_bool(0.3) {
            v.push(sample_strength(rng));
        }
        s.push(StrengthMultiset::new(v));
    }
    s.shuffle(rng);
    (a, SetFamily::new(s))
}

pub fn monotonicity_properties(trials: usize, rng: &mut ChaCha8Rng) -> Vec<Outcome> {
    let mut out = Vec::new();
    for z in [SetAgg::Prod, SetAgg::Min] {
        for alpha in [Agg::Sum, Agg::Prod] {
            let mut sweep = Sweep::new(format!("(alpha,zeta)-monotonicity {alpha}/{z}"));
            for _ in 0..trials {
                let (a, a2) = dominating_pair(rng);
                let (s, s2) = dominating_pair(rng);
                let (a, s) = if rng.gen_bool(0.5) { (a, s) } else { (s, a) };
                let fired = dominates(&a, &s)
                    || dominates(&s, &a)
                    || dominates(&a, &a2)
                    || dominates(&s, &s2);
                let clauses = alpha_zeta_clauses(z, alpha, &a, &s, &a2, &s2);
                sweep.record(fired, clauses.iter().all(|c| *c), || {
                    format!("clauses {clauses:?} on {a:?} {s:?} {a2:?} {s2:?}")
                });
            }
            out.push(sweep.finish());
        }
    }
    out
}

/// The four elementary kernels used by the semantic sweeps.
pub fn elementary_kernels() -> [Kernel; 4] {
    [
        Kernel::dfquad(SetAgg::Prod),
        Kernel::dfquad(SetAgg::Min),
        Kernel::quadratic_energy(SetAgg::Prod),
        Kernel::quadratic_energy(SetAgg::Min),
    ]
}

/// Family of attacking (or supporting) member strengths of `a` under `s`.
pub fn families(f: &Bsaf, s: &[f64], a: usize) -> (SetFamily, SetFamily) {
    let fam =
        |edges: Vec<&SetEdge>| {
            SetFamily::new(edges.into_iter().map(|e| {
                StrengthMultiset::new(e.members.iter().map(|&m| s[m]).collect::<Vec<_>>())
            }))
        };
    (
        fam(f.attackers_of(a).collect()),
        fam(f.supporters_of(a).collect()),
    )
}

/// Random cyclic BSAF whose base scores sit on a coarse grid and where some
/// nodes get mirrored attackers and supporters, so that the balance and
/// monotonicity hypotheses fire regularly.
pub fn property_instance<R: Rng>(rng: &mut R) -> Bsaf {
    let nodes = rng.gen_range(2..=8);
    let p = BsafParams {
        nodes,
        attacks: rng.gen_range(0..=nodes + 2),
        supports: rng.gen_range(0..=nodes),
        max_set: rng.gen_range(1..=3),
        acyclic: rng.gen_bool(0.3),
        tau: TauDist::Grid(4),
    };
    let f = gen_bsaf(&p, rng);
    let mut attacks = f.attacks().to_vec();
    let mut supports = f.supports().to_vec();
    for target in 0..nodes {
        if rng.gen_bool(0.25) {
            let members: Vec<usize> = (0..nodes).filter(|_| rng.gen_bool(0.4)).collect();
            if !members.is_empty() {
                attacks.push(SetEdge::new(members.iter().copied(), target));
                supports.push(SetEdge::new(members, target));
            }
        }
    }
    Bsaf::new(f.names().to_vec(), f.tau().to_vec(), attacks, supports)
}

/// Hypothesis checks of the monotonicity and balance properties: the
/// families are taken at the iterate before the last, so the last iterate
/// is exactly the kernel applied to them.
fn check_monotonicity_at_limit(f: &Bsaf, prev: &[f64], last: &[f64], sweeps: &mut [Sweep; 5]) {
    let tau = f.tau();
    let fams: Vec<(SetFamily, SetFamily)> = (0..f.len()).map(|a| families(f, prev, a)).collect();
    let tol = SEMANTICS_TOLERANCE;
    let [iam, ism, ib, rb, rm] = sweeps;
    for a in 0..f.len() {
        let (att, sup) = &fams[a];
        let fired = dominates(att, sup);
        iam.record(fired, !fired || last[a] <= tau[a] + tol, || {
            format!("node {a}: {f:?}")
        });
        let fired = dominates(sup, att);
        ism.record(fired, !fired || last[a] >= tau[a] - tol, || {
            format!("node {a}: {f:?}")
        });
        let fired = balanced(att, sup);
        ib.record(fired, !fired || (last[a] - tau[a]).abs() <= tol, || {
            format!("node {a}: {f:?}")
        });
        for b in 0..f.len() {
            if a == b {
                continue;
            }
            let (att_b, sup_b) = &fams[b];
            let fired = tau[a] == tau[b] && balanced(att, att_b) && balanced(sup_b, sup);
            rb.record(fired, !fired || (last[a] - last[b]).abs() <= tol, || {
                format!("nodes {a},{b}: {f:?}")
            });
            let fired = tau[a] <= tau[b] && dominates(att, att_b) && dominates(sup_b, sup);
            rm.record(fired, !fired || last[a] <= last[b] + tol, || {
                format!("nodes {a},{b}: {f:?}")
            });
        }
    }
}

/// Same framework with nodes renamed by `perm` (node `i` becomes `perm[i]`).
pub fn relabel(f: &Bsaf, perm: &[usize]) -> Bsaf {
    let n = f.len();
    let mut names = vec![String::new(); n];
    let mut tau = vec![0.0; n];
    for i in 0..n {
        names[perm[i]] = f.names()[i].clone();
        tau[perm[i]] = f.tau()[i];
    }
    let map = |edges: &[SetEdge]| {
        edges
            .iter()
            .map(|e| SetEdge::new(e.members.iter().map(|&m| perm[m]), perm[e.target]))
            .collect()
    };
    Bsaf::new(names, tau, map(f.attacks()), map(f.supports()))
}

/// Disjoint union; nodes of `g` are shifted behind those of `f`.
pub fn disjoint_union(f: &Bsaf, g: &Bsaf) -> Bsaf {
    let off = f.len();
    let names = f
        .names()
        .iter()
        .cloned()
        .chain(g.names().iter().map(|n| format!("{n}'")))
        .collect();
    let tau = f.tau().iter().chain(g.tau()).copied().collect();
    let shift = |edges: &[SetEdge], by: usize| -> Vec<SetEdge> {
        edges
            .iter()
            .map(|e| SetEdge::new(e.members.iter().map(|m| m + by), e.target + by))
            .collect()
    };
    let mut attacks = shift(f.attacks(), 0);
    attacks.extend(shift(g.attacks(), off));
    let mut supports = shift(f.supports(), 0);
    supports.extend(shift(g.supports(), off));
    Bsaf::new(names, tau, attacks, supports)
}

/// Nodes reachable in the primal graph from any of `from`.
pub fn primal_reachable(f: &Bsaf, from: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; f.len()];
    let mut stack: Vec<usize> = from.to_vec();
    for &v in from {
        seen[v] = true;
    }
    while let Some(v) = stack.pop() {
        for e in f.attacks().iter().chain(f.supports()) {
            if e.members.contains(&v) && !seen[e.target] {
                seen[e.target] = true;
                stack.push(e.target);
            }
        }
    }
    seen
}

fn same_bits(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

/// Semantic properties over `trials` random instances that converge under
/// a random elementary kernel. Non-converging draws are skipped and do not
/// count as trials.
pub fn semantic_properties(trials: usize, rng: &mut ChaCha8Rng) -> Vec<Outcome> {
    let mut anonymity = Sweep::new("semantics (A)");
    let mut independence = Sweep::new("semantics (IND)");
    let mut directionality = Sweep::new("semantics (DIR)");
    let mut sweeps = [
        Sweep::new("semantics (IAM)"),
        Sweep::new("semantics (ISM)"),
        Sweep::new("semantics (IB)"),
        Sweep::new("semantics (RB)"),
        Sweep::new("semantics (RM)"),
    ];
    let kernels = elementary_kernels();
    let mut done = 0;
    let mut draws = 0;
    while done < trials && draws < trials * 20 {
        draws += 1;
        let f = property_instance(rng);
        let kernel = kernels[rng.gen_range(0..kernels.len())];
        let cfg = EvolutionConfig::new(kernel);
        let report = run(&f, &cfg);
        if !report.converged {
            continue;
        }
        done += 1;

        let mut perm: Vec<usize> = (0..f.len()).collect();
        perm.shuffle(rng);
        let g = relabel(&f, &perm);
        let rg = run(&g, &cfg);
        let ok = rg.steps == report.steps
            && (0..f.len())
                .all(|i| rg.strengths[perm[i]].to_bits() == report.strengths[i].to_bits());
        anonymity.record(true, ok, || format!("{f:?} under {perm:?}"));

        let other = property_instance(rng);
        let u = disjoint_union(&f, &other);
        let n = report.steps;
        let tu = iterate(&u, &kernel, n);
        let tf = iterate(&f, &kernel, n);
        let to = iterate(&other, &kernel, n);
        let ok = (0..=n)
            .all(|t| same_bits(&tu[t][..f.len()], &tf[t]) && same_bits(&tu[t][f.len()..], &to[t]));
        independence.record(true, ok, || format!("{f:?} + {other:?}"));

        let size = rng.gen_range(1..=f.len().min(3));
        let members: Vec<usize> = rand::seq::index::sample(rng, f.len(), size).into_vec();
        let edge = SetEdge::new(members.iter().copied(), rng.gen_range(0..f.len()));
        let h = f.with_edge(edge.clone(), rng.gen_bool(0.5));
        let reach = primal_reachable(&h, &edge.members);
        let th = iterate(&h, &kernel, n);
        let ok = (0..=n).all(|t| {
            (0..f.len())
                .filter(|&c| !reach[c])
                .all(|c| tf[t][c].to_bits() == th[t][c].to_bits())
        });
        directionality.record(reach.iter().any(|r| !r), ok, || {
            format!("{f:?} plus {edge:?}")
        });

        let prev = &tf[n - 1];
        let last = &tf[n];
        check_monotonicity_at_limit(&f, prev, last, &mut sweeps);
    }
    let mut out = vec![
        anonymity.finish(),
        independence.finish(),
        directionality.finish(),
    ];
    out.extend(sweeps.into_iter().map(Sweep::finish));
    if done < trials {
        for o in &mut out {
            o.status = Status::Fail(format!("only {done} of {trials} instances converged"));
        }
    }
    out
}

/// Acyclic BSAFs converge under every elementary kernel, and their iterates
/// are exactly fixed after at most longest-path + 1 steps.
pub fn acyclic_convergence(trials: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let mut sweep = Sweep::new("acyclic convergence");
    for _ in 0..trials {
        let nodes = rng.gen_range(1..=12);
        let p = BsafParams {
            nodes,
            attacks: rng.gen_range(0..=2 * nodes),
            supports: rng.gen_range(0..=2 * nodes),
            max_set: rng.gen_range(1..=4),
            acyclic: true,
            tau: TauDist::Uniform,
        };
        let f = gen_bsaf(&p, rng);
        let longest = longest_primal_path(&f).expect("acyclic by construction");
        for kernel in elementary_kernels() {
            let r = run(&f, &EvolutionConfig::new(kernel));
            let trace = iterate(&f, &kernel, longest + 2);
            let fixed = same_bits(&trace[longest + 1], &trace[longest + 2]);
            let ok = r.converged && r.steps <= longest + 1 && fixed;
            sweep.record(true, ok, || {
                format!(
                    "steps {} with longest path {longest} under {kernel:?}: {f:?}",
                    r.steps
                )
            });
        }
    }
    sweep.finish()
}

/// Instances flagged by [`convergence_guarantee`] converge.
pub fn guarantee_soundness(trials: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let mut sweep = Sweep::new("convergence guarantee");
    let mut draws = 0;
    while sweep.trials < trials && draws < trials * 200 {
        draws += 1;
        let nodes = rng.gen_range(2..=10);
        let p = BsafParams {
            nodes,
            attacks: rng.gen_range(1..=2 * nodes),
            supports: rng.gen_range(0..=nodes),
            max_set: rng.gen_range(1..=3),
            acyclic: false,
            tau: TauDist::Uniform,
        };
        let f = gen_bsaf(&p, rng);
        let kernel = random_kernel(rng);
        let bound = convergence_guarantee(&f, &kernel);
        if !bound.guaranteed {
            continue;
        }
        let r = run(&f, &EvolutionConfig::new(kernel));
        sweep.record(true, r.converged, || {
            format!("{bound:?} under {kernel:?}: {f:?}")
        });
    }
    if sweep.trials < trials && sweep.failure.is_none() {
        sweep.failure = Some(format!("only {} flagged instances found", sweep.trials));
    }
    sweep.finish()
}

fn random_kernel<R: Rng>(rng: &mut R) -> Kernel {
    let zeta = SetAgg::ALL[rng.gen_range(0..4)];
    let alpha = if rng.gen_bool(0.5) {
        Agg::Sum
    } else {
        Agg::Prod
    };
    let k = [1.0, 2.0, 3.0, 5.0, 8.0, 13.0][rng.gen_range(0..6)];
    let iota = if rng.gen_bool(0.5) {
        Influence::linear(k)
    } else {
        Influence::quadratic_energy(k)
    };
    Kernel { zeta, alpha, iota }
}

/// BAF whose arguments mirror the nodes of a singleton-edge BSAF.
pub fn qbaf_twin(f: &Bsaf) -> Baf {
    let edge = |e: &SetEdge| {
        assert_eq!(e.members.len(), 1, "singleton edges only");
        (e.members[0], e.target)
    };
    Baf {
        arguments: (0..f.len())
            .map(|i| Argument {
                support: vec![i],
                claim: SentenceId(i as u32),
                rule_based: false,
            })
            .collect(),
        attacks: f.attacks().iter().map(edge).collect(),
        supports: f.supports().iter().map(edge).collect(),
        beta: f.tau().to_vec(),
    }
}

/// On singleton-edge BSAFs every set aggregation reduces to the identity,
/// so each step equals the BAF step on the twin framework.
pub fn qbaf_reduction(trials: usize, steps: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let mut sweep = Sweep::new("QBAF reduction");
    for _ in 0..trials {
        let nodes = rng.gen_range(1..=10);
        let p = BsafParams {
            nodes,
            attacks: rng.gen_range(0..=2 * nodes),
            supports: rng.gen_range(0..=2 * nodes),
            max_set: 1,
            acyclic: false,
            tau: TauDist::Uniform,
        };
        let f = gen_bsaf(&p, rng);
        let baf = qbaf_twin(&f);
        let zeta = SetAgg::ALL[rng.gen_range(0..4)];
        // kernels that keep strengths in [0, 1]
        let (alpha, iota) = match rng.gen_range(0..3) {
            0 => (Agg::Prod, Influence::linear(1.0)),
            1 => (Agg::Sum, Influence::quadratic_energy(1.0)),
            _ => (Agg::Prod, Influence::quadratic_energy(1.0)),
        };
        let kernel = Kernel { zeta, alpha, iota };
        let mut current = f.tau().to_vec();
        let mut ok = true;
        for _ in 0..steps {
            let a = step_bsaf(&f, &kernel, &current);
            let b = step_baf(&baf, alpha, iota, &current);
            ok &= same_bits(&a, &b);
            current = a;
        }
        sweep.record(true, ok, || format!("{kernel:?}: {f:?}"));
    }
    sweep.finish()
}

/// Runs every sweep; the report fails if any sweep fails.
pub fn check_properties(trials: usize, seed: u64) -> Result<Vec<Outcome>, HarnessError> {
    if trials == 0 {
        return Err(HarnessError::NoTrials);
    }
    let mut rng = rng_for(seed);
    let mut out = Vec::new();
    for z in SetAgg::ALL {
        out.extend(zeta_properties(z, trials, &mut rng));
    }
    for iota in [
        Influence::linear(1.0),
        Influence::linear(2.0),
        Influence::quadratic_energy(1.0),
        Influence::quadratic_energy(2.0),
    ] {
        out.push(influence_properties(iota));
    }
    out.extend(superiority_properties(trials, &mut rng));
    out.extend(preservation_properties(trials, &mut rng));
    out.extend(monotonicity_properties(trials, &mut rng));
    let semantic_trials = trials.div_ceil(20);
    out.extend(semantic_properties(semantic_trials, &mut rng));
    out.push(acyclic_convergence(semantic_trials, &mut rng));
    out.push(guarantee_soundness(semantic_trials, &mut rng));
    out.push(qbaf_reduction(semantic_trials, 30, &mut rng));
    Ok(out)
}
