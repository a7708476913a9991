//! Comparisons between multisets of strengths and between families of such
//! multisets.
//!
//! The maximal strength is fixed at `1`: elements exactly equal to `1` are
//! facts and are ignored by superiority, and sets containing an exact `0`
//! are ignored by dominance. No tolerance is applied to either test.

use crate::kernels::{Agg, SetAgg};

/// Multiset of strengths in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StrengthMultiset(pub Vec<f64>);

impl StrengthMultiset {
    pub fn new(values: impl Into<Vec<f64>>) -> Self {
        StrengthMultiset(values.into())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Elements different from the maximal strength, sorted descending.
    pub fn nonmax(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.0.iter().copied().filter(|x| *x != 1.0).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    pub fn contains_zero(&self) -> bool {
        self.0.contains(&0.0)
    }
}

impl From<Vec<f64>> for StrengthMultiset {
    fn from(v: Vec<f64>) -> Self {
        StrengthMultiset(v)
    }
}

/// Multiset of strength multisets, e.g. the attackers of one assumption.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SetFamily(pub Vec<StrengthMultiset>);

impl SetFamily {
    pub fn new(members: impl IntoIterator<Item = StrengthMultiset>) -> Self {
        SetFamily(members.into_iter().collect())
    }

    pub fn from_values<I, J>(members: I) -> Self
    where
        I: IntoIterator<Item = J>,
        J: Into<Vec<f64>>,
    {
        SetFamily(
            members
                .into_iter()
                .map(|m| StrengthMultiset(m.into()))
                .collect(),
        )
    }

    pub fn members(&self) -> &[StrengthMultiset] {
        &self.0
    }

    /// Members that do not contain a zero.
    pub fn pos(&self) -> Vec<&StrengthMultiset> {
        self.0.iter().filter(|m| !m.contains_zero()).collect()
    }

    /// `{ζ(A) | A ∈ self}`.
    pub fn zeta_image(&self, zeta: SetAgg) -> StrengthMultiset {
        StrengthMultiset(self.0.iter().map(|m| zeta.eval(&m.0)).collect())
    }

    /// Family of singletons, one per value.
    pub fn singletons(values: &StrengthMultiset) -> SetFamily {
        SetFamily(
            values
                .0
                .iter()
                .map(|v| StrengthMultiset(vec![*v]))
                .collect(),
        )
    }
}

/// `a` is superior to `s`: both are all facts, or `a` has at most as many
/// non-facts as `s` and, sorted descending, each non-fact of `a` is at
/// least the corresponding one among the largest non-facts of `s`.
pub fn superior(a: &StrengthMultiset, s: &StrengthMultiset) -> bool {
    let a = a.nonmax();
    let s = s.nonmax();
    if a.is_empty() && s.is_empty() {
        return true;
    }
    a.len() <= s.len() && a.iter().zip(&s).all(|(x, y)| x >= y)
}

/// Same non-fact parts, as multisets.
pub fn sup_equivalent(a: &StrengthMultiset, s: &StrengthMultiset) -> bool {
    let a = a.nonmax();
    let s = s.nonmax();
    a.len() == s.len() && a.iter().zip(&s).all(|(x, y)| x == y)
}

/// Maximum bipartite matching by augmenting paths. `adj[l]` lists the right
/// vertices adjacent to left vertex `l`. Returns the matching size.
fn max_matching(adj: &[Vec<usize>], right: usize) -> usize {
    fn augment(
        l: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        match_right: &mut [Option<usize>],
    ) -> bool {
        for &r in &adj[l] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            if match_right[r].is_none_or(|other| augment(other, adj, seen, match_right)) {
                match_right[r] = Some(l);
                return true;
            }
        }
        false
    }

    let mut match_right = vec![None; right];
    let mut size = 0;
    for l in 0..adj.len() {
        let mut seen = vec![false; right];
        if augment(l, adj, &mut seen, &mut match_right) {
            size += 1;
        }
    }
    size
}

/// `att` dominates `sup`: every zero-free member of `sup` can be assigned a
/// distinct zero-free member of `att` that is superior to it.
pub fn dominates(att: &SetFamily, sup: &SetFamily) -> bool {
    let left = sup.pos();
    let right = att.pos();
    if left.is_empty() {
        return true;
    }
    if left.len() > right.len() {
        return false;
    }
    let adj: Vec<Vec<usize>> = left
        .iter()
        .map(|s| {
            right
                .iter()
                .enumerate()
                .filter(|(_, a)| superior(a, s))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    max_matching(&adj, right.len()) == left.len()
}

pub fn balanced(a: &SetFamily, s: &SetFamily) -> bool {
    dominates(a, s) && dominates(s, a)
}

/// Whether `ζ(a)` dominates `ζ(s)` as families of single strengths.
pub fn zeta_image_dominates(zeta: SetAgg, a: &SetFamily, s: &SetFamily) -> bool {
    dominates(
        &SetFamily::singletons(&a.zeta_image(zeta)),
        &SetFamily::singletons(&s.zeta_image(zeta)),
    )
}

/// One instance of ⪰-preservation: if `a` dominates `s` then the
/// ζ-aggregated strengths of `a` dominate those of `s`.
pub fn check_preservation(zeta: SetAgg, a: &SetFamily, s: &SetFamily) -> bool {
    !dominates(a, s) || zeta_image_dominates(zeta, a, s)
}

/// Slack for comparing two aggregates computed through different folds.
const ROUNDING_SLACK: f64 = 1e-12;

/// Outcome of each (α,ζ)-monotonicity clause on one instance; a clause whose
/// premise does not hold counts as satisfied.
pub fn alpha_zeta_clauses(
    zeta: SetAgg,
    alpha: Agg,
    a: &SetFamily,
    s: &SetFamily,
    a2: &SetFamily,
    s2: &SetFamily,
) -> [bool; 4] {
    let img = |f: &SetFamily| f.zeta_image(zeta).0;
    let (za, zs, za2, zs2) = (img(a), img(s), img(a2), img(s2));
    let w = alpha.eval(&za, &zs);
    [
        !dominates(a, s) || w <= ROUNDING_SLACK,
        !dominates(s, a) || w >= -ROUNDING_SLACK,
        // stronger attackers never raise the aggregate
        !dominates(a, a2) || w <= alpha.eval(&za2, &zs) + ROUNDING_SLACK,
        // stronger supporters never lower it
        !dominates(s, s2) || w >= alpha.eval(&za, &zs2) - ROUNDING_SLACK,
    ]
}

pub fn check_alpha_zeta_monotonicity(
    zeta: SetAgg,
    alpha: Agg,
    a: &SetFamily,
    s: &SetFamily,
    a2: &SetFamily,
    s2: &SetFamily,
) -> bool {
    alpha_zeta_clauses(zeta, alpha, a, s, a2, s2)
        .iter()
        .all(|c| *c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[f64]) -> StrengthMultiset {
        StrengthMultiset::new(v.to_vec())
    }

    fn fam(v: &[&[f64]]) -> SetFamily {
        SetFamily::from_values(v.iter().map(|x| x.to_vec()))
    }

    #[test]
    fn superiority_worked_example() {
        let a = m(&[0.2, 0.2, 0.45, 0.95, 1.0]);
        let s = m(&[0.001, 0.01, 0.2, 0.4, 0.9, 1.0, 1.0, 1.0, 1.0]);
        assert!(superior(&a, &s));
        assert!(!superior(&s, &a));
    }

    #[test]
    fn superiority_edge_cases() {
        assert!(superior(&m(&[1.0, 1.0]), &m(&[1.0])));
        assert!(!superior(&m(&[0.2]), &m(&[0.3])));
        assert!(superior(&m(&[0.3]), &m(&[0.2])));
        // all-fact sets beat anything
        assert!(superior(&m(&[]), &m(&[0.4, 0.5])));
        // nothing but facts is superior to a fact-only set
        assert!(!superior(&m(&[0.99]), &m(&[1.0])));
        // bigger sets are never superior
        assert!(!superior(&m(&[0.9, 0.9]), &m(&[0.1])));
    }

    #[test]
    fn stripping_is_exact() {
        let almost = 1.0 - f64::EPSILON;
        assert_eq!(m(&[almost, 1.0]).nonmax(), vec![almost]);
    }

    #[test]
    fn equivalence() {
        assert!(sup_equivalent(&m(&[0.3, 1.0]), &m(&[0.3])));
        assert!(!sup_equivalent(&m(&[0.3]), &m(&[0.4])));
        assert!(sup_equivalent(&m(&[0.1, 0.7]), &m(&[0.7, 1.0, 0.1])));
    }

    #[test]
    fn dominance_examples() {
        let a = fam(&[&[0.2]]);
        let s = fam(&[&[0.1, 0.1, 0.1]]);
        assert!(dominates(&a, &s));
        assert!(!dominates(&s, &a));
        assert!(!balanced(&a, &s));
        assert!(dominates(&fam(&[&[0.0, 0.4]]), &SetFamily::default()));
        assert!(dominates(&SetFamily::default(), &SetFamily::default()));
        // zero-containing members are ignored on both sides
        assert!(dominates(&SetFamily::default(), &fam(&[&[0.0, 0.9]])));
        assert!(!dominates(&fam(&[&[0.0]]), &fam(&[&[0.5]])));
    }

    #[test]
    fn dominance_needs_distinct_partners() {
        let a = fam(&[&[0.9]]);
        let s = fam(&[&[0.5], &[0.5]]);
        assert!(!dominates(&a, &s));
        let a = fam(&[&[0.9], &[0.6]]);
        assert!(dominates(&a, &s));
    }

    #[test]
    fn matching_needs_augmenting_paths() {
        // greedy assignment of the first sup member to the strongest attacker
        // blocks the second; augmentation fixes it
        let a = fam(&[&[0.9], &[0.5]]);
        let s = fam(&[&[0.4], &[0.8]]);
        assert!(dominates(&a, &s));
    }

    #[test]
    fn balance_on_permutations() {
        let a = fam(&[&[0.3, 0.4], &[0.5], &[0.0, 0.2]]);
        let b = fam(&[&[0.5], &[0.4, 0.3]]);
        assert!(balanced(&a, &b));
        assert!(balanced(&a, &a));
    }

    #[test]
    fn preservation_counterexample_for_sum() {
        let a = fam(&[&[0.2]]);
        let s = fam(&[&[0.1, 0.1, 0.1]]);
        assert!(!check_preservation(SetAgg::Sum, &a, &s));
        assert!(check_preservation(SetAgg::Prod, &a, &s));
        assert!(check_preservation(SetAgg::Min, &a, &s));
    }

    #[test]
    fn preservation_with_more_attacking_sets() {
        let a = fam(&[&[0.5], &[0.5]]);
        let s = fam(&[&[0.5]]);
        assert!(dominates(&a, &s));
        assert!(check_preservation(SetAgg::Prod, &a, &s));
    }

    #[test]
    fn monotonicity_identical_families_cancel() {
        let a = fam(&[&[0.3, 0.4], &[0.7]]);
        let img = a.zeta_image(SetAgg::Min).0;
        assert_eq!(Agg::Sum.eval(&img, &img), 0.0);
        assert!(check_alpha_zeta_monotonicity(
            SetAgg::Min,
            Agg::Sum,
            &a,
            &a,
            &a,
            &a
        ));
    }

    #[test]
    fn monotonicity_clauses_fire() {
        let strong = fam(&[&[0.9]]);
        let weak = fam(&[&[0.2, 0.3]]);
        let clauses = alpha_zeta_clauses(
            SetAgg::Prod,
            Agg::Prod,
            &strong,
            &weak,
            &weak,
            &SetFamily::default(),
        );
        assert_eq!(clauses, [true; 4]);
        // clause 1 premise holds and the aggregate is negative
        let w = Agg::Prod.eval(
            &strong.zeta_image(SetAgg::Prod).0,
            &weak.zeta_image(SetAgg::Prod).0,
        );
        assert!(w < 0.0);
    }
}
