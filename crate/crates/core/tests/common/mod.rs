#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use abagrad::aba::{Abaf, SentenceId};
use abagrad::generator::{gen_abaf, GenParams};
use abagrad::order::{SetFamily, StrengthMultiset};

/// Superiority by brute force: some injection of the non-maximal attacker
/// strengths onto the `k` largest non-maximal supporter strengths, element
/// by element no smaller.
pub fn superior_oracle(a: &[f64], s: &[f64]) -> bool {
    let a: Vec<f64> = a.iter().copied().filter(|x| *x != 1.0).collect();
    let s: Vec<f64> = s.iter().copied().filter(|x| *x != 1.0).collect();
    if a.is_empty() {
        return true;
    }
    if a.len() > s.len() {
        return false;
    }
    let mut top = s.clone();
    top.sort_by(|x, y| y.total_cmp(x));
    top.truncate(a.len());
    top.sort_by(f64::total_cmp);

    // every ordered choice of a.len() distinct positions of s
    let mut chosen = Vec::with_capacity(a.len());
    let mut used = vec![false; s.len()];
    fn search(
        a: &[f64],
        s: &[f64],
        top: &[f64],
        chosen: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        if chosen.len() == a.len() {
            let mut image: Vec<f64> = chosen.iter().map(|&j| s[j]).collect();
            image.sort_by(f64::total_cmp);
            return image == top;
        }
        let i = chosen.len();
        for j in 0..s.len() {
            if !used[j] && a[i] >= s[j] {
                used[j] = true;
                chosen.push(j);
                if search(a, s, top, chosen, used) {
                    return true;
                }
                chosen.pop();
                used[j] = false;
            }
        }
        false
    }
    search(&a, &s, &top, &mut chosen, &mut used)
}

/// Dominance by brute force over every injection of the positive supporting
/// sets into the positive attacking sets.
pub fn dominates_oracle(att: &[Vec<f64>], sup: &[Vec<f64>]) -> bool {
    let pos = |f: &[Vec<f64>]| -> Vec<Vec<f64>> {
        f.iter().filter(|m| !m.contains(&0.0)).cloned().collect()
    };
    let att = pos(att);
    let sup = pos(sup);
    fn search(att: &[Vec<f64>], sup: &[Vec<f64>], i: usize, used: &mut [bool]) -> bool {
        if i == sup.len() {
            return true;
        }
        for j in 0..att.len() {
            if !used[j] && superior_oracle(&att[j], &sup[i]) {
                used[j] = true;
                if search(att, sup, i + 1, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    search(&att, &sup, 0, &mut vec![false; att.len()])
}

pub fn family(members: &[Vec<f64>]) -> SetFamily {
    SetFamily::new(members.iter().map(|m| StrengthMultiset::new(m.clone())))
}

/// All multisets of size at most `max_len` over `grid`, in sorted form.
pub fn multisets(grid: &[f64], max_len: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<(Vec<f64>, usize)> = vec![(vec![], 0)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (m, from) in &frontier {
            for (i, &g) in grid.iter().enumerate().skip(*from) {
                let mut m2 = m.clone();
                m2.push(g);
                out.push(m2.clone());
                next.push((m2, i));
            }
        }
        frontier = next;
    }
    out
}

/// All multisets of at most `max_members` items drawn from `pool`, as index
/// lists.
pub fn index_multisets(pool: usize, max_members: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_members {
        let mut next = Vec::new();
        for m in &frontier {
            let from = m.last().copied().unwrap_or(0);
            for i in from..pool {
                let mut m2 = m.clone();
                m2.push(i);
                out.push(m2.clone());
                next.push(m2);
            }
        }
        frontier = next;
    }
    out
}

/// Sentences derivable from the assumptions in `subset` (bit `i` for the
/// `i`-th assumption) by forward chaining.
pub fn closure(d: &Abaf, subset: u32) -> HashSet<SentenceId> {
    let mut known: HashSet<SentenceId> = d
        .assumptions()
        .iter()
        .enumerate()
        .filter(|(i, _)| subset & (1 << i) != 0)
        .map(|(_, a)| *a)
        .collect();
    loop {
        let before = known.len();
        for r in d.rules() {
            if r.body.iter().all(|q| known.contains(q)) {
                known.insert(r.head);
            }
        }
        if known.len() == before {
            return known;
        }
    }
}

/// Every `(leaf set, claim)` with a derivation tree whose leaves are exactly
/// that set. A sentence is derivable from exactly `E` if it is an assumption
/// and `E` is its singleton, or a rule for it has body sentences derivable
/// from exactly `E_1..E_n` with union `E`. Computed as a fixed point over
/// the full table of subsets.
pub fn exact_pairs(d: &Abaf) -> BTreeSet<(u32, SentenceId)> {
    let n = d.assumption_count();
    assert!(n <= 8, "subset oracle is exponential");
    let mut table: BTreeSet<(u32, SentenceId)> = d
        .assumptions()
        .iter()
        .enumerate()
        .map(|(i, a)| (1u32 << i, *a))
        .collect();
    loop {
        let before = table.len();
        for r in d.rules() {
            // unions reachable by choosing a derivation for each body sentence
            let mut unions: BTreeSet<u32> = BTreeSet::from([0]);
            for q in &r.body {
                let options: Vec<u32> = table
                    .iter()
                    .filter(|(_, c)| c == q)
                    .map(|(e, _)| *e)
                    .collect();
                unions = unions
                    .iter()
                    .flat_map(|u| options.iter().map(move |o| u | o))
                    .collect();
            }
            for u in unions {
                table.insert((u, r.head));
            }
        }
        if table.len() == before {
            break;
        }
    }
    table
}

/// Small random framework for the subset oracle.
pub fn small_abaf(seed: u64) -> Abaf {
    let h = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 40;
    let n_assumptions = 1 + (h % 6) as usize;
    let n_atoms_extra = 1 + ((h >> 3) % 4) as usize;
    let total = n_assumptions + n_atoms_extra;
    let p = GenParams {
        n_assumptions,
        n_atoms_extra,
        n_rules: ((h >> 6) % 7) as usize,
        max_body: (1 + ((h >> 9) % 3) as usize).min(total - 1),
        flat: (h >> 12).is_multiple_of(3),
        seed,
    };
    gen_abaf(&p).expect("feasible parameters")
}
