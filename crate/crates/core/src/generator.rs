//! Seeded random ABA frameworks and BSAFs.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::aba::{Abaf, AbafBuilder};
use crate::instantiation::{Bsaf, SetEdge};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub n_assumptions: usize,
    /// Atoms that are not assumptions.
    pub n_atoms_extra: usize,
    pub n_rules: usize,
    /// Bodies have a uniform size in `1..=max_body`.
    pub max_body: usize,
    pub flat: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("at least one assumption is required")]
    NoAssumptions,
    #[error("max_body must be at least 1")]
    EmptyBodies,
    #[error("flat frameworks need at least one non-assumption atom as rule head")]
    NoHeads,
    #[error("max_body {max_body} exceeds the {available} sentences available for a body")]
    BodyTooLarge { max_body: usize, available: usize },
    #[error("contraries need at least two sentences")]
    NoContraryCandidates,
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GenError> {
        let total = self.n_assumptions + self.n_atoms_extra;
        if self.n_assumptions == 0 {
            return Err(GenError::NoAssumptions);
        }
        if self.max_body == 0 {
            return Err(GenError::EmptyBodies);
        }
        if total < 2 {
            return Err(GenError::NoContraryCandidates);
        }
        if self.n_rules > 0 {
            if self.flat && self.n_atoms_extra == 0 {
                return Err(GenError::NoHeads);
            }
            if self.max_body > total - 1 {
                return Err(GenError::BodyTooLarge {
                    max_body: self.max_body,
                    available: total - 1,
                });
            }
        }
        Ok(())
    }
}

/// Seed of the `index`-th instance of a corpus with base seed `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finaliser over the pair
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sentences `a0..` are assumptions and `p0..` plain atoms. Rule bodies never
/// contain their own head. Duplicate rules are redrawn a bounded number of
/// times, so the result may have slightly fewer than `n_rules` rules when the
/// rule space is small.
pub fn gen_abaf(p: &GenParams) -> Result<Abaf, GenError> {
    p.validate()?;
    let mut rng = rng_for(p.seed);
    let total = p.n_assumptions + p.n_atoms_extra;
    let name = |i: usize| {
        if i < p.n_assumptions {
            format!("a{i}")
        } else {
            format!("p{}", i - p.n_assumptions)
        }
    };

    let mut b = AbafBuilder::new();
    for i in 0..total {
        b.intern(&name(i));
    }
    for i in 0..p.n_assumptions {
        b.assumption(&name(i));
        let mut c = rng.gen_range(0..total - 1);
        if c >= i {
            c += 1;
        }
        b.contrary(&name(i), &name(c));
    }

    let mut rules: Vec<(usize, Vec<usize>)> = Vec::with_capacity(p.n_rules);
    let mut attempts = 0;
    while rules.len() < p.n_rules && attempts < p.n_rules * 100 {
        attempts += 1;
        let head = if p.flat {
            p.n_assumptions + rng.gen_range(0..p.n_atoms_extra)
        } else {
            rng.gen_range(0..total)
        };
        let size = rng.gen_range(1..=p.max_body);
        let mut body: Vec<usize> = sample(&mut rng, total - 1, size)
            .into_iter()
            .map(|x| if x >= head { x + 1 } else { x })
            .collect();
        body.sort_unstable();
        if !rules.iter().any(|(h, bd)| *h == head && *bd == body) {
            rules.push((head, body));
        }
    }
    for (head, body) in &rules {
        let body: Vec<String> = body.iter().map(|&x| name(x)).collect();
        b.rule(&name(*head), body.iter().map(String::as_str));
    }
    Ok(b.build().expect("generated frameworks are well formed"))
}

/// How random base scores are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauDist {
    Uniform,
    /// Multiples of `1/steps` in `[0, 1]`.
    Grid(u32),
    Const(f64),
}

impl TauDist {
    pub fn sample<R: Rng>(self, rng: &mut R) -> f64 {
        match self {
            TauDist::Uniform => rng.gen::<f64>(),
            TauDist::Grid(steps) => f64::from(rng.gen_range(0..=steps)) / f64::from(steps),
            TauDist::Const(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsafParams {
    pub nodes: usize,
    pub attacks: usize,
    pub supports: usize,
    pub max_set: usize,
    /// Only edges whose members precede the target in a hidden order.
    pub acyclic: bool,
    pub tau: TauDist,
}

/// Random BSAF; nodes are named `n0..`. Edge counts are upper bounds since
/// duplicates are dropped.
pub fn gen_bsaf<R: Rng>(p: &BsafParams, rng: &mut R) -> Bsaf {
    assert!(p.nodes >= 1 && p.max_set >= 1);
    let names: Vec<String> = (0..p.nodes).map(|i| format!("n{i}")).collect();
    let tau: Vec<f64> = (0..p.nodes).map(|_| p.tau.sample(rng)).collect();
    let rank: Vec<usize> = sample(rng, p.nodes, p.nodes).into_vec();
    let edge = |rng: &mut R| -> Option<SetEdge> {
        let target = rng.gen_range(0..p.nodes);
        let pool: Vec<usize> = if p.acyclic {
            (0..p.nodes).filter(|&m| rank[m] < rank[target]).collect()
        } else {
            (0..p.nodes).collect()
        };
        if pool.is_empty() {
            return None;
        }
        let size = rng.gen_range(1..=p.max_set.min(pool.len()));
        let members = sample(rng, pool.len(), size).into_iter().map(|i| pool[i]);
        Some(SetEdge::new(members, target))
    };
    let attacks = (0..p.attacks).filter_map(|_| edge(rng)).collect();
    let supports = (0..p.supports).filter_map(|_| edge(rng)).collect();
    Bsaf::new(names, tau, attacks, supports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aba::check_flat;
    use crate::engine::primal_acyclic;

    fn params(seed: u64) -> GenParams {
        GenParams {
            n_assumptions: 10,
            n_atoms_extra: 10,
            n_rules: 15,
            max_body: 3,
            flat: false,
            seed,
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let a = gen_abaf(&params(7)).unwrap();
        let b = gen_abaf(&params(7)).unwrap();
        assert_eq!(a, b);
        let c = gen_abaf(&params(8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn shape_matches_params() {
        let p = params(3);
        let d = gen_abaf(&p).unwrap();
        assert_eq!(d.assumption_count(), 10);
        assert_eq!(d.sentence_count(), 20);
        assert_eq!(d.rules().len(), 15);
        for r in d.rules() {
            assert!(!r.body.is_empty() && r.body.len() <= 3);
            assert!(!r.body.contains(&r.head));
        }
        for i in 0..d.assumption_count() {
            assert_ne!(d.contrary(i), d.assumptions()[i]);
        }
    }

    #[test]
    fn flat_flag_is_honoured() {
        for seed in 0..1000 {
            let p = GenParams {
                flat: true,
                ..params(seed)
            };
            assert!(check_flat(&gen_abaf(&p).unwrap()).flat);
        }
    }

    #[test]
    fn non_flat_usually_has_assumption_heads() {
        let non_flat = (0..50)
            .filter(|&s| !check_flat(&gen_abaf(&params(s)).unwrap()).flat)
            .count();
        assert!(non_flat > 40);
    }

    #[test]
    fn infeasible_params() {
        let mut p = params(0);
        p.flat = true;
        p.n_atoms_extra = 0;
        assert_eq!(gen_abaf(&p), Err(GenError::NoHeads));
        let mut p = params(0);
        p.max_body = 20;
        assert!(matches!(gen_abaf(&p), Err(GenError::BodyTooLarge { .. })));
        let mut p = params(0);
        p.n_assumptions = 0;
        assert_eq!(gen_abaf(&p), Err(GenError::NoAssumptions));
        let mut p = params(0);
        p.max_body = 0;
        assert_eq!(gen_abaf(&p), Err(GenError::EmptyBodies));
    }

    #[test]
    fn rule_free_generation() {
        let p = GenParams {
            n_rules: 0,
            n_atoms_extra: 0,
            ..params(1)
        };
        let d = gen_abaf(&p).unwrap();
        assert!(d.rules().is_empty());
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(derive_seed(42, 5), derive_seed(42, 5));
    }

    #[test]
    fn acyclic_bsafs_are_acyclic() {
        let mut rng = rng_for(9);
        for _ in 0..200 {
            let p = BsafParams {
                nodes: 8,
                attacks: 10,
                supports: 6,
                max_set: 3,
                acyclic: true,
                tau: TauDist::Grid(4),
            };
            let f = gen_bsaf(&p, &mut rng);
            assert!(primal_acyclic(&f));
            assert!(f.tau().iter().all(|t| (t * 4.0).fract() == 0.0));
        }
    }
}
