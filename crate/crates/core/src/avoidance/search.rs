//! Search for a linear subspace of `P^N` missing a finite point set.
//!
//! If `#X < #P^n(F_p)`, every maximal `X`-avoiding subspace has codimension
//! at most `n`, so greedy flag growth already succeeds. The search still
//! carries bounded backtracking and seeded random restarts behind a step
//! budget, and reports which path produced the answer.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::projective::{projective_count, projective_point_at, ProjPoint};
use crate::error::{Error, Result};
use crate::fpcore::{PrimeModulus, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Seed of the random-restart phase.
    pub seed: u64,
    /// Candidate examinations allowed in the deterministic phase.
    pub step_budget: u64,
    /// Number of random restarts after the deterministic phase.
    pub restarts: u32,
    /// Random draws per extension step inside one restart.
    pub draws_per_step: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            seed: 0,
            step_budget: 1 << 26,
            restarts: 64,
            draws_per_step: 4096,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchStrategy {
    Greedy,
    Backtracked { backtracks: u64 },
    RandomRestart { restart: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Avoidance {
    /// The avoiding subspace as a linear subspace of `F_p^{N+1}`.
    pub subspace: Subspace,
    pub strategy: SearchStrategy,
    pub steps: u64,
}

/// `{[x + w] : x ∈ X, w ∈ W}`: the candidates `v` for which `W + <v>` meets `X`
/// (given that `W` itself misses `X`).
fn forbidden(p: PrimeModulus, points: &[Vec<u32>], w: &Subspace) -> HashSet<Vec<u32>> {
    let ws: Vec<Vec<u32>> = w.vectors().collect();
    let mut out = HashSet::with_capacity(points.len() * ws.len());
    for x in points {
        for wv in &ws {
            let mut v: Vec<u32> = x.iter().zip(wv).map(|(&a, &b)| p.add(a, b)).collect();
            if ProjPoint::normalize_in_place(p, &mut v) {
                out.insert(v);
            }
        }
    }
    out
}

struct Level {
    space: Subspace,
    banned: HashSet<Vec<u32>>,
    cursor: u64,
}

/// Finds a subspace `L ⊆ P^N` of codimension `n` with `L ∩ points = ∅`.
pub fn avoiding_subspace(
    p: PrimeModulus,
    points: &BTreeSet<ProjPoint>,
    big_n: usize,
    n: usize,
    opts: SearchOptions,
) -> Result<Avoidance> {
    if n > big_n {
        return Err(Error::Precondition(format!(
            "codimension {n} exceeds projective dimension {big_n}"
        )));
    }
    if let Some(bad) = points.iter().find(|x| x.projective_dim() != big_n) {
        return Err(Error::DimensionMismatch {
            op: "avoiding_subspace",
            expected: big_n + 1,
            found: bad.coords().len(),
        });
    }
    let bound = projective_count(p, n)?;
    if points.len() as u128 >= bound {
        return Err(Error::Precondition(format!(
            "{} points is not fewer than #P^{n}(F_{p}) = {bound}",
            points.len()
        )));
    }
    let pts: Vec<Vec<u32>> = points.iter().map(|x| x.coords().to_vec()).collect();
    let ambient = big_n + 1;
    let target = ambient - n;
    let total = projective_count(p, big_n)?;
    let total = u64::try_from(total).map_err(|_| Error::Overflow("projective space size"))?;

    // deterministic phase: lexicographic greedy with bounded backtracking
    let zero = Subspace::zero(p, ambient);
    let mut stack = vec![Level {
        banned: forbidden(p, &pts, &zero),
        space: zero,
        cursor: 0,
    }];
    let mut steps = 0u64;
    let mut backtracks = 0u64;
    while let Some(top) = stack.last_mut() {
        if top.space.dim() == target {
            let strategy = if backtracks == 0 {
                SearchStrategy::Greedy
            } else {
                SearchStrategy::Backtracked { backtracks }
            };
            return Ok(Avoidance {
                subspace: top.space.clone(),
                strategy,
                steps,
            });
        }
        let mut next = None;
        while top.cursor < total && steps < opts.step_budget {
            steps += 1;
            let v = projective_point_at(p, big_n, top.cursor);
            top.cursor += 1;
            if !top.banned.contains(&v) && !top.space.contains(&v) {
                next = Some(top.space.extended(&v));
                break;
            }
        }
        match next {
            Some(space) => {
                let banned = forbidden(p, &pts, &space);
                stack.push(Level {
                    space,
                    banned,
                    cursor: 0,
                });
            }
            None if top.cursor < total => break,
            None => {
                stack.pop();
                backtracks += 1;
            }
        }
    }

    // random restarts
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for restart in 0..opts.restarts {
        let mut space = Subspace::zero(p, ambient);
        let mut banned = forbidden(p, &pts, &space);
        'grow: while space.dim() < target {
            for _ in 0..opts.draws_per_step {
                steps += 1;
                let mut v: Vec<u32> = (0..ambient).map(|_| rng.gen_range(0..p.value())).collect();
                if !ProjPoint::normalize_in_place(p, &mut v) {
                    continue;
                }
                if banned.contains(&v) || space.contains(&v) {
                    continue;
                }
                space = space.extended(&v);
                banned = forbidden(p, &pts, &space);
                continue 'grow;
            }
            break;
        }
        if space.dim() == target {
            return Ok(Avoidance {
                subspace: space,
                strategy: SearchStrategy::RandomRestart { restart },
                steps,
            });
        }
    }
    Err(Error::SearchExhausted {
        seed: opts.seed,
        restarts: opts.restarts,
        steps,
    })
}

/// Whether any of `points` lies on `space` (viewed projectively).
pub fn meets(space: &Subspace, points: &BTreeSet<ProjPoint>) -> bool {
    points.iter().any(|x| space.contains(x.coords()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avoidance::projective::plucker_image;
    use crate::fpcore::Budget;

    fn p3() -> PrimeModulus {
        PrimeModulus::new(3).unwrap()
    }

    #[test]
    fn empty_point_set_gives_lexicographically_first() {
        let a = avoiding_subspace(p3(), &BTreeSet::new(), 3, 2, SearchOptions::default()).unwrap();
        assert_eq!(a.subspace.dim(), 2);
        assert_eq!(a.strategy, SearchStrategy::Greedy);
        // spanned by the first two points in lexicographic order
        let want =
            Subspace::span_of_vectors(p3(), 4, &[vec![0, 0, 0, 1], vec![0, 0, 1, 0]]).unwrap();
        assert_eq!(a.subspace, want);
    }

    #[test]
    fn codim_zero_is_whole_space() {
        let a = avoiding_subspace(p3(), &BTreeSet::new(), 2, 0, SearchOptions::default()).unwrap();
        assert_eq!(a.subspace.dim(), 3);
        let one: BTreeSet<_> = [ProjPoint::new(p3(), &[1, 0, 0]).unwrap()].into();
        assert!(avoiding_subspace(p3(), &one, 2, 0, SearchOptions::default()).is_err());
    }

    #[test]
    fn point_off_the_grassmannian() {
        let p = p3();
        let x = plucker_image(p, 4, Budget::default()).unwrap();
        let a = avoiding_subspace(p, &x, 5, 5, SearchOptions::default()).unwrap();
        assert_eq!(a.subspace.dim(), 1);
        assert!(!meets(&a.subspace, &x));
        // 364 - 130 = 234 admissible answers exist
        let total = projective_count(p, 5).unwrap() as u64;
        let free = (0..total)
            .map(|k| projective_point_at(p, 5, k))
            .filter(|v| !x.contains(&ProjPoint::new(p, v).unwrap()))
            .count();
        assert_eq!(free, 234);
    }

    #[test]
    fn precondition_checks() {
        let p = p3();
        let x = plucker_image(p, 4, Budget::default()).unwrap();
        // #P^4(F_3) = 121 <= 130
        assert!(matches!(
            avoiding_subspace(p, &x, 5, 4, SearchOptions::default()),
            Err(Error::Precondition(_))
        ));
        assert!(avoiding_subspace(p, &x, 4, 4, SearchOptions::default()).is_err());
    }

    #[test]
    fn random_phase_and_exhaustion() {
        let p = p3();
        let x = plucker_image(p, 4, Budget::default()).unwrap();
        let opts = SearchOptions {
            seed: 11,
            step_budget: 0,
            restarts: 8,
            draws_per_step: 4096,
        };
        let a = avoiding_subspace(p, &x, 5, 5, opts).unwrap();
        assert!(matches!(a.strategy, SearchStrategy::RandomRestart { .. }));
        assert!(!meets(&a.subspace, &x));
        let none = SearchOptions {
            seed: 11,
            step_budget: 0,
            restarts: 0,
            draws_per_step: 1,
        };
        assert!(matches!(
            avoiding_subspace(p, &x, 5, 5, none),
            Err(Error::SearchExhausted { seed: 11, .. })
        ));
    }
}
