//! The bicyclic set `Bic(G, A) = {π(g1) ∧ π(g2) : g1 g2 = g2 g1}`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::beta::BetaMap;
use super::group::{group_mul, ExtElem};
use crate::error::Result;
use crate::fpcore::enumerate::{for_each_in_range, map_partitions, space_size};
use crate::fpcore::wedge::wedge_into;
use crate::fpcore::{Budget, Wedge2};

fn union_all(p: crate::fpcore::PrimeModulus, r1: usize, parts: Vec<BTreeSet<Vec<u32>>>) -> BTreeSet<Wedge2> {
    parts
        .into_iter()
        .flatten()
        .map(|c| Wedge2::from_coords(p, r1, c).expect("coordinate count matches"))
        .collect()
}

/// `{u ∧ v : β(u ∧ v) = 0}` over all pairs of `A²`, deduplicated.
pub fn bic_of_beta(beta: &BetaMap, budget: Budget, partitions: usize) -> Result<BTreeSet<Wedge2>> {
    let p = beta.modulus();
    let r1 = beta.r1();
    let total = space_size(p, 2 * r1, budget, "bic_of_beta")?;
    let parts = map_partitions(total, partitions, |range| {
        let mut found = BTreeSet::new();
        let mut coords = Vec::new();
        for_each_in_range(p, 2 * r1, range, |_, d| {
            wedge_into(p, &d[..r1], &d[r1..], &mut coords);
            if beta.kills_coords(&coords) {
                found.insert(coords.clone());
            }
        });
        found
    });
    Ok(union_all(p, r1, parts))
}

/// How the brute-force oracle covered `G × G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum OracleMode {
    /// Every pair of group elements.
    FullGroup,
    /// Every pair of `A²`, lifted with the given fixed central parts.
    Projected { b1: Vec<u32>, b2: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicOracle {
    pub set: BTreeSet<Wedge2>,
    pub mode: OracleMode,
}

/// Settings for [`bic_bruteforce_oracle`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOptions {
    /// Largest `|G|²` for which every pair of group elements is tried.
    pub sample_budget: u128,
    /// Seed for the central parts used in projected mode.
    pub seed: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            sample_budget: 1 << 22,
            seed: 0,
        }
    }
}

/// Literal form of the definition: tests `g1 g2 == g2 g1` through the group
/// law and collects `π(g1) ∧ π(g2)`.
///
/// When `|G|²` exceeds the sample budget, pairs `(a1, a2) ∈ A²` are lifted
/// with central parts drawn once from the seed; commutation only depends on
/// the projections, so the result is the same set.
pub fn bic_bruteforce_oracle(
    beta: &BetaMap,
    opts: OracleOptions,
    budget: Budget,
    partitions: usize,
) -> Result<BicOracle> {
    let p = beta.modulus();
    let (r1, r2) = (beta.r1(), beta.r2());
    let full = space_size(p, 2 * (r1 + r2), Budget(opts.sample_budget), "bic oracle")
        .ok();
    let (total, len, mode) = match full {
        Some(total) => (total, 2 * (r1 + r2), OracleMode::FullGroup),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut draw = || (0..r2).map(|_| rng.gen_range(0..p.value())).collect::<Vec<_>>();
            let b1 = draw();
            let b2 = draw();
            let total = space_size(p, 2 * r1, budget, "bic oracle (projected)")?;
            (total, 2 * r1, OracleMode::Projected { b1, b2 })
        }
    };
    let parts = map_partitions(total, partitions, |range| -> Result<BTreeSet<Vec<u32>>> {
        let mut found = BTreeSet::new();
        let mut coords = Vec::new();
        let mut err = None;
        for_each_in_range(p, len, range, |_, d| {
            if err.is_some() {
                return;
            }
            let (g1, g2) = match &mode {
                OracleMode::FullGroup => (
                    ExtElem::new(d[..r2].to_vec(), d[r2..r2 + r1].to_vec()),
                    ExtElem::new(d[r2 + r1..2 * r2 + r1].to_vec(), d[2 * r2 + r1..].to_vec()),
                ),
                OracleMode::Projected { b1, b2 } => (
                    ExtElem::new(b1.clone(), d[..r1].to_vec()),
                    ExtElem::new(b2.clone(), d[r1..].to_vec()),
                ),
            };
            match (group_mul(&g1, &g2, beta), group_mul(&g2, &g1, beta)) {
                (Ok(x), Ok(y)) => {
                    if x == y {
                        wedge_into(p, g1.project(), g2.project(), &mut coords);
                        found.insert(coords.clone());
                    }
                }
                (Err(e), _) | (_, Err(e)) => err = Some(e),
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(found),
        }
    });
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(BicOracle {
        set: union_all(p, r1, parts),
        mode,
    })
}

/// `Bic = {0}`.
pub fn is_trivial(set: &BTreeSet<Wedge2>) -> bool {
    set.iter().all(Wedge2::is_zero)
}
