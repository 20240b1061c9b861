//! Search for a class `b ∈ Λ²A^D` whose pairing with `E_v` is not constant,
//! and the finite unramifiedness criterion for such classes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::counting::matrix_at;
use super::symplectic::{pullback_coords_into, w_pairing, DualWedge, SymplecticSpace};
use crate::error::{Error, Result};
use crate::extension::{bic_of_beta, BetaMap};
use crate::fpcore::enumerate::{for_each_in_range, map_partitions, space_size};
use crate::fpcore::{pair_index, wedge_dim, Budget, FpMatrix, Wedge2};

/// Which phase of the search produced the witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessMethod {
    /// `ξ` sends the first two generators to `e_i, e_j`, with `β(e_i ∧ e_j) = 0`.
    CoordinateProbe,
    /// First member of `E_v \ C_v` in enumeration order.
    FullScan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionWitness {
    pub b: DualWedge,
    pub xi: FpMatrix,
    pub value: u32,
    pub method: WitnessMethod,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessOutcome {
    Found(ObstructionWitness),
    /// `E_v = C_v`: every class pairs to zero on all of `E_v`.
    Exhausted,
}

impl WitnessOutcome {
    pub fn witness(&self) -> Option<&ObstructionWitness> {
        match self {
            WitnessOutcome::Found(w) => Some(w),
            WitnessOutcome::Exhausted => None,
        }
    }
}

fn probe(beta: &BetaMap, s: &SymplecticSpace) -> Option<ObstructionWitness> {
    let p = beta.modulus();
    let r1 = beta.r1();
    for i in 0..r1 {
        for j in i + 1..r1 {
            let mut coords = vec![0; wedge_dim(r1)];
            coords[pair_index(r1, i, j)] = 1;
            if !beta.kills_coords(&coords) {
                continue;
            }
            let mut xi = FpMatrix::zeros(p, r1, s.dim());
            xi.set(i, 0, 1);
            xi.set(j, 1, 1);
            return Some(ObstructionWitness {
                b: DualWedge::basis(p, r1, i, j),
                xi,
                value: 1,
                method: WitnessMethod::CoordinateProbe,
            });
        }
    }
    None
}

/// Finds `b` and `ξ ∈ E_v` with `W_∧(b, ξ) ≠ 0`. Since `W_∧(b, 0) = 0`, this
/// certifies that `W_∧(b, ·)` is not constant on `E_v`.
///
/// Returns `Exhausted` only after a complete scan, in which case `E_v = C_v`.
pub fn find_obstruction_witness(
    beta: &BetaMap,
    s: &SymplecticSpace,
    budget: Budget,
    partitions: usize,
) -> Result<WitnessOutcome> {
    if beta.modulus() != s.modulus() {
        return Err(Error::ModulusMismatch(
            beta.modulus().as_u64(),
            s.modulus().as_u64(),
        ));
    }
    if let Some(w) = probe(beta, s) {
        return Ok(WitnessOutcome::Found(w));
    }
    let p = beta.modulus();
    let (r1, r) = (beta.r1(), s.dim());
    let total = space_size(p, r1 * r, budget, "witness scan")?;
    let firsts = map_partitions(total, partitions, |range| {
        let mut coords = Vec::new();
        let mut first = None;
        for_each_in_range(p, r1 * r, range, |idx, m| {
            if first.is_some() {
                return;
            }
            pullback_coords_into(p, r1, r, m, &mut coords);
            if coords.iter().any(|&c| c != 0) && beta.kills_coords(&coords) {
                first = Some(idx);
            }
        });
        first
    });
    let Some(idx) = firsts.into_iter().flatten().next() else {
        return Ok(WitnessOutcome::Exhausted);
    };
    let xi = matrix_at(p, r1, r, idx);
    let mut coords = Vec::new();
    pullback_coords_into(p, r1, r, xi.entries(), &mut coords);
    let k = coords.iter().position(|&c| c != 0).expect("pullback is nonzero");
    let b = DualWedge::basis_at(p, r1, k);
    let value = w_pairing(&b, &xi, s)?;
    Ok(WitnessOutcome::Found(ObstructionWitness {
        b,
        xi,
        value,
        method: WitnessMethod::FullScan,
    }))
}

/// `f` vanishes on every element of a precomputed `Bic`.
pub fn vanishes_on(f: &DualWedge, bic: &BTreeSet<Wedge2>) -> Result<bool> {
    for w in bic {
        if f.eval(w)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The class attached to `f` is unramified iff `f` kills `Bic(G, A)`.
pub fn unramified_check(f: &DualWedge, beta: &BetaMap, budget: Budget, partitions: usize) -> Result<bool> {
    if f.r1() != beta.r1() {
        return Err(Error::DimensionMismatch {
            op: "unramified_check",
            expected: beta.r1(),
            found: f.r1(),
        });
    }
    vanishes_on(f, &bic_of_beta(beta, budget, partitions)?)
}
