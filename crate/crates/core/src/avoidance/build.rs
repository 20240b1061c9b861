use serde::{Deserialize, Serialize};

use super::projective::{grassmannian_count, plucker_image, projective_count};
use super::search::{avoiding_subspace, meets, SearchOptions, SearchStrategy};
use crate::error::{Error, Result};
use crate::extension::BetaMap;
use crate::fpcore::enumerate::space_size;
use crate::fpcore::{wedge_dim, Budget, FpMatrix, PrimeModulus, Subspace, Wedge2};

/// A `β` built from an avoiding subspace, together with the data that
/// justifies it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltBeta {
    pub beta: BetaMap,
    /// `Ker β`, equal to the cone over the avoiding subspace.
    pub kernel: Subspace,
    /// `#X(F_p)` for the Plücker image of `Gr(2, A)`.
    pub grassmannian_points: u128,
    /// `#P^{r2}(F_p)`.
    pub projective_bound: u128,
    pub strategy: SearchStrategy,
    pub search_steps: u64,
}

/// Summary of the counting inequality `#X(F_p) < #P^{2 r1 - 3}(F_p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingInequality {
    pub grassmannian_points: u128,
    pub projective_points: u128,
}

impl CountingInequality {
    pub fn holds(&self) -> bool {
        self.grassmannian_points < self.projective_points
    }
}

pub fn counting_inequality(p: PrimeModulus, r1: usize) -> Result<CountingInequality> {
    if r1 < 4 {
        return Err(Error::Precondition(format!(
            "the construction needs r1 >= 4, got {r1}"
        )));
    }
    Ok(CountingInequality {
        grassmannian_points: grassmannian_count(p, r1)?,
        projective_points: projective_count(p, 2 * r1 - 3)?,
    })
}

/// The surjection `F_p^m -> F_p^{m - dim L}` with kernel `L`: subtract the
/// pivot combination of `L`, then read the non-pivot coordinates.
pub fn quotient_map(l: &Subspace) -> FpMatrix {
    let p = l.modulus();
    let m = l.ambient_dim();
    let free: Vec<usize> = (0..m).filter(|c| !l.pivots().contains(c)).collect();
    let mut out = FpMatrix::zeros(p, free.len(), m);
    for (k, &c) in free.iter().enumerate() {
        out.set(k, c, 1);
        for (i, &pc) in l.pivots().iter().enumerate() {
            out.set(k, pc, p.neg(l.basis().get(i, c)));
        }
    }
    out
}

/// Builds a surjective `β: Λ²(F_p^{r1}) -> F_p^{2 r1 - 3}` whose kernel meets
/// the cone over `Gr(2, r1)` only in zero.
pub fn build_beta(p: PrimeModulus, r1: usize, budget: Budget, search: SearchOptions) -> Result<BuiltBeta> {
    let ineq = counting_inequality(p, r1)?;
    if !ineq.holds() {
        return Err(Error::Precondition(format!(
            "#X(F_p) = {} is not below #P^{}(F_p) = {}",
            ineq.grassmannian_points,
            2 * r1 - 3,
            ineq.projective_points
        )));
    }
    let m = wedge_dim(r1);
    let r2 = 2 * r1 - 3;
    let x = plucker_image(p, r1, budget)?;
    debug_assert_eq!(x.len() as u128, ineq.grassmannian_points);
    let found = avoiding_subspace(p, &x, m - 1, r2, search)?;
    debug_assert!(!meets(&found.subspace, &x));
    let beta = BetaMap::new(r1, quotient_map(&found.subspace))?;
    debug_assert_eq!(beta.r2(), r2);
    Ok(BuiltBeta {
        kernel: beta.kernel(),
        beta,
        grassmannian_points: ineq.grassmannian_points,
        projective_bound: ineq.projective_points,
        strategy: found.strategy,
        search_steps: found.steps,
    })
}

/// Checks `Ker β ∩ {pure wedges} = {0}` by visiting every nonzero kernel
/// element and testing its antisymmetric rank.
pub fn kernel_avoids_pure_wedges(beta: &BetaMap, budget: Budget) -> Result<bool> {
    let kernel = beta.kernel();
    let p = beta.modulus();
    space_size(p, kernel.dim(), budget, "kernel scan")?;
    for v in kernel.vectors() {
        let w = Wedge2::from_coords(p, beta.r1(), v)?;
        if !w.is_zero() && w.is_decomposable() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First echelon basis vector of `Ker β` as a wedge, if the kernel is nonzero.
pub fn kernel_generator(beta: &BetaMap) -> Option<Wedge2> {
    let k = beta.kernel();
    (k.dim() > 0).then(|| {
        Wedge2::from_coords(beta.modulus(), beta.r1(), k.basis().row(0).to_vec())
            .expect("kernel vectors have wedge length")
    })
}
