use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpcore::{wedge, wedge_dim, Budget, PrimeModulus, SubspaceEnumeration};

/// A point of `P^N(F_p)`, normalized so its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    coords: Vec<u32>,
}

impl ProjPoint {
    pub fn new(p: PrimeModulus, coords: &[u32]) -> Result<Self> {
        let coords: Vec<u32> = coords.iter().map(|&x| x % p.value()).collect();
        let lead = coords
            .iter()
            .find(|&&x| x != 0)
            .copied()
            .ok_or_else(|| Error::Precondition("the zero vector is not a projective point".into()))?;
        let inv = p.inv(lead).expect("nonzero");
        Ok(ProjPoint {
            coords: coords.into_iter().map(|x| p.mul(x, inv)).collect(),
        })
    }

    /// Normalizes `v` in place; returns false for the zero vector.
    pub(crate) fn normalize_in_place(p: PrimeModulus, v: &mut [u32]) -> bool {
        let Some(&lead) = v.iter().find(|&&x| x != 0) else {
            return false;
        };
        if lead != 1 {
            let inv = p.inv(lead).expect("nonzero");
            for x in v.iter_mut() {
                *x = p.mul(*x, inv);
            }
        }
        true
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    /// `N` for a point of `P^N`.
    pub fn projective_dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// `#P^n(F_p) = (p^{n+1} - 1) / (p - 1)`.
pub fn projective_count(p: PrimeModulus, n: usize) -> Result<u128> {
    let q = p.value() as u128;
    let top = q
        .checked_pow(n as u32 + 1)
        .ok_or(Error::Overflow("projective point count"))?;
    Ok((top - 1) / (q - 1))
}

/// The `k`-th point of `P^N(F_p)` in lexicographic order of normalized
/// coordinates, for `k < #P^N(F_p)`.
pub(crate) fn projective_point_at(p: PrimeModulus, big_n: usize, mut k: u64) -> Vec<u32> {
    let q = p.as_u64();
    let mut v = vec![0u32; big_n + 1];
    // leading position N comes first, then N-1, ...
    for lead in (0..=big_n).rev() {
        let block = q.pow((big_n - lead) as u32);
        if k < block {
            v[lead] = 1;
            for pos in (lead + 1..=big_n).rev() {
                v[pos] = (k % q) as u32;
                k /= q;
            }
            return v;
        }
        k -= block;
    }
    unreachable!("index beyond the projective space")
}

/// `#X(F_p)` for the Plücker image of `Gr(2, a)`:
/// `(p^a - 1)(p^{a-1} - 1) / ((p^2 - 1)(p - 1))`.
pub fn grassmannian_count(p: PrimeModulus, a: usize) -> Result<u128> {
    if a < 2 {
        return Err(Error::Precondition(format!(
            "Gr(2, {a}) needs a >= 2"
        )));
    }
    let q = p.value() as u128;
    let pw = |k: usize| {
        q.checked_pow(k as u32)
            .ok_or(Error::Overflow("grassmannian count"))
    };
    let num = (pw(a)? - 1)
        .checked_mul(pw(a - 1)? - 1)
        .ok_or(Error::Overflow("grassmannian count"))?;
    let den = (q * q - 1) * (q - 1);
    if num % den != 0 {
        return Err(Error::InexactDivision("grassmannian count"));
    }
    Ok(num / den)
}

/// `{[u ∧ v] : u, v independent}` inside `P(Λ²(F_p^{r1}))`.
///
/// Each 2-dimensional subspace contributes the wedge of its echelon basis.
pub fn plucker_image(p: PrimeModulus, r1: usize, budget: Budget) -> Result<BTreeSet<ProjPoint>> {
    if r1 < 2 {
        return Err(Error::Precondition(format!(
            "Plücker image of Gr(2, {r1}) needs r1 >= 2"
        )));
    }
    let planes = SubspaceEnumeration::new(p, r1, 2, budget)?;
    let mut out = BTreeSet::new();
    for s in planes.iter() {
        let w = wedge(p, s.basis().row(0), s.basis().row(1))?;
        debug_assert_eq!(w.coords().len(), wedge_dim(r1));
        out.insert(ProjPoint::new(p, w.coords())?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::enumerate::all_vectors;
    use crate::fpcore::Wedge2;

    #[test]
    fn normalization() {
        let p = PrimeModulus::new(5).unwrap();
        let a = ProjPoint::new(p, &[0, 3, 1]).unwrap();
        assert_eq!(a.coords(), &[0, 1, 2]);
        assert_eq!(ProjPoint::new(p, &[0, 1, 2]).unwrap(), a);
        assert!(ProjPoint::new(p, &[0, 0, 0]).is_err());
    }

    #[test]
    fn counts() {
        let p3 = PrimeModulus::new(3).unwrap();
        let p5 = PrimeModulus::new(5).unwrap();
        assert_eq!(grassmannian_count(p3, 2).unwrap(), 1);
        assert_eq!(grassmannian_count(p3, 4).unwrap(), 130);
        assert_eq!(grassmannian_count(p5, 4).unwrap(), 806);
        assert!(grassmannian_count(p3, 1).is_err());
        assert_eq!(projective_count(p3, 5).unwrap(), 364);
        assert_eq!(projective_count(p3, 0).unwrap(), 1);
    }

    #[test]
    fn projective_points_in_lex_order() {
        let p = PrimeModulus::new(3).unwrap();
        let total = projective_count(p, 3).unwrap() as u64;
        let pts: Vec<_> = (0..total).map(|k| projective_point_at(p, 3, k)).collect();
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(pts, sorted);
        assert_eq!(pts[0], vec![0, 0, 0, 1]);
        for v in &pts {
            assert_eq!(ProjPoint::new(p, v).unwrap().coords(), v.as_slice());
        }
    }

    #[test]
    fn plucker_image_small() {
        let p = PrimeModulus::new(3).unwrap();
        assert_eq!(plucker_image(p, 2, Budget::default()).unwrap().len(), 1);
        let img = plucker_image(p, 4, Budget::default()).unwrap();
        assert_eq!(img.len(), 130);
        for pt in &img {
            let w = Wedge2::from_coords(p, 4, pt.coords().to_vec()).unwrap();
            assert!(w.is_decomposable());
        }
    }

    #[test]
    fn plucker_image_matches_pair_enumeration() {
        // independent route: wedge every pair of vectors
        let p = PrimeModulus::new(3).unwrap();
        let vs: Vec<_> = all_vectors(p, 4).collect();
        let mut pairs = BTreeSet::new();
        for u in &vs {
            for v in &vs {
                let w = wedge(p, u, v).unwrap();
                if !w.is_zero() {
                    pairs.insert(ProjPoint::new(p, w.coords()).unwrap());
                }
            }
        }
        assert_eq!(pairs, plucker_image(p, 4, Budget::default()).unwrap());
    }
}
