//! Second exterior power `Λ²(F_p^n)`.
//!
//! Coordinates are indexed by pairs `(i, j)` with `i < j` in lexicographic
//! order `(0,1), (0,2), ..., (n-2, n-1)`; the same order is used by every
//! linear map or functional on `Λ²` in this crate.

use serde::{Deserialize, Serialize};

use super::matrix::FpMatrix;
use super::prime::PrimeModulus;
use crate::error::{Error, Result};

/// `n (n - 1) / 2`.
#[inline]
pub const fn wedge_dim(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the basis element `e_i ∧ e_j` (`i < j`).
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Basis pairs in coordinate order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Wedge2 {
    p: PrimeModulus,
    n: usize,
    coords: Vec<u32>,
}

impl Wedge2 {
    pub fn zero(p: PrimeModulus, n: usize) -> Self {
        Wedge2 {
            p,
            n,
            coords: vec![0; wedge_dim(n)],
        }
    }

    pub fn basis(p: PrimeModulus, n: usize, i: usize, j: usize) -> Self {
        let mut w = Self::zero(p, n);
        w.coords[pair_index(n, i, j)] = 1;
        w
    }

    pub fn from_coords(p: PrimeModulus, n: usize, coords: Vec<u32>) -> Result<Self> {
        if coords.len() != wedge_dim(n) {
            return Err(Error::DimensionMismatch {
                op: "Wedge2::from_coords",
                expected: wedge_dim(n),
                found: coords.len(),
            });
        }
        Ok(Wedge2 {
            p,
            n,
            coords: coords.into_iter().map(|c| c % p.value()).collect(),
        })
    }

    /// Reads the strictly upper triangle of an antisymmetric matrix.
    pub fn from_antisymmetric(m: &FpMatrix) -> Result<Self> {
        let n = m.rows();
        if m.cols() != n {
            return Err(Error::DimensionMismatch {
                op: "Wedge2::from_antisymmetric",
                expected: n,
                found: m.cols(),
            });
        }
        let p = m.modulus();
        for i in 0..n {
            if m.get(i, i) != 0 {
                return Err(Error::Precondition(format!(
                    "diagonal entry ({i},{i}) of an antisymmetric matrix is nonzero"
                )));
            }
            for j in i + 1..n {
                if m.get(j, i) != p.neg(m.get(i, j)) {
                    return Err(Error::Precondition(format!(
                        "entries ({i},{j}) and ({j},{i}) are not opposite"
                    )));
                }
            }
        }
        Ok(Wedge2 {
            p,
            n,
            coords: pairs(n).map(|(i, j)| m.get(i, j)).collect(),
        })
    }

    pub fn to_antisymmetric(&self) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.p, self.n, self.n);
        for ((i, j), &c) in pairs(self.n).zip(&self.coords) {
            m.set(i, j, c);
            m.set(j, i, self.p.neg(c));
        }
        m
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn coord(&self, i: usize, j: usize) -> u32 {
        self.coords[pair_index(self.n, i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.as_u64(), other.p.as_u64()));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                op: "Wedge2",
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let p = self.p;
        Ok(Wedge2 {
            p,
            n: self.n,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| p.add(a, b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        Wedge2 {
            p,
            n: self.n,
            coords: self.coords.iter().map(|&a| p.neg(a)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p;
        Wedge2 {
            p,
            n: self.n,
            coords: self.coords.iter().map(|&a| p.mul(a, c % p.value())).collect(),
        }
    }

    /// Rank of the antisymmetric matrix (always even).
    pub fn rank(&self) -> usize {
        self.to_antisymmetric().rank()
    }

    /// Whether `self = u ∧ v` for some vectors `u, v`.
    pub fn is_decomposable(&self) -> bool {
        self.rank() <= 2
    }
}

/// `u ∧ v`, with coordinate `(i, j)` equal to `u_i v_j - u_j v_i`.
pub fn wedge(p: PrimeModulus, u: &[u32], v: &[u32]) -> Result<Wedge2> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            op: "wedge",
            expected: u.len(),
            found: v.len(),
        });
    }
    let n = u.len();
    let mut coords = Vec::with_capacity(wedge_dim(n));
    wedge_into(p, u, v, &mut coords);
    Ok(Wedge2 { p, n, coords })
}

/// Writes the coordinates of `u ∧ v` into `out` (cleared first).
#[inline]
pub(crate) fn wedge_into(p: PrimeModulus, u: &[u32], v: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let n = u.len();
    for i in 0..n {
        for j in i + 1..n {
            out.push(p.sub(p.mul(u[i], v[j]), p.mul(u[j], v[i])));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> PrimeModulus {
        PrimeModulus::new(3).unwrap()
    }

    fn vectors(p: u32, n: usize) -> impl Iterator<Item = Vec<u32>> {
        (0..p.pow(n as u32)).map(move |mut x| {
            (0..n)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        })
    }

    #[test]
    fn pair_index_is_lexicographic() {
        for n in 0..7 {
            for (k, (i, j)) in pairs(n).enumerate() {
                assert_eq!(pair_index(n, i, j), k);
            }
            assert_eq!(pairs(n).count(), wedge_dim(n));
        }
    }

    #[test]
    fn basis_wedges() {
        let p = p3();
        let e1 = [1, 0, 0];
        let e2 = [0, 1, 0];
        assert_eq!(wedge(p, &e1, &e2).unwrap(), Wedge2::basis(p, 3, 0, 1));
        assert!(wedge(p, &e1, &[0, 1]).is_err());
    }

    #[test]
    fn alternating_exhaustive_small() {
        let p = p3();
        for n in 1..=3 {
            for u in vectors(3, n) {
                assert!(wedge(p, &u, &u).unwrap().is_zero());
                for v in vectors(3, n) {
                    let a = wedge(p, &u, &v).unwrap();
                    let b = wedge(p, &v, &u).unwrap();
                    assert!(a.add(&b).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn antisymmetric_round_trip() {
        let p = PrimeModulus::new(5).unwrap();
        let w = Wedge2::from_coords(p, 4, vec![1, 2, 3, 4, 0, 1]).unwrap();
        let m = w.to_antisymmetric();
        assert_eq!(Wedge2::from_antisymmetric(&m).unwrap(), w);
        assert_eq!(m.transpose(), m.scale(4));
        let mut bad = m.clone();
        bad.set(1, 0, 1);
        assert!(Wedge2::from_antisymmetric(&bad).is_err());
    }

    #[test]
    fn decomposability_examples() {
        let p = p3();
        assert!(Wedge2::zero(p, 4).is_decomposable());
        assert!(Wedge2::basis(p, 4, 0, 1).is_decomposable());
        let sum = Wedge2::basis(p, 4, 0, 1)
            .add(&Wedge2::basis(p, 4, 2, 3))
            .unwrap();
        assert_eq!(sum.rank(), 4);
        assert!(!sum.is_decomposable());
    }

    #[test]
    fn decomposable_iff_pure_brute_force() {
        let p = p3();
        for n in 2..=4 {
            let mut pure = std::collections::HashSet::new();
            for u in vectors(3, n) {
                for v in vectors(3, n) {
                    pure.insert(wedge(p, &u, &v).unwrap());
                }
            }
            for c in vectors(3, wedge_dim(n)) {
                let w = Wedge2::from_coords(p, n, c).unwrap();
                assert_eq!(w.is_decomposable(), pure.contains(&w), "{w:?}");
            }
        }
    }
}
