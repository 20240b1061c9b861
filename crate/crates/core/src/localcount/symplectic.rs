use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::BetaMap;
use crate::fpcore::{pair_index, wedge_dim, FpMatrix, PrimeModulus, Wedge2};

/// `F_p^r` with the standard alternating form
/// `J = diag([[0, 1], [-1, 0]], ...)` and `ω = Σ e_{2i} ∧ e_{2i+1}`.
///
/// Stands in for `Γ^ab / p` of a local field together with the local duality
/// pairing, which is perfect and alternating.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpace {
    p: PrimeModulus,
    r: usize,
}

impl SymplecticSpace {
    pub fn standard(p: PrimeModulus, r: usize) -> Result<Self> {
        if r == 0 || !r.is_multiple_of(2) {
            return Err(Error::Precondition(format!(
                "symplectic dimension must be even and positive, got {r}"
            )));
        }
        Ok(SymplecticSpace { p, r })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn gram(&self) -> FpMatrix {
        let mut j = FpMatrix::zeros(self.p, self.r, self.r);
        for i in 0..self.r / 2 {
            j.set(2 * i, 2 * i + 1, 1);
            j.set(2 * i + 1, 2 * i, self.p.value() - 1);
        }
        j
    }

    pub fn omega(&self) -> Wedge2 {
        let mut coords = vec![0; wedge_dim(self.r)];
        for i in 0..self.r / 2 {
            coords[pair_index(self.r, 2 * i, 2 * i + 1)] = 1;
        }
        Wedge2::from_coords(self.p, self.r, coords).expect("length matches")
    }
}

/// Coordinates of `M J Mᵀ` for a row-major `r1 × r` matrix, written into `out`.
#[inline]
pub(crate) fn pullback_coords_into(p: PrimeModulus, r1: usize, r: usize, m: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let q = p.as_u64();
    for i in 0..r1 {
        let mi = &m[i * r..(i + 1) * r];
        for j in i + 1..r1 {
            let mj = &m[j * r..(j + 1) * r];
            let mut pos = 0u64;
            let mut neg = 0u64;
            for k in (0..r).step_by(2) {
                pos += mi[k] as u64 * mj[k + 1] as u64;
                neg += mi[k + 1] as u64 * mj[k] as u64;
            }
            out.push(((pos % q + q - neg % q) % q) as u32);
        }
    }
}

/// `(Λ²ξ)(ω)`: the wedge whose antisymmetric matrix is `M J Mᵀ`.
pub fn pullback_wedge(m: &FpMatrix, s: &SymplecticSpace) -> Result<Wedge2> {
    if m.cols() != s.dim() {
        return Err(Error::DimensionMismatch {
            op: "pullback_wedge",
            expected: s.dim(),
            found: m.cols(),
        });
    }
    if m.modulus() != s.modulus() {
        return Err(Error::ModulusMismatch(
            m.modulus().as_u64(),
            s.modulus().as_u64(),
        ));
    }
    let mut coords = Vec::with_capacity(wedge_dim(m.rows()));
    pullback_coords_into(s.modulus(), m.rows(), s.dim(), m.entries(), &mut coords);
    Wedge2::from_coords(s.modulus(), m.rows(), coords)
}

/// A linear functional on `Λ²(F_p^{r1})`, i.e. an element of `Λ²A^D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualWedge {
    p: PrimeModulus,
    r1: usize,
    coeffs: Vec<u32>,
}

impl DualWedge {
    pub fn new(p: PrimeModulus, r1: usize, coeffs: Vec<u32>) -> Result<Self> {
        if coeffs.len() != wedge_dim(r1) {
            return Err(Error::DimensionMismatch {
                op: "DualWedge::new",
                expected: wedge_dim(r1),
                found: coeffs.len(),
            });
        }
        Ok(DualWedge {
            p,
            r1,
            coeffs: coeffs.into_iter().map(|c| c % p.value()).collect(),
        })
    }

    pub fn zero(p: PrimeModulus, r1: usize) -> Self {
        DualWedge {
            p,
            r1,
            coeffs: vec![0; wedge_dim(r1)],
        }
    }

    /// The coordinate functional dual to `e_i ∧ e_j`.
    pub fn basis(p: PrimeModulus, r1: usize, i: usize, j: usize) -> Self {
        let mut f = Self::zero(p, r1);
        f.coeffs[pair_index(r1, i, j)] = 1;
        f
    }

    pub fn basis_at(p: PrimeModulus, r1: usize, index: usize) -> Self {
        let mut f = Self::zero(p, r1);
        f.coeffs[index] = 1;
        f
    }

    /// All coordinate functionals, in wedge-coordinate order.
    pub fn dual_basis(p: PrimeModulus, r1: usize) -> Vec<Self> {
        (0..wedge_dim(r1)).map(|k| Self::basis_at(p, r1, k)).collect()
    }

    /// Row `k` of `β` as a functional.
    pub fn from_beta_row(beta: &BetaMap, k: usize) -> Self {
        DualWedge {
            p: beta.modulus(),
            r1: beta.r1(),
            coeffs: beta.matrix().row(k).to_vec(),
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn r1(&self) -> usize {
        self.r1
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.r1 != other.r1 || self.p != other.p {
            return Err(Error::DimensionMismatch {
                op: "DualWedge::add",
                expected: self.r1,
                found: other.r1,
            });
        }
        let p = self.p;
        Ok(DualWedge {
            p,
            r1: self.r1,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| p.add(a, b))
                .collect(),
        })
    }

    #[inline]
    pub(crate) fn eval_coords(&self, coords: &[u32]) -> u32 {
        let acc: u64 = self
            .coeffs
            .iter()
            .zip(coords)
            .map(|(&a, &b)| a as u64 * b as u64)
            .sum();
        self.p.reduce(acc)
    }

    pub fn eval(&self, w: &Wedge2) -> Result<u32> {
        if w.ambient_dim() != self.r1 {
            return Err(Error::DimensionMismatch {
                op: "DualWedge::eval",
                expected: self.r1,
                found: w.ambient_dim(),
            });
        }
        Ok(self.eval_coords(w.coords()))
    }
}

/// `W_∧(f, ξ) = f((Λ²ξ)(ω))`, a value in `Z/p ≅ (1/p)Z/Z`.
pub fn w_pairing(f: &DualWedge, m: &FpMatrix, s: &SymplecticSpace) -> Result<u32> {
    if m.rows() != f.r1() {
        return Err(Error::DimensionMismatch {
            op: "w_pairing",
            expected: f.r1(),
            found: m.rows(),
        });
    }
    f.eval(&pullback_wedge(m, s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::{enumerate::all_vectors, wedge};

    fn p3() -> PrimeModulus {
        PrimeModulus::new(3).unwrap()
    }

    #[test]
    fn gram_and_omega_agree() {
        for r in [2, 4, 6] {
            let s = SymplecticSpace::standard(p3(), r).unwrap();
            let j = s.gram();
            assert_eq!(j.rank(), r);
            assert_eq!(Wedge2::from_antisymmetric(&j).unwrap(), s.omega());
        }
        assert!(SymplecticSpace::standard(p3(), 3).is_err());
        assert!(SymplecticSpace::standard(p3(), 0).is_err());
    }

    #[test]
    fn pullback_matches_matrix_product() {
        // independent route: M·J·Mᵀ via generic matrix multiplication
        let p = PrimeModulus::new(5).unwrap();
        let s = SymplecticSpace::standard(p, 4).unwrap();
        let mut seed = 17u64;
        for _ in 0..200 {
            let data: Vec<u64> = (0..12)
                .map(|_| {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    (seed >> 33) % 5
                })
                .collect();
            let m = FpMatrix::from_vec(p, 3, 4, data).unwrap();
            let mjm = m.mul(&s.gram()).unwrap().mul(&m.transpose()).unwrap();
            assert_eq!(pullback_wedge(&m, &s).unwrap().to_antisymmetric(), mjm);
            // blockwise sum of column wedges
            let mut sum = Wedge2::zero(p, 3);
            for k in 0..2 {
                let w = wedge(p, &m.column(2 * k), &m.column(2 * k + 1)).unwrap();
                sum = sum.add(&w).unwrap();
            }
            assert_eq!(pullback_wedge(&m, &s).unwrap(), sum);
        }
    }

    #[test]
    fn pullback_examples() {
        let p = p3();
        let s = SymplecticSpace::standard(p, 4).unwrap();
        assert!(pullback_wedge(&FpMatrix::zeros(p, 3, 4), &s).unwrap().is_zero());
        assert_eq!(pullback_wedge(&FpMatrix::identity(p, 4), &s).unwrap(), s.omega());
        // rank one: every column a multiple of u
        for u in all_vectors(p, 3).take(10) {
            let mut m = FpMatrix::zeros(p, 3, 4);
            for (c, k) in [1u32, 2, 0, 1].iter().enumerate() {
                for (i, &x) in u.iter().enumerate() {
                    m.set(i, c, p.mul(x, *k));
                }
            }
            assert!(pullback_wedge(&m, &s).unwrap().is_zero());
        }
        assert!(pullback_wedge(&FpMatrix::zeros(p, 3, 2), &s).is_err());
    }

    #[test]
    fn pairing_examples() {
        let p = p3();
        let s = SymplecticSpace::standard(p, 2).unwrap();
        let f = DualWedge::basis(p, 3, 0, 2);
        let xi = FpMatrix::from_rows(p, &[[1, 0], [0, 0], [0, 1]]).unwrap();
        assert_eq!(w_pairing(&f, &xi, &s).unwrap(), 1);
        assert_eq!(w_pairing(&f, &FpMatrix::zeros(p, 3, 2), &s).unwrap(), 0);
        let g = DualWedge::new(p, 3, vec![2, 1, 1]).unwrap();
        let fg = f.add(&g).unwrap();
        assert_eq!(
            w_pairing(&fg, &xi, &s).unwrap(),
            p.add(w_pairing(&f, &xi, &s).unwrap(), w_pairing(&g, &xi, &s).unwrap())
        );
        assert!(w_pairing(&f, &FpMatrix::zeros(p, 2, 2), &s).is_err());
    }
}
