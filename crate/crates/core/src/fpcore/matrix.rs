use std::fmt;

use serde::{Deserialize, Serialize};

use super::prime::PrimeModulus;
use crate::error::{Error, Result};

/// Dense row-major matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FpMatrix {
    p: PrimeModulus,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`FpMatrix::rref_rank_kernel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction {
    pub rref: FpMatrix,
    pub rank: usize,
    /// Pivot column of each nonzero row of `rref`.
    pub pivots: Vec<usize>,
    /// Rows span `{x : m x = 0}`.
    pub kernel: FpMatrix,
}

impl FpMatrix {
    pub fn zeros(p: PrimeModulus, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: PrimeModulus, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major entries, reducing each mod `p`.
    pub fn from_vec(p: PrimeModulus, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "FpMatrix::from_vec",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(FpMatrix {
            p,
            rows,
            cols,
            data: data.into_iter().map(|x| p.reduce(x)).collect(),
        })
    }

    /// Builds from already-reduced residues.
    pub(crate) fn from_residues(p: PrimeModulus, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| x < p.value()));
        FpMatrix {
            p,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows<R: AsRef<[i64]>>(p: PrimeModulus, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    op: "FpMatrix::from_rows",
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| p.reduce_signed(x)));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose rows are the given residue vectors.
    pub fn from_row_vectors(p: PrimeModulus, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    op: "FpMatrix::from_row_vectors",
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| x % p.value()));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p.value();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    fn check_modulus(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.as_u64(), other.p.as_u64()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_modulus(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "FpMatrix::mul",
                expected: self.cols,
                found: other.rows,
            });
        }
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += self.get(i, k) as u64 * other.get(k, j) as u64;
                }
                out.data[i * other.cols + j] = p.reduce(acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_modulus(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                op: "FpMatrix::add",
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let p = self.p;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| p.add(a, b))
            .collect();
        Ok(Self::from_residues(p, self.rows, self.cols, data))
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p;
        let c = c % p.value();
        Self::from_residues(
            p,
            self.rows,
            self.cols,
            self.data.iter().map(|&a| p.mul(a, c)).collect(),
        )
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "FpMatrix::apply",
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let acc: u64 = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                self.p.reduce(acc)
            })
            .collect())
    }

    /// Reduced row-echelon form, rank and a kernel basis.
    ///
    /// The rref is the unique reduced form; the kernel basis is the standard
    /// one indexed by free columns (free variable set to 1, the others to 0).
    pub fn rref_rank_kernel(&self) -> RowReduction {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = p.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = p.mul(m.get(r, j), inv);
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = p.sub(m.get(i, j), p.mul(f, m.get(r, j)));
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = r;
        let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
        let mut kernel = Self::zeros(p, free.len(), m.cols);
        for (k, &fc) in free.iter().enumerate() {
            kernel.data[k * m.cols + fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                kernel.data[k * m.cols + pc] = p.neg(m.get(i, fc));
            }
        }
        RowReduction {
            rref: m,
            rank,
            pivots,
            kernel,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref_rank_kernel().rank
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}, {}x{}) ", self.p, self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> PrimeModulus {
        PrimeModulus::new(3).unwrap()
    }

    #[test]
    fn small_product_mod_three() {
        let a = FpMatrix::from_rows(p3(), &[[1, 2], [0, 1]]).unwrap();
        let b = FpMatrix::from_rows(p3(), &[[1, 0], [1, 1]]).unwrap();
        let want = FpMatrix::from_rows(p3(), &[[0, 2], [1, 1]]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), want);
    }

    #[test]
    fn identity_and_zero_products() {
        let m = FpMatrix::from_rows(p3(), &[[1, 2, 0], [2, 2, 1]]).unwrap();
        assert_eq!(FpMatrix::identity(p3(), 2).mul(&m).unwrap(), m);
        assert!(FpMatrix::zeros(p3(), 4, 2).mul(&m).unwrap().is_zero());
    }

    #[test]
    fn mul_errors() {
        let a = FpMatrix::zeros(p3(), 2, 3);
        assert!(matches!(
            a.mul(&a),
            Err(Error::DimensionMismatch { .. })
        ));
        let b = FpMatrix::zeros(PrimeModulus::new(5).unwrap(), 3, 1);
        assert_eq!(a.mul(&b), Err(Error::ModulusMismatch(3, 5)));
    }

    #[test]
    fn rank_kernel_basic_cases() {
        let z = FpMatrix::zeros(p3(), 2, 3).rref_rank_kernel();
        assert_eq!(z.rank, 0);
        assert_eq!(z.kernel.rows(), 3);

        let id = FpMatrix::identity(p3(), 4).rref_rank_kernel();
        assert_eq!(id.rank, 4);
        assert_eq!(id.kernel.rows(), 0);

        let m = FpMatrix::from_rows(p3(), &[[1, 1, 1], [2, 2, 2]]).unwrap();
        let rr = m.rref_rank_kernel();
        assert_eq!(rr.rank, 1);
        assert_eq!(rr.kernel.rows(), 2);
        for k in 0..rr.kernel.rows() {
            assert!(m.apply(rr.kernel.row(k)).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn exhaustive_two_by_three_rank_nullity() {
        let p = p3();
        for idx in 0..3u64.pow(6) {
            let mut x = idx;
            let data: Vec<u64> = (0..6)
                .map(|_| {
                    let d = x % 3;
                    x /= 3;
                    d
                })
                .collect();
            let m = FpMatrix::from_vec(p, 2, 3, data).unwrap();
            let rr = m.rref_rank_kernel();
            assert_eq!(rr.rank + rr.kernel.rows(), 3);
            assert_eq!(rr.kernel.rank(), rr.kernel.rows());
            let prod = m.mul(&rr.kernel.transpose()).unwrap();
            assert!(prod.is_zero(), "{m:?}");
        }
    }
}
