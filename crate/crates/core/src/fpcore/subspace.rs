use std::ops::Range;

use super::enumerate::{Budget, Odometer};
use super::matrix::FpMatrix;
use super::prime::PrimeModulus;
use crate::error::{Error, Result};

/// A linear subspace of `F_p^n`, stored by its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: PrimeModulus, n: usize) -> Self {
        Subspace {
            basis: FpMatrix::zeros(p, 0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: PrimeModulus, n: usize) -> Self {
        Subspace {
            basis: FpMatrix::identity(p, n),
            pivots: (0..n).collect(),
        }
    }

    /// Row span of `m`.
    pub fn span_of(m: &FpMatrix) -> Self {
        let rr = m.rref_rank_kernel();
        let rows: Vec<Vec<u32>> = (0..rr.rank).map(|i| rr.rref.row(i).to_vec()).collect();
        Subspace {
            basis: FpMatrix::from_residues(
                m.modulus(),
                rr.rank,
                m.cols(),
                rows.concat(),
            ),
            pivots: rr.pivots,
        }
    }

    pub fn span_of_vectors(p: PrimeModulus, n: usize, vs: &[Vec<u32>]) -> Result<Self> {
        Ok(Self::span_of(&FpMatrix::from_row_vectors(p, n, vs)?))
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.basis.modulus()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim()
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the echelon basis; zero iff `v` is in the span.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.modulus();
        let mut v = v.to_vec();
        for (i, &c) in self.pivots.iter().enumerate() {
            let f = v[c];
            if f == 0 {
                continue;
            }
            for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                *x = p.sub(*x, p.mul(f, b));
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.ambient_dim() && self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Span of `self` and `v`.
    pub fn extended(&self, v: &[u32]) -> Self {
        let mut rows = self.basis.to_rows();
        rows.push(v.to_vec());
        Self::span_of(
            &FpMatrix::from_row_vectors(self.modulus(), self.ambient_dim(), &rows)
                .expect("matching lengths"),
        )
    }

    /// Every vector of the subspace, as combinations of the basis rows.
    pub fn vectors(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let p = self.modulus();
        let n = self.ambient_dim();
        let total = p.as_u64().pow(self.dim() as u32);
        let mut od = Odometer::at(p, self.dim(), 0);
        (0..total).map(move |_| {
            let mut v = vec![0u32; n];
            for (i, &c) in od.digits().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                    *x = p.add(*x, p.mul(c, b));
                }
            }
            od.step();
            v
        })
    }
}

/// Gaussian binomial `[n choose d]_p`, the number of `d`-dimensional
/// subspaces of `F_p^n`.
pub fn gaussian_binomial(p: PrimeModulus, n: usize, d: usize) -> Result<u128> {
    if d > n {
        return Ok(0);
    }
    let q = p.value() as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        let a = q
            .checked_pow((n - i) as u32)
            .ok_or(Error::Overflow("gaussian binomial"))?
            - 1;
        let b = q
            .checked_pow((i + 1) as u32)
            .ok_or(Error::Overflow("gaussian binomial"))?
            - 1;
        num = num.checked_mul(a).ok_or(Error::Overflow("gaussian binomial"))?;
        den = den.checked_mul(b).ok_or(Error::Overflow("gaussian binomial"))?;
    }
    if !num.is_multiple_of(den) {
        return Err(Error::InexactDivision("gaussian binomial"));
    }
    Ok(num / den)
}

#[derive(Clone, Debug)]
struct PivotBlock {
    pivots: Vec<usize>,
    /// `(row, col)` positions of the free entries.
    free: Vec<(usize, usize)>,
    start: u64,
    len: u64,
}

/// Canonical enumeration of all `d`-dimensional subspaces of `F_p^n`.
///
/// Subspaces are grouped by pivot set (lexicographic), and within a pivot
/// set the free echelon entries run through an odometer. Every index in
/// `0..len()` addresses one subspace, so any range can be produced on its own.
#[derive(Clone, Debug)]
pub struct SubspaceEnumeration {
    p: PrimeModulus,
    n: usize,
    d: usize,
    blocks: Vec<PivotBlock>,
    total: u64,
}

fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            if n - c < d - cur.len() {
                break;
            }
            cur.push(c);
            go(c + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, d, &mut Vec::new(), &mut out);
    out
}

impl SubspaceEnumeration {
    pub fn new(p: PrimeModulus, n: usize, d: usize, budget: Budget) -> Result<Self> {
        if d > n {
            return Err(Error::Precondition(format!(
                "subspace dimension {d} exceeds ambient dimension {n}"
            )));
        }
        let expected = gaussian_binomial(p, n, d)?;
        budget.check("enumerate_subspaces", Some(expected))?;
        let mut blocks = Vec::new();
        let mut start = 0u64;
        for pivots in combinations(n, d) {
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(i, &c)| {
                    let pivots = &pivots;
                    (c + 1..n).filter(move |j| !pivots.contains(j)).map(move |j| (i, j))
                })
                .collect();
            let len = p.as_u64().pow(free.len() as u32);
            blocks.push(PivotBlock {
                pivots,
                free,
                start,
                len,
            });
            start += len;
        }
        debug_assert_eq!(start as u128, expected);
        Ok(SubspaceEnumeration {
            p,
            n,
            d,
            blocks,
            total: start,
        })
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    fn build(&self, block: &PivotBlock, digits: &[u32]) -> Subspace {
        let mut basis = FpMatrix::zeros(self.p, self.d, self.n);
        for (i, &c) in block.pivots.iter().enumerate() {
            basis.set(i, c, 1);
        }
        for (&(i, j), &x) in block.free.iter().zip(digits) {
            basis.set(i, j, x);
        }
        Subspace {
            basis,
            pivots: block.pivots.clone(),
        }
    }

    /// The subspace at a given index of the canonical order.
    pub fn get(&self, index: u64) -> Option<Subspace> {
        let block = self
            .blocks
            .iter()
            .find(|b| (b.start..b.start + b.len).contains(&index))?;
        let od = Odometer::at(self.p, block.free.len(), index - block.start);
        Some(self.build(block, od.digits()))
    }

    /// Subspaces with indices in `range`, in order.
    pub fn range(&self, range: Range<u64>) -> impl Iterator<Item = Subspace> + '_ {
        let end = range.end.min(self.total);
        let start = range.start.min(end);
        let mut bi = self
            .blocks
            .iter()
            .position(|b| start < b.start + b.len)
            .unwrap_or(self.blocks.len());
        let mut od = self
            .blocks
            .get(bi)
            .map(|b| Odometer::at(self.p, b.free.len(), start - b.start));
        (start..end).map(move |idx| {
            let mut block = &self.blocks[bi];
            if idx >= block.start + block.len {
                bi += 1;
                block = &self.blocks[bi];
                od = Some(Odometer::at(self.p, block.free.len(), 0));
            }
            let o = od.as_mut().expect("odometer present within range");
            let s = self.build(block, o.digits());
            o.step();
            s
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = Subspace> + '_ {
        self.range(0..self.total)
    }
}

/// Enumerates every `d`-dimensional subspace of `F_p^n` exactly once.
pub fn enumerate_subspaces(
    n: usize,
    d: usize,
    p: PrimeModulus,
    budget: Budget,
) -> Result<Vec<Subspace>> {
    let e = SubspaceEnumeration::new(p, n, d, budget)?;
    Ok(e.iter().collect())
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn gaussian_binomial_values() {
        let p3 = PrimeModulus::new(3).unwrap();
        assert_eq!(gaussian_binomial(p3, 2, 1).unwrap(), 4);
        assert_eq!(gaussian_binomial(p3, 4, 2).unwrap(), 130);
        assert_eq!(gaussian_binomial(p3, 4, 0).unwrap(), 1);
        assert_eq!(gaussian_binomial(p3, 4, 4).unwrap(), 1);
        let p5 = PrimeModulus::new(5).unwrap();
        assert_eq!(gaussian_binomial(p5, 4, 2).unwrap(), 806);
    }

    #[test]
    fn small_enumerations() {
        let p3 = PrimeModulus::new(3).unwrap();
        let zero = enumerate_subspaces(3, 0, p3, Budget::default()).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].dim(), 0);
        assert_eq!(enumerate_subspaces(2, 1, p3, Budget::default()).unwrap().len(), 4);
        let planes = enumerate_subspaces(4, 2, p3, Budget::default()).unwrap();
        assert_eq!(planes.len(), 130);
        let distinct: HashSet<_> = planes.iter().collect();
        assert_eq!(distinct.len(), 130);
        assert!(planes.iter().all(|s| s.dim() == 2));
    }

    #[test]
    fn enumeration_is_canonical() {
        let p = PrimeModulus::new(3).unwrap();
        let e = SubspaceEnumeration::new(p, 4, 2, Budget::default()).unwrap();
        for s in e.iter() {
            assert_eq!(Subspace::span_of(s.basis()), s);
        }
        let all: Vec<_> = e.iter().collect();
        for (i, s) in all.iter().enumerate() {
            assert_eq!(e.get(i as u64).as_ref(), Some(s));
        }
        let mid: Vec<_> = e.range(37..101).collect();
        assert_eq!(mid, all[37..101].to_vec());
        assert!(e.get(130).is_none());
    }

    #[test]
    fn budget_and_precondition() {
        let p = PrimeModulus::new(3).unwrap();
        assert!(matches!(
            SubspaceEnumeration::new(p, 4, 2, Budget(100)),
            Err(Error::BudgetExceeded { needed: 130, .. })
        ));
        assert!(SubspaceEnumeration::new(p, 2, 3, Budget::default()).is_err());
    }

    #[test]
    fn membership_and_vectors() {
        let p = PrimeModulus::new(5).unwrap();
        let s = Subspace::span_of_vectors(p, 3, &[vec![1, 2, 0], vec![2, 4, 0]]).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&[3, 1, 0]));
        assert!(!s.contains(&[0, 0, 1]));
        assert_eq!(s.vectors().count(), 5);
        let t = s.extended(&[0, 0, 1]);
        assert_eq!(t.dim(), 2);
        assert!(t.vectors().all(|v| t.contains(&v)));
    }
}
