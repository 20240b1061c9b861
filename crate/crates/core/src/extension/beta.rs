use crate::error::{Error, Result};
use crate::fpcore::wedge::wedge_into;
use crate::fpcore::{wedge_dim, FpMatrix, PrimeModulus, Subspace, Wedge2};

/// A linear map `β: Λ²(F_p^{r1}) -> F_p^{r2}`, stored as an
/// `r2 × r1(r1-1)/2` matrix acting on wedge coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BetaMap {
    r1: usize,
    matrix: FpMatrix,
}

impl BetaMap {
    pub fn new(r1: usize, matrix: FpMatrix) -> Result<Self> {
        if matrix.cols() != wedge_dim(r1) {
            return Err(Error::DimensionMismatch {
                op: "BetaMap::new",
                expected: wedge_dim(r1),
                found: matrix.cols(),
            });
        }
        Ok(BetaMap { r1, matrix })
    }

    pub fn zero(p: PrimeModulus, r1: usize, r2: usize) -> Self {
        BetaMap {
            r1,
            matrix: FpMatrix::zeros(p, r2, wedge_dim(r1)),
        }
    }

    /// The map whose single output coordinate is the `(i, j)` wedge coordinate.
    pub fn coordinate(p: PrimeModulus, r1: usize, i: usize, j: usize) -> Self {
        let w = Wedge2::basis(p, r1, i, j);
        BetaMap {
            r1,
            matrix: FpMatrix::from_residues(p, 1, wedge_dim(r1), w.coords().to_vec()),
        }
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.matrix.modulus()
    }

    #[inline]
    pub fn r1(&self) -> usize {
        self.r1
    }

    #[inline]
    pub fn r2(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    pub fn apply(&self, w: &Wedge2) -> Result<Vec<u32>> {
        if w.ambient_dim() != self.r1 {
            return Err(Error::DimensionMismatch {
                op: "BetaMap::apply",
                expected: self.r1,
                found: w.ambient_dim(),
            });
        }
        if w.modulus() != self.modulus() {
            return Err(Error::ModulusMismatch(
                self.modulus().as_u64(),
                w.modulus().as_u64(),
            ));
        }
        self.matrix.apply(w.coords())
    }

    /// `β(w) == 0` for raw wedge coordinates.
    #[inline]
    pub(crate) fn kills_coords(&self, coords: &[u32]) -> bool {
        let p = self.modulus();
        (0..self.r2()).all(|k| {
            let acc: u64 = self
                .matrix
                .row(k)
                .iter()
                .zip(coords)
                .map(|(&a, &b)| a as u64 * b as u64)
                .sum();
            p.reduce(acc) == 0
        })
    }

    /// `β(w)` into `out`, for raw wedge coordinates.
    #[inline]
    pub(crate) fn apply_coords_into(&self, coords: &[u32], out: &mut Vec<u32>) {
        let p = self.modulus();
        out.clear();
        for k in 0..self.r2() {
            let acc: u64 = self
                .matrix
                .row(k)
                .iter()
                .zip(coords)
                .map(|(&a, &b)| a as u64 * b as u64)
                .sum();
            out.push(p.reduce(acc));
        }
    }

    pub fn annihilates(&self, w: &Wedge2) -> Result<bool> {
        Ok(self.apply(w)?.iter().all(|&x| x == 0))
    }

    /// `β(u ∧ v)`.
    pub fn on_pair(&self, u: &[u32], v: &[u32]) -> Result<Vec<u32>> {
        if u.len() != self.r1 || v.len() != self.r1 {
            return Err(Error::DimensionMismatch {
                op: "BetaMap::on_pair",
                expected: self.r1,
                found: if u.len() != self.r1 { u.len() } else { v.len() },
            });
        }
        let mut coords = Vec::with_capacity(wedge_dim(self.r1));
        wedge_into(self.modulus(), u, v, &mut coords);
        let mut out = Vec::with_capacity(self.r2());
        self.apply_coords_into(&coords, &mut out);
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.r2()
    }

    /// `Ker β` as a subspace of wedge-coordinate space.
    pub fn kernel(&self) -> Subspace {
        Subspace::span_of(&self.matrix.rref_rank_kernel().kernel)
    }

    /// Plain text form: `p rows cols` on the first line, then the entries
    /// row by row.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} {}\n",
            self.modulus(),
            self.matrix.rows(),
            self.matrix.cols()
        );
        for i in 0..self.matrix.rows() {
            let row: Vec<String> = self.matrix.row(i).iter().map(|x| x.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses [`BetaMap::to_text`]. Entries may be spread over any number
    /// of lines; `r1` is recovered from the column count.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut header = |name: &str| -> Result<u64> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {name} in header")))?
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad {name}: {e}")))
        };
        let p = PrimeModulus::new(header("p")?)?;
        let rows = header("rows")? as usize;
        let cols = header("cols")? as usize;
        let r1 = (2..=cols + 1)
            .find(|&r| wedge_dim(r) == cols)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "{cols} columns is not r1(r1-1)/2 for any r1 >= 2"
                ))
            })?;
        let entries = tokens
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<i64>>>()?;
        if entries.len() != rows * cols {
            return Err(Error::Parse(format!(
                "expected {} entries, found {}",
                rows * cols,
                entries.len()
            )));
        }
        let data = entries
            .into_iter()
            .map(|x| p.reduce_signed(x) as u64)
            .collect();
        BetaMap::new(r1, FpMatrix::from_vec(p, rows, cols, data)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let p = PrimeModulus::new(5).unwrap();
        let m = FpMatrix::from_rows(p, &[[1, 2, 3, 4, 0, 1], [0, 0, 1, 2, 3, 4]]).unwrap();
        let b = BetaMap::new(4, m).unwrap();
        let text = b.to_text();
        assert!(text.starts_with("5 2 6\n"));
        assert_eq!(BetaMap::parse_text(&text).unwrap(), b);
        // entries over several lines, negative values reduced
        let alt = BetaMap::parse_text("5 2 6\n1 2 3\n-1 0 1 0 0 1 2 3 4").unwrap();
        assert_eq!(alt.matrix().get(0, 3), 4);
    }

    #[test]
    fn parse_errors() {
        assert!(BetaMap::parse_text("").is_err());
        assert!(BetaMap::parse_text("3 1 4\n1 2 3 4").is_err());
        assert!(BetaMap::parse_text("3 1 3\n1 2").is_err());
        assert!(BetaMap::parse_text("4 1 3\n1 2 0").is_err());
        assert!(BetaMap::parse_text("3 1 3\n1 x 0").is_err());
    }

    #[test]
    fn coordinate_map_and_kernel() {
        let p = PrimeModulus::new(3).unwrap();
        let b = BetaMap::coordinate(p, 3, 0, 1);
        assert_eq!(b.r2(), 1);
        assert!(b.is_surjective());
        assert_eq!(b.on_pair(&[0, 1, 0], &[1, 0, 0]).unwrap(), vec![2]);
        let k = b.kernel();
        assert_eq!(k.dim(), 2);
        assert!(k.contains(Wedge2::basis(p, 3, 0, 2).coords()));
        assert!(!k.contains(Wedge2::basis(p, 3, 0, 1).coords()));
        assert!(BetaMap::new(3, FpMatrix::zeros(p, 1, 4)).is_err());
    }
}
