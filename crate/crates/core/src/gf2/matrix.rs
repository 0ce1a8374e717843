use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

/// Reduced row echelon form of a matrix, restricted to a prefix of its columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: BitMatrix,
    /// Pivot column of each nonzero row, in row order.
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows; each row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::dim(format!(
                "row {i} has length {}, expected {cols}",
                r.len()
            )));
        }
        Ok(BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Builds a matrix from columns; each column must have length `rows`.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::dim(format!(
                    "column {j} has length {}, expected {rows}",
                    c.len()
                )));
            }
            for i in c.support() {
                m.set(i, j, true);
            }
        }
        Ok(m)
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
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.data[i].set(j, bit)
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[BitVec] {
        &self.data
    }

    pub fn col(&self, j: usize) -> BitVec {
        BitVec::from_fn(self.rows, |i| self.get(i, j))
    }

    pub fn columns(&self) -> Vec<BitVec> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for j in row.support() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// `H · yᵀ`: the sum of the columns selected by `y`.
    pub fn mat_vec_mul(&self, y: &BitVec) -> Result<BitVec> {
        if y.len() != self.cols {
            return Err(Error::dim(format!(
                "vector of length {} against {} columns",
                y.len(),
                self.cols
            )));
        }
        Ok(BitVec::from_fn(self.rows, |i| self.data[i].dot(y)))
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            for k in row.support() {
                out.data[i] ^= &other.data[k];
            }
        }
        Ok(out)
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::dim(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| BitVec::concat([a, b]))
            .collect();
        Ok(BitMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        })
    }

    /// Block-diagonal matrix `[[A, 0], [0, B]]`.
    pub fn block_diag(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in a.data[i].support() {
                out.set(i, j, true);
            }
        }
        for i in 0..b.rows {
            for j in b.data[i].support() {
                out.set(a.rows + i, a.cols + j, true);
            }
        }
        out
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn select_columns(&self, perm: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, perm.len());
        for (i, row) in self.data.iter().enumerate() {
            for (j, &src) in perm.iter().enumerate() {
                if row.get(src) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    /// Gauss-Jordan elimination, choosing pivots only among the first
    /// `pivot_cols` columns. Row operations still act on every column.
    pub fn echelon_on(&self, pivot_cols: usize) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..pivot_cols.min(self.cols) {
            let Some(p) = (next..m.rows).find(|&i| m.data[i].get(c)) else {
                continue;
            };
            m.data.swap(next, p);
            let pivot_row = m.data[next].clone();
            for i in 0..m.rows {
                if i != next && m.data[i].get(c) {
                    m.data[i] ^= &pivot_row;
                }
            }
            pivots.push(c);
            next += 1;
            if next == m.rows {
                break;
            }
        }
        Echelon { matrix: m, pivots }
    }

    pub fn echelon(&self) -> Echelon {
        self.echelon_on(self.cols)
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Some `y` with `H · yᵀ = s`, or `None` when `s` is outside the column span.
    /// Free variables are set to zero; no weight guarantee.
    pub fn solve_any(&self, s: &BitVec) -> Result<Option<BitVec>> {
        if s.len() != self.rows {
            return Err(Error::dim(format!(
                "syndrome of length {} against {} rows",
                s.len(),
                self.rows
            )));
        }
        let rhs = BitMatrix::from_columns(self.rows, std::slice::from_ref(s))?;
        let aug = self.hstack(&rhs)?;
        let ech = aug.echelon_on(self.cols);
        let rank = ech.pivots.len();
        if (rank..self.rows).any(|i| ech.matrix.get(i, self.cols)) {
            return Ok(None);
        }
        let mut y = BitVec::zeros(self.cols);
        for (i, &c) in ech.pivots.iter().enumerate() {
            if ech.matrix.get(i, self.cols) {
                y.set(c, true);
            }
        }
        Ok(Some(y))
    }

    /// Column-permuted reduced form `[I_r | A]` of a full-row-rank matrix.
    ///
    /// Returns the reduced matrix and `perm`, where column `j` of the result
    /// comes from column `perm[j]` of `self`.
    pub fn systematic_form(&self) -> Result<(BitMatrix, Vec<usize>)> {
        let ech = self.echelon();
        let rank = ech.pivots.len();
        if rank != self.rows {
            return Err(Error::RankDeficient {
                rank,
                rows: self.rows,
            });
        }
        let mut perm = ech.pivots.clone();
        perm.extend((0..self.cols).filter(|c| !ech.pivots.contains(c)));
        Ok((ech.matrix.select_columns(&perm), perm))
    }

    /// Text format: one row per line of '0'/'1' characters.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for row in &self.data {
            s.push_str(&row.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the text format. Blank lines and lines starting with '#' are skipped.
    pub fn parse_text(text: &str) -> Result<BitMatrix> {
        let rows: Vec<BitVec> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<_>>()?;
        let cols = rows.first().map_or(0, BitVec::len);
        BitMatrix::from_rows(cols, rows)
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BitMatrix::parse_text(s)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}
