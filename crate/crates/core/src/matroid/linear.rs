//! Dense matrices over prime fields GF(p).

use crate::error::{domain, Result};
use crate::setfn::{elements, SubsetMask};

/// Largest supported field characteristic.
pub const MAX_PRIME: u32 = 97;

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// A `rows × cols` matrix over GF(p), entries reduced to `0..p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    /// Column-major entries.
    columns: Vec<Vec<u32>>,
}

impl FieldMatrix {
    /// Builds a matrix from row vectors; entries may be any integers and are reduced mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        if !is_prime(p) || p > MAX_PRIME {
            return domain(format!("field characteristic must be a prime ≤ {MAX_PRIME}, got {p}"));
        }
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return domain("matrix rows have different lengths");
        }
        let columns = (0..cols)
            .map(|j| rows.iter().map(|r| r[j].rem_euclid(p as i64) as u32).collect())
            .collect();
        Ok(Self {
            p,
            rows: rows.len(),
            cols,
            columns,
        })
    }

    pub fn identity(p: u32, n: usize) -> Result<Self> {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::from_rows(p, &rows)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> u32 {
        self.columns[col][row]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| i64::from(self.columns[j][i])).collect())
            .collect()
    }

    /// Rank of the column submatrix selected by `mask`, by Gaussian elimination.
    pub fn column_rank(&self, mask: SubsetMask) -> usize {
        let p = self.p as u64;
        let mut work: Vec<Vec<u32>> = elements(mask).map(|j| self.columns[j].clone()).collect();
        let mut rank = 0;
        for row in 0..self.rows {
            let Some(pivot) = (rank..work.len()).find(|&c| work[c][row] != 0) else {
                continue;
            };
            work.swap(rank, pivot);
            let inv = inverse(work[rank][row], self.p) as u64;
            for c in rank + 1..work.len() {
                let factor = work[c][row] as u64 * inv % p;
                if factor == 0 {
                    continue;
                }
                for r in row..self.rows {
                    let sub = factor * work[rank][r] as u64 % p;
                    work[c][r] = ((work[c][r] as u64 + p - sub) % p) as u32;
                }
            }
            rank += 1;
            if rank == work.len() {
                break;
            }
        }
        rank
    }

    /// Kronecker product; column `(i, j)` is `a_i ⊗ b_j` at index `i·cols(b) + j`.
    pub fn kronecker(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.p != other.p {
            return domain(format!(
                "Kronecker product needs a common field, got GF({}) and GF({})",
                self.p, other.p
            ));
        }
        let p = self.p as u64;
        let mut columns = Vec::with_capacity(self.cols * other.cols);
        for a in &self.columns {
            for b in &other.columns {
                let col = a
                    .iter()
                    .flat_map(|&x| b.iter().map(move |&y| (x as u64 * y as u64 % p) as u32))
                    .collect();
                columns.push(col);
            }
        }
        Ok(FieldMatrix {
            p: self.p,
            rows: self.rows * other.rows,
            cols: self.cols * other.cols,
            columns,
        })
    }
}

/// Multiplicative inverse of a nonzero `a` in GF(p), by Fermat's little theorem.
fn inverse(a: u32, p: u32) -> u32 {
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}
