//! Bit-packed linear algebra over GF(2).
//!
//! Coordinates are 1-based in the public API, matching the usual labeling of
//! code coordinates and design points; the u64 word packing is internal.
//! Vectors keep unused trailing bits at zero so that equality, hashing and
//! packed-value ordering work on the raw words.

use std::cmp::Ordering;
use std::fmt;
use std::ops::ControlFlow;

use crate::error::{Error, Result};

/// Default cap on the span dimension accepted by [`enumerate_span`]:
/// enumerations touch at most 2^28 vectors unless a caller raises the budget.
pub const DEFAULT_ENUMERATION_BUDGET: usize = 28;

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    (len + WORD_BITS - 1) / WORD_BITS
}

/// A fixed-length vector over GF(2), one bit per coordinate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    /// The zero vector with `len` coordinates.
    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "vector length must be positive");
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from its support (1-based coordinates).
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    /// Parses a string of `0`/`1` characters, coordinate 1 first.
    pub fn from_bit_str(s: &str) -> Self {
        let mut v = Self::zeros(s.len());
        for (idx, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v.set(idx + 1, true),
                _ => panic!("invalid bit character {ch:?}"),
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false // length is always positive
    }

    #[inline]
    fn word_bit(&self, coord: usize) -> (usize, u64) {
        debug_assert!(
            coord >= 1 && coord <= self.len,
            "coordinate {coord} out of range 1..={}",
            self.len
        );
        ((coord - 1) / WORD_BITS, 1u64 << ((coord - 1) % WORD_BITS))
    }

    /// Reads the bit at 1-based `coord`.
    #[inline]
    pub fn get(&self, coord: usize) -> bool {
        assert!(
            coord >= 1 && coord <= self.len,
            "coordinate {coord} out of range 1..={}",
            self.len
        );
        let (w, m) = self.word_bit(coord);
        self.words[w] & m != 0
    }

    /// Writes the bit at 1-based `coord`.
    #[inline]
    pub fn set(&mut self, coord: usize, value: bool) {
        assert!(
            coord >= 1 && coord <= self.len,
            "coordinate {coord} out of range 1..={}",
            self.len
        );
        let (w, m) = self.word_bit(coord);
        if value {
            self.words[w] |= m;
        } else {
            self.words[w] &= !m;
        }
    }

    /// Flips the bit at 1-based `coord`.
    #[inline]
    pub fn flip(&mut self, coord: usize) {
        assert!(
            coord >= 1 && coord <= self.len,
            "coordinate {coord} out of range 1..={}",
            self.len
        );
        let (w, m) = self.word_bit(coord);
        self.words[w] ^= m;
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Support as ascending 1-based coordinates.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * WORD_BITS + b + 1);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Coordinatewise sum (XOR). Fails on mismatched lengths.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                left: self.len,
                right: other.len,
            });
        }
        let mut out = self.clone();
        out.xor_assign_raw(other);
        Ok(out)
    }

    /// Inner product over GF(2). Fails on mismatched lengths.
    pub fn dot(&self, other: &Self) -> Result<bool> {
        Ok(self.overlap(other)? % 2 == 1)
    }

    /// Size of the common support. Fails on mismatched lengths.
    pub fn overlap(&self, other: &Self) -> Result<usize> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }

    /// In-place XOR; lengths must already agree (hot path).
    #[inline]
    pub(crate) fn xor_assign_raw(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    /// Raw packed words, coordinate 1 in the least significant bit.
    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

/// Packed-value order: vectors compare as integers with coordinate 1 in the
/// least significant position. Only meaningful between equal lengths.
impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for k in (0..self.words.len()).rev() {
                match self.words[k].cmp(&other.words[k]) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

// Debug prints the bit string too; the derive would dump raw words, which is
// useless in test failures.
impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A row-major matrix over GF(2). Rows share a common length; the row list
/// may be empty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    ncols: usize,
    rows: Vec<BitVector>,
}

/// Outcome of Gaussian elimination: the reduced matrix (zero rows dropped),
/// its rank, and the 1-based pivot columns in ascending order.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: BitMatrix,
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
}

impl BitMatrix {
    /// An empty matrix (no rows) with `ncols` columns.
    pub fn new(ncols: usize) -> Self {
        assert!(ncols > 0, "matrix must have at least one column");
        BitMatrix {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<BitVector>) -> Self {
        assert!(ncols > 0, "matrix must have at least one column");
        for r in &rows {
            assert_eq!(r.len(), ncols, "row length differs from column count");
        }
        BitMatrix { ncols, rows }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (1..=n).map(|i| BitVector::from_support(n, &[i])).collect();
        BitMatrix { ncols: n, rows }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn push_row(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.ncols, "row length differs from column count");
        self.rows.push(row);
    }

    /// Reduced row echelon form. Pure: the receiver is unchanged.
    pub fn rref(&self) -> Rref {
        let mut rows = self.rows.clone();
        let mut pivot_columns = Vec::new();
        let mut rank = 0;
        for col in 1..=self.ncols {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign_raw(&pivot_row);
                }
            }
            pivot_columns.push(col);
            rank += 1;
        }
        debug_assert!(rows[rank..].iter().all(BitVector::is_zero));
        rows.truncate(rank);
        Rref {
            matrix: BitMatrix {
                ncols: self.ncols,
                rows,
            },
            rank,
            pivot_columns,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space `{x : M x = 0}`, one row per free
    /// column of the reduced form. Row count is `ncols - rank`.
    pub fn kernel(&self) -> BitMatrix {
        let Rref {
            matrix,
            rank,
            pivot_columns,
        } = self.rref();
        let mut is_pivot = vec![false; self.ncols + 1];
        for &c in &pivot_columns {
            is_pivot[c] = true;
        }
        let mut rows = Vec::with_capacity(self.ncols - rank);
        for free in 1..=self.ncols {
            if is_pivot[free] {
                continue;
            }
            let mut v = BitVector::zeros(self.ncols);
            v.set(free, true);
            for (r, &pc) in pivot_columns.iter().enumerate() {
                if matrix.rows[r].get(free) {
                    v.set(pc, true);
                }
            }
            rows.push(v);
        }
        BitMatrix {
            ncols: self.ncols,
            rows,
        }
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Visits every vector in the span of `basis` exactly once, starting from
/// zero, in Gray-code order: consecutive vectors differ by a single basis
/// row, so each step is one row XOR. The visitor may stop the walk early by
/// returning [`ControlFlow::Break`].
///
/// The rows must be linearly independent (callers pass reduced bases), and
/// the dimension must not exceed `DEFAULT_ENUMERATION_BUDGET`; use
/// [`enumerate_span_budgeted`] to override.
pub fn enumerate_span<F>(basis: &BitMatrix, visitor: F) -> Result<()>
where
    F: FnMut(&BitVector) -> ControlFlow<()>,
{
    enumerate_span_budgeted(basis, DEFAULT_ENUMERATION_BUDGET, visitor)
}

/// [`enumerate_span`] with an explicit budget: the span dimension `k` must
/// satisfy `k <= budget`, bounding the walk at `2^budget` visits.
pub fn enumerate_span_budgeted<F>(basis: &BitMatrix, budget: usize, mut visitor: F) -> Result<()>
where
    F: FnMut(&BitVector) -> ControlFlow<()>,
{
    let k = basis.nrows();
    if k > budget || k >= 64 {
        return Err(Error::EnumerationBudget {
            dimension: k,
            budget: budget.min(63),
        });
    }
    let mut current = BitVector::zeros(basis.ncols());
    if visitor(&current).is_break() {
        return Ok(());
    }
    for t in 1..(1u64 << k) {
        let row = t.trailing_zeros() as usize;
        current.xor_assign_raw(&basis.rows[row]);
        if visitor(&current).is_break() {
            return Ok(());
        }
    }
    Ok(())
}
