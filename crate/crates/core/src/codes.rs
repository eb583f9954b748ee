//! Binary linear codes: duals, self-duality tests, weight distributions and
//! the extremal minimum-weight bound for doubly even self-dual codes.
//!
//! A [`LinearCode`] stores its generator matrix in reduced row echelon form,
//! so two values compare equal exactly when they are the same subspace.
//! Minimum weights and weight enumerators come from full span enumeration —
//! there is no shortcut through basis weights, which would be wrong.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::gf2::{enumerate_span_budgeted, BitMatrix, BitVector, DEFAULT_ENUMERATION_BUDGET};

/// A linear code over GF(2), canonicalized to its RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearCode {
    length: usize,
    basis: BitMatrix,
    pivots: Vec<usize>,
}

impl LinearCode {
    /// The code spanned by `rows`; dependent rows are eliminated.
    pub fn from_generators(length: usize, rows: Vec<BitVector>) -> Self {
        let reduced = BitMatrix::from_rows(length, rows).rref();
        LinearCode {
            length,
            basis: reduced.matrix,
            pivots: reduced.pivot_columns,
        }
    }

    pub fn from_matrix(m: &BitMatrix) -> Self {
        Self::from_generators(m.ncols(), m.rows().to_vec())
    }

    /// The zero code `{0}` of the given length.
    pub fn zero(length: usize) -> Self {
        LinearCode {
            length,
            basis: BitMatrix::new(length),
            pivots: Vec::new(),
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.basis.nrows()
    }

    /// Generator matrix in reduced row echelon form.
    pub fn basis(&self) -> &BitMatrix {
        &self.basis
    }

    /// 1-based pivot columns of the reduced generator matrix.
    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Membership test by reduction against the RREF basis.
    pub fn contains(&self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.length, "vector length differs from code length");
        let mut r = v.clone();
        for (row, &p) in self.basis.rows().iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign_raw(row);
            }
        }
        r.is_zero()
    }

    /// The dual code `{x : x·c = 0 for all c}`, of dimension `n - k`.
    pub fn dual(&self) -> LinearCode {
        LinearCode::from_matrix(&self.basis.kernel())
    }

    /// True when every pair of codewords is orthogonal, i.e. the code is
    /// contained in its dual. Checking the basis suffices.
    pub fn is_self_orthogonal(&self) -> bool {
        let rows = self.basis.rows();
        rows.iter().enumerate().all(|(i, a)| {
            rows[i..].iter().all(|b| !a.dot(b).expect("equal lengths"))
        })
    }

    /// True when every codeword has weight divisible by 4. Follows from the
    /// basis alone: if all basis weights are multiples of 4 and all pairs
    /// are orthogonal, sums keep weight ≡ 0 (mod 4) in characteristic 2.
    pub fn is_doubly_even(&self) -> bool {
        self.basis.rows().iter().all(|r| r.weight() % 4 == 0) && self.is_self_orthogonal()
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.dimension() == self.length && self.is_self_orthogonal()
    }

    /// Walks all `2^k` codewords. The visitor may break early.
    pub fn for_each_codeword<F>(&self, budget: usize, visitor: F) -> Result<()>
    where
        F: FnMut(&BitVector) -> ControlFlow<()>,
    {
        enumerate_span_budgeted(&self.basis, budget, visitor)
    }

    /// Minimum weight of a nonzero codeword, by full enumeration.
    /// The zero code has none.
    pub fn minimum_weight(&self) -> Result<usize> {
        self.minimum_weight_budgeted(DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn minimum_weight_budgeted(&self, budget: usize) -> Result<usize> {
        if self.dimension() == 0 {
            return Err(Error::ZeroCode);
        }
        let mut min = usize::MAX;
        self.for_each_codeword(budget, |v| {
            let w = v.weight();
            if w > 0 && w < min {
                min = w;
                if min == 1 {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        })?;
        Ok(min)
    }

    /// The weight distribution `A[0..=n]`, with `sum(A) = 2^k`.
    pub fn weight_enumerator(&self) -> Result<Vec<u64>> {
        self.weight_enumerator_budgeted(DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn weight_enumerator_budgeted(&self, budget: usize) -> Result<Vec<u64>> {
        let mut counts = vec![0u64; self.length + 1];
        self.for_each_codeword(budget, |v| {
            counts[v.weight()] += 1;
            ControlFlow::Continue(())
        })?;
        Ok(counts)
    }

    /// All codewords of weight `w` whose support contains every coordinate in
    /// `required_support`, in ascending packed-value order.
    pub fn codewords_of_weight(&self, w: usize, required_support: &[usize]) -> Result<Vec<BitVector>> {
        self.codewords_of_weight_budgeted(w, required_support, DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn codewords_of_weight_budgeted(
        &self,
        w: usize,
        required_support: &[usize],
        budget: usize,
    ) -> Result<Vec<BitVector>> {
        for &c in required_support {
            if c == 0 || c > self.length {
                return Err(Error::Precondition(format!(
                    "required coordinate {c} out of range 1..={}",
                    self.length
                )));
            }
        }
        let required = if required_support.is_empty() {
            None
        } else {
            Some(BitVector::from_support(self.length, required_support))
        };
        let mut found = Vec::new();
        self.for_each_codeword(budget, |v| {
            if v.weight() == w {
                let ok = match &required {
                    None => true,
                    Some(req) => req.overlap(v).expect("equal lengths") == req.weight(),
                };
                if ok {
                    found.push(v.clone());
                }
            }
            ControlFlow::Continue(())
        })?;
        found.sort();
        Ok(found)
    }

    /// Relabels coordinates: `image[i-1]` is the new 1-based position of
    /// coordinate `i`. `image` must be a permutation of `1..=n`.
    pub fn apply_permutation(&self, image: &[usize]) -> Result<LinearCode> {
        if image.len() != self.length {
            return Err(Error::Permutation(format!(
                "map has {} entries for length {}",
                image.len(),
                self.length
            )));
        }
        let mut seen = vec![false; self.length + 1];
        for &t in image {
            if t == 0 || t > self.length {
                return Err(Error::Permutation(format!(
                    "image {t} out of range 1..={}",
                    self.length
                )));
            }
            if seen[t] {
                return Err(Error::Permutation(format!("image {t} repeated")));
            }
            seen[t] = true;
        }
        let rows = self
            .basis
            .rows()
            .iter()
            .map(|row| {
                let mut out = BitVector::zeros(self.length);
                for i in row.support() {
                    out.set(image[i - 1], true);
                }
                out
            })
            .collect();
        Ok(LinearCode::from_generators(self.length, rows))
    }
}

/// Upper bound `4*floor(n/24) + 4` on the minimum weight of a doubly even
/// self-dual code of length `n`; such codes only exist for `n ≡ 0 (mod 8)`.
/// Codes meeting the bound are called extremal.
pub fn extremal_bound(n: usize) -> Result<usize> {
    if n == 0 || n % 8 != 0 {
        return Err(Error::NoSelfDualLength { length: n });
    }
    Ok(4 * (n / 24) + 4)
}

// ---------------------------------------------------------------------------
// Generator matrix text format
//
// First non-comment line: "n k". Then k rows of n characters from {0,1}.
// `#` starts a comment that runs to end of line; blank lines and interior
// whitespace in rows are ignored.
// ---------------------------------------------------------------------------

/// Parses the text form of a generator matrix.
pub fn parse_generator_matrix(text: &str) -> Result<LinearCode> {
    let mut header: Option<(usize, usize)> = None;
    let mut rows: Vec<BitVector> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        match header {
            None => {
                let mut parts = content.split_whitespace();
                let n = parse_field(parts.next(), line_no, "length")?;
                let k = parse_field(parts.next(), line_no, "dimension")?;
                if parts.next().is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "header must be exactly `n k`".into(),
                    });
                }
                if n == 0 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "length must be positive".into(),
                    });
                }
                if k > n {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("dimension {k} exceeds length {n}"),
                    });
                }
                header = Some((n, k));
            }
            Some((n, k)) => {
                if rows.len() == k {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("found more than the declared {k} rows"),
                    });
                }
                let mut v = BitVector::zeros(n);
                let mut col = 0;
                for ch in content.chars() {
                    if ch.is_whitespace() {
                        continue;
                    }
                    col += 1;
                    if col > n {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("row has more than {n} entries"),
                        });
                    }
                    match ch {
                        '0' => {}
                        '1' => v.set(col, true),
                        _ => {
                            return Err(Error::Parse {
                                line: line_no,
                                message: format!("invalid character {ch:?} in row"),
                            })
                        }
                    }
                }
                if col != n {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("row has {col} entries, expected {n}"),
                    });
                }
                rows.push(v);
            }
        }
    }
    match header {
        None => Err(Error::Parse {
            line: last_line.max(1),
            message: "missing `n k` header".into(),
        }),
        Some((n, k)) => {
            if rows.len() != k {
                return Err(Error::Parse {
                    line: last_line.max(1),
                    message: format!("found {} rows, header declared {k}", rows.len()),
                });
            }
            Ok(LinearCode::from_generators(n, rows))
        }
    }
}

/// Writes the text form; `parse_generator_matrix` round-trips it.
pub fn format_generator_matrix(code: &LinearCode) -> String {
    let mut out = format!("{} {}\n", code.length(), code.dimension());
    for row in code.basis().rows() {
        out.push_str(&row.to_string());
        out.push('\n');
    }
    out
}

fn parse_field(field: Option<&str>, line: usize, what: &str) -> Result<usize> {
    field
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("missing {what} in header"),
        })?
        .parse()
        .map_err(|_| Error::Parse {
            line,
            message: format!("{what} is not a number"),
        })
}
