//! Verifiers for the arithmetic and coding-theoretic obstructions that a
//! quasi-symmetric design imposes on its linear codes.
//!
//! Each check here is an enumeration-backed verifier on a concrete
//! instance: dual minimum-weight lower bounds for the design's plain and
//! bordered codes, the modular preconditions that make the three-column
//! bordered span doubly even, the weight-8 support filter on candidate
//! border triples, the pair-counting feasibility equation, and the overlap
//! parity forced on blocks by self-orthogonality.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::codes::LinearCode;
use crate::designs::{DesignParams, IncidenceStructure};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// A lower bound expressed as an exact fraction, compared without
/// rounding: `weight ≥ numerator / denominator` ⇔
/// `weight · denominator ≥ numerator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RationalBound {
    pub numerator: usize,
    pub denominator: usize,
}

impl RationalBound {
    /// Builds the bound in lowest terms.
    pub fn new(numerator: usize, denominator: usize) -> Self {
        assert!(denominator > 0, "bound denominator must be positive");
        let mut a = numerator;
        let mut b = denominator;
        while b > 0 {
            (a, b) = (b, a % b);
        }
        let divisor = a.max(1);
        RationalBound {
            numerator: numerator / divisor,
            denominator: denominator / divisor,
        }
    }

    /// Whether `weight` meets the bound.
    pub fn holds_for(&self, weight: usize) -> bool {
        weight * self.denominator >= self.numerator
    }

    /// The smallest integer satisfying the bound (ceiling).
    pub fn ceil(&self) -> usize {
        self.numerator.div_ceil(self.denominator)
    }
}

impl std::fmt::Display for RationalBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.denominator == 1 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

/// Outcome of the two dual minimum-weight checks: the plain block-span
/// code must have dual distance at least (r+λ)/λ, and the one-column
/// bordered code at least (b+r)/r. A `None` minimum weight means the dual
/// is the zero code, which satisfies any bound vacuously.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualBoundReport {
    pub c1_dual_min_weight: Option<usize>,
    pub c1_bound: RationalBound,
    pub c1_holds: bool,
    pub c2_dual_min_weight: Option<usize>,
    pub c2_bound: RationalBound,
    pub c2_holds: bool,
}

impl DualBoundReport {
    /// Whether both bounds hold.
    pub fn holds(&self) -> bool {
        self.c1_holds && self.c2_holds
    }
}

fn dual_min_weight(code: &LinearCode) -> Result<Option<usize>> {
    match code.dual().minimum_weight() {
        Ok(w) => Ok(Some(w)),
        Err(Error::ZeroCode) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Verifies the dual minimum-weight bounds for a 2-design: the dual of
/// the block span has minimum weight at least (r+λ)/λ, and the dual of
/// the one-column bordered code at least (b+r)/r. Both distances are
/// computed by full enumeration of the dual codes.
pub fn check_dual_min_weight_bounds(
    design: &IncidenceStructure,
    params: &DesignParams,
) -> Result<DualBoundReport> {
    let c1_bound = RationalBound::new(params.r + params.lambda, params.lambda);
    let c2_bound = RationalBound::new(params.b + params.r, params.r);
    let c1 = design.bordered_code(0)?;
    let c2 = design.bordered_code(1)?;
    let c1_dual_min_weight = dual_min_weight(&c1)?;
    let c2_dual_min_weight = dual_min_weight(&c2)?;
    Ok(DualBoundReport {
        c1_dual_min_weight,
        c1_bound,
        c1_holds: c1_dual_min_weight.map_or(true, |w| c1_bound.holds_for(w)),
        c2_dual_min_weight,
        c2_bound,
        c2_holds: c2_dual_min_weight.map_or(true, |w| c2_bound.holds_for(w)),
    })
}

/// Outcome of the three-column bordered dual check. The three weight-2
/// vectors supported on pairs of border columns are exempt from the
/// bound; `excluded_in_dual` records which of them actually lie in the
/// dual (all three, whenever the border columns are equal — as they are
/// by construction). `min_weight_other` is the minimum weight over
/// nonzero non-exempt dual vectors, `None` when no such vector exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BorderedDualReport {
    pub excluded_in_dual: [bool; 3],
    pub min_weight_other: Option<usize>,
    pub bound: RationalBound,
    pub holds: bool,
}

/// Verifies that every nonzero vector of the three-column bordered dual,
/// other than the three border-pair vectors, has weight at least
/// (b+r)/r. Enumerates the dual in full.
pub fn check_c3perp_bound(
    design: &IncidenceStructure,
    params: &DesignParams,
) -> Result<BorderedDualReport> {
    let bound = RationalBound::new(params.b + params.r, params.r);
    let c3 = design.bordered_code(3)?;
    let dual = c3.dual();
    let v = design.points();
    let length = v + 3;
    // the three vectors supported on two of the three border columns
    let exempt = [
        BitVector::from_support(length, &[v + 1, v + 2]),
        BitVector::from_support(length, &[v + 1, v + 3]),
        BitVector::from_support(length, &[v + 2, v + 3]),
    ];
    let excluded_in_dual = [
        dual.contains(&exempt[0]),
        dual.contains(&exempt[1]),
        dual.contains(&exempt[2]),
    ];
    let mut min_weight_other: Option<usize> = None;
    dual.for_each_codeword(crate::gf2::DEFAULT_ENUMERATION_BUDGET, |word| {
        if !word.is_zero() && !exempt.iter().any(|e| e == word) {
            let w = word.weight();
            if min_weight_other.is_none_or(|m| w < m) {
                min_weight_other = Some(w);
            }
        }
        std::ops::ControlFlow::Continue(())
    })?;
    Ok(BorderedDualReport {
        excluded_in_dual,
        min_weight_other,
        bound,
        holds: min_weight_other.map_or(true, |w| bound.holds_for(w)),
    })
}

/// The modular conditions under which the three-column bordered rows span
/// a doubly even code: v ≡ 5 (mod 8), k ≡ 1 (mod 4), and both
/// intersection numbers odd. Rows then have weight k + 3 ≡ 0 (mod 4) and
/// pairwise overlaps x + 3 or y + 3, all even.
pub fn check_bordered_doubly_even_preconditions(v: usize, k: usize, x: usize, y: usize) -> bool {
    v % 8 == 5 && k % 4 == 1 && x % 2 == 1 && y % 2 == 1
}

/// Result of the weight-8 support filter over all point triples of a
/// length-40 code: `admissible` lists, in lexicographic order, the
/// 3-subsets of 1..=40 contained in no weight-8 codeword's support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleFilterResult {
    pub admissible: Vec<[usize; 3]>,
    pub excluded_count: usize,
}

impl TripleFilterResult {
    /// Total number of triples considered; always C(40,3) = 9880.
    pub fn total(&self) -> usize {
        self.admissible.len() + self.excluded_count
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result = 1usize;
    for i in 0..k {
        result = result * (n - i) / (i + 1);
    }
    result
}

/// Lexicographic rank of the triple a < b < c within 1..=n, zero-based.
fn triple_rank(n: usize, a: usize, b: usize, c: usize) -> usize {
    debug_assert!(1 <= a && a < b && b < c && c <= n);
    // triples before (a,b,c): those starting below a, then those with the
    // same first coordinate starting below b, then smaller third coordinates
    let mut rank = 0;
    for first in 1..a {
        rank += binomial(n - first, 2);
    }
    for second in a + 1..b {
        rank += n - second;
    }
    rank + (c - b - 1)
}

/// Filters the C(40,3) point triples of an extremal length-40 code: a
/// triple is admissible when no weight-8 codeword's support contains it.
/// Requires length 40 and minimum weight exactly 8.
pub fn admissible_triples(code: &LinearCode) -> Result<TripleFilterResult> {
    let n = code.length();
    if n != 40 {
        return Err(Error::Precondition(format!(
            "triple filter needs a length-40 code, got length {n}"
        )));
    }
    let min = match code.minimum_weight() {
        Ok(w) => w,
        Err(Error::ZeroCode) => {
            return Err(Error::Precondition(
                "triple filter needs minimum weight 8, got the zero code".into(),
            ))
        }
        Err(e) => return Err(e),
    };
    if min < 8 {
        return Err(Error::Precondition(format!(
            "triple filter needs minimum weight 8, got {min}"
        )));
    }
    Ok(admissible_triples_from_words(
        n,
        &code.codewords_of_weight(8, &[])?,
    ))
}

/// The marking pass behind [`admissible_triples`], reusable when the
/// weight-8 codewords are already on hand from a prior scan.
pub(crate) fn admissible_triples_from_words(n: usize, words: &[BitVector]) -> TripleFilterResult {
    let total = binomial(n, 3);
    let mut excluded = vec![false; total];
    for word in words {
        let support = word.support();
        for i in 0..support.len() {
            for j in i + 1..support.len() {
                for k in j + 1..support.len() {
                    excluded[triple_rank(n, support[i], support[j], support[k])] = true;
                }
            }
        }
    }
    let mut admissible = Vec::new();
    let mut rank = 0;
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                if !excluded[rank] {
                    admissible.push([a, b, c]);
                }
                rank += 1;
            }
        }
    }
    debug_assert_eq!(rank, total);
    let excluded_count = total - admissible.len();
    TripleFilterResult {
        admissible,
        excluded_count,
    }
}

/// One pair-counting feasibility instance: a point set of size `s` inside
/// a design with pair multiplicity `lambda`, where every block meets the
/// set in one of `allowed_sizes` points. Counting incident (pair, block)
/// pairs gives Σ C(i,2)·n_i = C(s,2)·λ over the unknown block counts n_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingInstance {
    pub s: usize,
    pub lambda: usize,
    pub allowed_sizes: BTreeSet<usize>,
}

impl CountingInstance {
    /// Builds an instance; every allowed size must be at most `s`.
    pub fn new(s: usize, lambda: usize, allowed_sizes: &[usize]) -> Result<Self> {
        let sizes: BTreeSet<usize> = allowed_sizes.iter().copied().collect();
        if let Some(&bad) = sizes.iter().find(|&&i| i > s) {
            return Err(Error::Precondition(format!(
                "allowed overlap size {bad} exceeds the set size {s}"
            )));
        }
        Ok(CountingInstance {
            s,
            lambda,
            allowed_sizes: sizes,
        })
    }

    /// The right-hand side C(s,2)·λ of the counting equation.
    pub fn target(&self) -> usize {
        binomial(self.s, 2) * self.lambda
    }

    /// Searches for nonnegative block counts {n_i} with
    /// Σ C(i,2)·n_i = C(s,2)·λ; returns one witness assignment (indexed by
    /// allowed size) or `None` when the equation has no solution.
    pub fn solve(&self) -> Option<BTreeMap<usize, usize>> {
        let target = self.target();
        let coefficients: Vec<(usize, usize)> = self
            .allowed_sizes
            .iter()
            .map(|&i| (i, binomial(i, 2)))
            .collect();
        // reachability over 0..=target with the nonzero coefficients as
        // coin values, tracking one witness per reachable value
        let mut witness: Vec<Option<(usize, usize)>> = vec![None; target + 1];
        witness[0] = Some((0, 0));
        for &(size, coefficient) in &coefficients {
            if coefficient == 0 || coefficient > target {
                continue;
            }
            for value in coefficient..=target {
                if witness[value].is_none() && witness[value - coefficient].is_some() {
                    witness[value] = Some((size, coefficient));
                }
            }
        }
        witness[target]?;
        let mut counts: BTreeMap<usize, usize> =
            self.allowed_sizes.iter().map(|&i| (i, 0)).collect();
        let mut remaining = target;
        while remaining > 0 {
            let (size, coefficient) = witness[remaining].expect("reachable by construction");
            *counts.get_mut(&size).expect("size is allowed") += 1;
            remaining -= coefficient;
        }
        Some(counts)
    }
}

/// Whether the counting equation of an instance admits nonnegative
/// integer block counts.
pub fn counting_feasible(instance: &CountingInstance) -> bool {
    instance.solve().is_some()
}

/// Overlap parities implied for one block row by orthogonality with a
/// fixed codeword.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowParity {
    /// |x ∩ row| over all coordinates; even whenever the dot product is 0.
    pub total_overlap: usize,
    /// |x ∩ row| restricted to the border coordinates.
    pub border_overlap: usize,
    /// |x ∩ row| away from the border.
    pub point_overlap: usize,
    /// Parity of the non-border overlap; odd exactly when the border
    /// overlap is odd.
    pub point_overlap_odd: bool,
}

/// Outcome of the orthogonality/parity check of a codeword against a set
/// of block rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    /// Dot products x·row were all zero (guaranteed by self-orthogonality
    /// once the membership preconditions hold).
    pub all_orthogonal: bool,
    /// |x ∩ border|.
    pub x_border_overlap: usize,
    pub rows: Vec<RowParity>,
}

/// Checks that a codeword is orthogonal to every block row — automatic in
/// a self-orthogonal code containing both — and reports the overlap
/// parities this forces: with the border split off, the non-border
/// overlap of x with each row is odd exactly when their border overlap
/// is. Errors when x or a row lies outside the code, or the code is not
/// self-orthogonal.
pub fn parity_constraint_check(
    code: &LinearCode,
    x: &BitVector,
    block_rows: &BitMatrix,
    border: &BitVector,
) -> Result<ParityReport> {
    if !code.is_self_orthogonal() {
        return Err(Error::Precondition(
            "parity check needs a self-orthogonal code".into(),
        ));
    }
    if !code.contains(x) {
        return Err(Error::Membership);
    }
    let mut rows = Vec::with_capacity(block_rows.rows().len());
    let mut all_orthogonal = true;
    for row in block_rows.rows() {
        if !code.contains(row) {
            return Err(Error::Membership);
        }
        if x.dot(row)? {
            all_orthogonal = false;
        }
        let total_overlap = x.overlap(row)?;
        let both = x.overlap(border)?.min(row.overlap(border)?);
        // border overlap of the pair: coordinates where x, row, and the
        // border mask all agree
        let mut border_overlap = 0;
        if both > 0 {
            for coord in border.support() {
                if x.get(coord) && row.get(coord) {
                    border_overlap += 1;
                }
            }
        }
        let point_overlap = total_overlap - border_overlap;
        rows.push(RowParity {
            total_overlap,
            border_overlap,
            point_overlap,
            point_overlap_odd: point_overlap % 2 == 1,
        });
    }
    Ok(ParityReport {
        all_orthogonal,
        x_border_overlap: x.overlap(border)?,
        rows,
    })
}
