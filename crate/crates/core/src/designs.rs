//! Incidence structures and block-design arithmetic.
//!
//! A design here is a list of equally sized blocks over points `1..=v`,
//! with multiset semantics: the same block may appear several times (the
//! union of several copies of a design is again a design). The module
//! derives the standard 2-design parameters, detects quasi-symmetry, and
//! builds the bordered generator matrices that connect designs to binary
//! codes: the row span of the incidence matrix, optionally extended by one
//! or three all-ones border columns.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::codes::LinearCode;

/// Parameters of a 2-(v, k, λ) design, with the derived replication
/// number `r` and block count `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DesignParams {
    /// Strength of the design; always 2 here.
    pub t: usize,
    /// Number of points.
    pub v: usize,
    /// Block size.
    pub k: usize,
    /// Number of blocks through each point pair.
    pub lambda: usize,
    /// Number of blocks: b = v·r / k.
    pub b: usize,
    /// Number of blocks through each point: r = λ(v−1)/(k−1).
    pub r: usize,
}

/// Derives the full parameter set of a 2-(v, k, λ) design.
///
/// Requires v > k > 2 and exact divisions for r = λ(v−1)/(k−1) and
/// b = v·r/k; anything else is an infeasible parameter set.
pub fn params_from(v: usize, k: usize, lambda: usize) -> Result<DesignParams> {
    if k <= 2 || v <= k || lambda == 0 {
        return Err(Error::InfeasibleParameters(format!(
            "need v > k > 2 and lambda > 0, got v={v} k={k} lambda={lambda}"
        )));
    }
    let r_num = lambda * (v - 1);
    if r_num % (k - 1) != 0 {
        return Err(Error::InfeasibleParameters(format!(
            "r = {lambda}({v}-1)/({k}-1) = {r_num}/{} is not an integer",
            k - 1
        )));
    }
    let r = r_num / (k - 1);
    let b_num = v * r;
    if b_num % k != 0 {
        return Err(Error::InfeasibleParameters(format!(
            "b = {v}·{r}/{k} = {b_num}/{k} is not an integer"
        )));
    }
    Ok(DesignParams {
        t: 2,
        v,
        k,
        lambda,
        b: b_num / k,
        r,
    })
}

/// A finite incidence structure: points `1..=v` and an ordered multiset of
/// equally sized blocks, each stored as a bit mask of length `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    v: usize,
    block_size: Option<usize>,
    blocks: Vec<BitVector>,
}

impl IncidenceStructure {
    /// Builds a structure from explicit point lists (1-based). Every block
    /// must have the same size, contain no repeated point, and stay within
    /// `1..=v`. An empty block list is allowed.
    pub fn new(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if v == 0 {
            return Err(Error::Precondition("a design needs at least one point".into()));
        }
        let mut size = None;
        let mut masks = Vec::with_capacity(blocks.len());
        for (index, block) in blocks.iter().enumerate() {
            match size {
                None => size = Some(block.len()),
                Some(k) if k != block.len() => {
                    return Err(Error::Precondition(format!(
                        "block {} has {} points, expected {k}",
                        index + 1,
                        block.len()
                    )))
                }
                Some(_) => {}
            }
            let mut mask = BitVector::zeros(v);
            for &point in block {
                if point == 0 || point > v {
                    return Err(Error::Precondition(format!(
                        "block {} contains point {point}, outside 1..={v}",
                        index + 1
                    )));
                }
                if mask.get(point) {
                    return Err(Error::Precondition(format!(
                        "block {} repeats point {point}",
                        index + 1
                    )));
                }
                mask.set(point, true);
            }
            masks.push(mask);
        }
        Ok(IncidenceStructure {
            v,
            block_size: size,
            blocks: masks,
        })
    }

    /// Number of points.
    pub fn points(&self) -> usize {
        self.v
    }

    /// Number of blocks (duplicates counted).
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Common block size, or `None` for an empty block list.
    pub fn block_size(&self) -> Option<usize> {
        self.block_size
    }

    /// The blocks as bit masks of length `v`, in insertion order.
    pub fn blocks(&self) -> &[BitVector] {
        &self.blocks
    }

    /// The 1-based point list of one block, ascending.
    pub fn block_points(&self, index: usize) -> Vec<usize> {
        self.blocks[index].support()
    }

    /// Whether every pair of distinct points lies in exactly `lambda`
    /// blocks.
    pub fn is_2design(&self, lambda: usize) -> bool {
        for i in 1..=self.v {
            for j in i + 1..=self.v {
                let count = self
                    .blocks
                    .iter()
                    .filter(|b| b.get(i) && b.get(j))
                    .count();
                if count != lambda {
                    return false;
                }
            }
        }
        true
    }

    /// The sorted set of pairwise block intersection sizes. Blocks are
    /// distinguished by position, so a repeated block contributes the full
    /// block size. Needs at least two blocks to be meaningful.
    pub fn intersection_numbers(&self) -> Result<Vec<usize>> {
        if self.blocks.len() < 2 {
            return Err(Error::DegenerateDesign);
        }
        let mut sizes = Vec::new();
        for (i, a) in self.blocks.iter().enumerate() {
            for b in &self.blocks[i + 1..] {
                let overlap = a.overlap(b).expect("equal lengths");
                if !sizes.contains(&overlap) {
                    sizes.push(overlap);
                }
            }
        }
        sizes.sort_unstable();
        Ok(sizes)
    }

    /// Returns the intersection pair `(x, y)` with x < y when the blocks
    /// meet in exactly two distinct sizes, `None` otherwise. Only
    /// meaningful on 2-designs.
    pub fn is_quasi_symmetric(&self) -> Result<Option<(usize, usize)>> {
        let numbers = self.intersection_numbers()?;
        match numbers.as_slice() {
            [x, y] => Ok(Some((*x, *y))),
            _ => Ok(None),
        }
    }

    /// The b × v incidence matrix over GF(2): row i is block i's mask.
    pub fn incidence_matrix(&self) -> BitMatrix {
        let mut matrix = BitMatrix::new(self.v);
        for block in &self.blocks {
            matrix.push_row(block.clone());
        }
        matrix
    }

    /// The code spanned by the blocks, each row extended by `border`
    /// all-ones columns (border ∈ {0, 1, 3}), of length v + border.
    ///
    /// Border 0 is the row span of the incidence matrix itself; border 1
    /// appends one all-ones column; border 3 appends three.
    pub fn bordered_code(&self, border: usize) -> Result<LinearCode> {
        if !matches!(border, 0 | 1 | 3) {
            return Err(Error::Precondition(format!(
                "border must be 0, 1, or 3, got {border}"
            )));
        }
        let length = self.v + border;
        let mut rows = Vec::with_capacity(self.blocks.len());
        for block in &self.blocks {
            let mut row = BitVector::zeros(length);
            for point in block.support() {
                row.set(point, true);
            }
            for extra in self.v + 1..=length {
                row.set(extra, true);
            }
            rows.push(row);
        }
        Ok(LinearCode::from_generators(length, rows))
    }
}

/// Parses the design text format: a header `v b`, then `b` lines of
/// space-separated 1-based point indices (one block per line, all the same
/// size). `#` starts a comment and blank lines are skipped.
pub fn parse_design(text: &str) -> Result<IncidenceStructure> {
    let mut header: Option<(usize, usize)> = None;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (number, raw) in text.lines().enumerate() {
        let line = number + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match header {
            None => {
                if fields.len() != 2 {
                    return Err(Error::Parse {
                        line,
                        message: format!(
                            "expected header \"v b\", got {} field(s)",
                            fields.len()
                        ),
                    });
                }
                let v = parse_count(fields[0], line, "v")?;
                let b = parse_count(fields[1], line, "b")?;
                if v == 0 {
                    return Err(Error::Parse {
                        line,
                        message: "point count v must be positive".into(),
                    });
                }
                header = Some((v, b));
            }
            Some((v, b)) => {
                if blocks.len() == b {
                    return Err(Error::Parse {
                        line,
                        message: format!("more than {b} block lines"),
                    });
                }
                let mut block = Vec::with_capacity(fields.len());
                for field in fields {
                    let point = parse_count(field, line, "point")?;
                    if point == 0 || point > v {
                        return Err(Error::Parse {
                            line,
                            message: format!("point {point} outside 1..={v}"),
                        });
                    }
                    if block.contains(&point) {
                        return Err(Error::Parse {
                            line,
                            message: format!("repeated point {point} in block"),
                        });
                    }
                    block.push(point);
                }
                if let Some(first) = blocks.first() {
                    if first.len() != block.len() {
                        return Err(Error::Parse {
                            line,
                            message: format!(
                                "block has {} points, expected {}",
                                block.len(),
                                first.len()
                            ),
                        });
                    }
                }
                blocks.push(block);
            }
        }
    }
    let Some((v, b)) = header else {
        return Err(Error::Parse {
            line: text.lines().count() + 1,
            message: "missing header line \"v b\"".into(),
        });
    };
    if blocks.len() != b {
        return Err(Error::Parse {
            line: text.lines().count() + 1,
            message: format!("expected {b} blocks, found {}", blocks.len()),
        });
    }
    IncidenceStructure::new(v, blocks)
}

fn parse_count(field: &str, line: usize, what: &str) -> Result<usize> {
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} value {field:?}"),
    })
}

/// Formats a structure in the text format accepted by [`parse_design`].
pub fn format_design(design: &IncidenceStructure) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", design.points(), design.block_count()).unwrap();
    for index in 0..design.block_count() {
        let points: Vec<String> = design
            .block_points(index)
            .into_iter()
            .map(|p| p.to_string())
            .collect();
        writeln!(out, "{}", points.join(" ")).unwrap();
    }
    out
}

/// Reads a design file in the text format.
pub fn load_design(path: &Path) -> Result<IncidenceStructure> {
    parse_design(&std::fs::read_to_string(path)?)
}

/// Writes a design file in the text format.
pub fn save_design(design: &IncidenceStructure, path: &Path) -> Result<()> {
    Ok(std::fs::write(path, format_design(design))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fano() -> IncidenceStructure {
        IncidenceStructure::new(
            7,
            vec![
                vec![1, 2, 3],
                vec![1, 4, 5],
                vec![1, 6, 7],
                vec![2, 4, 6],
                vec![2, 5, 7],
                vec![3, 4, 7],
                vec![3, 5, 6],
            ],
        )
        .unwrap()
    }

    fn pairs_on_four() -> IncidenceStructure {
        IncidenceStructure::new(
            4,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4],
            ],
        )
        .unwrap()
    }

    #[test]
    fn parameter_arithmetic() {
        let p = params_from(37, 9, 8).unwrap();
        assert_eq!((p.t, p.r, p.b), (2, 36, 148));
        let fano = params_from(7, 3, 1).unwrap();
        assert_eq!((fano.r, fano.b), (3, 7));
        assert!(matches!(
            params_from(8, 3, 1),
            Err(Error::InfeasibleParameters(_))
        ));
        assert!(matches!(
            params_from(9, 9, 1),
            Err(Error::InfeasibleParameters(_))
        ));
        assert!(matches!(
            params_from(7, 2, 1),
            Err(Error::InfeasibleParameters(_))
        ));
    }

    #[test]
    fn params_satisfy_identities() {
        for (v, k, lambda) in [(37, 9, 8), (7, 3, 1), (7, 3, 2), (13, 4, 1), (21, 5, 1)] {
            let p = params_from(v, k, lambda).unwrap();
            assert_eq!(p.r * (p.k - 1), p.lambda * (p.v - 1));
            assert_eq!(p.b * p.k, p.v * p.r);
        }
    }

    #[test]
    fn two_design_detection() {
        assert!(fano().is_2design(1));
        assert!(!fano().is_2design(2));
        let mut blocks: Vec<Vec<usize>> = (0..6).map(|i| fano().block_points(i)).collect();
        blocks.truncate(6);
        let broken = IncidenceStructure::new(7, blocks).unwrap();
        assert!(!broken.is_2design(1));
        assert!(pairs_on_four().is_2design(1));
    }

    #[test]
    fn replication_count_matches_parameters() {
        let p = params_from(7, 3, 1).unwrap();
        let matrix = fano().incidence_matrix();
        for point in 1..=7 {
            let degree = matrix.rows().iter().filter(|row| row.get(point)).count();
            assert_eq!(degree, p.r);
        }
    }

    #[test]
    fn intersection_number_sets() {
        assert_eq!(fano().intersection_numbers().unwrap(), vec![1]);
        assert_eq!(pairs_on_four().intersection_numbers().unwrap(), vec![0, 1]);
        let mut doubled: Vec<Vec<usize>> = Vec::new();
        for _ in 0..2 {
            for i in 0..7 {
                doubled.push(fano().block_points(i));
            }
        }
        let double = IncidenceStructure::new(7, doubled).unwrap();
        assert_eq!(double.intersection_numbers().unwrap(), vec![1, 3]);
        assert!(double.is_2design(2));
        let single = IncidenceStructure::new(7, vec![vec![1, 2, 3]]).unwrap();
        assert!(matches!(
            single.intersection_numbers(),
            Err(Error::DegenerateDesign)
        ));
    }

    #[test]
    fn quasi_symmetry() {
        assert_eq!(fano().is_quasi_symmetric().unwrap(), None);
        assert_eq!(pairs_on_four().is_quasi_symmetric().unwrap(), Some((0, 1)));
        let mut doubled: Vec<Vec<usize>> = Vec::new();
        for _ in 0..2 {
            for i in 0..7 {
                doubled.push(fano().block_points(i));
            }
        }
        let double = IncidenceStructure::new(7, doubled).unwrap();
        assert_eq!(double.is_quasi_symmetric().unwrap(), Some((1, 3)));
    }

    #[test]
    fn incidence_matrix_shape() {
        let matrix = fano().incidence_matrix();
        assert_eq!(matrix.rows().len(), 7);
        assert_eq!(matrix.ncols(), 7);
        for row in matrix.rows() {
            assert_eq!(row.weight(), 3);
        }
        for point in 1..=7 {
            let weight = matrix.rows().iter().filter(|row| row.get(point)).count();
            assert_eq!(weight, 3);
        }
        let single = IncidenceStructure::new(5, vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(format!("{}", single.incidence_matrix().rows()[0]), "11100");
        let empty = IncidenceStructure::new(5, vec![]).unwrap();
        assert_eq!(empty.incidence_matrix().rows().len(), 0);
        assert_eq!(empty.incidence_matrix().ncols(), 5);
    }

    #[test]
    fn bordered_codes_from_fano() {
        let plain = fano().bordered_code(0).unwrap();
        assert_eq!((plain.length(), plain.dimension()), (7, 4));
        assert_eq!(plain.minimum_weight().unwrap(), 3);

        let extended = fano().bordered_code(1).unwrap();
        assert_eq!((extended.length(), extended.dimension()), (8, 4));
        assert!(extended.is_doubly_even());
        assert!(extended.is_self_dual());
        assert_eq!(
            extended.weight_enumerator().unwrap(),
            vec![1, 0, 0, 0, 14, 0, 0, 0, 1]
        );

        let empty = IncidenceStructure::new(7, vec![]).unwrap();
        let zero = empty.bordered_code(3).unwrap();
        assert_eq!((zero.length(), zero.dimension()), (10, 0));

        assert!(matches!(
            fano().bordered_code(2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn bordered_dimension_within_one_of_rank() {
        for design in [fano(), pairs_on_four()] {
            let rank = design.bordered_code(0).unwrap().dimension();
            let bordered = design.bordered_code(1).unwrap().dimension();
            assert!(bordered == rank || bordered == rank + 1);
        }
        // odd block size forces the border bit on every row, so no new
        // dimension can appear
        assert_eq!(
            fano().bordered_code(1).unwrap().dimension(),
            fano().bordered_code(0).unwrap().dimension()
        );
    }

    #[test]
    fn construction_validation() {
        assert!(matches!(
            IncidenceStructure::new(0, vec![]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            IncidenceStructure::new(5, vec![vec![1, 2], vec![3]]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            IncidenceStructure::new(5, vec![vec![1, 6]]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            IncidenceStructure::new(5, vec![vec![2, 2]]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn design_format_round_trip() {
        for design in [fano(), pairs_on_four(), IncidenceStructure::new(5, vec![]).unwrap()] {
            let text = format_design(&design);
            assert_eq!(parse_design(&text).unwrap(), design);
        }
    }

    #[test]
    fn design_parse_errors_carry_line_numbers() {
        let cases: &[(&str, usize)] = &[
            ("", 1),                                  // missing header
            ("7\n", 1),                               // short header
            ("0 1\n1 2 3\n", 1),                      // zero points
            ("7 2\n1 2 3\n", 3),                      // missing block
            ("7 1\n1 2 3\n4 5 6\n", 3),               // extra block
            ("7 2\n1 2 3\n4 5\n", 3),                 // ragged block size
            ("7 1\n1 2 9\n", 2),                      // point out of range
            ("7 1\n1 2 2\n", 2),                      // repeated point
            ("7 1\nx y z\n", 2),                      // non-numeric
        ];
        for (text, expected_line) in cases {
            match parse_design(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(
                    line, *expected_line,
                    "wrong line for input {text:?}"
                ),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn design_files_allow_comments() {
        let text = "# seven points\n7 2  # v b\n\n1 2 3\n4 5 6 # a block\n";
        let design = parse_design(text).unwrap();
        assert_eq!(design.block_count(), 2);
        assert_eq!(design.block_points(1), vec![4, 5, 6]);
    }

    proptest! {
        // relabeling points permutes blocks' contents but preserves all
        // structural invariants
        #[test]
        fn relabeling_preserves_design_structure(seed in 0u64..1000) {
            use rand_core::{RngCore, SeedableRng};
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let mut image: Vec<usize> = (1..=7).collect();
            // Fisher–Yates on the label image
            for i in (1..7).rev() {
                let j = (rng.next_u64() % (i as u64 + 1)) as usize;
                image.swap(i, j);
            }
            let blocks: Vec<Vec<usize>> = (0..7)
                .map(|i| {
                    fano()
                        .block_points(i)
                        .into_iter()
                        .map(|p| image[p - 1])
                        .collect()
                })
                .collect();
            let relabeled = IncidenceStructure::new(7, blocks).unwrap();
            prop_assert!(relabeled.is_2design(1));
            prop_assert_eq!(relabeled.intersection_numbers().unwrap(), vec![1]);
            let code = relabeled.bordered_code(1).unwrap();
            prop_assert!(code.is_self_dual() && code.is_doubly_even());
        }

        #[test]
        fn parse_format_round_trip_random(v in 2usize..10, b in 0usize..6, seed in 0u64..500) {
            use rand_core::{RngCore, SeedableRng};
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let k = 1 + (rng.next_u64() as usize) % v;
            let mut blocks = Vec::new();
            for _ in 0..b {
                let mut points: Vec<usize> = (1..=v).collect();
                for i in (1..v).rev() {
                    let j = (rng.next_u64() % (i as u64 + 1)) as usize;
                    points.swap(i, j);
                }
                points.truncate(k);
                blocks.push(points);
            }
            let design = IncidenceStructure::new(v, blocks).unwrap();
            prop_assert_eq!(parse_design(&format_design(&design)).unwrap(), design);
        }
    }
}
