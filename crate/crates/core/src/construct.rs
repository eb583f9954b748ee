//! Constructions of doubly even self-dual codes: seed codes, greedy
//! embedding of a doubly even code into a self-dual one, the neighbor step,
//! and a seeded random walk that samples extremal codes.
//!
//! Everything here is deterministic given the configuration; the walk drives
//! a ChaCha stream with nothing but `next_u64`, so results are reproducible
//! across platforms and releases.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::path::Path;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::codes::{format_generator_matrix, parse_generator_matrix, LinearCode};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, DEFAULT_ENUMERATION_BUDGET};

/// Configuration for [`sample_extremal`] walks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkConfig {
    /// RNG seed; equal seeds give byte-identical samples.
    pub seed: u64,
    /// Neighbor steps per walk.
    pub steps: usize,
    /// Code length, a positive multiple of 8.
    pub target_length: usize,
    /// Codes are retained when their minimum weight equals this value.
    pub target_min_weight: usize,
    /// Additional walks (fresh RNG streams) tried when a walk retains nothing.
    pub max_restarts: usize,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            seed: 1,
            steps: 100,
            target_length: 40,
            target_min_weight: 8,
            max_restarts: 4,
        }
    }
}

/// Looks up a named seed code: `e8` is the extended Hamming code and
/// `e8_k` the direct sum of `k` copies (so `e8_5` has length 40).
pub fn seed_code(name: &str) -> Result<LinearCode> {
    let e8 = parse_generator_matrix(include_str!("../data/e8.code"))
        .expect("embedded e8 generator matrix parses");
    if name == "e8" {
        return Ok(e8);
    }
    if let Some(suffix) = name.strip_prefix("e8_") {
        if let Ok(k) = suffix.parse::<usize>() {
            if k >= 1 {
                let mut sum = e8.clone();
                for _ in 1..k {
                    sum = direct_sum(&sum, &e8);
                }
                return Ok(sum);
            }
        }
    }
    Err(Error::UnknownSeed(name.to_string()))
}

/// Block-diagonal sum: codewords are concatenations of a codeword of `a`
/// and a codeword of `b`.
pub fn direct_sum(a: &LinearCode, b: &LinearCode) -> LinearCode {
    let n = a.length() + b.length();
    let mut rows = Vec::with_capacity(a.dimension() + b.dimension());
    for r in a.basis().rows() {
        let mut v = BitVector::zeros(n);
        for i in r.support() {
            v.set(i, true);
        }
        rows.push(v);
    }
    for r in b.basis().rows() {
        let mut v = BitVector::zeros(n);
        for i in r.support() {
            v.set(a.length() + i, true);
        }
        rows.push(v);
    }
    LinearCode::from_generators(n, rows)
}

/// Extends a doubly even code of length `n ≡ 0 (mod 8)` to a doubly even
/// self-dual code containing it, by repeatedly adjoining the first doubly
/// even coset representative of the code inside its dual (Gray-code order
/// over a complement basis). Already self-dual inputs come back unchanged.
pub fn embed_doubly_even_self_dual(code: &LinearCode) -> Result<LinearCode> {
    embed_doubly_even_self_dual_budgeted(code, DEFAULT_ENUMERATION_BUDGET)
}

/// [`embed_doubly_even_self_dual`] with an explicit enumeration budget;
/// the coset scans visit at most `2^budget` vectors in total.
pub fn embed_doubly_even_self_dual_budgeted(code: &LinearCode, budget: usize) -> Result<LinearCode> {
    let n = code.length();
    if n == 0 || n % 8 != 0 {
        return Err(Error::NoSelfDualLength { length: n });
    }
    if !code.is_doubly_even() {
        return Err(Error::Precondition(
            "embedding requires a doubly even (hence self-orthogonal) code".into(),
        ));
    }
    let mut visits_left = 1u64
        .checked_shl(budget.min(63) as u32)
        .unwrap_or(u64::MAX);
    let mut current = code.clone();
    while 2 * current.dimension() < n {
        let v = first_doubly_even_coset_rep(&current, &mut visits_left)?;
        debug_assert!(v.weight() % 4 == 0 && !current.contains(&v));
        let mut rows = current.basis().rows().to_vec();
        rows.push(v);
        current = LinearCode::from_generators(n, rows);
    }
    debug_assert!(current.is_self_dual() && current.is_doubly_even());
    Ok(current)
}

/// Scans nonzero combinations of a complement basis of `code` inside its
/// dual, in Gray-code order, for a vector of weight ≡ 0 (mod 4). Weight
/// mod 4 is constant on each coset of a doubly even code, so checking one
/// representative per coset is exhaustive.
fn first_doubly_even_coset_rep(code: &LinearCode, visits_left: &mut u64) -> Result<BitVector> {
    let n = code.length();
    let dual = code.dual();

    // Complement basis: dual basis rows that are independent from the code.
    let mut stack = code.basis().rows().to_vec();
    let mut complement = Vec::new();
    let mut reduced = BitMatrix::from_rows(n, stack.clone()).rref();
    for row in dual.basis().rows() {
        let mut r = row.clone();
        for (b, &p) in reduced.matrix.rows().iter().zip(&reduced.pivot_columns) {
            if r.get(p) {
                r.xor_assign_raw(b);
            }
        }
        if !r.is_zero() {
            complement.push(r.clone());
            stack.push(r);
            reduced = BitMatrix::from_rows(n, stack.clone()).rref();
        }
    }
    debug_assert_eq!(complement.len(), dual.dimension() - code.dimension());

    let k = complement.len();
    if k >= 64 {
        return Err(Error::EnumerationBudget {
            dimension: k,
            budget: 63,
        });
    }
    let mut current = BitVector::zeros(n);
    for t in 1..(1u64 << k) {
        if *visits_left == 0 {
            return Err(Error::EnumerationBudget {
                dimension: k,
                budget: DEFAULT_ENUMERATION_BUDGET,
            });
        }
        *visits_left -= 1;
        current.xor_assign_raw(&complement[t.trailing_zeros() as usize]);
        if current.weight() % 4 == 0 {
            return Ok(current);
        }
    }
    Err(Error::InternalConsistency(
        "no doubly even coset representative found; the input cannot be doubly even".into(),
    ))
}

/// The neighbor of a doubly even self-dual code `C` with respect to `v`:
/// `⟨C ∩ v⊥, v⟩`. Requires `wt(v) ≡ 0 (mod 4)` and `v ∉ C`; the result is
/// again doubly even self-dual.
pub fn neighbor(code: &LinearCode, v: &BitVector) -> Result<LinearCode> {
    if v.len() != code.length() {
        return Err(Error::DimensionMismatch {
            left: v.len(),
            right: code.length(),
        });
    }
    if !code.is_self_dual() || !code.is_doubly_even() {
        return Err(Error::Precondition(
            "neighbor step requires a doubly even self-dual code".into(),
        ));
    }
    if v.weight() % 4 != 0 {
        return Err(Error::Precondition(format!(
            "neighbor vector must have weight ≡ 0 (mod 4), got {}",
            v.weight()
        )));
    }
    if code.contains(v) {
        return Err(Error::DegenerateNeighbor);
    }

    // C ∩ v⊥: keep rows orthogonal to v; fold the rest onto one pivot row.
    let mut orthogonal = Vec::new();
    let mut pivot: Option<BitVector> = None;
    for row in code.basis().rows() {
        if !row.dot(v).expect("equal lengths") {
            orthogonal.push(row.clone());
        } else {
            match &pivot {
                None => pivot = Some(row.clone()),
                Some(p) => orthogonal.push(row.add(p).expect("equal lengths")),
            }
        }
    }
    // v ∉ C = C⊥ means some basis row meets v oddly.
    debug_assert!(pivot.is_some());
    orthogonal.push(v.clone());
    let result = LinearCode::from_generators(code.length(), orthogonal);
    debug_assert_eq!(result.dimension(), code.dimension());
    debug_assert!(result.is_self_dual() && result.is_doubly_even());
    Ok(result)
}

/// Samples doubly even self-dual codes of length `target_length` whose
/// minimum weight equals `target_min_weight`, by a seeded random neighbor
/// walk starting at the direct sum of extended Hamming codes. Every visited
/// code that meets the target is retained (exact duplicates dropped), in
/// visit order. A walk that retains nothing is restarted on a fresh RNG
/// stream up to `max_restarts` times before giving up.
pub fn sample_extremal(config: &WalkConfig) -> Result<Vec<LinearCode>> {
    let n = config.target_length;
    if n == 0 || n % 8 != 0 {
        return Err(Error::NoSelfDualLength { length: n });
    }
    // every step enumerates the 2^(n/2) codewords to test the minimum weight
    if n / 2 > DEFAULT_ENUMERATION_BUDGET {
        return Err(Error::EnumerationBudget {
            dimension: n / 2,
            budget: DEFAULT_ENUMERATION_BUDGET,
        });
    }
    let walks = 1 + config.max_restarts;
    for walk_index in 0..walks {
        let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
        rng.set_stream(walk_index as u64);
        let found = run_walk(&mut rng, config)?;
        if !found.is_empty() {
            return Ok(found);
        }
    }
    Err(Error::SamplingExhausted {
        target: config.target_min_weight,
        walks,
        steps: config.steps,
    })
}

/// [`sample_extremal`] specialized to extremal [40,20,8] codes: requires
/// `target_length == 40` and `target_min_weight == 8` (the extremal bound
/// at length 40) so every returned code is extremal.
pub fn sample_extremal_40(config: &WalkConfig) -> Result<Vec<LinearCode>> {
    if config.target_length != 40 || config.target_min_weight != 8 {
        return Err(Error::Precondition(format!(
            "sample_extremal_40 needs target_length 40 and target_min_weight 8, \
             got {} and {}",
            config.target_length, config.target_min_weight
        )));
    }
    sample_extremal(config)
}

/// Non-improving moves tolerated before one is forced, to escape plateaus.
const STALL_LIMIT: usize = 12;

fn run_walk(rng: &mut ChaCha12Rng, config: &WalkConfig) -> Result<Vec<LinearCode>> {
    let n = config.target_length;
    let target = config.target_min_weight;
    let mut code = seed_code(&format!("e8_{}", n / 8))?;
    let (mut light, min) = weight_profile(&code, target)?;
    let mut found = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    if light == 0 && min == target && seen.insert(fingerprint(&code)) {
        found.push(code.clone());
    }
    let mut stall = 0usize;
    for _ in 0..config.steps {
        let Some(v) = propose(rng, &code) else {
            stall += 1;
            continue;
        };
        let candidate = neighbor(&code, &v)?;
        let (cand_light, cand_min) = weight_profile(&candidate, target)?;
        // descend on the number of too-light codewords; a forced move after
        // STALL_LIMIT rejections keeps the walk from freezing on a plateau
        if cand_light <= light || stall >= STALL_LIMIT {
            code = candidate;
            light = cand_light;
            stall = 0;
            if light == 0 && cand_min == target && seen.insert(fingerprint(&code)) {
                found.push(code.clone());
            }
        } else {
            stall += 1;
        }
    }
    Ok(found)
}

/// Proposal: a uniformly random vector of weight ≡ 0 (mod 4) outside the
/// code. Uniformity matters: the weight-4 codewords of the neighbor ⟨C∩v⊥,v⟩
/// are exactly the weight-4 vectors of the coset v + C, so vectors anchored
/// near a codeword (a codeword plus a small perturbation, say) drag a light
/// vector along in their coset and the walk can never reach minimum weight 8.
/// A uniform coset almost never contains one. Only `next_u64` touches the RNG.
fn propose(rng: &mut ChaCha12Rng, code: &LinearCode) -> Option<BitVector> {
    let n = code.length();
    for _ in 0..64 {
        let mut v = BitVector::zeros(n);
        let mut word = 0u64;
        for coord in 1..=n {
            let bit = (coord - 1) % 64;
            if bit == 0 {
                word = rng.next_u64();
            }
            v.set(coord, word >> bit & 1 == 1);
        }
        if v.weight() % 4 == 0 && !v.is_zero() && !code.contains(&v) {
            return Some(v);
        }
    }
    None
}

/// One full scan of the code: the number of nonzero codewords lighter than
/// `target`, and the minimum nonzero weight.
fn weight_profile(code: &LinearCode, target: usize) -> Result<(u64, usize)> {
    let mut light = 0u64;
    let mut min = usize::MAX;
    code.for_each_codeword(DEFAULT_ENUMERATION_BUDGET, |v| {
        let w = v.weight();
        if w > 0 {
            if w < target {
                light += 1;
            }
            if w < min {
                min = w;
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok((light, min))
}

fn fingerprint(code: &LinearCode) -> Vec<u64> {
    let mut words = Vec::new();
    for row in code.basis().rows() {
        words.extend_from_slice(row.words());
    }
    words
}

/// Reads a generator matrix file.
pub fn load_code(path: &Path) -> Result<LinearCode> {
    parse_generator_matrix(&std::fs::read_to_string(path)?)
}

/// Writes a generator matrix file that [`load_code`] round-trips.
pub fn save_code(code: &LinearCode, path: &Path) -> Result<()> {
    Ok(std::fs::write(path, format_generator_matrix(code))?)
}
