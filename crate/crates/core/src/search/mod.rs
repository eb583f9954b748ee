//! The two-stage clique search over candidate block sets.
//!
//! For a length-40 code and an admissible coordinate triple T, the
//! candidate blocks are the supports-minus-T of the weight-12 codewords
//! containing T. A hypothetical design with 8 blocks through every point
//! pair would place, for each coordinate pair (i, j) outside T, an
//! 8-clique in the graph whose vertices are the candidate blocks through
//! (i, j) and whose edges join blocks meeting in exactly 3 points. Stage 1
//! looks for a pair with no such clique; stage 2 fixes a base pair with
//! the fewest 8-cliques and demands that some base clique K stay
//! compatible — every pair graph restricted to blocks meeting all of K in
//! 1 or 3 points must still have an 8-clique. A triple surviving both
//! stages is reported, never silently dropped.

pub mod graph;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::obstruction;

pub use graph::{count_cliques, enumerate_cliques, has_clique, CliqueCount, PairGraph};

/// Number of blocks through each point pair in the target design, and so
/// the clique size both stages look for.
pub const TARGET_CLIQUE_SIZE: usize = 8;

/// Default bound on cliques counted or enumerated per pair graph.
pub const DEFAULT_CLIQUE_CAP: u64 = 1_000_000;

/// The candidate blocks of one (code, T) task: 9-point subsets of the
/// coordinates outside T, one per weight-12 codeword whose support
/// contains T, in a deterministic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSet {
    /// Identifier attached to verdicts; the pipeline sets it from the
    /// code's file name or index.
    pub code_id: String,
    /// Coordinate count of the underlying code.
    pub n: usize,
    /// The fixed triple, sorted ascending.
    pub t: [usize; 3],
    blocks: Vec<BitVector>,
}

impl CandidateSet {
    /// Builds a candidate set from explicit blocks (1-based point lists).
    /// Blocks must share one size, avoid T, and stay within 1..=n;
    /// repeats are allowed — a block multiset is a legitimate input.
    pub fn from_blocks(
        code_id: &str,
        n: usize,
        t: [usize; 3],
        blocks: Vec<Vec<usize>>,
    ) -> Result<Self> {
        validate_triple(n, &t)?;
        let mut size = None;
        let mut masks = Vec::with_capacity(blocks.len());
        for (index, block) in blocks.iter().enumerate() {
            match size {
                None => size = Some(block.len()),
                Some(k) if k != block.len() => {
                    return Err(Error::Precondition(format!(
                        "candidate block {index} has {} points, expected {k}",
                        block.len()
                    )))
                }
                Some(_) => {}
            }
            let mut mask = BitVector::zeros(n);
            for &point in block {
                if point == 0 || point > n {
                    return Err(Error::Precondition(format!(
                        "candidate block {index} contains point {point}, outside 1..={n}"
                    )));
                }
                if t.contains(&point) {
                    return Err(Error::Precondition(format!(
                        "candidate block {index} meets the fixed triple at {point}"
                    )));
                }
                mask.set(point, true);
            }
            if mask.weight() != block.len() {
                return Err(Error::Precondition(format!(
                    "candidate block {index} repeats a point"
                )));
            }
            masks.push(mask);
        }
        Ok(CandidateSet {
            code_id: code_id.to_string(),
            n,
            t,
            blocks: masks,
        })
    }

    /// The blocks as bit masks, in order.
    pub fn blocks(&self) -> &[BitVector] {
        &self.blocks
    }

    /// Number of candidate blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The 1-based point list of one block, ascending.
    pub fn block_points(&self, index: usize) -> Vec<usize> {
        self.blocks[index].support()
    }

    /// Indices of the blocks containing both i and j, ascending.
    fn members_through(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&b| self.blocks[b].get(i) && self.blocks[b].get(j))
            .collect()
    }

    /// All coordinate pairs outside T, each with its member count,
    /// sorted by ascending count then lexicographically — the fail-fast
    /// scan order shared by both stages.
    fn ordered_pairs(&self) -> Vec<(usize, usize, Vec<usize>)> {
        let coords: Vec<usize> = (1..=self.n).filter(|c| !self.t.contains(c)).collect();
        let mut pairs = Vec::with_capacity(coords.len() * (coords.len() - 1) / 2);
        for (a, &i) in coords.iter().enumerate() {
            for &j in &coords[a + 1..] {
                pairs.push((i, j, self.members_through(i, j)));
            }
        }
        pairs.sort_by(|a, b| (a.2.len(), a.0, a.1).cmp(&(b.2.len(), b.0, b.1)));
        pairs
    }

    fn overlap(&self, a: usize, b: usize) -> usize {
        self.blocks[a].overlap(&self.blocks[b]).expect("equal lengths")
    }
}

fn validate_triple(n: usize, t: &[usize; 3]) -> Result<()> {
    if t[0] == 0 || t[2] > n || t[0] >= t[1] || t[1] >= t[2] {
        return Err(Error::Precondition(format!(
            "triple {t:?} is not an ascending 3-subset of 1..={n}"
        )));
    }
    Ok(())
}

/// Extracts the candidate blocks of a code and triple: the supports of
/// all weight-12 codewords containing T, with T removed, in the packed
/// sorted order of the underlying codewords. The caller attaches a code
/// identifier when verdicts are to be labeled.
pub fn candidate_blocks(code: &LinearCode, t: [usize; 3]) -> Result<CandidateSet> {
    validate_triple(code.length(), &t)?;
    let words = code.codewords_of_weight(12, &t)?;
    Ok(candidate_set_from_words(
        "",
        code.length(),
        t,
        words.iter(),
    ))
}

/// Shared assembly path: strips T from each weight-12 word. Stripping the
/// same three coordinates preserves the packed order, so the result is
/// sorted exactly like the input words.
fn candidate_set_from_words<'a>(
    code_id: &str,
    n: usize,
    t: [usize; 3],
    words: impl Iterator<Item = &'a BitVector>,
) -> CandidateSet {
    let blocks = words
        .map(|word| {
            let mut block = word.clone();
            for &coord in &t {
                block.set(coord, false);
            }
            block
        })
        .collect();
    CandidateSet {
        code_id: code_id.to_string(),
        n,
        t,
        blocks,
    }
}

/// The graph on the candidate blocks through (i, j), with edges between
/// blocks meeting in exactly 3 points.
pub fn pair_graph(x: &CandidateSet, i: usize, j: usize) -> Result<PairGraph> {
    check_pair(x, i, j)?;
    let members = x.members_through(i, j);
    Ok(PairGraph::build((i, j), members, |a, b| x.overlap(a, b) == 3))
}

/// The subgraph of the pair graph induced by blocks compatible with a
/// base clique K: every block must meet every *other* block of K in 1 or
/// 3 points. A block that is itself a member of K is not tested against
/// itself — rejecting it for meeting itself in 9 points would expel the
/// base clique from its own refinement and over-reject genuine designs.
pub fn refined_graph(x: &CandidateSet, i: usize, j: usize, k: &[usize]) -> Result<PairGraph> {
    check_pair(x, i, j)?;
    for &m in k {
        if m >= x.len() {
            return Err(Error::Precondition(format!(
                "clique member {m} is not a candidate block index"
            )));
        }
    }
    let members: Vec<usize> = x
        .members_through(i, j)
        .into_iter()
        .filter(|&b| compatible_with_clique(x, b, k))
        .collect();
    Ok(PairGraph::build((i, j), members, |a, b| x.overlap(a, b) == 3))
}

fn compatible_with_clique(x: &CandidateSet, block: usize, k: &[usize]) -> bool {
    k.iter()
        .all(|&m| m == block || matches!(x.overlap(block, m), 1 | 3))
}

fn check_pair(x: &CandidateSet, i: usize, j: usize) -> Result<()> {
    if i == j || i == 0 || j == 0 || i > x.n || j > x.n {
        return Err(Error::Precondition(format!(
            "({i}, {j}) is not a pair of distinct coordinates of 1..={}",
            x.n
        )));
    }
    if x.t.contains(&i) || x.t.contains(&j) {
        return Err(Error::Precondition(format!(
            "pair ({i}, {j}) meets the fixed triple {:?}",
            x.t
        )));
    }
    Ok(())
}

/// Stage 1 on a prepared candidate set: scans the coordinate pairs
/// outside T in fail-fast order (ascending vertex count, then
/// lexicographic) and returns the first pair whose graph has no 8-clique,
/// or `None` when every pair passes.
pub fn stage1_candidates(x: &CandidateSet) -> Option<(usize, usize)> {
    for (i, j, members) in x.ordered_pairs() {
        if members.len() < TARGET_CLIQUE_SIZE {
            return Some((i, j));
        }
        let graph = PairGraph::build((i, j), members, |a, b| x.overlap(a, b) == 3);
        if !has_clique(&graph, TARGET_CLIQUE_SIZE) {
            return Some((i, j));
        }
    }
    None
}

/// Stage 1 for a code and triple; see [`stage1_candidates`].
pub fn stage1(code: &LinearCode, t: [usize; 3]) -> Result<Option<(usize, usize)>> {
    Ok(stage1_candidates(&candidate_blocks(code, t)?))
}

/// Picks the base pair for stage 2: the coordinate pair whose graph has
/// the fewest cliques of size exactly 8, counting capped at `cap`
/// (capped counts compare above all exact counts), ties broken
/// lexicographically.
pub fn choose_base_pair(x: &CandidateSet, cap: u64) -> (usize, usize) {
    let mut best: Option<(CliqueCount, usize, usize)> = None;
    let coords: Vec<usize> = (1..=x.n).filter(|c| !x.t.contains(c)).collect();
    for (a, &i) in coords.iter().enumerate() {
        for &j in &coords[a + 1..] {
            let graph = PairGraph::build((i, j), x.members_through(i, j), |a, b| {
                x.overlap(a, b) == 3
            });
            let count = count_cliques(&graph, TARGET_CLIQUE_SIZE, cap);
            let key = (count, i, j);
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
    }
    let (_, i, j) = best.expect("at least one coordinate pair outside T");
    (i, j)
}

/// How a (code, T) task was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Some pair graph has no 8-clique; the design cannot exist here.
    ExcludedStage1,
    /// Every base clique fails refinement at some pair; excluded.
    ExcludedStage2,
    /// A base clique stayed compatible at every pair — flagged for manual
    /// escalation, never silently dropped.
    Survivor,
    /// The task (or its whole code) could not be decided.
    Error,
}

/// Witness data attached to a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    /// A surviving base clique: the base pair and the clique's blocks as
    /// sorted point lists.
    Survivor {
        base_pair: [usize; 2],
        clique: Vec<Vec<usize>>,
    },
    /// Stage-1 witness: re-running the clique test on this pair fails.
    Stage1 { pair: [usize; 2] },
    /// Stage-2 summary: the base pair whose cliques were all eliminated.
    Stage2 { base_pair: [usize; 2] },
    /// Error description.
    Message { message: String },
}

/// One line of the verdict stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub code_id: String,
    /// The triple, or `null` for code-level errors.
    #[serde(rename = "T")]
    pub t: Option<[usize; 3]>,
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    /// For stage-2 outcomes, the number of base cliques examined;
    /// `null` where counting is meaningless.
    pub clique_count: Option<u64>,
    /// Wall-clock milliseconds; emitted only when timings are requested,
    /// so default verdict streams are byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Verdict {
    fn excluded_stage1(code_id: &str, t: [usize; 3], pair: (usize, usize)) -> Self {
        Verdict {
            code_id: code_id.to_string(),
            t: Some(t),
            outcome: Outcome::ExcludedStage1,
            witness: Some(Witness::Stage1 {
                pair: [pair.0, pair.1],
            }),
            clique_count: None,
            elapsed_ms: None,
        }
    }

    fn excluded_stage2(code_id: &str, t: [usize; 3], base: (usize, usize), tried: u64) -> Self {
        Verdict {
            code_id: code_id.to_string(),
            t: Some(t),
            outcome: Outcome::ExcludedStage2,
            witness: Some(Witness::Stage2 {
                base_pair: [base.0, base.1],
            }),
            clique_count: Some(tried),
            elapsed_ms: None,
        }
    }

    fn survivor(
        code_id: &str,
        t: [usize; 3],
        base: (usize, usize),
        clique: Vec<Vec<usize>>,
        tried: u64,
    ) -> Self {
        Verdict {
            code_id: code_id.to_string(),
            t: Some(t),
            outcome: Outcome::Survivor,
            witness: Some(Witness::Survivor {
                base_pair: [base.0, base.1],
                clique,
            }),
            clique_count: Some(tried),
            elapsed_ms: None,
        }
    }

    fn error(code_id: &str, t: Option<[usize; 3]>, message: String) -> Self {
        Verdict {
            code_id: code_id.to_string(),
            t,
            outcome: Outcome::Error,
            witness: Some(Witness::Message { message }),
            clique_count: None,
            elapsed_ms: None,
        }
    }
}

/// Stage 2 on a prepared candidate set. Chooses the base pair, lists its
/// 8-cliques (error above `cap`), and eliminates each clique K by finding
/// a pair whose K-refined graph has no 8-clique, scanning pairs in the
/// same fail-fast order as stage 1. A K eliminated by no pair makes the
/// triple a survivor; the witness clique is re-verified to be pairwise
/// adjacent before it is reported.
pub fn stage2_candidates(x: &CandidateSet, cap: u64) -> Result<Verdict> {
    let base = choose_base_pair(x, cap);
    let base_graph = PairGraph::build(base, x.members_through(base.0, base.1), |a, b| {
        x.overlap(a, b) == 3
    });
    let cliques = enumerate_cliques(&base_graph, TARGET_CLIQUE_SIZE, cap)?;
    if cliques.is_empty() {
        return Err(Error::InternalConsistency(format!(
            "stage 2 started on a base pair {base:?} with no 8-clique; stage 1 \
             should have excluded this triple"
        )));
    }
    let coords: Vec<usize> = (1..=x.n).filter(|c| !x.t.contains(c)).collect();
    let mut tried = 0u64;
    'cliques: for clique in &cliques {
        tried += 1;
        // global block indices of the clique
        let k: Vec<usize> = clique.iter().map(|&v| base_graph.members()[v]).collect();
        // blocks compatible with K, computed once per clique
        let eligible: Vec<bool> = (0..x.len())
            .map(|b| compatible_with_clique(x, b, &k))
            .collect();
        let mut pairs: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        for (a, &i) in coords.iter().enumerate() {
            for &j in &coords[a + 1..] {
                let members: Vec<usize> = x
                    .members_through(i, j)
                    .into_iter()
                    .filter(|&b| eligible[b])
                    .collect();
                pairs.push((i, j, members));
            }
        }
        pairs.sort_by(|a, b| (a.2.len(), a.0, a.1).cmp(&(b.2.len(), b.0, b.1)));
        for (i, j, members) in pairs {
            if members.len() < TARGET_CLIQUE_SIZE {
                continue 'cliques; // K eliminated at (i, j)
            }
            let graph = PairGraph::build((i, j), members, |a, b| x.overlap(a, b) == 3);
            if !has_clique(&graph, TARGET_CLIQUE_SIZE) {
                continue 'cliques;
            }
        }
        // K survived every pair: re-verify adjacency before reporting
        for (idx, &a) in clique.iter().enumerate() {
            for &b in &clique[idx + 1..] {
                if !base_graph.adjacent(a, b) {
                    return Err(Error::InternalConsistency(
                        "survivor clique is not pairwise adjacent".into(),
                    ));
                }
            }
        }
        let blocks = k.iter().map(|&b| x.block_points(b)).collect();
        return Ok(Verdict::survivor(&x.code_id, x.t, base, blocks, tried));
    }
    Ok(Verdict::excluded_stage2(&x.code_id, x.t, base, tried))
}

/// Stage 2 for a code and triple; see [`stage2_candidates`].
pub fn stage2(code: &LinearCode, t: [usize; 3]) -> Result<Verdict> {
    stage2_candidates(&candidate_blocks(code, t)?, DEFAULT_CLIQUE_CAP)
}

/// Pipeline settings.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Worker threads; 0 picks the runtime default. The verdict stream is
    /// byte-identical for every value.
    pub workers: usize,
    /// Clique cap per graph for base-pair counting and enumeration.
    pub clique_cap: u64,
    /// Attach per-task elapsed_ms to verdicts (breaks byte-for-byte
    /// stream comparisons; off by default).
    pub timings: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            workers: 0,
            clique_cap: DEFAULT_CLIQUE_CAP,
            timings: false,
        }
    }
}

/// Aggregate counts of one pipeline run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineSummary {
    pub codes: usize,
    pub tasks: usize,
    pub excluded_stage1: usize,
    pub excluded_stage2: usize,
    pub survivors: usize,
    pub errors: usize,
    /// Codes that validated but had no admissible triple at all.
    pub no_admissible: Vec<String>,
}

/// A finished pipeline run: the verdict stream in canonical order plus
/// the summary.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub verdicts: Vec<Verdict>,
    pub summary: PipelineSummary,
}

struct CodePrep {
    id: String,
    // weight-12 codewords, or a validation failure message
    prepared: std::result::Result<PreparedCode, String>,
}

struct PreparedCode {
    weight12: Vec<BitVector>,
    admissible: Vec<[usize; 3]>,
}

fn prepare_code(id: &str, code: &LinearCode) -> CodePrep {
    let fail = |message: String| CodePrep {
        id: id.to_string(),
        prepared: Err(message),
    };
    if code.length() != 40 || code.dimension() != 20 {
        return fail(format!(
            "expected a [40,20] code, got [{},{}]",
            code.length(),
            code.dimension()
        ));
    }
    if !code.is_doubly_even() || !code.is_self_dual() {
        return fail("code is not doubly even self-dual".into());
    }
    // one full scan collects the minimum weight and both codeword lists
    let mut min_weight = usize::MAX;
    let mut weight8: Vec<BitVector> = Vec::new();
    let mut weight12: Vec<BitVector> = Vec::new();
    let scan = code.for_each_codeword(crate::gf2::DEFAULT_ENUMERATION_BUDGET, |word| {
        if !word.is_zero() {
            let w = word.weight();
            min_weight = min_weight.min(w);
            if w == 8 {
                weight8.push(word.clone());
            } else if w == 12 {
                weight12.push(word.clone());
            }
        }
        std::ops::ControlFlow::Continue(())
    });
    if let Err(e) = scan {
        return fail(e.to_string());
    }
    if min_weight != 8 {
        return fail(format!("minimum weight is {min_weight}, expected 8"));
    }
    weight8.sort_unstable();
    weight12.sort_unstable();
    let admissible = obstruction::admissible_triples_from_words(40, &weight8).admissible;
    CodePrep {
        id: id.to_string(),
        prepared: Ok(PreparedCode {
            weight12,
            admissible,
        }),
    }
}

fn run_task(
    code_id: &str,
    prep: &PreparedCode,
    t: [usize; 3],
    config: &PipelineConfig,
) -> Verdict {
    let start = Instant::now();
    let words = prep
        .weight12
        .iter()
        .filter(|w| t.iter().all(|&c| w.get(c)));
    let x = candidate_set_from_words(code_id, 40, t, words);
    let mut verdict = match stage1_candidates(&x) {
        Some(pair) => Verdict::excluded_stage1(code_id, t, pair),
        None => match stage2_candidates(&x, config.clique_cap) {
            Ok(v) => v,
            Err(e) => Verdict::error(code_id, Some(t), e.to_string()),
        },
    };
    if config.timings {
        verdict.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    verdict
}

/// Runs the full pipeline over labeled codes: validates each code,
/// computes its admissible triples, and decides every (code, T) task.
/// Tasks run concurrently but verdicts are emitted in canonical order —
/// codes in input order, triples lexicographically — so the stream is
/// identical for every worker count. Invalid codes contribute one error
/// verdict each; per-task errors are recorded in the stream and the
/// batch continues.
pub fn run_pipeline(codes: &[(String, LinearCode)], config: &PipelineConfig) -> PipelineRun {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .expect("thread pool construction");
    pool.install(|| {
        let preps: Vec<CodePrep> = codes
            .par_iter()
            .map(|(id, code)| prepare_code(id, code))
            .collect();
        // (code index, triple) tasks in canonical order
        let mut tasks: Vec<(usize, [usize; 3])> = Vec::new();
        for (index, prep) in preps.iter().enumerate() {
            if let Ok(p) = &prep.prepared {
                for &t in &p.admissible {
                    tasks.push((index, t));
                }
            }
        }
        let task_verdicts: Vec<Verdict> = tasks
            .par_iter()
            .map(|&(index, t)| {
                let prep = preps[index].prepared.as_ref().expect("only valid codes");
                run_task(&preps[index].id, prep, t, config)
            })
            .collect();
        let mut summary = PipelineSummary {
            codes: codes.len(),
            ..PipelineSummary::default()
        };
        let mut verdicts = Vec::with_capacity(task_verdicts.len() + codes.len());
        let mut cursor = 0;
        for (index, prep) in preps.iter().enumerate() {
            match &prep.prepared {
                Err(message) => {
                    summary.errors += 1;
                    verdicts.push(Verdict::error(&prep.id, None, message.clone()));
                }
                Ok(p) => {
                    if p.admissible.is_empty() {
                        summary.no_admissible.push(prep.id.clone());
                    }
                    while cursor < tasks.len() && tasks[cursor].0 == index {
                        let verdict = task_verdicts[cursor].clone();
                        match verdict.outcome {
                            Outcome::ExcludedStage1 => summary.excluded_stage1 += 1,
                            Outcome::ExcludedStage2 => summary.excluded_stage2 += 1,
                            Outcome::Survivor => summary.survivors += 1,
                            Outcome::Error => summary.errors += 1,
                        }
                        summary.tasks += 1;
                        verdicts.push(verdict);
                        cursor += 1;
                    }
                }
            }
        }
        PipelineRun { verdicts, summary }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::seed_code;
    use crate::designs;

    fn weight12_row(t: [usize; 3], rest: [usize; 9]) -> BitVector {
        let mut support: Vec<usize> = t.to_vec();
        support.extend(rest);
        BitVector::from_support(40, &support)
    }

    #[test]
    fn candidate_blocks_strip_the_triple() {
        let t = [1, 2, 3];
        let row = weight12_row(t, [4, 5, 6, 7, 8, 9, 10, 11, 12]);
        let other = BitVector::from_support(40, &(21..=28).collect::<Vec<_>>());
        let code = LinearCode::from_generators(40, vec![row, other]);
        let x = candidate_blocks(&code, t).unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(x.block_points(0), vec![4, 5, 6, 7, 8, 9, 10, 11, 12]);
        assert_eq!(x.t, t);
        // no weight-12 word contains this triple
        assert!(candidate_blocks(&code, [21, 22, 29]).unwrap().is_empty());
        // malformed triples are rejected
        assert!(candidate_blocks(&code, [3, 2, 1]).is_err());
        assert!(candidate_blocks(&code, [0, 1, 2]).is_err());
        assert!(candidate_blocks(&code, [1, 2, 41]).is_err());
    }

    #[test]
    fn from_blocks_validation() {
        let t = [4, 5, 6];
        assert!(CandidateSet::from_blocks("x", 6, t, vec![vec![1, 2, 3]]).is_ok());
        // duplicates are allowed
        let dup = CandidateSet::from_blocks("x", 6, t, vec![vec![1, 2, 3]; 4]).unwrap();
        assert_eq!(dup.len(), 4);
        // ragged sizes, points in T, out-of-range points, repeats: rejected
        assert!(CandidateSet::from_blocks("x", 6, t, vec![vec![1, 2, 3], vec![1, 2]]).is_err());
        assert!(CandidateSet::from_blocks("x", 6, t, vec![vec![1, 2, 4]]).is_err());
        assert!(CandidateSet::from_blocks("x", 6, t, vec![vec![1, 2, 7]]).is_err());
        assert!(CandidateSet::from_blocks("x", 6, t, vec![vec![1, 1, 2]]).is_err());
    }

    #[test]
    fn pair_graph_edges_match_intersection_rule() {
        // blocks sharing {1,2,7}: intersection 3 → edge
        let x = CandidateSet::from_blocks(
            "x",
            20,
            [18, 19, 20],
            vec![
                vec![1, 2, 3, 4, 5, 6, 7, 8, 9],
                vec![1, 2, 7, 10, 11, 12, 13, 14, 15],
            ],
        )
        .unwrap();
        let g = pair_graph(&x, 1, 2).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.edge_count(), 1);

        // blocks sharing exactly {1,2}: intersection 2 → no edge
        let y = CandidateSet::from_blocks(
            "y",
            20,
            [18, 19, 20],
            vec![
                vec![1, 2, 3, 4, 5, 6, 7, 8, 9],
                vec![1, 2, 10, 11, 12, 13, 14, 15, 16],
            ],
        )
        .unwrap();
        let g = pair_graph(&y, 1, 2).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.edge_count(), 0);

        // vertices require both coordinates
        let g = pair_graph(&y, 3, 10).unwrap();
        assert_eq!(g.order(), 0);

        // pairs meeting T are rejected
        assert!(pair_graph(&y, 18, 1).is_err());
        assert!(pair_graph(&y, 1, 1).is_err());
        assert!(pair_graph(&y, 0, 1).is_err());
    }

    #[test]
    fn stage1_on_empty_candidates_blames_first_pair() {
        let x = CandidateSet::from_blocks("x", 40, [38, 39, 40], vec![]).unwrap();
        assert_eq!(stage1_candidates(&x), Some((1, 2)));
    }

    #[test]
    fn stage1_witness_is_recheckable_and_minimal_in_order() {
        // pairs inside {1,2,3} have K8 graphs; every other pair is empty
        let x = CandidateSet::from_blocks(
            "x",
            6,
            [4, 5, 6],
            vec![vec![1, 2, 3]; 8],
        )
        .unwrap();
        // all pairs (1,2),(1,3),(2,3) pass; there are no other coords
        assert_eq!(stage1_candidates(&x), None);

        // with only 7 copies, no 8-clique exists anywhere
        let x7 = CandidateSet::from_blocks("x", 6, [4, 5, 6], vec![vec![1, 2, 3]; 7]).unwrap();
        let witness = stage1_candidates(&x7).unwrap();
        assert_eq!(witness, (1, 2));
        let g = pair_graph(&x7, witness.0, witness.1).unwrap();
        assert!(!has_clique(&g, TARGET_CLIQUE_SIZE));
    }

    #[test]
    fn refined_graph_filters_incompatible_blocks() {
        // base clique K = {0}: block 1 meets block 0 in 3 points (kept),
        // block 2 meets it in 2 points (dropped)
        let x = CandidateSet::from_blocks(
            "x",
            30,
            [28, 29, 30],
            vec![
                vec![1, 2, 3, 4, 5, 6, 7, 8, 9],
                vec![1, 2, 3, 10, 11, 12, 13, 14, 15],
                vec![1, 2, 10, 16, 17, 18, 19, 20, 21],
            ],
        )
        .unwrap();
        let full = pair_graph(&x, 1, 2).unwrap();
        assert_eq!(full.order(), 3);
        let refined = refined_graph(&x, 1, 2, &[0]).unwrap();
        assert_eq!(refined.members(), &[0, 1]);
        // empty K refines nothing
        let vacuous = refined_graph(&x, 1, 2, &[]).unwrap();
        assert_eq!(vacuous.members(), full.members());
        // K members stay eligible despite meeting themselves in 9 points
        assert!(refined.members().contains(&0));
        assert!(matches!(
            refined_graph(&x, 1, 2, &[17]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn survivor_fixture_passes_both_stages() {
        // eight identical blocks: every pair graph is K8, the single base
        // clique refines to itself everywhere → survivor
        let x = CandidateSet::from_blocks("s", 6, [4, 5, 6], vec![vec![1, 2, 3]; 8]).unwrap();
        assert_eq!(stage1_candidates(&x), None);
        assert_eq!(choose_base_pair(&x, DEFAULT_CLIQUE_CAP), (1, 2));
        let verdict = stage2_candidates(&x, DEFAULT_CLIQUE_CAP).unwrap();
        assert_eq!(verdict.outcome, Outcome::Survivor);
        assert_eq!(verdict.clique_count, Some(1));
        match verdict.witness {
            Some(Witness::Survivor { base_pair, clique }) => {
                assert_eq!(base_pair, [1, 2]);
                assert_eq!(clique, vec![vec![1, 2, 3]; 8]);
            }
            other => panic!("expected survivor witness, got {other:?}"),
        }
    }

    #[test]
    fn base_pair_minimizes_clique_count() {
        // copy classes A = 9×{1,2,3}, B = 8×{1,2,4}, C = 8×{1,3,4} cover
        // every pair of 1..4; distinct classes meet in 2 points (no edge),
        // so per-pair 8-clique counts are (1,2):10, (1,3):10, (1,4):2,
        // (2,3):9, (2,4):1, (3,4):1 — minimum 1, lex tie gives (2,4)
        let mut blocks = vec![vec![1, 2, 3]; 9];
        blocks.extend(vec![vec![1, 2, 4]; 8]);
        blocks.extend(vec![vec![1, 3, 4]; 8]);
        let x = CandidateSet::from_blocks("x", 7, [5, 6, 7], blocks).unwrap();
        assert_eq!(stage1_candidates(&x), None);
        assert_eq!(choose_base_pair(&x, DEFAULT_CLIQUE_CAP), (2, 4));
        // with a cap of 1 the multi-clique pairs become AtLeast(1), which
        // ranks above Exact(1); the choice is unchanged
        assert_eq!(choose_base_pair(&x, 1), (2, 4));
    }

    #[test]
    fn stage2_detects_internal_inconsistency() {
        // no 8-clique anywhere: stage 2 must refuse to run
        let x = CandidateSet::from_blocks("x", 6, [4, 5, 6], vec![vec![1, 2, 3]; 5]).unwrap();
        assert!(matches!(
            stage2_candidates(&x, DEFAULT_CLIQUE_CAP),
            Err(Error::InternalConsistency(_))
        ));
    }

    #[test]
    fn positive_control_never_rejects_a_real_design() {
        // the doubled Fano plane is a genuine quasi-symmetric design with
        // intersection numbers {1,3} and λ = 2 blocks through each pair;
        // embedded as candidate blocks (block size 3 at this scale), every
        // pair graph must contain the λ-clique of its blocks, and refining
        // by that clique must not destroy it
        let fano = designs::parse_design(include_str!("../../data/fano_double.design")).unwrap();
        let blocks: Vec<Vec<usize>> = (0..fano.block_count())
            .map(|i| fano.block_points(i))
            .collect();
        let x = CandidateSet::from_blocks("fano2", 10, [8, 9, 10], blocks).unwrap();
        let lambda = 2;
        for i in 1..=7usize {
            for j in i + 1..=7 {
                let g = pair_graph(&x, i, j).unwrap();
                assert_eq!(g.order(), lambda, "blocks through ({i},{j})");
                assert!(
                    has_clique(&g, lambda),
                    "design blocks through ({i},{j}) must form a {lambda}-clique"
                );
                // refine by the clique of blocks through (1,2): the true
                // design survives the analogue of condition (4)
                let base = pair_graph(&x, 1, 2).unwrap();
                let k: Vec<usize> = base.members().to_vec();
                let refined = refined_graph(&x, i, j, &k).unwrap();
                assert!(
                    has_clique(&refined, lambda),
                    "refinement must not reject the true design at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn verdict_json_shapes_are_stable() {
        let v = Verdict::excluded_stage1("c00", [1, 2, 5], (4, 6));
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"code_id":"c00","T":[1,2,5],"outcome":"excluded_stage1","witness":{"pair":[4,6]},"clique_count":null}"#
        );
        let v = Verdict::excluded_stage2("c00", [1, 2, 5], (7, 9), 42);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"code_id":"c00","T":[1,2,5],"outcome":"excluded_stage2","witness":{"base_pair":[7,9]},"clique_count":42}"#
        );
        let v = Verdict::survivor("s", [4, 5, 6], (1, 2), vec![vec![1, 2, 3]; 2], 1);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"code_id":"s","T":[4,5,6],"outcome":"survivor","witness":{"base_pair":[1,2],"clique":[[1,2,3],[1,2,3]]},"clique_count":1}"#
        );
        let v = Verdict::error("bad", None, "nope".into());
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"code_id":"bad","T":null,"outcome":"error","witness":{"message":"nope"},"clique_count":null}"#
        );
        // round trip
        let parsed: Verdict = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(parsed, v);
    }

    #[test]
    #[ignore = "timing probe; run with --ignored --nocapture"]
    fn probe_pipeline_timing() {
        use crate::construct::{sample_extremal_40, WalkConfig};
        let config = WalkConfig {
            steps: 10,
            ..WalkConfig::default()
        };
        let codes = sample_extremal_40(&config).unwrap();
        let labeled: Vec<(String, LinearCode)> = codes
            .into_iter()
            .take(2)
            .enumerate()
            .map(|(i, c)| (format!("c{i:02}"), c))
            .collect();
        let start = Instant::now();
        let run = run_pipeline(
            &labeled,
            &PipelineConfig {
                timings: true,
                ..PipelineConfig::default()
            },
        );
        println!(
            "{} codes, {} tasks in {:?}: {:?}",
            run.summary.codes,
            run.summary.tasks,
            start.elapsed(),
            run.summary
        );
        for v in run.verdicts.iter().take(5) {
            println!("{}", serde_json::to_string(v).unwrap());
        }
        let slowest = run.verdicts.iter().filter_map(|v| v.elapsed_ms).max();
        println!("slowest task: {slowest:?} ms");
    }

    #[test]
    fn pipeline_records_invalid_codes_and_continues() {
        let bad = seed_code("e8_5").unwrap(); // minimum weight 4
        let short = seed_code("e8").unwrap(); // wrong length
        let run = run_pipeline(
            &[("bad".into(), bad), ("short".into(), short)],
            &PipelineConfig::default(),
        );
        assert_eq!(run.verdicts.len(), 2);
        assert!(run
            .verdicts
            .iter()
            .all(|v| v.outcome == Outcome::Error && v.t.is_none()));
        assert_eq!(run.summary.errors, 2);
        assert_eq!(run.summary.codes, 2);
        assert_eq!(run.summary.tasks, 0);
        assert!(run.verdicts[0].code_id == "bad" && run.verdicts[1].code_id == "short");
    }
}
