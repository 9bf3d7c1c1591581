//! The greedy merge loop, its tie-breaking policies and merge traces.
//!
//! At every step all ordered pairs of distinct live chains are scored on the
//! overlap of their actual texts. Candidates attaining the best score are
//! handed to the policy in row-major order of (tail index of the left chain,
//! head index of the right chain).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::strcore::{count_symbol, merge, overlap_len, Dataset, SString, Symbol};

/// Rule picking one pair among the maximum-overlap candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TieBreakPolicy {
    /// First candidate in row-major order.
    FirstPair,
    /// Last candidate in row-major order.
    LastPair,
    /// Candidate whose merged text is lexicographically smallest; equal
    /// merges fall back to row-major order.
    LexicographicMerge,
    /// `SplitMix64(seed)` draws one value per tied step (steps with a single
    /// candidate draw nothing) and picks `value % candidates`.
    SeededRandom(u64),
}

impl TieBreakPolicy {
    /// The four built-in policies, with `seed` for the random one.
    pub fn builtin(seed: u64) -> [TieBreakPolicy; 4] {
        [
            TieBreakPolicy::FirstPair,
            TieBreakPolicy::LastPair,
            TieBreakPolicy::LexicographicMerge,
            TieBreakPolicy::SeededRandom(seed),
        ]
    }

    fn selector(self) -> Selector {
        Selector {
            policy: self,
            rng: match self {
                TieBreakPolicy::SeededRandom(seed) => Some(SplitMix64::new(seed)),
                _ => None,
            },
        }
    }
}

impl fmt::Display for TieBreakPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieBreakPolicy::FirstPair => write!(f, "first"),
            TieBreakPolicy::LastPair => write!(f, "last"),
            TieBreakPolicy::LexicographicMerge => write!(f, "lex"),
            TieBreakPolicy::SeededRandom(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for TieBreakPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(TieBreakPolicy::FirstPair),
            "last" => Ok(TieBreakPolicy::LastPair),
            "lex" => Ok(TieBreakPolicy::LexicographicMerge),
            _ => s
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(TieBreakPolicy::SeededRandom)
                .ok_or_else(|| {
                    Error::InvalidParameters(format!(
                        "unknown policy `{s}` (expected first, last, lex or random:<seed>)"
                    ))
                }),
        }
    }
}

/// One tied pair offered to a policy.
#[derive(Debug, Clone, Copy)]
pub struct Candidate<'a> {
    /// Original index of the last string of the left chain.
    pub left: usize,
    /// Original index of the first string of the right chain.
    pub right: usize,
    pub left_text: &'a SString,
    pub right_text: &'a SString,
    pub overlap_len: usize,
}

struct Selector {
    policy: TieBreakPolicy,
    rng: Option<SplitMix64>,
}

impl Selector {
    fn choose(&mut self, candidates: &[Candidate<'_>]) -> usize {
        debug_assert!(!candidates.is_empty());
        if candidates.len() == 1 {
            return 0;
        }
        match self.policy {
            TieBreakPolicy::FirstPair => 0,
            TieBreakPolicy::LastPair => candidates.len() - 1,
            TieBreakPolicy::LexicographicMerge => candidates
                .iter()
                .map(|c| merge(c.left_text, c.right_text))
                .enumerate()
                .min_by(|(_, a), (_, b)| a.cmp(b))
                .map(|(i, _)| i)
                .unwrap_or(0),
            TieBreakPolicy::SeededRandom(_) => {
                let rng = self
                    .rng
                    .as_mut()
                    .expect("random policy carries a generator");
                rng.below(candidates.len())
            }
        }
    }
}

/// One executed merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeStep {
    /// Original index of the last string of the left chain.
    pub left: usize,
    /// Original index of the first string of the right chain.
    pub right: usize,
    /// Length of the overlap of the two chain texts.
    pub overlap_len: usize,
    /// Important-symbol count of that overlap; set only for frequency runs.
    pub sharp_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeTrace {
    pub steps: Vec<MergeStep>,
    /// 1-based index of the first step whose score is zero.
    pub first_trivial: Option<usize>,
    /// The important symbol for frequency runs, `None` for plain runs.
    pub important: Option<Symbol>,
}

impl MergeTrace {
    /// Step at which merging becomes trivial: `first_trivial`, or one past
    /// the last step when every merge had a positive score.
    pub fn trivial_step(&self) -> usize {
        self.first_trivial.unwrap_or(self.steps.len() + 1)
    }

    /// The quantity greedy maximised at this step.
    pub fn score(&self, step: &MergeStep) -> usize {
        match self.important {
            Some(_) => step.sharp_count.unwrap_or(0),
            None => step.overlap_len,
        }
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.steps.iter().map(|s| (s.left, s.right)).collect()
    }

    fn locate_first_trivial(&self) -> Option<usize> {
        self.steps
            .iter()
            .position(|s| self.score(s) == 0)
            .map(|i| i + 1)
    }
}

/// A merge where the overlap of the chain texts differed from the overlap of
/// the two original endpoint strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointAnomaly {
    pub step: usize,
    pub left: usize,
    pub right: usize,
    pub chain_overlap: usize,
    pub endpoint_overlap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyResult {
    pub superstring: SString,
    /// Original indices in the order they appear in the final chain.
    pub permutation: Vec<usize>,
    pub trace: MergeTrace,
    pub policy: TieBreakPolicy,
    pub endpoint_anomalies: Vec<EndpointAnomaly>,
}

#[derive(Debug, Clone)]
struct Chain {
    members: Vec<usize>,
    text: SString,
}

impl Chain {
    fn head(&self) -> usize {
        self.members[0]
    }

    fn tail(&self) -> usize {
        *self.members.last().expect("chains are non-empty")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Score {
    count: usize,
    len: usize,
}

impl Score {
    fn compute(left: &SString, right: &SString, important: Option<Symbol>) -> Score {
        let len = overlap_len(left, right);
        let count = important.map_or(0, |c| count_symbol(&right[..len], c));
        Score { count, len }
    }

    /// Frequency runs rank by count first; plain runs have count zero.
    fn key(self) -> (usize, usize) {
        (self.count, self.len)
    }
}

/// Greedy on plain overlap lengths.
pub fn run_greedy(d: &Dataset, policy: TieBreakPolicy) -> GreedyResult {
    run(d, None, policy)
}

/// Greedy on important-symbol counts, ties broken by overlap length and then
/// by `policy`. A step is trivial once its overlap holds no important symbol.
pub fn run_greedy_sharp(d: &Dataset, important: Symbol, policy: TieBreakPolicy) -> GreedyResult {
    run(d, Some(important), policy)
}

fn run(d: &Dataset, important: Option<Symbol>, policy: TieBreakPolicy) -> GreedyResult {
    let n = d.len();
    let mut chains: Vec<Option<Chain>> = d
        .strings()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Some(Chain {
                members: vec![i],
                text: s.clone(),
            })
        })
        .collect();
    // Scores between chain slots; a slot is invalidated when its chain changes.
    let mut cache: Vec<Vec<Option<Score>>> = vec![vec![None; n]; n];
    let mut selector = policy.selector();
    let mut steps = Vec::with_capacity(n.saturating_sub(1));
    let mut anomalies = Vec::new();

    for step in 1..n {
        let mut live: Vec<usize> = (0..n).filter(|&i| chains[i].is_some()).collect();
        live.sort_by_key(|&i| chains[i].as_ref().map(Chain::tail));

        let mut best: Option<Score> = None;
        let mut tied: Vec<(usize, usize)> = Vec::new();
        for &a in &live {
            for &b in &live {
                if a == b {
                    continue;
                }
                let score = *cache[a][b].get_or_insert_with(|| {
                    let (ca, cb) = (chains[a].as_ref().unwrap(), chains[b].as_ref().unwrap());
                    Score::compute(&ca.text, &cb.text, important)
                });
                match best.map(|s| score.key().cmp(&s.key())) {
                    None | Some(std::cmp::Ordering::Greater) => {
                        best = Some(score);
                        tied.clear();
                        tied.push((a, b));
                    }
                    Some(std::cmp::Ordering::Equal) => tied.push((a, b)),
                    Some(std::cmp::Ordering::Less) => {}
                }
            }
        }
        let best = best.expect("at least two live chains");
        let chain = |i: usize| chains[i].as_ref().unwrap();
        tied.sort_by_key(|&(a, b)| (chain(a).tail(), chain(b).head()));
        let candidates: Vec<Candidate<'_>> = tied
            .iter()
            .map(|&(a, b)| Candidate {
                left: chain(a).tail(),
                right: chain(b).head(),
                left_text: &chain(a).text,
                right_text: &chain(b).text,
                overlap_len: best.len,
            })
            .collect();
        let pick = selector.choose(&candidates);
        let (a, b) = tied[pick];

        let (left, right) = (chain(a).tail(), chain(b).head());
        let endpoint_overlap = overlap_len(d.get(left), d.get(right));
        if endpoint_overlap != best.len {
            anomalies.push(EndpointAnomaly {
                step,
                left,
                right,
                chain_overlap: best.len,
                endpoint_overlap,
            });
        }
        steps.push(MergeStep {
            left,
            right,
            overlap_len: best.len,
            sharp_count: important.map(|_| best.count),
        });

        let right_chain = chains[b].take().unwrap();
        let left_chain = chains[a].as_mut().unwrap();
        left_chain.text = merge(&left_chain.text, &right_chain.text);
        left_chain.members.extend(right_chain.members);
        for k in 0..n {
            cache[a][k] = None;
            cache[k][a] = None;
            cache[b][k] = None;
            cache[k][b] = None;
        }
    }

    let last = chains
        .into_iter()
        .flatten()
        .next()
        .expect("one chain remains");
    let mut trace = MergeTrace {
        steps,
        first_trivial: None,
        important,
    };
    trace.first_trivial = trace.locate_first_trivial();
    GreedyResult {
        superstring: last.text,
        permutation: last.members,
        trace,
        policy,
        endpoint_anomalies: anomalies,
    }
}

/// Replays the merge pairs of a trace on `d`, returning the final chain.
///
/// Each pair must name the tail of one live chain and the head of another.
/// Fails if it does not.
pub fn replay_pairs(d: &Dataset, pairs: &[(usize, usize)]) -> Result<(SString, Vec<usize>)> {
    let mut replay = Replay::new(d);
    for &(l, r) in pairs {
        replay.merge(l, r)?;
    }
    replay.finish()
}

/// Incremental replay of merge pairs over the chains of a dataset.
#[derive(Debug, Clone)]
pub struct Replay {
    chains: Vec<Chain>,
}

impl Replay {
    pub fn new(d: &Dataset) -> Self {
        Replay {
            chains: d
                .strings()
                .iter()
                .enumerate()
                .map(|(i, s)| Chain {
                    members: vec![i],
                    text: s.clone(),
                })
                .collect(),
        }
    }

    fn find(&self, l: usize, r: usize) -> Result<(usize, usize)> {
        let a = self.chains.iter().position(|c| c.tail() == l);
        let b = self.chains.iter().position(|c| c.head() == r);
        match (a, b) {
            (Some(a), Some(b)) if a != b => Ok((a, b)),
            _ => Err(Error::InvalidTrace(format!(
                "({l}, {r}) is not a (tail, head) pair of distinct live chains"
            ))),
        }
    }

    /// Overlap of the chain ending in `l` with the chain starting at `r`.
    pub fn overlap_of(&self, l: usize, r: usize) -> Result<usize> {
        let (a, b) = self.find(l, r)?;
        Ok(overlap_len(&self.chains[a].text, &self.chains[b].text))
    }

    /// `(tail, head, overlap)` for every ordered pair of distinct live
    /// chains, in row-major order of (tail, head).
    pub fn pair_overlaps(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (a, ca) in self.chains.iter().enumerate() {
            for (b, cb) in self.chains.iter().enumerate() {
                if a != b {
                    out.push((ca.tail(), cb.head(), overlap_len(&ca.text, &cb.text)));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Largest overlap between any two distinct live chains.
    pub fn max_overlap(&self) -> usize {
        self.pair_overlaps()
            .into_iter()
            .map(|(_, _, k)| k)
            .max()
            .unwrap_or(0)
    }

    pub fn live(&self) -> usize {
        self.chains.len()
    }

    /// Merges and returns the text overlap that was used.
    pub fn merge(&mut self, l: usize, r: usize) -> Result<usize> {
        let (a, b) = self.find(l, r)?;
        let right = self.chains[b].clone();
        let left = &mut self.chains[a];
        let k = overlap_len(&left.text, &right.text);
        left.text = merge(&left.text, &right.text);
        left.members.extend(right.members);
        self.chains.remove(b);
        Ok(k)
    }

    pub fn texts(&self) -> impl Iterator<Item = &SString> {
        self.chains.iter().map(|c| &c.text)
    }

    pub fn finish(self) -> Result<(SString, Vec<usize>)> {
        if self.chains.len() != 1 {
            return Err(Error::InvalidTrace(format!(
                "{} chains left after replay",
                self.chains.len()
            )));
        }
        let c = self.chains.into_iter().next().unwrap();
        Ok((c.text, c.members))
    }
}

/// Checks every trace invariant and that replaying the trace reproduces the
/// recorded superstring and permutation.
pub fn verify_trace(d: &Dataset, res: &GreedyResult) -> bool {
    let trace = &res.trace;
    let n = d.len();
    if trace.steps.len() != n.saturating_sub(1) {
        return false;
    }
    if trace
        .steps
        .iter()
        .any(|s| s.sharp_count.is_some() != trace.important.is_some())
    {
        return false;
    }
    let scores: Vec<usize> = trace.steps.iter().map(|s| trace.score(s)).collect();
    if scores.windows(2).any(|w| w[0] < w[1]) {
        return false;
    }
    if trace.first_trivial != trace.locate_first_trivial() {
        return false;
    }
    let mut as_left = vec![false; n];
    let mut as_right = vec![false; n];
    for (s, &score) in trace.steps.iter().zip(&scores) {
        if s.left >= n || s.right >= n {
            return false;
        }
        if score > 0
            && (std::mem::replace(&mut as_left[s.left], true)
                || std::mem::replace(&mut as_right[s.right], true))
        {
            return false;
        }
    }

    let mut replay = Replay::new(d);
    for s in &trace.steps {
        let (a, b) = match replay.find(s.left, s.right) {
            Ok(ab) => ab,
            Err(_) => return false,
        };
        let (ta, tb) = (&replay.chains[a].text, &replay.chains[b].text);
        let k = overlap_len(ta, tb);
        if k != s.overlap_len {
            return false;
        }
        if let Some(c) = trace.important {
            if s.sharp_count != Some(count_symbol(&tb[..k], c)) {
                return false;
            }
        }
        if replay.merge(s.left, s.right).is_err() {
            return false;
        }
    }
    match replay.finish() {
        Ok((text, members)) => text == res.superstring && members == res.permutation,
        Err(_) => false,
    }
}

/// Stable serialized form of a [`GreedyResult`].
///
/// `steps` holds `[left, right, overlap_len]` triples; frequency runs add
/// `important`, `sharp_counts` (one per step) and `sharp_length`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyRecord {
    pub policy: String,
    pub superstring: String,
    pub length: usize,
    pub permutation: Vec<usize>,
    pub steps: Vec<[usize; 3]>,
    pub first_trivial: Option<usize>,
    pub trivial_step: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub important: Option<char>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sharp_counts: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sharp_length: Option<usize>,
    pub endpoint_anomalies: Vec<EndpointAnomaly>,
}

impl From<&GreedyResult> for GreedyRecord {
    fn from(r: &GreedyResult) -> Self {
        let important = r.trace.important;
        GreedyRecord {
            policy: r.policy.to_string(),
            superstring: r.superstring.to_string(),
            length: r.superstring.len(),
            permutation: r.permutation.clone(),
            steps: r
                .trace
                .steps
                .iter()
                .map(|s| [s.left, s.right, s.overlap_len])
                .collect(),
            first_trivial: r.trace.first_trivial,
            trivial_step: r.trace.trivial_step(),
            important,
            sharp_counts: important.map(|_| {
                r.trace
                    .steps
                    .iter()
                    .map(|s| s.sharp_count.unwrap_or(0))
                    .collect()
            }),
            sharp_length: important.map(|c| count_symbol(&r.superstring, c)),
            endpoint_anomalies: r.endpoint_anomalies.clone(),
        }
    }
}

impl TryFrom<GreedyRecord> for GreedyResult {
    type Error = Error;

    fn try_from(rec: GreedyRecord) -> Result<Self> {
        let counts = rec.sharp_counts.unwrap_or_default();
        if rec.important.is_some() && counts.len() != rec.steps.len() {
            return Err(Error::InvalidTrace("sharp_counts length mismatch".into()));
        }
        let steps = rec
            .steps
            .iter()
            .enumerate()
            .map(|(i, &[left, right, overlap_len])| MergeStep {
                left,
                right,
                overlap_len,
                sharp_count: rec.important.map(|_| counts[i]),
            })
            .collect();
        Ok(GreedyResult {
            superstring: rec.superstring.parse()?,
            permutation: rec.permutation,
            trace: MergeTrace {
                steps,
                first_trivial: rec.first_trivial,
                important: rec.important,
            },
            policy: rec.policy.parse()?,
            endpoint_anomalies: rec.endpoint_anomalies,
        })
    }
}

impl GreedyResult {
    pub fn to_record(&self) -> GreedyRecord {
        GreedyRecord::from(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: GreedyRecord = serde_json::from_str(text)
            .map_err(|e| Error::InvalidTrace(format!("malformed result document: {e}")))?;
        rec.try_into()
    }
}
