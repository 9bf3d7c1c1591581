//! Sentinel-block rewriting that removes ties among non-trivial overlaps.
//!
//! Given a greedy trace, every string `c_1 c_2 … c_k` becomes
//!
//! ```text
//! $^(m − right_step) c_1 $^m c_2 $^m … $^m c_k $^(T − left_step)
//! ```
//!
//! where `right_step[i]` (`left_step[i]`) is the step at which string `i` was
//! the right (left) part of a non-trivial merge, or `T` (the first trivial
//! step) if there is none. Non-trivial overlaps grow to roughly `m` times
//! their length, shifted by the step numbers, so the traced merge is the
//! unique maximum at every step.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::{replay_pairs, run_greedy, MergeTrace, Replay, TieBreakPolicy};
use crate::oracle::exact_scs;
use crate::strcore::{overlap_len, Dataset, SString, Sentinel, Symbol};

/// Largest `m` the gap search will try.
pub const DEFAULT_M_CAP: usize = 100_000;

/// Per-string step numbers extracted from a merge trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRoles {
    /// Step at which string `i` was merged as the right part, or `trivial_step`.
    pub right_step: Vec<usize>,
    /// Step at which string `i` was merged as the left part, or `trivial_step`.
    pub left_step: Vec<usize>,
    pub trivial_step: usize,
}

pub fn step_roles(trace: &MergeTrace, n: usize) -> StepRoles {
    let t = trace.trivial_step();
    let mut right_step = vec![t; n];
    let mut left_step = vec![t; n];
    for (k, s) in trace.steps.iter().enumerate().take(t.saturating_sub(1)) {
        right_step[s.right] = k + 1;
        left_step[s.left] = k + 1;
    }
    StepRoles {
        right_step,
        left_step,
        trivial_step: t,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisturbVariant {
    /// The plain rewrite.
    Base,
    /// One extra sentinel at the end, so every pair overlaps.
    AppendOne,
    /// Tail of `n · (T − left_step)` sentinels instead of `T − left_step`.
    ScaledTail,
}

impl DisturbVariant {
    pub fn name(self) -> &'static str {
        match self {
            DisturbVariant::Base => "base",
            DisturbVariant::AppendOne => "append-one",
            DisturbVariant::ScaledTail => "scaled-tail",
        }
    }

    /// `m` must be strictly greater than this for `n` strings.
    pub fn m_bound(self, n: usize) -> usize {
        match self {
            DisturbVariant::Base | DisturbVariant::AppendOne => 2 * n,
            DisturbVariant::ScaledTail => 2 * n * (n + 1),
        }
    }

    pub fn min_m(self, n: usize) -> usize {
        self.m_bound(n) + 1
    }
}

impl std::str::FromStr for DisturbVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(DisturbVariant::Base),
            "append-one" => Ok(DisturbVariant::AppendOne),
            "scaled-tail" => Ok(DisturbVariant::ScaledTail),
            _ => Err(Error::InvalidParameters(format!(
                "unknown variant `{s}` (expected base, append-one or scaled-tail)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DisturbParams {
    pub m: usize,
    pub sentinel: Symbol,
    pub variant: DisturbVariant,
}

impl DisturbParams {
    pub fn base(m: usize, sentinel: Symbol) -> Self {
        DisturbParams {
            m,
            sentinel,
            variant: DisturbVariant::Base,
        }
    }

    fn tail_factor(&self, n: usize) -> usize {
        match self.variant {
            DisturbVariant::ScaledTail => n,
            _ => 1,
        }
    }

    fn extra(&self) -> usize {
        usize::from(self.variant == DisturbVariant::AppendOne)
    }

    /// Predicted `|overlap(s'_i, s'_j)|` from `k = |overlap(s_i, s_j)|`,
    /// for a dataset of `n` strings.
    pub fn predicted_overlap_len(
        &self,
        k: usize,
        right_step_j: usize,
        left_step_i: usize,
        trivial_step: usize,
        n: usize,
    ) -> usize {
        let tail = self.tail_factor(n) * (trivial_step - left_step_i) + self.extra();
        if k > 0 {
            (self.m + 1) * k - right_step_j + tail
        } else {
            tail.min(self.m - right_step_j)
        }
    }
}

/// Predicted disturbed overlap length for the base variant.
///
/// `(m + 1)k − right_step_j + T − left_step_i` when `k > 0`, otherwise
/// `min(T − left_step_i, m − right_step_j)`.
pub fn predicted_overlap_len(
    k: usize,
    right_step_j: usize,
    left_step_i: usize,
    trivial_step: usize,
    m: usize,
) -> usize {
    DisturbParams::base(m, '$').predicted_overlap_len(k, right_step_j, left_step_i, trivial_step, 1)
}

fn disturb_string(
    s: &SString,
    right_step: usize,
    left_step: usize,
    trivial_step: usize,
    n: usize,
    params: &DisturbParams,
) -> SString {
    let (m, c) = (params.m, params.sentinel);
    let tail = params.tail_factor(n) * (trivial_step - left_step) + params.extra();
    let mut out = Vec::with_capacity((m + 1) * s.len() + tail);
    for (k, &x) in s.iter().enumerate() {
        let run = if k == 0 { m - right_step } else { m };
        out.extend(std::iter::repeat_n(c, run));
        out.push(x);
    }
    out.extend(std::iter::repeat_n(c, tail));
    SString::new(out).expect("non-empty input")
}

/// Rewrites every string of `d` with sentinel blocks.
///
/// The output is re-validated as substring-free and carries `params.sentinel`
/// marked in-use.
pub fn disturb(d: &Dataset, roles: &StepRoles, params: &DisturbParams) -> Result<Dataset> {
    let n = d.len();
    let t = roles.trivial_step;
    if roles.right_step.len() != n || roles.left_step.len() != n {
        return Err(Error::InvalidParameters(format!(
            "step roles cover {} strings, dataset has {n}",
            roles.right_step.len()
        )));
    }
    let in_range = |x: &usize| (1..=t).contains(x);
    if !roles.right_step.iter().all(in_range) || !roles.left_step.iter().all(in_range) {
        return Err(Error::InvalidParameters(format!(
            "step roles must lie in 1..={t}"
        )));
    }
    d.ensure_fresh(params.sentinel)?;
    let bound = params.variant.m_bound(n);
    if params.m <= bound {
        return Err(Error::MTooSmall {
            m: params.m,
            variant: params.variant.name(),
            bound,
        });
    }
    let strings = d
        .strings()
        .iter()
        .enumerate()
        .map(|(i, s)| disturb_string(s, roles.right_step[i], roles.left_step[i], t, n, params))
        .collect();
    Dataset::new(strings)?.with_sentinel(Sentinel {
        symbol: params.sentinel,
        in_use: true,
    })
}

/// True iff greedy on `d` never faces two pairs sharing a positive maximum
/// overlap. Ties among zero overlaps are ignored.
pub fn check_tie_free(d: &Dataset) -> bool {
    tie_profile(d)
        .iter()
        .all(|&(max, count)| max == 0 || count == 1)
}

/// `(maximum overlap, number of pairs attaining it)` at each greedy step,
/// following the first maximal pair in row-major order.
pub fn tie_profile(d: &Dataset) -> Vec<(usize, usize)> {
    let mut replay = Replay::new(d);
    let mut profile = Vec::new();
    while replay.live() > 1 {
        let pairs = replay.pair_overlaps();
        let max = pairs.iter().map(|p| p.2).max().unwrap_or(0);
        let tied: Vec<_> = pairs.iter().filter(|p| p.2 == max).collect();
        profile.push((max, tied.len()));
        let (l, r, _) = *tied[0];
        replay.merge(l, r).expect("pair comes from live chains");
    }
    profile
}

/// Predicted and measured overlap matrices of a disturbed dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisturbReport {
    pub variant: DisturbVariant,
    pub m: usize,
    pub sentinel: char,
    pub trivial_step: usize,
    pub right_step: Vec<usize>,
    pub left_step: Vec<usize>,
    pub source_overlaps: Vec<Vec<usize>>,
    pub predicted_overlaps: Vec<Vec<usize>>,
    pub actual_overlaps: Vec<Vec<usize>>,
    /// `(i, j)` pairs where prediction and measurement differ.
    pub mismatches: Vec<(usize, usize)>,
}

pub fn disturb_report(
    source: &Dataset,
    disturbed: &Dataset,
    roles: &StepRoles,
    params: &DisturbParams,
) -> DisturbReport {
    let n = source.len();
    let source_overlaps = source.overlap_matrix();
    let actual_overlaps = disturbed.overlap_matrix();
    let mut predicted_overlaps = vec![vec![0; n]; n];
    let mut mismatches = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            predicted_overlaps[i][j] = params.predicted_overlap_len(
                source_overlaps[i][j],
                roles.right_step[j],
                roles.left_step[i],
                roles.trivial_step,
                n,
            );
            if predicted_overlaps[i][j] != actual_overlaps[i][j] {
                mismatches.push((i, j));
            }
        }
    }
    DisturbReport {
        variant: params.variant,
        m: params.m,
        sentinel: params.sentinel,
        trivial_step: roles.trivial_step,
        right_step: roles.right_step.clone(),
        left_step: roles.left_step.clone(),
        source_overlaps,
        predicted_overlaps,
        actual_overlaps,
        mismatches,
    }
}

/// A disturbance parameter at which the approximation gap survives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapWitness {
    pub m: usize,
    pub greedy_len: usize,
    pub opt_len: usize,
    /// Every `m` tried, in order, with its `(greedy, optimum)` lengths.
    pub attempts: Vec<(usize, usize, usize)>,
}

/// First symbol from a fixed list that is absent from `d`.
pub fn pick_sentinel(d: &Dataset) -> Result<Symbol> {
    const CHOICES: [char; 6] = ['$', '§', '¤', '¶', '\u{E000}', '\u{E001}'];
    CHOICES
        .into_iter()
        .find(|&c| d.ensure_fresh(c).is_ok())
        .ok_or(Error::AlphabetExhausted {
            needed: 1,
            available: 0,
        })
}

/// Searches `m ∈ {2n+1, 2(2n+1), 4(2n+1), …}` for a disturbed dataset on
/// which greedy still exceeds `lambda` times the optimum.
pub fn choose_m_for_gap(d: &Dataset, trace: &MergeTrace, lambda: Ratio<u64>) -> Result<GapWitness> {
    choose_m_for_gap_with(d, trace, lambda, pick_sentinel(d)?, DEFAULT_M_CAP)
}

pub fn choose_m_for_gap_with(
    d: &Dataset,
    trace: &MergeTrace,
    lambda: Ratio<u64>,
    sentinel: Symbol,
    m_cap: usize,
) -> Result<GapWitness> {
    if lambda < Ratio::from_integer(1) {
        return Err(Error::InvalidParameters(format!(
            "lambda {lambda} is below 1"
        )));
    }
    let exceeds = |alg: usize, opt: usize| {
        (alg as u128) * (*lambda.denom() as u128) > (*lambda.numer() as u128) * (opt as u128)
    };
    let (text, _) = replay_pairs(d, &trace.pairs())?;
    let opt = exact_scs(d)?.length;
    if !exceeds(text.len(), opt) {
        return Err(Error::NoGap {
            greedy: text.len(),
            opt,
            lambda: lambda.to_string(),
        });
    }

    let n = d.len();
    let roles = step_roles(trace, n);
    let mut m = DisturbVariant::Base.min_m(n);
    let mut attempts = Vec::new();
    loop {
        if m > m_cap {
            let (_, greedy, opt) = attempts.last().copied().unwrap_or((0, 0, 0));
            return Err(Error::MCapExceeded {
                cap: m_cap,
                last_m: attempts.last().map_or(0, |a| a.0),
                greedy,
                opt,
                lambda: lambda.to_string(),
            });
        }
        let disturbed = disturb(d, &roles, &DisturbParams::base(m, sentinel))?;
        let greedy_len = run_greedy(&disturbed, TieBreakPolicy::FirstPair)
            .superstring
            .len();
        let opt_len = exact_scs(&disturbed)?.length;
        attempts.push((m, greedy_len, opt_len));
        if exceeds(greedy_len, opt_len) {
            return Ok(GapWitness {
                m,
                greedy_len,
                opt_len,
                attempts,
            });
        }
        m *= 2;
    }
}

/// Whether all off-diagonal overlap lengths of `d` are pairwise different.
pub fn overlaps_pairwise_distinct(d: &Dataset) -> bool {
    let n = d.len();
    let mut seen = std::collections::HashSet::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && !seen.insert(overlap_len(d.get(i), d.get(j))) {
                return false;
            }
        }
    }
    true
}
