//! The symbol-frequency metric and its two reductions to and from plain
//! superstring length.

use crate::error::{Error, Result};
use crate::greedy::{MergeTrace, Replay};
use crate::strcore::{count_symbol, Dataset, SString, Sentinel, Symbol};

/// Measures strings by the number of occurrences of one important symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharpMetric {
    pub important: Symbol,
}

pub fn sharp_length(s: &[Symbol], metric: SharpMetric) -> usize {
    count_symbol(s, metric.important)
}

/// `abc` becomes `$a$b$c`. The output marks `sentinel` as in-use.
pub fn interleave_sentinel(d: &Dataset, sentinel: Symbol) -> Result<Dataset> {
    d.ensure_fresh(sentinel)?;
    let strings = d
        .strings()
        .iter()
        .map(|s| {
            let out: Vec<Symbol> = s.iter().flat_map(|&c| [sentinel, c]).collect();
            SString::new(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(strings)?.with_sentinel(Sentinel {
        symbol: sentinel,
        in_use: true,
    })
}

/// Replaces every occurrence of `important` by `m` copies of it.
pub fn inflate_string(s: &[Symbol], important: Symbol, m: usize) -> SString {
    let mut out = Vec::with_capacity(s.len());
    for &c in s {
        if c == important {
            out.extend(std::iter::repeat_n(c, m));
        } else {
            out.push(c);
        }
    }
    SString::new(out).expect("non-empty for m >= 1")
}

pub fn inflate_important(d: &Dataset, important: Symbol, m: usize) -> Result<Dataset> {
    if m == 0 {
        return Err(Error::InvalidParameters(
            "inflation factor must be positive".into(),
        ));
    }
    let strings = d
        .strings()
        .iter()
        .map(|s| inflate_string(s, important, m))
        .collect();
    let out = Dataset::new(strings)?;
    match d.sentinel() {
        Some(s) => out.with_sentinel(s),
        None => Ok(out),
    }
}

/// Inflation factor large enough for count differences to dominate length
/// differences: `2 · (max plain overlap) · n + 1`.
pub fn lifting_factor(d: &Dataset) -> usize {
    let max = d.overlap_matrix().into_iter().flatten().max().unwrap_or(0);
    2 * max * d.len() + 1
}

/// Replays the merge pairs of `trace` on the inflated dataset and returns
/// the 1-based steps at which the replayed pair does not attain the maximum
/// chain overlap. An empty result means the order is a valid greedy order
/// for the inflated dataset.
pub fn lift_violations(
    d: &Dataset,
    trace: &MergeTrace,
    important: Symbol,
    m: usize,
) -> Result<Vec<usize>> {
    let inflated = inflate_important(d, important, m)?;
    let mut replay = Replay::new(&inflated);
    let mut bad = Vec::new();
    for (k, s) in trace.steps.iter().enumerate() {
        if replay.overlap_of(s.left, s.right)? != replay.max_overlap() {
            bad.push(k + 1);
        }
        replay.merge(s.left, s.right)?;
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greedy::{run_greedy_sharp, TieBreakPolicy};
    use crate::strcore::{overlap, overlap_len, superstring_of_permutation};

    fn ds(items: &[&str]) -> Dataset {
        Dataset::from_strs(items).unwrap()
    }

    fn texts(d: &Dataset) -> Vec<String> {
        d.strings().iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn interleave_examples() {
        assert_eq!(
            texts(&interleave_sentinel(&ds(&["abc"]), '$').unwrap()),
            ["$a$b$c"]
        );
        assert_eq!(
            texts(&interleave_sentinel(&ds(&["a"]), '$').unwrap()),
            ["$a"]
        );
        let d = interleave_sentinel(&ds(&["abc", "bcd"]), '$').unwrap();
        let y = overlap(d.get(0), d.get(1));
        assert_eq!(y.iter().collect::<String>(), "$b$c");
        assert_eq!(count_symbol(y, '$'), 2);
        assert_eq!(
            d.sentinel(),
            Some(Sentinel {
                symbol: '$',
                in_use: true
            })
        );
        assert!(matches!(
            interleave_sentinel(&ds(&["a$"]), '$'),
            Err(Error::SentinelPresent { .. })
        ));
    }

    #[test]
    fn inflate_examples() {
        assert_eq!(
            texts(&inflate_important(&ds(&["a#b"]), '#', 3).unwrap()),
            ["a###b"]
        );
        let d = inflate_important(&ds(&["a##", "##b"]), '#', 3).unwrap();
        assert_eq!(overlap_len(d.get(0), d.get(1)), 6);
        assert_eq!(
            texts(&inflate_important(&ds(&["xyz", "zy"]), '#', 100).unwrap()),
            ["xyz", "zy"]
        );
        assert!(inflate_important(&ds(&["a"]), '#', 0).is_err());
    }

    #[test]
    fn sharp_length_examples() {
        let metric = |c| SharpMetric { important: c };
        assert_eq!(
            sharp_length(&"$a$b$c".parse::<SString>().unwrap(), metric('$')),
            3
        );
        assert_eq!(
            sharp_length(&"abc".parse::<SString>().unwrap(), metric('#')),
            0
        );
        let sup = superstring_of_permutation(&ds(&["$a$b", "$b$c"]), &[0, 1]).unwrap();
        assert_eq!(sharp_length(&sup, metric('$')), 3);
    }

    #[test]
    fn sharp_order_lifts_on_small_case() {
        let d = ds(&["a#", "#b", "ab", "b#a"]);
        let r = run_greedy_sharp(&d, '#', TieBreakPolicy::FirstPair);
        let m = lifting_factor(&d);
        assert!(lift_violations(&d, &r.trace, '#', m).unwrap().is_empty());
    }
}
