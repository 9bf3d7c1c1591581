//! Strings, datasets, overlaps and merges.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A single alphabet symbol. Any unicode scalar value is allowed.
pub type Symbol = char;

/// A non-empty, immutable string of symbols.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SString(Vec<Symbol>);

impl SString {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyString);
        }
        Ok(SString(symbols))
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }
}

impl Deref for SString {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl FromStr for SString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SString::new(s.chars().collect())
    }
}

impl TryFrom<&str> for SString {
    type Error = Error;

    fn try_from(s: &str) -> Result<Self> {
        s.parse()
    }
}

impl fmt::Display for SString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_string())
    }
}

/// Border (prefix-function) array: `pi[i]` is the length of the longest
/// proper border of `s[..=i]`.
pub fn prefix_function(s: &[Symbol]) -> Vec<usize> {
    let mut pi = vec![0; s.len()];
    for i in 1..s.len() {
        let mut k = pi[i - 1];
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k;
    }
    pi
}

/// Length of the longest `y` with `s = xy` and `t = yz`.
///
/// Runs the KMP automaton of `t` over `s`; this is the border of `t ⧚ s`
/// without materialising the concatenation. Linear in `|s| + |t|`.
pub fn overlap_len(s: &[Symbol], t: &[Symbol]) -> usize {
    if s.is_empty() || t.is_empty() {
        return 0;
    }
    let pi = prefix_function(t);
    let mut state = 0;
    for &c in s {
        if state == t.len() {
            state = pi[state - 1];
        }
        while state > 0 && t[state] != c {
            state = pi[state - 1];
        }
        if t[state] == c {
            state += 1;
        }
    }
    state
}

/// Quadratic reference implementation of [`overlap_len`].
pub fn overlap_len_naive(s: &[Symbol], t: &[Symbol]) -> usize {
    (0..=s.len().min(t.len()))
        .rev()
        .find(|&k| s[s.len() - k..] == t[..k])
        .unwrap_or(0)
}

/// The overlap itself, as a prefix slice of `t`. May be empty.
pub fn overlap<'a>(s: &[Symbol], t: &'a [Symbol]) -> &'a [Symbol] {
    &t[..overlap_len(s, t)]
}

pub fn merge(s: &SString, t: &SString) -> SString {
    let k = overlap_len(s, t);
    let mut out = Vec::with_capacity(s.len() + t.len() - k);
    out.extend_from_slice(s);
    out.extend_from_slice(&t[k..]);
    SString(out)
}

pub fn count_symbol(s: &[Symbol], c: Symbol) -> usize {
    s.iter().filter(|&&x| x == c).count()
}

/// Whether `needle` occurs in `haystack` as a contiguous substring.
pub fn is_substring(needle: &[Symbol], haystack: &[Symbol]) -> bool {
    if needle.is_empty() {
        return true;
    }
    if needle.len() > haystack.len() {
        return false;
    }
    let pi = prefix_function(needle);
    let mut state = 0;
    for &c in haystack {
        while state > 0 && needle[state] != c {
            state = pi[state - 1];
        }
        if needle[state] == c {
            state += 1;
            if state == needle.len() {
                return true;
            }
        }
    }
    false
}

/// A sentinel symbol attached to a dataset.
///
/// When `in_use` is false the symbol is reserved and must not occur in any
/// string. Transformed datasets carry their sentinel with `in_use = true`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sentinel {
    pub symbol: Symbol,
    pub in_use: bool,
}

/// A non-empty, substring-free list of strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    strings: Vec<SString>,
    sentinel: Option<Sentinel>,
}

impl Dataset {
    /// Builds a dataset, rejecting input that is empty or not substring-free.
    pub fn new(strings: Vec<SString>) -> Result<Self> {
        if strings.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for (i, s) in strings.iter().enumerate() {
            for (j, t) in strings.iter().enumerate() {
                if i != j && is_substring(s, t) {
                    return Err(Error::NotSubstringFree { inner: i, outer: j });
                }
            }
        }
        Ok(Dataset {
            strings,
            sentinel: None,
        })
    }

    /// Parses one string per element, then validates as [`Dataset::new`].
    pub fn from_strs<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let strings = items
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<SString>>>()?;
        Dataset::new(strings)
    }

    pub fn with_sentinel(mut self, sentinel: Sentinel) -> Result<Self> {
        if !sentinel.in_use {
            if let Some(index) = self.position_of_symbol(sentinel.symbol) {
                return Err(Error::SentinelPresent {
                    symbol: sentinel.symbol,
                    index,
                });
            }
        }
        self.sentinel = Some(sentinel);
        Ok(self)
    }

    pub fn strings(&self) -> &[SString] {
        &self.strings
    }

    pub fn get(&self, i: usize) -> &SString {
        &self.strings[i]
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn sentinel(&self) -> Option<Sentinel> {
        self.sentinel
    }

    pub fn total_len(&self) -> usize {
        self.strings.iter().map(|s| s.len()).sum()
    }

    /// Index of the first string containing `c`, if any.
    pub fn position_of_symbol(&self, c: Symbol) -> Option<usize> {
        self.strings.iter().position(|s| s.contains(&c))
    }

    /// Fails if `c` cannot serve as a fresh sentinel for this dataset.
    pub fn ensure_fresh(&self, c: Symbol) -> Result<()> {
        if let Some(index) = self.position_of_symbol(c) {
            return Err(Error::SentinelPresent { symbol: c, index });
        }
        if let Some(s) = self.sentinel {
            if s.in_use && s.symbol == c {
                return Err(Error::SentinelPresent {
                    symbol: c,
                    index: 0,
                });
            }
        }
        Ok(())
    }

    /// `m[i][j] = |overlap(s_i, s_j)|`; the diagonal is zero.
    pub fn overlap_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut m = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m[i][j] = overlap_len(&self.strings[i], &self.strings[j]);
                }
            }
        }
        m
    }

    /// Reads the line-oriented text format.
    ///
    /// One string per line, no blank lines. An optional first line
    /// `#! sentinel=<char>` reserves a sentinel; `#! sentinel=<char> in-use`
    /// marks a transformed dataset whose strings may contain it.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines: Vec<&str> = text.split('\n').collect();
        if lines.last() == Some(&"") {
            lines.pop();
        }
        let mut sentinel = None;
        let mut start = 0;
        if let Some(first) = lines.first() {
            if let Some(rest) = first.strip_prefix("#!") {
                sentinel = Some(parse_directive(rest.trim())?);
                start = 1;
            }
        }
        let mut strings = Vec::new();
        for (k, raw) in lines.iter().enumerate().skip(start) {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.is_empty() {
                return Err(Error::Parse {
                    line: k + 1,
                    msg: "blank line".into(),
                });
            }
            strings.push(SString(line.chars().collect()));
        }
        let d = Dataset::new(strings)?;
        match sentinel {
            Some(s) => d.with_sentinel(s),
            None => Ok(d),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(s) = self.sentinel {
            out.push_str(&format!("#! sentinel={}", s.symbol));
            if s.in_use {
                out.push_str(" in-use");
            }
            out.push('\n');
        }
        for s in &self.strings {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }
}

fn parse_directive(body: &str) -> Result<Sentinel> {
    let err = |msg: &str| Error::Parse {
        line: 1,
        msg: msg.to_string(),
    };
    let mut parts = body.split_whitespace();
    let spec = parts
        .next()
        .and_then(|p| p.strip_prefix("sentinel="))
        .ok_or_else(|| err("expected `sentinel=<char>` directive"))?;
    let mut chars = spec.chars();
    let symbol = match (chars.next(), chars.next()) {
        (Some(c), None) => c,
        _ => return Err(err("sentinel must be exactly one symbol")),
    };
    let in_use = match parts.next() {
        None => false,
        Some("in-use") => true,
        Some(other) => return Err(err(&format!("unknown directive flag `{other}`"))),
    };
    if parts.next().is_some() {
        return Err(err("trailing tokens in directive"));
    }
    Ok(Sentinel { symbol, in_use })
}

/// Drops every string contained in another (keeping the first of equal
/// strings), preserving the order of the survivors.
pub fn normalize(raw: Vec<SString>) -> Result<Dataset> {
    normalize_with_report(raw).map(|(d, _)| d)
}

/// Like [`normalize`], also returning the dropped strings in input order.
pub fn normalize_with_report(raw: Vec<SString>) -> Result<(Dataset, Vec<SString>)> {
    if raw.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let keep: Vec<bool> = (0..raw.len())
        .map(|i| {
            !raw.iter().enumerate().any(|(j, t)| {
                j != i
                    && ((t.len() > raw[i].len() && is_substring(&raw[i], t))
                        || (j < i && *t == raw[i]))
            })
        })
        .collect();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (s, k) in raw.into_iter().zip(keep) {
        if k {
            kept.push(s);
        } else {
            dropped.push(s);
        }
    }
    Ok((Dataset::new(kept)?, dropped))
}

pub fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} for a dataset of {n} strings",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &i in perm {
        if i >= n {
            return Err(Error::InvalidPermutation(format!("index {i} out of range")));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidPermutation(format!("index {i} repeated")));
        }
    }
    Ok(())
}

/// Left-fold merge of the dataset strings in permutation order.
pub fn superstring_of_permutation(d: &Dataset, perm: &[usize]) -> Result<SString> {
    check_permutation(perm, d.len())?;
    let mut acc = d.get(perm[0]).clone();
    for &i in &perm[1..] {
        acc = merge(&acc, d.get(i));
    }
    Ok(acc)
}

/// Total length minus the sum of adjacent overlaps.
pub fn superstring_length(d: &Dataset, perm: &[usize]) -> Result<usize> {
    check_permutation(perm, d.len())?;
    let saved: usize = perm
        .windows(2)
        .map(|w| overlap_len(d.get(w[0]), d.get(w[1])))
        .sum();
    Ok(d.total_len() - saved)
}
