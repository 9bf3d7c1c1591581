//! Exact solvers used as ground truth.
//!
//! Both the plain and the frequency solver run a subset DP over
//! (visited set, first string) that maximises the total overlap along a
//! Hamiltonian path; minimising superstring length is the same problem.
//! Among optimal orders the lexicographically smallest permutation is
//! returned, which matches the brute-force scan exactly.

use std::ops::Add;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::strcore::{
    check_permutation, count_symbol, overlap, superstring_of_permutation, Dataset, SString, Symbol,
};

pub const DEFAULT_CAP: usize = 18;
pub const BRUTE_FORCE_MAX: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub length: usize,
    pub permutation: Vec<usize>,
    pub superstring: SString,
}

/// Optimum of the frequency metric; `length` is the plain length of the
/// returned superstring, minimal among the frequency-optimal orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpExactResult {
    pub sharp_length: usize,
    pub length: usize,
    pub permutation: Vec<usize>,
    pub superstring: SString,
}

pub fn exact_scs(d: &Dataset) -> Result<ExactResult> {
    exact_scs_with_cap(d, DEFAULT_CAP)
}

pub fn exact_scs_with_cap(d: &Dataset, cap: usize) -> Result<ExactResult> {
    check_cap(d.len(), cap)?;
    let m = d.overlap_matrix();
    let perm = best_path(d.len(), |i, j| m[i][j]);
    finish_plain(d, perm)
}

/// Exhaustive scan over all permutations in lexicographic order.
pub fn brute_force_scs(d: &Dataset) -> Result<ExactResult> {
    let n = d.len();
    if n > BRUTE_FORCE_MAX {
        return Err(Error::TooManyStrings {
            n,
            cap: BRUTE_FORCE_MAX,
            brute_force_max: BRUTE_FORCE_MAX,
        });
    }
    let m = d.overlap_matrix();
    let total = d.total_len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(usize, Vec<usize>)> = None;
    loop {
        let len = total - perm.windows(2).map(|w| m[w[0]][w[1]]).sum::<usize>();
        if best.as_ref().is_none_or(|(b, _)| len < *b) {
            best = Some((len, perm.clone()));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let (_, perm) = best.expect("at least one permutation");
    finish_plain(d, perm)
}

pub fn exact_scs_sharp(d: &Dataset, important: Symbol) -> Result<SharpExactResult> {
    exact_scs_sharp_with_cap(d, important, DEFAULT_CAP)
}

pub fn exact_scs_sharp_with_cap(
    d: &Dataset,
    important: Symbol,
    cap: usize,
) -> Result<SharpExactResult> {
    let n = d.len();
    check_cap(n, cap)?;
    let mut w = vec![vec![Pair(0, 0); n]; n];
    for (i, row) in w.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if i != j {
                let y = overlap(d.get(i), d.get(j));
                *cell = Pair(count_symbol(y, important), y.len());
            }
        }
    }
    let perm = best_path(n, |i, j| w[i][j]);
    let superstring = superstring_of_permutation(d, &perm)?;
    Ok(SharpExactResult {
        sharp_length: count_symbol(&superstring, important),
        length: superstring.len(),
        permutation: perm,
        superstring,
    })
}

/// `algorithm_length / opt_length` as an exact fraction in lowest terms.
pub fn approx_ratio(algorithm_length: usize, opt_length: usize) -> Result<Ratio<u64>> {
    if opt_length == 0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(Ratio::new(algorithm_length as u64, opt_length as u64))
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::TooManyStrings {
            n,
            cap,
            brute_force_max: BRUTE_FORCE_MAX,
        });
    }
    Ok(())
}

fn finish_plain(d: &Dataset, perm: Vec<usize>) -> Result<ExactResult> {
    check_permutation(&perm, d.len())?;
    let superstring = superstring_of_permutation(d, &perm)?;
    Ok(ExactResult {
        length: superstring.len(),
        permutation: perm,
        superstring,
    })
}

/// Lexicographic weight: important-symbol count first, then length.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
struct Pair(usize, usize);

impl Add for Pair {
    type Output = Pair;

    fn add(self, o: Pair) -> Pair {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

/// Lexicographically smallest order maximising the summed edge weights.
///
/// `best[mask * n + f]` is the heaviest path that starts at `f` and visits
/// exactly the vertices of `mask`.
fn best_path<W, F>(n: usize, weight: F) -> Vec<usize>
where
    W: Copy + Default + Ord + Add<Output = W>,
    F: Fn(usize, usize) -> W,
{
    if n == 1 {
        return vec![0];
    }
    let w: Vec<W> = (0..n * n).map(|k| weight(k / n, k % n)).collect();
    let full = (1usize << n) - 1;
    let mut best = vec![W::default(); (full + 1) * n];
    for mask in 1..=full {
        if mask.count_ones() == 1 {
            continue;
        }
        let mut firsts = mask;
        while firsts != 0 {
            let f = firsts.trailing_zeros() as usize;
            firsts &= firsts - 1;
            let rest = mask & !(1 << f);
            let mut top: Option<W> = None;
            let mut nexts = rest;
            while nexts != 0 {
                let j = nexts.trailing_zeros() as usize;
                nexts &= nexts - 1;
                let v = w[f * n + j] + best[rest * n + j];
                if top.is_none_or(|t| v > t) {
                    top = Some(v);
                }
            }
            best[mask * n + f] = top.expect("rest is non-empty");
        }
    }

    let opt = (0..n).map(|f| best[full * n + f]).max().unwrap();
    let mut cur = (0..n).find(|&f| best[full * n + f] == opt).unwrap();
    let mut mask = full;
    let mut perm = vec![cur];
    while mask.count_ones() > 1 {
        let target = best[mask * n + cur];
        let rest = mask & !(1 << cur);
        let next = (0..n)
            .filter(|&j| rest & (1 << j) != 0)
            .find(|&j| w[cur * n + j] + best[rest * n + j] == target)
            .expect("optimal successor exists");
        perm.push(next);
        mask = rest;
        cur = next;
    }
    perm
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
