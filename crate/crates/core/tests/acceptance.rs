//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;

use greedy_scs::disturb::{
    check_tie_free, choose_m_for_gap, disturb, predicted_overlap_len, step_roles, DisturbParams,
};
use greedy_scs::freq::{inflate_important, interleave_sentinel};
use greedy_scs::gen::{random_dataset, worst_case_family};
use greedy_scs::greedy::{run_greedy, run_greedy_sharp, TieBreakPolicy};
use greedy_scs::oracle::{approx_ratio, brute_force_scs, exact_scs, exact_scs_sharp};
use greedy_scs::rng::SplitMix64;
use greedy_scs::strcore::{count_symbol, merge, overlap, overlap_len};
use greedy_scs::{Dataset, SString};

const CORPUS_SIZE: u64 = 1000;

/// Seeded corpus: n ≤ 7, lengths ≤ 10, alphabets of 2 to 4 letters.
fn corpus(size: u64, salt: u64) -> Vec<Dataset> {
    (0..size)
        .map(|seed| {
            let mut rng = SplitMix64::new(seed.wrapping_mul(0x9E37) ^ salt);
            let n = rng.range_inclusive(2, 7);
            let alphabet = rng.range_inclusive(2, 4);
            let len_min = rng.range_inclusive(1, 4);
            random_dataset(seed ^ salt, n, len_min, 10, alphabet)
                .unwrap()
                .dataset
        })
        .collect()
}

/// The corpus with `a` renamed to `#`, keeping only datasets that contain it.
fn important_corpus(size: usize) -> Vec<Dataset> {
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < size {
        for d in corpus(64, 0xA11CE + seed) {
            let renamed: Vec<SString> = d
                .strings()
                .iter()
                .map(|s| {
                    SString::new(s.iter().map(|&c| if c == 'a' { '#' } else { c }).collect())
                        .unwrap()
                })
                .collect();
            let d = Dataset::new(renamed).unwrap();
            if d.position_of_symbol('#').is_some() && out.len() < size {
                out.push(d);
            }
        }
        seed += 1;
    }
    out
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn overlap_prediction(corpus: &[Dataset]) -> Verdict {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for (idx, d) in corpus.iter().enumerate() {
        let n = d.len();
        let src = d.overlap_matrix();
        for p in TieBreakPolicy::builtin(idx as u64) {
            let roles = step_roles(&run_greedy(d, p).trace, n);
            for m in [2 * n + 1, 10 * (2 * n + 1)] {
                let dd = disturb(d, &roles, &DisturbParams::base(m, '$')).unwrap();
                for (i, j) in pairs(n) {
                    let actual = overlap_len(dd.get(i), dd.get(j));
                    let predicted = predicted_overlap_len(
                        src[i][j],
                        roles.right_step[j],
                        roles.left_step[i],
                        roles.trivial_step,
                        m,
                    );
                    checked += 1;
                    if actual != predicted && bad.len() < 3 {
                        bad.push(format!(
                            "dataset {idx} {p} m={m} ({i},{j}): {actual} vs {predicted}"
                        ));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        bad.is_empty() && elapsed < Duration::from_secs(60),
        format!(
            "{checked} ordered pairs, {:.2?}, mismatches {bad:?}",
            elapsed
        ),
    )
}

fn overlap_order(corpus: &[Dataset]) -> Verdict {
    let mut violations = 0;
    let mut comparisons = 0usize;
    for d in corpus {
        let n = d.len();
        let src = d.overlap_matrix();
        let roles = step_roles(&run_greedy(d, TieBreakPolicy::FirstPair).trace, n);
        let dd = disturb(d, &roles, &DisturbParams::base(2 * n + 1, '$')).unwrap();
        let dst = dd.overlap_matrix();
        for (i, j) in pairs(n) {
            for (k, l) in pairs(n) {
                if src[i][j] > src[k][l] {
                    comparisons += 1;
                    if dst[i][j] <= dst[k][l] {
                        violations += 1;
                    }
                }
            }
        }
    }
    verdict(
        violations == 0,
        format!("{comparisons} strict inequalities, {violations} violations"),
    )
}

fn policy_agreement(corpus: &[Dataset]) -> Verdict {
    let mut violations = Vec::new();
    let mut runs = 0;
    for (idx, d) in corpus.iter().enumerate() {
        let n = d.len();
        let policies = TieBreakPolicy::builtin(idx as u64 + 17);
        for source in policies {
            let trace = run_greedy(d, source).trace;
            let roles = step_roles(&trace, n);
            let t = roles.trivial_step;
            let dd = disturb(d, &roles, &DisturbParams::base(2 * n + 1, '$')).unwrap();
            let results: Vec<_> = policies.iter().map(|&p| run_greedy(&dd, p)).collect();
            runs += results.len();
            let len0 = results[0].superstring.len();
            let prefix = &trace.pairs()[..t - 1];
            let ok = results
                .iter()
                .all(|r| r.superstring.len() == len0 && &r.trace.pairs()[..t - 1] == prefix)
                && check_tie_free(&dd);
            if !ok && violations.len() < 3 {
                violations.push(format!("dataset {idx} source {source}"));
            }
        }
    }
    verdict(
        violations.is_empty(),
        format!("{runs} disturbed runs, violations {violations:?}"),
    )
}

fn scale_bound(corpus: &[Dataset]) -> Verdict {
    let mut worst = 0usize;
    let mut violations = 0;
    for d in corpus {
        let n = d.len();
        let opt = exact_scs(d).unwrap().length;
        let roles = step_roles(&run_greedy(d, TieBreakPolicy::FirstPair).trace, n);
        for m in [2 * n + 1, 10 * (2 * n + 1)] {
            let dd = disturb(d, &roles, &DisturbParams::base(m, '$')).unwrap();
            let opt2 = exact_scs(&dd).unwrap().length;
            let dev = opt2.abs_diff((m + 1) * opt);
            worst = worst.max(dev);
            if dev > 2 * n * n {
                violations += 1;
            }
        }
    }
    verdict(
        violations == 0,
        format!("largest deviation {worst}, {violations} violations"),
    )
}

fn family_reproduction() -> Verdict {
    let mut ratios = Vec::new();
    let mut problems = Vec::new();
    for n in 1..=6 {
        let d = worst_case_family(n).unwrap().dataset;
        let opt = exact_scs(&d).unwrap().length;
        if opt != 2 * n + 4 || brute_force_scs(&d).unwrap().length != opt {
            problems.push(format!("n={n}: opt {opt}"));
        }
        for p in TieBreakPolicy::builtin(n as u64) {
            let g = run_greedy(&d, p).superstring.len();
            if g != 4 * n + 2 {
                problems.push(format!("n={n} {p}: greedy {g}"));
            }
        }
        ratios.push(approx_ratio(4 * n + 2, opt).unwrap());
    }
    let increasing = ratios.windows(2).all(|w| w[0] < w[1]);
    let below_two = ratios.iter().all(|r| *r < Ratio::from_integer(2));
    let at_two = ratios[1] == Ratio::new(5, 4);
    let shown: Vec<String> = ratios.iter().map(|r| r.to_string()).collect();
    verdict(
        problems.is_empty() && increasing && below_two && at_two,
        format!("ratios {shown:?}, problems {problems:?}"),
    )
}

fn interleave_optimum(corpus: &[Dataset]) -> Verdict {
    let mut bad = 0;
    for d in corpus {
        let inter = interleave_sentinel(d, '$').unwrap();
        let mut ok =
            exact_scs(d).unwrap().length == exact_scs_sharp(&inter, '$').unwrap().sharp_length;
        for (i, j) in pairs(d.len()) {
            ok &= count_symbol(overlap(inter.get(i), inter.get(j)), '$')
                == overlap_len(d.get(i), d.get(j));
        }
        bad += usize::from(!ok);
    }
    verdict(
        bad == 0,
        format!("{} datasets, {bad} failures", corpus.len()),
    )
}

fn inflation_identity(corpus: &[Dataset]) -> Verdict {
    let mut dumps = Vec::new();
    let mut checked = 0;
    for d in corpus {
        for m in [2, 3, 10] {
            let inflated = inflate_important(d, '#', m).unwrap();
            for (i, j) in pairs(d.len()) {
                let y = overlap(d.get(i), d.get(j));
                let expect = y.len() + (m - 1) * count_symbol(y, '#');
                checked += 1;
                if overlap_len(inflated.get(i), inflated.get(j)) != expect {
                    dumps.push(format!("m={m} ({i},{j})\n{}", d.to_text()));
                }
            }
        }
    }
    verdict(
        dumps.is_empty(),
        format!(
            "{} datasets, {checked} pairs, counterexamples {dumps:?}",
            corpus.len()
        ),
    )
}

/// Replays merge pairs on explicit chains and checks each replayed pair
/// attains the largest chain overlap.
fn stepwise_maximal(d: &Dataset, merges: &[(usize, usize)]) -> bool {
    let mut chains: Vec<(Vec<usize>, SString)> = d
        .strings()
        .iter()
        .enumerate()
        .map(|(i, s)| (vec![i], s.clone()))
        .collect();
    for &(l, r) in merges {
        let a = chains
            .iter()
            .position(|c| *c.0.last().unwrap() == l)
            .unwrap();
        let b = chains.iter().position(|c| c.0[0] == r).unwrap();
        let mut best = 0;
        for (x, cx) in chains.iter().enumerate() {
            for (y, cy) in chains.iter().enumerate() {
                if x != y {
                    best = best.max(overlap_len(&cx.1, &cy.1));
                }
            }
        }
        if overlap_len(&chains[a].1, &chains[b].1) != best {
            return false;
        }
        let right = chains.remove(b);
        let a = if b < a { a - 1 } else { a };
        chains[a].1 = merge(&chains[a].1, &right.1);
        chains[a].0.extend(right.0);
    }
    true
}

fn ga_sharp_lifting(corpus: &[Dataset]) -> Verdict {
    let mut bad = 0;
    let mut runs = 0;
    for (idx, d) in corpus.iter().enumerate() {
        let max = d.overlap_matrix().into_iter().flatten().max().unwrap_or(0);
        let m = 2 * max * d.len() + 1;
        let inflated = inflate_important(d, '#', m).unwrap();
        for p in TieBreakPolicy::builtin(idx as u64) {
            let res = run_greedy_sharp(d, '#', p);
            runs += 1;
            if !stepwise_maximal(&inflated, &res.trace.pairs()) {
                bad += 1;
            }
        }
    }
    verdict(
        bad == 0,
        format!(
            "{} datasets, {runs} runs, {bad} non-greedy orders",
            corpus.len()
        ),
    )
}

fn oracle_soundness(corpus: &[Dataset]) -> Verdict {
    let mismatches = corpus
        .iter()
        .filter(|d| exact_scs(d).unwrap() != brute_force_scs(d).unwrap())
        .count();
    let big = (0..)
        .map(|seed| random_dataset(seed, 15, 10, 12, 4).unwrap().dataset)
        .find(|d| d.len() == 15)
        .unwrap();
    let start = Instant::now();
    let r = exact_scs(&big).unwrap();
    let elapsed = start.elapsed();
    verdict(
        mismatches == 0 && elapsed < Duration::from_secs(10),
        format!(
            "{} datasets, {mismatches} mismatches; n = 15 solved (length {}) in {:.2?}",
            corpus.len(),
            r.length,
            elapsed
        ),
    )
}

fn gap_preservation() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for (n, lambda) in [
        (2, Ratio::from_integer(1)),
        (3, Ratio::from_integer(1)),
        (3, Ratio::new(6, 5)),
    ] {
        let d = worst_case_family(n).unwrap().dataset;
        let trace = run_greedy(&d, TieBreakPolicy::FirstPair).trace;
        match choose_m_for_gap(&d, &trace, lambda) {
            Ok(w) => {
                let roles = step_roles(&trace, d.len());
                let dd = disturb(&d, &roles, &DisturbParams::base(w.m, '$')).unwrap();
                let opt = exact_scs(&dd).unwrap().length;
                let greedy_ok = TieBreakPolicy::builtin(9).iter().all(|&p| {
                    Ratio::from_integer(run_greedy(&dd, p).superstring.len() as u64)
                        > lambda * Ratio::from_integer(opt as u64)
                });
                ok &= greedy_ok && opt == w.opt_len;
                notes.push(format!(
                    "n={n} lambda {lambda}: m={} greedy {} opt {opt}",
                    w.m, w.greedy_len
                ));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("n={n} lambda {lambda}: {e}"));
            }
        }
    }
    verdict(ok, notes.join("; "))
}

fn main() -> ExitCode {
    let corpus = corpus(CORPUS_SIZE, 0);
    let sharp_corpus = important_corpus(500);
    let small: Vec<Dataset> = corpus.iter().take(500).cloned().collect();

    let criteria: Vec<Criterion> = vec![
        (
            "1 disturbed overlap equals prediction",
            Box::new(|| overlap_prediction(&corpus)),
        ),
        (
            "2 disturbing preserves strict overlap order",
            Box::new(|| overlap_order(&corpus)),
        ),
        (
            "3 all policies coincide on disturbed data",
            Box::new(|| policy_agreement(&corpus)),
        ),
        (
            "4 disturbed optimum within 2n^2 of (m+1)OPT",
            Box::new(|| scale_bound(&corpus)),
        ),
        (
            "5 worst-case family lengths and ratios",
            Box::new(family_reproduction),
        ),
        (
            "6 sentinel interleaving preserves optimum",
            Box::new(|| interleave_optimum(&small)),
        ),
        (
            "7 inflation identity",
            Box::new(|| inflation_identity(&sharp_corpus)),
        ),
        (
            "8 frequency-greedy order lifts to greedy",
            Box::new(|| ga_sharp_lifting(&sharp_corpus[..200])),
        ),
        (
            "9 subset DP equals brute force",
            Box::new(|| oracle_soundness(&small)),
        ),
        ("10 gap survives disturbing", Box::new(gap_preservation)),
    ];

    let mut failed = 0;
    for (name, check) in &criteria {
        let v = check();
        let tag = if v.ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", v.detail);
        failed += usize::from(!v.ok);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
