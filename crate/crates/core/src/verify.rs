//! Property suite behind `scs verify`.
//!
//! Each seed yields one random dataset (and a copy in which `a` is renamed
//! to the important symbol `#`). Every check runs on every dataset and
//! collects counterexample dumps instead of stopping at the first failure.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_rational::Ratio;

use crate::disturb::{check_tie_free, disturb, disturb_report, step_roles, DisturbParams};
use crate::error::Result;
use crate::freq::{inflate_important, interleave_sentinel, lift_violations, lifting_factor};
use crate::gen::random_dataset;
use crate::greedy::{run_greedy, run_greedy_sharp, verify_trace, TieBreakPolicy};
use crate::oracle::{approx_ratio, brute_force_scs, exact_scs, exact_scs_sharp, BRUTE_FORCE_MAX};
use crate::rng::SplitMix64;
use crate::strcore::{count_symbol, overlap, overlap_len, Dataset, SString};

pub const SENTINEL: char = '$';
pub const IMPORTANT: char = '#';

/// Failure dumps kept per check; the count is always exact.
const MAX_DUMPS: usize = 5;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seeds: RangeInclusive<u64>,
    pub n_max: usize,
    pub len_max: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seeds: 1..=100,
            n_max: 7,
            len_max: 10,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub dumps: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome {
            name,
            ..Default::default()
        }
    }

    fn record(&mut self, ok: bool, dump: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.dumps.len() < MAX_DUMPS {
                self.dumps.push(dump());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub datasets: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "datasets: {}", self.datasets);
        let _ = writeln!(
            out,
            "{:<24} {:>8} {:>8}  status",
            "check", "cases", "failures"
        );
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{:<24} {:>8} {:>8}  {status}",
                c.name, c.cases, c.failures
            );
        }
        for c in self.checks.iter().filter(|c| !c.passed()) {
            let _ = writeln!(out, "\ncounterexamples for {}:", c.name);
            for d in &c.dumps {
                let _ = writeln!(out, "---\n{d}");
            }
        }
        out
    }
}

/// The random dataset used for `seed`: `n` in `2..=n_max`, alphabet of
/// 2 to 4 letters, lengths `1..=len_max`.
pub fn corpus_dataset(seed: u64, n_max: usize, len_max: usize) -> Result<Dataset> {
    let mut rng = SplitMix64::new(seed ^ 0x5EED_0FC0_4B05);
    let n = rng.range_inclusive(2, n_max.max(2));
    let alphabet = rng.range_inclusive(2, 4);
    Ok(random_dataset(seed, n, 1, len_max.max(1), alphabet)?.dataset)
}

/// Renames `a` to `#`; a bijection on symbols, so the result stays
/// substring-free and `#` occurs whenever `a` did.
pub fn with_important(d: &Dataset) -> Result<Dataset> {
    let strings = d
        .strings()
        .iter()
        .map(|s| {
            SString::new(
                s.iter()
                    .map(|&c| if c == 'a' { IMPORTANT } else { c })
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(strings)
}

fn dump(d: &Dataset, note: String) -> String {
    format!("{note}\n{}", d.to_text().trim_end())
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut prediction = CheckOutcome::new("overlap-prediction");
    let mut order = CheckOutcome::new("overlap-order");
    let mut coincide = CheckOutcome::new("policy-agreement");
    let mut tie_free = CheckOutcome::new("tie-free");
    let mut scale = CheckOutcome::new("optimum-scaling");
    let mut interleave = CheckOutcome::new("interleave-optimum");
    let mut inflation = CheckOutcome::new("inflation-identity");
    let mut lifting = CheckOutcome::new("sharp-lifting");
    let mut oracle = CheckOutcome::new("oracle-equivalence");
    let mut greedy = CheckOutcome::new("greedy-trace");

    let mut datasets = 0;
    for seed in cfg.seeds.clone() {
        let d = corpus_dataset(seed, cfg.n_max, cfg.len_max)?;
        datasets += 1;
        let n = d.len();
        let src = d.overlap_matrix();
        let opt = exact_scs(&d)?;
        let policies = TieBreakPolicy::builtin(seed);

        for p in policies {
            let res = run_greedy(&d, p);
            let ok = verify_trace(&d, &res)
                && res.endpoint_anomalies.is_empty()
                && res.superstring.len() >= opt.length
                && approx_ratio(res.superstring.len(), opt.length)? <= Ratio::new(7, 2);
            greedy.record(ok, || dump(&d, format!("seed {seed} policy {p}: {res:?}")));

            let roles = step_roles(&res.trace, n);
            let t = roles.trivial_step;
            for m in [2 * n + 1, 10 * (2 * n + 1)] {
                let params = DisturbParams::base(m, SENTINEL);
                let dd = disturb(&d, &roles, &params)?;
                let rep = disturb_report(&d, &dd, &roles, &params);
                prediction.record(rep.mismatches.is_empty(), || {
                    dump(
                        &d,
                        format!(
                            "seed {seed} policy {p} m {m}: mismatches {:?}",
                            rep.mismatches
                        ),
                    )
                });

                let opt2 = exact_scs(&dd)?.length;
                let dev = (opt2 as i64 - ((m + 1) * opt.length) as i64).unsigned_abs() as usize;
                scale.record(dev <= 2 * n * n, || {
                    dump(
                        &d,
                        format!(
                            "seed {seed} policy {p} m {m}: |OPT'| {opt2}, |OPT| {}",
                            opt.length
                        ),
                    )
                });

                if m == 2 * n + 1 {
                    let dist = &rep.actual_overlaps;
                    let mut ok = true;
                    for (i, j) in pairs(n) {
                        for (k, l) in pairs(n) {
                            if src[i][j] > src[k][l] && dist[i][j] <= dist[k][l] {
                                ok = false;
                            }
                        }
                    }
                    order.record(ok, || dump(&d, format!("seed {seed} policy {p} m {m}")));

                    let runs: Vec<_> = policies.iter().map(|&q| run_greedy(&dd, q)).collect();
                    let same_len = runs
                        .iter()
                        .all(|r| r.superstring.len() == runs[0].superstring.len());
                    let prefix = t.saturating_sub(1);
                    let same_prefix = runs.iter().all(|r| {
                        r.trace.trivial_step() == t
                            && r.trace.pairs()[..prefix] == res.trace.pairs()[..prefix]
                    });
                    coincide.record(same_len && same_prefix, || {
                        let lens: Vec<_> = runs.iter().map(|r| r.superstring.len()).collect();
                        dump(
                            &d,
                            format!("seed {seed} source policy {p} m {m}: lengths {lens:?}"),
                        )
                    });
                    tie_free.record(check_tie_free(&dd), || {
                        dump(&d, format!("seed {seed} source policy {p} m {m}"))
                    });
                }
            }
        }

        if n <= BRUTE_FORCE_MAX {
            let bf = brute_force_scs(&d)?;
            oracle.record(bf == opt, || {
                dump(&d, format!("seed {seed}: dp {opt:?} brute {bf:?}"))
            });
        }

        let inter = interleave_sentinel(&d, SENTINEL)?;
        let sharp = exact_scs_sharp(&inter, SENTINEL)?;
        let mut ok = sharp.sharp_length == opt.length;
        for (i, j) in pairs(n) {
            ok &= count_symbol(overlap(inter.get(i), inter.get(j)), SENTINEL) == src[i][j];
        }
        interleave.record(ok, || {
            dump(
                &d,
                format!(
                    "seed {seed}: |OPT| {} vs sharp {}",
                    opt.length, sharp.sharp_length
                ),
            )
        });

        let di = with_important(&d)?;
        if di.position_of_symbol(IMPORTANT).is_some() {
            for m in [2, 3, 10] {
                let inflated = inflate_important(&di, IMPORTANT, m)?;
                let mut bad = Vec::new();
                for (i, j) in pairs(n) {
                    let y = overlap(di.get(i), di.get(j));
                    let expect = y.len() + (m - 1) * count_symbol(y, IMPORTANT);
                    if overlap_len(inflated.get(i), inflated.get(j)) != expect {
                        bad.push((i, j));
                    }
                }
                inflation.record(bad.is_empty(), || {
                    dump(&di, format!("seed {seed} m {m}: pairs {bad:?}"))
                });
            }
            let m = lifting_factor(&di);
            for p in policies {
                let res = run_greedy_sharp(&di, IMPORTANT, p);
                let bad = lift_violations(&di, &res.trace, IMPORTANT, m)?;
                lifting.record(bad.is_empty(), || {
                    dump(&di, format!("seed {seed} policy {p} m {m}: steps {bad:?}"))
                });
            }
        }
    }

    Ok(SuiteReport {
        datasets,
        checks: vec![
            prediction, order, coincide, tie_free, scale, interleave, inflation, lifting, oracle,
            greedy,
        ],
    })
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> + Clone {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}
