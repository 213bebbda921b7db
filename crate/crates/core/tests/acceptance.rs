//! Runs the property suite at full size and prints one line per criterion.
//! Built without the test harness so the lines are never captured.

use std::time::Instant;

use etafrob::fault::Mutant;
use etafrob::suite::{properties, run_suite, summarize, Record, SuiteConfig, Summary, Verdict};

const SEED: u64 = 20_240_601;
const TRIALS: usize = 100;
const MUTANT_TRIALS: usize = 10;

fn failures(records: &[Record]) -> Vec<String> {
    records
        .iter()
        .filter(|r| r.verdict == Verdict::Fail)
        .take(5)
        .map(|r| format!("{} trial {} over {} (seed {}): {:?}", r.name, r.trial, r.ring, r.instance_seed, r.error))
        .collect()
}

fn brute_force_count(records: &[Record]) -> (usize, usize) {
    let checked = records.iter().filter_map(|r| r.witness.as_ref()?.get("brute-force")?.as_bool()).collect::<Vec<_>>();
    (checked.len(), checked.iter().filter(|&&b| b).count())
}

/// Every property of the criterion ran its full trial count, never failed,
/// and passed at least once.
fn criterion_holds(summaries: &[Summary], c: u8, min: impl Fn(&str) -> usize) -> bool {
    let own: Vec<_> = summaries.iter().filter(|s| s.criterion == c).collect();
    !own.is_empty() && own.iter().all(|s| s.ok() && s.pass > 0 && s.pass + s.skip >= min(&s.name))
}

fn line(c: u8, ok: bool, detail: String) {
    println!("criterion {c}: {} {detail}", if ok { "PASS" } else { "FAIL" });
}

fn main() {
    let start = Instant::now();
    let records = run_suite(&SuiteConfig::new(SEED, TRIALS));
    let summaries = summarize(&records);
    for s in &summaries {
        println!("  {:<32} pass {:>4}  skip {:>4}  fail {:>4}", s.name, s.pass, s.skip, s.fail);
    }
    let bad = failures(&records);
    for f in &bad {
        println!("  failed: {f}");
    }

    let mut all = true;
    for c in 1..=6u8 {
        let ok =
            criterion_holds(&summaries, c, |name| if name == "eta-homotopy-after-eta" { 2 * TRIALS } else { TRIALS });
        let own: Vec<_> = records.iter().filter(|r| r.criterion == c).cloned().collect();
        let detail = match c {
            4 => {
                let (n, agree) = brute_force_count(&own);
                format!("({} trials, brute force over Z/4 on {n} instances, {agree} agreeing)", own.len())
            }
            _ => format!("({} trials)", own.len()),
        };
        line(c, ok, detail);
        all &= ok;
    }

    let mut caught = Vec::new();
    for m in Mutant::ALL {
        let mut cfg = SuiteConfig::new(SEED, MUTANT_TRIALS);
        cfg.mutant = Some(m);
        let rs = run_suite(&cfg);
        let failed: Vec<_> = summarize(&rs).into_iter().filter(|s| !s.ok()).map(|s| s.name).collect();
        println!("  mutant {:<20} caught by {failed:?}", m.name());
        caught.push(!failed.is_empty());
    }
    let ok7 = caught.iter().all(|&b| b);
    line(7, ok7, format!("({} of {} mutants caught)", caught.iter().filter(|&&b| b).count(), caught.len()));
    all &= ok7;

    println!("properties: {}, wall time {:.1} s", properties().len(), start.elapsed().as_secs_f64());
    if !all {
        eprintln!("acceptance criteria failed");
        std::process::exit(1);
    }
}
