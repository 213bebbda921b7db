//! The property suite: seeded trials of every checked property, run in
//! parallel and reported in trial order.
//!
//! Each trial draws its instance from `ChaCha8Rng::seed_from_u64(s)` where
//! `s` is derived from the suite seed, the property name and the trial index,
//! so any single trial can be regenerated on its own.

mod props;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fault::{with_mutant, Mutant};
use crate::io::InstanceFile;
use crate::linalg::CoeffRing;
use crate::obstruction::Obstruction;

pub use props::{axiom_checks, properties, Property};

pub const DEFAULT_RINGS: [CoeffRing; 5] = [
    CoeffRing::Integers,
    CoeffRing::IntegersMod(4),
    CoeffRing::IntegersMod(8),
    CoeffRing::IntegersMod(9),
    CoeffRing::PrimeField(5),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The instance fell outside the property's hypotheses (for example an
    /// extension was obstructed); the reason is in the record.
    Skip,
}

/// What one trial produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    pub witness: Option<Value>,
    pub obstruction: Option<Obstruction>,
    pub error: Option<String>,
    /// The instance and the `check` operation that replays it.
    pub instance: Option<(InstanceFile, &'static str)>,
}

impl Outcome {
    pub fn check(ok: bool) -> Self {
        Outcome {
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            witness: None,
            obstruction: None,
            error: None,
            instance: None,
        }
    }

    pub fn skip(obstruction: Option<Obstruction>) -> Self {
        Outcome { verdict: Verdict::Skip, witness: None, obstruction, error: None, instance: None }
    }

    pub fn witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    /// A failed trial from an error, keeping any obstruction it carries.
    pub fn error(e: Error) -> Self {
        match e {
            Error::Obstruction(o) => {
                Outcome { error: Some(o.to_string()), obstruction: Some(*o), ..Outcome::check(false) }
            }
            e => Outcome { error: Some(e.to_string()), ..Outcome::check(false) },
        }
    }

    /// Runs the rest of a trial once its instance is known, so that a
    /// failure still names the instance.
    pub fn guard(file: InstanceFile, op: &'static str, f: impl FnOnce() -> Result<Outcome>) -> Outcome {
        let out = f().unwrap_or_else(Outcome::error);
        if out.instance.is_some() {
            out
        } else {
            out.instance(file, op)
        }
    }

    pub fn instance(mut self, file: InstanceFile, op: &'static str) -> Self {
        self.instance = Some((file, op));
        self
    }
}

/// One line of a report.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Record {
    pub name: String,
    pub criterion: u8,
    pub trial: usize,
    pub instance_seed: u64,
    pub ring: CoeffRing,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Path of the written instance file, filled in by whoever writes it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay_op: Option<String>,
    pub wall_ms: f64,
    #[serde(skip)]
    pub instance: Option<InstanceFile>,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub rings: Vec<CoeffRing>,
    pub mutant: Option<Mutant>,
    /// Restrict to these property names.
    pub only: Option<Vec<String>>,
    /// Restrict to these criteria.
    pub criteria: Option<Vec<u8>>,
}

impl SuiteConfig {
    pub fn new(seed: u64, trials: usize) -> Self {
        SuiteConfig { seed, trials, rings: DEFAULT_RINGS.to_vec(), mutant: None, only: None, criteria: None }
    }

    fn selects(&self, p: &Property) -> bool {
        self.only.as_ref().is_none_or(|o| o.iter().any(|n| n == p.name))
            && self.criteria.as_ref().is_none_or(|c| c.contains(&p.criterion))
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The seed of trial `trial` of `property` in a suite seeded with `seed`.
pub fn instance_seed(seed: u64, property: &str, trial: usize) -> u64 {
    mix(mix(seed ^ fnv1a(property)).wrapping_add(trial as u64))
}

fn panic_message(e: Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| e.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".into())
}

/// Runs one trial of `p` with the given seed and ring.
pub fn run_trial(p: &Property, seed: u64, ring: CoeffRing, mutant: Option<Mutant>) -> (Outcome, Option<String>, f64) {
    let start = Instant::now();
    let res = with_mutant(mutant, || {
        catch_unwind(AssertUnwindSafe(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (p.run)(&mut rng, ring)
        }))
    });
    let ms = start.elapsed().as_secs_f64() * 1e3;
    match res {
        Ok(Ok(mut out)) => {
            let e = out.error.take();
            (out, e, ms)
        }
        Ok(Err(e)) => {
            let mut out = Outcome::error(e);
            let e = out.error.take();
            (out, e, ms)
        }
        Err(panic) => (Outcome::check(false), Some(format!("panic: {}", panic_message(panic))), ms),
    }
}

pub fn run_property(p: &Property, cfg: &SuiteConfig) -> Vec<Record> {
    let n = cfg.trials * p.weight;
    (0..n)
        .into_par_iter()
        .map(|trial| {
            let seed = instance_seed(cfg.seed, p.name, trial);
            let ring = cfg.rings[trial % cfg.rings.len()];
            let (out, error, wall_ms) = run_trial(p, seed, ring, cfg.mutant);
            let (instance, replay_op) = match out.instance {
                Some((f, op)) => (Some(f), Some(op.to_string())),
                None => (None, None),
            };
            Record {
                name: p.name.to_string(),
                criterion: p.criterion,
                trial,
                instance_seed: seed,
                ring,
                verdict: out.verdict,
                witness: out.witness,
                obstruction: out.obstruction,
                error,
                replay: None,
                replay_op,
                wall_ms,
                instance,
            }
        })
        .collect()
}

/// Every selected property in declaration order, trials in index order.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<Record> {
    properties().iter().filter(|p| cfg.selects(p)).flat_map(|p| run_property(p, cfg)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub name: String,
    pub criterion: u8,
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

impl Summary {
    pub fn ok(&self) -> bool {
        self.fail == 0
    }
}

/// Counts per property, in the order the properties first appear.
pub fn summarize(records: &[Record]) -> Vec<Summary> {
    let mut out: Vec<Summary> = Vec::new();
    for r in records {
        let i = match out.iter().position(|s| s.name == r.name) {
            Some(i) => i,
            None => {
                out.push(Summary { name: r.name.clone(), criterion: r.criterion, pass: 0, fail: 0, skip: 0 });
                out.len() - 1
            }
        };
        match r.verdict {
            Verdict::Pass => out[i].pass += 1,
            Verdict::Fail => out[i].fail += 1,
            Verdict::Skip => out[i].skip += 1,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_depend_on_every_input() {
        let a = instance_seed(1, "ex0", 0);
        assert_ne!(a, instance_seed(2, "ex0", 0));
        assert_ne!(a, instance_seed(1, "ex1", 0));
        assert_ne!(a, instance_seed(1, "ex0", 1));
        assert_eq!(a, instance_seed(1, "ex0", 0));
    }

    #[test]
    fn one_trial_per_property_is_deterministic() {
        let mut cfg = SuiteConfig::new(42, 1);
        cfg.rings = vec![CoeffRing::PrimeField(5)];
        let strip = |rs: Vec<Record>| rs.into_iter().map(|r| (r.name, r.verdict, r.witness)).collect::<Vec<_>>();
        let a = strip(run_suite(&cfg));
        assert_eq!(a, strip(run_suite(&cfg)));
        assert_eq!(a.len(), properties().iter().map(|p| p.weight).sum::<usize>());
        assert!(a.iter().all(|r| r.1 != Verdict::Fail), "{a:?}");
    }
}
