//! Pass/fail reports for sampled axiom suites.

use serde::Serialize;

use crate::fnalg::RationalFn;
use crate::rational::format_rational;

/// A named tuple of functions (and scalars) on which a check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub sample: usize,
    pub bindings: Vec<(String, String)>,
}

impl Counterexample {
    pub fn new(sample: usize) -> Self {
        Self { sample, bindings: Vec::new() }
    }

    pub fn with_fn(mut self, name: &str, f: &RationalFn) -> Self {
        self.bindings.push((name.to_string(), f.to_string()));
        self
    }

    pub fn with_scalar(mut self, name: &str, r: &crate::rational::Rational) -> Self {
        self.bindings.push((name.to_string(), format_rational(r)));
        self
    }
}

/// Outcome of one axiom over all samples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomOutcome {
    pub axiom: String,
    /// Instances whose premise held, so the conclusion was actually tested.
    pub checked: usize,
    pub violations: usize,
    pub counterexample: Option<Counterexample>,
}

impl AxiomOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub subject: String,
    pub samples: usize,
    pub seed: u64,
    pub outcomes: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(AxiomOutcome::passed)
    }

    pub fn outcome(&self, axiom: &str) -> Option<&AxiomOutcome> {
        self.outcomes.iter().find(|o| o.axiom == axiom)
    }
}

/// Accumulates outcomes for a fixed list of axiom names.
pub(crate) struct Tally {
    outcomes: Vec<AxiomOutcome>,
}

impl Tally {
    pub fn new(names: &[&str]) -> Self {
        let outcomes = names
            .iter()
            .map(|n| AxiomOutcome { axiom: n.to_string(), checked: 0, violations: 0, counterexample: None })
            .collect();
        Self { outcomes }
    }

    fn slot(&mut self, axiom: &str) -> &mut AxiomOutcome {
        self.outcomes.iter_mut().find(|o| o.axiom == axiom).expect("axiom registered in tally")
    }

    /// Records one tested instance; `witness` is only built on failure.
    pub fn record(&mut self, axiom: &str, ok: bool, witness: impl FnOnce() -> Counterexample) {
        let slot = self.slot(axiom);
        slot.checked += 1;
        if !ok {
            slot.violations += 1;
            if slot.counterexample.is_none() {
                slot.counterexample = Some(witness());
            }
        }
    }

    pub fn merge(&mut self, other: Tally) {
        for o in other.outcomes {
            let slot = self.slot(&o.axiom);
            slot.checked += o.checked;
            slot.violations += o.violations;
            slot.counterexample = match (slot.counterexample.take(), o.counterexample) {
                (Some(a), Some(b)) => Some(if b.sample < a.sample { b } else { a }),
                (a, b) => a.or(b),
            };
        }
    }

    pub fn finish(self, subject: String, samples: usize, seed: u64) -> AxiomReport {
        AxiomReport { subject, samples, seed, outcomes: self.outcomes }
    }
}

/// Runs `check(sample_index, tally)` for every sample across worker threads.
///
/// Each sample must derive its randomness from its own index, so the merged
/// tally does not depend on the number of workers.
pub(crate) fn fan_out<F>(samples: usize, names: &[&str], check: F) -> Tally
where
    F: Fn(usize, &mut Tally) + Sync,
{
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).clamp(1, 8);
    let chunk = samples.div_ceil(workers).max(1);
    let mut total = Tally::new(names);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..samples)
            .step_by(chunk)
            .map(|start| {
                let check = &check;
                scope.spawn(move || {
                    let mut t = Tally::new(names);
                    for i in start..(start + chunk).min(samples) {
                        check(i, &mut t);
                    }
                    t
                })
            })
            .collect();
        for h in handles {
            total.merge(h.join().expect("axiom worker panicked"));
        }
    });
    total
}
