//! Deterministic sampling of small-denominator functions.
//!
//! All randomness derives from one 64-bit seed. Independent streams (one per
//! worker, per instance, ...) are split off with ChaCha's 64-bit stream
//! selector, so a run is reproducible from `(seed, stream)` alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fnalg::{Carrier, RationalFn};
use crate::order::{Direction, FinitePoset, QuasiOrder};
use crate::rational::{rat, Rational};

/// Denominator of sampled coordinates.
pub const DENOM: i64 = 8;
/// Sampled numerators lie in `[-SPAN, SPAN]`.
pub const SPAN: i64 = 16;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// `k / 8` with `k` uniform in `[-16, 16]`.
    pub fn scalar(&mut self) -> Rational {
        rat(self.rng.gen_range(-SPAN..=SPAN), DENOM)
    }

    /// `k / 8` with `k` uniform in `[0, 16]`.
    pub fn nonneg_scalar(&mut self) -> Rational {
        rat(self.rng.gen_range(0..=SPAN), DENOM)
    }

    pub fn function(&mut self, carrier: &Carrier) -> RationalFn {
        let values = (0..carrier.len()).map(|_| self.scalar()).collect();
        RationalFn::new(carrier.clone(), values).expect("length matches carrier")
    }

    pub fn nonneg_function(&mut self, carrier: &Carrier) -> RationalFn {
        let values = (0..carrier.len()).map(|_| self.nonneg_scalar()).collect();
        RationalFn::new(carrier.clone(), values).expect("length matches carrier")
    }

    /// A monotone function: the upper envelope of a random function,
    /// occasionally replaced by a constant so degenerate members show up.
    pub fn monotone_function(&mut self, order: &QuasiOrder) -> RationalFn {
        if self.rng.gen_ratio(1, 8) {
            return RationalFn::constant(order.labels().clone(), self.scalar());
        }
        let f = self.function(order.labels());
        let dir = if self.rng.gen_bool(0.5) { Direction::Upper } else { Direction::Lower };
        order.monotone_envelope(&f, dir).expect("same carrier")
    }

    /// Uniform choice from a slice.
    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.rng.gen_range(0..items.len())]
    }

    /// A random poset on `n` points: a random DAG on a shuffled natural
    /// labelling, closed transitively.
    pub fn poset(&mut self, n: usize) -> FinitePoset {
        let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.rng.gen_bool(0.4) {
                    edges.push((i, j));
                }
            }
        }
        let q = QuasiOrder::closure(labels.into(), &edges);
        FinitePoset::try_from_quasi(q).expect("edges respect a natural labelling")
    }
}
