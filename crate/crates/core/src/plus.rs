//! Positive-cone presentation of skeletons.
//!
//! `P` sends a skeleton `S` to its nonnegative members `S⁺`; `Q` sends a
//! cone back to the formal shifts `{a - r : a ∈ S⁺, r ∈ R}`. Membership in
//! `Q S⁺` is decided by shift decomposition: `f = (f + r) - r` with
//! `r = max(0, -min f)`, which works whenever some shift does because the
//! cone is closed under adding nonnegative constants.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fnalg::{same_carrier, Carrier, RationalFn};
use crate::order::{enumerate, QuasiOrder};
use crate::rational::{rat, Rational};
use crate::report::{fan_out, AxiomReport, Counterexample};
use crate::sampling::Sampler;
use crate::sbal::SbalSkeleton;

/// Nonnegative monotone functions for a quasi-order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SbalPlusSkeleton {
    order: QuasiOrder,
}

impl SbalPlusSkeleton {
    pub fn new(order: QuasiOrder) -> Self {
        Self { order }
    }

    pub fn quasi_order(&self) -> &QuasiOrder {
        &self.order
    }

    pub fn carrier(&self) -> &Carrier {
        self.order.labels()
    }

    pub fn contains(&self, f: &RationalFn) -> bool {
        f.is_nonnegative() && self.order.is_monotone(f).unwrap_or(false)
    }

    /// `b` with `a = b + r`, if `r <= a` and `a` is a member.
    pub fn difference(&self, a: &RationalFn, r: &Rational) -> Option<RationalFn> {
        if !self.contains(a) || r.is_negative() {
            return None;
        }
        let b = a.shift(&-r);
        self.contains(&b).then_some(b)
    }
}

pub fn positive_cone(skeleton: &SbalSkeleton) -> SbalPlusSkeleton {
    SbalPlusSkeleton::new(skeleton.quasi_order().clone())
}

/// The skeleton of shifts of `S⁺`; its order is read off from `S⁺`.
pub fn q_envelope(cone: &SbalPlusSkeleton) -> SbalSkeleton {
    SbalSkeleton::new(cone.quasi_order().clone())
}

/// Writes `f` as `a - r` with `a ∈ S⁺` and `r >= 0`, if possible.
pub fn shift_decompose(cone: &SbalPlusSkeleton, f: &RationalFn) -> Result<Option<(RationalFn, Rational)>> {
    if !same_carrier(cone.carrier(), f.carrier()) {
        return Err(Error::CarrierMismatch);
    }
    let min = f.min_value().ok_or(Error::EmptyCarrier)?;
    let r = if min.is_negative() { -min } else { Rational::zero() };
    let a = f.shift(&r);
    Ok(cone.contains(&a).then_some((a, r)))
}

/// Membership in `Q S⁺`, decided through the shift decomposition alone.
pub fn q_contains(cone: &SbalPlusSkeleton, f: &RationalFn) -> Result<bool> {
    Ok(shift_decompose(cone, f)?.is_some())
}

pub const PLUS_AXIOMS: [&str; 8] = ["constants", "add", "join", "meet", "mul", "scalar", "difference", "join-identity"];

/// Samples the cone laws, the difference axiom, and the lattice identity
/// `(a - r) ∨ (b - s) = ((a + s) ∨ (b + r)) - (r + s)` used for `Q S⁺`.
pub fn check_plus_axioms(cone: &SbalPlusSkeleton, samples: usize, seed: u64) -> AxiomReport {
    let order = cone.quasi_order();
    let tally = fan_out(samples, &PLUS_AXIOMS, |i, t| {
        let mut s = Sampler::with_stream(seed, i as u64);
        let member = |s: &mut Sampler| {
            let f = s.monotone_function(order);
            let lift = f.min_value().map(|m| if m.is_negative() { -m } else { Rational::zero() }).unwrap_or_default();
            f.shift(&lift)
        };
        let (a, b) = (member(&mut s), member(&mut s));
        let (r, q) = (s.nonneg_scalar(), s.nonneg_scalar());
        let k = RationalFn::constant(cone.carrier().clone(), r.clone());
        let ce = || Counterexample::new(i).with_fn("a", &a).with_fn("b", &b).with_scalar("r", &r);
        t.record("constants", cone.contains(&k), ce);
        t.record("add", cone.contains(&(&a + &b)), ce);
        t.record("join", cone.contains(&a.join(&b)), ce);
        t.record("meet", cone.contains(&a.meet(&b)), ce);
        t.record("mul", cone.contains(&(&a * &b)), ce);
        t.record("scalar", cone.contains(&a.scale(&r)), ce);
        // force the premise r <= a by lifting a
        let lifted = a.shift(&r);
        t.record("difference", cone.difference(&lifted, &r).as_ref() == Some(&a), ce);
        let lhs = a.shift(&-&r).join(&b.shift(&-&q));
        let rhs = a.shift(&q).join(&b.shift(&r)).shift(&-(&r + &q));
        t.record("join-identity", lhs == rhs, ce);
    });
    tally.finish(format!("cone[{}]", order.labels().join(",")), samples, seed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripMismatch {
    pub side: String,
    pub function: String,
    pub expected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub grid_points: usize,
    pub random_samples: usize,
    pub qp_checked: usize,
    pub pq_checked: usize,
    /// Cone members checked to decompose with a zero shift.
    pub positive_part_checked: usize,
    pub mismatch: Option<RoundtripMismatch>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// All functions with values `k/denom`, `|k/denom| <= bound`.
pub fn grid(carrier: &Carrier, denom: i64, bound: i64) -> Vec<RationalFn> {
    let steps = (2 * bound * denom + 1) as usize;
    enumerate::all_maps(carrier.len(), steps)
        .into_iter()
        .map(|ks| {
            let values = ks.iter().map(|&k| rat(k as i64 - bound * denom, denom)).collect();
            RationalFn::new(carrier.clone(), values).expect("length matches")
        })
        .collect()
}

/// Checks `Q(P(S)) = S` and `P(Q(S⁺)) = S⁺` membership-wise on the
/// `k/denom` grid in `[-bound, bound]` and on random samples.
pub fn roundtrip_pq(skeleton: &SbalSkeleton, denom: i64, bound: i64, samples: usize, seed: u64) -> Result<RoundtripReport> {
    let carrier = skeleton.carrier().clone();
    let cone = positive_cone(skeleton);
    let qp = |f: &RationalFn| q_contains(&cone, f);
    let pq = |f: &RationalFn| Ok::<_, Error>(f.is_nonnegative() && q_contains(&cone, f)?);

    let mut inputs = grid(&carrier, denom, bound);
    let grid_points = inputs.len();
    let mut sampler = Sampler::new(seed);
    for _ in 0..samples {
        inputs.push(sampler.function(&carrier));
        inputs.push(sampler.monotone_function(skeleton.quasi_order()));
    }

    let mut report = RoundtripReport {
        grid_points,
        random_samples: 2 * samples,
        qp_checked: 0,
        pq_checked: 0,
        positive_part_checked: 0,
        mismatch: None,
    };
    for f in &inputs {
        let in_s = skeleton.contains(f);
        report.qp_checked += 1;
        if qp(f)? != in_s {
            report.mismatch = Some(RoundtripMismatch { side: "QP".into(), function: f.to_string(), expected: in_s });
            break;
        }
        let in_plus = cone.contains(f);
        report.pq_checked += 1;
        if pq(f)? != in_plus {
            report.mismatch = Some(RoundtripMismatch { side: "PQ".into(), function: f.to_string(), expected: in_plus });
            break;
        }
        // nonnegative members of Q S⁺ are cone members themselves
        if in_plus {
            report.positive_part_checked += 1;
            let decomposed = shift_decompose(&cone, f)?.map(|(a, r)| r.is_zero() && &a == f);
            if decomposed != Some(true) {
                report.mismatch = Some(RoundtripMismatch { side: "positive part".into(), function: f.to_string(), expected: true });
                break;
            }
        }
    }
    Ok(report)
}
