//! Constructive approximation by skeleton members.
//!
//! [`sw_approximate`] builds a monotone `a` within `ε` of a monotone `f`
//! as a finite meet of "step" functions `a_{r,y}`, each equal to `r` below
//! `y` and to `max f` elsewhere. [`dieudonne_sequence`] interpolates a
//! skeleton member between `f` and `g` by a halving sequence of corrections.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fnalg::{RationalFn, SubalgebraPartition};
use crate::proximity::{OracleKind, ProximityOracle};
use crate::rational::{inv_pow2, int, Rational};
use crate::sampling::Sampler;
use crate::sbal::SbalSkeleton;
use crate::spectrum::canonical_witness;

/// One `a_{r,y}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction {
    pub r: Rational,
    pub y: usize,
    /// Points `x` whose witness was added to the cover of `F_r`.
    pub cover: Vec<usize>,
    pub a: RationalFn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SWCertificate {
    pub f: RationalFn,
    pub a: RationalFn,
    pub epsilon: Rational,
    pub s: Rational,
    pub t: Rational,
    pub family: Vec<StepFunction>,
    /// For each point `x`, the family index of the `a_x` in the final meet.
    pub cover: Vec<usize>,
}

impl SWCertificate {
    pub fn family_size(&self) -> usize {
        self.family.len()
    }

    pub fn error(&self) -> Rational {
        self.f.distance(&self.a)
    }

    /// Re-checks every invariant exactly; the first failure is described.
    pub fn verify(&self, skeleton: &SbalSkeleton) -> std::result::Result<(), String> {
        if !skeleton.contains(&self.a) {
            return Err(format!("output {} is not a skeleton member", self.a));
        }
        if self.error() > self.epsilon {
            return Err(format!("error {} exceeds epsilon {}", self.error(), self.epsilon));
        }
        if !self.f.le(&self.a) {
            return Err("output is not above f".into());
        }
        for m in &self.family {
            let fr: Vec<usize> = (0..self.f.len()).filter(|&x| self.f.value(x) >= &m.r).collect();
            let tag = || format!("a_{{{},{}}}", m.r, self.f.carrier()[m.y]);
            if m.a.values().iter().any(|v| v < &m.r || v > &self.s) {
                return Err(format!("{} leaves [r, s]", tag()));
            }
            if m.a.value(m.y) != &m.r {
                return Err(format!("{} does not equal r at y", tag()));
            }
            if fr.iter().any(|&x| m.a.value(x) != &self.s) {
                return Err(format!("{} is not s on F_r", tag()));
            }
            if !self.f.le(&m.a) {
                return Err(format!("{} is not above f", tag()));
            }
            if !skeleton.contains(&m.a) {
                return Err(format!("{} is not a skeleton member", tag()));
            }
        }
        Ok(())
    }
}

/// `r` values used by the construction: attained values and the `ε/2` grid
/// above `t`, restricted to `(t, s]`, plus `s`.
pub fn r_grid(f: &RationalFn, epsilon: &Rational) -> Vec<Rational> {
    let s = f.max_value().expect("nonempty").clone();
    let t = f.min_value().expect("nonempty").clone();
    let step = epsilon / int(2);
    let mut grid: BTreeSet<Rational> = f.values().iter().filter(|v| **v > t).cloned().collect();
    let mut r = &t + &step;
    while r <= s {
        grid.insert(r.clone());
        r += &step;
    }
    grid.insert(s);
    grid.into_iter().collect()
}

/// Approximates a monotone `f` within `ε` by a member of the skeleton.
pub fn sw_approximate(f: &RationalFn, skeleton: &SbalSkeleton, epsilon: &Rational) -> Result<SWCertificate> {
    if !epsilon.is_positive() {
        return Err(Error::NonPositiveEpsilon);
    }
    let order = skeleton.quasi_order();
    if let Some((i, j)) = order.monotonicity_violation(f)? {
        return Err(Error::NotMonotone(order.labels()[i].clone(), order.labels()[j].clone()));
    }
    let s = f.max_value().ok_or(Error::EmptyCarrier)?.clone();
    let t = f.min_value().ok_or(Error::EmptyCarrier)?.clone();
    let n = f.len();
    if f.is_constant() {
        return Ok(SWCertificate { f: f.clone(), a: f.clone(), epsilon: epsilon.clone(), s, t, family: vec![], cover: vec![] });
    }

    let half = Rational::one() / int(2);
    let one = RationalFn::constant(f.carrier().clone(), Rational::one());
    let mut family = Vec::new();
    for r in r_grid(f, epsilon) {
        let in_fr: Vec<bool> = f.values().iter().map(|v| v >= &r).collect();
        for y in (0..n).filter(|&y| !in_fr[y]) {
            // greedy cover of F_r by {c_x > 1/2}, c_x vanishing at y
            let mut covered = vec![false; n];
            let mut cover = Vec::new();
            let mut join: Option<RationalFn> = None;
            for x in 0..n {
                if !in_fr[x] || covered[x] {
                    continue;
                }
                let c = canonical_witness(order, y);
                debug_assert!(c.value(y).is_zero() && c.value(x).is_one());
                for (z, cz) in covered.iter_mut().enumerate() {
                    *cz |= c.value(z) > &half;
                }
                cover.push(x);
                join = Some(match join {
                    None => c,
                    Some(j) => j.join(&c),
                });
            }
            let b = join.expect("F_r is nonempty").scale(&int(2));
            let a = b.meet(&one).scale(&(&s - &r)).shift(&r);
            family.push(StepFunction { r: r.clone(), y, cover, a });
        }
    }

    // a_x: the step at y = x with the least r above f(x); at the top any step with r = s
    let mut cover = Vec::with_capacity(n);
    for x in 0..n {
        let fx = f.value(x);
        let pick = if fx == &s {
            family.iter().position(|m| m.r == s)
        } else {
            family.iter().position(|m| m.y == x && &m.r > fx)
        };
        let k = pick.ok_or_else(|| Error::NoApproximantWithinTolerance(format!("no grid step above {}", f.carrier()[x])))?;
        debug_assert!(family[k].a.value(x) < &(fx + epsilon));
        cover.push(k);
    }
    let a = cover.iter().skip(1).fold(family[cover[0]].a.clone(), |acc, &k| acc.meet(&family[k].a));
    Ok(SWCertificate { f: f.clone(), a, epsilon: epsilon.clone(), s, t, family, cover })
}

/// A sequence of pairs `(f_n, g_n)`, each proximal, approaching `(f, g)`.
pub trait ApproximantStream {
    fn pair(&self, n: u64) -> (RationalFn, RationalFn);
}

pub struct ConstantStream {
    pub f: RationalFn,
    pub g: RationalFn,
}

impl ApproximantStream for ConstantStream {
    fn pair(&self, _n: u64) -> (RationalFn, RationalFn) {
        (self.f.clone(), self.g.clone())
    }
}

/// `(f - 1/n, g + 1/n)`.
pub struct PerturbedStream {
    pub f: RationalFn,
    pub g: RationalFn,
}

impl ApproximantStream for PerturbedStream {
    fn pair(&self, n: u64) -> (RationalFn, RationalFn) {
        let d = Rational::one() / Rational::from_integer(n.into());
        (self.f.shift(&-&d), self.g.shift(&d))
    }
}

/// `(f_n ∨ lo, g_n ∧ hi)` for a base stream.
struct ClampedStream<'a> {
    base: &'a dyn ApproximantStream,
    lo: RationalFn,
    hi: RationalFn,
}

impl ApproximantStream for ClampedStream<'_> {
    fn pair(&self, n: u64) -> (RationalFn, RationalFn) {
        let (f, g) = self.base.pair(n);
        (f.join(&self.lo), g.meet(&self.hi))
    }
}

/// Largest stream index tried by [`dieudonne_claim`].
pub const STREAM_SEARCH_LIMIT: u64 = 1 << 40;

/// Finds a skeleton member `a` with `f - r <= a <= g`, given a stream of
/// proximal approximants of `(f, g)`.
pub fn dieudonne_claim(
    f: &RationalFn,
    g: &RationalFn,
    oracle: &ProximityOracle,
    r: &Rational,
    stream: &dyn ApproximantStream,
) -> Result<RationalFn> {
    if !r.is_positive() {
        return Err(Error::NonPositiveEpsilon);
    }
    let half = r / int(2);
    let mut p = 1u64;
    while p <= STREAM_SEARCH_LIMIT {
        let (fp, gp) = stream.pair(p);
        if f.distance(&fp) <= half && g.distance(&gp) <= half {
            if let Some(w) = oracle.prox_decide(&fp, &gp)? {
                return Ok(w.shift(&-&half));
            }
        }
        p *= 2;
    }
    Err(Error::NoApproximantWithinTolerance(format!("no proximal approximant of ({f}, {g}) within {half}")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DieudonneTrace {
    pub f: RationalFn,
    pub g: RationalFn,
    /// `a_0, ..., a_N`, with `a_0 = a_1`.
    pub terms: Vec<RationalFn>,
    /// Per `n >= 1`: `f - 1/2^n <= a_n <= g` and `|a_n - a_{n-1}| <= 1/2^{n-1}`.
    pub bounds_ok: Vec<bool>,
    /// `‖a_n - a_{n-1}‖` for `n >= 1`.
    pub step_distance: Vec<Rational>,
    /// The exact interpolant `envelope(f) ∧ g`.
    pub limit: RationalFn,
}

impl DieudonneTrace {
    pub fn all_bounds_ok(&self) -> bool {
        self.bounds_ok.iter().all(|&b| b)
    }

    /// `‖a_m - a_n‖ <= Σ_{k ∈ [n, m)} 1/2^k` for `n <= m`.
    pub fn cauchy_ok(&self, n: usize, m: usize) -> bool {
        let bound: Rational = (n..m).map(|k| inv_pow2(k as u32)).fold(Rational::zero(), |acc, x| acc + x);
        self.terms[m].distance(&self.terms[n]) <= bound
    }
}

fn sandwich_ok(f: &RationalFn, g: &RationalFn, prev: &RationalFn, a: &RationalFn, n: usize) -> bool {
    let lower = f.shift(&-inv_pow2(n as u32));
    let d = inv_pow2(n as u32 - 1);
    lower.le(a) && a.le(g) && prev.shift(&-&d).le(a) && a.le(&prev.shift(&d))
}

/// Runs `steps` halving corrections, starting from the constant stream of `(f, g)`.
pub fn dieudonne_sequence(f: &RationalFn, g: &RationalFn, oracle: &ProximityOracle, steps: usize) -> Result<DieudonneTrace> {
    let stream = ConstantStream { f: f.clone(), g: g.clone() };
    dieudonne_sequence_with(f, g, oracle, steps, &stream)
}

pub fn dieudonne_sequence_with(
    f: &RationalFn,
    g: &RationalFn,
    oracle: &ProximityOracle,
    steps: usize,
    stream: &dyn ApproximantStream,
) -> Result<DieudonneTrace> {
    let steps = steps.max(1);
    let limit = oracle
        .prox_decide(f, g)?
        .ok_or_else(|| Error::NoApproximantWithinTolerance(format!("{f} is not proximal to {g}")))?
        .meet(g);
    let a1 = dieudonne_claim(f, g, oracle, &inv_pow2(1), stream)?;
    let mut terms = vec![a1.clone(), a1];
    for m in 1..steps {
        let am = &terms[m];
        let lo = am.shift(&-inv_pow2(m as u32 + 1));
        let hi = am.shift(&inv_pow2(m as u32));
        let f2 = f.join(&lo);
        let g2 = g.meet(&hi);
        let derived = ClampedStream { base: stream, lo, hi };
        let next = dieudonne_claim(&f2, &g2, oracle, &inv_pow2(m as u32 + 1), &derived)?;
        terms.push(next);
    }
    let mut bounds_ok = Vec::with_capacity(steps);
    let mut step_distance = Vec::with_capacity(steps);
    for n in 1..=steps {
        bounds_ok.push(sandwich_ok(f, g, &terms[n - 1], &terms[n], n));
        step_distance.push(terms[n].distance(&terms[n - 1]));
    }
    Ok(DieudonneTrace { f: f.clone(), g: g.clone(), terms, bounds_ok, step_distance, limit })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosednessReport {
    pub prox_closed: bool,
    pub skeleton_closed: bool,
    pub agree: bool,
}

/// Whether the proximity and its skeleton are closed subsets.
///
/// Both built-in oracles are presented by finitely many weak linear
/// inequalities (`envelope(a) <= b`, resp. `max a <= min b`; `f(x) <= f(y)`
/// for the skeleton), and such sets are closed. The check confirms that
/// each presentation agrees with the oracle on samples and at boundary
/// points, where an open presentation would differ.
pub fn closed_iff_skeleton_closed(algebra: &SubalgebraPartition, oracle: &ProximityOracle, samples: usize, seed: u64) -> ClosednessReport {
    let carrier = oracle.carrier().clone();
    let n = carrier.len();
    let presented_prox = |a: &RationalFn, b: &RationalFn| match oracle.kind() {
        OracleKind::Skeleton => (0..n).all(|y| oracle.skeleton().quasi_order().down_set(y).iter().all(|&x| a.value(x) <= b.value(y))),
        OracleKind::R2 => a.max_value() <= b.min_value(),
    };
    let presented_member = |a: &RationalFn| match oracle.kind() {
        OracleKind::Skeleton => oracle.skeleton().quasi_order().pairs().all(|(x, y)| a.value(x) <= a.value(y)),
        OracleKind::R2 => a.value(0) == a.value(1),
    };
    let mut prox_closed = true;
    let mut skeleton_closed = true;
    let mut sampler = Sampler::new(seed);
    for _ in 0..samples {
        let a = algebra.lift(&(0..algebra.block_count()).map(|_| sampler.scalar()).collect::<Vec<_>>());
        let b = algebra.lift(&(0..algebra.block_count()).map(|_| sampler.scalar()).collect::<Vec<_>>());
        // boundary pair: b equal to the least admissible upper bound of a
        let edge = oracle.prox_decide(&a, &a.join(&b)).ok().flatten().unwrap_or_else(|| a.clone());
        for (p, q) in [(&a, &b), (&a, &edge)] {
            prox_closed &= oracle.decide(p, q).map(|d| d == presented_prox(p, q)).unwrap_or(false);
        }
        for c in [&a, &b, &edge] {
            skeleton_closed &= oracle.skeleton_membership(c).map(|m| m == presented_member(c)).unwrap_or(false);
        }
    }
    ClosednessReport { prox_closed, skeleton_closed, agree: prox_closed == skeleton_closed }
}
