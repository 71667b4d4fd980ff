//! Proximity relations presented by decision procedures.
//!
//! `a ≺ b` holds when some skeleton member fits between `a` and `b`. For a
//! skeleton of monotone functions the canonical interpolant is the upper
//! monotone envelope of `a`, so `a ≺ b` iff `envelope(a) <= b`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fnalg::{carrier, same_carrier, Carrier, RationalFn, SubalgebraPartition};
use crate::order::{Direction, QuasiOrder};
use crate::rational::Rational;
use crate::report::{fan_out, AxiomReport, Counterexample, Tally};
use crate::sampling::Sampler;
use crate::sbal::SbalSkeleton;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    /// `≺_S` for a skeleton `S`, decided through the monotone envelope.
    Skeleton,
    /// The two-point example `(a,b) ≺ (c,d)` iff some real lies in both
    /// `[a,c]` and `[b,d]`, decided in closed form.
    R2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProximityOracle {
    kind: OracleKind,
    skeleton: SbalSkeleton,
}

pub fn r2_carrier() -> Carrier {
    carrier(&["1", "2"])
}

/// Closed form of `∃ r : a₁ <= r <= b₁ and a₂ <= r <= b₂`.
pub fn r2_decide(a: (&Rational, &Rational), b: (&Rational, &Rational)) -> bool {
    a.0.max(a.1) <= b.0.min(b.1)
}

impl ProximityOracle {
    pub fn from_skeleton(skeleton: SbalSkeleton) -> Self {
        Self { kind: OracleKind::Skeleton, skeleton }
    }

    /// The proximity on `R^2` whose reflexive elements are the diagonal.
    pub fn r2() -> Self {
        Self { kind: OracleKind::R2, skeleton: SbalSkeleton::constants(r2_carrier()) }
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    pub fn name(&self) -> String {
        match self.kind {
            OracleKind::Skeleton => format!("skeleton[{}]", self.carrier().join(",")),
            OracleKind::R2 => "r2".to_string(),
        }
    }

    /// The skeleton `R(A, ≺)` of reflexive elements.
    pub fn skeleton(&self) -> &SbalSkeleton {
        &self.skeleton
    }

    pub fn carrier(&self) -> &Carrier {
        self.skeleton.carrier()
    }

    fn check(&self, f: &RationalFn) -> Result<()> {
        if same_carrier(self.carrier(), f.carrier()) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch)
        }
    }

    /// Decides `a ≺ b`, returning an interpolating skeleton member when it holds.
    pub fn prox_decide(&self, a: &RationalFn, b: &RationalFn) -> Result<Option<RationalFn>> {
        self.check(a)?;
        self.check(b)?;
        match self.kind {
            OracleKind::Skeleton => {
                let w = self.skeleton.envelope(a, Direction::Upper)?;
                Ok(w.le(b).then_some(w))
            }
            OracleKind::R2 => {
                let (a0, a1, b0, b1) = (a.value(0), a.value(1), b.value(0), b.value(1));
                Ok(r2_decide((a0, a1), (b0, b1)).then(|| RationalFn::constant(a.carrier().clone(), a0.max(a1).clone())))
            }
        }
    }

    pub fn decide(&self, a: &RationalFn, b: &RationalFn) -> Result<bool> {
        Ok(self.prox_decide(a, b)?.is_some())
    }

    /// Membership in the skeleton, decided directly rather than via `a ≺ a`.
    pub fn skeleton_membership(&self, a: &RationalFn) -> Result<bool> {
        self.check(a)?;
        Ok(match self.kind {
            OracleKind::Skeleton => self.skeleton.contains(a),
            OracleKind::R2 => a.value(0) == a.value(1),
        })
    }

    fn holds(&self, a: &RationalFn, b: &RationalFn) -> bool {
        self.decide(a, b).expect("sampled functions share the oracle carrier")
    }
}

pub const PROXIMITY_AXIOMS: [&str; 10] = ["P1", "P2", "P3", "P4", "P5", "RP5", "P6", "P7", "P8", "P9"];
pub const DEVRIES_AXIOMS: [&str; 2] = ["P11", "P12"];

/// A pair `(s - u, s + v)` around a random skeleton member `s`.
fn proximal_pair(s: &mut Sampler, oracle: &ProximityOracle) -> (RationalFn, RationalFn) {
    let member = s.monotone_function(oracle.skeleton().quasi_order());
    let c = oracle.carrier();
    let below = &member - &s.nonneg_function(c);
    let above = &member + &s.nonneg_function(c);
    (below, above)
}

/// Samples P1–P9 and RP5 (and P11, P12 when `include_devries`).
///
/// Each axiom is exercised both on raw random tuples (tested only when the
/// premise happens to hold) and on tuples built so the premise holds by
/// construction. Interpolants for P5/RP5 are the certificates returned by
/// [`ProximityOracle::prox_decide`]; the existential in P12 is decided
/// exactly through the lower monotone envelope.
pub fn check_axioms(oracle: &ProximityOracle, samples: usize, seed: u64, include_devries: bool) -> AxiomReport {
    let mut names: Vec<&str> = PROXIMITY_AXIOMS.to_vec();
    if include_devries {
        names.extend(DEVRIES_AXIOMS);
    }
    let c = oracle.carrier().clone();
    let zero = RationalFn::zero(c.clone());
    let prec = |a: &RationalFn, b: &RationalFn| oracle.holds(a, b);
    let tally = fan_out(samples, &names, |i, t: &mut Tally| {
        let mut s = Sampler::with_stream(seed, i as u64);
        let raw: Vec<RationalFn> = (0..4).map(|_| s.function(&c)).collect();
        let (a, b) = proximal_pair(&mut s, oracle);
        let (c2, d2) = proximal_pair(&mut s, oracle);
        let pairs = [(raw[0].clone(), raw[1].clone()), (a.clone(), b.clone()), (c2.clone(), d2.clone())];

        for (x, y) in &pairs {
            if prec(x, y) {
                t.record("P1", x.le(y), || Counterexample::new(i).with_fn("a", x).with_fn("b", y));
            }
        }

        // P2: a' <= a ≺ b <= b'
        let lower = &a - &s.nonneg_function(&c);
        let upper = &b + &s.nonneg_function(&c);
        t.record("P2", prec(&lower, &upper), || {
            Counterexample::new(i).with_fn("a", &lower).with_fn("b", &a).with_fn("c", &b).with_fn("d", &upper)
        });
        let (r0, r1, r2, r3) = (&raw[0], &raw[1], &raw[2], &raw[3]);
        if r0.le(r1) && prec(r1, r2) && r2.le(r3) {
            t.record("P2", prec(r0, r3), || Counterexample::new(i).with_fn("a", r0).with_fn("d", r3));
        }

        // P3 and P4 on members s1, s2
        let order = oracle.skeleton().quasi_order();
        let s1 = s.monotone_function(order);
        let s2 = s.monotone_function(order);
        let x = &s1.meet(&s2) - &s.nonneg_function(&c);
        let y1 = &s1 + &s.nonneg_function(&c);
        let y2 = &s2 + &s.nonneg_function(&c);
        if prec(&x, &y1) && prec(&x, &y2) {
            t.record("P3", prec(&x, &y1.meet(&y2)), || {
                Counterexample::new(i).with_fn("a", &x).with_fn("b", &y1).with_fn("c", &y2)
            });
        }
        if prec(r0, r1) && prec(r0, r2) {
            t.record("P3", prec(r0, &r1.meet(r2)), || Counterexample::new(i).with_fn("a", r0).with_fn("b", r1).with_fn("c", r2));
        }
        let z = &s1.join(&s2) + &s.nonneg_function(&c);
        let w1 = &s1 - &s.nonneg_function(&c);
        let w2 = &s2 - &s.nonneg_function(&c);
        if prec(&w1, &z) && prec(&w2, &z) {
            t.record("P4", prec(&w1.join(&w2), &z), || {
                Counterexample::new(i).with_fn("a", &w1).with_fn("b", &w2).with_fn("c", &z)
            });
        }
        if prec(r0, r2) && prec(r1, r2) {
            t.record("P4", prec(&r0.join(r1), r2), || Counterexample::new(i).with_fn("a", r0).with_fn("b", r1).with_fn("c", r2));
        }

        // P5 / RP5 via the returned interpolant
        for (x, y) in &pairs {
            if let Some(w) = oracle.prox_decide(x, y).expect("carrier checked") {
                let cx = || Counterexample::new(i).with_fn("a", x).with_fn("b", y).with_fn("c", &w);
                t.record("P5", prec(x, &w) && prec(&w, y), cx);
                t.record("RP5", prec(&w, &w) && prec(x, &w) && prec(&w, y), cx);
            }
        }

        t.record("P6", prec(&(&a + &c2), &(&b + &d2)), || {
            Counterexample::new(i).with_fn("a", &a).with_fn("b", &b).with_fn("c", &c2).with_fn("d", &d2)
        });
        if prec(r0, r1) && prec(r2, r3) {
            t.record("P6", prec(&(r0 + r2), &(r1 + r3)), || {
                Counterexample::new(i).with_fn("a", r0).with_fn("b", r1).with_fn("c", r2).with_fn("d", r3)
            });
        }

        // P7: nonnegative proximal pairs around nonnegative members
        let p1 = s1.join(&zero);
        let p2 = s2.join(&zero);
        let pa = (&p1 - &s.nonneg_function(&c)).join(&zero);
        let pb = &p1 + &s.nonneg_function(&c);
        let pc = (&p2 - &s.nonneg_function(&c)).join(&zero);
        let pd = &p2 + &s.nonneg_function(&c);
        if prec(&pa, &pb) && prec(&pc, &pd) {
            t.record("P7", prec(&(&pa * &pc), &(&pb * &pd)), || {
                Counterexample::new(i).with_fn("a", &pa).with_fn("b", &pb).with_fn("c", &pc).with_fn("d", &pd)
            });
        }

        let r = s.scalar();
        let konst = RationalFn::constant(c.clone(), r.clone());
        t.record("P8", prec(&konst, &konst), || Counterexample::new(i).with_scalar("r", &r));

        let rp = s.nonneg_scalar();
        for (x, y) in &pairs {
            if prec(x, y) {
                t.record("P9", prec(&x.scale(&rp), &y.scale(&rp)), || {
                    Counterexample::new(i).with_fn("a", x).with_fn("b", y).with_scalar("r", &rp)
                });
            }
        }

        if include_devries {
            let mut p11_pairs = pairs.to_vec();
            if i == 0 {
                p11_pairs.extend(oracle.skeleton().upset_indicators().into_iter().map(|u| (u.clone(), u)));
            }
            for (x, y) in &p11_pairs {
                if prec(x, y) {
                    t.record("P11", prec(&-y, &-x), || Counterexample::new(i).with_fn("a", x).with_fn("b", y));
                }
            }
            let bpos = s.nonneg_function(&c);
            if !bpos.values().iter().all(Zero::is_zero) {
                let cand = oracle.skeleton().envelope(&bpos, Direction::Lower).expect("same carrier");
                let ok = cand.values().iter().any(Signed::is_positive) && cand.is_nonnegative() && prec(&cand, &bpos);
                t.record("P12", ok, || Counterexample::new(i).with_fn("b", &bpos));
            }
        }
    });
    tally.finish(oracle.name(), samples, seed)
}

/// The quasi-order whose monotone functions are the reflexive elements of
/// `(A, ≺)`: the skeleton order joined with the block equivalence of `A`,
/// closed transitively.
pub fn restricted_order(algebra: &SubalgebraPartition, oracle: &ProximityOracle) -> Result<QuasiOrder> {
    if !same_carrier(algebra.carrier(), oracle.carrier()) {
        return Err(Error::CarrierMismatch);
    }
    let q = oracle.skeleton().quasi_order();
    let mut edges: Vec<(usize, usize)> = q.pairs().collect();
    for block in algebra.blocks() {
        for w in block.windows(2) {
            edges.push((w[0], w[1]));
            edges.push((w[1], w[0]));
        }
    }
    Ok(QuasiOrder::closure(q.labels().clone(), &edges))
}

/// Whether the reflexive elements generate all of `A`, i.e. separate the
/// points `A` sees.
pub fn is_nachbin(algebra: &SubalgebraPartition, oracle: &ProximityOracle) -> Result<bool> {
    let order = restricted_order(algebra, oracle)?;
    let collapsed = order.antisymmetrize();
    let generated = SubalgebraPartition::from_block_map(algebra.carrier().clone(), &collapsed.projection);
    Ok(generated == *algebra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::FinitePoset;
    use crate::rational::{int, rat};

    fn chain_oracle() -> ProximityOracle {
        ProximityOracle::from_skeleton(SbalSkeleton::monotone(&FinitePoset::chain(2)))
    }

    fn on(o: &ProximityOracle, v: &[Rational]) -> RationalFn {
        RationalFn::new(o.carrier().clone(), v.to_vec()).unwrap()
    }

    #[test]
    fn decide_examples() {
        let o = chain_oracle();
        let w = o.prox_decide(&on(&o, &[int(1), int(0)]), &on(&o, &[int(1), int(1)])).unwrap();
        assert_eq!(w, Some(on(&o, &[int(1), int(1)])));
        assert_eq!(o.prox_decide(&on(&o, &[int(1), int(0)]), &on(&o, &[int(1), rat(1, 2)])).unwrap(), None);
        let f = on(&o, &[int(-1), int(4)]);
        assert_eq!(o.prox_decide(&f, &f).unwrap(), Some(f.clone()));
    }

    #[test]
    fn r2_examples() {
        assert!(r2_decide((&int(1), &int(2)), (&int(3), &int(4))));
        assert!(!r2_decide((&int(0), &int(1)), (&int(1), &int(0))));
        let r = rat(5, 3);
        assert!(r2_decide((&r, &r), (&r, &r)));
    }

    #[test]
    fn nachbin_examples() {
        let c = r2_carrier();
        assert!(!is_nachbin(&SubalgebraPartition::discrete(c), &ProximityOracle::r2()).unwrap());

        let o = chain_oracle();
        assert!(is_nachbin(&SubalgebraPartition::discrete(o.carrier().clone()), &o).unwrap());

        let k = ProximityOracle::from_skeleton(SbalSkeleton::constants(carrier(&["x", "y", "z"])));
        assert!(!is_nachbin(&SubalgebraPartition::discrete(k.carrier().clone()), &k).unwrap());
        // the constants are Nachbin inside the algebra of constants
        assert!(is_nachbin(&SubalgebraPartition::single(k.carrier().clone()), &k).unwrap());
    }

    #[test]
    fn restriction_can_merge_beyond_blocks() {
        // x < y < z with A identifying x and z forces y into the same class
        let p = FinitePoset::from_pairs(&["x", "y", "z"], &[("x", "y"), ("y", "z")]).unwrap();
        let o = ProximityOracle::from_skeleton(SbalSkeleton::monotone(&p));
        let a = SubalgebraPartition::from_blocks(p.labels().clone(), &[vec![0, 2], vec![1]]).unwrap();
        assert!(!is_nachbin(&a, &o).unwrap());
    }

    #[test]
    fn small_axiom_runs() {
        let report = check_axioms(&chain_oracle(), 200, 42, true);
        for name in PROXIMITY_AXIOMS {
            let o = report.outcome(name).unwrap();
            assert!(o.passed() && o.checked > 0, "{o:?}");
        }
        assert!(!report.outcome("P11").unwrap().passed());
        let r2 = check_axioms(&ProximityOracle::r2(), 200, 42, true);
        for name in PROXIMITY_AXIOMS {
            assert!(r2.outcome(name).unwrap().passed());
        }
        assert!(r2.outcome("P11").unwrap().passed());
    }

    #[test]
    fn carrier_mismatch() {
        let o = chain_oracle();
        let f = RationalFn::new(carrier(&["u", "v"]), vec![int(0), int(0)]).unwrap();
        assert_eq!(o.decide(&f, &f), Err(Error::CarrierMismatch));
    }

    #[test]
    fn positive_part_stays_reflexive() {
        let o = chain_oracle();
        let mut sampler = crate::sampling::Sampler::new(3);
        for _ in 0..200 {
            let a = sampler.monotone_function(o.skeleton().quasi_order());
            assert!(o.skeleton_membership(&a.pos_neg_abs().plus).unwrap());
        }
        // constructed case: a = (-1, 0) on c0 < c1 is reflexive, a⁻ = (1, 0) is not
        let a = on(&o, &[int(-1), int(0)]);
        let minus = a.pos_neg_abs().minus;
        assert!(o.decide(&a, &a).unwrap());
        assert_eq!(minus.values(), &[int(1), int(0)]);
        assert!(!o.decide(&minus, &minus).unwrap());
    }
}
