//! Skeletons (cones of monotone functions), their envelope of formal
//! differences, and the universal map out of it.
//!
//! A skeleton is presented by a quasi-order on the carrier: its members are
//! exactly the monotone functions. The envelope is modelled twice: formally,
//! as pairs `[a, b]` modulo `a + d = b + c` ([`EnvelopePair`]), and
//! concretely, as the functions constant on the equivalence blocks of the
//! quasi-order ([`concrete_envelope`]).

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fnalg::{same_carrier, Carrier, RationalFn, SubalgebraPartition};
use crate::order::{Direction, FinitePoset, QuasiOrder};
use crate::rational::{int, Rational};
use crate::report::{fan_out, AxiomReport, Counterexample, Tally};
use crate::sampling::Sampler;

/// The cone of functions monotone for a quasi-order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SbalSkeleton {
    order: QuasiOrder,
}

impl SbalSkeleton {
    pub fn new(order: QuasiOrder) -> Self {
        Self { order }
    }

    /// Monotone functions on a poset.
    pub fn monotone(poset: &FinitePoset) -> Self {
        Self::new(poset.as_quasi().clone())
    }

    /// Every function: the full algebra as its own skeleton.
    pub fn full(carrier: Carrier) -> Self {
        Self::new(QuasiOrder::discrete(carrier))
    }

    /// Constant functions only.
    pub fn constants(carrier: Carrier) -> Self {
        Self::new(QuasiOrder::total(carrier))
    }

    /// Skeleton for the quasi-order `x <= y` iff `g(x) <= g(y)` for all generators.
    pub fn from_generators(carrier: Carrier, generators: &[RationalFn]) -> Result<Self> {
        Ok(Self::new(QuasiOrder::induced_by(carrier, generators)?))
    }

    pub fn quasi_order(&self) -> &QuasiOrder {
        &self.order
    }

    pub fn carrier(&self) -> &Carrier {
        self.order.labels()
    }

    /// Membership; functions on another carrier are never members.
    pub fn contains(&self, f: &RationalFn) -> bool {
        self.order.is_monotone(f).unwrap_or(false)
    }

    pub fn contains_checked(&self, f: &RationalFn) -> Result<bool> {
        self.order.is_monotone(f)
    }

    /// Whether every function is a member.
    pub fn is_full(&self) -> bool {
        self.order.pairs().next().is_none()
    }

    pub fn envelope(&self, f: &RationalFn, direction: Direction) -> Result<RationalFn> {
        self.order.monotone_envelope(f, direction)
    }

    pub fn constant(&self, r: Rational) -> RationalFn {
        RationalFn::constant(self.carrier().clone(), r)
    }

    /// Indicators of the up-sets `{z : z not <= y}`, one per point `y`.
    ///
    /// Every member is a nonnegative combination of these plus a constant,
    /// so they form a finite certificate for morphism checks.
    pub fn upset_indicators(&self) -> Vec<RationalFn> {
        let n = self.order.len();
        (0..n)
            .map(|y| {
                let values = (0..n).map(|z| if self.order.leq(z, y) { int(0) } else { int(1) }).collect();
                RationalFn::new(self.carrier().clone(), values).expect("length matches")
            })
            .collect()
    }
}

/// Whether `(a, b)` and `(c, d)` present the same formal difference.
fn pair_equivalent(a: &RationalFn, b: &RationalFn, c: &RationalFn, d: &RationalFn) -> bool {
    &(a + d) == &(b + c)
}

/// An element `[a, b]` of the envelope: the formal difference `a - b`.
///
/// Equality is the defining relation `a + d = b + c`, never a comparison of
/// representatives.
#[derive(Clone, Debug)]
pub struct EnvelopePair {
    pub a: RationalFn,
    pub b: RationalFn,
}

impl PartialEq for EnvelopePair {
    fn eq(&self, other: &Self) -> bool {
        same_carrier(self.a.carrier(), other.a.carrier()) && pair_equivalent(&self.a, &self.b, &other.a, &other.b)
    }
}

impl Eq for EnvelopePair {}

impl EnvelopePair {
    pub fn new(a: RationalFn, b: RationalFn) -> Result<Self> {
        if !same_carrier(a.carrier(), b.carrier()) {
            return Err(Error::CarrierMismatch);
        }
        Ok(Self { a, b })
    }

    pub fn zero(carrier: Carrier) -> Self {
        Self { a: RationalFn::zero(carrier.clone()), b: RationalFn::zero(carrier) }
    }

    pub fn one(carrier: Carrier) -> Self {
        Self { a: RationalFn::constant(carrier.clone(), Rational::one()), b: RationalFn::zero(carrier) }
    }

    pub fn carrier(&self) -> &Carrier {
        self.a.carrier()
    }

    /// The same class with both representatives shifted to be nonnegative.
    pub fn normalized(&self) -> Self {
        let lowest = self.a.values().iter().chain(self.b.values()).min().cloned().unwrap_or_else(Rational::zero);
        if !lowest.is_negative() {
            return self.clone();
        }
        let r = -lowest;
        Self { a: self.a.shift(&r), b: self.b.shift(&r) }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_carrier(self.carrier(), other.carrier()) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch)
        }
    }

    /// `[a,b] + [c,d] = [a+c, b+d]`
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { a: &self.a + &other.a, b: &self.b + &other.b })
    }

    /// `[a,b] · [c,d] = [ac+bd, ad+bc]` on nonnegative representatives.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.normalized();
        let q = other.normalized();
        Ok(Self { a: &(&p.a * &q.a) + &(&p.b * &q.b), b: &(&p.a * &q.b) + &(&p.b * &q.a) })
    }

    /// `[a,b] ∨ [c,d] = [(a+d) ∨ (b+c), b+d]`
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (a, b, c, d) = (&self.a, &self.b, &other.a, &other.b);
        Ok(Self { a: (a + d).join(&(b + c)), b: b + d })
    }

    /// `[a,b] ∧ [c,d] = [(a+d) ∧ (b+c), b+d]`
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (a, b, c, d) = (&self.a, &self.b, &other.a, &other.b);
        Ok(Self { a: (a + d).meet(&(b + c)), b: b + d })
    }

    /// `[a,b] <= [c,d]` iff `a + d <= c + b`
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok((&self.a + &other.b).le(&(&other.a + &self.b)))
    }

    /// `r[a,b] = [ra, rb]` for `r >= 0` and `[|r| b, |r| a]` otherwise.
    pub fn scalar(&self, r: &Rational) -> Self {
        if r.is_negative() {
            let s = -r;
            Self { a: self.b.scale(&s), b: self.a.scale(&s) }
        } else {
            Self { a: self.a.scale(r), b: self.b.scale(r) }
        }
    }

    pub fn neg(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone() }
    }

    /// The concrete difference `a - b` in `R^X`.
    pub fn difference(&self) -> RationalFn {
        &self.a - &self.b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnvelopeOp {
    Add,
    Mul,
    Join,
    Meet,
    Leq,
    Scalar(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnvelopeValue {
    Pair(EnvelopePair),
    Bool(bool),
}

/// Dispatches one envelope operation. The scalar action uses `p` only.
pub fn envelope_ops(p: &EnvelopePair, q: &EnvelopePair, op: &EnvelopeOp) -> Result<EnvelopeValue> {
    Ok(match op {
        EnvelopeOp::Add => EnvelopeValue::Pair(p.add(q)?),
        EnvelopeOp::Mul => EnvelopeValue::Pair(p.mul(q)?),
        EnvelopeOp::Join => EnvelopeValue::Pair(p.join(q)?),
        EnvelopeOp::Meet => EnvelopeValue::Pair(p.meet(q)?),
        EnvelopeOp::Leq => EnvelopeValue::Bool(p.leq(q)?),
        EnvelopeOp::Scalar(r) => {
            p.check(q)?;
            EnvelopeValue::Pair(p.scalar(r))
        }
    })
}

/// The embedding `a ↦ [a, 0]`.
pub fn epsilon_embed(skeleton: &SbalSkeleton, a: &RationalFn) -> Result<EnvelopePair> {
    if !skeleton.contains_checked(a)? {
        return Err(Error::NotInSkeleton);
    }
    Ok(EnvelopePair { a: a.clone(), b: RationalFn::zero(a.carrier().clone()) })
}

type MapFn<'a> = Box<dyn Fn(&RationalFn) -> RationalFn + Send + Sync + 'a>;

/// A structure-preserving map from a skeleton into a function algebra `R^Y`.
///
/// Construction samples the morphism laws (addition, lattice operations,
/// products of nonnegative members, nonnegative scalars, constants) and
/// refuses maps that break one of them.
pub struct SbalMorphism<'a> {
    source: SbalSkeleton,
    target: Carrier,
    map: MapFn<'a>,
}

impl<'a> SbalMorphism<'a> {
    pub const CHECK_SAMPLES: usize = 64;

    pub fn new(
        source: SbalSkeleton,
        target: Carrier,
        map: impl Fn(&RationalFn) -> RationalFn + Send + Sync + 'a,
    ) -> Result<Self> {
        let m = Self { source, target, map: Box::new(map) };
        m.verify(Self::CHECK_SAMPLES, 0)?;
        Ok(m)
    }

    /// The inclusion of the skeleton into `R^X`.
    pub fn inclusion(source: SbalSkeleton) -> Self {
        let target = source.carrier().clone();
        Self { source, target, map: Box::new(|f| f.clone()) }
    }

    /// Evaluation at point `x`, into `R` (a one-point carrier).
    pub fn evaluation(source: SbalSkeleton, x: usize) -> Result<Self> {
        if x >= source.carrier().len() {
            return Err(Error::UnknownElement(x.to_string()));
        }
        let target: Carrier = vec![source.carrier()[x].clone()].into();
        let t = target.clone();
        Self::new(source, target, move |f| RationalFn::constant(t.clone(), f.value(x).clone()))
    }

    /// Precomposition with a point map `target point ↦ source point`.
    pub fn pullback(source: SbalSkeleton, target: Carrier, point_map: Vec<usize>) -> Result<Self> {
        if point_map.len() != target.len() {
            return Err(Error::CarrierMismatch);
        }
        let n = source.carrier().len();
        if let Some(&bad) = point_map.iter().find(|&&j| j >= n) {
            return Err(Error::UnknownElement(bad.to_string()));
        }
        let t = target.clone();
        Self::new(source, target, move |f| f.pullback(t.clone(), &point_map))
    }

    pub fn source(&self) -> &SbalSkeleton {
        &self.source
    }

    pub fn target(&self) -> &Carrier {
        &self.target
    }

    pub fn apply(&self, a: &RationalFn) -> Result<RationalFn> {
        if !self.source.contains_checked(a)? {
            return Err(Error::NotInSkeleton);
        }
        let out = (self.map)(a);
        if !same_carrier(out.carrier(), &self.target) {
            return Err(Error::NotAMorphism("image lies outside the target carrier".into()));
        }
        Ok(out)
    }

    /// Samples the morphism laws on members of the source.
    pub fn verify(&self, samples: usize, seed: u64) -> Result<()> {
        let fail = |law: &str| Err(Error::NotAMorphism(law.to_string()));
        let one = self.source.constant(Rational::one());
        if self.apply(&one)? != RationalFn::constant(self.target.clone(), Rational::one()) {
            return fail("unit not preserved");
        }
        let mut s = Sampler::new(seed);
        let order = self.source.quasi_order().clone();
        let zero = self.source.constant(Rational::zero());
        for _ in 0..samples {
            let a = s.monotone_function(&order);
            let b = s.monotone_function(&order);
            let r = s.nonneg_scalar();
            let (fa, fb) = (self.apply(&a)?, self.apply(&b)?);
            if self.apply(&(&a + &b))? != &fa + &fb {
                return fail("addition not preserved");
            }
            if self.apply(&a.join(&b))? != fa.join(&fb) {
                return fail("join not preserved");
            }
            if self.apply(&a.meet(&b))? != fa.meet(&fb) {
                return fail("meet not preserved");
            }
            if self.apply(&a.scale(&r))? != fa.scale(&r) {
                return fail("scalar action not preserved");
            }
            let c = self.source.constant(s.scalar());
            if self.apply(&c)? != RationalFn::constant(self.target.clone(), c.value(0).clone()) {
                return fail("constants not preserved");
            }
            let (pa, pb) = (a.join(&zero), b.join(&zero));
            if self.apply(&(&pa * &pb))? != &self.apply(&pa)? * &self.apply(&pb)? {
                return fail("product of nonnegative members not preserved");
            }
        }
        Ok(())
    }

    /// The extension to the envelope: `[a, b] ↦ α(a) - α(b)`.
    pub fn extend(&self, p: &EnvelopePair) -> Result<RationalFn> {
        Ok(&self.apply(&p.a)? - &self.apply(&p.b)?)
    }
}

/// The unique envelope morphism extending `alpha`.
pub fn envelope_umt(alpha: &SbalMorphism<'_>, p: &EnvelopePair) -> Result<RationalFn> {
    alpha.extend(p)
}

/// Writes `h` as `f - g` with `f, g` skeleton members.
///
/// Block-constant `h` is shifted by `M · rank`, where `rank` is a linear
/// extension of the block poset and `M` exceeds the spread of `h`; any
/// other `h` is not in the envelope.
pub fn difference_decompose(h: &RationalFn, skeleton: &SbalSkeleton) -> Result<(RationalFn, RationalFn)> {
    let order = skeleton.quasi_order();
    if !skeleton.contains_checked(h)? {
        if let Some((i, j)) = order.pairs().find(|&(i, j)| order.leq(j, i) && h.value(i) != h.value(j)) {
            return Err(Error::NotRepresentable(order.labels()[i].clone(), order.labels()[j].clone()));
        }
    } else {
        return Ok((h.clone(), RationalFn::zero(h.carrier().clone())));
    }
    let collapsed = order.antisymmetrize();
    let rank = collapsed.poset.linear_extension();
    let spread = h.max_value().expect("nonempty") - h.min_value().expect("nonempty");
    let m = spread + Rational::one();
    let g_values = collapsed.projection.iter().map(|&b| &m * int(rank[b] as i64)).collect();
    let g = RationalFn::new(h.carrier().clone(), g_values)?;
    Ok((h + &g, g))
}

/// The envelope of a skeleton as a sub-algebra of `R^X`: functions constant
/// on the equivalence blocks of the quasi-order.
pub fn concrete_envelope(skeleton: &SbalSkeleton) -> SubalgebraPartition {
    let collapsed = skeleton.quasi_order().antisymmetrize();
    SubalgebraPartition::from_block_map(skeleton.carrier().clone(), &collapsed.projection)
}

pub const SKELETON_AXIOMS: [&str; 10] = ["S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "S9", "closure"];

/// Whether `n·a + b <= n·c + d` holds for every natural `n`, decided
/// coordinatewise: either `a < c`, or `a = c` and `b <= d`.
fn archimedean_premise(a: &RationalFn, b: &RationalFn, c: &RationalFn, d: &RationalFn) -> bool {
    (0..a.len()).all(|i| a.value(i) < c.value(i) || (a.value(i) == c.value(i) && b.value(i) <= d.value(i)))
}

/// Samples the skeleton axioms S1–S9 plus closure of the cone under its
/// operations. Sample `i` draws from stream `i` of `seed`.
pub fn check_skeleton_axioms(skeleton: &SbalSkeleton, samples: usize, seed: u64) -> AxiomReport {
    let order = skeleton.quasi_order();
    let carrier = skeleton.carrier().clone();
    let zero = RationalFn::zero(carrier.clone());
    let one = RationalFn::constant(carrier.clone(), Rational::one());
    let tally = fan_out(samples, &SKELETON_AXIOMS, |i, t: &mut Tally| {
        let mut s = Sampler::with_stream(seed, i as u64);
        let a = s.monotone_function(order);
        let b = s.monotone_function(order);
        let c = s.monotone_function(order);
        let d = s.monotone_function(order);
        let r = s.nonneg_scalar();
        let cx = || Counterexample::new(i).with_fn("a", &a).with_fn("b", &b).with_fn("c", &c).with_fn("d", &d);

        t.record("S1", a.le(&b) == (&a + &c).le(&(&b + &c)), cx);
        t.record("S2", &a.join(&b) + &c == (&a + &c).join(&(&b + &c)), cx);
        t.record("S3", &a.meet(&b) + &c == (&a + &c).meet(&(&b + &c)), cx);

        let (p, q, w) = (a.join(&zero), b.join(&zero), c.join(&zero));
        let assoc = &(&p * &q) * &w == &p * &(&q * &w);
        let comm = &p * &q == &q * &p;
        let unit = &one * &p == p;
        t.record("S4", assoc && comm && unit && (&p * &q).is_nonnegative(), cx);
        t.record("S5", &p * &(&q + &w) == &(&p * &q) + &(&p * &w), cx);
        let q_above = p.join(&q);
        t.record("S6", (&p * &w).le(&(&q_above * &w)), cx);

        let (x, y) = (s.scalar(), s.scalar());
        let rho = |v: &Rational| skeleton.constant(v.clone());
        let top = if x >= y { &x } else { &y };
        let rho_ok = skeleton.contains(&rho(&x))
            && rho(&(&x + &y)) == &rho(&x) + &rho(&y)
            && rho(&(&x * &y)) == &rho(&x) * &rho(&y)
            && rho(top) == rho(&x).join(&rho(&y))
            && rho(&Rational::one()) == one;
        t.record("S7", rho_ok, || cx().with_scalar("r", &x).with_scalar("s", &y));

        let bound = a.sup_norm().expect("nonempty carrier");
        t.record("S8", skeleton.constant(-bound.clone()).le(&a) && a.le(&skeleton.constant(bound)), cx);

        if archimedean_premise(&a, &b, &c, &d) {
            t.record("S9", a.le(&c), cx);
        }
        // premise-forcing instance: c' >= a and b' <= d
        let c2 = a.join(&c);
        let b2 = d.meet(&b);
        if archimedean_premise(&a, &b2, &c2, &d) {
            t.record("S9", a.le(&c2), cx);
        }

        let closed = [&a + &b, a.join(&b), a.meet(&b), a.scale(&r), &p * &q]
            .iter()
            .all(|m| skeleton.contains(m));
        t.record("closure", closed, || cx().with_scalar("r", &r));
    });
    tally.finish(format!("skeleton on {} points", carrier.len()), samples, seed)
}
