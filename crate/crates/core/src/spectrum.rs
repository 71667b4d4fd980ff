//! Maximal ideals, the induced order on the spectrum, the Gelfand maps
//! `η` and `φ`, and the hom-set bijection `θ`.
//!
//! For a closed sub-algebra `A ⊆ R^X` given by a partition, the maximal
//! ideals are "vanish on block B", one per block. With a proximity on `A`,
//! `x <= y` on the spectrum iff every nonnegative reflexive element vanishing
//! at `y` vanishes at `x`.
//!
//! Instead of quantifying over that infinite family the order is decided
//! through one canonical witness per point: `c_y(z) = 0` if `z <= y` in the
//! reflexive order and `1` otherwise. `c_y` is monotone, nonnegative and
//! vanishes at `y`; any nonnegative monotone `c` with `c(y) = 0` vanishes on
//! the whole down-set of `y`, which is exactly the zero set of `c_y`. So
//! `x <= y` iff `c_y(x) = 0`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fnalg::{Carrier, RationalFn, SubalgebraPartition};
use crate::order::{enumerate, Direction, FinitePoset, QuasiOrder};
use crate::proximity::{restricted_order, ProximityOracle};
use crate::rational::{int, Rational};
use crate::sbal::{concrete_envelope, SbalSkeleton};

/// The ideal of functions vanishing on one block of the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxIdeal {
    pub block: Vec<usize>,
    pub label: String,
}

impl MaxIdeal {
    pub fn contains(&self, f: &RationalFn) -> bool {
        self.block.iter().all(|&i| f.value(i).is_zero())
    }

    /// The unique real `r` with `f - r` in the ideal.
    pub fn residue<'a>(&self, f: &'a RationalFn) -> &'a Rational {
        f.value(self.block[0])
    }
}

/// One ideal per block.
pub fn spectrum(algebra: &SubalgebraPartition) -> Vec<MaxIdeal> {
    let labels = algebra.carrier();
    algebra
        .blocks()
        .iter()
        .map(|b| {
            let names: Vec<&str> = b.iter().map(|&i| labels[i].as_str()).collect();
            let label = if names.len() == 1 { format!("M_{}", names[0]) } else { format!("M_{{{}}}", names.join(",")) };
            MaxIdeal { block: b.clone(), label }
        })
        .collect()
}

/// `0` on the down-set of `y`, `1` elsewhere.
pub fn canonical_witness(order: &QuasiOrder, y: usize) -> RationalFn {
    let values = (0..order.len()).map(|z| if order.leq(z, y) { int(0) } else { int(1) }).collect();
    RationalFn::new(order.labels().clone(), values).expect("length matches")
}

/// Certificate that `x ≰ y`: `witness` is reflexive, nonnegative, vanishes
/// at `y` and not at `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonRelation {
    pub x: usize,
    pub y: usize,
    pub witness: RationalFn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedSpectrum {
    pub points: Vec<MaxIdeal>,
    /// Order on the points, labelled by ideal labels.
    pub order: QuasiOrder,
    pub certificates: Vec<NonRelation>,
    /// The reflexive order on the carrier the decision was made in.
    pub reflexive_order: QuasiOrder,
}

impl OrderedSpectrum {
    pub fn carrier(&self) -> &Carrier {
        self.order.labels()
    }

    pub fn is_partial_order(&self) -> bool {
        self.order.is_antisymmetric()
    }

    /// The proximity `≺_{X_A}` on `C(X_A)`: monotone functions for the induced order.
    pub fn proximity(&self) -> ProximityOracle {
        ProximityOracle::from_skeleton(SbalSkeleton::new(self.order.clone()))
    }

    /// `a ∈ ↡y`: some nonnegative reflexive `c` vanishing at `y` has `|a| <= c`.
    /// The least reflexive `c >= |a|` is the upper envelope of `|a|`.
    pub fn thd_contains(&self, y: usize, a: &RationalFn) -> bool {
        let abs = a.pos_neg_abs().abs;
        let c = self.reflexive_order.monotone_envelope(&abs, Direction::Upper).expect("same carrier");
        self.points[y].contains(&c)
    }
}

/// Computes the order on the spectrum of `(A, ≺)`.
pub fn induced_order(algebra: &SubalgebraPartition, oracle: &ProximityOracle) -> Result<OrderedSpectrum> {
    let reflexive = restricted_order(algebra, oracle)?;
    let points = spectrum(algebra);
    let mut edges = Vec::new();
    let mut certificates = Vec::new();
    for (y, py) in points.iter().enumerate() {
        let c = canonical_witness(&reflexive, py.block[0]);
        for (x, px) in points.iter().enumerate() {
            if px.contains(&c) {
                edges.push((x, y));
            } else {
                certificates.push(NonRelation { x, y, witness: c.clone() });
            }
        }
    }
    let labels: Carrier = points.iter().map(|p| p.label.clone()).collect::<Vec<_>>().into();
    let order = QuasiOrder::closure(labels, &edges);
    Ok(OrderedSpectrum { points, order, certificates, reflexive_order: reflexive })
}

/// `η_X : x ↦ M_x` together with its verification.
#[derive(Clone, Debug)]
pub struct EtaReport {
    pub map: Vec<usize>,
    pub spectrum: OrderedSpectrum,
    pub bijective: bool,
    pub order_preserving: bool,
    pub order_reflecting: bool,
}

impl EtaReport {
    pub fn is_order_isomorphism(&self) -> bool {
        self.bijective && self.order_preserving && self.order_reflecting
    }
}

/// Sends each point to the ideal of functions vanishing there, in the
/// spectrum of `C(X)` with the monotone proximity, and checks the result
/// is an order isomorphism.
pub fn eta(poset: &FinitePoset) -> Result<EtaReport> {
    let algebra = SubalgebraPartition::discrete(poset.labels().clone());
    let oracle = ProximityOracle::from_skeleton(SbalSkeleton::monotone(poset));
    let spec = induced_order(&algebra, &oracle)?;
    let n = poset.len();
    let mut map = Vec::with_capacity(n);
    for x in 0..n {
        // M_x: the ideal whose members are the functions vanishing at x
        let e_x = RationalFn::new(poset.labels().clone(), (0..n).map(|z| if z == x { int(0) } else { int(1) }).collect())?;
        let hits: Vec<usize> = (0..spec.points.len()).filter(|&p| spec.points[p].contains(&e_x)).collect();
        map.push(*hits.first().ok_or(Error::EmptyCarrier)?);
    }
    let distinct: BTreeSet<usize> = map.iter().copied().collect();
    let bijective = distinct.len() == n && spec.points.len() == n;
    let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y)));
    let order_preserving = pairs.clone().all(|(x, y)| !poset.leq(x, y) || spec.order.leq(map[x], map[y]));
    let order_reflecting = pairs.clone().all(|(x, y)| !spec.order.leq(map[x], map[y]) || poset.leq(x, y));
    Ok(EtaReport { map, spectrum: spec, bijective, order_preserving, order_reflecting })
}

/// `φ_A(a)`: the residue of `a` at every point of the spectrum.
pub fn phi(algebra: &SubalgebraPartition, spectrum_carrier: &Carrier, a: &RationalFn) -> Result<RationalFn> {
    let values = algebra.block_values(a)?;
    if values.len() != spectrum_carrier.len() {
        return Err(Error::CarrierMismatch);
    }
    RationalFn::new(spectrum_carrier.clone(), values)
}

/// A unital lattice-algebra morphism between partition algebras, presented
/// by its map on blocks: target block `t` reads the source block `block_map[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMorphism {
    pub source: SubalgebraPartition,
    pub target: SubalgebraPartition,
    pub block_map: Vec<usize>,
}

impl AlgebraMorphism {
    pub fn new(source: SubalgebraPartition, target: SubalgebraPartition, block_map: Vec<usize>) -> Result<Self> {
        if block_map.len() != target.block_count() || block_map.iter().any(|&b| b >= source.block_count()) {
            return Err(Error::CarrierMismatch);
        }
        Ok(Self { source, target, block_map })
    }

    pub fn apply(&self, f: &RationalFn) -> Result<RationalFn> {
        let values = self.source.block_values(f)?;
        let out: Vec<Rational> = self.block_map.iter().map(|&b| values[b].clone()).collect();
        Ok(self.target.lift(&out))
    }

    /// `self` after `first`.
    pub fn compose_after(&self, first: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if first.target != self.source {
            return Err(Error::CarrierMismatch);
        }
        let block_map = self.block_map.iter().map(|&b| first.block_map[b]).collect();
        AlgebraMorphism::new(first.source.clone(), self.target.clone(), block_map)
    }

    /// The dual map on spectra, `M ↦ α⁻¹(M)`, computed by probing `α` with
    /// `1 - e_b` (which lies in exactly one maximal ideal, the one of block `b`).
    pub fn dual(&self) -> Result<Vec<usize>> {
        let ones = vec![Rational::one(); self.source.block_count()];
        let probes: Vec<RationalFn> = (0..self.source.block_count())
            .map(|b| {
                let mut v = ones.clone();
                v[b] = Rational::zero();
                self.apply(&self.source.lift(&v))
            })
            .collect::<Result<_>>()?;
        let targets = spectrum(&self.target);
        targets
            .iter()
            .map(|m| {
                let hits: Vec<usize> = (0..probes.len()).filter(|&b| m.contains(&probes[b])).collect();
                match hits.as_slice() {
                    [b] => Ok(*b),
                    _ => Err(Error::NotAMorphism("preimage of a maximal ideal is not maximal".into())),
                }
            })
            .collect()
    }

    /// Whether reflexive elements go to reflexive elements; checked on the
    /// canonical witnesses of the source, which generate its reflexive cone
    /// together with the constants.
    pub fn preserves_proximity(&self, source: &ProximityOracle, target: &ProximityOracle) -> Result<bool> {
        let order = restricted_order(&self.source, source)?;
        for y in 0..order.len() {
            let c = canonical_witness(&order, y);
            if !target.skeleton_membership(&self.apply(&c)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub const ADJUNCTION_CAP: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionReport {
    pub space_points: usize,
    pub spectrum_points: usize,
    /// Monotone maps `X → X_A`.
    pub space_homs: usize,
    /// Proximity-preserving algebra morphisms `A → C(X)`.
    pub algebra_homs: usize,
    pub bijective: bool,
    pub natural: bool,
    pub naturality_checks: usize,
    pub failure: Option<String>,
}

impl AdjunctionReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.natural && self.space_homs == self.algebra_homs
    }
}

/// Enumerates both hom-sets for `A = envelope(S)` and the space `X`, and
/// checks that `θ(α) = Xα ∘ η_X` is a bijection natural in both arguments.
pub fn enumerate_adjunction(space: &FinitePoset, skeleton: &SbalSkeleton) -> Result<AdjunctionReport> {
    let algebra = concrete_envelope(skeleton);
    let source = ProximityOracle::from_skeleton(skeleton.clone());
    let spec = induced_order(&algebra, &source)?;
    let (n, k) = (space.len(), spec.points.len());
    for size in [n, k] {
        if size > ADJUNCTION_CAP {
            return Err(Error::TooLargeToEnumerate { size, cap: ADJUNCTION_CAP });
        }
    }
    let cx = SubalgebraPartition::discrete(space.labels().clone());
    let target = ProximityOracle::from_skeleton(SbalSkeleton::monotone(space));

    let space_homs: BTreeSet<Vec<usize>> = enumerate::all_maps(n, k)
        .into_iter()
        .filter(|m| space.is_monotone_map(&spec.order, m))
        .collect();

    let mut algebra_homs = Vec::new();
    for m in enumerate::all_maps(n, k) {
        let alpha = AlgebraMorphism::new(algebra.clone(), cx.clone(), m)?;
        if alpha.preserves_proximity(&source, &target)? {
            algebra_homs.push(alpha);
        }
    }

    // η_X is the identity on indices (verified separately by `eta`)
    let theta = |alpha: &AlgebraMorphism| alpha.dual();
    let mut failure = None;
    let mut images = BTreeSet::new();
    for alpha in &algebra_homs {
        let t = theta(alpha)?;
        if !space.is_monotone_map(&spec.order, &t) && failure.is_none() {
            failure = Some(format!("θ of {:?} is not monotone", alpha.block_map));
        }
        images.insert(t);
    }
    let bijective = images.len() == algebra_homs.len() && images == space_homs;
    if !bijective && failure.is_none() {
        failure = Some("θ is not a bijection onto the monotone maps".into());
    }

    // naturality in X: θ(C(h) ∘ α) = θ(α) ∘ h for monotone h : X → X
    let self_maps: Vec<Vec<usize>> =
        enumerate::all_maps(n, n).into_iter().filter(|h| space.is_monotone_map(space.as_quasi(), h)).collect();
    let mut natural = true;
    let mut checks = 0;
    for alpha in &algebra_homs {
        let t = theta(alpha)?;
        for h in &self_maps {
            let ch = AlgebraMorphism::new(cx.clone(), cx.clone(), h.clone())?;
            let lhs = theta(&ch.compose_after(alpha)?)?;
            let rhs: Vec<usize> = h.iter().map(|&x| t[x]).collect();
            checks += 1;
            if lhs != rhs {
                natural = false;
                failure.get_or_insert_with(|| format!("naturality in X fails for α={:?}, h={h:?}", alpha.block_map));
            }
        }
    }
    // naturality in A: θ(α ∘ β) = Xβ ∘ θ(α) for proximity-preserving β : A → A
    for b in enumerate::all_maps(k, k) {
        let beta = AlgebraMorphism::new(algebra.clone(), algebra.clone(), b)?;
        if !beta.preserves_proximity(&source, &source)? {
            continue;
        }
        let xb = beta.dual()?;
        for alpha in &algebra_homs {
            let lhs = theta(&alpha.compose_after(&beta)?)?;
            let rhs: Vec<usize> = theta(alpha)?.iter().map(|&p| xb[p]).collect();
            checks += 1;
            if lhs != rhs {
                natural = false;
                failure.get_or_insert_with(|| format!("naturality in A fails for α={:?}, β={:?}", alpha.block_map, beta.block_map));
            }
        }
    }

    Ok(AdjunctionReport {
        space_points: n,
        spectrum_points: k,
        space_homs: space_homs.len(),
        algebra_homs: algebra_homs.len(),
        bijective,
        natural,
        naturality_checks: checks,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fnalg::carrier;
    use crate::proximity::r2_carrier;

    fn vee() -> FinitePoset {
        FinitePoset::from_pairs(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap()
    }

    #[test]
    fn spectrum_examples() {
        let c2 = FinitePoset::chain(2);
        let s = spectrum(&SubalgebraPartition::discrete(c2.labels().clone()));
        assert_eq!(s.iter().map(|m| m.label.as_str()).collect::<Vec<_>>(), vec!["M_c0", "M_c1"]);
        let p = SubalgebraPartition::from_blocks(carrier(&["x1", "x2", "x3"]), &[vec![0], vec![1, 2]]).unwrap();
        assert_eq!(spectrum(&p).len(), 2);
        assert_eq!(spectrum(&SubalgebraPartition::single(carrier(&["x", "y"]))).len(), 1);
    }

    #[test]
    fn positive_and_negative_parts_at_points() {
        let v = vee();
        let a = SubalgebraPartition::discrete(v.labels().clone());
        let mut sampler = crate::sampling::Sampler::new(5);
        for _ in 0..200 {
            let f = sampler.function(v.labels());
            let parts = f.pos_neg_abs();
            for (x, m) in spectrum(&a).iter().enumerate() {
                assert!(m.contains(&parts.plus) || m.contains(&parts.minus));
                assert_eq!(!m.contains(&parts.plus), f.value(x) > &int(0));
                assert_eq!(!m.contains(&parts.minus), f.value(x) < &int(0));
            }
        }
    }

    #[test]
    fn order_matches_thd_inclusion() {
        // x <= y iff every a in ↡y vanishes at x, probed with witnesses and samples
        let v = vee();
        let a = SubalgebraPartition::discrete(v.labels().clone());
        let o = ProximityOracle::from_skeleton(SbalSkeleton::monotone(&v));
        let s = induced_order(&a, &o).unwrap();
        let mut sampler = crate::sampling::Sampler::new(9);
        let mut probes: Vec<RationalFn> = (0..3).map(|y| canonical_witness(&s.reflexive_order, y)).collect();
        probes.extend((0..300).map(|_| sampler.function(v.labels())));
        for x in 0..3 {
            for y in 0..3 {
                let included = probes.iter().filter(|p| s.thd_contains(y, p)).all(|p| s.points[x].contains(p));
                assert_eq!(included, s.order.leq(x, y), "{x} {y}");
            }
        }
    }

    #[test]
    fn chain_order_recovered() {
        let c2 = FinitePoset::chain(2);
        let a = SubalgebraPartition::discrete(c2.labels().clone());
        let o = ProximityOracle::from_skeleton(SbalSkeleton::monotone(&c2));
        let s = induced_order(&a, &o).unwrap();
        assert!(s.order.leq(0, 1) && !s.order.leq(1, 0));
        assert_eq!(s.certificates.len(), 1);
        let cert = &s.certificates[0];
        assert_eq!((cert.x, cert.y), (1, 0));
        assert_eq!(cert.witness.values(), &[int(0), int(1)]);
    }

    #[test]
    fn r2_order_collapses() {
        let s = induced_order(&SubalgebraPartition::discrete(r2_carrier()), &ProximityOracle::r2()).unwrap();
        assert!(s.order.leq(0, 1) && s.order.leq(1, 0));
        assert!(!s.is_partial_order());
        // ↡x = ↡y = {0}
        let e1 = RationalFn::new(r2_carrier(), vec![int(1), int(0)]).unwrap();
        assert!(!s.thd_contains(0, &e1) && !s.thd_contains(1, &e1));
        assert!(s.thd_contains(0, &RationalFn::zero(r2_carrier())));
    }

    #[test]
    fn antichain_order_discrete() {
        let p = FinitePoset::antichain(3);
        let a = SubalgebraPartition::discrete(p.labels().clone());
        let o = ProximityOracle::from_skeleton(SbalSkeleton::monotone(&p));
        let s = induced_order(&a, &o).unwrap();
        assert_eq!(s.order.pairs().count(), 0);
    }

    #[test]
    fn eta_examples() {
        for p in [FinitePoset::chain(3), FinitePoset::chain(1), vee()] {
            assert!(eta(&p).unwrap().is_order_isomorphism());
        }
    }

    #[test]
    fn phi_examples() {
        let c2 = FinitePoset::chain(2);
        let a = SubalgebraPartition::discrete(c2.labels().clone());
        let o = ProximityOracle::from_skeleton(SbalSkeleton::monotone(&c2));
        let s = induced_order(&a, &o).unwrap();
        let f = RationalFn::new(c2.labels().clone(), vec![int(3), int(7)]).unwrap();
        assert_eq!(phi(&a, s.carrier(), &f).unwrap().values(), &[int(3), int(7)]);
        let k = RationalFn::constant(c2.labels().clone(), int(5));
        assert!(phi(&a, s.carrier(), &k).unwrap().is_constant());

        let p = SubalgebraPartition::from_blocks(carrier(&["x1", "x2", "x3"]), &[vec![0], vec![1, 2]]).unwrap();
        let sp: Carrier = spectrum(&p).into_iter().map(|m| m.label).collect::<Vec<_>>().into();
        let g = RationalFn::new(p.carrier().clone(), vec![int(2), int(9), int(9)]).unwrap();
        assert_eq!(phi(&p, &sp, &g).unwrap().values(), &[int(2), int(9)]);
        let bad = RationalFn::new(p.carrier().clone(), vec![int(2), int(9), int(8)]).unwrap();
        assert!(matches!(phi(&p, &sp, &bad), Err(Error::NotBlockConstant(_, _))));
    }

    #[test]
    fn adjunction_counts() {
        let c2 = FinitePoset::chain(2);
        let r = enumerate_adjunction(&c2, &SbalSkeleton::monotone(&c2)).unwrap();
        assert_eq!((r.space_homs, r.algebra_homs), (3, 3));
        assert!(r.passed(), "{r:?}");

        let r = enumerate_adjunction(&vee(), &SbalSkeleton::monotone(&c2)).unwrap();
        assert_eq!((r.space_homs, r.algebra_homs), (5, 5));
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn constant_maps_are_evaluations() {
        let c2 = FinitePoset::chain(2);
        let x = FinitePoset::antichain(1);
        let r = enumerate_adjunction(&x, &SbalSkeleton::monotone(&c2)).unwrap();
        assert_eq!(r.algebra_homs, 2);
        assert!(r.passed());
    }

    #[test]
    fn adjunction_cap() {
        let big = FinitePoset::chain(5);
        assert_eq!(
            enumerate_adjunction(&big, &SbalSkeleton::monotone(&FinitePoset::chain(1))).unwrap_err(),
            Error::TooLargeToEnumerate { size: 5, cap: ADJUNCTION_CAP }
        );
    }
}
