//! The function algebra `R^X` over a finite carrier, with exact rational
//! values, and its closed unital sub-algebras.
//!
//! Over a finite carrier every closed unital lattice-ordered subalgebra of
//! `R^X` is exactly the set of functions constant on the blocks of some
//! partition of `X`, so sub-algebras are represented by [`SubalgebraPartition`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// Ordered list of element labels shared between orders and functions.
pub type Carrier = Arc<[String]>;

pub fn carrier<S: AsRef<str>>(labels: &[S]) -> Carrier {
    labels.iter().map(|s| s.as_ref().to_string()).collect()
}

/// Equal label lists (pointer equality is the fast path).
pub fn same_carrier(a: &Carrier, b: &Carrier) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A rational-valued function on a finite carrier: an element of `R^X`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    carrier: Carrier,
    values: Vec<Rational>,
}

impl RationalFn {
    pub fn new(carrier: Carrier, values: Vec<Rational>) -> Result<Self> {
        if carrier.len() != values.len() {
            return Err(Error::CarrierMismatch);
        }
        Ok(Self { carrier, values })
    }

    /// Builds a function from per-label values given in any order.
    pub fn from_labeled<S: AsRef<str>>(
        carrier: Carrier,
        entries: impl IntoIterator<Item = (S, Rational)>,
    ) -> Result<Self> {
        let mut values: Vec<Option<Rational>> = vec![None; carrier.len()];
        for (label, value) in entries {
            let label = label.as_ref();
            let i = carrier
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::UnknownElement(label.to_string()))?;
            if values[i].replace(value).is_some() {
                return Err(Error::DuplicateElement(label.to_string()));
            }
        }
        let values = values
            .into_iter()
            .zip(carrier.iter())
            .map(|(v, l)| v.ok_or_else(|| Error::UnknownElement(l.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { carrier, values })
    }

    pub fn constant(carrier: Carrier, value: Rational) -> Self {
        let values = vec![value; carrier.len()];
        Self { carrier, values }
    }

    pub fn zero(carrier: Carrier) -> Self {
        Self::constant(carrier, Rational::zero())
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn get(&self, label: &str) -> Option<&Rational> {
        self.carrier.iter().position(|l| l == label).map(|i| &self.values[i])
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self { carrier: self.carrier.clone(), values: self.values.iter().map(f).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        if !same_carrier(&self.carrier, &other.carrier) {
            return Err(Error::CarrierMismatch);
        }
        Ok(Self {
            carrier: self.carrier.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    fn zip_or_panic(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        self.zip_with(other, f).expect("pointwise operation on functions with different carriers")
    }

    pub fn join(&self, other: &Self) -> Self {
        self.zip_or_panic(other, |a, b| a.max(b).clone())
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.zip_or_panic(other, |a, b| a.min(b).clone())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|v| v * r)
    }

    /// Adds the constant function `r`.
    pub fn shift(&self, r: &Rational) -> Self {
        self.map(|v| v + r)
    }

    /// Pointwise `self <= other`. Panics if the carriers differ.
    pub fn le(&self, other: &Self) -> bool {
        assert!(same_carrier(&self.carrier, &other.carrier), "comparison across carriers");
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn max_value(&self) -> Option<&Rational> {
        self.values.iter().max()
    }

    pub fn min_value(&self) -> Option<&Rational> {
        self.values.iter().min()
    }

    /// Positive part, negative part and absolute value.
    pub fn pos_neg_abs(&self) -> PosNegAbs {
        let zero = Rational::zero();
        PosNegAbs {
            plus: self.map(|v| v.max(&zero).clone()),
            minus: self.map(|v| (-v).max(zero.clone())),
            abs: self.map(|v| v.abs()),
        }
    }

    /// The uniform norm `max |f(x)|`.
    pub fn sup_norm(&self) -> Result<Rational> {
        self.values.iter().map(|v| v.abs()).max().ok_or(Error::EmptyCarrier)
    }

    /// Uniform distance; panics on carrier mismatch.
    pub fn distance(&self, other: &Self) -> Rational {
        (self - other).sup_norm().unwrap_or_else(|_| Rational::zero())
    }

    /// Precomposition with a point map `target point -> index into self`.
    pub fn pullback(&self, target: Carrier, point_map: &[usize]) -> Self {
        debug_assert_eq!(target.len(), point_map.len());
        Self { carrier: target, values: point_map.iter().map(|&j| self.values[j].clone()).collect() }
    }
}

/// Result of [`RationalFn::pos_neg_abs`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosNegAbs {
    pub plus: RationalFn,
    pub minus: RationalFn,
    pub abs: RationalFn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointwiseOp {
    Add,
    Mul,
    Join,
    Meet,
    Scalar(Rational),
}

/// Checked pointwise operation. The scalar action ignores `b` apart from
/// the carrier check.
pub fn pointwise_ops(a: &RationalFn, b: &RationalFn, op: &PointwiseOp) -> Result<RationalFn> {
    match op {
        PointwiseOp::Add => a.zip_with(b, |x, y| x + y),
        PointwiseOp::Mul => a.zip_with(b, |x, y| x * y),
        PointwiseOp::Join => a.zip_with(b, |x, y| x.max(y).clone()),
        PointwiseOp::Meet => a.zip_with(b, |x, y| x.min(y).clone()),
        PointwiseOp::Scalar(r) => {
            if !same_carrier(a.carrier(), b.carrier()) {
                return Err(Error::CarrierMismatch);
            }
            Ok(a.scale(r))
        }
    }
}

impl<'a> Add<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        self.zip_or_panic(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self.zip_or_panic(rhs, |a, b| a - b)
    }
}

impl<'a> Mul<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        self.zip_or_panic(rhs, |a, b| a * b)
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        self.map(|v| -v)
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, v)) in self.carrier.iter().zip(&self.values).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}: {}", format_rational(v))?;
        }
        f.write_str("}")
    }
}

/// A closed unital sub-algebra of `R^X`: the functions constant on each block.
///
/// Blocks are kept in canonical form (each block sorted, blocks ordered by
/// their least element) so structural equality is algebra equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraPartition {
    carrier: Carrier,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl SubalgebraPartition {
    pub fn from_block_map(carrier: Carrier, block_key: &[usize]) -> Self {
        assert_eq!(carrier.len(), block_key.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut first_of_key: Vec<(usize, usize)> = Vec::new();
        let mut block_of = vec![0; carrier.len()];
        for (i, &key) in block_key.iter().enumerate() {
            match first_of_key.iter().find(|(k, _)| *k == key) {
                Some(&(_, b)) => {
                    blocks[b].push(i);
                    block_of[i] = b;
                }
                None => {
                    first_of_key.push((key, blocks.len()));
                    block_of[i] = blocks.len();
                    blocks.push(vec![i]);
                }
            }
        }
        Self { carrier, blocks, block_of }
    }

    pub fn from_blocks(carrier: Carrier, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut key = vec![usize::MAX; carrier.len()];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::EmptyCarrier);
            }
            for &i in block {
                if i >= carrier.len() {
                    return Err(Error::UnknownElement(i.to_string()));
                }
                if key[i] != usize::MAX {
                    return Err(Error::DuplicateElement(carrier[i].clone()));
                }
                key[i] = b;
            }
        }
        if let Some(i) = key.iter().position(|&k| k == usize::MAX) {
            return Err(Error::UnknownElement(carrier[i].clone()));
        }
        Ok(Self::from_block_map(carrier, &key))
    }

    /// The full algebra `R^X`.
    pub fn discrete(carrier: Carrier) -> Self {
        let key: Vec<usize> = (0..carrier.len()).collect();
        Self::from_block_map(carrier, &key)
    }

    /// The constants.
    pub fn single(carrier: Carrier) -> Self {
        let key = vec![0; carrier.len()];
        Self::from_block_map(carrier, &key)
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn separates_points(&self) -> bool {
        self.blocks.len() == self.carrier.len()
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Self) -> bool {
        same_carrier(&self.carrier, &coarser.carrier)
            && self.blocks.iter().all(|b| b.iter().all(|&i| coarser.block_of[i] == coarser.block_of[b[0]]))
    }

    /// Membership: `f` is constant on every block.
    pub fn contains(&self, f: &RationalFn) -> bool {
        self.first_violation(f).is_none()
    }

    pub(crate) fn first_violation(&self, f: &RationalFn) -> Option<(usize, usize)> {
        for block in &self.blocks {
            let head = block[0];
            if let Some(&j) = block.iter().find(|&&j| f.value(j) != f.value(head)) {
                return Some((head, j));
            }
        }
        None
    }

    /// Values of a member on each block.
    pub fn block_values(&self, f: &RationalFn) -> Result<Vec<Rational>> {
        if !same_carrier(&self.carrier, f.carrier()) {
            return Err(Error::CarrierMismatch);
        }
        if let Some((i, j)) = self.first_violation(f) {
            return Err(Error::NotBlockConstant(self.carrier[i].clone(), self.carrier[j].clone()));
        }
        Ok(self.blocks.iter().map(|b| f.value(b[0]).clone()).collect())
    }

    /// The member taking `values[b]` on block `b`.
    pub fn lift(&self, values: &[Rational]) -> RationalFn {
        assert_eq!(values.len(), self.blocks.len());
        let v = self.block_of.iter().map(|&b| values[b].clone()).collect();
        RationalFn { carrier: self.carrier.clone(), values: v }
    }
}

/// The closed unital sub-algebra generated by `generators`: the functions
/// constant on the common level sets of the generators.
pub fn generate_closed_subalgebra(carrier: Carrier, generators: &[RationalFn]) -> Result<SubalgebraPartition> {
    if generators.iter().any(|g| !same_carrier(&carrier, g.carrier())) {
        return Err(Error::CarrierMismatch);
    }
    let n = carrier.len();
    let mut key = vec![0usize; n];
    for i in 0..n {
        key[i] = (0..=i)
            .find(|&j| generators.iter().all(|g| g.value(i) == g.value(j)))
            .unwrap_or(i);
    }
    Ok(SubalgebraPartition::from_block_map(carrier, &key))
}
