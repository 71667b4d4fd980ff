//! Finite quasi-orders and posets: the combinatorial substrate.
//!
//! A finite poset with the discrete topology is a Nachbin space, so
//! [`FinitePoset`] doubles as the space side of the duality. Relations are
//! stored as dense boolean matrices indexed by declaration order.

use std::collections::BTreeSet;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::fnalg::{carrier, same_carrier, Carrier, RationalFn};

/// A reflexive, transitive relation on a finite labelled set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiOrder {
    labels: Carrier,
    leq: Vec<bool>,
}

impl QuasiOrder {
    /// Loads `pairs` over `elements` and takes the reflexive-transitive closure.
    pub fn from_pairs<S: AsRef<str>, T: AsRef<str>>(elements: &[S], pairs: &[(T, T)]) -> Result<Self> {
        let labels = carrier(elements);
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateElement(l.clone()));
            }
        }
        let index = |s: &str| {
            labels.iter().position(|l| l == s).ok_or_else(|| Error::UnknownElement(s.to_string()))
        };
        let mut edges = Vec::with_capacity(pairs.len());
        for (x, y) in pairs {
            edges.push((index(x.as_ref())?, index(y.as_ref())?));
        }
        Ok(Self::closure(labels, &edges))
    }

    /// Reflexive-transitive closure of an index relation (Warshall).
    pub fn closure(labels: Carrier, edges: &[(usize, usize)]) -> Self {
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(i, j) in edges {
            leq[i * n + j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self { labels, leq }
    }

    /// Every element related only to itself.
    pub fn discrete(labels: Carrier) -> Self {
        Self::closure(labels, &[])
    }

    /// Every pair related: the quasi-order whose monotone functions are constants.
    pub fn total(labels: Carrier) -> Self {
        let n = labels.len();
        Self { labels, leq: vec![true; n * n] }
    }

    /// Quasi-order `x <= y` iff `g(x) <= g(y)` for every generator.
    pub fn induced_by(labels: Carrier, generators: &[RationalFn]) -> Result<Self> {
        if generators.iter().any(|g| !same_carrier(&labels, g.carrier())) {
            return Err(Error::CarrierMismatch);
        }
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = generators.iter().all(|g| g.value(i) <= g.value(j));
            }
        }
        Ok(Self { labels, leq })
    }

    pub fn labels(&self) -> &Carrier {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.labels.len() + j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) && !self.leq(j, i)
    }

    pub fn equivalent(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) && self.leq(j, i)
    }

    /// All related pairs `(i, j)` with `i != j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (0..n).map(move |j| (i, j))).filter(move |&(i, j)| i != j && self.leq(i, j))
    }

    /// Labelled pairs, excluding the diagonal.
    pub fn labeled_pairs(&self) -> Vec<(String, String)> {
        self.pairs().map(|(i, j)| (self.labels[i].clone(), self.labels[j].clone())).collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.antisymmetry_violation().is_none()
    }

    pub fn antisymmetry_violation(&self) -> Option<(usize, usize)> {
        self.pairs().find(|&(i, j)| i < j && self.leq(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(i, j)| self.leq(j, i))
    }

    fn check_carrier(&self, f: &RationalFn) -> Result<()> {
        if same_carrier(&self.labels, f.carrier()) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch)
        }
    }

    /// First related pair on which `f` decreases.
    pub fn monotonicity_violation(&self, f: &RationalFn) -> Result<Option<(usize, usize)>> {
        self.check_carrier(f)?;
        Ok(self.pairs().find(|&(i, j)| f.value(i) > f.value(j)))
    }

    pub fn is_monotone(&self, f: &RationalFn) -> Result<bool> {
        Ok(self.monotonicity_violation(f)?.is_none())
    }

    /// Least monotone function above `f` (`Upper`), or greatest below (`Lower`).
    pub fn monotone_envelope(&self, f: &RationalFn, direction: Direction) -> Result<RationalFn> {
        self.check_carrier(f)?;
        let n = self.len();
        let values = (0..n)
            .map(|x| {
                let related = (0..n).filter(|&y| match direction {
                    Direction::Upper => self.leq(y, x),
                    Direction::Lower => self.leq(x, y),
                });
                let vals = related.map(|y| f.value(y));
                match direction {
                    Direction::Upper => vals.max(),
                    Direction::Lower => vals.min(),
                }
                .expect("reflexive relation has nonempty down- and up-sets")
                .clone()
            })
            .collect();
        RationalFn::new(self.labels.clone(), values)
    }

    /// Collapses the equivalence `x <= y <= x` into a poset of blocks.
    pub fn antisymmetrize(&self) -> Antisymmetrized {
        let n = self.len();
        let mut projection = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if projection[i] != usize::MAX {
                continue;
            }
            let block: Vec<usize> = (i..n).filter(|&j| self.equivalent(i, j)).collect();
            for &j in &block {
                projection[j] = blocks.len();
            }
            blocks.push(block);
        }
        let names: Vec<String> = blocks
            .iter()
            .map(|b| {
                if b.len() == 1 {
                    self.labels[b[0]].clone()
                } else {
                    let parts: Vec<&str> = b.iter().map(|&i| self.labels[i].as_str()).collect();
                    format!("{{{}}}", parts.join(","))
                }
            })
            .collect();
        let k = blocks.len();
        let mut leq = vec![false; k * k];
        for a in 0..k {
            for b in 0..k {
                leq[a * k + b] = self.leq(blocks[a][0], blocks[b][0]);
            }
        }
        let poset = FinitePoset(QuasiOrder { labels: names.into(), leq });
        Antisymmetrized { poset, projection, blocks }
    }

    /// Down-set of `i`.
    pub fn down_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq(j, i)).collect()
    }

    /// Whether `set` (given as membership flags) is an up-set.
    pub fn is_upset(&self, member: &[bool]) -> bool {
        self.pairs().all(|(i, j)| !member[i] || member[j])
    }

    /// Whether a map into `target` preserves the order.
    pub fn is_monotone_map(&self, target: &QuasiOrder, map: &[usize]) -> bool {
        self.pairs().all(|(i, j)| target.leq(map[i], map[j]))
    }

    /// Same relation on a fresh carrier with the given labels.
    pub fn relabel(&self, labels: Carrier) -> Self {
        assert_eq!(labels.len(), self.len());
        Self { labels, leq: self.leq.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Upper,
    Lower,
}

/// Output of [`QuasiOrder::antisymmetrize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Antisymmetrized {
    pub poset: FinitePoset,
    /// Element index to block index.
    pub projection: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
}

/// A finite partially ordered set: a finite Nachbin space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePoset(QuasiOrder);

impl FinitePoset {
    pub fn from_pairs<S: AsRef<str>, T: AsRef<str>>(elements: &[S], pairs: &[(T, T)]) -> Result<Self> {
        Self::try_from_quasi(QuasiOrder::from_pairs(elements, pairs)?)
    }

    pub fn try_from_quasi(q: QuasiOrder) -> Result<Self> {
        match q.antisymmetry_violation() {
            Some((i, j)) => Err(Error::AntisymmetryViolation(q.labels[i].clone(), q.labels[j].clone())),
            None => Ok(Self(q)),
        }
    }

    pub fn chain(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self(QuasiOrder::closure(labels.into(), &edges))
    }

    pub fn antichain(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
        Self(QuasiOrder::discrete(labels.into()))
    }

    pub fn as_quasi(&self) -> &QuasiOrder {
        &self.0
    }

    pub fn into_quasi(self) -> QuasiOrder {
        self.0
    }

    /// A rank function that is injective and strictly order-preserving.
    ///
    /// Kahn's algorithm, breaking ties by declaration order, so the result
    /// is deterministic.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut indegree: Vec<usize> = (0..n).map(|j| (0..n).filter(|&i| self.lt(i, j)).count()).collect();
        let mut rank = vec![usize::MAX; n];
        for r in 0..n {
            let next = (0..n)
                .find(|&i| rank[i] == usize::MAX && indegree[i] == 0)
                .expect("finite poset has a minimal unranked element");
            rank[next] = r;
            for j in 0..n {
                if self.lt(next, j) {
                    indegree[j] -= 1;
                }
            }
        }
        rank
    }
}

impl Deref for FinitePoset {
    type Target = QuasiOrder;
    fn deref(&self) -> &QuasiOrder {
        &self.0
    }
}

/// Either kind of validated order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidatedOrder {
    Poset(FinitePoset),
    Quasi(QuasiOrder),
}

impl ValidatedOrder {
    pub fn quasi(&self) -> &QuasiOrder {
        match self {
            ValidatedOrder::Poset(p) => p.as_quasi(),
            ValidatedOrder::Quasi(q) => q,
        }
    }
}

/// Closes `pairs` reflexively and transitively, then validates.
pub fn validate_order<S: AsRef<str>, T: AsRef<str>>(
    elements: &[S],
    pairs: &[(T, T)],
    require_antisymmetry: bool,
) -> Result<ValidatedOrder> {
    let q = QuasiOrder::from_pairs(elements, pairs)?;
    if require_antisymmetry {
        FinitePoset::try_from_quasi(q).map(ValidatedOrder::Poset)
    } else {
        Ok(ValidatedOrder::Quasi(q))
    }
}

/// Exhaustive enumeration of small orders.
pub mod enumerate {
    use super::*;

    fn labels(n: usize) -> Carrier {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect::<Vec<_>>().into()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
            if prefix.len() == used.len() {
                out.push(prefix.clone());
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i);
                    go(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        go(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    /// Bit encoding of the relation matrix after relabelling by `perm`.
    fn encode(q: &QuasiOrder, perm: &[usize]) -> u64 {
        let n = q.len();
        let mut code = 0u64;
        for i in 0..n {
            for j in 0..n {
                if q.leq(i, j) {
                    code |= 1 << (perm[i] * n + perm[j]);
                }
            }
        }
        code
    }

    fn canonical_code(q: &QuasiOrder, perms: &[Vec<usize>]) -> u64 {
        perms.iter().map(|p| encode(q, p)).min().unwrap_or(0)
    }

    /// One representative per isomorphism class of posets on `n` points.
    ///
    /// Every poset has a natural labelling, so it suffices to range over
    /// transitive relations contained in `i < j`; classes are deduplicated
    /// by the minimal relation matrix over all relabellings. Returned in
    /// increasing order of that canonical code.
    pub fn posets(n: usize) -> Vec<FinitePoset> {
        assert!(n <= 6, "poset enumeration capped at 6 points");
        let labels = labels(n);
        let upper: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for mask in 0u64..(1 << upper.len()) {
            let edges: Vec<(usize, usize)> =
                upper.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            let q = QuasiOrder::closure(labels.clone(), &edges);
            if q.pairs().count() != edges.len() {
                continue; // not transitively closed: its closure is visited under another mask
            }
            let code = canonical_code(&q, &perms);
            if seen.insert(code) {
                out.push((code, FinitePoset(q)));
            }
        }
        out.sort_by_key(|(c, _)| *c);
        out.into_iter().map(|(_, p)| p).collect()
    }

    /// Isomorphism-class representatives for every size `1..=max`.
    pub fn posets_up_to(max: usize) -> Vec<FinitePoset> {
        (1..=max).flat_map(posets).collect()
    }

    /// Every labelled quasi-order on `n` points (no deduplication).
    pub fn quasi_orders(n: usize) -> Vec<QuasiOrder> {
        assert!(n <= 4, "labelled quasi-order enumeration capped at 4 points");
        let labels = labels(n);
        let off: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
        let mut out = Vec::new();
        for mask in 0u64..(1 << off.len()) {
            let edges: Vec<(usize, usize)> =
                off.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            let q = QuasiOrder::closure(labels.clone(), &edges);
            if q.pairs().count() == edges.len() {
                out.push(q);
            }
        }
        out
    }

    /// Every map from an `n`-point set into an `m`-point set, lexicographically.
    pub fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::with_capacity(n)];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..m).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// Whether two posets are isomorphic.
    pub fn isomorphic(a: &QuasiOrder, b: &QuasiOrder) -> bool {
        if a.len() != b.len() {
            return false;
        }
        let perms = permutations(a.len());
        canonical_code(a, &perms) == canonical_code(b, &perms)
    }
}
