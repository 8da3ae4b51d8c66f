//! Matroids over a ground set of stocks, and the greedy maximum-weight
//! feasible set.
//!
//! Elements are indexed `0..k` in the Rust API. Four representations are
//! supported: uniform, partition, graphic (edges of a multigraph) and
//! explicit (a stored family of feasible sets, limited to
//! [`ENUMERATION_LIMIT`] elements).

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest ground set representable by a [`StockSet`].
pub const MAX_GROUND_SIZE: usize = 64;

/// Largest ground set for which subset enumeration (density, explicit
/// families, brute-force checks) is attempted.
pub const ENUMERATION_LIMIT: usize = 20;

/// A subset of the ground set, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StockSet(u64);

impl StockSet {
    pub const fn empty() -> Self {
        StockSet(0)
    }

    /// The whole ground set `{0, .., k-1}`.
    pub fn full(k: usize) -> Self {
        debug_assert!(k <= MAX_GROUND_SIZE);
        if k == MAX_GROUND_SIZE {
            StockSet(u64::MAX)
        } else {
            StockSet((1u64 << k) - 1)
        }
    }

    pub const fn from_bits(bits: u64) -> Self {
        StockSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(e: usize) -> Self {
        StockSet(1u64 << e)
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_GROUND_SIZE && self.0 >> e & 1 == 1
    }

    #[must_use]
    pub fn with(self, e: usize) -> Self {
        StockSet(self.0 | 1u64 << e)
    }

    #[must_use]
    pub fn without(self, e: usize) -> Self {
        StockSet(self.0 & !(1u64 << e))
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= 1u64 << e;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: StockSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[must_use]
    pub fn difference(self, other: StockSet) -> Self {
        StockSet(self.0 & !other.0)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(e)
        })
    }

    fn max_element(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }
}

impl FromIterator<usize> for StockSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = StockSet::empty();
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl fmt::Debug for StockSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for StockSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Per-element weights. Used for profits per unit of stock, for price
/// differences and for `mean - price`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(weights: Vec<Rational>) -> Self {
        WeightVector(weights)
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }
}

impl From<Vec<Rational>> for WeightVector {
    fn from(weights: Vec<Rational>) -> Self {
        WeightVector(weights)
    }
}

impl std::ops::Deref for WeightVector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

/// One block of a partition matroid: at most `cap` of `elements` may be held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionBlock {
    pub elements: Vec<usize>,
    pub cap: usize,
}

/// A family of subsets of `0..k`, stored as a membership bitmap over all
/// `2^k` subsets. Not necessarily a matroid.
#[derive(Clone, PartialEq, Eq)]
pub struct SetFamily {
    ground_size: usize,
    members: Vec<u64>,
    count: usize,
}

impl SetFamily {
    pub fn new(ground_size: usize, sets: impl IntoIterator<Item = StockSet>) -> Result<Self> {
        if ground_size > ENUMERATION_LIMIT {
            return Err(Error::Capacity {
                what: "explicit set family ground size",
                size: ground_size as u128,
                limit: ENUMERATION_LIMIT as u128,
            });
        }
        let words = ((1usize << ground_size) + 63) / 64;
        let mut family = SetFamily {
            ground_size,
            members: vec![0; words],
            count: 0,
        };
        let universe = StockSet::full(ground_size);
        for s in sets {
            if !s.is_subset(universe) {
                return Err(Error::input(format!(
                    "set {s} has elements outside the ground set of size {ground_size}"
                )));
            }
            let m = s.bits() as usize;
            let word = &mut family.members[m / 64];
            if *word >> (m % 64) & 1 == 0 {
                *word |= 1 << (m % 64);
                family.count += 1;
            }
        }
        Ok(family)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn contains(&self, s: StockSet) -> bool {
        let m = s.bits();
        if m >> self.ground_size != 0 {
            return false;
        }
        let m = m as usize;
        self.members[m / 64] >> (m % 64) & 1 == 1
    }

    /// Members in increasing bitmask order.
    pub fn iter(&self) -> impl Iterator<Item = StockSet> + '_ {
        self.members.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as u64;
                bits &= bits - 1;
                Some(StockSet::from_bits(w as u64 * 64 + b))
            })
        })
    }

    /// Checks the three matroid axioms, reporting the first violation found.
    ///
    /// Downward closure is verified one element at a time, and exchange only
    /// for pairs whose sizes differ by one; given downward closure both
    /// reductions are equivalent to the full axioms.
    pub fn check_axioms(&self) -> AxiomCheck {
        if !self.contains(StockSet::empty()) {
            return AxiomCheck::Violated(AxiomViolation::EmptySetMissing);
        }
        for s in self.iter() {
            for e in s.iter() {
                if !self.contains(s.without(e)) {
                    return AxiomCheck::Violated(AxiomViolation::NotDownwardClosed {
                        set: s,
                        missing: s.without(e),
                    });
                }
            }
        }
        let mut by_size: Vec<Vec<StockSet>> = vec![Vec::new(); self.ground_size + 1];
        for s in self.iter() {
            by_size[s.len()].push(s);
        }
        for size in 0..self.ground_size {
            for &small in &by_size[size] {
                for &large in &by_size[size + 1] {
                    let augmentable = large
                        .difference(small)
                        .iter()
                        .any(|e| self.contains(small.with(e)));
                    if !augmentable {
                        return AxiomCheck::Violated(AxiomViolation::Exchange { larger: large, smaller: small });
                    }
                }
            }
        }
        AxiomCheck::Valid
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetFamily")
            .field("ground_size", &self.ground_size)
            .field("sets", &self.iter().collect::<Vec<_>>())
            .finish()
    }
}

/// The first matroid axiom found to fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomViolation {
    EmptySetMissing,
    NotDownwardClosed { set: StockSet, missing: StockSet },
    Exchange { larger: StockSet, smaller: StockSet },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::EmptySetMissing => write!(f, "the empty set is not feasible"),
            AxiomViolation::NotDownwardClosed { set, missing } => {
                write!(f, "{set} is feasible but its subset {missing} is not")
            }
            AxiomViolation::Exchange { larger, smaller } => {
                write!(f, "no element of {larger} extends {smaller} to a feasible set")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomCheck {
    Valid,
    Violated(AxiomViolation),
}

impl AxiomCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, AxiomCheck::Valid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatroidKind {
    /// Any set of at most `capacity` elements.
    Uniform { capacity: usize },
    /// At most `cap` elements from each block.
    Partition { blocks: Vec<PartitionBlock> },
    /// Element `i` is the edge `edges[i]`; acyclic edge sets are feasible.
    /// Vertices are compacted to `0..vertex_count`.
    Graphic {
        edges: Vec<(usize, usize)>,
        vertex_count: usize,
    },
    Explicit(SetFamily),
}

impl MatroidKind {
    pub fn name(&self) -> &'static str {
        match self {
            MatroidKind::Uniform { .. } => "uniform",
            MatroidKind::Partition { .. } => "partition",
            MatroidKind::Graphic { .. } => "graphic",
            MatroidKind::Explicit(_) => "explicit",
        }
    }
}

/// A matroid on the stocks `0..ground_size`.
///
/// Values are immutable once built. The density is computed lazily and
/// cached, so sharing a `Matroid` between threads is cheap.
#[derive(Clone)]
pub struct Matroid {
    ground_size: usize,
    kind: MatroidKind,
    block_of: Vec<usize>,
    density: OnceLock<Result<(Rational, StockSet)>>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground_size == other.ground_size && self.kind == other.kind
    }
}

impl Eq for Matroid {}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("ground_size", &self.ground_size)
            .field("kind", &self.kind)
            .finish()
    }
}

fn check_ground_size(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::input("ground set must be non-empty"));
    }
    if k > MAX_GROUND_SIZE {
        return Err(Error::Capacity {
            what: "ground set size",
            size: k as u128,
            limit: MAX_GROUND_SIZE as u128,
        });
    }
    Ok(())
}

impl Matroid {
    fn from_kind(ground_size: usize, kind: MatroidKind, block_of: Vec<usize>) -> Self {
        Matroid {
            ground_size,
            kind,
            block_of,
            density: OnceLock::new(),
        }
    }

    /// The `capacity`-uniform matroid on `k` elements.
    pub fn uniform(k: usize, capacity: usize) -> Result<Self> {
        check_ground_size(k)?;
        if capacity == 0 || capacity > k {
            return Err(Error::input(format!(
                "uniform capacity must be in 1..={k}, got {capacity}"
            )));
        }
        Ok(Self::from_kind(k, MatroidKind::Uniform { capacity }, Vec::new()))
    }

    /// A partition matroid. Blocks must be disjoint, cover `0..k`, and have
    /// positive caps.
    pub fn partition(k: usize, blocks: Vec<PartitionBlock>) -> Result<Self> {
        check_ground_size(k)?;
        let mut block_of = vec![usize::MAX; k];
        for (b, block) in blocks.iter().enumerate() {
            if block.cap == 0 {
                return Err(Error::input(format!("partition block {b} has cap 0")));
            }
            for &e in &block.elements {
                if e >= k {
                    return Err(Error::input(format!("partition element {e} out of range 0..{k}")));
                }
                if block_of[e] != usize::MAX {
                    return Err(Error::input(format!("element {e} appears in two partition blocks")));
                }
                block_of[e] = b;
            }
        }
        if let Some(e) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::input(format!("element {e} is not covered by any partition block")));
        }
        Ok(Self::from_kind(k, MatroidKind::Partition { blocks }, block_of))
    }

    /// The graphic matroid of a multigraph; stock `i` is `edges[i]`.
    /// Vertex labels are arbitrary and are compacted internally. Self-loops
    /// are rejected because they would be matroid loops.
    pub fn graphic(edges: Vec<(usize, usize)>) -> Result<Self> {
        check_ground_size(edges.len())?;
        let mut labels: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        labels.sort_unstable();
        labels.dedup();
        let compact = |x: usize| labels.binary_search(&x).expect("label collected above");
        let mut relabeled = Vec::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(Error::InvalidMatroid(format!(
                    "edge {i} is a self-loop on vertex {u}"
                )));
            }
            relabeled.push((compact(u), compact(v)));
        }
        Ok(Self::from_kind(
            edges.len(),
            MatroidKind::Graphic {
                edges: relabeled,
                vertex_count: labels.len(),
            },
            Vec::new(),
        ))
    }

    /// A matroid given by its family of feasible sets. Only range checks are
    /// done here; use [`Matroid::verify_matroid_axioms`] or
    /// [`Matroid::validate`] before relying on matroid structure.
    pub fn explicit(family: SetFamily) -> Result<Self> {
        check_ground_size(family.ground_size())?;
        Ok(Self::from_kind(family.ground_size(), MatroidKind::Explicit(family), Vec::new()))
    }

    pub fn explicit_from_sets(k: usize, sets: impl IntoIterator<Item = StockSet>) -> Result<Self> {
        Self::explicit(SetFamily::new(k, sets)?)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        self.kind.name()
    }

    fn check_set(&self, s: StockSet) -> Result<()> {
        if s.is_subset(StockSet::full(self.ground_size)) {
            Ok(())
        } else {
            Err(Error::input(format!(
                "set {s} has elements outside 0..{}",
                self.ground_size
            )))
        }
    }

    /// Feasibility of a set already known to lie inside the ground set.
    pub(crate) fn feasible_unchecked(&self, s: StockSet) -> bool {
        match &self.kind {
            MatroidKind::Uniform { capacity } => s.len() <= *capacity,
            MatroidKind::Partition { blocks } => {
                let mut counts = vec![0usize; blocks.len()];
                s.iter().all(|e| {
                    let b = self.block_of[e];
                    counts[b] += 1;
                    counts[b] <= blocks[b].cap
                })
            }
            MatroidKind::Graphic { edges, vertex_count } => {
                let mut forest = UnionFind::new(*vertex_count);
                s.iter().all(|e| forest.union(edges[e].0, edges[e].1))
            }
            MatroidKind::Explicit(family) => family.contains(s),
        }
    }

    pub fn is_feasible(&self, s: StockSet) -> Result<bool> {
        self.check_set(s)?;
        Ok(self.feasible_unchecked(s))
    }

    /// Size of the largest feasible subset of `s`, found greedily.
    pub fn rank(&self, s: StockSet) -> Result<usize> {
        self.check_set(s)?;
        let mut ext = self.extender();
        for e in s.iter() {
            ext.try_add(e);
        }
        Ok(ext.set().len())
    }

    /// Returns `Err(InvalidMatroid)` naming the first loop, if any.
    pub fn check_loopless(&self) -> Result<()> {
        match (0..self.ground_size).find(|&e| !self.feasible_unchecked(StockSet::singleton(e))) {
            Some(e) => Err(Error::InvalidMatroid(format!("element {e} is a loop"))),
            None => Ok(()),
        }
    }

    /// Verifies the matroid axioms of an explicit family.
    pub fn verify_matroid_axioms(&self) -> Result<AxiomCheck> {
        match &self.kind {
            MatroidKind::Explicit(family) => Ok(family.check_axioms()),
            other => Err(Error::UnsupportedKind {
                op: "axiom verification",
                kind: other.name(),
            }),
        }
    }

    /// Checks that this is a loopless matroid. Structured kinds are matroids
    /// by construction; explicit families are verified axiom by axiom.
    pub fn validate(&self) -> Result<()> {
        if let MatroidKind::Explicit(family) = &self.kind {
            if let AxiomCheck::Violated(v) = family.check_axioms() {
                return Err(Error::InvalidMatroid(v.to_string()));
            }
        }
        self.check_loopless()
    }

    /// Enumerates every feasible set into an explicit matroid.
    pub fn to_explicit(&self) -> Result<Matroid> {
        if self.ground_size > ENUMERATION_LIMIT {
            return Err(Error::Capacity {
                what: "feasible-set enumeration",
                size: self.ground_size as u128,
                limit: ENUMERATION_LIMIT as u128,
            });
        }
        let sets = (0..1u64 << self.ground_size)
            .map(StockSet::from_bits)
            .filter(|&s| self.feasible_unchecked(s));
        Matroid::explicit(SetFamily::new(self.ground_size, sets)?)
    }

    /// `d = max |X| / rk(X)` over non-empty `X`.
    pub fn density(&self) -> Result<Rational> {
        self.density_and_witness().map(|(d, _)| d)
    }

    /// A non-empty set attaining the density. For uniform matroids this is
    /// the whole ground set.
    pub fn densest_set(&self) -> Result<StockSet> {
        self.density_and_witness().map(|(_, x)| x)
    }

    fn density_and_witness(&self) -> Result<(Rational, StockSet)> {
        self.density.get_or_init(|| self.compute_density()).clone()
    }

    fn compute_density(&self) -> Result<(Rational, StockSet)> {
        self.check_loopless()?;
        if let MatroidKind::Uniform { capacity } = self.kind {
            return Ok((
                Rational::new(self.ground_size.into(), capacity.into()),
                StockSet::full(self.ground_size),
            ));
        }
        if self.ground_size > ENUMERATION_LIMIT {
            return Err(Error::Capacity {
                what: "density enumeration",
                size: self.ground_size as u128,
                limit: ENUMERATION_LIMIT as u128,
            });
        }
        // basis[X] extends the greedy basis of X minus its largest element,
        // which is exactly the index-order greedy basis of X.
        let subsets = 1usize << self.ground_size;
        let mut basis = vec![StockSet::empty(); subsets];
        let mut best = (Rational::zero(), StockSet::empty());
        for mask in 1..subsets {
            let x = StockSet::from_bits(mask as u64);
            let top = x.max_element().expect("non-empty mask");
            let prev = basis[x.without(top).bits() as usize];
            let grown = prev.with(top);
            basis[mask] = if self.feasible_unchecked(grown) { grown } else { prev };
            let size = x.len();
            if Rational::from_integer(size.into()) <= best.0 {
                continue;
            }
            let ratio = Rational::new(size.into(), basis[mask].len().into());
            if ratio > best.0 {
                best = (ratio, x);
            }
        }
        Ok(best)
    }

    /// Greedy (Kruskal) maximum-weight feasible set.
    ///
    /// Elements are scanned by decreasing weight, ties broken by increasing
    /// index; the scan stops at the first strictly negative weight, so
    /// feasible zero-weight elements are included.
    pub fn max_weight_feasible_set(&self, w: &WeightVector) -> Result<(StockSet, Rational)> {
        self.check_weights(w)?;
        let set = self.greedy(w);
        let weight = set.iter().map(|e| &w[e]).sum();
        Ok((set, weight))
    }

    /// `top_M(w)`: the weight of a maximum-weight feasible set.
    pub fn top(&self, w: &[Rational]) -> Result<Rational> {
        self.check_weights(w)?;
        Ok(self.top_unchecked(w))
    }

    pub(crate) fn top_unchecked(&self, w: &[Rational]) -> Rational {
        self.greedy(w).iter().map(|e| &w[e]).sum()
    }

    fn check_weights(&self, w: &[Rational]) -> Result<()> {
        if w.len() == self.ground_size {
            Ok(())
        } else {
            Err(Error::input(format!(
                "weight vector has length {}, matroid has {} elements",
                w.len(),
                self.ground_size
            )))
        }
    }

    /// Kruskal over any totally ordered weight type.
    pub(crate) fn greedy<W: Ord + Zero>(&self, w: &[W]) -> StockSet {
        debug_assert_eq!(w.len(), self.ground_size);
        let mut order: Vec<usize> = (0..self.ground_size).collect();
        order.sort_by(|&a, &b| w[b].cmp(&w[a]).then(a.cmp(&b)));
        let zero = W::zero();
        let mut ext = self.extender();
        for e in order {
            if w[e] < zero {
                break;
            }
            ext.try_add(e);
        }
        ext.set()
    }

    fn extender(&self) -> Extender<'_> {
        let state = match &self.kind {
            MatroidKind::Uniform { .. } | MatroidKind::Explicit(_) => ExtState::Plain,
            MatroidKind::Partition { blocks } => ExtState::Counts(vec![0; blocks.len()]),
            MatroidKind::Graphic { vertex_count, .. } => ExtState::Forest(UnionFind::new(*vertex_count)),
        };
        Extender {
            matroid: self,
            set: StockSet::empty(),
            state,
        }
    }
}

/// Incrementally grows a feasible set, one candidate element at a time.
struct Extender<'a> {
    matroid: &'a Matroid,
    set: StockSet,
    state: ExtState,
}

enum ExtState {
    Plain,
    Counts(Vec<usize>),
    Forest(UnionFind),
}

impl Extender<'_> {
    fn try_add(&mut self, e: usize) -> bool {
        let accepted = match (&self.matroid.kind, &mut self.state) {
            (MatroidKind::Uniform { capacity }, _) => self.set.len() < *capacity,
            (MatroidKind::Explicit(family), _) => family.contains(self.set.with(e)),
            (MatroidKind::Partition { blocks }, ExtState::Counts(counts)) => {
                let b = self.matroid.block_of[e];
                if counts[b] < blocks[b].cap {
                    counts[b] += 1;
                    true
                } else {
                    false
                }
            }
            (MatroidKind::Graphic { edges, .. }, ExtState::Forest(forest)) => forest.union(edges[e].0, edges[e].1),
            _ => unreachable!("extender state matches matroid kind"),
        };
        if accepted {
            self.set.insert(e);
        }
        accepted
    }

    fn set(&self) -> StockSet {
        self.set
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false if they were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// `1 / (1 + d)`, the competitive guarantee of the online policy on a
/// matroid of density `d`.
pub fn matroid_guarantee(m: &Matroid) -> Result<Rational> {
    Ok((Rational::one() + m.density()?).recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn set(elems: &[usize]) -> StockSet {
        elems.iter().copied().collect()
    }

    fn triangle() -> Matroid {
        Matroid::graphic(vec![(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    fn weights(ws: &[i64]) -> WeightVector {
        ws.iter().map(|&w| int(w)).collect::<Vec<_>>().into()
    }

    #[test]
    fn feasibility_examples() {
        let u = Matroid::uniform(4, 2).unwrap();
        assert!(u.is_feasible(set(&[0, 2])).unwrap());
        assert!(!triangle().is_feasible(set(&[0, 1, 2])).unwrap());
        let e = Matroid::explicit_from_sets(2, [set(&[]), set(&[0]), set(&[1])]).unwrap();
        assert!(!e.is_feasible(set(&[0, 1])).unwrap());
    }

    #[test]
    fn out_of_range_sets_are_input_errors() {
        let u = Matroid::uniform(3, 1).unwrap();
        assert!(matches!(u.is_feasible(set(&[3])), Err(Error::InvalidInput(_))));
        assert!(matches!(u.rank(set(&[5])), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn rank_examples() {
        let u = Matroid::uniform(5, 2).unwrap();
        assert_eq!(u.rank(set(&[0, 1, 2])).unwrap(), 2);
        assert_eq!(triangle().rank(StockSet::full(3)).unwrap(), 2);
        assert_eq!(u.rank(StockSet::empty()).unwrap(), 0);
    }

    #[test]
    fn density_examples() {
        assert_eq!(Matroid::uniform(6, 2).unwrap().density().unwrap(), int(3));
        assert_eq!(triangle().density().unwrap(), ratio(3, 2));
        assert_eq!(Matroid::uniform(3, 3).unwrap().density().unwrap(), int(1));
    }

    #[test]
    fn density_of_parallel_edges() {
        // a double edge plus a pendant edge: {e0, e1} has rank 1
        let m = Matroid::graphic(vec![(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(m.density().unwrap(), int(2));
        assert_eq!(m.densest_set().unwrap(), set(&[0, 1]));
    }

    #[test]
    fn density_rejects_loops() {
        let loopy = Matroid::explicit_from_sets(2, [set(&[]), set(&[0])]).unwrap();
        assert!(matches!(loopy.density(), Err(Error::InvalidMatroid(_))));
    }

    #[test]
    fn density_enumeration_limit() {
        let blocks = vec![PartitionBlock {
            elements: (0..21).collect(),
            cap: 3,
        }];
        let m = Matroid::partition(21, blocks).unwrap();
        assert!(matches!(m.density(), Err(Error::Capacity { .. })));
    }

    #[test]
    fn kruskal_examples() {
        let u = Matroid::uniform(4, 2).unwrap();
        assert_eq!(
            u.max_weight_feasible_set(&weights(&[5, -1, 3, 3])).unwrap(),
            (set(&[0, 2]), int(8))
        );
        assert_eq!(
            triangle().max_weight_feasible_set(&weights(&[2, 2, 2])).unwrap(),
            (set(&[0, 1]), int(4))
        );
        assert_eq!(
            triangle().max_weight_feasible_set(&weights(&[-1, -2, -3])).unwrap(),
            (StockSet::empty(), int(0))
        );
    }

    #[test]
    fn kruskal_keeps_zero_weights() {
        let u = Matroid::uniform(3, 2).unwrap();
        let (s, w) = u.max_weight_feasible_set(&weights(&[0, -1, 0])).unwrap();
        assert_eq!((s, w), (set(&[0, 2]), int(0)));
    }

    #[test]
    fn kruskal_length_mismatch() {
        let u = Matroid::uniform(3, 2).unwrap();
        assert!(matches!(
            u.max_weight_feasible_set(&weights(&[1, 2])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn axiom_examples() {
        let free = Matroid::explicit_from_sets(2, [set(&[]), set(&[0]), set(&[1]), set(&[0, 1])]).unwrap();
        assert!(free.verify_matroid_axioms().unwrap().is_valid());

        let not_closed = Matroid::explicit_from_sets(2, [set(&[]), set(&[0, 1])]).unwrap();
        assert!(matches!(
            not_closed.verify_matroid_axioms().unwrap(),
            AxiomCheck::Violated(AxiomViolation::NotDownwardClosed { .. })
        ));

        // duplicate {3} is merged; exchange fails for I = {1,2}, J = {3}
        let no_exchange = Matroid::explicit_from_sets(
            3,
            [set(&[]), set(&[0]), set(&[1]), set(&[2]), set(&[0, 1]), set(&[2])],
        )
        .unwrap();
        assert_eq!(
            no_exchange.verify_matroid_axioms().unwrap(),
            AxiomCheck::Violated(AxiomViolation::Exchange {
                larger: set(&[0, 1]),
                smaller: set(&[2]),
            })
        );
        assert!(matches!(
            Matroid::uniform(2, 1).unwrap().verify_matroid_axioms(),
            Err(Error::UnsupportedKind { .. })
        ));
    }

    #[test]
    fn missing_empty_set() {
        let m = Matroid::explicit_from_sets(1, [set(&[0])]).unwrap();
        assert_eq!(
            m.verify_matroid_axioms().unwrap(),
            AxiomCheck::Violated(AxiomViolation::EmptySetMissing)
        );
    }

    #[test]
    fn constructors_validate() {
        assert!(Matroid::uniform(3, 0).is_err());
        assert!(Matroid::uniform(3, 4).is_err());
        assert!(Matroid::uniform(0, 0).is_err());
        assert!(Matroid::graphic(vec![(1, 1)]).is_err());
        let overlap = vec![
            PartitionBlock { elements: vec![0, 1], cap: 1 },
            PartitionBlock { elements: vec![1, 2], cap: 1 },
        ];
        assert!(Matroid::partition(3, overlap).is_err());
        let uncovered = vec![PartitionBlock { elements: vec![0], cap: 1 }];
        assert!(Matroid::partition(2, uncovered).is_err());
        let zero_cap = vec![PartitionBlock { elements: vec![0], cap: 0 }];
        assert!(Matroid::partition(1, zero_cap).is_err());
    }

    #[test]
    fn partition_feasibility_and_density() {
        let m = Matroid::partition(
            5,
            vec![
                PartitionBlock { elements: vec![0, 1, 2], cap: 1 },
                PartitionBlock { elements: vec![3, 4], cap: 2 },
            ],
        )
        .unwrap();
        assert!(m.is_feasible(set(&[0, 3, 4])).unwrap());
        assert!(!m.is_feasible(set(&[0, 1])).unwrap());
        assert_eq!(m.rank(StockSet::full(5)).unwrap(), 3);
        assert_eq!(m.density().unwrap(), int(3));
    }

    #[test]
    fn to_explicit_preserves_feasibility() {
        let m = triangle();
        let e = m.to_explicit().unwrap();
        assert!(e.verify_matroid_axioms().unwrap().is_valid());
        for bits in 0..8 {
            let s = StockSet::from_bits(bits);
            assert_eq!(m.is_feasible(s).unwrap(), e.is_feasible(s).unwrap());
        }
        assert_eq!(e.density().unwrap(), ratio(3, 2));
    }

    #[test]
    fn stock_set_display() {
        assert_eq!(set(&[0, 3]).to_string(), "{0,3}");
        assert_eq!(StockSet::empty().to_string(), "{}");
        assert_eq!(set(&[4, 1]).iter().collect::<Vec<_>>(), vec![1, 4]);
    }

    #[test]
    fn guarantee_of_uniform() {
        assert_eq!(matroid_guarantee(&Matroid::uniform(4, 2).unwrap()).unwrap(), ratio(1, 3));
    }
}
