//! Ring data model: weighted demands on a cycle, the two routes per demand,
//! and the geometric predicates (cross, parallel, collide, arc sharing).
//!
//! Nodes are labeled `1..=n` and arc `k` denotes the unit arc `(k, k mod n + 1)`,
//! so arc `n` is the wrap arc `(n, 1)`. A demand `(i, j)` with `i < j` is routed
//! either through `[i, j]` (PLUS, avoids arc `n`) or through `[j, i]` (MINUS,
//! contains arc `n`).

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{is_nonnegative, Rational};

/// One of the two routes realizing a demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RouteSide {
    /// The route `[i, j]`; never contains the wrap arc `(n, 1)`.
    Plus,
    /// The complement route `[j, i]`; always contains the wrap arc.
    Minus,
}

impl RouteSide {
    pub fn opposite(self) -> RouteSide {
        match self {
            RouteSide::Plus => RouteSide::Minus,
            RouteSide::Minus => RouteSide::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            RouteSide::Plus => '+',
            RouteSide::Minus => '-',
        }
    }
}

impl fmt::Display for RouteSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Set of unit arcs over the ground set `1..=n`, stored as a bitset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSet {
    n: u32,
    words: Vec<u64>,
}

impl ArcSet {
    pub fn empty(n: u32) -> ArcSet {
        let words = vec![0u64; (n as usize).div_ceil(64)];
        ArcSet { n, words }
    }

    pub fn ring_size(&self) -> u32 {
        self.n
    }

    pub fn insert(&mut self, arc: u32) {
        debug_assert!(arc >= 1 && arc <= self.n);
        let bit = (arc - 1) as usize;
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    pub fn contains(&self, arc: u32) -> bool {
        if arc < 1 || arc > self.n {
            return false;
        }
        let bit = (arc - 1) as usize;
        self.words[bit / 64] & (1 << (bit % 64)) != 0
    }

    pub fn len(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersects(&self, other: &ArcSet) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & b != 0)
    }

    pub fn is_subset_of(&self, other: &ArcSet) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// True when the two sets jointly cover all `n` arcs.
    pub fn union_is_full(&self, other: &ArcSet) -> bool {
        debug_assert_eq!(self.n, other.n);
        let last = self.words.len() - 1;
        self.words.iter().zip(&other.words).enumerate().all(|(k, (a, b))| {
            let mask = if k == last { Self::tail_mask(self.n) } else { !0 };
            (a | b) & mask == mask
        })
    }

    pub fn complement(&self) -> ArcSet {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let last = words.len() - 1;
        words[last] &= Self::tail_mask(self.n);
        ArcSet { n: self.n, words }
    }

    pub fn arcs(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=self.n).filter(move |&a| self.contains(a))
    }

    /// True when the arcs form a single contiguous (possibly wrapping) path
    /// that is neither empty nor the whole ring.
    pub fn is_ring_path(&self) -> bool {
        let len = self.len();
        if len == 0 || len == self.n {
            return false;
        }
        // A circular run has exactly one boundary where a member arc is
        // followed by a non-member arc.
        let mut boundaries = 0;
        for arc in 1..=self.n {
            let next = arc % self.n + 1;
            if self.contains(arc) && !self.contains(next) {
                boundaries += 1;
            }
        }
        boundaries == 1
    }

    fn tail_mask(n: u32) -> u64 {
        let rem = (n as usize) % 64;
        if rem == 0 {
            !0
        } else {
            (1u64 << rem) - 1
        }
    }
}

/// A weighted origin-destination pair `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Demand {
    origin: u32,
    destination: u32,
    weight: Rational,
}

impl Demand {
    pub fn new(origin: u32, destination: u32, weight: Rational) -> Result<Demand> {
        if origin < 1 || origin >= destination {
            return Err(Error::Model(format!(
                "demand ends must satisfy 1 <= i < j, got ({origin}, {destination})"
            )));
        }
        if !is_nonnegative(&weight) {
            return Err(Error::Model(format!(
                "demand ({origin}, {destination}) has negative weight"
            )));
        }
        Ok(Demand {
            origin,
            destination,
            weight,
        })
    }

    pub fn origin(&self) -> u32 {
        self.origin
    }

    pub fn destination(&self) -> u32 {
        self.destination
    }

    pub fn ends(&self) -> (u32, u32) {
        (self.origin, self.destination)
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    /// Same end pair (a multiple of the other demand).
    pub fn same_ends(&self, other: &Demand) -> bool {
        self.ends() == other.ends()
    }
}

impl fmt::Display for Demand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.origin, self.destination)
    }
}

/// One side choice per demand, aligned with the instance's demand order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Routing {
    sides: Vec<RouteSide>,
}

impl Routing {
    pub fn new(sides: Vec<RouteSide>) -> Routing {
        Routing { sides }
    }

    pub fn all_plus(len: usize) -> Routing {
        Routing {
            sides: vec![RouteSide::Plus; len],
        }
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn side(&self, demand: usize) -> RouteSide {
        self.sides[demand]
    }

    pub fn sides(&self) -> &[RouteSide] {
        &self.sides
    }

    pub fn set_side(&mut self, demand: usize, side: RouteSide) {
        self.sides[demand] = side;
    }
}

impl fmt::Display for Routing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for side in &self.sides {
            write!(f, "{side}")?;
        }
        Ok(())
    }
}

impl FromStr for Routing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Routing> {
        let mut sides = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '+' => sides.push(RouteSide::Plus),
                '-' => sides.push(RouteSide::Minus),
                other => {
                    return Err(Error::Parse(format!(
                        "routing sides must be '+' or '-', got {other:?}"
                    )))
                }
            }
        }
        Ok(Routing { sides })
    }
}

/// Symmetric, irreflexive adjacency over demand indices: an edge joins two
/// demands whose chosen routes share at least one arc.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    len: usize,
    bits: Vec<bool>,
}

impl ConflictGraph {
    fn new(len: usize) -> ConflictGraph {
        ConflictGraph {
            len,
            bits: vec![false; len * len],
        }
    }

    fn set(&mut self, a: usize, b: usize) {
        self.bits[a * self.len + b] = true;
        self.bits[b * self.len + a] = true;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.len + b]
    }

    /// Unordered adjacent pairs, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for a in 0..self.len {
            for b in a + 1..self.len {
                if self.adjacent(a, b) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    /// Unordered non-adjacent pairs, lexicographically sorted.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for a in 0..self.len {
            for b in a + 1..self.len {
                if !self.adjacent(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        pairs
    }
}

/// A ring of `n >= 3` nodes together with an ordered list of weighted demands.
/// The list position is the canonical demand index used everywhere downstream;
/// multiples (equal end pairs) stay distinct by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: u32,
    demands: Vec<Demand>,
}

impl Instance {
    pub fn new(n: u32, demands: Vec<Demand>) -> Result<Instance> {
        if n < 3 {
            return Err(Error::Model(format!(
                "ring must have at least 3 nodes, got {n}"
            )));
        }
        for (idx, demand) in demands.iter().enumerate() {
            if demand.destination() > n {
                return Err(Error::Model(format!(
                    "demand {idx} = {demand} does not fit a ring with {n} nodes"
                )));
            }
        }
        Ok(Instance { n, demands })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn demand_count(&self) -> usize {
        self.demands.len()
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    pub fn demand(&self, index: usize) -> Result<&Demand> {
        self.demands.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.demands.len(),
        })
    }

    pub fn total_weight(&self) -> Rational {
        let mut total = Rational::zero();
        for demand in &self.demands {
            total += demand.weight();
        }
        total
    }

    /// True when every demand carries the same weight (vacuously on empty).
    pub fn weights_uniform(&self) -> bool {
        match self.demands.split_first() {
            None => true,
            Some((first, rest)) => rest.iter().all(|d| d.weight() == first.weight()),
        }
    }

    /// Arc set of the chosen route: `[i, j]` uses arcs `i..j-1`, the complement
    /// uses arcs `j..n` and `1..i-1`.
    pub fn route_arcs(&self, index: usize, side: RouteSide) -> Result<ArcSet> {
        let demand = self.demand(index)?;
        let (i, j) = demand.ends();
        let mut arcs = ArcSet::empty(self.n);
        match side {
            RouteSide::Plus => {
                for arc in i..j {
                    arcs.insert(arc);
                }
            }
            RouteSide::Minus => {
                for arc in j..=self.n {
                    arcs.insert(arc);
                }
                for arc in 1..i {
                    arcs.insert(arc);
                }
            }
        }
        Ok(arcs)
    }

    /// Node set of the chosen route, in traversal order.
    pub fn route_nodes(&self, index: usize, side: RouteSide) -> Result<Vec<u32>> {
        let demand = self.demand(index)?;
        let (i, j) = demand.ends();
        Ok(match side {
            RouteSide::Plus => (i..=j).collect(),
            RouteSide::Minus => (j..=self.n).chain(1..=i).collect(),
        })
    }

    /// Human-readable route label such as `(1,5)+`.
    pub fn route_label(&self, index: usize, side: RouteSide) -> Result<String> {
        let demand = self.demand(index)?;
        Ok(format!("{demand}{side}"))
    }

    /// Demands `p` and `q` cross when `p` has exactly one end on each side of
    /// `q` (node sets include the ends of `q` themselves). Multiples and pairs
    /// sharing an end are parallel.
    pub fn crosses(&self, p: usize, q: usize) -> Result<bool> {
        if p == q {
            return Err(Error::Model(format!(
                "crossing is defined for distinct demands, got p = q = {p}"
            )));
        }
        let dp = self.demand(p)?;
        let dq = self.demand(q)?;
        let (a, b) = dp.ends();
        let in_plus = |v: u32| dq.origin() <= v && v <= dq.destination();
        let in_minus = |v: u32| v >= dq.destination() || v <= dq.origin();
        let plus_hits = usize::from(in_plus(a)) + usize::from(in_plus(b));
        let minus_hits = usize::from(in_minus(a)) + usize::from(in_minus(b));
        Ok(plus_hits == 1 && minus_hits == 1)
    }

    pub fn parallel(&self, p: usize, q: usize) -> Result<bool> {
        Ok(!self.crosses(p, q)?)
    }

    /// Two parallel demands collide when their chosen routes overlap and
    /// jointly cover the whole ring. Multiples never collide. Asking about a
    /// crossing pair is an error.
    pub fn collides(
        &self,
        p: usize,
        side_p: RouteSide,
        q: usize,
        side_q: RouteSide,
    ) -> Result<bool> {
        if self.crosses(p, q)? {
            return Err(Error::CrossingPair { p, q });
        }
        if self.demands[p].same_ends(&self.demands[q]) {
            return Ok(false);
        }
        let arcs_p = self.route_arcs(p, side_p)?;
        let arcs_q = self.route_arcs(q, side_q)?;
        Ok(arcs_p.union_is_full(&arcs_q) && arcs_p.intersects(&arcs_q))
    }

    /// Number of unordered parallel pairs that collide under the routing.
    pub fn collision_count(&self, routing: &Routing) -> Result<usize> {
        self.check_routing(routing)?;
        let mut count = 0;
        for p in 0..self.demands.len() {
            for q in p + 1..self.demands.len() {
                if self.crosses(p, q)? {
                    continue;
                }
                if self.collides(p, routing.side(p), q, routing.side(q))? {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Builds the conflict graph of the chosen routes.
    pub fn conflict_graph(&self, routing: &Routing) -> Result<ConflictGraph> {
        self.check_routing(routing)?;
        let m = self.demands.len();
        let arcs: Vec<ArcSet> = (0..m)
            .map(|p| self.route_arcs(p, routing.side(p)))
            .collect::<Result<_>>()?;
        let mut graph = ConflictGraph::new(m);
        for p in 0..m {
            for q in p + 1..m {
                if arcs[p].intersects(&arcs[q]) {
                    graph.set(p, q);
                }
            }
        }
        Ok(graph)
    }

    pub fn check_routing(&self, routing: &Routing) -> Result<()> {
        if routing.len() != self.demands.len() {
            return Err(Error::Model(format!(
                "routing has {} sides but the instance has {} demands",
                routing.len(),
                self.demands.len()
            )));
        }
        Ok(())
    }

    /// Relabels nodes by `v -> (v - 1 + shift) mod n + 1`, renormalizing each
    /// demand to `i < j`. A ring automorphism: optimal values are unchanged.
    pub fn rotated(&self, shift: u32) -> Instance {
        let map = |v: u32| (v - 1 + shift) % self.n + 1;
        let demands = self
            .demands
            .iter()
            .map(|d| {
                let a = map(d.origin());
                let b = map(d.destination());
                Demand::new(a.min(b), a.max(b), d.weight().clone())
                    .expect("rotation preserves demand validity")
            })
            .collect();
        Instance {
            n: self.n,
            demands,
        }
    }
}

/// True iff the two route arc sets share at least one arc.
pub fn routes_share_arc(a: &ArcSet, b: &ArcSet) -> Result<bool> {
    if a.ring_size() != b.ring_size() {
        return Err(Error::RingSizeMismatch {
            left: a.ring_size(),
            right: b.ring_size(),
        });
    }
    Ok(a.intersects(b))
}
