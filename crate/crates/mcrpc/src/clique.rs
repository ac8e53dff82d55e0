//! Exact maximum-weight clique computation over families of ring arcs.
//!
//! A clique is a set of members whose arc sets pairwise intersect. The engine
//! first takes the best single-arc (Helly) clique from the arc loads as a
//! lower bound, then runs a branch-and-bound over the member adjacency that
//! also reaches cliques with no common arc, which exist for circular arcs.
//! Weights are scaled to a common integer denominator so the search sums
//! machine or big integers instead of rationals. An exhaustive backtracking
//! oracle over member subsets is kept alongside for cross-checking.
//!
//! Ties between equal-weight cliques resolve to the lexicographically
//! smallest member-index set; zero-weight members are kept in families but
//! never appear in witnesses.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ring::{ArcSet, Instance, RouteSide, Routing};

/// One arc path with a weight and a display label.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub arcs: ArcSet,
    pub weight: Rational,
    pub label: String,
}

/// A family of weighted ring paths; the ground object for clique queries.
#[derive(Debug, Clone)]
pub struct WeightedArcFamily {
    n: u32,
    members: Vec<FamilyMember>,
}

impl WeightedArcFamily {
    pub fn new(n: u32, members: Vec<FamilyMember>) -> Result<WeightedArcFamily> {
        for (idx, member) in members.iter().enumerate() {
            if member.arcs.ring_size() != n {
                return Err(Error::RingSizeMismatch {
                    left: n,
                    right: member.arcs.ring_size(),
                });
            }
            if !member.arcs.is_ring_path() {
                return Err(Error::Model(format!(
                    "family member {idx} ({}) is not a nonempty proper ring path",
                    member.label
                )));
            }
            if member.weight.is_negative() {
                return Err(Error::Model(format!(
                    "family member {idx} ({}) has negative weight",
                    member.label
                )));
            }
        }
        Ok(WeightedArcFamily { n, members })
    }

    /// Family of the routes chosen by a routing; member index equals demand
    /// index.
    pub fn of_routing(instance: &Instance, routing: &Routing) -> Result<WeightedArcFamily> {
        instance.check_routing(routing)?;
        let members = (0..instance.demand_count())
            .map(|p| {
                let side = routing.side(p);
                Ok(FamilyMember {
                    arcs: instance.route_arcs(p, side)?,
                    weight: instance.demand(p)?.weight().clone(),
                    label: instance.route_label(p, side)?,
                })
            })
            .collect::<Result<_>>()?;
        WeightedArcFamily::new(instance.n(), members)
    }

    /// Family of all `2|D|` routes; member `2p` is the plus route of demand
    /// `p` and member `2p + 1` its complement.
    pub fn of_all_routes(instance: &Instance) -> Result<WeightedArcFamily> {
        let mut members = Vec::with_capacity(2 * instance.demand_count());
        for p in 0..instance.demand_count() {
            for side in [RouteSide::Plus, RouteSide::Minus] {
                members.push(FamilyMember {
                    arcs: instance.route_arcs(p, side)?,
                    weight: instance.demand(p)?.weight().clone(),
                    label: instance.route_label(p, side)?,
                });
            }
        }
        WeightedArcFamily::new(instance.n(), members)
    }

    pub fn ring_size(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[FamilyMember] {
        &self.members
    }

    pub fn member(&self, index: usize) -> Result<&FamilyMember> {
        self.members.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.members.len(),
        })
    }
}

/// A set of pairwise arc-sharing members and their total weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueWitness {
    /// Member indices into the queried family, ascending.
    pub members: Vec<usize>,
    pub weight: Rational,
}

impl CliqueWitness {
    pub fn empty() -> CliqueWitness {
        CliqueWitness {
            members: Vec::new(),
            weight: Rational::zero(),
        }
    }

    pub fn labels(&self, family: &WeightedArcFamily) -> Vec<String> {
        self.members
            .iter()
            .map(|&m| family.members()[m].label.clone())
            .collect()
    }
}

/// Sum of the weights of the members containing the arc.
pub fn arc_load(family: &WeightedArcFamily, arc: u32) -> Result<Rational> {
    if arc < 1 || arc > family.ring_size() {
        return Err(Error::ArcOutOfRange {
            arc,
            n: family.ring_size(),
        });
    }
    let mut load = Rational::zero();
    for member in family.members() {
        if member.arcs.contains(arc) {
            load += &member.weight;
        }
    }
    Ok(load)
}

/// Exact maximum-weight clique of the family. The value is unique; the
/// witness is the lexicographically smallest optimal member set after
/// dropping zero-weight members.
pub fn max_weight_clique(family: &WeightedArcFamily) -> CliqueWitness {
    let positive: Vec<usize> = (0..family.len())
        .filter(|&i| family.members()[i].weight.is_positive())
        .collect();
    if positive.is_empty() {
        return CliqueWitness::empty();
    }
    let arcs: Vec<&ArcSet> = positive.iter().map(|&i| &family.members()[i].arcs).collect();
    let weights: Vec<&Rational> = positive
        .iter()
        .map(|&i| &family.members()[i].weight)
        .collect();
    let scaled = ScaledWeights::from_rationals(&weights);
    let rows = adjacency_rows(&arcs);
    let (value, local) = run_search(family.ring_size(), &arcs, &rows, &scaled);
    CliqueWitness {
        members: local.into_iter().map(|i| positive[i]).collect(),
        weight: value,
    }
}

/// Exhaustive backtracking over member subsets; the independent oracle for
/// `max_weight_clique`. Guarded to 25 members.
pub fn brute_force_max_clique(family: &WeightedArcFamily) -> Result<CliqueWitness> {
    const LIMIT: usize = 25;
    if family.len() > LIMIT {
        return Err(Error::SizeLimit {
            what: "brute-force clique search",
            limit: LIMIT,
            actual: family.len(),
        });
    }
    let positive: Vec<usize> = (0..family.len())
        .filter(|&i| family.members()[i].weight.is_positive())
        .collect();
    let m = positive.len();
    let mut compatible = vec![true; m * m];
    for a in 0..m {
        for b in 0..m {
            if a != b {
                let sa = &family.members()[positive[a]].arcs;
                let sb = &family.members()[positive[b]].arcs;
                compatible[a * m + b] = sa.intersects(sb);
            }
        }
    }
    let weights: Vec<&Rational> = positive
        .iter()
        .map(|&i| &family.members()[i].weight)
        .collect();

    struct Exhaustive<'a> {
        m: usize,
        compatible: &'a [bool],
        weights: &'a [&'a Rational],
        best_weight: Rational,
        best_set: Vec<usize>,
        current: Vec<usize>,
    }

    impl Exhaustive<'_> {
        fn recurse(&mut self, start: usize, current_weight: &Rational) {
            if current_weight > &self.best_weight
                || (current_weight == &self.best_weight && self.current < self.best_set)
            {
                self.best_weight = current_weight.clone();
                self.best_set = self.current.clone();
            }
            for v in start..self.m {
                if self
                    .current
                    .iter()
                    .all(|&u| self.compatible[u * self.m + v])
                {
                    self.current.push(v);
                    let w = current_weight + self.weights[v];
                    self.recurse(v + 1, &w);
                    self.current.pop();
                }
            }
        }
    }

    let mut search = Exhaustive {
        m,
        compatible: &compatible,
        weights: &weights,
        best_weight: Rational::zero(),
        best_set: Vec::new(),
        current: Vec::new(),
    };
    let zero = Rational::zero();
    search.recurse(0, &zero);
    Ok(CliqueWitness {
        members: search.best_set.into_iter().map(|i| positive[i]).collect(),
        weight: search.best_weight,
    })
}

// ---------------------------------------------------------------------------
// Shared search internals, also used by the routing evaluator.
// ---------------------------------------------------------------------------

/// Bitset over member indices.
#[derive(Clone)]
pub(crate) struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    fn zeros(len: usize) -> BitRow {
        BitRow {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn full(len: usize) -> BitRow {
        let mut row = BitRow {
            words: vec![!0u64; len.div_ceil(64)],
        };
        let rem = len % 64;
        if rem != 0 {
            if let Some(last) = row.words.last_mut() {
                *last = (1u64 << rem) - 1;
            }
        }
        row
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn and_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    fn lowest(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + bit)
                }
            })
        })
    }
}

fn adjacency_rows(arcs: &[&ArcSet]) -> Vec<BitRow> {
    let m = arcs.len();
    let mut rows = vec![BitRow::zeros(m); m];
    for a in 0..m {
        for b in a + 1..m {
            if arcs[a].intersects(arcs[b]) {
                rows[a].set(b);
                rows[b].set(a);
            }
        }
    }
    rows
}

/// Clique sums in a scaled integer domain: every weight times the common
/// denominator. Falls back to big integers when `u64` cannot hold the totals.
pub(crate) struct ScaledWeights {
    scale: BigInt,
    values: ScaledVec,
}

enum ScaledVec {
    Small(Vec<u64>),
    Big(Vec<BigUint>),
}

impl ScaledWeights {
    pub(crate) fn from_rationals(weights: &[&Rational]) -> ScaledWeights {
        let mut scale = BigInt::one();
        for w in weights {
            scale = scale.lcm(w.denom());
        }
        let big: Vec<BigUint> = weights
            .iter()
            .map(|w| {
                let scaled = w.numer() * (&scale / w.denom());
                scaled.to_biguint().expect("weights are nonnegative")
            })
            .collect();
        let total: BigUint = big.iter().sum();
        let values = if total.bits() <= 63 {
            ScaledVec::Small(big.iter().map(|v| u64::try_from(v).unwrap()).collect())
        } else {
            ScaledVec::Big(big)
        };
        ScaledWeights { scale, values }
    }

    fn to_rational(&self, sum: BigUint) -> Rational {
        Rational::new(BigInt::from(sum), self.scale.clone())
    }
}

trait SumWeight: Clone + Ord {
    fn zero() -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn sub_assign_ref(&mut self, rhs: &Self);
}

impl SumWeight for u64 {
    fn zero() -> u64 {
        0
    }
    fn add_ref(&self, rhs: &u64) -> u64 {
        self + rhs
    }
    fn add_assign_ref(&mut self, rhs: &u64) {
        *self += rhs;
    }
    fn sub_assign_ref(&mut self, rhs: &u64) {
        *self -= rhs;
    }
}

impl SumWeight for BigUint {
    fn zero() -> BigUint {
        <BigUint as Zero>::zero()
    }
    fn add_ref(&self, rhs: &BigUint) -> BigUint {
        self + rhs
    }
    fn add_assign_ref(&mut self, rhs: &BigUint) {
        *self += rhs;
    }
    fn sub_assign_ref(&mut self, rhs: &BigUint) {
        *self -= rhs;
    }
}

/// Best single-arc clique value: the maximum arc load.
fn helly_bound<W: SumWeight>(n: u32, arcs: &[&ArcSet], weights: &[W]) -> W {
    let mut best = W::zero();
    for arc in 1..=n {
        let mut load = W::zero();
        for (set, w) in arcs.iter().zip(weights) {
            if set.contains(arc) {
                load.add_assign_ref(w);
            }
        }
        if load > best {
            best = load;
        }
    }
    best
}

struct BranchAndBound<'a, W> {
    adjacency: &'a [BitRow],
    weights: &'a [W],
    best_weight: W,
    best_set: Option<Vec<usize>>,
    current: Vec<usize>,
}

impl<W: SumWeight> BranchAndBound<'_, W> {
    fn offer(&mut self, weight: &W) {
        match weight.cmp(&self.best_weight) {
            std::cmp::Ordering::Greater => {
                self.best_weight = weight.clone();
                self.best_set = Some(self.current.clone());
            }
            std::cmp::Ordering::Equal => {
                let replace = match &self.best_set {
                    None => true,
                    Some(set) => self.current < *set,
                };
                if replace {
                    self.best_set = Some(self.current.clone());
                }
            }
            std::cmp::Ordering::Less => {}
        }
    }

    fn run(&mut self, mut candidates: BitRow, current_weight: W) {
        self.offer(&current_weight);
        let mut rest = W::zero();
        for v in candidates.ones() {
            rest.add_assign_ref(&self.weights[v]);
        }
        // Strict comparison: equal-weight branches stay open so the
        // lexicographic tie-break sees every optimal clique.
        if current_weight.add_ref(&rest) < self.best_weight {
            return;
        }
        while let Some(v) = candidates.lowest() {
            let mut sub = candidates.clone();
            sub.and_assign(&self.adjacency[v]);
            self.current.push(v);
            self.run(sub, current_weight.add_ref(&self.weights[v]));
            self.current.pop();
            candidates.remove(v);
            rest.sub_assign_ref(&self.weights[v]);
            if current_weight.add_ref(&rest) < self.best_weight {
                return;
            }
        }
    }
}

fn branch_and_bound<W: SumWeight>(
    adjacency: &[BitRow],
    weights: &[W],
    initial_bound: W,
) -> (W, Vec<usize>) {
    let mut search = BranchAndBound {
        adjacency,
        weights,
        best_weight: initial_bound,
        best_set: None,
        current: Vec::new(),
    };
    search.run(BitRow::full(weights.len()), W::zero());
    let set = search
        .best_set
        .expect("a clique matching the arc-load bound always exists");
    (search.best_weight, set)
}

/// Runs the full engine over positive-weight members: `arcs`, `rows`, and the
/// scaled weights must be index-aligned. Returns the optimal value and the
/// canonical witness in local indices.
pub(crate) fn run_search(
    n: u32,
    arcs: &[&ArcSet],
    rows: &[BitRow],
    scaled: &ScaledWeights,
) -> (Rational, Vec<usize>) {
    if arcs.is_empty() {
        return (Rational::zero(), Vec::new());
    }
    match &scaled.values {
        ScaledVec::Small(weights) => {
            let bound = helly_bound(n, arcs, weights);
            let (best, set) = branch_and_bound(rows, weights, bound);
            (scaled.to_rational(BigUint::from(best)), set)
        }
        ScaledVec::Big(weights) => {
            let bound = helly_bound(n, arcs, weights);
            let (best, set) = branch_and_bound(rows, weights, bound);
            (scaled.to_rational(best), set)
        }
    }
}

/// Precomputed route geometry for evaluating many routings of one instance:
/// route arc sets, the route-pair adjacency table, and scaled weights.
pub(crate) struct RoutingEvaluator<'a> {
    instance: &'a Instance,
    route_arcs: Vec<[ArcSet; 2]>,
    /// Adjacency over route slots `2p + side`.
    route_adjacent: Vec<bool>,
    positive: Vec<usize>,
    scaled: ScaledWeights,
}

impl<'a> RoutingEvaluator<'a> {
    pub(crate) fn new(instance: &'a Instance) -> Result<RoutingEvaluator<'a>> {
        let m = instance.demand_count();
        let mut route_arcs = Vec::with_capacity(m);
        for p in 0..m {
            route_arcs.push([
                instance.route_arcs(p, RouteSide::Plus)?,
                instance.route_arcs(p, RouteSide::Minus)?,
            ]);
        }
        let slots = 2 * m;
        let mut route_adjacent = vec![false; slots * slots];
        for a in 0..slots {
            for b in a + 1..slots {
                let sa = &route_arcs[a / 2][a % 2];
                let sb = &route_arcs[b / 2][b % 2];
                if sa.intersects(sb) {
                    route_adjacent[a * slots + b] = true;
                    route_adjacent[b * slots + a] = true;
                }
            }
        }
        let positive: Vec<usize> = (0..m)
            .filter(|&p| instance.demands()[p].weight().is_positive())
            .collect();
        let weights: Vec<&Rational> = positive
            .iter()
            .map(|&p| instance.demands()[p].weight())
            .collect();
        let scaled = ScaledWeights::from_rationals(&weights);
        Ok(RoutingEvaluator {
            instance,
            route_arcs,
            route_adjacent,
            positive,
            scaled,
        })
    }

    fn slot(p: usize, side: RouteSide) -> usize {
        2 * p
            + match side {
                RouteSide::Plus => 0,
                RouteSide::Minus => 1,
            }
    }

    /// Clique value and canonical witness (over demand indices) of the
    /// conflict family selected by `sides`.
    pub(crate) fn evaluate_sides(&self, sides: &[RouteSide]) -> (Rational, CliqueWitness) {
        debug_assert_eq!(sides.len(), self.instance.demand_count());
        let k = self.positive.len();
        if k == 0 {
            return (Rational::zero(), CliqueWitness::empty());
        }
        let slots = 2 * self.instance.demand_count();
        let mut rows = vec![BitRow::zeros(k); k];
        for a in 0..k {
            let sa = Self::slot(self.positive[a], sides[self.positive[a]]);
            for b in a + 1..k {
                let sb = Self::slot(self.positive[b], sides[self.positive[b]]);
                if self.route_adjacent[sa * slots + sb] {
                    rows[a].set(b);
                    rows[b].set(a);
                }
            }
        }
        let arcs: Vec<&ArcSet> = self
            .positive
            .iter()
            .map(|&p| {
                let side = sides[p];
                &self.route_arcs[p][match side {
                    RouteSide::Plus => 0,
                    RouteSide::Minus => 1,
                }]
            })
            .collect();
        let (value, local) = run_search(self.instance.n(), &arcs, &rows, &self.scaled);
        let witness = CliqueWitness {
            members: local.into_iter().map(|i| self.positive[i]).collect(),
            weight: value.clone(),
        };
        (value, witness)
    }

    pub(crate) fn evaluate(&self, routing: &Routing) -> Result<(Rational, CliqueWitness)> {
        self.instance.check_routing(routing)?;
        Ok(self.evaluate_sides(routing.sides()))
    }
}
