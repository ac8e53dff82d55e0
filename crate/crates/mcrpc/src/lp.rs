//! LP-relaxation 3/2-approximation: cutting planes with exact clique
//! separation, parallel-demand re-routing until the fractional support is
//! pairwise crossing, and threshold rounding. All arithmetic is exact, so
//! "violated" and "feasible" are unambiguous.

mod simplex;

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::clique::{
    max_weight_clique, CliqueWitness, FamilyMember, RoutingEvaluator, WeightedArcFamily,
};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ring::{ArcSet, Instance, RouteSide, Routing};

/// A fractional routing: per demand the share `x_p` routed on the plus side
/// (the complement `y_p = 1 - x_p` goes the other way) plus the bound `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalSolution {
    xs: Vec<Rational>,
    k: Rational,
}

impl FractionalSolution {
    pub fn new(xs: Vec<Rational>, k: Rational) -> Result<FractionalSolution> {
        for (p, x) in xs.iter().enumerate() {
            if x.is_negative() || *x > Rational::one() {
                return Err(Error::Model(format!(
                    "fractional share of demand {p} must lie in [0,1], got {x}"
                )));
            }
        }
        Ok(FractionalSolution { xs, k })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn x(&self, p: usize) -> &Rational {
        &self.xs[p]
    }

    pub fn y(&self, p: usize) -> Rational {
        Rational::one() - &self.xs[p]
    }

    pub fn xs(&self) -> &[Rational] {
        &self.xs
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    pub fn is_integral(&self, p: usize) -> bool {
        self.xs[p].is_zero() || self.xs[p].is_one()
    }

    /// Demands with strictly fractional shares, ascending.
    pub fn fractional_support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&p| !self.is_integral(p)).collect()
    }
}

/// A set of pairwise arc-sharing routes, at most one per demand; one row of
/// the relaxation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueConstraint {
    members: Vec<(usize, RouteSide)>,
}

impl CliqueConstraint {
    pub fn new(
        instance: &Instance,
        mut members: Vec<(usize, RouteSide)>,
    ) -> Result<CliqueConstraint> {
        members.sort_unstable();
        members.dedup();
        let arcs: Vec<ArcSet> = members
            .iter()
            .map(|&(p, side)| instance.route_arcs(p, side))
            .collect::<Result<_>>()?;
        for a in 0..arcs.len() {
            for b in a + 1..arcs.len() {
                if !arcs[a].intersects(&arcs[b]) {
                    return Err(Error::Model(format!(
                        "clique constraint members {:?} and {:?} share no arc",
                        members[a], members[b]
                    )));
                }
            }
        }
        Ok(CliqueConstraint { members })
    }

    pub fn members(&self) -> &[(usize, RouteSide)] {
        &self.members
    }

    /// Row value at a fractional point: plus members contribute `w_p x_p`,
    /// minus members `w_p y_p`.
    pub fn value_at(&self, instance: &Instance, point: &FractionalSolution) -> Rational {
        let mut value = Rational::zero();
        for &(p, side) in &self.members {
            let w = instance.demands()[p].weight();
            match side {
                RouteSide::Plus => value += w * point.x(p),
                RouteSide::Minus => value += w * point.y(p),
            }
        }
        value
    }

    fn key(&self) -> Vec<(usize, bool)> {
        self.members
            .iter()
            .map(|&(p, side)| (p, side == RouteSide::Minus))
            .collect()
    }
}

/// Most violated clique at the point, strengthened to a maximal clique, or
/// `None` when the point satisfies every clique row of the route graph.
pub fn separate(
    instance: &Instance,
    point: &FractionalSolution,
) -> Result<Option<CliqueConstraint>> {
    check_point_len(instance, point)?;
    let mut members = Vec::with_capacity(2 * instance.demand_count());
    for p in 0..instance.demand_count() {
        let w = instance.demands()[p].weight();
        for side in [RouteSide::Plus, RouteSide::Minus] {
            let share = match side {
                RouteSide::Plus => point.x(p).clone(),
                RouteSide::Minus => point.y(p),
            };
            members.push(FamilyMember {
                arcs: instance.route_arcs(p, side)?,
                weight: w * share,
                label: instance.route_label(p, side)?,
            });
        }
    }
    let family = WeightedArcFamily::new(instance.n(), members)?;
    let witness = max_weight_clique(&family);
    if witness.weight <= *point.k() {
        return Ok(None);
    }
    let signed: Vec<(usize, RouteSide)> = witness
        .members
        .iter()
        .map(|&idx| {
            let side = if idx % 2 == 0 {
                RouteSide::Plus
            } else {
                RouteSide::Minus
            };
            (idx / 2, side)
        })
        .collect();
    let strengthened = strengthen_to_maximal(instance, signed)?;
    Ok(Some(CliqueConstraint::new(instance, strengthened)?))
}

/// Greedily extends a clique of signed routes to a maximal one, scanning
/// routes in canonical order. Extending only tightens the row: added routes
/// contribute nonnegative shares at every feasible point.
fn strengthen_to_maximal(
    instance: &Instance,
    mut members: Vec<(usize, RouteSide)>,
) -> Result<Vec<(usize, RouteSide)>> {
    let mut arcs: Vec<ArcSet> = members
        .iter()
        .map(|&(p, side)| instance.route_arcs(p, side))
        .collect::<Result<_>>()?;
    for q in 0..instance.demand_count() {
        if members.iter().any(|&(p, _)| p == q) {
            continue;
        }
        for side in [RouteSide::Plus, RouteSide::Minus] {
            let candidate = instance.route_arcs(q, side)?;
            if arcs.iter().all(|a| a.intersects(&candidate)) {
                members.push((q, side));
                arcs.push(candidate);
                break;
            }
        }
    }
    Ok(members)
}

fn check_point_len(instance: &Instance, point: &FractionalSolution) -> Result<()> {
    if point.len() != instance.demand_count() {
        return Err(Error::Model(format!(
            "point has {} shares but the instance has {} demands",
            point.len(),
            instance.demand_count()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct LpConfig {
    /// Ceiling on generated cuts; exceeding it signals a bug, not a hard
    /// instance.
    pub cut_limit: usize,
    /// Record generated cuts as text for debugging.
    pub dump_cuts: bool,
}

impl Default for LpConfig {
    fn default() -> LpConfig {
        LpConfig {
            cut_limit: 10_000,
            dump_cuts: false,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RelaxationStats {
    pub cuts_added: usize,
    pub lp_solves: usize,
    pub pivots: u64,
    pub cut_dump: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Relaxation {
    /// The true optimum of the relaxation.
    pub opt: Rational,
    pub point: FractionalSolution,
    pub stats: RelaxationStats,
}

pub fn solve_relaxation(instance: &Instance) -> Result<Relaxation> {
    solve_relaxation_with(instance, &LpConfig::default())
}

/// Cutting-plane loop: start from the per-arc clique rows, resolve the LP,
/// add the most violated clique until none exists. Terminates because cuts
/// never repeat and there are finitely many cliques.
pub fn solve_relaxation_with(instance: &Instance, config: &LpConfig) -> Result<Relaxation> {
    if instance.demand_count() == 0 {
        return Ok(Relaxation {
            opt: Rational::zero(),
            point: FractionalSolution::new(Vec::new(), Rational::zero())?,
            stats: RelaxationStats::default(),
        });
    }
    let mut seen: HashSet<Vec<(usize, bool)>> = HashSet::new();
    let mut constraints = Vec::new();
    for constraint in arc_clique_rows(instance)? {
        if seen.insert(constraint.key()) {
            constraints.push(constraint);
        }
    }
    let mut stats = RelaxationStats::default();
    loop {
        let outcome = simplex::solve_relaxation_lp(instance, &constraints)?;
        stats.lp_solves += 1;
        stats.pivots += outcome.pivots;
        let point = FractionalSolution::new(outcome.xs, outcome.k)?;
        let Some(cut) = separate(instance, &point)? else {
            return Ok(Relaxation {
                opt: point.k().clone(),
                point,
                stats,
            });
        };
        if stats.cuts_added >= config.cut_limit {
            return Err(Error::IterationLimit {
                cuts: stats.cuts_added,
            });
        }
        if !seen.insert(cut.key()) {
            return Err(Error::Internal(
                "separation returned an already generated cut".into(),
            ));
        }
        if config.dump_cuts {
            let members: Vec<String> = cut
                .members()
                .iter()
                .map(|&(p, side)| format!("({p},{side})"))
                .collect();
            stats
                .cut_dump
                .push(format!("cut {:04}: {}", stats.cuts_added, members.join(" ")));
        }
        constraints.push(cut);
        stats.cuts_added += 1;
    }
}

/// One clique row per unit arc: every demand contributes its route through
/// that arc. Distinct arcs can induce the same row; callers dedupe.
fn arc_clique_rows(instance: &Instance) -> Result<Vec<CliqueConstraint>> {
    let mut rows = Vec::with_capacity(instance.n() as usize);
    for arc in 1..=instance.n() {
        let mut members = Vec::with_capacity(instance.demand_count());
        for p in 0..instance.demand_count() {
            let side = if instance.route_arcs(p, RouteSide::Plus)?.contains(arc) {
                RouteSide::Plus
            } else {
                RouteSide::Minus
            };
            members.push((p, side));
        }
        rows.push(CliqueConstraint::new(instance, members)?);
    }
    Ok(rows)
}

/// Re-routes fractional parallel pairs until the fractional support is
/// pairwise crossing. Each transfer moves mass within one nested pair of
/// routes, makes at least one demand integral, and never increases the value
/// of any maximal clique of the route graph, so the bound `K` stays valid.
/// Fractional zero-weight demands are routed plus outright; they affect no
/// clique value.
pub fn normalize_parallel(
    instance: &Instance,
    point: &FractionalSolution,
) -> Result<FractionalSolution> {
    check_point_len(instance, point)?;
    let mut xs = point.xs().to_vec();
    for (x, demand) in xs.iter_mut().zip(instance.demands()) {
        if demand.weight().is_zero() && !x.is_zero() && !x.is_one() {
            *x = Rational::one();
        }
    }
    loop {
        let fractional: Vec<usize> = (0..xs.len())
            .filter(|&p| !xs[p].is_zero() && !xs[p].is_one())
            .collect();
        let mut pair = None;
        'outer: for (a, &p) in fractional.iter().enumerate() {
            for &q in &fractional[a + 1..] {
                if instance.parallel(p, q)? {
                    pair = Some((p, q));
                    break 'outer;
                }
            }
        }
        let Some((p, q)) = pair else {
            break;
        };
        transfer(instance, &mut xs, p, q)?;
    }
    let normalized = FractionalSolution::new(xs, point.k().clone())?;
    debug_assert!(support_pairwise_crossing(instance, &normalized).unwrap_or(false));
    Ok(normalized)
}

/// One re-routing step for a fractional parallel pair. The configuration
/// with `route(p,s)` inside `route(q,t)` and `route(q,-t)` inside
/// `route(p,-s)` always exists for parallel demands; mass moves toward the
/// inner route of `p` and off the outer route of `q` by the same amount,
/// which exhausts one of the two fractions.
fn transfer(instance: &Instance, xs: &mut [Rational], p: usize, q: usize) -> Result<()> {
    let sides = [RouteSide::Plus, RouteSide::Minus];
    let mut config = None;
    'outer: for s in sides {
        for t in sides {
            let inner_p = instance.route_arcs(p, s)?;
            let outer_q = instance.route_arcs(q, t)?;
            let inner_q = instance.route_arcs(q, t.opposite())?;
            let outer_p = instance.route_arcs(p, s.opposite())?;
            if inner_p.is_subset_of(&outer_q) && inner_q.is_subset_of(&outer_p) {
                config = Some((s, t));
                break 'outer;
            }
        }
    }
    let Some((s, t)) = config else {
        return Err(Error::Internal(format!(
            "parallel demands {p} and {q} admit no nested route configuration"
        )));
    };

    let w_p = instance.demands()[p].weight();
    let w_q = instance.demands()[q].weight();
    let share = |x: &Rational, side: RouteSide| -> Rational {
        match side {
            RouteSide::Plus => x.clone(),
            RouteSide::Minus => Rational::one() - x,
        }
    };
    let movable_p = w_p * share(&xs[p], s.opposite());
    let movable_q = w_q * share(&xs[q], t);
    let delta = movable_p.min(movable_q);
    debug_assert!(delta.is_positive());

    match s {
        RouteSide::Plus => xs[p] += &delta / w_p,
        RouteSide::Minus => xs[p] -= &delta / w_p,
    }
    match t {
        RouteSide::Plus => xs[q] -= &delta / w_q,
        RouteSide::Minus => xs[q] += &delta / w_q,
    }
    debug_assert!(!xs[p].is_negative() && xs[p] <= Rational::one());
    debug_assert!(!xs[q].is_negative() && xs[q] <= Rational::one());
    debug_assert!(
        xs[p].is_zero() || xs[p].is_one() || xs[q].is_zero() || xs[q].is_one(),
        "each transfer must make one side integral"
    );
    Ok(())
}

fn support_pairwise_crossing(instance: &Instance, point: &FractionalSolution) -> Result<bool> {
    let support = point.fractional_support();
    for (a, &p) in support.iter().enumerate() {
        for &q in &support[a + 1..] {
            if !instance.crosses(p, q)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Threshold rounding: fractional demands go plus when `y* <= x*` (so an
/// exact half goes plus), integral demands keep their side.
pub fn round_crossing(instance: &Instance, point: &FractionalSolution) -> Result<Routing> {
    check_point_len(instance, point)?;
    debug_assert!(support_pairwise_crossing(instance, point).unwrap_or(false));
    let half = Rational::new(1.into(), 2.into());
    let sides = (0..point.len())
        .map(|p| {
            if *point.x(p) >= half {
                RouteSide::Plus
            } else {
                RouteSide::Minus
            }
        })
        .collect();
    Ok(Routing::new(sides))
}

/// Everything the pipeline certifies about one run.
#[derive(Debug, Clone)]
pub struct LpResult {
    /// Optimum of the relaxation; a lower bound on the integral optimum.
    pub opt_f: Rational,
    /// The relaxation's optimal point.
    pub relaxed: FractionalSolution,
    /// The point after parallel re-routing.
    pub normalized: FractionalSolution,
    /// Fractional support of the normalized point; pairwise crossing, so a
    /// clique of this weight exists under every routing.
    pub support: Vec<usize>,
    pub support_weight: Rational,
    pub routing: Routing,
    pub value: Rational,
    pub witness: CliqueWitness,
    /// `opt_f + support_weight / 2`; the rounded value never exceeds it.
    pub bound: Rational,
    pub stats: RelaxationStats,
}

pub fn solve_lp32(instance: &Instance) -> Result<LpResult> {
    solve_lp32_with(instance, &LpConfig::default())
}

/// Full pipeline: relaxation, parallel re-routing, threshold rounding, and
/// the exact certificate `value <= opt_f + w(support) / 2`.
pub fn solve_lp32_with(instance: &Instance, config: &LpConfig) -> Result<LpResult> {
    let relaxation = solve_relaxation_with(instance, config)?;
    let normalized = normalize_parallel(instance, &relaxation.point)?;
    let support = normalized.fractional_support();
    let mut support_weight = Rational::zero();
    for &p in &support {
        support_weight += instance.demands()[p].weight();
    }
    let routing = round_crossing(instance, &normalized)?;
    let evaluator = RoutingEvaluator::new(instance)?;
    let (value, witness) = evaluator.evaluate(&routing)?;
    let bound = &relaxation.opt + &support_weight / Rational::from_integer(2.into());
    if value > bound {
        return Err(Error::Internal(format!(
            "rounded value {value} exceeds the certified bound {bound}"
        )));
    }
    Ok(LpResult {
        opt_f: relaxation.opt,
        relaxed: relaxation.point,
        normalized,
        support,
        support_weight,
        routing,
        value,
        witness,
        bound,
        stats: relaxation.stats,
    })
}

const FULL_ENUMERATION_LIMIT: usize = 10;

/// Every nonempty clique of the route graph, by backtracking over routes.
/// Exponential; guarded to small instances. The independent reference for
/// the cutting-plane loop.
pub fn enumerate_cliques(instance: &Instance) -> Result<Vec<CliqueConstraint>> {
    let m = instance.demand_count();
    if m > FULL_ENUMERATION_LIMIT {
        return Err(Error::SizeLimit {
            what: "full clique enumeration",
            limit: FULL_ENUMERATION_LIMIT,
            actual: m,
        });
    }
    let mut routes = Vec::with_capacity(2 * m);
    for p in 0..m {
        for side in [RouteSide::Plus, RouteSide::Minus] {
            routes.push(((p, side), instance.route_arcs(p, side)?));
        }
    }

    fn recurse(
        routes: &[((usize, RouteSide), ArcSet)],
        start: usize,
        current: &mut Vec<usize>,
        found: &mut Vec<Vec<(usize, RouteSide)>>,
    ) {
        if !current.is_empty() {
            found.push(current.iter().map(|&i| routes[i].0).collect());
        }
        for next in start..routes.len() {
            if current
                .iter()
                .all(|&i| routes[i].1.intersects(&routes[next].1))
            {
                current.push(next);
                recurse(routes, next + 1, current, found);
                current.pop();
            }
        }
    }

    let mut raw = Vec::new();
    recurse(&routes, 0, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|members| CliqueConstraint::new(instance, members))
        .collect()
}

/// Solves the relaxation against the exhaustively enumerated clique set in
/// one shot. Cross-check for [`solve_relaxation`].
pub fn solve_full_lp(instance: &Instance) -> Result<(Rational, FractionalSolution)> {
    if instance.demand_count() == 0 {
        return Ok((
            Rational::zero(),
            FractionalSolution::new(Vec::new(), Rational::zero())?,
        ));
    }
    let constraints = enumerate_cliques(instance)?;
    let outcome = simplex::solve_relaxation_lp(instance, &constraints)?;
    let point = FractionalSolution::new(outcome.xs, outcome.k)?;
    Ok((point.k().clone(), point))
}
