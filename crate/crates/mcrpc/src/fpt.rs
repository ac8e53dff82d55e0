//! Fixed-parameter solver for uniform weights.
//!
//! For an anchor demand `p`, every demand parallel to `p` with a distinct end
//! pair has a unique route lying inside one side of `p`. A routing is
//! critical for `p` when all those demands use that forced route; in a
//! collision-free routing the demand with the longest route is always
//! critical, and for uniform weights some optimal routing is collision-free.
//! Enumerating, for every anchor, the `2^|free|` side choices outside the
//! forced set therefore reaches an optimum in at most `|D| * 2^k` evaluations
//! with `k = max |free set|`.

use crate::clique::RoutingEvaluator;
use crate::error::{Error, Result};
use crate::exact::SolveResult;
use crate::rational::Rational;
use crate::ring::{Instance, RouteSide, Routing};

/// How one demand relates to the rest of the instance: the demands parallel
/// to it with distinct ends, their forced routes, and the remaining free set.
#[derive(Debug, Clone)]
pub struct ParallelProfile {
    pub anchor: usize,
    /// Demands parallel to the anchor with a different end pair, ascending.
    pub parallel: Vec<usize>,
    /// Forced route side per entry of `parallel`: the side of that demand
    /// whose route lies inside the anchor side containing its ends.
    pub forced_sides: Vec<RouteSide>,
    /// How many forced routes lie inside the anchor's plus side.
    pub plus_count: usize,
    /// How many lie inside the anchor's minus side.
    pub minus_count: usize,
    /// All demand indices outside `parallel` (the anchor itself, its
    /// multiples, and everything crossing it), ascending.
    pub free: Vec<usize>,
}

pub fn parallel_profile(instance: &Instance, anchor: usize) -> Result<ParallelProfile> {
    let demand = instance.demand(anchor)?;
    let (i, j) = demand.ends();
    let plus_arcs = instance.route_arcs(anchor, RouteSide::Plus)?;
    let minus_arcs = instance.route_arcs(anchor, RouteSide::Minus)?;

    let in_plus = |v: u32| i <= v && v <= j;
    let in_minus = |v: u32| v >= j || v <= i;

    let mut parallel = Vec::new();
    let mut forced_sides = Vec::new();
    let mut plus_count = 0;
    let mut minus_count = 0;
    let mut free = Vec::new();
    for q in 0..instance.demand_count() {
        if q == anchor
            || instance.demands()[q].same_ends(demand)
            || instance.crosses(anchor, q)?
        {
            free.push(q);
            continue;
        }
        let (a, b) = instance.demands()[q].ends();
        let inside_plus = in_plus(a) && in_plus(b);
        let inside_minus = in_minus(a) && in_minus(b);
        if inside_plus == inside_minus {
            return Err(Error::Internal(format!(
                "demand {q} must have its ends inside exactly one side of demand {anchor}"
            )));
        }
        let container = if inside_plus { &plus_arcs } else { &minus_arcs };
        let side = if instance.route_arcs(q, RouteSide::Plus)?.is_subset_of(container) {
            RouteSide::Plus
        } else if instance
            .route_arcs(q, RouteSide::Minus)?
            .is_subset_of(container)
        {
            RouteSide::Minus
        } else {
            return Err(Error::Internal(format!(
                "no route of demand {q} lies inside the containing side of demand {anchor}"
            )));
        };
        if inside_plus {
            plus_count += 1;
        } else {
            minus_count += 1;
        }
        parallel.push(q);
        forced_sides.push(side);
    }
    Ok(ParallelProfile {
        anchor,
        parallel,
        forced_sides,
        plus_count,
        minus_count,
        free,
    })
}

/// `k`: the largest free-set size over all anchors.
pub fn parameter_k(instance: &Instance) -> Result<usize> {
    if instance.demand_count() == 0 {
        return Err(Error::EmptyInstance);
    }
    let mut k = 0;
    for p in 0..instance.demand_count() {
        k = k.max(parallel_profile(instance, p)?.free.len());
    }
    Ok(k)
}

/// True when every demand parallel to the anchor (with distinct ends) uses
/// its forced route under the routing; vacuously true for an empty set.
pub fn is_critical(instance: &Instance, routing: &Routing, anchor: usize) -> Result<bool> {
    instance.check_routing(routing)?;
    let profile = parallel_profile(instance, anchor)?;
    Ok(profile
        .parallel
        .iter()
        .zip(&profile.forced_sides)
        .all(|(&q, &side)| routing.side(q) == side))
}

#[derive(Debug, Clone)]
pub struct FptResult {
    pub result: SolveResult,
    /// Routings evaluated; at most `|D| * 2^k`.
    pub evaluated: u64,
    pub k: usize,
}

const FREE_SET_LIMIT: usize = 25;

/// Exact optimum for uniform weights by enumerating, per anchor, all side
/// choices on its free set with the forced routes fixed elsewhere. Ties
/// resolve to the lexicographically smallest routing.
pub fn solve_fpt(instance: &Instance) -> Result<FptResult> {
    if !instance.weights_uniform() {
        return Err(Error::NonUniformWeights);
    }
    let m = instance.demand_count();
    if m == 0 {
        return Ok(FptResult {
            result: SolveResult {
                routing: Routing::all_plus(0),
                value: Rational::from_integer(0.into()),
                witness: crate::clique::CliqueWitness::empty(),
            },
            evaluated: 0,
            k: 0,
        });
    }
    let profiles: Vec<ParallelProfile> = (0..m)
        .map(|p| parallel_profile(instance, p))
        .collect::<Result<_>>()?;
    let k = profiles.iter().map(|p| p.free.len()).max().unwrap_or(0);
    if k > FREE_SET_LIMIT {
        return Err(Error::SizeLimit {
            what: "fixed-parameter free-set enumeration",
            limit: FREE_SET_LIMIT,
            actual: k,
        });
    }

    let evaluator = RoutingEvaluator::new(instance)?;
    let mut evaluated = 0u64;
    let mut best: Option<SolveResult> = None;
    let mut sides = vec![RouteSide::Plus; m];
    for profile in &profiles {
        for (&q, &side) in profile.parallel.iter().zip(&profile.forced_sides) {
            sides[q] = side;
        }
        let f = profile.free.len();
        for counter in 0u64..(1u64 << f) {
            for (bit, &q) in profile.free.iter().enumerate() {
                sides[q] = if counter >> (f - 1 - bit) & 1 == 1 {
                    RouteSide::Minus
                } else {
                    RouteSide::Plus
                };
            }
            let (value, witness) = evaluator.evaluate_sides(&sides);
            evaluated += 1;
            let better = match &best {
                None => true,
                Some(incumbent) => {
                    value < incumbent.value
                        || (value == incumbent.value
                            && sides.as_slice() < incumbent.routing.sides())
                }
            };
            if better {
                best = Some(SolveResult {
                    routing: Routing::new(sides.clone()),
                    value,
                    witness,
                });
            }
        }
    }
    Ok(FptResult {
        result: best.expect("at least one routing was evaluated"),
        evaluated,
        k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::shortest_side_routing;
    use crate::exact::solve_exact;
    use crate::instances::gen_anchored_parallel;
    use crate::rational::rational_int;
    use crate::ring::Demand;
    use crate::rng::SplitMix64;

    fn instance(n: u32, demands: &[(u32, u32, i64)]) -> Instance {
        let list = demands
            .iter()
            .map(|&(i, j, w)| Demand::new(i, j, rational_int(w)).unwrap())
            .collect();
        Instance::new(n, list).unwrap()
    }

    fn fig2() -> Instance {
        instance(
            8,
            &[
                (1, 5, 1),
                (2, 3, 1),
                (3, 6, 1),
                (4, 5, 1),
                (4, 8, 1),
                (6, 8, 1),
            ],
        )
    }

    fn random_uniform(rng: &mut SplitMix64, max_demands: u64) -> Instance {
        let n = rng.next_in(4, 12) as u32;
        let count = rng.next_in(1, max_demands);
        let demands: Vec<(u32, u32, i64)> = (0..count)
            .map(|_| {
                let a = rng.next_in(1, n as u64 - 1) as u32;
                let b = rng.next_in(a as u64 + 1, n as u64) as u32;
                (a, b, 1)
            })
            .collect();
        instance(n, &demands)
    }

    #[test]
    fn fig2_profile_of_first_demand() {
        let profile = parallel_profile(&fig2(), 0).unwrap();
        assert_eq!(profile.parallel, vec![1, 3, 5]);
        assert_eq!(profile.plus_count, 2);
        assert_eq!(profile.minus_count, 1);
        assert_eq!(profile.free, vec![0, 2, 4]);
        // (2,3) and (4,5) lie inside [1,5]; [6,8] lies inside [5,1].
        assert_eq!(
            profile.forced_sides,
            vec![RouteSide::Plus, RouteSide::Plus, RouteSide::Plus]
        );
    }

    #[test]
    fn fig2_parameter_is_three() {
        let inst = fig2();
        let free_sizes: Vec<usize> = (0..6)
            .map(|p| parallel_profile(&inst, p).unwrap().free.len())
            .collect();
        assert_eq!(free_sizes, vec![3, 1, 3, 1, 3, 1]);
        assert_eq!(parameter_k(&inst).unwrap(), 3);
    }

    #[test]
    fn parameter_extremes() {
        // All pairwise parallel with distinct ends: free set is the anchor.
        let nested = instance(10, &[(1, 8, 1), (2, 7, 1), (3, 6, 1)]);
        assert_eq!(parameter_k(&nested).unwrap(), 1);

        // Pairwise crossing: every free set is everything.
        let crossing = instance(6, &[(1, 4, 1), (2, 5, 1), (3, 6, 1)]);
        assert_eq!(parameter_k(&crossing).unwrap(), 3);

        let empty = Instance::new(5, vec![]).unwrap();
        assert!(matches!(parameter_k(&empty), Err(Error::EmptyInstance)));
    }

    #[test]
    fn multiples_sit_in_the_free_set() {
        let inst = instance(8, &[(1, 5, 1), (1, 5, 1), (2, 3, 1)]);
        let profile = parallel_profile(&inst, 0).unwrap();
        assert_eq!(profile.parallel, vec![2]);
        assert_eq!(profile.free, vec![0, 1]);
    }

    #[test]
    fn criticality_examples() {
        let inst = fig2();
        // All forced sides for anchor 0 are PLUS, so all-PLUS is critical.
        assert!(is_critical(&inst, &Routing::all_plus(6), 0).unwrap());
        // Flipping a forced demand breaks it.
        let mut routing = Routing::all_plus(6);
        routing.set_side(1, RouteSide::Minus);
        assert!(!is_critical(&inst, &routing, 0).unwrap());

        // Empty parallel set: vacuously critical under any routing.
        let crossing = instance(6, &[(1, 4, 1), (2, 5, 1), (3, 6, 1)]);
        for p in 0..3 {
            assert!(is_critical(&crossing, &Routing::all_plus(3), p).unwrap());
        }
    }

    #[test]
    fn longest_route_is_critical_in_collision_free_routings() {
        let mut rng = SplitMix64::new(0xF91);
        for _ in 0..50 {
            let inst = random_uniform(&mut rng, 8);
            // Shortest-side routings never cover the ring with two routes.
            let routing = shortest_side_routing(&inst);
            assert_eq!(inst.collision_count(&routing).unwrap(), 0);
            let lengths: Vec<u32> = (0..inst.demand_count())
                .map(|p| inst.route_arcs(p, routing.side(p)).unwrap().len())
                .collect();
            let longest = *lengths.iter().max().unwrap();
            for (p, &len) in lengths.iter().enumerate() {
                if len == longest {
                    assert!(
                        is_critical(&inst, &routing, p).unwrap(),
                        "demand {p} has the longest route but is not critical: {inst:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn matches_exact_on_uniform_instances() {
        let mut rng = SplitMix64::new(0xF92);
        for _ in 0..40 {
            let inst = random_uniform(&mut rng, 9);
            let fpt = solve_fpt(&inst).unwrap();
            let exact = solve_exact(&inst).unwrap();
            assert_eq!(fpt.result.value, exact.value, "instance {inst:?}");
            assert!(fpt.evaluated <= inst.demand_count() as u64 * (1 << fpt.k));
            let winner_critical = (0..inst.demand_count())
                .any(|p| is_critical(&inst, &fpt.result.routing, p).unwrap());
            assert!(winner_critical);
        }
    }

    #[test]
    fn fig2_matches_the_enumeration_solver() {
        let inst = fig2();
        let fpt = solve_fpt(&inst).unwrap();
        assert_eq!(fpt.result.value, rational_int(3));
        assert_eq!(fpt.result.value, solve_exact(&inst).unwrap().value);
        assert_eq!(fpt.k, 3);
        assert!(fpt.evaluated <= 6 * (1 << 3));
    }

    #[test]
    fn rejects_non_uniform_weights() {
        let inst = instance(8, &[(1, 5, 1), (2, 6, 2)]);
        assert!(matches!(solve_fpt(&inst), Err(Error::NonUniformWeights)));
    }

    #[test]
    fn single_demand() {
        let inst = instance(8, &[(2, 6, 3)]);
        let fpt = solve_fpt(&inst).unwrap();
        assert_eq!(fpt.result.value, rational_int(3));
        assert_eq!(fpt.k, 1);
        assert_eq!(fpt.evaluated, 2);
    }

    #[test]
    fn anchored_instances_route_the_anchor_minus() {
        for seed in 0..25 {
            let (inst, anchor) = gen_anchored_parallel(seed).unwrap();
            let profile = parallel_profile(&inst, anchor).unwrap();
            let mut sides = vec![RouteSide::Plus; inst.demand_count()];
            sides[anchor] = RouteSide::Minus;
            for (&q, &side) in profile.parallel.iter().zip(&profile.forced_sides) {
                sides[q] = side;
            }
            let routing = Routing::new(sides);
            assert_eq!(inst.collision_count(&routing).unwrap(), 0);
            let value = crate::exact::evaluate_routing(&inst, &routing)
                .unwrap()
                .value;
            let expected = rational_int(profile.plus_count.max(profile.minus_count + 1) as i64);
            assert_eq!(value, expected, "seed {seed}");
            let exact = solve_exact(&inst).unwrap();
            assert_eq!(value, exact.value, "the anchored routing is optimal");
            let fpt = solve_fpt(&inst).unwrap();
            assert_eq!(fpt.result.value, exact.value);
        }
    }
}
