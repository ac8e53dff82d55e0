//! Combinatorial 2-approximation: route every demand along its shorter side,
//! then evaluate the resulting clique.

use crate::clique::RoutingEvaluator;
use crate::error::Result;
use crate::exact::SolveResult;
use crate::ring::{Instance, RouteSide, Routing};

/// PLUS when `|V(p+)| <= |V(p-)|`, i.e. `2(j - i) <= n`; ties go to PLUS.
pub fn shortest_side_routing(instance: &Instance) -> Routing {
    let sides = instance
        .demands()
        .iter()
        .map(|d| {
            let span = d.destination() - d.origin();
            if 2 * span <= instance.n() {
                RouteSide::Plus
            } else {
                RouteSide::Minus
            }
        })
        .collect();
    Routing::new(sides)
}

/// Evaluates the shortest-side routing; its value is at most twice the
/// optimum.
pub fn solve_approx2(instance: &Instance) -> Result<SolveResult> {
    let routing = shortest_side_routing(instance);
    let evaluator = RoutingEvaluator::new(instance)?;
    let (value, witness) = evaluator.evaluate(&routing)?;
    Ok(SolveResult {
        routing,
        value,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::solve_exact;
    use crate::rational::{rational_int, Rational};
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

    #[test]
    fn fig2_routes_all_plus_with_value_four() {
        let result = solve_approx2(&fig2()).unwrap();
        assert_eq!(result.routing, Routing::all_plus(6));
        // Arc (4,5) lies on [1,5], [3,6], [4,5], and [4,8].
        assert_eq!(result.value, rational_int(4));
    }

    #[test]
    fn tie_goes_to_plus() {
        let inst = instance(8, &[(1, 5, 1)]);
        assert_eq!(shortest_side_routing(&inst).side(0), RouteSide::Plus);
        let inst = instance(12, &[(1, 2, 1)]);
        assert_eq!(shortest_side_routing(&inst).side(0), RouteSide::Plus);
        let inst = instance(8, &[(1, 6, 1)]);
        assert_eq!(shortest_side_routing(&inst).side(0), RouteSide::Minus);
    }

    #[test]
    fn partition_example_stays_within_twice_its_optimum() {
        let inst = crate::instances::fixture(crate::instances::Fixture::Fig3).unwrap();
        let result = solve_approx2(&inst).unwrap();
        // All demands span at most half the ring, so everything routes plus
        // and the second pole stacks with all four chords.
        assert_eq!(result.routing, Routing::all_plus(6));
        assert_eq!(result.value, rational_int(20));
        assert!(result.value <= rational_int(2) * solve_exact(&inst).unwrap().value);
    }

    #[test]
    fn single_demand_value_is_its_weight() {
        let inst = instance(9, &[(3, 7, 4)]);
        assert_eq!(solve_approx2(&inst).unwrap().value, rational_int(4));
    }

    #[test]
    fn chosen_side_never_strictly_longer() {
        let mut rng = SplitMix64::new(0xA2);
        for _ in 0..100 {
            let n = rng.next_in(3, 20) as u32;
            let a = rng.next_in(1, n as u64 - 1) as u32;
            let b = rng.next_in(a as u64 + 1, n as u64) as u32;
            let inst = instance(n, &[(a, b, 1)]);
            let routing = shortest_side_routing(&inst);
            let chosen = inst.route_arcs(0, routing.side(0)).unwrap().len();
            let other = inst
                .route_arcs(0, routing.side(0).opposite())
                .unwrap()
                .len();
            assert!(chosen <= other);
        }
    }

    #[test]
    fn ratio_bound_on_random_instances() {
        let mut rng = SplitMix64::new(0x2A);
        for _ in 0..40 {
            let n = rng.next_in(4, 12) as u32;
            let count = rng.next_in(1, 8);
            let demands: Vec<(u32, u32, i64)> = (0..count)
                .map(|_| {
                    let a = rng.next_in(1, n as u64 - 1) as u32;
                    let b = rng.next_in(a as u64 + 1, n as u64) as u32;
                    (a, b, rng.next_in(1, 10) as i64)
                })
                .collect();
            let inst = instance(n, &demands);
            let approx = solve_approx2(&inst).unwrap();
            let exact = solve_exact(&inst).unwrap();
            assert!(
                approx.value <= Rational::from_integer(2.into()) * &exact.value,
                "ratio violated on {inst:?}"
            );
            assert!(exact.value <= approx.value);
        }
    }

    #[test]
    fn deterministic() {
        let inst = fig2();
        let a = solve_approx2(&inst).unwrap();
        let b = solve_approx2(&inst).unwrap();
        assert_eq!(a.routing, b.routing);
        assert_eq!(a.value, b.value);
        assert_eq!(a.witness, b.witness);
    }
}
