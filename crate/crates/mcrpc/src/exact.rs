//! Ground-truth optimum by exhaustive routing enumeration, plus the variant
//! restricted to collision-free routings.

use crate::clique::{CliqueWitness, RoutingEvaluator};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ring::{Instance, RouteSide, Routing};

/// A routing with its clique value and an optimal clique of that routing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub routing: Routing,
    pub value: Rational,
    pub witness: CliqueWitness,
}

pub(crate) const ENUMERATION_LIMIT: usize = 25;

/// Clique value and witness of one given routing.
pub fn evaluate_routing(instance: &Instance, routing: &Routing) -> Result<SolveResult> {
    let evaluator = RoutingEvaluator::new(instance)?;
    let (value, witness) = evaluator.evaluate(routing)?;
    Ok(SolveResult {
        routing: routing.clone(),
        value,
        witness,
    })
}

/// Minimum clique value over all `2^|D|` routings. Ties resolve to the
/// lexicographically smallest side vector (PLUS before MINUS, demand 0 first).
pub fn solve_exact(instance: &Instance) -> Result<SolveResult> {
    solve_enumerated(instance, false)
}

/// Minimum over collision-free routings only. Always feasible: the all-PLUS
/// routing has no collisions because no PLUS route contains the wrap arc.
pub fn solve_exact_collision_free(instance: &Instance) -> Result<SolveResult> {
    solve_enumerated(instance, true)
}

fn solve_enumerated(instance: &Instance, collision_free: bool) -> Result<SolveResult> {
    let m = instance.demand_count();
    if m > ENUMERATION_LIMIT {
        return Err(Error::SizeLimit {
            what: "exhaustive routing enumeration",
            limit: ENUMERATION_LIMIT,
            actual: m,
        });
    }
    let evaluator = RoutingEvaluator::new(instance)?;
    let collisions = if collision_free {
        collision_table(instance)?
    } else {
        Vec::new()
    };

    let mut best: Option<SolveResult> = None;
    let mut sides = vec![RouteSide::Plus; m];
    for counter in 0u64..(1u64 << m) {
        // Demand 0 on the most significant bit makes counter order equal to
        // lexicographic order on side vectors.
        for (d, side) in sides.iter_mut().enumerate() {
            *side = if counter >> (m - 1 - d) & 1 == 1 {
                RouteSide::Minus
            } else {
                RouteSide::Plus
            };
        }
        if collision_free && has_collision(&collisions, &sides) {
            continue;
        }
        let (value, witness) = evaluator.evaluate_sides(&sides);
        let better = match &best {
            None => true,
            Some(incumbent) => value < incumbent.value,
        };
        if better {
            best = Some(SolveResult {
                routing: Routing::new(sides.clone()),
                value,
                witness,
            });
        }
    }
    best.ok_or_else(|| Error::Internal("routing enumeration produced no candidate".into()))
}

/// Parallel pairs with the side combinations under which they collide.
/// Combination index is `2 * side_p + side_q` with PLUS = 0.
fn collision_table(instance: &Instance) -> Result<Vec<(usize, usize, [bool; 4])>> {
    let m = instance.demand_count();
    let mut table = Vec::new();
    for p in 0..m {
        for q in p + 1..m {
            if instance.crosses(p, q)? {
                continue;
            }
            let mut combos = [false; 4];
            let mut any = false;
            for (idx, (sp, sq)) in side_combos().into_iter().enumerate() {
                if instance.collides(p, sp, q, sq)? {
                    combos[idx] = true;
                    any = true;
                }
            }
            if any {
                table.push((p, q, combos));
            }
        }
    }
    Ok(table)
}

fn side_combos() -> [(RouteSide, RouteSide); 4] {
    use RouteSide::{Minus, Plus};
    [(Plus, Plus), (Plus, Minus), (Minus, Plus), (Minus, Minus)]
}

fn has_collision(table: &[(usize, usize, [bool; 4])], sides: &[RouteSide]) -> bool {
    table.iter().any(|&(p, q, combos)| {
        let idx = 2 * usize::from(sides[p] == RouteSide::Minus)
            + usize::from(sides[q] == RouteSide::Minus);
        combos[idx]
    })
}
