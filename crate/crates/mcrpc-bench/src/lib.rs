//! Shared instance builders for the benchmark targets.

use mcrpc::clique::{FamilyMember, WeightedArcFamily};
use mcrpc::instances::gen_random;
use mcrpc::rational::rational_int;
use mcrpc::ring::ArcSet;
use mcrpc::rng::SplitMix64;
use mcrpc::Instance;

/// Eight unit-weight demands on twelve nodes.
pub fn uniform_instance(seed: u64) -> Instance {
    gen_random(12, 8, 1, true, seed).expect("benchmark instance")
}

/// Ten weighted demands on fourteen nodes.
pub fn weighted_instance(seed: u64) -> Instance {
    gen_random(14, 10, 10, false, seed).expect("benchmark instance")
}

/// A random weighted arc family on sixteen nodes.
pub fn arc_family(seed: u64, members: usize) -> WeightedArcFamily {
    let n = 16u32;
    let mut rng = SplitMix64::new(seed);
    let members = (0..members)
        .map(|idx| {
            let from = rng.next_in(1, n as u64) as u32;
            let len = rng.next_in(1, n as u64 - 1) as u32;
            let mut arcs = ArcSet::empty(n);
            let mut arc = from;
            for _ in 0..len {
                arcs.insert(arc);
                arc = arc % n + 1;
            }
            FamilyMember {
                arcs,
                weight: rational_int(rng.next_in(1, 9) as i64),
                label: format!("m{idx}"),
            }
        })
        .collect();
    WeightedArcFamily::new(n, members).expect("benchmark family")
}
