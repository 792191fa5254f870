//! Dev probe: orbit-matrix counts for small (f2, f3) cells.

use std::time::Instant;
use symdes_core::design::DesignParams;
use symdes_core::feasibility::orbit_distributions;
use symdes_core::orbit::{generate_orbit_matrices, OrbitStructure};

fn main() {
    let params = DesignParams::new(70, 24, 8).unwrap();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cells: Vec<(usize, usize)> = if args.is_empty() {
        vec![(16, 13), (22, 7), (14, 16), (0, 16), (16, 16), (8, 10), (22, 4), (18, 7), (20, 4)]
    } else {
        args.iter()
            .map(|s| {
                let mut it = s.split(',');
                (it.next().unwrap().parse().unwrap(), it.next().unwrap().parse().unwrap())
            })
            .collect()
    };
    for (f2, f3) in cells {
        let t0 = Instant::now();
        let dists = orbit_distributions(&params, 2, 3, f2, f3);
        let mut total = 0usize;
        let mut per = Vec::new();
        for d in &dists {
            if !d.has_full_order() {
                per.push(format!("{d:?}: skipped (order < 6)"));
                continue;
            }
            let structure = OrbitStructure::from_distribution(d, 2, 3);
            let (oms, outcome) = generate_orbit_matrices(&params, &structure, None);
            assert!(outcome.complete);
            per.push(format!("({},{},{},{}): {} oms, {} nodes", d.d1, d.dp, d.dq, d.dpq, oms.len(), outcome.nodes));
            total += oms.len();
        }
        println!(
            "cell ({f2},{f3}): {} distributions, {} oms total in {:.2?}   [{}]",
            dists.len(), total, t0.elapsed(), per.join("; ")
        );
    }
}
