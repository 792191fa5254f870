//! Dev probe: node throughput and tree size with budgets.

use std::time::Instant;
use symdes_core::design::DesignParams;
use symdes_core::feasibility::orbit_distributions;
use symdes_core::orbit::{generate_orbit_matrices, OrbitStructure};

fn main() {
    let params = DesignParams::new(70, 24, 8).unwrap();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let f2: usize = args[0].parse().unwrap();
    let f3: usize = args[1].parse().unwrap();
    let budget: u64 = args[2].parse().unwrap();
    #[cfg(feature = "search-stats")]
    std::thread::spawn(|| {
        let t0 = Instant::now();
        loop {
            std::thread::sleep(std::time::Duration::from_secs(5));
            let (cc, cn, fs, rp) = symdes_core::orbit::stats::snapshot();
            eprintln!(
                "[{:6.1}s] canon_calls={cc} canon_nodes={cn} fill_steps={fs} rows_placed={rp}",
                t0.elapsed().as_secs_f64()
            );
        }
    });
    for d in orbit_distributions(&params, 2, 3, f2, f3) {
        if !d.has_full_order() { continue; }
        let structure = OrbitStructure::from_distribution(&d, 2, 3);
        let t0 = Instant::now();
        let (oms, outcome) = generate_orbit_matrices(&params, &structure, Some(budget));
        println!(
            "dist ({},{},{},{}): n={} -> {} oms, nodes={}, complete={}, {:.2?} ({:.0} nodes/s)",
            d.d1, d.dp, d.dq, d.dpq, structure.n(), oms.len(), outcome.nodes, outcome.complete,
            t0.elapsed(), outcome.nodes as f64 / t0.elapsed().as_secs_f64()
        );
    }
}
