//! Dev probe: prototype list sizes per row class.

use std::time::Instant;
use symdes_core::design::DesignParams;
use symdes_core::feasibility::orbit_distributions;
use symdes_core::orbit::{row_prototypes, OrbitStructure};

fn main() {
    let params = DesignParams::new(70, 24, 8).unwrap();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let f2: usize = args[0].parse().unwrap();
    let f3: usize = args[1].parse().unwrap();
    for d in orbit_distributions(&params, 2, 3, f2, f3) {
        if !d.has_full_order() { continue; }
        let structure = OrbitStructure::from_distribution(&d, 2, 3);
        println!("dist ({},{},{},{}), n={}", d.d1, d.dp, d.dq, d.dpq, structure.n());
        let sizes = structure.block_sizes().to_vec();
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..structure.n() {
            if !seen.insert(sizes[i]) { continue; }
            let t0 = Instant::now();
            let protos = row_prototypes(&params, &structure, i);
            println!("  class omega={}: {} prototypes ({:.2?})", sizes[i], protos.len(), t0.elapsed());
        }
    }
}
