//! Approximate G-optimal design on the unit-circle features, and on a subset
//! of antipodal arms that spans a single direction.

use replicable_bandits::design::{approx_g_optimal, g_value, linear_phase_budget, phase_allocation};
use replicable_bandits::experiments::unit_circle;

fn main() -> replicable_bandits::Result<()> {
    let inst = unit_circle(20, 0.1, 0.5f64.sqrt())?;
    let x = &inst.linear_structure().expect("circle has features").features;
    for active in [(0..20).collect::<Vec<_>>(), vec![0, 10]] {
        let w = approx_g_optimal(x, &active)?;
        println!(
            "active {:?}: dim {}, g = {:.4} (limit {}), support {:?}",
            active,
            w.dim,
            g_value(&w, x, &active)?,
            2 * w.dim,
            w.support
        );
        let alloc = phase_allocation(&w, linear_phase_budget(1, 2.0, 0.5f64.sqrt(), w.dim));
        println!("  phase-1 pulls per active arm: {alloc:?}");
    }
    Ok(())
}
