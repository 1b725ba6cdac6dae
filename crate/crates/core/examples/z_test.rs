//! Replicable two-sample z-test on a few mean pairs.

use replicable_bandits::experiments::z_replicable_test;

fn main() -> replicable_bandits::Result<()> {
    for (m1, m2) in [(0.72, 0.42), (0.6, 0.5), (0.5, 0.5)] {
        let t = z_replicable_test(50, 50, m1, m2, 0.05)?;
        println!(
            "m1 {m1} m2 {m2}: z = {:.4}, threshold = {:.4}, {}",
            t.z,
            t.threshold,
            if t.reject { "reject" } else { "accept" }
        );
    }
    Ok(())
}
