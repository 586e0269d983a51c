//! Leaf counts of uniform spanning trees of K_n and the concentration of
//! the leaf weight around its mean.

use subtree_poly_lab::{generate, Family, Result, SampleRun};

pub fn run() -> Result<()> {
    let n = 15;
    let g = generate(&Family::Complete(n), 0)?;
    let run = SampleRun::collect(&g, 20_000, 3)?;

    let leaves = run.leaf_count_stats(0.05);
    let expected = n as f64 * (1.0 - 1.0 / n as f64).powi(n as i32 - 2);
    println!(
        "mean leaves {:.3} (exact {expected:.3}), sd {:.3}",
        leaves.mean,
        leaves.variance.sqrt()
    );
    for bin in &leaves.histogram {
        println!("  {:>2} leaves: {}", bin.leaves, bin.count);
    }

    let report = run.concentration(&[0.05, 0.1, 0.2, 0.3])?;
    for row in &report.tails {
        println!(
            "P(|w - mean| >= {}) = {:.5}   bound {:.3}   {:?}",
            row.b, row.empirical_tail, row.bound_degree, row.status_degree
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
