//! Spanning trees: matrix-tree counts, exhaustive enumeration, and the
//! identity `sum_T w(T) = s_{n-1}` where `w(T)` sums `1/deg` over the
//! leaves of `T`.

use subtree_poly_lab::counting::enumerate_spanning_trees;
use subtree_poly_lab::report::rational_string;
use subtree_poly_lab::{
    generate, leaf_weight, spanning_tree_count, verify_weight_identity, Family, Result,
};

pub fn run() -> Result<()> {
    let g = generate(&Family::Complete(4), 0)?;
    println!("K_4 has {} spanning trees", spanning_tree_count(&g));
    for t in enumerate_spanning_trees(&g)?.take(4) {
        let w = leaf_weight(&t, &g)?;
        println!(
            "  {:?}  leaves {:?}  w = {}",
            t.edges(),
            t.leaves(),
            rational_string(&w.weight)
        );
    }

    for family in [
        Family::Complete(4),
        Family::Cycle(6),
        Family::CompleteMinusPerfectMatching(6),
    ] {
        let g = generate(&family, 0)?;
        let r = verify_weight_identity(&g)?;
        println!(
            "{family}: {} trees, sum w = {}, s_(n-1) = {}, equal: {}",
            r.spanning_trees,
            rational_string(&r.lhs),
            r.rhs,
            r.equal
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
