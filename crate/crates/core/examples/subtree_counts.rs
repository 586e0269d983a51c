//! Exact subtree counts three ways: connected-subset enumeration, the
//! closed form for complete graphs, and brute force over edge subsets.
//!
//! ```text
//! cargo run --example subtree_counts
//! ```

use subtree_poly_lab::{
    brute_force_subtree_count, build_polynomial, complete_graph_counts, generate, subtree_counts,
    Family, Result,
};

pub fn run() -> Result<()> {
    for family in [
        Family::Path(5),
        Family::Cycle(5),
        Family::Star(5),
        Family::Complete(5),
    ] {
        let g = generate(&family, 0)?;
        let counts = subtree_counts(&g)?;
        println!("{family:<12} {}", build_polynomial(&counts).to_text());
        for k in 1..=g.vertex_count() {
            assert_eq!(counts.get(k), brute_force_subtree_count(&g, k)?);
        }
    }

    // K_n has C(n, k) k^(k-2) subtrees on k vertices; no enumeration needed.
    let k30 = complete_graph_counts(30)?;
    println!("s_30(K_30) = {}", k30.spanning());

    let g = generate(&Family::Gnp(9, 0.5), 42)?;
    let counts = subtree_counts(&g)?;
    println!("gnp(9,0.5) seed 42, fingerprint {}:", counts.fingerprint());
    println!("{}", counts.to_json());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
