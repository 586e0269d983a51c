//! Certified roots of subtree polynomials.

use subtree_poly_lab::poly::{find_roots_with, RootOptions};
use subtree_poly_lab::{
    build_polynomial, complete_graph_counts, find_roots, generate, subtree_counts, Family, Result,
};

pub fn run() -> Result<()> {
    let p3 = build_polynomial(&subtree_counts(&generate(&Family::Path(3), 0)?)?);
    let analysis = find_roots(&p3)?;
    println!("{}:", p3.to_text());
    for (z, r) in analysis.roots.iter().zip(&analysis.residuals) {
        let sign = if z[1].starts_with('-') { "" } else { "+" };
        println!("  {}{sign}{}i   residual {r:.1e}", z[0], z[1]);
    }

    // Roots of S(K_n; x) crowd toward the origin as n grows.
    for n in [6, 10, 20, 40] {
        let a = find_roots(&build_polynomial(&complete_graph_counts(n)?))?;
        println!(
            "K_{n:<2} max |x| = {:.6}  Vieta error {:.1e}  clusters {}",
            a.max_modulus,
            a.vieta_relative_error,
            a.clusters.len()
        );
    }

    let fast = RootOptions {
        precision_bits: 53,
        ..RootOptions::default()
    };
    let a = find_roots_with(&build_polynomial(&complete_graph_counts(20)?), &fast)?;
    println!("double precision only: max |x| = {:.6}", a.max_modulus);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
