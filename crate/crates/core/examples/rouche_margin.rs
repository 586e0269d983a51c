//! Compares the reversed polynomial `F(y)` with `e^{beta y}` on the circle
//! `|y| = alpha log n / C`. A sampled margin below one is consistent with
//! `S(K_n; x)` having no roots of modulus above `C / (alpha log n)`.

use num_rational::BigRational;
use subtree_poly_lab::{complete_graph_counts, root_bound, rouche_margin, Result};

pub fn run() -> Result<()> {
    for n in [10, 15, 20, 25, 40] {
        let counts = complete_graph_counts(n)?;
        let alpha = BigRational::new((n as i64 - 1).into(), (n as i64).into());
        let r = rouche_margin(&counts, &alpha, 7.0, 256)?;
        println!(
            "K_{n:<2} radius {:.4}  {} {:.3e}  min |e^(beta y)| {:.4} >= {:.4}  root bound {:.3}",
            r.radius,
            r.label,
            r.sampled_supremum,
            r.min_exp_modulus,
            r.witness_bound,
            root_bound(&alpha, n, 7.0)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
