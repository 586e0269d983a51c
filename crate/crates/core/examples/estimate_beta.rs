//! Monte Carlo estimate of `beta(G) = s_{n-1}/s_n` as the mean leaf weight
//! of uniform spanning trees drawn with Wilson's algorithm.

use subtree_poly_lab::report::rational_decimal;
use subtree_poly_lab::{counts_for, estimate_beta, exact_beta, generate, Family, Result};

pub fn run() -> Result<()> {
    let samples = 20_000;
    for family in [
        Family::Complete(12),
        Family::Gnp(14, 0.6),
        Family::CompleteMinusPerfectMatching(12),
    ] {
        let g = generate(&family, 1)?;
        if !g.is_connected() {
            continue;
        }
        let est = estimate_beta(&g, samples, 7)?;
        let exact = exact_beta(&counts_for(&g, 24)?)?;
        println!(
            "{family:<36} estimate {:.5} +- {:.5}   exact {}",
            est.estimate,
            est.standard_error,
            rational_decimal(&exact, 5)
        );
        assert_eq!(est.bound_violations, 0);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
