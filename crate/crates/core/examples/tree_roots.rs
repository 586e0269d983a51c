//! Roots of subtree polynomials of trees stay within `1 + 3^{1/3}`; the star
//! on four vertices attains it.

use subtree_poly_lab::poly::tree_root_bound;
use subtree_poly_lab::{generate, tree_root_check, Family, Result};

pub fn run() -> Result<()> {
    println!("bound {:.12}", tree_root_bound());
    let mut worst = (0.0, String::new());
    for seed in 0..50 {
        let family = Family::RandomTree(2 + seed as usize % 9);
        let r = tree_root_check(&generate(&family, seed)?)?;
        if r.max_modulus > worst.0 {
            worst = (r.max_modulus, format!("{family} seed {seed}"));
        }
    }
    println!("largest over 50 random trees: {:.9} ({})", worst.0, worst.1);
    for n in 2..=8 {
        let star = tree_root_check(&generate(&Family::Star(n), 0)?)?;
        let path = tree_root_check(&generate(&Family::Path(n), 0)?)?;
        println!(
            "n={n}: star {:.9}  path {:.9}",
            star.max_modulus, path.max_modulus
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
