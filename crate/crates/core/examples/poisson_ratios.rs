//! `s_{n-k}/s_n` against the Poisson-like term `beta^k / k!`.

use subtree_poly_lab::{
    complete_graph_counts, counts_for, generate, poisson_deviation, Family, Result,
};

pub fn run() -> Result<()> {
    for n in [10, 15, 20, 25] {
        let rep = poisson_deviation(&complete_graph_counts(n)?, 3)?;
        let devs: Vec<String> = rep
            .rows
            .iter()
            .map(|r| format!("{:+.5}", r.deviation_f64))
            .collect();
        println!(
            "K_{n:<2} beta {:.6}  dev_0..3 [{}]",
            rep.beta.parse::<f64>().unwrap_or(0.0),
            devs.join(", ")
        );
    }

    let g = generate(&Family::Gnp(12, 0.7), 5)?;
    let rep = poisson_deviation(&counts_for(&g, 24)?, 4)?;
    for row in &rep.rows {
        println!(
            "gnp(12,0.7) k={} ratio {} dev {}",
            row.k,
            &row.ratio[..10],
            row.deviation_exact
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
