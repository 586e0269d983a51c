//! Reading a graph from the edge-list format and checking the coefficient
//! inequalities on it.

use subtree_poly_lab::report::rational_string;
use subtree_poly_lab::{check_ratio_inequalities, subtree_counts, Graph, Result};

const PETERSEN: &str = "10 15
0 1
0 4
0 5
1 2
1 6
2 3
2 7
3 4
3 8
4 9
5 7
5 8
6 8
6 9
7 9
";

pub fn run() -> Result<()> {
    let g = Graph::from_edge_list(PETERSEN)?;
    let profile = g.degree_profile();
    println!(
        "Petersen graph {}: alpha = {}",
        g.fingerprint(),
        rational_string(&profile.alpha)
    );
    let counts = subtree_counts(&g)?;
    println!("counts {:?}", counts.decimal_strings());
    let report = check_ratio_inequalities(&counts, &profile.alpha, profile.min_degree);
    println!(
        "{} ratio checks, {} partial-sum checks, all pass: {}",
        report.ratio_bound.len(),
        report.partial_sum_bound.len(),
        report.all_pass()
    );

    match Graph::from_edge_list("3 2\n0 1\n2 1\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
