//! Exact subtree counts, uniform spanning trees and the roots of the subtree
//! polynomial `S(G; x) = sum_k s_k(G) x^k`.
//!
//! ```
//! use subtree_poly_lab::{generate, subtree_counts, Family};
//!
//! let g = generate(&Family::Complete(4), 0).unwrap();
//! let counts = subtree_counts(&g).unwrap();
//! assert_eq!(counts.decimal_strings(), ["4", "6", "12", "16"]);
//! ```

pub mod cli;
pub mod counting;
pub mod error;
pub mod graph;
pub mod poly;
pub mod report;
pub mod spanning;
pub mod stats;

pub use counting::{
    brute_force_subtree_count, check_ratio_inequalities, complete_graph_counts, counts_for,
    enumerate_connected_subsets, enumerate_spanning_trees, spanning_tree_count, subtree_counts,
    subtree_counts_with_cap, SubtreeCountVector,
};
pub use error::{Error, Result};
pub use graph::{generate, generate_connected, DegreeProfile, Family, Graph};
pub use poly::{
    build_polynomial, find_roots, poisson_deviation, root_bound, rouche_margin, tree_root_check,
    RootAnalysis, SubtreePolynomial,
};
pub use spanning::{
    concentration_profile, estimate_beta, exact_beta, leaf_weight, verify_weight_identity,
    wilson_sample, SampleRun, SpanningTree,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
