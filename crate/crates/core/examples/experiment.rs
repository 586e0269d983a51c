//! Driving a sweep through the same entry point as the command line.

use subtree_poly_lab::cli::run_cli;

pub fn run() -> subtree_poly_lab::Result<()> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli(
        [
            "subtree-poly-lab",
            "experiment",
            "--graph",
            "complete(6)",
            "--n-list",
            "6,8,10,12",
            "--run",
            "roots",
            "--format",
            "csv",
        ],
        &mut out,
        &mut err,
    );
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    if code != 0 {
        return Err(subtree_poly_lab::Error::Assertion(format!(
            "exit status {code}"
        )));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> subtree_poly_lab::Result<()> {
    run()
}
