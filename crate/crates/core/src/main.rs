fn main() {
    std::process::exit(subtree_poly_lab::cli::main_with_args(std::env::args_os()));
}
