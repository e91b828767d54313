fn main() {
    std::process::exit(jacobi_chain::cli::main_with_args(std::env::args_os()));
}
