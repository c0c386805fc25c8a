fn main() {
    std::process::exit(pauli_partners::cli::main_with_args(std::env::args_os()));
}
