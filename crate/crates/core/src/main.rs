fn main() {
    std::process::exit(ratlattice::cli::main());
}
