fn main() {
    std::process::exit(sudden_otto::cli::main());
}
