fn main() {
    std::process::exit(hochkit::cli::main_with(std::env::args()));
}
