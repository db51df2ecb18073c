fn main() {
    std::process::exit(grassmann::cli::main_with_args());
}
