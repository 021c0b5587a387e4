fn main() {
    std::process::exit(pecb::cli::main_with_std());
}
