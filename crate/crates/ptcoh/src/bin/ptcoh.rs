fn main() {
    std::process::exit(ptcoh::cli::run());
}
