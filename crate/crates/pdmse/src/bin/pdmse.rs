fn main() {
    std::process::exit(pdmse::cli::run());
}
