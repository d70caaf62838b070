fn main() {
    std::process::exit(fwlcheck::cli::run());
}
