fn main() {
    std::process::exit(qsd40::cli::run());
}
