fn main() {
    std::process::exit(tunnelkit::cli::run());
}
