fn main() {
    std::process::exit(ugatom::cli::run());
}
