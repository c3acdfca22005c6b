fn main() {
    std::process::exit(jordan_osserman::cli::run());
}
