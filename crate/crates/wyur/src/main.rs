fn main() {
    std::process::exit(wyur::cli::run());
}
