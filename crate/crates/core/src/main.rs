fn main() {
    std::process::exit(linmono::cli::main_with_args(std::env::args().collect()));
}
