fn main() {
    std::process::exit(optomech::cli::main_with_args(std::env::args().skip(1)));
}
