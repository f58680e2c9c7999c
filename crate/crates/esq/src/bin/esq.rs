fn main() {
    std::process::exit(esq::cli::main_with_args(std::env::args_os()));
}
