fn main() {
    std::process::exit(repeaterlab::cli::run(std::env::args_os()));
}
