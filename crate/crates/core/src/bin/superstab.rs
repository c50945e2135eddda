fn main() {
    std::process::exit(superstab::cli::run(std::env::args_os()));
}
