fn main() {
    std::process::exit(fracdf::cli::run(std::env::args_os()));
}
