fn main() {
    std::process::exit(burnside::cli::run(std::env::args_os()));
}
