fn main() {
    std::process::exit(secant_cli::run(std::env::args_os()));
}
