fn main() {
    std::process::exit(supersec::cli::run_cli(std::env::args_os()));
}
