fn main() {
    std::process::exit(multiway_cli::run_cli(std::env::args_os()));
}
