fn main() {
    std::process::exit(kdclub_cli::run_cli(std::env::args_os()));
}
