fn main() {
    std::process::exit(radial_limits::cli::run_cli(std::env::args_os()));
}
