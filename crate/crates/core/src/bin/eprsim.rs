fn main() {
    std::process::exit(eprsim::cli::run_command(std::env::args_os()));
}
