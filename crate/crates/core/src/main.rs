fn main() {
    std::process::exit(glucomem::cli::run_command(std::env::args_os()));
}
