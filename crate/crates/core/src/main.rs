fn main() {
    std::process::exit(beamfocus::cli::main_with_args(std::env::args_os()));
}
