fn main() {
    std::process::exit(gpw::cli::main_with_args(std::env::args_os()));
}
