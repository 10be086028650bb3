fn main() {
    std::process::exit(flatband::cli::main_with_args(std::env::args_os()));
}
