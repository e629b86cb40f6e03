fn main() {
    std::process::exit(howe3::cli::main_with_args(std::env::args_os()));
}
