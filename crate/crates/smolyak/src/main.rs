fn main() {
    std::process::exit(smolyak::cli::main_with_args(std::env::args_os()));
}
