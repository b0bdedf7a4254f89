fn main() {
    std::process::exit(hardy_copson::cli::main_with_args(std::env::args_os()));
}
