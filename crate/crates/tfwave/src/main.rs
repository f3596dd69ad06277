fn main() {
    std::process::exit(tfwave::cli::main_with(std::env::args_os()));
}
