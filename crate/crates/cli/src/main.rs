fn main() {
    std::process::exit(gcirc_cli::main_with_args(std::env::args_os()));
}
