fn main() {
    std::process::exit(ris_dpolsk::cli::main_with_args(std::env::args_os()));
}
