fn main() {
    std::process::exit(conigen_cli::run(std::env::args_os()));
}
