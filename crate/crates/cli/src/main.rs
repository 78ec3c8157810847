fn main() {
    std::process::exit(compacta_cli::run(std::env::args_os()));
}
