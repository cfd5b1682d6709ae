fn main() {
    std::process::exit(pgt_cli::run(std::env::args_os()));
}
