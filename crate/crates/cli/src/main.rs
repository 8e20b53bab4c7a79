fn main() {
    std::process::exit(hillbasis_cli::run(std::env::args_os()));
}
