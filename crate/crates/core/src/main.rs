fn main() {
    std::process::exit(pathcat::cli::run(std::env::args_os()));
}
