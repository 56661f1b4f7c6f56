fn main() {
    std::process::exit(wirecat::cli::run(std::env::args_os()));
}
