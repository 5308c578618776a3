fn main() {
    std::process::exit(stemlm::cli::run(std::env::args_os()));
}
