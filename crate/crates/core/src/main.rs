fn main() {
    std::process::exit(clqr::cli::run(std::env::args_os()));
}
