fn main() {
    std::process::exit(csturm::cli::run(std::env::args_os()));
}
