fn main() {
    std::process::exit(tm_lab::cli::run(std::env::args_os()));
}
