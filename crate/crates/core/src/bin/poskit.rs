fn main() {
    std::process::exit(poskit::cli::run(std::env::args_os()));
}
