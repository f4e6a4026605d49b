fn main() {
    std::process::exit(colorclue::cli::run(std::env::args_os()));
}
