fn main() {
    std::process::exit(circle_reeb::cli::run(std::env::args_os()));
}
