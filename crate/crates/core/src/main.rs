fn main() {
    std::process::exit(cwcode::cli::run(std::env::args_os()));
}
