fn main() {
    std::process::exit(spinframe::cli::run(std::env::args_os()));
}
