fn main() {
    std::process::exit(zugang::cli::run(std::env::args_os()));
}
