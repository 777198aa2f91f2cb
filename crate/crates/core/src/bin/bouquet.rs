fn main() {
    std::process::exit(bouquet::cli::run(std::env::args_os()));
}
