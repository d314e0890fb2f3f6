fn main() {
    std::process::exit(choi_gauge::cli::run(std::env::args_os()));
}
