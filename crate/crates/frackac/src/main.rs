fn main() {
    std::process::exit(frackac::cli::run(std::env::args_os()));
}
