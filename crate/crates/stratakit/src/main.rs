fn main() {
    std::process::exit(stratakit::cli::run(std::env::args_os()));
}
