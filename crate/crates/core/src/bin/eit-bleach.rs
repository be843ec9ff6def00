fn main() {
    std::process::exit(eit_bleach::cli::run(std::env::args_os()));
}
