fn main() {
    std::process::exit(ginv::cli::run(std::env::args_os()));
}
