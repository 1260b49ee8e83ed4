fn main() {
    std::process::exit(flwc_core::cli::run(std::env::args_os()));
}
