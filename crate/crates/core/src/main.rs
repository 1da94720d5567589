fn main() {
    std::process::exit(pbd_core::cli::run(std::env::args_os()));
}
