fn main() {
    std::process::exit(bcnf_scan::cli::main_with_args(std::env::args_os()));
}
