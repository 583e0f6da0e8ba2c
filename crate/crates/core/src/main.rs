fn main() {
    std::process::exit(aritygap::harness::cli::run(std::env::args_os()));
}
