fn main() {
    std::process::exit(montiweb::cli::run_cli());
}
