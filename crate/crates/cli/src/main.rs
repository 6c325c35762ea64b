fn main() {
    std::process::exit(cliquepack_cli::run_cli());
}
