fn main() {
    std::process::exit(hnf::app::cli::cli_main());
}
