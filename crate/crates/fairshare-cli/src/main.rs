fn main() {
    std::process::exit(fairshare_cli::run());
}
