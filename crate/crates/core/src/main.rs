fn main() {
    std::process::exit(gftv::cli::run(std::env::args()));
}
