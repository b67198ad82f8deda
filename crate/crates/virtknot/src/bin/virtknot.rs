fn main() {
    std::process::exit(virtknot::cli::run(std::env::args().skip(1)));
}
