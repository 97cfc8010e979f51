fn main() {
    std::process::exit(kummer_towers::cli::run(std::env::args_os()));
}
