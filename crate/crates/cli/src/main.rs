fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(hulthen_cli::run(&argv));
}
