fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(chainrank::cli::dispatch(&argv));
}
