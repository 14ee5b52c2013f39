fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(mscope_cli::results_main(&argv));
}
