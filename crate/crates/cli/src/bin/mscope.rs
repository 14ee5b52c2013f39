fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(mscope_cli::bench_main(&argv));
}
