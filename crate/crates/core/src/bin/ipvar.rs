fn main() {
    let code = ipvar::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
