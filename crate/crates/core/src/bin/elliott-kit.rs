fn main() {
    let (code, text) = elliott_kit::cli::run(std::env::args_os());
    print!("{text}");
    std::process::exit(code);
}
