fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(stolarsky_fv::cli::main_with_args(args));
}
