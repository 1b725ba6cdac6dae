fn main() {
    let code = replicable_bandits::cli::main_with_args(std::env::args_os());
    std::process::exit(code);
}
