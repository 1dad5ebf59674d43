fn main() {
    std::process::exit(morita_lab::main_with_args(std::env::args_os()));
}
