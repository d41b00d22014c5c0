fn main() {
    std::process::exit(holotorsion::cli::main_with_args(std::env::args_os()));
}
