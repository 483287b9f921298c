fn main() {
    std::process::exit(ufourier::cli::run(std::env::args_os()));
}
