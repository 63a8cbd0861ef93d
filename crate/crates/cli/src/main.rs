fn main() {
    std::process::exit(dunkl_cli::run(std::env::args_os()));
}
