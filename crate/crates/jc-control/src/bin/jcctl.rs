fn main() {
    std::process::exit(jc_control::cli::run(std::env::args_os()));
}
