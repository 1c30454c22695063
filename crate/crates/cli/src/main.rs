fn main() {
    std::process::exit(mirror_qbm_cli::run(std::env::args_os()));
}
