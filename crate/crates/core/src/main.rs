fn main() {
    env_logger::init();
    std::process::exit(pmckit::cli::run(std::env::args_os()));
}
