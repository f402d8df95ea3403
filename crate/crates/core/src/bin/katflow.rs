fn main() {
    katflow::cli::init_logging();
    std::process::exit(katflow::cli::run(std::env::args_os()));
}
