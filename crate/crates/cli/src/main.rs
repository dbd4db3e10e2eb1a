fn main() {
    std::process::exit(orbitq_cli::run(std::env::args_os()));
}
