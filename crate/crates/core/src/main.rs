fn main() {
    std::process::exit(cohesion_net::cli::run(std::env::args_os()));
}
