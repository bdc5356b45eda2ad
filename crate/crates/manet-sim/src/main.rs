fn main() {
    std::process::exit(manet_sim::cli::run(std::env::args_os()));
}
