fn main() {
    std::process::exit(tasep_shocks::cli::run(std::env::args_os()));
}
