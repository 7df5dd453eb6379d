fn main() {
    std::process::exit(hpt_fluid::cli::run(std::env::args_os()));
}
