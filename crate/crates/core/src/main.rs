fn main() {
    std::process::exit(adslf::cli::run(std::env::args_os()));
}
