fn main() {
    std::process::exit(bikmeans::cli::dispatch(std::env::args_os()));
}
