fn main() {
    std::process::exit(latin_plex::cli::run_from(std::env::args_os()));
}
