fn main() {
    std::process::exit(qes_locus::cli::run_from(std::env::args_os()));
}
