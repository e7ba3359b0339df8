fn main() {
    std::process::exit(seqcred::experiments::cli_main(std::env::args_os()));
}
