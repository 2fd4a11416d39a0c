fn main() {
    std::process::exit(ffprime::cli::main());
}
