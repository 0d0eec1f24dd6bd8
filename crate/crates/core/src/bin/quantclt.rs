fn main() {
    std::process::exit(quantclt::cli::main());
}
