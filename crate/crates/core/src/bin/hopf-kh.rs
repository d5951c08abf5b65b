fn main() {
    std::process::exit(hopf_kh::cli::main());
}
