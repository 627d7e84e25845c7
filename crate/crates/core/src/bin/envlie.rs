fn main() {
    std::process::exit(envlie::cli::run());
}
