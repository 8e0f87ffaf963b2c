fn main() {
    std::process::exit(colorpoincare_cli::run(std::env::args()));
}
