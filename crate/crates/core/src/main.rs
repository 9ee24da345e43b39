fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(quiver_expanders::cli::run(&args));
}
