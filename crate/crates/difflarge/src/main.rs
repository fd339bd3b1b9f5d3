fn main() {
    let (code, out) = difflarge::cli::run_command(std::env::args());
    println!("{}", out);
    std::process::exit(code);
}
