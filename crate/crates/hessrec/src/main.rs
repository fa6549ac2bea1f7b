fn main() {
    let code = hessrec::cli::run(std::env::args().collect());
    std::process::exit(code);
}
