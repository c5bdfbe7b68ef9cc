fn main() {
    std::process::exit(unsharp::cli::run(std::env::args_os()));
}
