fn main() {
    let outcome = beliefkit::cli::run(std::env::args_os().skip(1));
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::process::exit(outcome.code);
}
