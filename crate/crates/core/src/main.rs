use std::io::Write;

fn main() {
    hallforge::par::init_from_env();
    let out = hallforge::cli::run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
