use std::io::Write;

fn main() {
    let (code, out) = gwloc::cli::run(std::env::args_os());
    // A closed pipe (e.g. `| head`) is not an error.
    let _ = writeln!(std::io::stdout().lock(), "{out}");
    std::process::exit(code);
}
