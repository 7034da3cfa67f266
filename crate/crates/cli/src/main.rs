use std::io::Write;

fn main() {
    let (code, out) = dtc_cli::run(std::env::args_os());
    // A closed pipe downstream is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{out}");
    std::process::exit(code);
}
