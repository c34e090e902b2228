use std::io;

use instanton_kit::cli::{configure_threads, run};

fn main() {
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
    let code = run(std::env::args().collect(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
