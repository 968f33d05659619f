use std::io::Write;

use clap::Parser;
use wham::cli::{render, run, Cli};

fn main() {
    let start = std::time::Instant::now();
    let cli = Cli::parse();
    let outcome = run(&cli);
    let text = render(&outcome);
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    lock.write_all(text.as_bytes()).expect("stdout is writable");
    lock.flush().expect("stdout flushes");
    eprintln!("elapsed_ms: {}", start.elapsed().as_millis());
    std::process::exit(outcome.exit_code);
}
