//! Acceptance checks: one line per criterion, non-zero exit if any fails.

use obstruct::cli::demo;

fn main() {
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(4);
    let outcomes = demo::run_all(&[], jobs);
    for o in &outcomes {
        println!("{}", demo::format_line(o));
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed}/{} criteria passed", outcomes.len());
    if passed != outcomes.len() {
        std::process::exit(1);
    }
}
