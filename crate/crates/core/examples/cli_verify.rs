//! The verification suite with a small number of trials.

use hnf::app::verify::run_suite;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let report = run_suite(seed, 10);
    print!("{report}");
    std::process::exit(if report.all_passed() { 0 } else { 1 });
}
