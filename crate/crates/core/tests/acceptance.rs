//! Acceptance suite. Prints one pass/fail line per criterion; numeric
//! arguments select criteria, `ACCEPTANCE_SEED` overrides the seed.

use std::process::ExitCode;
use std::time::Instant;
use trivector::acceptance::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let seed = std::env::var("ACCEPTANCE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let picked: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name) in CRITERIA {
        if !picked.is_empty() && !picked.contains(&id) {
            continue;
        }
        let start = Instant::now();
        match run_criterion(id, seed) {
            Ok(outcome) => {
                println!("{}  ({:.1}s) {}", outcome.line(), start.elapsed().as_secs_f64(), outcome.detail);
                failed += !outcome.passed as u32;
            }
            Err(e) => {
                println!("[FAIL] criterion {id:>2}: {name}  disagreement: {e}");
                failed += 1;
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
