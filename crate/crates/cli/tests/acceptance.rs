use std::process::ExitCode;
use std::time::Instant;

use tempex::verify::{criteria, run_criterion};

fn main() -> ExitCode {
    let mut failed = 0;
    for id in criteria("all").expect("the full suite exists") {
        let clock = Instant::now();
        let line = match run_criterion(id, false) {
            Ok(v) => {
                if !v.pass {
                    failed += 1;
                }
                v.line()
            }
            Err(e) => {
                failed += 1;
                format!("{id} FAIL error: {e}")
            }
        };
        println!("{line} [{:.1}s]", clock.elapsed().as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
