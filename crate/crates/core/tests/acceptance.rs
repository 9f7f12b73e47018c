//! One PASS/FAIL line per acceptance criterion, with the failing items below it.

use std::process::ExitCode;
use std::time::Instant;

use fdde::verify::{verify_criterion, CRITERIA, DEFAULT_TOLERANCE};

fn main() -> ExitCode {
    let mut red = 0;
    for (k, name) in CRITERIA {
        let start = Instant::now();
        let line = match verify_criterion(k, DEFAULT_TOLERANCE) {
            Ok(items) => {
                let passed = items.iter().filter(|i| i.pass).count();
                let ok = passed == items.len() && !items.is_empty();
                if !ok {
                    red += 1;
                }
                let mut s = format!(
                    "{} criterion {k:>2} {name}: {passed}/{} items ({:.1}s)",
                    if ok { "PASS" } else { "FAIL" },
                    items.len(),
                    start.elapsed().as_secs_f64()
                );
                for i in items.iter().filter(|i| !i.pass) {
                    s += &format!("\n       {} | expected {} | measured {}", i.name, i.expected, i.measured);
                }
                s
            }
            Err(e) => {
                red += 1;
                format!("FAIL criterion {k:>2} {name}: {e}")
            }
        };
        println!("{line}");
    }
    println!("{} of {} criteria pass", CRITERIA.len() - red, CRITERIA.len());
    if red == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
