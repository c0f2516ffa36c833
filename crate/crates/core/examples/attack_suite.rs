//! Run the six adversarial scenarios against the simulated protocol.

use gsfl::harness::attacks::run_attack_suite;

fn main() {
    let outcomes = run_attack_suite(2024);
    for o in &outcomes {
        println!(
            "{:<24} {}  {}",
            o.name,
            if o.passed { "pass" } else { "FAIL" },
            o.detail
        );
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed}/{} scenarios passed", outcomes.len());
    if passed != outcomes.len() {
        std::process::exit(1);
    }
}
