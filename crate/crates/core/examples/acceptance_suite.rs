//! Runs the acceptance criteria and prints a CSV table.
use tsirelson::suite;

fn main() {
    println!("criterion,name,status,detail");
    for o in suite::run_all() {
        println!("{},{},{},\"{}\"", o.id, o.name, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
}
