//! Upper estimates of theta_n with witnesses, and the submultiplicativity audit.
use std::collections::BTreeMap;

use tsirelson::asymptotics::{definitional_lower, submult_audit, theta_n_estimate};
use tsirelson::budget::Budget;
use tsirelson::norms::SpaceSpec;
use tsirelson::rational::{q, show};

fn main() -> tsirelson::Result<()> {
    let t = SpaceSpec::tsirelson(q(1, 2));
    let budget = Budget::new(0, 200);
    let mut upper = BTreeMap::new();
    let mut lower = BTreeMap::new();
    for n in 1..=2 {
        let e = theta_n_estimate(&t, n, None, &budget)?;
        println!(
            "theta_{n}: upper {} from {} vectors, {} candidates",
            show(&e.upper),
            e.witness.len(),
            e.candidates
        );
        upper.insert(n, e.upper);
        if let Some(l) = definitional_lower(&t, n) {
            lower.insert(n, l);
        }
    }
    let flags = submult_audit(&upper, &lower);
    println!("audit flags: {}", flags.len());
    Ok(())
}
