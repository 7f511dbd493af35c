//! Repeated averages, basis-estimate witnesses and a flattened vector.
use std::time::Instant;

use tsirelson::budget::Budget;
use tsirelson::norms::SpaceSpec;
use tsirelson::rational::{q, show};
use tsirelson::specialvec::{est_basis_vector, flatten};

fn main() -> tsirelson::Result<()> {
    let z = SpaceSpec::mixed_decay(1, 4);
    for (n, start) in [(1, 4), (1, 8), (2, 8), (2, 16)] {
        let t = Instant::now();
        let e = est_basis_vector(&z, n, start)?;
        println!(
            "n={n} start={start} support={} delta={} norm{}{} bound={} holds={} ({:.2?})",
            e.x.len(),
            show(&e.delta),
            if e.exact { "=" } else { "<=" },
            show(&e.norm),
            show(&e.bound),
            e.holds,
            t.elapsed()
        );
    }

    let t = SpaceSpec::tsirelson(q(1, 2));
    let f = flatten(&t, 1, &q(1, 2), &Budget::default())?;
    println!(
        "flattened: {} blocks on [{}..{}], restriction/norm = {}",
        f.blocks,
        f.w.min_index().unwrap(),
        f.w.max_index().unwrap(),
        show(&f.ratio)
    );
    Ok(())
}
