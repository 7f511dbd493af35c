//! Block sequences, the lower-estimate search, and interleaved y sequences.
use tsirelson::budget::Budget;
use tsirelson::norms::SpaceSpec;
use tsirelson::operator::{build_y, operator_ratios, theta3_min_ratio, BlockSeq};
use tsirelson::rational::{q, show};
use tsirelson::specialvec::repeated_averages;

fn main() -> tsirelson::Result<()> {
    let t = SpaceSpec::tsirelson(q(1, 2));
    let z = SpaceSpec::mixed_decay(1, 4);

    let units = BlockSeq::unit_basis(1, 2..12);
    let r = theta3_min_ratio(&units, 2, &q(1, 2), &t, &Budget::new(0, 200))?;
    println!("unit basis: min ratio {} on {}", show(&r.ratio), r.set);

    let averages = BlockSeq::new(
        (0..4).map(|k| repeated_averages(1, 2 + 4 * k).restrict(|i| i < 2 + 4 * (k + 1))).collect(),
        &t,
    )?;
    let r = theta3_min_ratio(&averages, 1, &q(1, 2), &t, &Budget::new(0, 200))?;
    println!("short averages: min ratio {}", show(&r.ratio));

    let f1 = BlockSeq::unit_basis(1, [3, 5, 7, 9]);
    let f2 = BlockSeq::unit_basis(1, [4, 6, 8, 10]);
    let built = build_y(&[f1, f2], &[1, 2], &t)?;
    for (k, n) in built.raw_norms.iter().enumerate() {
        println!("y_{} raw norm {}", k + 1, show(n));
    }

    let x = BlockSeq::unit_basis(1, 2..2 + built.y.len());
    let probes = vec![tsirelson::C00Vector::ones(1, 1..=built.y.len())];
    for (nx, ny) in operator_ratios(&built.y, &x, &probes, &t, &z)? {
        println!("probe: x {} y {}", show(&nx), show(&ny));
    }
    Ok(())
}
