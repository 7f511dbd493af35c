//! Domination constants between two mixed spaces.
use tsirelson::budget::{random_vector, Budget};
use tsirelson::domination::{delta_star_estimate, triangle_holds, tsistar_check};
use tsirelson::norms::{decay_pairs, SpaceSpec};
use tsirelson::rational::{q, show};
use tsirelson::schreier::FamilyDescriptor;

fn main() -> tsirelson::Result<()> {
    let z = SpaceSpec::new(1, decay_pairs(6), true)?;
    let t = SpaceSpec::tsirelson(q(1, 2));

    let d = delta_star_estimate(&z, &t, &FamilyDescriptor::Schreier(1), 1, 32, &Budget::new(0, 300))?;
    println!("Delta*_1 >= {} ({} candidates)", show(&d.lower), d.candidates);

    let mut rng = Budget::new(3, 0).rng();
    let sample: Vec<_> = (0..100).map(|_| random_vector(&mut rng, 1, 1, 10)).collect();
    let fams: Vec<_> = (1..=3).map(|n| (n, FamilyDescriptor::Schreier(n))).collect();
    let held = sample
        .iter()
        .filter(|a| triangle_holds(a, &z, &t, &fams).map(|r| r.holds).unwrap_or(false))
        .count();
    println!("truncated triangle holds on {held} of {}", sample.len());

    for n in 1..=3 {
        let r = tsistar_check(&decay_pairs(6), &q(1, 2), n, &sample)?;
        println!("n={n}: gap {} violations {}", show(&r.gap), r.violations.len());
    }
    Ok(())
}
