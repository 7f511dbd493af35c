//! Builds the sigma-coded norming set on the preset and scans the ratio claim.
use tsirelson::budget::Budget;
use tsirelson::norms::norm_p;
use tsirelson::rational::{q, show};
use tsirelson::xd::{build_d, claim_scan, norm_d_bounds, norm_d_lower, DSpaceParams, DEFAULT_CAP};
use tsirelson::C00Vector;

fn main() -> tsirelson::Result<()> {
    let params = DSpaceParams::preset();
    let mut d = build_d(&params, 4, 2, DEFAULT_CAP)?;
    println!("D at support 4, depth 2: {} functionals", d.len());

    let x = C00Vector::from_coeffs(1, [(1, q(1, 1)), (2, q(1, 2)), (3, q(-1, 2)), (4, q(1, 1))]);
    let (lo, hi) = norm_d_bounds(&x, &mut d)?;
    println!("materialized bounds [{}, {}]", show(&lo), show(&hi));
    println!("direct lower {}", show(&norm_d_lower(&x, &params, 2)?));
    println!("Z norm {}", show(&norm_p(&x, &params.z_space())?));

    let report = claim_scan(&params, 1, 10, 3, &Budget::new(7, 5000))?;
    println!(
        "claim n=1: j={} i={:?} samples {} max ratio {} counterexamples {}",
        report.j_n,
        report.i_n,
        report.samples,
        show(&report.max_ratio),
        report.counterexamples.len()
    );
    Ok(())
}
