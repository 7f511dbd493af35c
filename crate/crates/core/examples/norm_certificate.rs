//! Exact norms with a checkable witness tree, compared against brute force.
use tsirelson::norms::{brute_norm_p, norm_certificate, norm_p, verify_certificate, SpaceSpec};
use tsirelson::rational::{q, show};
use tsirelson::C00Vector;

fn main() -> tsirelson::Result<()> {
    let t = SpaceSpec::tsirelson(q(1, 2));
    let x = C00Vector::ones(1, 4..=7);
    let n = norm_p(&x, &t)?;
    println!("||e_4+...+e_7|| = {}", show(&n));

    let cert = norm_certificate(&x, &t)?;
    println!("certificate depth {}, leaves {:?}", cert.depth(), cert.leaves());
    println!("verified value {}", show(&verify_certificate(&cert, &x, &t)?));
    println!("{}", serde_json::to_string(&cert).unwrap());

    let mixed = SpaceSpec::new(2, vec![(1, q(1, 2)), (2, q(1, 4))], true)?;
    let y = C00Vector::from_coeffs(2, [(2, q(1, 1)), (3, q(-1, 2)), (5, q(3, 4)), (6, q(1, 4))]);
    let engine = norm_p(&y, &mixed)?;
    let brute = brute_norm_p(&y, &mixed, 4)?;
    println!("p=2 mixed: engine {} brute {}", show(&engine), show(&brute));
    Ok(())
}
