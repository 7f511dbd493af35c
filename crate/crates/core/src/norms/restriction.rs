use num::{One, Zero};

use super::engine::norm_p;
use super::space::SpaceSpec;
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::schreier::{family_mass, maximal_members_within, FamilyDescriptor, DEFAULT_WINDOW};
use crate::vector::C00Vector;

/// Cap on the number of members visited while enumerating.
pub const MEMBER_CAP: usize = 2_000_000;

/// `max_{F in family} norm_p(x restricted to F)`.
///
/// Every set of `S_1` lies in each `S_n`, `n >= 1`, so on such a set the whole
/// family of singletons is admissible for the best character, while
/// `N(y) <= max(||y||_inf, theta_max * sum y)` always; hence
/// `norm_p(x|F) = max(||x|F||_inf, theta_max * sum_F)` and the maximum over `S_1`
/// is `max(||x||_inf, theta_max * mass_1(x))`. Other families are enumerated.
pub fn restriction_max(x: &C00Vector, family: &FamilyDescriptor, space: &SpaceSpec) -> Result<Q> {
    if x.is_empty() {
        return Ok(Q::zero());
    }
    if space.is_lp() {
        return family_mass(x, family);
    }
    match family {
        FamilyDescriptor::Schreier(0) => Ok(x.max_p()),
        FamilyDescriptor::Schreier(1) => {
            let m1 = family_mass(x, family)?;
            let v = space.max_theta() * m1;
            let top = x.max_p();
            Ok(if v > top { v } else { top })
        }
        _ => {
            let support = x.indices();
            if support.len() > DEFAULT_WINDOW {
                return Err(Error::WindowTooLarge(format!(
                    "restriction maximum over {} positions",
                    support.len()
                )));
            }
            let sets = maximal_members_within(family, &support, MEMBER_CAP)?;
            let mut best = Q::zero();
            for f in sets {
                if f.is_empty() {
                    continue;
                }
                let v = norm_p(&x.restrict_to(f.elements()), space)?;
                if v > best {
                    best = v;
                }
            }
            Ok(best)
        }
    }
}

/// Cheap certified upper bound on `norm_p(x)` for supports too large for the engine:
///
/// `max(||x||_inf, max_n theta_n * (t * sum + (1 - t) * mass_n))`, `t = theta_max`,
/// using `N(E) <= t * sum_E + (1 - t) * ||E||_inf` on every piece and the fact that
/// the positions of the piece maxima form a spread of an `S_n` set.
/// `mass_n` falls back to the plain sum when it is not computed.
pub fn norm_upper_bound(x: &C00Vector, space: &SpaceSpec) -> Result<Q> {
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    let total = x.sum_p();
    if space.is_lp() {
        return Ok(total);
    }
    let t = space.max_theta();
    let mut best = x.max_p();
    for (n, theta) in space.pairs() {
        let mass = match family_mass(x, &FamilyDescriptor::Schreier(*n)) {
            Ok(v) => v,
            Err(Error::WindowTooLarge(_)) => total.clone(),
            Err(e) => return Err(e),
        };
        let v = theta * (&t * &total + (Q::one() - &t) * mass);
        if v > best {
            best = v;
        }
    }
    Ok(best)
}
