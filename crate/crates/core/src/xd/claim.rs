use num::Zero;
use rand::Rng;

use super::{norm_d_lower, DSpaceParams};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::norms::norm_p;
use crate::rational::{pow, q, Q};
use crate::schreier::{dfs_members, FamilyDescriptor, FinSet};
use crate::vector::C00Vector;

/// Least `j` such that every listed `theta_j', rho_j'` with `j' >= j` is at most `theta_n / 2^p`.
pub fn j_n(params: &DSpaceParams, n: usize) -> Result<usize> {
    let theta = params
        .theta(n)
        .ok_or_else(|| Error::PreconditionFailed(format!("{n} is not in N")))?;
    let limit = theta * pow(&q(1, 2), params.p);
    let last_bad = params
        .weights
        .iter()
        .chain(&params.special)
        .filter(|(_, t)| *t > limit)
        .map(|(j, _)| *j)
        .max();
    Ok(last_bad.map_or(1, |j| j + 1))
}

/// Least `i` such that every word with `maxsupp >= i` is coded above `j`.
///
/// Codes of words with `maxsupp = m` sit at positions `>= m - 1` of `N`, and
/// positions past the end of `N` are never coded. `None` without growth.
pub fn i_n(params: &DSpaceParams, j: usize) -> Option<usize> {
    if !params.growth {
        return None;
    }
    let chars = params.characters();
    let last_low = chars.iter().rposition(|&c| c <= j);
    Some(last_low.map_or(1, |pos| pos + 2))
}

#[derive(Clone, Debug)]
pub struct ClaimReport {
    pub n: usize,
    pub j_n: usize,
    pub i_n: Option<usize>,
    pub samples: usize,
    pub max_ratio: Q,
    pub argmax: Option<(FinSet, C00Vector)>,
    /// Samples with `lower_D > 4 * ||x||_Z`.
    pub counterexamples: Vec<(FinSet, C00Vector, Q)>,
}

impl ClaimReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Samples `F in S_n` inside `[i_n, support]` with random coefficients and compares
/// the depth-bounded lower bound on `||x||_D` with `4 ||x||_Z`.
///
/// Without growth the scan starts at 1 and the report carries `i_n = None`.
pub fn claim_scan(params: &DSpaceParams, n: usize, support: usize, depth: usize, budget: &Budget) -> Result<ClaimReport> {
    let j = j_n(params, n)?;
    let i = i_n(params, j);
    let from = i.unwrap_or(1);
    if from > support {
        return Err(Error::BoundsTooTight(format!(
            "i_{n} = {from} exceeds the support bound {support}; the claim is vacuous at this scale"
        )));
    }
    let universe: Vec<usize> = (from..=support).collect();
    let mut sets = Vec::new();
    let mut current = Vec::new();
    dfs_members(&FamilyDescriptor::Schreier(n), &universe, 0, &mut current, &mut |f: &[usize]| {
        if !f.is_empty() {
            sets.push(FinSet::new(f.to_vec()).unwrap());
        }
        sets.len() < 1_000_000
    })?;
    let z = params.z_space();
    let four = Q::from_integer(4.into());
    let mut rng = budget.rng();
    let mut report = ClaimReport {
        n,
        j_n: j,
        i_n: i,
        samples: 0,
        max_ratio: Q::zero(),
        argmax: None,
        counterexamples: Vec::new(),
    };
    let mut meter = budget.meter();
    while meter.take() {
        let f = &sets[rng.gen_range(0..sets.len())];
        let x = C00Vector::from_coeffs(
            params.p,
            f.elements().iter().map(|&e| {
                let k = rng.gen_range(1..=4);
                (e, if rng.gen_bool(0.5) { q(k, 4) } else { q(-k, 4) })
            }),
        );
        let lower = norm_d_lower(&x, params, depth)?;
        let ratio = lower / norm_p(&x, &z)?;
        if ratio > four {
            report.counterexamples.push((f.clone(), x.clone(), ratio.clone()));
        }
        if report.argmax.is_none() || ratio > report.max_ratio {
            report.max_ratio = ratio;
            report.argmax = Some((f.clone(), x));
        }
        report.samples += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    #[test]
    fn preset_indices() {
        let d = DSpaceParams::preset();
        assert_eq!(j_n(&d, 1).unwrap(), 2);
        assert_eq!(i_n(&d, 2), Some(3));
        assert_eq!(j_n(&d, 2).unwrap(), 3);
        assert!(j_n(&d, 7).is_err());
        assert_eq!(i_n(&DSpaceParams::no_growth(), 2), None);
    }

    #[test]
    fn scan_stays_below_four() {
        let d = DSpaceParams::preset();
        let r = claim_scan(&d, 1, 10, 3, &Budget::new(7, 400)).unwrap();
        assert_eq!(r.samples, 400);
        assert!(r.passed());
        let (f, _) = r.argmax.unwrap();
        assert!(f.elements()[0] >= 3);
        assert!(matches!(claim_scan(&d, 2, 3, 3, &Budget::new(7, 10)), Err(Error::BoundsTooTight(_))));
        let fixture = claim_scan(&DSpaceParams::no_growth(), 1, 10, 3, &Budget::new(7, 100)).unwrap();
        assert_eq!(fixture.i_n, None);
        assert!(fixture.max_ratio <= Q::one());
    }
}
