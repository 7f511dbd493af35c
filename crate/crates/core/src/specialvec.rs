//! Repeated averages, basis-estimate witnesses and flattened vectors.

use num::{One, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::norms::{norm_p, norm_upper_bound, restriction_max, SpaceSpec, ENGINE_LIMIT};
use crate::rational::{int, pow, root_sum_pow_bounds, Q};
use crate::schreier::{family_mass, FamilyDescriptor};
use crate::vector::C00Vector;

/// Level-`n` repeated average starting at `start`, as `p = 1` magnitudes.
///
/// Level 0 is `e_start`; level `n` averages `start` successive level-`(n-1)`
/// vectors, the first starting at `start`, so the support is the maximal `S_n`
/// set beginning at `start`.
pub fn repeated_averages(n: usize, start: usize) -> C00Vector {
    assert!(start >= 1);
    let mut entries = Vec::new();
    averages_into(n, start, &Q::one(), &mut entries);
    C00Vector::from_mags(1, entries)
}

/// Appends the weighted level-`n` block; returns the next free index.
fn averages_into(n: usize, start: usize, weight: &Q, out: &mut Vec<(usize, Q)>) -> usize {
    if n == 0 {
        out.push((start, weight.clone()));
        return start + 1;
    }
    let w = weight / int(start as i64);
    let mut cur = start;
    for _ in 0..start {
        cur = averages_into(n - 1, cur, &w, out);
    }
    cur
}

/// Support size of the level-`n` average from `start`, saturating at `usize::MAX`.
pub fn averages_len(n: usize, start: usize) -> usize {
    averages_end(n, start).map_or(usize::MAX, |e| e - start)
}

fn averages_end(n: usize, start: usize) -> Option<usize> {
    match n {
        0 => start.checked_add(1),
        1 => start.checked_mul(2),
        2 => u32::try_from(start)
            .ok()
            .and_then(|s| 1usize.checked_shl(s))
            .filter(|&s| s != 0)
            .and_then(|s| start.checked_mul(s)),
        _ => {
            let mut cur = start;
            for _ in 0..start {
                cur = averages_end(n - 1, cur)?;
            }
            Some(cur)
        }
    }
}

#[derive(Clone, Debug)]
pub struct EstBasis {
    pub x: C00Vector,
    /// `S_(n-1)` mass of the coefficients.
    pub delta: Q,
    /// Lower-rounded value of `(delta^(1/p) + theta_n^(1/p))^p`.
    pub bound: Q,
    /// `norm_p(x)` when `exact`, otherwise a certified upper bound.
    pub norm: Q,
    pub exact: bool,
    pub holds: bool,
}

/// The witness `x = sum b_i^(1/p) e_i` with `sum |a_i|^p = 1` and its norm estimate.
pub fn est_basis_vector(space: &SpaceSpec, n: usize, start: usize) -> Result<EstBasis> {
    let p = space.p();
    if n == 0 {
        let x = C00Vector::unit(p, start);
        return Ok(EstBasis {
            x,
            delta: Q::zero(),
            bound: Q::one(),
            norm: Q::one(),
            exact: true,
            holds: true,
        });
    }
    let theta = space
        .theta(n)
        .cloned()
        .ok_or_else(|| Error::PreconditionFailed(format!("character {n} is not in the space")))?;
    let b = repeated_averages(n, start);
    let x = C00Vector::from_mags(p, b.iter().map(|(i, e)| (i, e.mag.clone())));
    let delta = family_mass(&x, &FamilyDescriptor::Schreier(n - 1))?;
    let (exact, norm) = if x.len() <= ENGINE_LIMIT {
        (true, norm_p(&x, space)?)
    } else {
        (false, norm_upper_bound(&x, space)?)
    };
    let (bound, _) = root_sum_pow_bounds(&[delta.clone(), theta], p, 96);
    let holds = norm <= bound;
    Ok(EstBasis {
        x,
        delta,
        bound,
        norm,
        exact,
        holds,
    })
}

#[derive(Clone, Debug)]
pub struct Flattened {
    pub w: C00Vector,
    /// `restriction_max(w, S_beta)`.
    pub restriction: Q,
    pub norm: Q,
    /// `restriction / norm`, compared against `eps^p`.
    pub ratio: Q,
    pub blocks: usize,
}

/// `w` with `restriction_max(w, S_beta) < eps^p * norm_p(w)`.
///
/// Sums successive normalized level-`beta` repeated averages (which have small
/// `S_(beta-1)` restrictions) until the ratio drops below `eps^p`, trying
/// successive starting indices while the support stays within the budget.
pub fn flatten(space: &SpaceSpec, beta: usize, eps: &Q, budget: &Budget) -> Result<Flattened> {
    let p = space.p();
    let target = pow(eps, p);
    let family = FamilyDescriptor::Schreier(beta);
    if *eps > Q::one() {
        let w = C00Vector::unit(p, 1);
        let v = norm_p(&w, space)?;
        return Ok(Flattened {
            w,
            restriction: v.clone(),
            norm: v,
            ratio: Q::one(),
            blocks: 1,
        });
    }
    let mut meter = budget.meter();
    let mut best: Option<Q> = None;
    for first in 2..=budget.max_support {
        let mut w = C00Vector::new(p);
        let mut cur = first;
        let mut blocks = 0;
        loop {
            if averages_len(beta, cur).saturating_add(cur - 1) > budget.max_support {
                break;
            }
            if !meter.take() {
                return Err(Error::BudgetExhausted { best });
            }
            let z = repeated_averages(beta, cur);
            let z = C00Vector::from_mags(p, z.iter().map(|(i, e)| (i, e.mag.clone())));
            let z = z.scale_p(&(Q::one() / norm_p(&z, space)?));
            cur = z.max_index().unwrap() + 1;
            w = C00Vector::disjoint_sum(p, [&w, &z])?;
            blocks += 1;
            let r = restriction_max(&w, &family, space)?;
            let v = norm_p(&w, space)?;
            let ratio = &r / &v;
            if best.as_ref().map_or(true, |b| ratio < *b) {
                best = Some(ratio.clone());
            }
            if ratio < target {
                return Ok(Flattened {
                    w,
                    restriction: r,
                    norm: v,
                    ratio,
                    blocks,
                });
            }
        }
    }
    Err(Error::BudgetExhausted { best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::schreier::{member, FinSet, SchreierAutomaton};

    fn is_maximal_from(support: &[usize], n: usize) -> bool {
        let mut a = SchreierAutomaton::new(n);
        support.iter().all(|&x| a.push(x)) && !a.clone().push(support.last().unwrap() + 1)
    }

    #[test]
    fn small_averages() {
        let v = repeated_averages(0, 5);
        assert_eq!(v.indices(), vec![5]);
        assert_eq!(v.get(5).unwrap().mag, q(1, 1));
        for k in 1..8 {
            let v = repeated_averages(1, k);
            assert_eq!(v.indices(), (k..2 * k).collect::<Vec<_>>());
            assert!(v.iter().all(|(_, e)| e.mag == q(1, k as i64)));
            assert_eq!(family_mass(&v, &FamilyDescriptor::Schreier(0)).unwrap(), q(1, k as i64));
        }
    }

    #[test]
    fn averages_are_maximal_and_sum_to_one() {
        for n in 0..=3 {
            for start in 2..=5 {
                if averages_len(n, start) > 3000 {
                    continue;
                }
                let v = repeated_averages(n, start);
                assert_eq!(v.sum_p(), Q::one());
                let s = v.indices();
                assert_eq!(s.len(), averages_len(n, start));
                assert!(member(&FinSet::new(s.clone()).unwrap(), &FamilyDescriptor::Schreier(n)));
                assert!(is_maximal_from(&s, n));
            }
        }
    }

    #[test]
    fn level_two_mass_shrinks() {
        let m3 = family_mass(&repeated_averages(2, 3), &FamilyDescriptor::Schreier(1)).unwrap();
        let m4 = family_mass(&repeated_averages(2, 4), &FamilyDescriptor::Schreier(1)).unwrap();
        assert!(m4 < m3);
        assert_eq!(averages_len(2, 4), 60);
        assert_eq!(averages_len(2, 16), 16 * ((1 << 16) - 1));
    }

    #[test]
    fn est_basis_examples() {
        let t = SpaceSpec::tsirelson(q(1, 2));
        let e = est_basis_vector(&t, 1, 8).unwrap();
        assert_eq!(e.delta, q(1, 8));
        assert_eq!(e.bound, q(5, 8));
        assert!(e.exact && e.holds);
        assert_eq!(e.norm, q(1, 2));
        let e = est_basis_vector(&t, 0, 3).unwrap();
        assert_eq!(e.x, C00Vector::unit(1, 3));
        assert!(est_basis_vector(&t, 2, 3).is_err());
    }

    #[test]
    fn flatten_levels_zero_and_one() {
        let t = SpaceSpec::tsirelson(q(1, 2));
        let budget = Budget::default();
        for beta in [0, 1] {
            let f = flatten(&t, beta, &q(1, 2), &budget).unwrap();
            assert!(f.ratio < q(1, 2));
            let r = restriction_max(&f.w, &FamilyDescriptor::Schreier(beta), &t).unwrap();
            assert_eq!(r, f.restriction);
            assert_eq!(norm_p(&f.w, &t).unwrap(), f.norm);
            assert!(f.w.max_index().unwrap() <= 64);
        }
        let f = flatten(&t, 1, &q(2, 1), &budget).unwrap();
        assert_eq!(f.w.len(), 1);
        assert!(matches!(
            flatten(&t, 1, &q(1, 2), &Budget::new(0, 2)),
            Err(Error::BudgetExhausted { .. })
        ));
    }
}
