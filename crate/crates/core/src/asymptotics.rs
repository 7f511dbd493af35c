//! Upper bounds on the lower asymptotic constants `theta_n(X)` by witness search.
//!
//! `theta_n(X)` is the largest `c` with `||sum x_i||^p >= c * sum ||x_i||^p` for
//! every `S_n`-admissible block sequence with `n <= x_1`. Any such sequence gives
//! an upper bound; the regularized characters of the space give the lower one.

use std::collections::BTreeMap;

use num::{One, Zero};
use rand::Rng;

use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::norms::{norm_p, regularize, SpaceSpec};
use crate::rational::{q, Q};
use crate::schreier::{member, FamilyDescriptor, FinSet, SchreierAutomaton};
use crate::specialvec::{averages_len, repeated_averages};
use crate::vector::C00Vector;

/// Coordinates a single witness may use.
const WITNESS_WIDTH: usize = 32;

#[derive(Clone, Debug)]
pub struct ThetaEstimate {
    pub n: usize,
    /// Smallest ratio found; an upper bound on `theta_n(X)`, on a finite proxy when `r` is set.
    pub upper: Q,
    pub witness: Vec<C00Vector>,
    /// Regularized character of the space, when available.
    pub definitional_lower: Option<Q>,
    pub candidates: usize,
    /// The deterministic part of the search was cut short by the budget.
    pub exhausted: bool,
}

/// Smallest `norm_p(sum x_i) / sum norm_p(x_i)` over searched sequences.
///
/// Candidates, in order: unit-vector runs over maximal `S_n` sets (runs with at
/// least four vectors first), interval blocks, repeated-average blocks, then
/// seeded random blocks. With `r` set every block support must lie in `S_r`.
/// Ties keep the earlier witness.
pub fn theta_n_estimate(
    space: &SpaceSpec,
    n: usize,
    r: Option<usize>,
    budget: &Budget,
) -> Result<ThetaEstimate> {
    let p = space.p();
    let cap = budget.max_support.max(n + 1);
    let first = n.max(1);
    let mut search = Search {
        space,
        r,
        meter: budget.meter(),
        best: None,
        exhausted: false,
    };

    let unit = |i: usize| Some(C00Vector::unit(p, i));
    let starts: Vec<usize> = (first..=cap).collect();
    let pivot = starts
        .iter()
        .position(|&s| run(n, s, cap, unit).map_or(false, |b| b.len() >= 4))
        .unwrap_or(0);
    for &s in starts[pivot..].iter().chain(&starts[..pivot]) {
        if let Some(blocks) = run(n, s, cap, unit) {
            search.try_blocks(blocks)?;
        }
    }
    for len in 2..=4 {
        for s in first..=first + 8 {
            let interval = |i: usize| Some(C00Vector::ones(p, i..i + len));
            if let Some(blocks) = run(n, s, cap, interval) {
                search.try_blocks(blocks)?;
            }
        }
    }
    for level in 1..=n.max(1) {
        for s in first..=first + 8 {
            let avg = |i: usize| {
                (averages_len(level, i) <= WITNESS_WIDTH).then(|| {
                    let b = repeated_averages(level, i);
                    C00Vector::from_mags(p, b.iter().map(|(j, e)| (j, e.mag.clone())))
                })
            };
            if let Some(blocks) = run(n, s, cap, avg) {
                search.try_blocks(blocks)?;
            }
        }
    }
    let deterministic_cut = search.exhausted;
    let mut rng = budget.rng();
    loop {
        let s = rng.gen_range(first..=first + 8);
        let mut random_block = |i: usize| {
            let len = rng.gen_range(1..=3);
            Some(C00Vector::from_coeffs(
                p,
                (i..i + len).map(|j| {
                    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                    (j, q(sign * rng.gen_range(1..=4), 4))
                }),
            ))
        };
        let Some(blocks) = run(n, s, cap, &mut random_block) else {
            continue;
        };
        if !search.try_blocks(blocks)? {
            break;
        }
    }

    let (upper, witness) = search.best.ok_or(Error::BudgetExhausted { best: None })?;
    let definitional_lower = definitional_lower(space, n);
    Ok(ThetaEstimate {
        n,
        upper,
        witness,
        definitional_lower,
        candidates: search.meter.used(),
        exhausted: deterministic_cut,
    })
}

/// `theta_bar_n` of a regular space: the norm equation forces `theta_n(X) >= theta_bar_n`.
pub fn definitional_lower(space: &SpaceSpec, n: usize) -> Option<Q> {
    if n == 0 {
        return Some(Q::one());
    }
    if space.is_lp() {
        return Some(Q::one());
    }
    regularize(space.pairs(), n).pop().map(|(_, t)| t)
}

/// Successive blocks from `start` while their minima stay in `S_n` and inside `cap`.
fn run(
    n: usize,
    start: usize,
    cap: usize,
    mut block: impl FnMut(usize) -> Option<C00Vector>,
) -> Option<Vec<C00Vector>> {
    let mut automaton = SchreierAutomaton::new(n);
    let mut blocks = Vec::new();
    let mut cur = start;
    let mut width = 0;
    while let Some(b) = block(cur) {
        let (lo, hi) = (b.min_index()?, b.max_index()?);
        width += b.len();
        if hi > cap || width > WITNESS_WIDTH || !automaton.push(lo) {
            break;
        }
        blocks.push(b);
        cur = hi + 1;
    }
    (!blocks.is_empty()).then_some(blocks)
}

struct Search<'a> {
    space: &'a SpaceSpec,
    r: Option<usize>,
    meter: Meter,
    best: Option<(Q, Vec<C00Vector>)>,
    exhausted: bool,
}

impl Search<'_> {
    /// Evaluates one candidate; `false` once the budget is spent.
    fn try_blocks(&mut self, blocks: Vec<C00Vector>) -> Result<bool> {
        if let Some(r) = self.r {
            let fam = FamilyDescriptor::Schreier(r);
            if !blocks.iter().all(|b| member(&FinSet::new(b.indices()).unwrap(), &fam)) {
                return Ok(true);
            }
        }
        if !self.meter.take() {
            self.exhausted = true;
            return Ok(false);
        }
        let p = self.space.p();
        let sum = C00Vector::disjoint_sum(p, &blocks)?;
        let mut den = Q::zero();
        for b in &blocks {
            den += norm_p(b, self.space)?;
        }
        let ratio = norm_p(&sum, self.space)? / den;
        if self.best.as_ref().map_or(true, |(b, _)| ratio < *b) {
            self.best = Some((ratio, blocks));
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubmultFlag {
    pub n: usize,
    pub m: usize,
    pub upper: Q,
    pub product: Q,
}

/// Pairs with `upper(n + m) < lower(n) * lower(m)`, which contradict `theta_(n+m) >= theta_n theta_m`.
pub fn submult_audit(upper: &BTreeMap<usize, Q>, lower: &BTreeMap<usize, Q>) -> Vec<SubmultFlag> {
    let mut flags = Vec::new();
    for (&n, ln) in lower {
        for (&m, lm) in lower.range(n..) {
            if let Some(u) = upper.get(&(n + m)) {
                let product = ln * lm;
                if *u < product {
                    flags.push(SubmultFlag {
                        n,
                        m,
                        upper: u.clone(),
                        product,
                    });
                }
            }
        }
    }
    flags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schreier::is_admissible;

    fn admissible(blocks: &[C00Vector], n: usize) -> bool {
        let sets: Vec<FinSet> = blocks.iter().map(|b| FinSet::new(b.indices()).unwrap()).collect();
        blocks.windows(2).all(|w| w[0].precedes(&w[1]))
            && is_admissible(&sets, &FamilyDescriptor::Schreier(n)).unwrap()
            && blocks[0].min_index().unwrap() >= n
    }

    #[test]
    fn tsirelson_first_constant() {
        let t = SpaceSpec::tsirelson(q(1, 2));
        let e = theta_n_estimate(&t, 1, None, &Budget::new(1, 400)).unwrap();
        assert_eq!(e.upper, q(1, 2));
        assert_eq!(e.definitional_lower, Some(q(1, 2)));
        let want: Vec<_> = (4..=7).map(|i| C00Vector::unit(1, i)).collect();
        assert_eq!(e.witness, want);
    }

    #[test]
    fn lp_is_tight() {
        let l2 = SpaceSpec::single(2, 1, q(1, 1)).unwrap();
        let e = theta_n_estimate(&l2, 1, None, &Budget::new(0, 100)).unwrap();
        assert_eq!(e.upper, q(1, 1));
    }

    #[test]
    fn mixed_second_constant() {
        let z = SpaceSpec::mixed_decay(1, 3);
        let e = theta_n_estimate(&z, 2, None, &Budget::new(3, 80)).unwrap();
        let lower = e.definitional_lower.clone().unwrap();
        assert_eq!(lower, q(1, 12));
        assert!(e.upper >= lower);
        assert!(admissible(&e.witness, 2));
        let sum = C00Vector::disjoint_sum(1, &e.witness).unwrap();
        let den: Q = e.witness.iter().map(|b| norm_p(b, &z).unwrap()).sum();
        assert_eq!(norm_p(&sum, &z).unwrap() / den, e.upper);
    }

    #[test]
    fn restricted_blocks() {
        let t = SpaceSpec::tsirelson(q(1, 2));
        let e = theta_n_estimate(&t, 1, Some(0), &Budget::new(2, 200)).unwrap();
        assert!(e.witness.iter().all(|b| b.len() == 1));
        assert!(e.upper >= q(1, 2));
    }

    #[test]
    fn audit() {
        let lower: BTreeMap<_, _> = [(1, q(1, 2)), (2, q(1, 4))].into();
        let good: BTreeMap<_, _> = [(1, q(1, 2)), (2, q(1, 4))].into();
        assert!(submult_audit(&good, &lower).is_empty());
        assert!(submult_audit(&BTreeMap::new(), &BTreeMap::new()).is_empty());
        let bad: BTreeMap<_, _> = [(1, q(1, 2)), (2, q(1, 5))].into();
        let flags = submult_audit(&bad, &lower);
        assert_eq!(flags.len(), 1);
        assert_eq!((flags[0].n, flags[0].m, flags[0].product.clone()), (1, 1, q(1, 4)));
    }
}
