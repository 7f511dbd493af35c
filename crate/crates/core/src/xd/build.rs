use std::collections::BTreeSet;

use num::Zero;
use serde::{Deserialize, Serialize};

use super::{Coeffs, DSpaceParams, SigmaCoding};
use crate::error::{Error, Result};
use crate::norms::norm_p;
use crate::rational::{serde_q, Q};
use crate::schreier::SchreierAutomaton;
use crate::vector::C00Vector;

/// Default cap on the number of functionals in a build.
pub const DEFAULT_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weighted {
    #[serde(with = "serde_q")]
    pub gamma: Q,
    pub f: DFunctional,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DFunctional {
    Leaf {
        index: usize,
        sign: i8,
    },
    Plain {
        character: usize,
        children: Vec<Weighted>,
    },
    Special {
        l: usize,
        chain: Vec<Weighted>,
        /// `codes[i] = sigma(f_1, ..., f_(i+1))`, the character required of the next link.
        codes: Vec<usize>,
        interval: Option<(usize, usize)>,
    },
}

impl DFunctional {
    pub fn coeffs(&self, params: &DSpaceParams) -> Result<Coeffs> {
        match self {
            DFunctional::Leaf { index, sign } => {
                Ok([(*index, Q::from_integer((*sign as i64).into()))].into())
            }
            DFunctional::Plain { character, children } => {
                let theta = params
                    .theta(*character)
                    .ok_or_else(|| Error::UnknownCharacter(character.to_string()))?;
                combine(params, theta, children, None)
            }
            DFunctional::Special { l, chain, interval, .. } => {
                let rho = params
                    .rho(*l)
                    .ok_or_else(|| Error::UnknownCharacter(format!("special {l}")))?;
                combine(params, rho, chain, *interval)
            }
        }
    }

    /// Checks the construction rules recursively.
    pub fn check(&self, params: &DSpaceParams) -> Result<()> {
        let bad = |m: String| Err(Error::NotAdmissible(m));
        match self {
            DFunctional::Leaf { sign, .. } => {
                if sign.abs() != 1 {
                    return bad("leaf sign".into());
                }
            }
            DFunctional::Plain { character, children } => {
                check_children(params, *character, children)?;
            }
            DFunctional::Special { l, chain, codes, interval } => {
                check_children(params, *l, chain)?;
                if codes.len() + 1 != chain.len() {
                    return bad("one code per link".into());
                }
                for (k, w) in chain.iter().enumerate() {
                    let DFunctional::Plain { character, .. } = &w.f else {
                        return bad("special links must be weighted functionals".into());
                    };
                    if k > 0 && *character != codes[k - 1] {
                        return bad(format!("link {k} has character {character}, coded {}", codes[k - 1]));
                    }
                }
                if let Some((a, b)) = interval {
                    if a > b {
                        return bad("empty interval".into());
                    }
                }
            }
        }
        Ok(())
    }
}

fn combine(params: &DSpaceParams, weight: &Q, children: &[Weighted], interval: Option<(usize, usize)>) -> Result<Coeffs> {
    let mut out = Coeffs::new();
    for w in children {
        for (i, c) in w.f.coeffs(params)? {
            if interval.map_or(true, |(a, b)| a <= i && i <= b) {
                let v = weight * &w.gamma * c;
                if !v.is_zero() {
                    out.insert(i, v);
                }
            }
        }
    }
    Ok(out)
}

fn check_children(params: &DSpaceParams, n: usize, children: &[Weighted]) -> Result<()> {
    if children.is_empty() {
        return Err(Error::EmptyPiece);
    }
    let mut automaton = SchreierAutomaton::new(n);
    let mut last = 0;
    for w in children {
        if w.gamma.is_zero() || !params.gamma_grid.contains(&w.gamma) {
            return Err(Error::NotAdmissible(format!("weight {} is off the grid", w.gamma)));
        }
        w.f.check(params)?;
        let c = w.f.coeffs(params)?;
        let (Some(&lo), Some(&hi)) = (c.keys().next(), c.keys().next_back()) else {
            return Err(Error::EmptyPiece);
        };
        if lo <= last || !automaton.push(lo) {
            return Err(Error::NotAdmissible(format!("children are not S_{n}-admissible at {lo}")));
        }
        last = hi;
    }
    Ok(())
}

/// A built inner approximation of `D`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DSet {
    pub params: DSpaceParams,
    pub support: usize,
    pub depth: usize,
    pub functionals: Vec<DFunctional>,
    #[serde(skip)]
    coeffs: Vec<Coeffs>,
}

impl DSet {
    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }

    /// Coefficient vectors, recomputed after loading from JSON.
    pub fn coeffs(&mut self) -> Result<&[Coeffs]> {
        if self.coeffs.len() != self.functionals.len() {
            self.coeffs = self
                .functionals
                .iter()
                .map(|f| f.coeffs(&self.params))
                .collect::<Result<_>>()?;
        }
        Ok(&self.coeffs)
    }

    pub fn contains(&mut self, c: &Coeffs) -> Result<bool> {
        Ok(self.coeffs()?.contains(c))
    }
}

struct Item {
    f: DFunctional,
    c: Coeffs,
    lo: usize,
    hi: usize,
    character: Option<usize>,
}

struct Builder<'a> {
    params: &'a DSpaceParams,
    items: Vec<Item>,
    seen: BTreeSet<Coeffs>,
    cap: usize,
}

impl Builder<'_> {
    fn add(&mut self, f: DFunctional, c: Coeffs) -> Result<()> {
        if c.is_empty() || self.seen.contains(&c) {
            return Ok(());
        }
        if self.items.len() >= self.cap {
            return Err(Error::Explosion(self.cap));
        }
        let character = match &f {
            DFunctional::Plain { character, .. } => Some(*character),
            _ => None,
        };
        let (lo, hi) = (*c.keys().next().unwrap(), *c.keys().next_back().unwrap());
        self.seen.insert(c.clone());
        self.items.push(Item { f, c, lo, hi, character });
        Ok(())
    }
}

/// Saturates `+-e_i^*` (`i <= support`) under both rules `depth` times, keeping
/// the first functional per coefficient vector. Fails with `Explosion` past `cap`.
pub fn build_d(params: &DSpaceParams, support: usize, depth: usize, cap: usize) -> Result<DSet> {
    let mut b = Builder {
        params,
        items: Vec::new(),
        seen: BTreeSet::new(),
        cap,
    };
    for index in 1..=support {
        for sign in [1i8, -1] {
            let f = DFunctional::Leaf { index, sign };
            let c = f.coeffs(params)?;
            b.add(f, c)?;
        }
    }
    let grid: Vec<Q> = params.gamma_grid.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut sigma = SigmaCoding::new(params);
    for _ in 0..depth {
        let known = b.items.len();
        let mut order: Vec<usize> = (0..known).collect();
        order.sort_by_key(|&k| (b.items[k].lo, k));
        for &(n, _) in &params.weights {
            let mut stack = Vec::new();
            plain_sequences(&mut b, &order, &grid, n, SchreierAutomaton::new(n), 0, &mut stack)?;
        }
        for &(l, _) in &params.special {
            let starts: Vec<usize> = order.iter().copied().filter(|&k| b.items[k].character.is_some()).collect();
            for k in starts {
                let mut automaton = SchreierAutomaton::new(l);
                automaton.push(b.items[k].lo);
                let mut chain = vec![k];
                special_chains(&mut b, &mut sigma, &order, &grid, l, automaton, &mut chain)?;
            }
        }
        if b.items.len() == known {
            break;
        }
    }
    if !sigma.injective() {
        return Err(Error::NotAdmissible("sigma collision".into()));
    }
    let (functionals, coeffs) = b.items.into_iter().map(|i| (i.f, i.c)).unzip();
    Ok(DSet {
        params: params.clone(),
        support,
        depth,
        functionals,
        coeffs,
    })
}

/// Every nonempty `S_n`-admissible sequence of known functionals, with every weighting.
fn plain_sequences(
    b: &mut Builder,
    order: &[usize],
    grid: &[Q],
    n: usize,
    automaton: SchreierAutomaton,
    after: usize,
    stack: &mut Vec<usize>,
) -> Result<()> {
    for &k in order {
        let (lo, hi) = (b.items[k].lo, b.items[k].hi);
        if lo <= after {
            continue;
        }
        let mut a = automaton.clone();
        if !a.push(lo) {
            continue;
        }
        stack.push(k);
        let mut make = |children| DFunctional::Plain { character: n, children };
        emit_weightings(b, grid, stack, &mut make)?;
        plain_sequences(b, order, grid, n, a, hi, stack)?;
        stack.pop();
    }
    Ok(())
}

fn special_chains(
    b: &mut Builder,
    sigma: &mut SigmaCoding,
    order: &[usize],
    grid: &[Q],
    l: usize,
    automaton: SchreierAutomaton,
    chain: &mut Vec<usize>,
) -> Result<()> {
    let codes: Vec<usize> = (1..chain.len())
        .map(|i| {
            let word: Vec<&Coeffs> = chain[..i].iter().map(|&k| &b.items[k].c).collect();
            sigma.code(&word).expect("coded when the chain was extended")
        })
        .collect();
    let lo = b.items[chain[0]].lo;
    let hi = b.items[*chain.last().unwrap()].hi;
    let mut intervals = vec![None];
    for a in lo..=hi {
        for z in a..=hi {
            if (a, z) != (lo, hi) {
                intervals.push(Some((a, z)));
            }
        }
    }
    for e in intervals {
        let codes = codes.clone();
        let mut make = |links| DFunctional::Special {
            l,
            chain: links,
            codes: codes.clone(),
            interval: e,
        };
        emit_weightings(b, grid, chain, &mut make)?;
    }
    let word: Vec<&Coeffs> = chain.iter().map(|&k| &b.items[k].c).collect();
    let next = match sigma.code(&word) {
        Ok(c) => c,
        Err(Error::NOutOfRange(..)) => return Ok(()),
        Err(e) => return Err(e),
    };
    let after = b.items[*chain.last().unwrap()].hi;
    for &k in order {
        if b.items[k].lo <= after || b.items[k].character != Some(next) {
            continue;
        }
        let mut a = automaton.clone();
        if !a.push(b.items[k].lo) {
            continue;
        }
        chain.push(k);
        special_chains(b, sigma, order, grid, l, a, chain)?;
        chain.pop();
    }
    Ok(())
}

/// Adds `weight * sum gamma_i f_(stack_i)` for every choice of nonzero grid weights.
fn emit_weightings(
    b: &mut Builder,
    grid: &[Q],
    stack: &[usize],
    make: &mut dyn FnMut(Vec<Weighted>) -> DFunctional,
) -> Result<()> {
    let mut choice = vec![0usize; stack.len()];
    loop {
        let children: Vec<Weighted> = stack
            .iter()
            .zip(&choice)
            .map(|(&k, &g)| Weighted {
                gamma: grid[g].clone(),
                f: b.items[k].f.clone(),
            })
            .collect();
        let f = make(children);
        let c = f.coeffs(b.params)?;
        b.add(f, c)?;
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(());
            }
            choice[pos] += 1;
            if choice[pos] < grid.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// `(max_(f in dset) f(x), norm of x over all pairs of N and L)`.
pub fn norm_d_bounds(x: &C00Vector, dset: &mut DSet) -> Result<(Q, Q)> {
    if x.p() != 1 {
        return Err(Error::Unsupported("the norming set is built for p = 1 only".into()));
    }
    if x.max_index().map_or(false, |m| m > dset.support) {
        return Err(Error::TooLarge(x.max_index().unwrap(), dset.support));
    }
    let upper = if x.is_empty() { Q::zero() } else { norm_p(x, &dset.params.envelope_space())? };
    let mut lower = Q::zero();
    for c in dset.coeffs()? {
        let v: Q = x
            .iter()
            .filter_map(|(i, e)| c.get(&i).map(|ci| ci * &e.mag * Q::from_integer((e.sign as i64).into())))
            .sum();
        if v > lower {
            lower = v;
        }
    }
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;
    use crate::rational::q;

    fn halves() -> DSpaceParams {
        DSpaceParams::new(1, vec![(1, q(1, 2))], vec![], vec![q(1, 1), q(-1, 1)], true).unwrap()
    }

    #[test]
    fn depth_zero_is_the_unit_functionals() {
        let d = build_d(&DSpaceParams::preset(), 5, 0, DEFAULT_CAP).unwrap();
        assert_eq!(d.len(), 10);
        assert!(d.functionals.iter().all(|f| matches!(f, DFunctional::Leaf { .. })));
    }

    #[test]
    fn signed_halves() {
        let mut d = build_d(&halves(), 4, 1, DEFAULT_CAP).unwrap();
        let half = |e: &[(usize, i64)]| -> Coeffs { e.iter().map(|&(i, s)| (i, q(s, 2))).collect() };
        assert!(d.contains(&half(&[(2, 1), (3, 1)])).unwrap());
        assert!(d.contains(&half(&[(3, -1), (4, 1)])).unwrap());
        assert!(d.contains(&half(&[(1, 1)])).unwrap());
        assert!(!d.contains(&half(&[(1, 1), (2, 1)])).unwrap());
        // {1}, {2}, {2,3}, {2,4}, {3}, {3,4}, {4} with signs, plus the 8 leaves
        assert_eq!(d.len(), 8 + 2 + 2 + 4 + 4 + 2 + 4 + 2);
        for f in &d.functionals {
            f.check(&d.params).unwrap();
        }
    }

    #[test]
    fn preset_build_is_symmetric_and_enveloped() {
        let mut d = build_d(&DSpaceParams::preset(), 4, 2, DEFAULT_CAP).unwrap();
        for f in d.functionals.clone() {
            f.check(&d.params).unwrap();
        }
        let all: BTreeSet<Coeffs> = d.coeffs().unwrap().iter().cloned().collect();
        for c in &all {
            let neg: Coeffs = c.iter().map(|(i, v)| (*i, -v)).collect();
            assert!(all.contains(&neg));
        }
        let x = C00Vector::from_coeffs(1, [(1, q(1, 1)), (2, q(-1, 2)), (3, q(3, 4)), (4, q(1, 4))]);
        let (lo, hi) = norm_d_bounds(&x, &mut d).unwrap();
        assert!(lo <= hi && lo >= q(1, 1));
        let (lo, hi) = norm_d_bounds(&C00Vector::unit(1, 3), &mut d).unwrap();
        assert_eq!((lo, hi), (Q::one(), Q::one()));
    }

    #[test]
    fn explosion_is_reported() {
        assert!(matches!(
            build_d(&DSpaceParams::preset(), 10, 3, 5_000),
            Err(Error::Explosion(5_000))
        ));
    }

    #[test]
    fn json_round_trip() {
        let d = build_d(&halves(), 3, 1, DEFAULT_CAP).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        let mut back: DSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back.functionals, d.functionals);
        assert_eq!(back.coeffs().unwrap().len(), d.len());
    }
}
