//! Normalized block sequences, lower-estimate ratio search and finite-section
//! operator ratios.
//!
//! The lower `T_theta` estimate for block sequences is existential; this module
//! only searches for bad coefficient vectors and reports the smallest ratio
//! found. Ratios from flattened probes are proxies for strict singularity.

use num::{One, Zero};
use rand::Rng;

use crate::budget::{random_vector, Budget};
use crate::error::{Error, Result};
use crate::norms::{norm_p, SpaceSpec};
use crate::rational::{pow, q, Q};
use crate::schreier::{maximal_members_within, member, FamilyDescriptor, FinSet};
use crate::specialvec::repeated_averages;
use crate::vector::C00Vector;

/// Largest admissibility order tried when none is given.
const MAX_ORDER: usize = 8;

/// Successive blocks, each of norm one in the space they were built in.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSeq {
    blocks: Vec<C00Vector>,
    /// Every support lies in `S_r`.
    pub r: usize,
    /// Caller-supplied constant carried along with the sequence.
    pub c: Option<Q>,
}

impl BlockSeq {
    /// Normalizes the blocks in `space`, checks they are successive and records
    /// the least `r <= 8` with every support in `S_r`.
    pub fn new(blocks: Vec<C00Vector>, space: &SpaceSpec) -> Result<Self> {
        let mut out = Vec::with_capacity(blocks.len());
        for b in blocks {
            if b.is_empty() {
                return Err(Error::EmptyVector);
            }
            let n = norm_p(&b, space)?;
            out.push(b.scale_p(&(Q::one() / n)));
        }
        Self::normalized(out)
    }

    /// Blocks already normalized; only successiveness and the order are checked.
    pub fn normalized(blocks: Vec<C00Vector>) -> Result<Self> {
        if let Some(w) = blocks.windows(2).find(|w| !w[0].precedes(&w[1])) {
            return Err(Error::NotAdmissible(format!(
                "blocks ending at {:?} and starting at {:?} are not successive",
                w[0].max_index(),
                w[1].min_index()
            )));
        }
        if blocks.iter().any(C00Vector::is_empty) {
            return Err(Error::EmptyVector);
        }
        let r = (0..=MAX_ORDER)
            .find(|&r| {
                let fam = FamilyDescriptor::Schreier(r);
                blocks.iter().all(|b| member(&FinSet::new(b.indices()).unwrap(), &fam))
            })
            .ok_or_else(|| Error::NotAdmissible(format!("a support is outside S_{MAX_ORDER}")))?;
        Ok(BlockSeq { blocks, r, c: None })
    }

    pub fn unit_basis(p: u32, indices: impl IntoIterator<Item = usize>) -> Self {
        let blocks = indices.into_iter().map(|i| C00Vector::unit(p, i)).collect();
        Self::normalized(blocks).expect("unit vectors are successive")
    }

    pub fn blocks(&self) -> &[C00Vector] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn min_supports(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.min_index().unwrap()).collect()
    }

    /// `sum_i a_i x_i`, with `a` indexed from 1 over the blocks.
    pub fn combine(&self, a: &C00Vector) -> Result<C00Vector> {
        let p = self.blocks.first().map_or(a.p(), C00Vector::p);
        if a.p() != p {
            return Err(Error::InvalidSpace(format!("coefficients with p = {} on blocks with p = {p}", a.p())));
        }
        let mut v = C00Vector::new(p);
        for (i, e) in a.iter() {
            let block = self
                .blocks
                .get(i - 1)
                .ok_or(Error::LengthMismatch(i, self.blocks.len()))?;
            for (j, b) in block.iter() {
                v.set(j, e.sign * b.sign, &e.mag * &b.mag);
            }
        }
        Ok(v)
    }
}

#[derive(Clone, Debug)]
pub struct MinRatio {
    pub ratio: Q,
    /// Positions in the sequence, from 1.
    pub set: FinSet,
    pub coeffs: C00Vector,
    pub candidates: usize,
    pub exhausted: bool,
}

impl MinRatio {
    /// `ratio >= ((1 - delta) / 2)^p`.
    pub fn passes(&self, delta: &Q, p: u32) -> bool {
        self.ratio >= pow(&((Q::one() - delta) / Q::from_integer(2.into())), p)
    }
}

/// Smallest `norm_p(sum_(i in G) a_i x_i) / norm_p(sum_(i in G) a_i e_(min supp x_i))`,
/// the denominator in `T[S_1, theta]`, over searched `G in S_M` and coefficients.
pub fn theta3_min_ratio(
    seq: &BlockSeq,
    m: usize,
    theta: &Q,
    space: &SpaceSpec,
    budget: &Budget,
) -> Result<MinRatio> {
    let p = space.p();
    let t = SpaceSpec::single(p, 1, theta.clone())?;
    let mins = seq.min_supports();
    let positions: Vec<usize> = (1..=seq.len()).collect();
    let sets = maximal_members_within(&FamilyDescriptor::Schreier(m), &positions, 100_000)?;
    let mut meter = budget.meter();
    let mut best: Option<MinRatio> = None;
    let mut exhausted = false;

    let mut evaluate = |set: &FinSet, a: C00Vector, used: usize| -> Result<()> {
        let num = norm_p(&seq.combine(&a)?, space)?;
        let image = C00Vector::from_mags(p, a.iter().map(|(i, e)| (mins[i - 1], e.mag.clone())));
        let ratio = num / norm_p(&image, &t)?;
        if best.as_ref().map_or(true, |b| ratio < b.ratio) {
            best = Some(MinRatio {
                ratio,
                set: set.clone(),
                coeffs: a,
                candidates: used,
                exhausted: false,
            });
        }
        Ok(())
    };

    let mut shapes: Vec<(FinSet, C00Vector)> = Vec::new();
    for set in &sets {
        let g = set.elements();
        if g.is_empty() {
            continue;
        }
        shapes.push((set.clone(), C00Vector::ones(p, g.iter().copied())));
        for k in 1..g.len() {
            let head = FinSet::new(g[..k].to_vec())?;
            shapes.push((head, C00Vector::ones(p, g[..k].iter().copied())));
        }
        let avg = repeated_averages(1, g.len());
        let weights: Vec<Q> = avg.mags();
        shapes.push((set.clone(), C00Vector::from_mags(p, g.iter().copied().zip(weights))));
        let decay = g.iter().enumerate().map(|(k, &i)| (i, pow(&q(1, 2), k as u32)));
        shapes.push((set.clone(), C00Vector::from_mags(p, decay)));
    }
    for (set, a) in shapes {
        if !meter.take() {
            exhausted = true;
            break;
        }
        evaluate(&set, a, meter.used())?;
    }
    let mut rng = budget.rng();
    while !sets.is_empty() && meter.take() {
        let set = &sets[rng.gen_range(0..sets.len())];
        let g = set.elements();
        if g.is_empty() {
            continue;
        }
        let a = random_vector(&mut rng, p, 1, g.len());
        let a = C00Vector::from_mags(p, a.iter().map(|(k, e)| (g[k - 1], e.mag.clone())));
        let support = FinSet::new(a.indices())?;
        evaluate(&support, a, meter.used())?;
    }
    let mut out = best.ok_or(Error::BudgetExhausted { best: None })?;
    out.candidates = meter.used();
    out.exhausted = exhausted;
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct BuiltY {
    pub y: BlockSeq,
    /// `norm_p(y_i)` before normalization; in `[2^-p, 1]` for seminormalized input.
    pub raw_norms: Vec<Q>,
    /// `picks[k][n]`: block of family `n` used in the `k`-th combined vector.
    pub picks: Vec<Vec<usize>>,
}

/// `y_i = sum_(n <= i) 2^-n y_i^(n)` for `i in J`, normalized in `space`.
///
/// The pieces are taken in the order `y_1^(1) < y_2^(1) < y_2^(2) < ...`, each
/// the first unused block of its family starting after everything placed so far.
/// Families beyond the `i`-th are not used in `y_i`.
pub fn build_y(families: &[BlockSeq], j: &[usize], space: &SpaceSpec) -> Result<BuiltY> {
    let p = space.p();
    if families.is_empty() {
        return Err(Error::CannotInterleave("no families".into()));
    }
    if j.windows(2).any(|w| w[0] >= w[1]) || j.first() == Some(&0) {
        return Err(Error::CannotInterleave("J must be increasing and start at 1 or more".into()));
    }
    let mut next = vec![0usize; families.len()];
    let mut last = 0usize;
    let mut blocks = Vec::new();
    let mut raw_norms = Vec::new();
    let mut picks = Vec::new();
    for &i in j {
        let mut parts = Vec::new();
        let mut used = Vec::new();
        for (n, fam) in families.iter().enumerate().take(i) {
            let seq = fam.blocks();
            while next[n] < seq.len() && seq[next[n]].min_index().unwrap() <= last {
                next[n] += 1;
            }
            let Some(b) = seq.get(next[n]) else {
                return Err(Error::CannotInterleave(format!(
                    "family {} has no block after index {last} for y_{i}",
                    n + 1
                )));
            };
            used.push(next[n]);
            next[n] += 1;
            last = b.max_index().unwrap();
            parts.push(b.scale_p(&pow(&q(1, 2), (n as u32 + 1) * p)));
        }
        let v = C00Vector::disjoint_sum(p, &parts)?;
        let n = norm_p(&v, space)?;
        blocks.push(v.scale_p(&(Q::one() / &n)));
        raw_norms.push(n);
        picks.push(used);
    }
    Ok(BuiltY {
        y: BlockSeq::normalized(blocks)?,
        raw_norms,
        picks,
    })
}

/// `(norm_p(sum a_i x_i), norm_p(sum a_i y_i))` per probe, in the given spaces.
pub fn operator_ratios(
    y: &BlockSeq,
    x: &BlockSeq,
    probes: &[C00Vector],
    y_space: &SpaceSpec,
    x_space: &SpaceSpec,
) -> Result<Vec<(Q, Q)>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    probes
        .iter()
        .map(|a| {
            let nx = match x.combine(a)? {
                v if v.is_empty() => Q::zero(),
                v => norm_p(&v, x_space)?,
            };
            let ny = match y.combine(a)? {
                v if v.is_empty() => Q::zero(),
                v => norm_p(&v, y_space)?,
            };
            Ok((nx, ny))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_basis_of_t_theta_is_exact() {
        let t = SpaceSpec::tsirelson(q(1, 2));
        let seq = BlockSeq::unit_basis(1, 2..=9);
        for m in 0..=2 {
            let r = theta3_min_ratio(&seq, m, &q(1, 2), &t, &Budget::new(m as u64, 150)).unwrap();
            assert_eq!(r.ratio, Q::one());
            assert!(r.passes(&Q::zero(), 1));
        }
    }

    #[test]
    fn mixed_basis_ratio_is_reproducible() {
        let z = SpaceSpec::mixed_decay(1, 3);
        let seq = BlockSeq::unit_basis(1, 1..=8);
        let r = theta3_min_ratio(&seq, 1, &q(1, 2), &z, &Budget::new(4, 120)).unwrap();
        assert!(r.ratio <= Q::one());
        let t = SpaceSpec::tsirelson(q(1, 2));
        let num = norm_p(&seq.combine(&r.coeffs).unwrap(), &z).unwrap();
        assert_eq!(num / norm_p(&r.coeffs, &t).unwrap(), r.ratio);
    }

    #[test]
    fn blockseq_checks() {
        let t = SpaceSpec::tsirelson(q(1, 2));
        let seq = BlockSeq::new(vec![C00Vector::ones(1, 2..4), C00Vector::ones(1, 4..8)], &t).unwrap();
        assert_eq!(seq.r, 1);
        assert!(seq.blocks().iter().all(|b| norm_p(b, &t).unwrap() == Q::one()));
        assert!(BlockSeq::new(vec![C00Vector::ones(1, 2..5), C00Vector::ones(1, 4..8)], &t).is_err());
    }

    #[test]
    fn single_family_halves() {
        let t = SpaceSpec::tsirelson(q(1, 2));
        let fam = BlockSeq::unit_basis(1, 1..=5);
        let built = build_y(&[fam.clone()], &[1, 2, 3, 4, 5], &t).unwrap();
        assert_eq!(built.y, fam);
        assert!(built.raw_norms.iter().all(|n| *n == q(1, 2)));
    }

    #[test]
    fn two_families_interleave() {
        let t = SpaceSpec::tsirelson(q(1, 2));
        let a = BlockSeq::new((0..6).map(|k| C00Vector::ones(1, 2 + 4 * k..4 + 4 * k)).collect(), &t).unwrap();
        let b = BlockSeq::new((0..6).map(|k| C00Vector::ones(1, 4 + 4 * k..6 + 4 * k)).collect(), &t).unwrap();
        let built = build_y(&[a, b], &[1, 2, 3], &t).unwrap();
        assert_eq!(built.y.len(), 3);
        for (k, n) in built.raw_norms.iter().enumerate() {
            assert!(*n >= q(1, 2) && *n <= Q::one(), "y_{k}: {n}");
        }
        assert_eq!(built.picks, vec![vec![0], vec![1, 1], vec![2, 2]]);
        let overlap = BlockSeq::unit_basis(1, 1..=4);
        assert!(matches!(
            build_y(&[overlap.clone(), overlap], &[1, 2, 3], &t),
            Err(Error::CannotInterleave(_))
        ));
    }

    #[test]
    fn ratios_symmetry_and_units() {
        let t = SpaceSpec::tsirelson(q(1, 2));
        let z = SpaceSpec::mixed_decay(1, 3);
        let x = BlockSeq::new((0..5).map(|k| C00Vector::ones(1, 2 + 3 * k..5 + 3 * k)).collect(), &z).unwrap();
        let y = BlockSeq::unit_basis(1, 3..=7);
        let probes = vec![C00Vector::unit(1, 2), C00Vector::ones(1, 1..=5), C00Vector::ones(1, [1, 3, 4])];
        let fwd = operator_ratios(&y, &x, &probes, &t, &z).unwrap();
        let back = operator_ratios(&x, &y, &probes, &z, &t).unwrap();
        for ((a, b), (c, d)) in fwd.iter().zip(&back) {
            assert_eq!((a, b), (d, c));
        }
        assert_eq!(fwd[0], (Q::one(), Q::one()));
        let same = operator_ratios(&y, &y, &probes, &t, &t).unwrap();
        assert!(same.iter().all(|(a, b)| a == b));
        assert!(matches!(
            operator_ratios(&y, &BlockSeq::unit_basis(1, 1..=3), &probes, &t, &t),
            Err(Error::LengthMismatch(3, 5))
        ));
    }
}
