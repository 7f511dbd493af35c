use std::collections::HashMap;

use num::Zero;

use super::space::SpaceSpec;
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::schreier::schreier_member;
use crate::vector::C00Vector;

pub const BRUTE_WIDTH: usize = 12;

/// Exhaustive maximum over partition trees of depth at most `depth` whose
/// pieces are arbitrary successive subsets of the support.
pub fn brute_norm_p(x: &C00Vector, space: &SpaceSpec, depth: usize) -> Result<Q> {
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    if x.len() > BRUTE_WIDTH {
        return Err(Error::WindowTooLarge(format!(
            "brute force over {} positions exceeds {BRUTE_WIDTH}",
            x.len()
        )));
    }
    if space.is_lp() {
        return Ok(x.sum_p());
    }
    let mut b = Brute {
        idx: x.indices(),
        w: x.mags(),
        space,
        memo: HashMap::new(),
    };
    let full = (1u32 << x.len()) - 1;
    Ok(b.value(full, depth))
}

struct Brute<'a> {
    idx: Vec<usize>,
    w: Vec<Q>,
    space: &'a SpaceSpec,
    memo: HashMap<(u32, usize), Q>,
}

impl Brute<'_> {
    fn value(&mut self, mask: u32, depth: usize) -> Q {
        if let Some(v) = self.memo.get(&(mask, depth)) {
            return v.clone();
        }
        let pos: Vec<usize> = (0..self.idx.len()).filter(|k| mask >> k & 1 == 1).collect();
        let mut best = pos.iter().map(|&k| self.w[k].clone()).max().unwrap_or_else(Q::zero);
        if depth > 0 && pos.len() >= 2 {
            for &k in &pos {
                let v = self.value(mask & !(1 << k), depth);
                if v > best {
                    best = v;
                }
            }
            // Cut masks: bit r set means a new piece starts at pos[r + 1].
            let cuts = pos.len() - 1;
            let pairs: Vec<(usize, Q)> = self.space.pairs().to_vec();
            for cut in 1u32..(1 << cuts) {
                let mut pieces: Vec<u32> = Vec::new();
                let mut cur = 1u32 << pos[0];
                for r in 0..cuts {
                    if cut >> r & 1 == 1 {
                        pieces.push(cur);
                        cur = 0;
                    }
                    cur |= 1 << pos[r + 1];
                }
                pieces.push(cur);
                let minima: Vec<usize> = pieces
                    .iter()
                    .map(|pc| self.idx[pc.trailing_zeros() as usize])
                    .collect();
                let mut sum: Option<Q> = None;
                for (n, theta) in &pairs {
                    if !schreier_member(&minima, *n) {
                        continue;
                    }
                    let s = match &sum {
                        Some(s) => s.clone(),
                        None => {
                            let mut s = Q::zero();
                            for pc in &pieces {
                                s += self.value(*pc, depth - 1);
                            }
                            sum = Some(s.clone());
                            s
                        }
                    };
                    let v = theta * s;
                    if v > best {
                        best = v;
                    }
                }
            }
        }
        self.memo.insert((mask, depth), best.clone());
        best
    }
}
