//! Interval dynamic program for `N(x) = ||x||^p`.
//!
//! Work on the support positions `0..m` with absolute indices `s[a]`. For an
//! interval `[a, b]`:
//!
//! * `G'_n[a][b]`: best sum of norms over `S_n`-admissible partitions of
//!   `[a, b]` into at least two successive intervals, the first starting at `a`;
//! * `G_n = max(N, G'_n)` also admits the single piece, `G_0 = N`;
//! * `H_n^(c)[a][b]`: best split of `[a, b]` into at most `c` consecutive groups,
//!   each an `S_(n-1)` partition valued by `G_(n-1)`;
//! * `N[a][b] = max(max w, max_n theta_n * max_(a <= p <= b) G'_n[p][b])`.
//!
//! `S_n` partitions are `S_1` groupings of `S_(n-1)` partitions, and a group
//! count is bounded by the index where the first group starts.

use num::Zero;

use super::certificate::NormCertificate;
use super::space::SpaceSpec;
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::schreier::schreier_member;
use crate::vector::C00Vector;

/// Largest support evaluated exactly by default.
pub const ENGINE_LIMIT: usize = 128;

pub fn norm_p(x: &C00Vector, space: &SpaceSpec) -> Result<Q> {
    check_inputs(x, space)?;
    if space.is_lp() {
        return Ok(x.sum_p());
    }
    Ok(NormTable::build(x, space, ENGINE_LIMIT)?.value())
}

pub fn norm_p_with_limit(x: &C00Vector, space: &SpaceSpec, limit: usize) -> Result<Q> {
    check_inputs(x, space)?;
    if space.is_lp() {
        return Ok(x.sum_p());
    }
    Ok(NormTable::build(x, space, limit)?.value())
}

pub fn norm_certificate(x: &C00Vector, space: &SpaceSpec) -> Result<NormCertificate> {
    check_inputs(x, space)?;
    if space.is_lp() {
        return Err(Error::Unsupported(
            "the l_p shortcut has no partition-tree certificate".into(),
        ));
    }
    Ok(NormTable::build(x, space, ENGINE_LIMIT)?.certificate())
}

fn check_inputs(x: &C00Vector, space: &SpaceSpec) -> Result<()> {
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    if x.p() != space.p() {
        return Err(Error::InvalidSpace(format!(
            "vector has p = {}, space has p = {}",
            x.p(),
            space.p()
        )));
    }
    Ok(())
}

fn max_opt(a: Option<Q>, b: Option<Q>) -> Option<Q> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x >= y { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}

pub struct NormTable {
    idx: Vec<usize>,
    w: Vec<Q>,
    signs: Vec<i8>,
    m: usize,
    /// `(character, level used, theta)`.
    chars: Vec<(usize, usize, Q)>,
    levels: usize,
    maxw: Vec<Q>,
    n: Vec<Q>,
    /// `gp[n-1]`, levels `1..=levels`.
    gp: Vec<Vec<Option<Q>>>,
    tail: Vec<Vec<Option<Q>>>,
    /// `h[n-1][at(a,b)][c-1]` for `c = 1..=b-a+1`.
    h: Vec<Vec<Vec<Q>>>,
}

impl NormTable {
    pub fn build(x: &C00Vector, space: &SpaceSpec, limit: usize) -> Result<Self> {
        let idx = x.indices();
        let m = idx.len();
        if m > limit {
            return Err(Error::TooLarge(m, limit));
        }
        let w = x.mags();
        let signs = x.iter().map(|(_, e)| e.sign).collect();
        // Once the support minus index 1 lies in S_j, every higher level sees
        // the same admissible sets on this support.
        let rest: Vec<usize> = idx.iter().copied().filter(|&i| i > 1).collect();
        let top = space.max_character();
        let stable = (0..=top).find(|&j| schreier_member(&rest, j)).unwrap_or(top);
        let levels = top.min(stable.max(1));
        let chars = space
            .pairs()
            .iter()
            .map(|(n, t)| (*n, (*n).min(levels), t.clone()))
            .collect();
        let mut t = NormTable {
            idx,
            w,
            signs,
            m,
            chars,
            levels,
            maxw: vec![Q::zero(); m * m],
            n: vec![Q::zero(); m * m],
            gp: vec![vec![None; m * m]; levels],
            tail: vec![vec![None; m * m]; levels],
            h: vec![vec![Vec::new(); m * m]; levels],
        };
        t.fill();
        Ok(t)
    }

    fn at(&self, a: usize, b: usize) -> usize {
        a * self.m + b
    }

    /// `G_j[a][b]`.
    fn g(&self, j: usize, a: usize, b: usize) -> Q {
        let k = self.at(a, b);
        if j == 0 {
            return self.n[k].clone();
        }
        match &self.gp[j - 1][k] {
            Some(v) if *v > self.n[k] => v.clone(),
            _ => self.n[k].clone(),
        }
    }

    /// `H_n^(c)[a][b]` with `c` capped by the interval length.
    fn hv(&self, n: usize, c: usize, a: usize, b: usize) -> &Q {
        let cell = &self.h[n - 1][self.at(a, b)];
        &cell[c.min(cell.len()) - 1]
    }

    fn fill(&mut self) {
        let m = self.m;
        for len in 1..=m {
            for a in 0..=m - len {
                let b = a + len - 1;
                let k = self.at(a, b);
                self.maxw[k] = if len == 1 {
                    self.w[a].clone()
                } else {
                    let r = &self.maxw[self.at(a + 1, b)];
                    if *r > self.w[a] {
                        r.clone()
                    } else {
                        self.w[a].clone()
                    }
                };
                let c = self.idx[a];
                for n in 1..=self.levels {
                    let mut best = if n >= 2 { self.gp[n - 2][k].clone() } else { None };
                    if c >= 2 {
                        for q in a + 1..=b {
                            let v = self.g(n - 1, a, q - 1) + self.hv(n, c - 1, q, b);
                            best = max_opt(best, Some(v));
                        }
                    }
                    let tail = if a < b {
                        max_opt(best.clone(), self.tail[n - 1][self.at(a + 1, b)].clone())
                    } else {
                        best.clone()
                    };
                    self.gp[n - 1][k] = best;
                    self.tail[n - 1][k] = tail;
                }
                let mut v = self.maxw[k].clone();
                for (_, level, theta) in &self.chars {
                    if let Some(tl) = &self.tail[level - 1][k] {
                        let cand = theta * tl;
                        if cand > v {
                            v = cand;
                        }
                    }
                }
                self.n[k] = v;
                for n in 1..=self.levels {
                    let mut cell: Vec<Q> = Vec::with_capacity(len);
                    cell.push(self.g(n - 1, a, b));
                    for cc in 2..=len {
                        let mut best = cell[cc - 2].clone();
                        for q in a + 1..=b {
                            let v = self.g(n - 1, a, q - 1) + self.hv(n, cc - 1, q, b);
                            if v > best {
                                best = v;
                            }
                        }
                        cell.push(best);
                    }
                    self.h[n - 1][k] = cell;
                }
            }
        }
    }

    pub fn value(&self) -> Q {
        self.n[self.at(0, self.m - 1)].clone()
    }

    /// Exact value on the interval of support positions `a..=b`.
    pub fn interval_value(&self, a: usize, b: usize) -> Q {
        self.n[self.at(a, b)].clone()
    }

    pub fn certificate(&self) -> NormCertificate {
        self.tree(0, self.m - 1)
    }

    fn tree(&self, a: usize, b: usize) -> NormCertificate {
        let k = self.at(a, b);
        let target = &self.n[k];
        for (ch, level, theta) in &self.chars {
            for p in a..=b {
                if let Some(v) = &self.gp[level - 1][self.at(p, b)] {
                    if theta * v == *target {
                        let pieces = self.split_multi(*level, p, b);
                        return NormCertificate::Node {
                            character: *ch,
                            children: pieces.into_iter().map(|(x, y)| self.tree(x, y)).collect(),
                        };
                    }
                }
            }
        }
        // Ties are resolved in favour of nodes; the leaf branch is the fallback.
        debug_assert_eq!(*target, self.maxw[k]);
        let p = (a..=b).find(|&p| self.w[p] == *target).unwrap();
        NormCertificate::Leaf {
            index: self.idx[p],
            sign: self.signs[p],
        }
    }

    fn split_multi(&self, n: usize, a: usize, b: usize) -> Vec<(usize, usize)> {
        let target = self.gp[n - 1][self.at(a, b)].clone().expect("multi-piece value");
        if n >= 2 && self.gp[n - 2][self.at(a, b)].as_ref() == Some(&target) {
            return self.split_multi(n - 1, a, b);
        }
        let c = self.idx[a];
        for q in a + 1..=b {
            if self.g(n - 1, a, q - 1) + self.hv(n, c - 1, q, b) == target {
                let mut out = self.split_g(n - 1, a, q - 1);
                out.extend(self.split_h(n, c - 1, q, b));
                return out;
            }
        }
        unreachable!("multi-piece value not reproduced");
    }

    fn split_g(&self, j: usize, a: usize, b: usize) -> Vec<(usize, usize)> {
        let k = self.at(a, b);
        if j == 0 || self.g(j, a, b) == self.n[k] {
            return vec![(a, b)];
        }
        self.split_multi(j, a, b)
    }

    fn split_h(&self, n: usize, c: usize, a: usize, b: usize) -> Vec<(usize, usize)> {
        let c = c.min(b - a + 1);
        let target = self.hv(n, c, a, b).clone();
        if c == 1 {
            return self.split_g(n - 1, a, b);
        }
        if *self.hv(n, c - 1, a, b) == target {
            return self.split_h(n, c - 1, a, b);
        }
        for q in a + 1..=b {
            if self.g(n - 1, a, q - 1) + self.hv(n, c - 1, q, b) == target {
                let mut out = self.split_g(n - 1, a, q - 1);
                out.extend(self.split_h(n, c - 1, q, b));
                return out;
            }
        }
        unreachable!("grouped value not reproduced");
    }
}
