use std::collections::BTreeMap;

use num::Zero;

use super::{dfs_members, member, schreier_member, FamilyDescriptor, FinSet, DEFAULT_WINDOW};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::vector::C00Vector;

/// Largest support handled by the interval recursion for `S_k`, `k >= 2`.
pub const MASS_DP_LIMIT: usize = 96;

/// `max_{F in family} sum_{i in F} m_i` over the stored magnitudes `m_i = |a_i|^p`.
pub fn family_mass(coeffs: &C00Vector, family: &FamilyDescriptor) -> Result<Q> {
    mass_of_weights(&coeffs.indices(), &coeffs.mags(), family)
}

/// Same as [`family_mass`] on parallel slices; `indices` strictly increasing, weights nonnegative.
pub fn mass_of_weights(indices: &[usize], weights: &[Q], family: &FamilyDescriptor) -> Result<Q> {
    assert_eq!(indices.len(), weights.len());
    if indices.is_empty() {
        return Ok(Q::zero());
    }
    match family {
        FamilyDescriptor::Schreier(0) => Ok(weights.iter().max().cloned().unwrap()),
        FamilyDescriptor::Schreier(1) => Ok(mass_s1(indices, weights)),
        FamilyDescriptor::Schreier(k) => mass_sk(indices, weights, *k),
        FamilyDescriptor::SchreierOmega => mass_omega(indices, weights),
        _ => mass_by_enumeration(indices, weights, family),
    }
}

/// For each candidate minimum, the best `S_1` set takes it together with the
/// `index - 1` largest later weights.
fn mass_s1(indices: &[usize], weights: &[Q]) -> Q {
    let m = indices.len();
    if weights.windows(2).all(|w| w[0] >= w[1]) {
        let mut prefix = vec![Q::zero(); m + 1];
        for k in 0..m {
            prefix[k + 1] = &prefix[k] + &weights[k];
        }
        return (0..m)
            .map(|p| {
                let end = (p + indices[p]).min(m);
                &prefix[end] - &prefix[p]
            })
            .max()
            .unwrap();
    }
    // Right-to-left sweep; `top` holds the largest weights after the current position.
    let mut top: BTreeMap<Q, usize> = BTreeMap::new();
    let mut top_len = 0usize;
    let mut top_sum = Q::zero();
    let mut best = Q::zero();
    for p in (0..m).rev() {
        let room = indices[p] - 1;
        while top_len > room {
            let (key, _) = top.iter().next().map(|(k, c)| (k.clone(), *c)).unwrap();
            top_sum -= &key;
            top_len -= 1;
            let c = top.get_mut(&key).unwrap();
            *c -= 1;
            if *c == 0 {
                top.remove(&key);
            }
        }
        let here = &weights[p] + &top_sum;
        if here > best {
            best = here;
        }
        if room > 0 {
            *top.entry(weights[p].clone()).or_insert(0) += 1;
            top_sum += &weights[p];
            top_len += 1;
            if top_len > room {
                let key = top.keys().next().cloned().unwrap();
                top_sum -= &key;
                top_len -= 1;
                let c = top.get_mut(&key).unwrap();
                *c -= 1;
                if *c == 0 {
                    top.remove(&key);
                }
            }
        }
    }
    best
}

/// Interval recursion: `A_j[a][b]` is the best `S_j` mass inside positions `a..=b`.
/// A set in `S_j` starting at position `p` splits into at most `indices[p]`
/// successive `S_(j-1)` pieces, each confined to an interval.
fn mass_sk(indices: &[usize], weights: &[Q], k: usize) -> Result<Q> {
    let m = indices.len();
    if schreier_member(indices, k) {
        return Ok(weights.iter().fold(Q::zero(), |a, b| a + b));
    }
    if m > MASS_DP_LIMIT {
        return Err(Error::WindowTooLarge(format!(
            "S_{k} mass over {m} positions exceeds {MASS_DP_LIMIT}"
        )));
    }
    let at = |a: usize, b: usize| a * m + b;
    let mut prev = vec![Q::zero(); m * m];
    for a in 0..m {
        let mut best = weights[a].clone();
        for b in a..m {
            if weights[b] > best {
                best = weights[b].clone();
            }
            prev[at(a, b)] = best.clone();
        }
    }
    for _level in 1..=k {
        // parts[c-1][at(a,b)]: best split of a..=b into at most c intervals of `prev`.
        let mut parts: Vec<Vec<Q>> = vec![prev.clone()];
        let max_c = indices.iter().copied().max().unwrap().min(m);
        for c in 2..=max_c {
            let last = &parts[c - 2];
            let mut cur = last.clone();
            for a in 0..m {
                for b in a + 1..m {
                    let mut best = cur[at(a, b)].clone();
                    for q in a + 1..=b {
                        let v = &prev[at(a, q - 1)] + &last[at(q, b)];
                        if v > best {
                            best = v;
                        }
                    }
                    cur[at(a, b)] = best;
                }
            }
            parts.push(cur);
        }
        let mut next = vec![Q::zero(); m * m];
        for b in 0..m {
            for a in (0..=b).rev() {
                let c = indices[a].min(max_c);
                let mut v = parts[c - 1][at(a, b)].clone();
                if a < b && next[at(a + 1, b)] > v {
                    v = next[at(a + 1, b)].clone();
                }
                next[at(a, b)] = v;
            }
        }
        prev = next;
    }
    Ok(prev[at(0, m - 1)].clone())
}

fn mass_omega(indices: &[usize], weights: &[Q]) -> Result<Q> {
    let mut best = Q::zero();
    for p in 0..indices.len() {
        let v = mass_of_weights(
            &indices[p..],
            &weights[p..],
            &FamilyDescriptor::Schreier(indices[p]),
        )?;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

fn mass_by_enumeration(indices: &[usize], weights: &[Q], family: &FamilyDescriptor) -> Result<Q> {
    if indices.len() > DEFAULT_WINDOW {
        return Err(Error::WindowTooLarge(format!(
            "{} support positions for member enumeration",
            indices.len()
        )));
    }
    let pos: BTreeMap<usize, usize> = indices.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut best = Q::zero();
    let mut current = Vec::new();
    dfs_members(family, indices, 0, &mut current, &mut |f| {
        let s: Q = f.iter().fold(Q::zero(), |a, i| a + &weights[pos[i]]);
        if s > best {
            best = s;
        }
        true
    })?;
    debug_assert!(member(&FinSet::empty(), family));
    Ok(best)
}
