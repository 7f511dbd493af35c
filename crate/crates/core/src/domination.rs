//! Finite checks of strong domination between unit vector bases.

use num::{One, Zero};

use crate::budget::{random_vector, Budget};
use crate::error::{Error, Result};
use crate::norms::{norm_p, restriction_max, SpaceSpec};
use crate::rational::{pow, q, root_sum_pow_bounds, Q};
use crate::schreier::FamilyDescriptor;
use crate::specialvec::{averages_len, flatten, repeated_averages};
use crate::vector::C00Vector;

#[derive(Clone, Debug)]
pub struct DeltaStar {
    /// `norm_p` of the witness in X; a lower bound on the truncated `Delta_n^p`.
    pub lower: Q,
    pub witness: C00Vector,
    pub candidates: usize,
}

/// Witness search for `Delta_n = sup { ||a||_X : max_(F in F_n) ||a|F||_Y <= 2^-n, ||a||_Y <= 1 }`.
///
/// Each candidate shape is scaled to the largest multiple meeting both
/// constraints exactly. Shapes: unit vectors, intervals, repeated averages,
/// flattened vectors, then seeded random vectors, all inside `1..=dim`.
pub fn delta_star_estimate(
    x_space: &SpaceSpec,
    y_space: &SpaceSpec,
    family: &FamilyDescriptor,
    n: usize,
    dim: usize,
    budget: &Budget,
) -> Result<DeltaStar> {
    let p = y_space.p();
    if x_space.p() != p {
        return Err(Error::InvalidSpace("spaces must share p".into()));
    }
    let cap = pow(&q(1, 2), n as u32 * p);
    let mut meter = budget.meter();
    let mut best: Option<DeltaStar> = None;
    let mut consider = |v: C00Vector, used: usize| -> Result<()> {
        let r = match restriction_max(&v, family, y_space) {
            Ok(r) => r,
            Err(Error::WindowTooLarge(_)) => return Ok(()),
            Err(e) => return Err(e),
        };
        let ny = norm_p(&v, y_space)?;
        let s1 = &cap / r;
        let s2 = Q::one() / ny;
        let s = if s1 < s2 { s1 } else { s2 };
        let w = v.scale_p(&s);
        let value = norm_p(&w, x_space)?;
        if best.as_ref().map_or(true, |b| value > b.lower) {
            best = Some(DeltaStar {
                lower: value,
                witness: w,
                candidates: used,
            });
        }
        Ok(())
    };

    let mut shapes: Vec<C00Vector> = Vec::new();
    for i in 1..=dim {
        shapes.push(C00Vector::unit(p, i));
    }
    for len in 2..=dim {
        for s in 1..=dim + 1 - len {
            shapes.push(C00Vector::ones(p, s..s + len));
        }
    }
    for level in 1..=2 {
        for s in 1..=dim {
            if averages_len(level, s).saturating_add(s - 1) <= dim {
                let b = repeated_averages(level, s);
                shapes.push(C00Vector::from_mags(p, b.iter().map(|(i, e)| (i, e.mag.clone()))));
            }
        }
    }
    if let FamilyDescriptor::Schreier(beta) = family {
        let fb = Budget { max_support: dim, ..budget.clone() };
        if let Ok(f) = flatten(y_space, *beta, &q(1, 2), &fb) {
            shapes.push(f.w);
        }
    }
    for v in shapes {
        if !meter.take() {
            break;
        }
        consider(v, meter.used())?;
    }
    let mut rng = budget.rng();
    while dim > 0 && meter.take() {
        let v = random_vector(&mut rng, p, 1, dim.min(16));
        consider(v, meter.used())?;
    }
    let mut out = best.ok_or(Error::Infeasible)?;
    out.candidates = meter.used();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Triangle {
    pub holds: bool,
    /// `norm_p(a)` in X.
    pub lhs: Q,
    /// `max_n 2^(-np) * max_(n <= F in F_n) norm_p(a|F)` in Y, over the listed `n` only.
    pub rhs: Q,
}

/// Compares both sides of the truncated domination inequality in p-power form.
pub fn triangle_holds(
    a: &C00Vector,
    x_space: &SpaceSpec,
    y_space: &SpaceSpec,
    families: &[(usize, FamilyDescriptor)],
) -> Result<Triangle> {
    let p = y_space.p();
    let lhs = if a.is_empty() { Q::zero() } else { norm_p(a, x_space)? };
    let mut rhs = Q::zero();
    for (n, fam) in families {
        let tail = a.restrict(|i| i >= *n);
        let v = pow(&q(1, 2), *n as u32 * p) * restriction_max(&tail, fam, y_space)?;
        if v > rhs {
            rhs = v;
        }
    }
    Ok(Triangle {
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TsiViolation {
    pub sample: usize,
    /// `"i"`: `||a||_Z <= ||a||_T`; `"ii"`: the restriction-plus-gap bound.
    pub inequality: &'static str,
    pub lhs: Q,
    pub rhs: Q,
}

#[derive(Clone, Debug)]
pub struct TsiReport {
    pub n: usize,
    pub gap: Q,
    pub checked: usize,
    pub violations: Vec<TsiViolation>,
}

impl TsiReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `max` over listed `l >= n` of `theta_l / theta^l`; zero when none is listed.
pub fn gap(pairs: &[(usize, Q)], theta: &Q, n: usize) -> Q {
    pairs
        .iter()
        .filter(|(l, _)| *l >= n)
        .map(|(l, t)| t / pow(theta, *l as u32))
        .max()
        .unwrap_or_else(Q::zero)
}

/// Checks, for `Z = T[(S_l, theta_l)]` and `T = T[S_1, theta]`, on every sample:
/// (i) `N_Z(a) <= N_T(a)` and
/// (ii) `||a||_Z <= ||a restricted to the best S_n set||_T + gap_n^(1/p) ||a||_T`.
///
/// All quantities are p-powers; (ii) is decided exactly when `N_Z <= R + gap * N_T`,
/// otherwise with outward-rounded roots.
pub fn tsistar_check(pairs: &[(usize, Q)], theta: &Q, n: usize, sample: &[C00Vector]) -> Result<TsiReport> {
    for (l, t) in pairs {
        if *t > pow(theta, *l as u32) {
            return Err(Error::PreconditionFailed(format!("theta_{l} exceeds theta^{l}")));
        }
    }
    let p = sample.first().map_or(1, C00Vector::p);
    let z = SpaceSpec::new(p, pairs.to_vec(), true)?;
    let t = SpaceSpec::single(p, 1, theta.clone())?;
    let g = gap(pairs, theta, n);
    let fam = FamilyDescriptor::Schreier(n);
    let mut violations = Vec::new();
    for (k, a) in sample.iter().enumerate() {
        if a.is_empty() {
            continue;
        }
        let nz = norm_p(a, &z)?;
        let nt = norm_p(a, &t)?;
        if nz > nt {
            violations.push(TsiViolation {
                sample: k,
                inequality: "i",
                lhs: nz.clone(),
                rhs: nt.clone(),
            });
        }
        let r = restriction_max(a, &fam, &t)?;
        let gn = &g * &nt;
        if nz > &r + &gn {
            let (lo, _) = root_sum_pow_bounds(&[r, gn], p, 128);
            if nz > lo {
                violations.push(TsiViolation {
                    sample: k,
                    inequality: "ii",
                    lhs: nz,
                    rhs: lo,
                });
            }
        }
    }
    Ok(TsiReport {
        n,
        gap: g,
        checked: sample.len(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::decay_pairs;

    #[test]
    fn gap_is_reciprocal() {
        let pairs = decay_pairs(8);
        for n in 1..=8 {
            assert_eq!(gap(&pairs, &q(1, 2), n), q(1, n as i64 + 1));
        }
        assert_eq!(gap(&pairs, &q(1, 2), 9), Q::zero());
    }

    #[test]
    fn tsistar_on_random_vectors() {
        let mut rng = Budget::new(5, 0).rng();
        let sample: Vec<_> = (0..60).map(|_| random_vector(&mut rng, 1, 1, 9)).collect();
        for n in 0..=3 {
            let rep = tsistar_check(&decay_pairs(5), &q(1, 2), n, &sample).unwrap();
            assert!(rep.passed(), "{:?}", rep.violations);
        }
        let same = tsistar_check(&[(1, q(1, 2))], &q(1, 2), 1, &sample).unwrap();
        assert!(same.passed());
        assert!(tsistar_check(&[(2, q(1, 3))], &q(1, 2), 1, &sample).is_err());
    }

    #[test]
    fn tsistar_p2() {
        let mut rng = Budget::new(6, 0).rng();
        let sample: Vec<_> = (0..30).map(|_| random_vector(&mut rng, 2, 1, 8)).collect();
        let rep = tsistar_check(&decay_pairs(4), &q(1, 2), 2, &sample).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn triangle_examples() {
        let t = SpaceSpec::tsirelson(q(1, 2));
        let e = C00Vector::unit(1, 3);
        let tr = triangle_holds(&e, &t, &t, &[(0, FamilyDescriptor::Schreier(0))]).unwrap();
        assert_eq!((tr.holds, tr.lhs.clone(), tr.rhs.clone()), (true, q(1, 1), q(1, 1)));
        let x = SpaceSpec::mixed_decay(1, 3);
        let fams: Vec<_> = (1..=3).map(|n| (n, FamilyDescriptor::Schreier(n))).collect();
        let a = C00Vector::ones(1, 1..4);
        let tr = triangle_holds(&a, &x, &t, &fams).unwrap();
        assert!(!tr.holds);
        assert_eq!(tr.lhs, norm_p(&a, &x).unwrap());
    }

    #[test]
    fn delta_star_witness_reverifies() {
        let t = SpaceSpec::tsirelson(q(1, 2));
        let x = SpaceSpec::single(1, 1, q(1, 4)).unwrap();
        let fam = FamilyDescriptor::Schreier(1);
        let d = delta_star_estimate(&x, &t, &fam, 1, 32, &Budget::new(1, 600)).unwrap();
        assert!(restriction_max(&d.witness, &fam, &t).unwrap() <= q(1, 2));
        assert!(norm_p(&d.witness, &t).unwrap() <= q(1, 1));
        assert_eq!(norm_p(&d.witness, &x).unwrap(), d.lower);
        let same = delta_star_estimate(&t, &t, &fam, 1, 12, &Budget::new(1, 200)).unwrap();
        assert!(same.lower <= q(1, 1));
        let small = delta_star_estimate(&t, &t, &fam, 1, 12, &Budget::new(1, 50)).unwrap();
        assert!(small.lower <= same.lower);
        assert!(matches!(
            delta_star_estimate(&t, &t, &fam, 1, 0, &Budget::new(1, 50)),
            Err(Error::Infeasible)
        ));
    }
}
