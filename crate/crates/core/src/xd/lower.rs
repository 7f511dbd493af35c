use num::{Signed, Zero};

use super::DSpaceParams;
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::schreier::SchreierAutomaton;
use crate::vector::C00Vector;

/// Support size accepted by [`norm_d_lower`].
pub const LOWER_WIDTH: usize = 14;

/// `sup f(x)` over the weighted-rule functionals of depth `<= depth` on the
/// support of `x`, without building them.
///
/// With `p = 1` the best weights are `+-g`, `g` the largest grid magnitude, so a
/// node of character `n` contributes `theta_n * g * sum |f_i(x)|` and pieces can
/// be taken as runs of the support between the chosen minima. Special
/// functionals are left out, so this is a lower bound on `||x||_D`.
pub fn norm_d_lower(x: &C00Vector, params: &DSpaceParams, depth: usize) -> Result<Q> {
    if x.p() != 1 {
        return Err(Error::Unsupported("the norming set is built for p = 1 only".into()));
    }
    let idx = x.indices();
    let m = idx.len();
    if m == 0 {
        return Ok(Q::zero());
    }
    if m > LOWER_WIDTH {
        return Err(Error::WindowTooLarge(format!("{m} positions")));
    }
    let mags = x.mags();
    let g = params.gamma_grid.iter().map(|v| v.abs()).max().unwrap_or_else(Q::zero);
    let mut leaf = vec![vec![Q::zero(); m]; m];
    for a in 0..m {
        let mut best = Q::zero();
        for b in a..m {
            if mags[b] > best {
                best = mags[b].clone();
            }
            leaf[a][b] = best.clone();
        }
    }
    let mut v = leaf.clone();
    for _ in 0..depth {
        let prev = v.clone();
        for a in 0..m {
            for b in a..m {
                let mut best = leaf[a][b].clone();
                for (n, theta) in &params.weights {
                    let mut top = Q::zero();
                    for start in a..=b {
                        let mut auto = SchreierAutomaton::new(*n);
                        auto.push(idx[start]);
                        let s = pieces(&prev, &idx, start, b, auto);
                        if s > top {
                            top = s;
                        }
                    }
                    let val = theta * &g * top;
                    if val > best {
                        best = val;
                    }
                }
                v[a][b] = best;
            }
        }
    }
    Ok(v[0][m - 1].clone())
}

/// Best sum of `prev` over runs `[m_j, m_(j+1) - 1]`, the first run starting at `start`
/// and the last ending at `b`, with the minima accepted by the automaton.
fn pieces(prev: &[Vec<Q>], idx: &[usize], start: usize, b: usize, auto: SchreierAutomaton) -> Q {
    let mut best = prev[start][b].clone();
    for next in start + 1..=b {
        let mut a = auto.clone();
        if !a.push(idx[next]) {
            continue;
        }
        let s = &prev[start][next - 1] + pieces(prev, idx, next, b, a);
        if s > best {
            best = s;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::norm_p;
    use crate::rational::q;
    use crate::xd::{build_d, norm_d_bounds, DEFAULT_CAP};

    #[test]
    fn matches_materialized_build() {
        let d = DSpaceParams::preset();
        let mut set = build_d(&d, 4, 2, DEFAULT_CAP).unwrap();
        let vs = [
            C00Vector::from_coeffs(1, [(1, q(1, 1)), (2, q(-1, 2)), (3, q(3, 4)), (4, q(1, 4))]),
            C00Vector::ones(1, 2..=4),
            C00Vector::from_coeffs(1, [(2, q(1, 3)), (4, q(-2, 3))]),
        ];
        for x in &vs {
            let (lo, _) = norm_d_bounds(x, &mut set).unwrap();
            assert_eq!(norm_d_lower(x, &d, 2).unwrap(), lo);
        }
    }

    #[test]
    fn deep_value_is_the_z_norm() {
        let d = DSpaceParams::preset();
        let x = C00Vector::from_coeffs(1, [(3, q(1, 2)), (4, q(1, 1)), (5, q(-1, 4)), (6, q(1, 1)), (8, q(3, 4))]);
        assert_eq!(norm_d_lower(&x, &d, 6).unwrap(), norm_p(&x, &d.z_space()).unwrap());
        assert!(norm_d_lower(&x, &d, 1).unwrap() <= norm_d_lower(&x, &d, 2).unwrap());
    }
}
