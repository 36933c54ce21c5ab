//! Exact feasibility of small linear systems over the rationals.
//!
//! A single entry point answers "is there a rational vector y with
//! a·y ≥ c for every given pair (a, c)?" by a phase-one simplex with
//! Bland's rule on arbitrary-precision rationals. Every cone question in
//! the lattice layer (positive transversal directions, implicit equalities,
//! whether a stratum meets the variety) reduces to this, with strict
//! inequalities encoded as `≥ 1` thanks to scale invariance.

use crate::{rat, Rat};
use num::{Signed, Zero};

/// One constraint `coeffs · y >= bound` on a free rational vector `y`.
pub type Constraint = (Vec<Rat>, Rat);

/// Find any rational point satisfying all constraints, or `None` if the
/// system is infeasible. `n_vars` is the length of `y`; every constraint's
/// coefficient vector must have that length.
pub fn feasible_point(n_vars: usize, constraints: &[Constraint]) -> Option<Vec<Rat>> {
    let m = constraints.len();
    if m == 0 {
        return Some(vec![Rat::zero(); n_vars]);
    }
    // Free y splits as u − v with u, v ≥ 0; each constraint gets a slack
    // a·u − a·v − s = c and an artificial variable to start from. Rows are
    // sign-flipped so every right-hand side is nonnegative.
    let slack0 = 2 * n_vars;
    let art0 = slack0 + m;
    let ncols = art0 + m;
    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for (i, (coeffs, bound)) in constraints.iter().enumerate() {
        assert_eq!(coeffs.len(), n_vars, "constraint arity mismatch");
        let mut row = vec![Rat::zero(); ncols + 1];
        for (j, a) in coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[n_vars + j] = -a.clone();
        }
        row[slack0 + i] = -rat(1);
        row[ncols] = bound.clone();
        if row[ncols].is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[art0 + i] = rat(1);
        tab.push(row);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| art0 + i).collect();

    // Phase one: minimize the sum of artificials. Bland's rule (smallest
    // eligible index in, smallest basic variable out) guarantees termination.
    loop {
        let mut entering = None;
        for j in 0..ncols {
            let mut reduced = if j >= art0 { rat(1) } else { Rat::zero() };
            for i in 0..m {
                if basis[i] >= art0 {
                    reduced -= &tab[i][j];
                }
            }
            if reduced.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if tab[i][e].is_positive() {
                let ratio = &tab[i][ncols] / &tab[i][e];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => {
                        ratio < *best || (ratio == *best && basis[i] < basis[*l])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (l, _) = leave.expect("phase-one objective is bounded below");
        pivot(&mut tab, &mut basis, l, e);
    }

    let mut residue = Rat::zero();
    for i in 0..m {
        if basis[i] >= art0 {
            residue += &tab[i][ncols];
        }
    }
    if !residue.is_zero() {
        return None;
    }
    let mut y = vec![Rat::zero(); n_vars];
    for i in 0..m {
        let b = basis[i];
        if b < n_vars {
            y[b] += &tab[i][ncols];
        } else if b < slack0 {
            y[b - n_vars] -= &tab[i][ncols];
        }
    }
    Some(y)
}

fn pivot(tab: &mut [Vec<Rat>], basis: &mut [usize], l: usize, e: usize) {
    let p = tab[l][e].clone();
    for x in tab[l].iter_mut() {
        *x /= &p;
    }
    let pivot_row = tab[l].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i != l && !row[e].is_zero() {
            let f = row[e].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    basis[l] = e;
}
