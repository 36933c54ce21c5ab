//! Saturated integer lattices and transversality against a boundary set.
//!
//! A lattice is a finitely generated subgroup of ℤⁿ kept in canonical
//! Hermite normal form, so module equality is plain equality of bases.
//! Boundary sets are 0-based coordinate index sets. Transversality notions
//! follow the lattice side of the toric dictionary: a lattice is
//! weak-transversal to E when it admits generators that are nonnegative on
//! the E-coordinates, and transversal when in addition it is saturated.

use std::collections::BTreeSet;

use num::integer::Integer;
use thiserror::Error;

use crate::matrix::{self, hnf, left_kernel, snf};
use crate::ratlp::{feasible_point, Constraint};
use crate::{rat, Rat};
use num::{BigInt, One, Zero};

/// Set of boundary coordinate indices (0-based).
pub type Boundary = BTreeSet<usize>;

/// Errors from lattice operations whose preconditions are caller-visible.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice is not saturated: {multiple} * {witness:?} lies in the lattice but the vector itself does not")]
    NotSaturated { witness: Vec<i64>, multiple: i64 },
    #[error("lattice is not weak-transversal to the boundary set")]
    NotWeakTransversal,
    #[error("lattice is not transversal to the boundary set")]
    NotTransversal,
    #[error("kernel projection requires a primitive vector, found content {content}")]
    NotPrimitive { content: i64 },
    #[error("kernel projection requires zero entries from position {from} on")]
    TrailingNotZero { from: usize },
}

/// A finitely generated subgroup of ℤⁿ in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    ambient: usize,
    /// Canonical HNF rows; exactly `rank` rows, none zero.
    basis: Vec<Vec<i64>>,
}

impl Lattice {
    /// The zero lattice in ℤⁿ.
    pub fn zero(ambient: usize) -> Self {
        Lattice {
            ambient,
            basis: Vec::new(),
        }
    }

    /// Lattice generated by the given rows.
    pub fn from_rows(ambient: usize, rows: &[Vec<i64>]) -> Self {
        for row in rows {
            assert_eq!(row.len(), ambient, "generator length mismatch");
        }
        let form = hnf(rows);
        Lattice {
            ambient,
            basis: form.h[..form.rank].to_vec(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Canonical basis rows (HNF, positive pivots).
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Membership of a vector in the lattice.
    pub fn member(&self, v: &[i64]) -> bool {
        self.coefficients(v).is_some()
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the lattice.
    pub fn coefficients(&self, v: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let p = row.iter().position(|&x| x != 0).expect("basis row nonzero");
            let pivot = row[p] as i128;
            if w[p] % pivot != 0 {
                return None;
            }
            let q = w[p] / pivot;
            for (x, &y) in w.iter_mut().zip(row) {
                *x -= q * y as i128;
            }
            coeffs.push(i64::try_from(q).expect("coefficient overflow"));
        }
        if w.iter().all(|&x| x == 0) {
            Some(coeffs)
        } else {
            None
        }
    }

    /// Whether both lattices are the same subgroup of the same ℤⁿ.
    pub fn module_eq(&self, other: &Lattice) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }

    /// Whether `other` is a sublattice of `self`.
    pub fn contains(&self, other: &Lattice) -> bool {
        self.ambient == other.ambient && other.basis.iter().all(|row| self.member(row))
    }

    /// Saturation: the smallest saturated lattice containing this one.
    pub fn saturate(&self) -> Lattice {
        if self.is_zero() {
            return self.clone();
        }
        let form = snf(&self.basis);
        Lattice::from_rows(self.ambient, &form.right_inv[..form.rank])
    }

    /// Whether ℤⁿ modulo this lattice is torsion-free.
    pub fn is_saturated(&self) -> bool {
        self.torsion_witness().is_none()
    }

    /// The Graver basis: every nonzero lattice vector that has no conformal
    /// decomposition, i.e. no nonzero u in the lattice with u_i v_i ≥ 0 and
    /// |u_i| ≤ |v_i| in every coordinate other than v itself. Computed by
    /// Pottier's completion starting from the basis and its negatives,
    /// followed by an inter-reduction pass. The result is closed under
    /// negation and canonical: it depends only on the lattice as a set, not
    /// on the stored basis, so relabeling coordinates relabels the output.
    pub fn graver_basis(&self) -> Vec<Vec<i64>> {
        fn reduces(u: &[i64], v: &[i64]) -> bool {
            u.iter()
                .zip(v)
                .all(|(&a, &b)| a.checked_mul(b).expect("graver overflow") >= 0 && a.abs() <= b.abs())
        }
        fn normal_form(mut s: Vec<i64>, set: &[Vec<i64>]) -> Vec<i64> {
            'outer: loop {
                if s.iter().all(|&x| x == 0) {
                    return s;
                }
                for g in set {
                    if reduces(g, &s) {
                        for (si, gi) in s.iter_mut().zip(g) {
                            *si -= gi;
                        }
                        continue 'outer;
                    }
                }
                return s;
            }
        }
        let mut set: Vec<Vec<i64>> = Vec::new();
        for b in &self.basis {
            set.push(b.clone());
            set.push(b.iter().map(|x| -x).collect());
        }
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for i in 0..set.len() {
            for j in i..set.len() {
                pairs.push((i, j));
            }
        }
        let mut next = 0;
        while next < pairs.len() {
            let (i, j) = pairs[next];
            next += 1;
            let sum: Vec<i64> = set[i]
                .iter()
                .zip(&set[j])
                .map(|(&a, &b)| a.checked_add(b).expect("graver overflow"))
                .collect();
            let s = normal_form(sum, &set);
            if s.iter().all(|&x| x == 0) {
                continue;
            }
            let neg: Vec<i64> = s.iter().map(|x| -x).collect();
            for v in [s, neg] {
                if set.contains(&v) {
                    continue;
                }
                let id = set.len();
                for k in 0..id {
                    pairs.push((k, id));
                }
                pairs.push((id, id));
                set.push(v);
            }
        }
        let mut out: Vec<Vec<i64>> = set
            .iter()
            .filter(|v| {
                !set.iter()
                    .any(|u| u != *v && u.iter().any(|&x| x != 0) && reduces(u, v))
            })
            .cloned()
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// A vector outside the lattice with a nonzero multiple inside it, if the
    /// lattice is not saturated.
    pub fn torsion_witness(&self) -> Option<(Vec<i64>, i64)> {
        if self.is_zero() {
            return None;
        }
        let form = snf(&self.basis);
        for i in 0..form.rank {
            if form.diag[i] != 1 {
                return Some((form.right_inv[i].clone(), form.diag[i]));
            }
        }
        None
    }

    /// The restricted support 𝐄_M: boundary coordinates where the lattice
    /// projects nontrivially.
    pub fn restricted_support(&self, e: &Boundary) -> Boundary {
        e.iter()
            .copied()
            .filter(|&j| self.basis.iter().any(|row| row[j] != 0))
            .collect()
    }

    /// A lattice element strictly positive on the restricted support and
    /// nonnegative on all of `e`, or `None` when no such element exists
    /// (equivalently, the lattice is not weak-transversal to `e`).
    pub fn find_positive_gamma(&self, e: &Boundary) -> Option<Vec<i64>> {
        let em = self.restricted_support(e);
        if em.is_empty() {
            return Some(vec![0; self.ambient]);
        }
        // Parametrize gamma = x * basis over rational x; the constraint set
        // is a cone, so strict positivity can be asked as >= 1 and rational
        // solutions rescale to lattice elements.
        let r = self.rank();
        let constraints: Vec<Constraint> = e
            .iter()
            .map(|&j| {
                let coeffs = (0..r).map(|i| rat(self.basis[i][j])).collect();
                let bound = if em.contains(&j) { rat(1) } else { rat(0) };
                (coeffs, bound)
            })
            .collect();
        let x = feasible_point(r, &constraints)?;
        let denom_lcm = x
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let scale = Rat::from_integer(denom_lcm);
        let scaled: Vec<BigInt> = x.iter().map(|q| (q * &scale).to_integer()).collect();
        let content = scaled
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
            .max(BigInt::one());
        let coeffs: Vec<i64> = scaled
            .iter()
            .map(|c| i64::try_from(c / &content).expect("gamma coefficient overflow"))
            .collect();
        let gamma = matrix::vec_mat(&coeffs, &self.basis);
        debug_assert!(e.iter().all(|&j| gamma[j] >= 0));
        debug_assert!(em.iter().all(|&j| gamma[j] > 0));
        Some(gamma)
    }

    /// Whether the lattice admits a generating set nonnegative on `e`.
    pub fn is_weak_transversal(&self, e: &Boundary) -> bool {
        self.find_positive_gamma(e).is_some()
    }

    /// Transversal = weak-transversal and saturated.
    pub fn is_transversal(&self, e: &Boundary) -> bool {
        self.is_saturated() && self.is_weak_transversal(e)
    }

    /// A generating set lying in ℤⁿ_E (every vector nonnegative on `e`),
    /// led by a positive direction gamma; the remaining generators are
    /// gamma-shifts of a basis completion with minimal shifts.
    pub fn transversal_generators(&self, e: &Boundary) -> Result<Vec<Vec<i64>>, LatticeError> {
        let gamma = self
            .find_positive_gamma(e)
            .ok_or(LatticeError::NotWeakTransversal)?;
        if self.is_zero() {
            return Ok(Vec::new());
        }
        let em = self.restricted_support(e);
        if em.is_empty() {
            // Every lattice element vanishes on e, so the canonical basis
            // already lies in ℤⁿ_E.
            return Ok(self.basis.clone());
        }
        let mut a = self
            .coefficients(&gamma)
            .expect("gamma is a lattice element");
        let content = a.iter().fold(0i64, |acc, &c| acc.gcd(&c));
        if content > 1 {
            for c in a.iter_mut() {
                *c /= content;
            }
        }
        let gamma = matrix::vec_mat(&a, &self.basis);
        // Complete the primitive coefficient vector to a unimodular matrix
        // whose first row is `a`; its rows recombine the basis with gamma
        // in first position.
        let completion = complete_primitive(&a);
        let mut out = Vec::with_capacity(self.rank());
        out.push(gamma.clone());
        for row in completion.iter().skip(1) {
            let g_i = matrix::vec_mat(row, &self.basis);
            let lambda = em
                .iter()
                .map(|&j| {
                    // smallest nonnegative integer with g_i[j] + lambda*gamma[j] >= 0
                    let need = -g_i[j];
                    if need <= 0 {
                        0
                    } else {
                        (need + gamma[j] - 1) / gamma[j]
                    }
                })
                .max()
                .unwrap_or(0);
            let shifted: Vec<i64> = g_i
                .iter()
                .zip(&gamma)
                .map(|(&x, &g)| x + lambda * g)
                .collect();
            out.push(shifted);
        }
        debug_assert!(Lattice::from_rows(self.ambient, &out).module_eq(self));
        debug_assert!(out.iter().all(|v| e.iter().all(|&j| v[j] >= 0)));
        Ok(out)
    }

    /// The maximal sublattice transversal to `e`: the intersection of the
    /// lattice with the vanishing of the implicit equalities of the cone
    /// { x in L⊗ℚ : x_j >= 0 for j in e }.
    pub fn max_transversal_sublattice(&self, e: &Boundary) -> Result<Lattice, LatticeError> {
        if let Some((witness, multiple)) = self.torsion_witness() {
            return Err(LatticeError::NotSaturated { witness, multiple });
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let r = self.rank();
        let cone: Vec<Constraint> = e
            .iter()
            .map(|&j| {
                let coeffs = (0..r).map(|i| rat(self.basis[i][j])).collect();
                (coeffs, Rat::zero())
            })
            .collect();
        let mut implicit = Vec::new();
        for &j in e {
            let mut sys = cone.clone();
            let coeffs = (0..r).map(|i| rat(self.basis[i][j])).collect();
            sys.push((coeffs, rat(1)));
            if feasible_point(r, &sys).is_none() {
                implicit.push(j);
            }
        }
        // Coefficient vectors x with x * basis vanishing on every implicit
        // coordinate form the kernel of the restricted column matrix.
        let restricted: Vec<Vec<i64>> = self
            .basis
            .iter()
            .map(|row| implicit.iter().map(|&j| row[j]).collect())
            .collect();
        let kernel = left_kernel(&restricted);
        let rows: Vec<Vec<i64>> = kernel
            .iter()
            .map(|x| matrix::vec_mat(x, &self.basis))
            .collect();
        let l0 = Lattice::from_rows(self.ambient, &rows);
        debug_assert!(self.contains(&l0));
        debug_assert!(l0.is_transversal(e));
        Ok(l0)
    }

    /// Generators of a transversal lattice that are nonnegative on `e`; the
    /// binomials x^alpha - 1 over these generators cut out the lattice's
    /// toric variety.
    pub fn hyperbolic_basis(&self, e: &Boundary) -> Result<Vec<Vec<i64>>, LatticeError> {
        if !self.is_saturated() {
            return Err(LatticeError::NotTransversal);
        }
        self.transversal_generators(e)
            .map_err(|_| LatticeError::NotTransversal)
    }
}

/// Extended gcd with nonnegative gcd: returns (g, s, t) with s*a + t*b = g.
pub(crate) fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let ext = a.extended_gcd(&b);
    if ext.gcd < 0 {
        (-ext.gcd, -ext.x, -ext.y)
    } else {
        (ext.gcd, ext.x, ext.y)
    }
}

/// Unimodular matrix whose first row is the given primitive vector.
pub(crate) fn complete_primitive(a: &[i64]) -> Vec<Vec<i64>> {
    let (_, p_inv) = reduce_to_first_unit(a);
    // p * a^T = e1, so a^T is the first column of p^{-1}; transposing makes
    // it the first row.
    let r = a.len();
    let mut out = vec![vec![0i64; r]; r];
    for (i, row) in p_inv.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            out[j][i] = x;
        }
    }
    debug_assert_eq!(out[0], a);
    debug_assert_eq!(matrix::det(&out).abs(), 1);
    out
}

/// Accumulate a unimodular `p` with `p * a^T = (g, 0, ..., 0)^T` for the
/// running gcd g, together with its exact inverse.
fn reduce_to_first_unit(a: &[i64]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    const OVERFLOW: &str = "integer overflow in unimodular completion";
    let wide = |x: i64| x as i128;
    let narrow = |x: i128| i64::try_from(x).expect(OVERFLOW);
    let r = a.len();
    let mut p = matrix::identity(r);
    let mut p_inv = matrix::identity(r);
    let mut g = a[0];
    for i in 1..r {
        if a[i] == 0 {
            continue;
        }
        let (g2, s, t) = xgcd(g, a[i]);
        let (u, v) = (wide(a[i] / g2), wide(g / g2));
        let (s, t) = (wide(s), wide(t));
        // rows 0 and i of p: (row0, rowi) <- (s*row0 + t*rowi, -u*row0 + v*rowi)
        for k in 0..r {
            let (r0, ri) = (wide(p[0][k]), wide(p[i][k]));
            p[0][k] = narrow(s * r0 + t * ri);
            p[i][k] = narrow(v * ri - u * r0);
        }
        // columns 0 and i of p_inv: (col0, coli) <- (v*col0 + u*coli, -t*col0 + s*coli)
        for row in p_inv.iter_mut() {
            let (c0, ci) = (wide(row[0]), wide(row[i]));
            row[0] = narrow(v * c0 + u * ci);
            row[i] = narrow(s * ci - t * c0);
        }
        g = g2;
    }
    if g < 0 {
        for k in 0..r {
            p[0][k] = -p[0][k];
        }
        for row in p_inv.iter_mut() {
            row[0] = -row[0];
        }
        g = -g;
    }
    assert_eq!(g, 1, "vector must be primitive");
    (p, p_inv)
}

/// Matrix of a surjection ℤⁿ → ℤⁿ⁻¹ with kernel generated by `alpha`,
/// sending e_j to e_{j-1} for every j >= m (0-based: columns m..n of the
/// result are the shifted unit vectors).
///
/// Requires `alpha[m..]` to vanish and the entries of `alpha` to be coprime.
pub fn kernel_projection(alpha: &[i64], m: usize) -> Result<Vec<Vec<i64>>, LatticeError> {
    let n = alpha.len();
    assert!(m <= n, "split position out of range");
    if let Some(pos) = (m..n).find(|&j| alpha[j] != 0) {
        return Err(LatticeError::TrailingNotZero { from: pos });
    }
    let content = alpha.iter().fold(0i64, |acc, &c| acc.gcd(&c));
    if content != 1 {
        return Err(LatticeError::NotPrimitive { content });
    }
    let (head_p, _) = reduce_to_first_unit(&alpha[..m]);
    // Block diagonal with the identity on the trailing coordinates, first
    // row deleted.
    let mut out = Vec::with_capacity(n - 1);
    for i in 1..n {
        let mut row = vec![0i64; n];
        if i < m {
            row[..m].copy_from_slice(&head_p[i]);
        } else {
            row[i] = 1;
        }
        out.push(row);
    }
    debug_assert!(matrix::mat_vec(&out, alpha).iter().all(|&x| x == 0));
    Ok(out)
}
