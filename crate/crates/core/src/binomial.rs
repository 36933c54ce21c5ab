//! Binomial ideals on boundary charts: E-orders along strata, monomial
//! factorization, jacobian rank certificates, and the lattice dictionary.
//!
//! A binomial ideal is stored as a list of pure-difference binomials
//! together with an explicit exceptional monomial factor, so the ideal is
//! x^factor * (generators). Exponents on boundary coordinates are
//! nonnegative; invertible coordinates may carry arbitrary integers.

use std::cmp::Ordering;

use thiserror::Error;

use crate::lattice::{Boundary, Lattice};
use crate::matrix;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("E-order is undefined for the zero ideal")]
    ZeroIdeal,
    #[error("maximal contact requires a positive order")]
    OrderZero,
}

/// A pure-difference binomial x^plus - x^minus, canonically oriented so the
/// lexicographically larger side is `plus`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Binomial {
    plus: Vec<i64>,
    minus: Vec<i64>,
}

impl Binomial {
    /// Canonically oriented binomial; `None` when both sides coincide (the
    /// zero polynomial).
    pub fn new(a: Vec<i64>, b: Vec<i64>) -> Option<Binomial> {
        assert_eq!(a.len(), b.len(), "side length mismatch");
        match a.cmp(&b) {
            Ordering::Greater => Some(Binomial { plus: a, minus: b }),
            Ordering::Less => Some(Binomial { plus: b, minus: a }),
            Ordering::Equal => None,
        }
    }

    pub fn plus(&self) -> &[i64] {
        &self.plus
    }

    pub fn minus(&self) -> &[i64] {
        &self.minus
    }

    pub fn dim(&self) -> usize {
        self.plus.len()
    }

    /// Exponent difference plus - minus, the lattice vector of the binomial.
    pub fn direction(&self) -> Vec<i64> {
        self.plus
            .iter()
            .zip(&self.minus)
            .map(|(&p, &q)| p - q)
            .collect()
    }

    /// Order of the binomial along the stratum S: the smaller of the two
    /// S-degrees of its monomials.
    pub fn order_along(&self, s: &Boundary) -> i64 {
        side_degree(&self.plus, s).min(side_degree(&self.minus, s))
    }
}

pub(crate) fn side_degree(side: &[i64], s: &Boundary) -> i64 {
    s.iter().map(|&j| side[j]).sum()
}

/// A binomial ideal x^monomial_factor * (gens), with generators sorted for
/// deterministic serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialIdeal {
    dim: usize,
    gens: Vec<Binomial>,
    monomial_factor: Vec<i64>,
}

impl BinomialIdeal {
    pub fn new(dim: usize, gens: Vec<Binomial>) -> Self {
        Self::with_factor(dim, gens, vec![0; dim])
    }

    pub fn with_factor(dim: usize, mut gens: Vec<Binomial>, monomial_factor: Vec<i64>) -> Self {
        assert_eq!(monomial_factor.len(), dim, "factor length mismatch");
        for g in &gens {
            assert_eq!(g.dim(), dim, "generator length mismatch");
        }
        gens.sort();
        gens.dedup();
        BinomialIdeal {
            dim,
            gens,
            monomial_factor,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Binomial] {
        &self.gens
    }

    pub fn monomial_factor(&self) -> &[i64] {
        &self.monomial_factor
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// The E-order along the stratum S: the largest b with J contained in
    /// the b-th power of the stratum ideal. For a binomial ideal this is the
    /// minimum over generators of the smaller S-degree of the two monomials,
    /// shifted by the S-degree of the monomial factor.
    pub fn eord(&self, s: &Boundary) -> Result<u64, IdealError> {
        if self.gens.is_empty() {
            return Err(IdealError::ZeroIdeal);
        }
        let base = side_degree(&self.monomial_factor, s);
        let min_gen = self
            .gens
            .iter()
            .map(|g| g.order_along(s))
            .min()
            .expect("nonempty");
        let total = base + min_gen;
        debug_assert!(total >= 0, "negative order: boundary exponents must be nonnegative");
        Ok(total as u64)
    }

    /// Maximum E-order over all strata inside `e`, together with every
    /// stratum attaining it. The full stratum always attains the maximum.
    pub fn max_eord(&self, e: &Boundary) -> Result<(u64, Vec<Boundary>), IdealError> {
        let mut best = self.eord(e)?;
        let mut argmax = Vec::new();
        for s in subsets(e) {
            let v = self.eord(&s)?;
            match v.cmp(&best) {
                Ordering::Greater => {
                    best = v;
                    argmax = vec![s];
                }
                Ordering::Equal => argmax.push(s),
                Ordering::Less => {}
            }
        }
        Ok((best, argmax))
    }

    /// All strata S inside `e` with E-order at least `c`.
    pub fn esing(&self, e: &Boundary, c: u64) -> Result<Vec<Boundary>, IdealError> {
        assert!(c >= 1, "control must be positive");
        let mut out = Vec::new();
        for s in subsets(e) {
            if self.eord(&s)? >= c {
                out.push(s);
            }
        }
        Ok(out)
    }

    /// Factor out the largest monomial in the coordinates of `h` common to
    /// all generators, moving it into the stored monomial factor.
    pub fn monomial_factorize(&self, h: &Boundary) -> BinomialIdeal {
        if self.gens.is_empty() {
            return self.clone();
        }
        let mut m = vec![0i64; self.dim];
        for &j in h {
            m[j] = self
                .gens
                .iter()
                .map(|g| g.plus[j].min(g.minus[j]))
                .min()
                .expect("nonempty");
        }
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let plus = g.plus.iter().zip(&m).map(|(&p, &mj)| p - mj).collect();
                let minus = g.minus.iter().zip(&m).map(|(&q, &mj)| q - mj).collect();
                Binomial::new(plus, minus).expect("sides stay distinct")
            })
            .collect();
        let factor = self
            .monomial_factor
            .iter()
            .zip(&m)
            .map(|(&f, &mj)| f + mj)
            .collect();
        Self::with_factor(self.dim, gens, factor)
    }

    /// Rank of the logarithmic jacobian at the distinguished point of the
    /// stratum S (coordinates 0 on S, 1 elsewhere). Differentiation uses the
    /// log basis x_j d/dx_j on boundary coordinates and d/dx_j off the
    /// boundary; each generator's row evaluates to eval(x^a)*a - eval(x^b)*b
    /// where a monomial evaluates to 0 exactly when it has positive S-degree.
    pub fn jacobian_rank_at_stratum(&self, s: &Boundary) -> usize {
        let rows: Vec<Vec<i64>> = self
            .gens
            .iter()
            .map(|g| {
                let a: Vec<i64> = g
                    .plus
                    .iter()
                    .zip(&self.monomial_factor)
                    .map(|(&p, &m)| p + m)
                    .collect();
                let b: Vec<i64> = g
                    .minus
                    .iter()
                    .zip(&self.monomial_factor)
                    .map(|(&q, &m)| q + m)
                    .collect();
                let ea = i64::from(side_degree(&a, s) == 0);
                let eb = i64::from(side_degree(&b, s) == 0);
                a.iter().zip(&b).map(|(&x, &y)| ea * x - eb * y).collect()
            })
            .collect();
        matrix::rank(&rows)
    }

    /// The lattice generated by the exponent differences of the generators.
    pub fn lattice_of_ideal(&self) -> Lattice {
        let rows: Vec<Vec<i64>> = self.gens.iter().map(|g| g.direction()).collect();
        Lattice::from_rows(self.dim, &rows)
    }

    /// Whether the toric variety of this ideal is transversal to `e`:
    /// equivalent to its lattice being saturated and weak-transversal.
    pub fn is_transversal_variety(&self, e: &Boundary) -> bool {
        self.lattice_of_ideal().is_transversal(e)
    }
}

/// Binomial generators x^(v+) - x^(v-) from the basis of a lattice. The
/// directions of the result regenerate the lattice exactly.
pub fn ideal_of_lattice(l: &Lattice) -> BinomialIdeal {
    let gens = l
        .basis()
        .iter()
        .filter_map(|v| {
            let plus: Vec<i64> = v.iter().map(|&x| x.max(0)).collect();
            let minus: Vec<i64> = v.iter().map(|&x| (-x).max(0)).collect();
            Binomial::new(plus, minus)
        })
        .collect();
    BinomialIdeal::new(l.ambient_dim(), gens)
}

/// The ideal of a regular toric variety transversal to the boundary,
/// generated by hyperbolic binomials x^alpha - 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperbolicIdeal {
    lattice: Lattice,
    basis: Vec<Vec<i64>>,
}

impl HyperbolicIdeal {
    /// Build from a transversal lattice; fails when the lattice is not
    /// transversal to `e`.
    pub fn from_lattice(
        lattice: &Lattice,
        e: &Boundary,
    ) -> Result<Self, crate::lattice::LatticeError> {
        let basis = lattice.hyperbolic_basis(e)?;
        Ok(HyperbolicIdeal {
            lattice: lattice.clone(),
            basis,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Hyperbolic generators, nonnegative on the boundary.
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Generators as binomial data x^alpha - 1.
    pub fn to_ideal(&self) -> BinomialIdeal {
        let dim = self.lattice.ambient_dim();
        let gens = self
            .basis
            .iter()
            .filter_map(|alpha| Binomial::new(alpha.clone(), vec![0; dim]))
            .collect();
        BinomialIdeal::new(dim, gens)
    }

    /// Ideal membership of a binomial: x^plus - x^minus lies in the ideal
    /// exactly when plus - minus lies in the lattice.
    pub fn contains_binomial(&self, b: &Binomial) -> bool {
        self.lattice.member(&b.direction())
    }
}

/// All subsets of a boundary set, smallest first within equal cardinality
/// not guaranteed; deterministic bitmask order over the sorted elements.
pub fn subsets(e: &Boundary) -> impl Iterator<Item = Boundary> + '_ {
    let elems: Vec<usize> = e.iter().copied().collect();
    let n = elems.len();
    assert!(n < usize::BITS as usize, "boundary too large to enumerate");
    (0usize..1 << n).map(move |mask| {
        elems
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &j)| j)
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boundary(idx: &[usize]) -> Boundary {
        idx.iter().copied().collect()
    }

    fn bin(a: &[i64], b: &[i64]) -> Binomial {
        Binomial::new(a.to_vec(), b.to_vec()).expect("nonzero binomial")
    }

    /// The running example: x^2 - y^3 and xyz - w^2 in dimension four.
    fn example_ideal() -> BinomialIdeal {
        BinomialIdeal::new(
            4,
            vec![
                bin(&[2, 0, 0, 0], &[0, 3, 0, 0]),
                bin(&[1, 1, 1, 0], &[0, 0, 0, 2]),
            ],
        )
    }

    /// Power-membership oracle: J is inside I(E_S)^b iff every monomial of
    /// every generator (factor included) has S-degree at least b.
    fn eord_oracle(j: &BinomialIdeal, s: &Boundary) -> u64 {
        let mut b = 0u64;
        loop {
            let inside = j.gens().iter().all(|g| {
                let pa = side_degree(g.plus(), s) + side_degree(j.monomial_factor(), s);
                let pb = side_degree(g.minus(), s) + side_degree(j.monomial_factor(), s);
                pa >= (b + 1) as i64 && pb >= (b + 1) as i64
            });
            if !inside {
                return b;
            }
            b += 1;
        }
    }

    #[test]
    fn binomial_is_canonically_oriented() {
        let b = Binomial::new(vec![0, 3], vec![2, 0]).unwrap();
        assert_eq!(b.plus(), &[2, 0]);
        assert_eq!(b.minus(), &[0, 3]);
        assert!(Binomial::new(vec![1, 1], vec![1, 1]).is_none());
    }

    #[test]
    fn eord_matches_pinned_values() {
        let j = example_ideal();
        assert_eq!(j.eord(&boundary(&[0, 1, 2, 3])).unwrap(), 2);
        assert_eq!(j.eord(&boundary(&[])).unwrap(), 0);
        let j2 = BinomialIdeal::new(3, vec![bin(&[2, 1, 0], &[0, 0, 3])]);
        assert_eq!(j2.eord(&boundary(&[0, 2])).unwrap(), 2);
        assert_eq!(j2.eord(&boundary(&[0, 2])).unwrap(), eord_oracle(&j2, &boundary(&[0, 2])));
        assert_eq!(
            BinomialIdeal::new(2, vec![]).eord(&boundary(&[0])),
            Err(IdealError::ZeroIdeal)
        );
    }

    #[test]
    fn eord_agrees_with_power_membership_oracle() {
        let j = example_ideal();
        for s in subsets(&boundary(&[0, 1, 2, 3])) {
            assert_eq!(j.eord(&s).unwrap(), eord_oracle(&j, &s), "stratum {s:?}");
        }
    }

    #[test]
    fn eord_is_monotone_and_max_at_full_stratum() {
        let j = example_ideal();
        let e = boundary(&[0, 1, 2, 3]);
        let full = j.eord(&e).unwrap();
        for s in subsets(&e) {
            let v = j.eord(&s).unwrap();
            assert!(v <= full);
            for t in subsets(&s) {
                assert!(j.eord(&t).unwrap() <= v, "monotonicity {t:?} <= {s:?}");
            }
        }
        let (max, argmax) = j.max_eord(&e).unwrap();
        assert_eq!(max, 2);
        assert!(argmax.contains(&e), "full stratum attains the maximum");
    }

    #[test]
    fn eord_unchanged_by_redundant_generator() {
        let j = example_ideal();
        let e = boundary(&[0, 1, 2, 3]);
        // x^(1,0,1,0) * (x^2 - y^3) is in the ideal and has higher order
        let mut gens = j.gens().to_vec();
        gens.push(bin(&[3, 0, 1, 0], &[1, 3, 1, 0]));
        let j2 = BinomialIdeal::new(4, gens);
        for s in subsets(&e) {
            assert_eq!(j.eord(&s).unwrap(), j2.eord(&s).unwrap());
        }
    }

    #[test]
    fn esing_contains_expected_strata() {
        let j = example_ideal();
        let e = boundary(&[0, 1, 2, 3]);
        // positive order needs both sides of every generator to vanish:
        // x^2 - y^3 forces {0,1} in S, xyz - w^2 then forces 3 in S
        let expected = vec![boundary(&[0, 1, 3]), e.clone()];
        assert_eq!(j.esing(&e, 1).unwrap(), expected);
        assert_eq!(j.esing(&e, 2).unwrap(), expected);
        assert!(j.esing(&e, 3).unwrap().is_empty());
        let (max, argmax) = j.max_eord(&e).unwrap();
        assert_eq!(max, 2);
        assert_eq!(argmax, expected);
    }

    #[test]
    fn monomial_factorization_extracts_common_content() {
        let j = BinomialIdeal::new(2, vec![bin(&[2, 1], &[1, 3])]);
        let f = j.monomial_factorize(&boundary(&[0]));
        assert_eq!(f.monomial_factor(), &[1, 0]);
        assert_eq!(f.gens(), &[bin(&[1, 1], &[0, 3])]);
        // re-expansion: adding the factor back gives the original sides
        for (g, g0) in f.gens().iter().zip(j.gens()) {
            let back_p: Vec<i64> = g
                .plus()
                .iter()
                .zip(f.monomial_factor())
                .map(|(&a, &m)| a + m)
                .collect();
            let back_m: Vec<i64> = g
                .minus()
                .iter()
                .zip(f.monomial_factor())
                .map(|(&a, &m)| a + m)
                .collect();
            assert_eq!(Binomial::new(back_p, back_m).unwrap(), *g0);
        }
        // disjoint supports: nothing to extract
        let j = example_ideal();
        let f = j.monomial_factorize(&boundary(&[0, 1, 2, 3]));
        assert_eq!(f, j);
    }

    #[test]
    fn jacobian_rank_of_hyperbolic_ideal_is_full_on_its_strata() {
        // xy^3 - 1 type ideal: the distinguished point of a stratum lies on
        // the variety exactly when the stratum misses the support
        let l = Lattice::from_rows(4, &[vec![1, 3, 0, 0]]);
        let hyp = HyperbolicIdeal::from_lattice(&l, &boundary(&[2, 3])).unwrap();
        let j = hyp.to_ideal();
        assert_eq!(j.jacobian_rank_at_stratum(&boundary(&[2, 3])), 1);
        assert_eq!(j.jacobian_rank_at_stratum(&boundary(&[])), 1);
    }

    #[test]
    fn jacobian_rank_vanishes_where_order_is_positive() {
        let j = example_ideal();
        // at the origin stratum both generators vanish doubly, so every row
        // of the log jacobian is zero
        assert_eq!(j.jacobian_rank_at_stratum(&boundary(&[0, 1, 2, 3])), 0);
        assert!(!j.is_transversal_variety(&boundary(&[0, 1, 2, 3])));
    }

    #[test]
    fn transversality_matches_jacobian_criterion_on_meeting_strata() {
        // hyperbolic ideal: transversal, jacobian rank = rank everywhere the
        // distinguished point lies on the variety
        let l = Lattice::from_rows(3, &[vec![1, 1, 0], vec![1, 0, 1]]);
        let e = boundary(&[0, 1, 2]);
        assert!(l.is_transversal(&e));
        let hyp = HyperbolicIdeal::from_lattice(&l, &e).unwrap();
        let j = hyp.to_ideal();
        assert!(j.is_transversal_variety(&e));
        assert_eq!(j.jacobian_rank_at_stratum(&boundary(&[])), 2);
    }

    #[test]
    fn lattice_of_example_ideal() {
        let j = example_ideal();
        let l = j.lattice_of_ideal();
        assert!(l.module_eq(&Lattice::from_rows(
            4,
            &[vec![2, -3, 0, 0], vec![1, 1, 1, -2]]
        )));
    }

    #[test]
    fn ideal_of_lattice_round_trips() {
        let l = Lattice::from_rows(4, &[vec![2, -3, 0, 0], vec![1, 1, 1, -2]]);
        let j = ideal_of_lattice(&l);
        assert_eq!(
            j.gens(),
            &[
                bin(&[0, 5, 2, 0], &[0, 0, 0, 4]),
                bin(&[1, 1, 1, 0], &[0, 0, 0, 2]),
            ]
        );
        assert!(j.lattice_of_ideal().module_eq(&l));
        assert!(ideal_of_lattice(&Lattice::zero(3)).is_zero());
    }

    #[test]
    fn hyperbolic_membership_is_lattice_membership() {
        let l = Lattice::from_rows(2, &[vec![1, 1]]);
        let hyp = HyperbolicIdeal::from_lattice(&l, &boundary(&[0, 1])).unwrap();
        assert!(hyp.contains_binomial(&bin(&[1, 1], &[0, 0])));
        assert!(hyp.contains_binomial(&bin(&[2, 2], &[0, 0])));
        assert!(!hyp.contains_binomial(&bin(&[1, 0], &[0, 1])));
        // round-trip: the ideal of the basis regenerates the lattice
        assert!(hyp.to_ideal().lattice_of_ideal().module_eq(&l));
    }
}
