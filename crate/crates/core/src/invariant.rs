//! The upper-semicontinuous resolution invariant: a codimension count
//! followed by a string of order entries from a maximal-contact descent.
//! Each stratum is scored on its localized model, where coordinates off
//! the stratum are units: the lattice is projected to the stratum
//! coordinates and the descent runs on canonical generators of the
//! projection, so the value cannot depend on how the ambient ideal
//! happened to be presented.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num::Signed;

use crate::binomial::{Binomial, BinomialIdeal, IdealError};
use crate::chart::{self, Chart, EmbeddingState};
use crate::lattice::{Boundary, Lattice, LatticeError};
use crate::{rat, Rat};

/// Value of the monomial-case invariant: the smallest number of
/// exceptional divisors whose multiplicities reach the control, the
/// reached fraction of the control, and the chosen divisors. The reached
/// fraction is the weight of the entry: a blowup that turns a residual
/// order into pure exceptional content of the same size must read as
/// progress, so a Gamma entry ranks against order entries through its
/// ratio, and only then by divisor count.
///
/// The divisor indices are reported for display but excluded from both
/// equality and ordering: which divisor of a symmetric exceptional
/// monomial carries the argmax is an artifact of coordinate labels, so
/// two values differing only there describe the same singularity size and
/// must land in the same resolution round.
#[derive(Debug, Clone, Eq)]
pub struct GammaVal {
    pub p: u32,
    pub ratio: Rat,
    /// Divisor indices in decreasing order. Not part of the value order.
    pub indices: Vec<usize>,
}

impl PartialEq for GammaVal {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.ratio == other.ratio
    }
}

impl Ord for GammaVal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ratio
            .cmp(&other.ratio)
            .then_with(|| other.p.cmp(&self.p))
    }
}

impl PartialOrd for GammaVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One slot of the invariant string. `Inf` marks an exhausted level: the
/// residual ideal became zero or a unit, so no further order exists and
/// the slot sits below everything except `Bottom`, the unreachable
/// monomial case. Orders and monomial cases compare by weight, the order
/// itself or the reached fraction of the control; at equal weight the
/// monomial case sits just above the order. The direction matters for
/// where the maximum lands: moving to a deeper stratum can convert a
/// residual order into exceptional content at the same ratio, and the
/// deeper stratum must not score lower, or the maximal locus would stop
/// being closed and the choice of center would depend on labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Bottom,
    Inf,
    Gamma(GammaVal),
    Val(Rat),
}

impl Entry {
    fn tier(&self) -> u8 {
        match self {
            Entry::Bottom => 0,
            Entry::Inf => 1,
            Entry::Gamma(_) | Entry::Val(_) => 2,
        }
    }

    fn weight(&self) -> Option<&Rat> {
        match self {
            Entry::Bottom | Entry::Inf => None,
            Entry::Gamma(g) => Some(&g.ratio),
            Entry::Val(q) => Some(q),
        }
    }

    fn kind(&self) -> u8 {
        match self {
            Entry::Gamma(_) => 1,
            _ => 0,
        }
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tier()
            .cmp(&other.tier())
            .then_with(|| self.weight().cmp(&other.weight()))
            .then_with(|| self.kind().cmp(&other.kind()))
            .then_with(|| match (self, other) {
                (Entry::Gamma(a), Entry::Gamma(b)) => a.cmp(b),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Entry {
    /// Coordinate indices print 1-based, matching the file formats.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Bottom => write!(f, "bottom"),
            Entry::Inf => write!(f, "inf"),
            Entry::Val(q) => write!(f, "{q}"),
            Entry::Gamma(g) => {
                let divisors: Vec<String> =
                    g.indices.iter().map(|&j| (j + 1).to_string()).collect();
                write!(f, "gamma({}; {}; {{{}}})", g.p, g.ratio, divisors.join(","))
            }
        }
    }
}

/// The full invariant at a stratum: codimension of the variety inside its
/// transversal envelope, then the descent entries. Comparison is
/// lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InvariantValue {
    pub hcodim: u32,
    pub entries: Vec<Entry>,
}

impl InvariantValue {
    /// Extend to length `n` with exhausted levels, for comparison across
    /// charts of a common ambient dimension.
    pub fn padded_to(&self, n: usize) -> InvariantValue {
        let mut out = self.clone();
        while out.entries.len() < n {
            out.entries.push(Entry::Inf);
        }
        out
    }
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.entries.iter().map(Entry::to_string).collect();
        write!(f, "({} | {})", self.hcodim, entries.join(", "))
    }
}

/// Monomial-case invariant of exceptional multiplicities `m` at control
/// `c`: the fewest divisors whose multiplicities sum to at least `c`,
/// breaking ties by the largest sum and then the largest divisor indices.
/// `None` when even the full sum stays below the control.
pub fn gamma_invariant(m: &[Rat], c: &Rat) -> Option<GammaVal> {
    assert!(c.is_positive(), "control must be positive");
    let supp: Vec<usize> = (0..m.len()).filter(|&j| m[j].is_positive()).collect();
    assert!(supp.len() < usize::BITS as usize, "support too large");
    let mut best: Option<(u32, Rat, Vec<usize>)> = None;
    for mask in 1usize..1 << supp.len() {
        let p = mask.count_ones();
        if let Some((bp, _, _)) = &best {
            if p > *bp {
                continue;
            }
        }
        let mut sum = rat(0);
        let mut indices = Vec::new();
        for (i, &j) in supp.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sum += &m[j];
                indices.push(j);
            }
        }
        if sum < *c {
            continue;
        }
        indices.reverse();
        let better = match &best {
            None => true,
            Some((bp, bsum, bidx)) => {
                p < *bp || (p == *bp && (&sum, &indices) > (bsum, bidx))
            }
        };
        if better {
            best = Some((p, sum, indices));
        }
    }
    best.map(|(p, sum, indices)| GammaVal {
        p,
        ratio: sum / c,
        indices,
    })
}

/// A generator of the residual ideal during the descent, with rational
/// exponents: consuming a maximal-contact coordinate raises the
/// complementary factors to fractional weights.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum DGen {
    Mono(Vec<Rat>),
    Bin { plus: Vec<Rat>, minus: Vec<Rat> },
}

fn rsum(v: &[Rat], s: &Boundary) -> Rat {
    s.iter().fold(rat(0), |acc, &j| acc + &v[j])
}

impl DGen {
    fn order(&self, active: &Boundary) -> Rat {
        match self {
            DGen::Mono(e) => rsum(e, active),
            DGen::Bin { plus, minus } => rsum(plus, active).min(rsum(minus, active)),
        }
    }

    /// Guaranteed multiplicity of coordinate j dividing the generator.
    fn content_at(&self, j: usize) -> Rat {
        match self {
            DGen::Mono(e) => e[j].clone(),
            DGen::Bin { plus, minus } => plus[j].clone().min(minus[j].clone()),
        }
    }

    fn strip(&mut self, j: usize, amount: &Rat) {
        match self {
            DGen::Mono(e) => e[j] -= amount,
            DGen::Bin { plus, minus } => {
                plus[j] -= amount;
                minus[j] -= amount;
            }
        }
    }

    /// Coefficients with respect to the contact coordinate at the critical
    /// value `c`: a factor carrying the coordinate with exponent a < c
    /// contributes its complement raised to the weight c/(c - a), and
    /// exponents at or above the critical value contribute nothing. Equal
    /// exponents on the two sides keep the binomial relation; unequal ones
    /// split it into its side coefficients.
    fn eliminate(self, j: usize, c: &Rat) -> Vec<DGen> {
        let weigh = |mut e: Vec<Rat>, a: &Rat| -> Option<Vec<Rat>> {
            if a >= c {
                return None;
            }
            let w = c.clone() / (c.clone() - a.clone());
            e[j] = rat(0);
            for x in &mut e {
                *x *= w.clone();
            }
            Some(e)
        };
        match self {
            DGen::Mono(e) => {
                let a = e[j].clone();
                weigh(e, &a).map(DGen::Mono).into_iter().collect()
            }
            DGen::Bin { plus, minus } => {
                let (a, b) = (plus[j].clone(), minus[j].clone());
                if a == b {
                    match (weigh(plus, &a), weigh(minus, &b)) {
                        (Some(p), Some(m)) => vec![DGen::Bin { plus: p, minus: m }],
                        _ => Vec::new(),
                    }
                } else {
                    [(plus, a), (minus, b)]
                        .into_iter()
                        .filter_map(|(side, alpha)| weigh(side, &alpha).map(DGen::Mono))
                        .collect()
                }
            }
        }
    }
}

/// Fold the monomial factor of the ideal into its generators: a
/// factor-only ideal becomes a single monomial, otherwise the factor
/// multiplies both sides of every binomial.
fn initial_dgens(ideal: &BinomialIdeal) -> Vec<DGen> {
    let factor = ideal.monomial_factor();
    if ideal.gens().is_empty() {
        if factor.iter().any(|&f| f > 0) {
            return vec![DGen::Mono(factor.iter().map(|&f| rat(f)).collect())];
        }
        return Vec::new();
    }
    ideal
        .gens()
        .iter()
        .map(|g| DGen::Bin {
            plus: g.plus().iter().zip(factor).map(|(a, f)| rat(a + f)).collect(),
            minus: g.minus().iter().zip(factor).map(|(a, f)| rat(a + f)).collect(),
        })
        .collect()
}

/// Candidates for the next maximal-contact coordinate: active coordinates
/// appearing in a side that attains the current order of an attaining
/// generator.
fn contact_candidates(gens: &[DGen], active: &Boundary, theta: &Rat) -> BTreeSet<usize> {
    let mut candidates: BTreeSet<usize> = BTreeSet::new();
    for g in gens {
        if g.order(active) != *theta {
            continue;
        }
        match g {
            DGen::Mono(e) => {
                candidates.extend(active.iter().copied().filter(|&j| e[j].is_positive()));
            }
            DGen::Bin { plus, minus } => {
                for side in [plus, minus] {
                    if rsum(side, active) != *theta {
                        continue;
                    }
                    candidates.extend(active.iter().copied().filter(|&j| side[j].is_positive()));
                }
            }
        }
    }
    candidates
}

/// The descent over one localized model: at each level the common
/// exceptional content is split off, the residual order against the
/// running control becomes the entry, and the generators lose one
/// maximal-contact coordinate. When several coordinates witness the
/// current order, each is tried and the lexicographically largest
/// continuation wins; that is what makes the chosen hyperplane one of
/// maximal contact, and it keeps the value independent of how the
/// coordinates happen to be numbered. A vanishing residual order ends the
/// string with the monomial-case invariant of the content, or with
/// nothing when there is no content. Entries are padded with `Inf` to
/// `out_len`; the returned coordinate is the smallest one consumed by a
/// maximal top-level branch, when a positive order exists.
fn descend(
    mut gens: Vec<DGen>,
    dim: usize,
    active: &Boundary,
    h: &Boundary,
    c: &Rat,
    out_len: usize,
) -> (Vec<Entry>, Option<usize>) {
    let pad = |mut entries: Vec<Entry>| {
        while entries.len() < out_len {
            entries.push(Entry::Inf);
        }
        entries
    };
    if active.is_empty() || gens.is_empty() {
        return (pad(Vec::new()), None);
    }
    let mut m = vec![rat(0); dim];
    let mut m_total = 0i64;
    let exceptional: Vec<usize> = h.intersection(active).copied().collect();
    for j in exceptional {
        let mj = gens
            .iter()
            .map(|g| g.content_at(j))
            .min()
            .expect("nonempty generators");
        if mj > 0 {
            for g in &mut gens {
                g.strip(j, mj);
            }
            m[j] = rat(mj);
            m_total += mj;
        }
    }
    let theta = gens
        .iter()
        .map(|g| g.order(active))
        .min()
        .expect("nonempty generators");
    if theta > 0 {
        let head = Entry::Val(rat(theta) / c);
        let mut best: Option<(Vec<Entry>, usize)> = None;
        for j in contact_candidates(&gens, active, theta) {
            let mut sub: Vec<DGen> =
                gens.iter().cloned().filter_map(|g| g.substitute(j)).collect();
            sub.sort();
            sub.dedup();
            let mut rest = active.clone();
            rest.remove(&j);
            let (tail, _) = descend(sub, dim, &rest, h, &rat(theta), out_len.saturating_sub(1));
            if best.as_ref().map_or(true, |(b, _)| tail > *b) {
                best = Some((tail, j));
            }
        }
        let (tail, j) = best.expect("positive order admits a contact coordinate");
        let mut entries = vec![head];
        entries.extend(tail);
        return (pad(entries), Some(j));
    }
    if m_total > 0 {
        let entry = match gamma_invariant(&m, c) {
            Some(g) => Entry::Gamma(g),
            None => Entry::Bottom,
        };
        return (pad(vec![entry]), None);
    }
    // a unit generator survives: the point is off the residual locus and
    // the remaining levels are exhausted
    (pad(Vec::new()), None)
}

/// First maximal-contact coordinate of the ideal on the chart, the
/// coordinate consumed by the top descent level.
pub fn max_contact_coordinate(
    ideal: &BinomialIdeal,
    e: &Boundary,
    h: &Boundary,
) -> Result<usize, IdealError> {
    if ideal.is_zero() {
        return Err(IdealError::ZeroIdeal);
    }
    let h_active: Boundary = h.intersection(e).copied().collect();
    let (_, j) = descend(
        initial_dgens(ideal),
        ideal.dim(),
        e,
        &h_active,
        &rat(1),
        ideal.dim(),
    );
    j.ok_or(IdealError::OrderZero)
}

/// The descent entries of the ideal at a stratum under the control:
/// coordinates off the stratum are units, so only stratum degrees count,
/// and only exceptional coordinates on the stratum yield content. The
/// result has one entry slot per ambient coordinate.
pub fn e_inv(ideal: &BinomialIdeal, h: &Boundary, s: &Boundary, c: &Rat) -> Vec<Entry> {
    let h_active: Boundary = h.intersection(s).copied().collect();
    descend(
        initial_dgens(ideal),
        ideal.dim(),
        s,
        &h_active,
        c,
        ideal.dim(),
    )
    .0
}

/// Canonical generators of the variety as seen from the stratum point,
/// where every coordinate off the stratum is a unit: the lattice is
/// projected to the stratum coordinates and split back into binomials
/// supported on the stratum, one per Graver element of the projection.
/// The Graver basis rather than a module basis matters twice over: it
/// realizes the true order of the localized ideal (a conformal summand
/// never has larger order than its sum, so the minimum over the set is the
/// minimum over the whole lattice), and it is canonical, so relabeling the
/// chart coordinates relabels the model instead of re-deriving a different
/// presentation.
pub fn localized_ideal(lattice: &Lattice, s: &Boundary, dim: usize) -> BinomialIdeal {
    let cols: Vec<usize> = s.iter().copied().collect();
    if cols.is_empty() {
        return BinomialIdeal::new(dim, Vec::new());
    }
    let rows: Vec<Vec<i64>> = lattice
        .basis()
        .iter()
        .map(|v| cols.iter().map(|&j| v[j]).collect())
        .collect();
    let proj = Lattice::from_rows(cols.len(), &rows);
    let mut gens: Vec<Binomial> = proj
        .graver_basis()
        .iter()
        .filter_map(|v| {
            let mut plus = vec![0i64; dim];
            let mut minus = vec![0i64; dim];
            for (k, &j) in cols.iter().enumerate() {
                if v[k] > 0 {
                    plus[j] = v[k];
                } else {
                    minus[j] = -v[k];
                }
            }
            Binomial::new(plus, minus)
        })
        .collect();
    gens.sort();
    gens.dedup();
    BinomialIdeal::new(dim, gens)
}

/// The invariant at one stratum: codimension of the variety inside its
/// transversal envelope, then the descent entries of the localized model.
pub fn stratum_value(
    chart: &Chart,
    lattice: &Lattice,
    s: &Boundary,
    c: &Rat,
) -> Result<InvariantValue, LatticeError> {
    let hcodim = chart::hcodim(lattice, s)?;
    let ideal = localized_ideal(lattice, s, chart.dim);
    let entries = e_inv(&ideal, &chart.h, s, c);
    Ok(InvariantValue { hcodim, entries })
}

/// Maximum of the invariant over the strata of the chart that meet the
/// variety, together with every stratum attaining it, in enumeration
/// order.
pub fn max_locus(
    state: &EmbeddingState,
    c: &Rat,
) -> Result<(InvariantValue, Vec<Boundary>), LatticeError> {
    let mut best: Option<(InvariantValue, Vec<Boundary>)> = None;
    for s in chart::meeting_strata(&state.chart, &state.lattice) {
        let value = stratum_value(&state.chart, &state.lattice, &s, c)?;
        match &mut best {
            None => best = Some((value, vec![s])),
            Some((bv, bs)) => match value.cmp(bv) {
                Ordering::Greater => {
                    *bv = value;
                    *bs = vec![s];
                }
                Ordering::Equal => bs.push(s),
                Ordering::Less => {}
            },
        }
    }
    Ok(best.expect("the torus stratum always meets the variety"))
}

/// What the variety looks like along a stratum, written without reference
/// to coordinate labels: the multiset of projected Graver exponents, each
/// tagged with whether its coordinate is exceptional or boundary. Two
/// strata that a relabeling exchanges get equal signatures, and strata
/// with different local geometry get different ones even when their
/// invariant values tie.
fn stratum_signature(
    chart: &Chart,
    lattice: &Lattice,
    s: &Boundary,
) -> (usize, usize, usize, Vec<Vec<(i64, bool, bool)>>) {
    let cols: Vec<usize> = s.iter().copied().collect();
    let rows: Vec<Vec<i64>> = lattice
        .basis()
        .iter()
        .map(|v| cols.iter().map(|&j| v[j]).collect())
        .collect();
    let proj = Lattice::from_rows(cols.len(), &rows);
    let mut model: Vec<Vec<(i64, bool, bool)>> = proj
        .graver_basis()
        .iter()
        .map(|v| {
            let mut entry: Vec<(i64, bool, bool)> = v
                .iter()
                .zip(&cols)
                .filter(|&(&x, _)| x != 0)
                .map(|(&x, &j)| (x, chart.h.contains(&j), chart.e.contains(&j)))
                .collect();
            entry.sort();
            entry
        })
        .collect();
    model.sort();
    let in_h = s.iter().filter(|j| chart.h.contains(j)).count();
    let in_e = s.iter().filter(|j| chart.e.contains(j)).count();
    (s.len(), in_h, in_e, model)
}

/// The blow-up center among the strata of a max locus: minimal under
/// inclusion, with ties between incomparable minima broken by the local
/// signature of each stratum rather than by coordinate indices. Indices
/// enter only as a final resort between strata with literally identical
/// local data, so the same chart read in two coordinate labelings picks
/// corresponding centers whenever the data can tell the strata apart.
pub fn minimal_stratum(chart: &Chart, lattice: &Lattice, strata: &[Boundary]) -> Boundary {
    strata
        .iter()
        .filter(|s| {
            !strata
                .iter()
                .any(|t| t.len() < s.len() && t.is_subset(s))
        })
        .min_by(|a, b| {
            stratum_signature(chart, lattice, a)
                .cmp(&stratum_signature(chart, lattice, b))
                .then_with(|| a.cmp(b))
        })
        .expect("nonempty stratum list")
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::Binomial;

    fn boundary(idx: &[usize]) -> Boundary {
        idx.iter().copied().collect()
    }

    fn bin(a: &[i64], b: &[i64]) -> Binomial {
        Binomial::new(a.to_vec(), b.to_vec()).expect("nonzero binomial")
    }

    fn example_ideal() -> BinomialIdeal {
        BinomialIdeal::new(
            4,
            vec![
                bin(&[2, 0, 0, 0], &[0, 3, 0, 0]),
                bin(&[1, 1, 1, 0], &[0, 0, 0, 2]),
            ],
        )
    }

    fn example_lattice() -> Lattice {
        Lattice::from_rows(4, &[vec![2, -3, 0, 0], vec![1, 1, 1, -2]])
    }

    fn example_state() -> EmbeddingState {
        let chart = Chart::root(4, boundary(&[0, 1, 2, 3]));
        EmbeddingState::new(chart, example_ideal()).expect("saturated lattice")
    }

    fn val(n: i64, d: i64) -> Entry {
        Entry::Val(Rat::new(n.into(), d.into()))
    }

    fn rats(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn entries_compare_by_weight_with_gamma_just_above_the_equal_order() {
        let gamma = |num: i64, den: i64| {
            Entry::Gamma(GammaVal {
                p: 1,
                ratio: Rat::new(num.into(), den.into()),
                indices: vec![0],
            })
        };
        let tiny = val(1, 1000);
        assert!(Entry::Bottom < Entry::Inf);
        assert!(Entry::Inf < val(0, 1));
        assert!(val(0, 1) < tiny);
        assert!(tiny < gamma(2, 1));
        assert!(val(2, 1) < gamma(2, 1));
        assert!(gamma(2, 1) < val(5, 2));
    }

    #[test]
    fn gamma_order_prefers_ratio_then_fewer_divisors_and_ignores_indices() {
        let g = |p: u32, num: i64, den: i64, idx: &[usize]| GammaVal {
            p,
            ratio: Rat::new(num.into(), den.into()),
            indices: idx.to_vec(),
        };
        assert!(g(1, 1, 1, &[0]) < g(2, 9, 1, &[1, 0]));
        assert!(g(1, 1, 1, &[0]) < g(1, 3, 2, &[0]));
        assert!(g(2, 1, 1, &[1, 0]) < g(1, 1, 1, &[0]));
        // the argmax divisors are a labeling artifact, not a size
        assert_eq!(g(1, 1, 1, &[0]), g(1, 1, 1, &[2]));
        assert_eq!(g(2, 1, 1, &[1, 0]), g(2, 1, 1, &[2, 0]));
    }

    #[test]
    fn gamma_invariant_pinned_cases() {
        let c2 = rat(2);
        let got = gamma_invariant(&rats(&[2, 1]), &c2).unwrap();
        assert_eq!((got.p, got.ratio.clone(), got.indices.clone()), (1, rat(1), vec![0]));
        let got = gamma_invariant(&rats(&[1, 1]), &c2).unwrap();
        assert_eq!((got.p, got.ratio.clone(), got.indices.clone()), (2, rat(1), vec![1, 0]));
        // ties on cardinality prefer the larger sum, then larger indices
        let got = gamma_invariant(&rats(&[2, 3, 2]), &c2).unwrap();
        assert_eq!((got.p, got.ratio.clone(), got.indices.clone()), (1, Rat::new(3.into(), 2.into()), vec![1]));
        let got = gamma_invariant(&rats(&[2, 0, 2]), &c2).unwrap();
        assert_eq!((got.p, got.indices.clone()), (1, vec![2]));
        assert_eq!(gamma_invariant(&rats(&[1]), &rat(3)), None);
    }

    #[test]
    fn descent_at_the_origin_of_the_running_example() {
        // orders 2, 2/2, 3/2 along x, w, y; the last level is exhausted
        let entries = e_inv(
            &example_ideal(),
            &Boundary::new(),
            &boundary(&[0, 1, 2, 3]),
            &rat(1),
        );
        assert_eq!(entries, vec![val(2, 1), val(1, 1), val(3, 2), Entry::Inf]);
    }

    #[test]
    fn localized_ideal_renormalizes_the_projection() {
        // along the z axis the curve generator degenerates and the
        // canonical model is spanned by xy - w^2 and y^5 - w^4
        let ideal = localized_ideal(&example_lattice(), &boundary(&[0, 1, 3]), 4);
        let got: Vec<(Vec<i64>, Vec<i64>)> = ideal
            .gens()
            .iter()
            .map(|g| (g.plus().to_vec(), g.minus().to_vec()))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec![0, 5, 0, 0], vec![0, 0, 0, 4]),
                (vec![1, 1, 0, 0], vec![0, 0, 0, 2]),
            ]
        );
    }

    #[test]
    fn stratum_values_of_the_running_example() {
        let chart = Chart::root(4, boundary(&[0, 1, 2, 3]));
        let l = example_lattice();
        let at = |s: &[usize]| stratum_value(&chart, &l, &boundary(s), &rat(1)).unwrap();
        let origin = at(&[0, 1, 2, 3]);
        assert_eq!(origin.hcodim, 2);
        assert_eq!(
            origin.entries,
            vec![val(2, 1), val(3, 2), val(7, 3), Entry::Inf]
        );
        let z_axis = at(&[0, 1, 3]);
        assert_eq!(z_axis.hcodim, 2);
        assert_eq!(
            z_axis.entries,
            vec![val(2, 1), val(1, 1), val(5, 2), Entry::Inf]
        );
        let curve = at(&[2, 3]);
        assert_eq!(curve.hcodim, 1);
        assert_eq!(
            curve.entries,
            vec![val(1, 1), val(2, 1), Entry::Inf, Entry::Inf]
        );
        let torus = at(&[]);
        assert_eq!(torus.hcodim, 0);
        assert_eq!(torus.entries, vec![Entry::Inf; 4]);
    }

    #[test]
    fn max_contact_of_the_running_example_is_x() {
        let j = example_ideal();
        let e = boundary(&[0, 1, 2, 3]);
        assert_eq!(max_contact_coordinate(&j, &e, &Boundary::new()).unwrap(), 0);
        let unit = BinomialIdeal::new(2, vec![bin(&[0, 1], &[0, 0])]);
        assert_eq!(
            max_contact_coordinate(&unit, &boundary(&[0]), &Boundary::new()),
            Err(IdealError::OrderZero)
        );
        assert_eq!(
            max_contact_coordinate(&BinomialIdeal::new(2, vec![]), &boundary(&[0]), &Boundary::new()),
            Err(IdealError::ZeroIdeal)
        );
    }

    #[test]
    fn exceptional_content_goes_to_gamma_when_residual_order_vanishes() {
        // x^2 (1 - y) on a chart where x is exceptional
        let j = BinomialIdeal::with_factor(2, vec![bin(&[0, 1], &[0, 0])], vec![2, 0]);
        let entries = e_inv(&j, &boundary(&[0]), &boundary(&[0, 1]), &rat(1));
        assert_eq!(
            entries,
            vec![
                Entry::Gamma(GammaVal {
                    p: 1,
                    ratio: rat(2),
                    indices: vec![0],
                }),
                Entry::Inf
            ]
        );
    }

    #[test]
    fn unit_residual_exhausts_the_remaining_levels() {
        let j = BinomialIdeal::new(2, vec![bin(&[0, 1], &[0, 0])]);
        let entries = e_inv(&j, &Boundary::new(), &boundary(&[0, 1]), &rat(1));
        assert_eq!(entries, vec![Entry::Inf, Entry::Inf]);
    }

    #[test]
    fn invariant_is_monotone_along_meeting_strata() {
        let chart = Chart::root(4, boundary(&[0, 1, 2, 3]));
        let l = example_lattice();
        let strata = chart::meeting_strata(&chart, &l);
        for s in &strata {
            let vs = stratum_value(&chart, &l, s, &rat(1)).unwrap();
            for t in &strata {
                if t.is_subset(s) {
                    let vt = stratum_value(&chart, &l, t, &rat(1)).unwrap();
                    assert!(vt <= vs, "monotonicity fails between {t:?} and {s:?}");
                }
            }
        }
    }

    #[test]
    fn max_locus_of_the_running_example_is_the_origin() {
        let (value, strata) = max_locus(&example_state(), &rat(1)).unwrap();
        assert_eq!(value.hcodim, 2);
        assert_eq!(
            value.entries,
            vec![val(2, 1), val(3, 2), val(7, 3), Entry::Inf]
        );
        assert_eq!(strata, vec![boundary(&[0, 1, 2, 3])]);
        let state = example_state();
        assert_eq!(
            minimal_stratum(&state.chart, &state.lattice, &strata),
            boundary(&[0, 1, 2, 3])
        );
    }

    #[test]
    fn minimal_stratum_prefers_inclusion_then_signature_then_lex() {
        let mut chart = Chart::root(3, boundary(&[0, 1, 2]));
        chart.h = boundary(&[0, 2]);
        let lattice = Lattice::from_rows(3, &[vec![1, -1, -1]]);
        // the full stratum is filtered by inclusion; between the
        // incomparable minima the stratum with one exceptional coordinate
        // beats the one with two, whatever the index order says
        let strata = vec![boundary(&[0, 1, 2]), boundary(&[0, 2]), boundary(&[0, 1])];
        assert_eq!(
            minimal_stratum(&chart, &lattice, &strata),
            boundary(&[0, 1])
        );
        let relabeled = Lattice::from_rows(3, &[vec![-1, -1, 1]]);
        let swapped = vec![boundary(&[0, 2]), boundary(&[1, 2])];
        assert_eq!(
            minimal_stratum(&chart, &relabeled, &swapped),
            boundary(&[1, 2])
        );
        // literally identical local data falls back to index order
        let symmetric = Lattice::from_rows(3, &[vec![1, 1, -2]]);
        let mut plain = Chart::root(3, boundary(&[0, 1, 2]));
        plain.h = boundary(&[0, 1]);
        let tied = vec![boundary(&[1, 2]), boundary(&[0, 2])];
        assert_eq!(
            minimal_stratum(&plain, &symmetric, &tied),
            boundary(&[0, 2])
        );
    }
}
