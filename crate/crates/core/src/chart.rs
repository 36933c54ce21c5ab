//! Charts of the ambient space and stratum-local geometry: localization,
//! incidence of strata with the embedded variety, transversal envelopes,
//! and the reduction of an embedding to a relative presentation in fewer
//! coordinates.

use crate::binomial::{Binomial, BinomialIdeal};
use crate::lattice::{kernel_projection, Boundary, Lattice, LatticeError};
use crate::matrix;

/// A coordinate chart of the ambient toric space. Coordinates in `e` cut
/// out the boundary divisors visible in the chart; `h` marks the
/// exceptional ones among them. The lineage records the blowups that
/// produced the chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    pub id: usize,
    pub dim: usize,
    pub e: Boundary,
    pub h: Boundary,
    pub lineage: Vec<LineageStep>,
}

/// One blowup in a chart's history: the parent chart, the center stratum
/// in the parent's coordinates, and the coordinate whose chart was taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineageStep {
    pub parent: usize,
    pub center: Boundary,
    pub coord: usize,
}

impl Chart {
    pub fn root(dim: usize, e: Boundary) -> Chart {
        let chart = Chart {
            id: 0,
            dim,
            e,
            h: Boundary::new(),
            lineage: Vec::new(),
        };
        chart.validate();
        chart
    }

    pub(crate) fn validate(&self) {
        assert!(
            self.e.iter().all(|&j| j < self.dim),
            "boundary index out of range"
        );
        assert!(self.h.is_subset(&self.e), "exceptional set must lie in E");
    }

    /// Restrict the chart to the divisors through the stratum S: the new
    /// boundary is S itself and the exceptional part is cut down to it.
    pub fn localize(&self, s: &Boundary) -> Chart {
        assert!(s.is_subset(&self.e), "stratum must lie in the boundary");
        Chart {
            id: self.id,
            dim: self.dim,
            e: s.clone(),
            h: self.h.intersection(s).copied().collect(),
            lineage: self.lineage.clone(),
        }
    }
}

/// A chart together with the tracked ideal of the embedded variety and
/// the lattice it generates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingState {
    pub chart: Chart,
    pub ideal: BinomialIdeal,
    pub lattice: Lattice,
}

impl EmbeddingState {
    /// Build the state of an embedding, rejecting ideals whose lattice is
    /// not saturated (the variety would not be irreducible with the
    /// expected torus).
    pub fn new(chart: Chart, ideal: BinomialIdeal) -> Result<Self, LatticeError> {
        chart.validate();
        assert_eq!(chart.dim, ideal.dim(), "chart and ideal dimension differ");
        let lattice = ideal.lattice_of_ideal();
        if let Some((witness, multiple)) = lattice.torsion_witness() {
            return Err(LatticeError::NotSaturated { witness, multiple });
        }
        Ok(EmbeddingState {
            chart,
            ideal,
            lattice,
        })
    }

    /// Like `new`, but replaces a non-saturated lattice by its saturation
    /// and regenerates the ideal from the saturated basis.
    pub fn new_saturating(chart: Chart, ideal: BinomialIdeal) -> Self {
        chart.validate();
        assert_eq!(chart.dim, ideal.dim(), "chart and ideal dimension differ");
        let lattice = ideal.lattice_of_ideal();
        if lattice.is_saturated() {
            return EmbeddingState {
                chart,
                ideal,
                lattice,
            };
        }
        let saturated = lattice.saturate();
        let ideal = crate::binomial::ideal_of_lattice(&saturated);
        EmbeddingState {
            chart,
            ideal,
            lattice: saturated,
        }
    }
}

/// Whether the distinguished point of the stratum S (coordinates 0 on S,
/// 1 elsewhere) lies on the variety of the lattice. It does exactly when
/// no lattice vector is nonnegative and nonzero on S.
pub fn stratum_meets_variety(lattice: &Lattice, s: &Boundary) -> bool {
    if s.is_empty() {
        // the distinguished point is the unit of the torus, always on X
        return true;
    }
    let basis = lattice.basis();
    if basis.is_empty() {
        return true;
    }
    let r = basis.len();
    let indices: Vec<usize> = s.iter().copied().collect();
    // feasibility of: (x . col_j) >= 0 for j in S, sum over S >= 1
    let mut constraints: Vec<(Vec<crate::Rat>, crate::Rat)> = Vec::new();
    for &j in &indices {
        let col: Vec<crate::Rat> = basis.iter().map(|row| crate::rat(row[j])).collect();
        constraints.push((col, crate::rat(0)));
    }
    let mut total = vec![crate::rat(0); r];
    for &j in &indices {
        for (i, row) in basis.iter().enumerate() {
            total[i] += crate::rat(row[j]);
        }
    }
    constraints.push((total, crate::rat(1)));
    crate::ratlp::feasible_point(r, &constraints).is_none()
}

/// All strata of the chart whose distinguished point lies on the variety.
pub fn meeting_strata(chart: &Chart, lattice: &Lattice) -> Vec<Boundary> {
    crate::binomial::subsets(&chart.e)
        .filter(|s| stratum_meets_variety(lattice, s))
        .collect()
}

/// The transversal part of the lattice at the stratum: the unique maximal
/// sublattice transversal to S. Its variety is the minimal regular
/// boundary-transversal subvariety through X near the stratum point.
pub fn minimal_transversal_envelope(
    lattice: &Lattice,
    s: &Boundary,
) -> Result<Lattice, LatticeError> {
    lattice.max_transversal_sublattice(s)
}

/// Local codimension of X inside its envelope at the stratum.
pub fn hcodim(lattice: &Lattice, s: &Boundary) -> Result<u32, LatticeError> {
    let env = lattice.max_transversal_sublattice(s)?;
    Ok((lattice.rank() - env.rank()) as u32)
}

/// The embedding of X in a reduced chart after splitting off the envelope
/// directions: the residual ideal in `chart.dim` coordinates together with
/// its lattice and the codimension that was split off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativePresentation {
    pub chart: Chart,
    pub ideal: BinomialIdeal,
    pub lattice: Lattice,
    pub hcodim: u32,
}

/// Rewrite the embedding at a stratum in coordinates where the envelope is
/// a coordinate subspace, eliminating one hyperbolic direction at a time.
/// Each step picks a hyperbolic generator alpha of the current envelope,
/// moves the coordinates where alpha vanishes on the boundary to the back,
/// and applies the kernel projection of alpha to every exponent vector.
pub fn relative_ideal(
    chart: &Chart,
    s: &Boundary,
    ideal: &BinomialIdeal,
    lattice: &Lattice,
) -> Result<RelativePresentation, LatticeError> {
    let mut cur = chart.localize(s);
    let mut cur_ideal = ideal.clone();
    let mut cur_lat = lattice.clone();
    let total = hcodim(lattice, s)?;
    loop {
        let env = cur_lat.max_transversal_sublattice(&cur.e)?;
        if env.is_zero() {
            break;
        }
        let basis = env.hyperbolic_basis(&cur.e)?;
        let alpha = &basis[0];
        let (perm, m) = split_coordinates(&cur, alpha);
        let alpha_p = apply_perm(&perm, alpha);
        let proj = kernel_projection(&alpha_p, m)?;
        let psi = |v: &[i64]| matrix::mat_vec(&proj, &apply_perm(&perm, v));

        let gens = cur_ideal
            .gens()
            .iter()
            .filter_map(|g| Binomial::new(psi(g.plus()), psi(g.minus())))
            .collect();
        let factor = psi(cur_ideal.monomial_factor());
        let rows: Vec<Vec<i64>> = cur_lat.basis().iter().map(|row| psi(row)).collect();

        // old coordinate perm[k] for k >= m maps to new coordinate k - 1
        let new_index = |old: usize| -> Option<usize> {
            perm.iter().position(|&p| p == old).and_then(|k| {
                if k >= m {
                    Some(k - 1)
                } else {
                    None
                }
            })
        };
        let e: Boundary = cur.e.iter().filter_map(|&j| new_index(j)).collect();
        let h: Boundary = cur.h.iter().filter_map(|&j| new_index(j)).collect();

        cur = Chart {
            id: cur.id,
            dim: cur.dim - 1,
            e,
            h,
            lineage: cur.lineage.clone(),
        };
        cur.validate();
        cur_ideal = BinomialIdeal::with_factor(cur.dim, gens, factor);
        cur_lat = Lattice::from_rows(cur.dim, &rows);
        debug_assert_eq!(
            hcodim_of(&cur_lat, &cur.e),
            total,
            "splitting an envelope direction must preserve the codimension"
        );
    }
    debug_assert!(cur_ideal.lattice_of_ideal().module_eq(&cur_lat));
    debug_assert_eq!(cur_lat.rank() as u32, total);
    Ok(RelativePresentation {
        chart: cur,
        ideal: cur_ideal,
        lattice: cur_lat,
        hcodim: total,
    })
}

fn hcodim_of(lattice: &Lattice, e: &Boundary) -> u32 {
    hcodim(lattice, e).expect("lattice stays saturated under projection")
}

/// Coordinate order [invertible | boundary with alpha positive | boundary
/// with alpha zero], returning the permutation (new position to old
/// coordinate) and the size of the head block.
fn split_coordinates(chart: &Chart, alpha: &[i64]) -> (Vec<usize>, usize) {
    let mut perm: Vec<usize> = (0..chart.dim).filter(|j| !chart.e.contains(j)).collect();
    perm.extend(chart.e.iter().copied().filter(|&j| alpha[j] > 0));
    let m = perm.len();
    perm.extend(chart.e.iter().copied().filter(|&j| alpha[j] == 0));
    debug_assert!(chart.e.iter().all(|&j| alpha[j] >= 0));
    (perm, m)
}

fn apply_perm(perm: &[usize], v: &[i64]) -> Vec<i64> {
    perm.iter().map(|&j| v[j]).collect()
}
