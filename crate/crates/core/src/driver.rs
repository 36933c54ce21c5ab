//! The resolution driver: repeatedly blows up the maximal locus of the
//! invariant across all leaf charts until every chart is transversal,
//! recording the chart tree and per-step data, and certifying the result.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::binomial::{self, BinomialIdeal, HyperbolicIdeal};
use crate::blowup::{self, TransformError};
use crate::chart::{self, Chart, EmbeddingState};
use crate::invariant::{self, InvariantValue};
use crate::lattice::{Boundary, Lattice, LatticeError};
use crate::rat;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DriverError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("the zero ideal cannot be resolved")]
    ZeroIdeal,
}

/// One chart of the resolution tree with its tracked data. The ideal is
/// regenerated from the lattice, so every chart carries the canonical
/// presentation of the strict transform. The substitution maps parent
/// exponents to this chart; the root has none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionNode {
    pub chart: Chart,
    pub ideal: BinomialIdeal,
    pub lattice: Lattice,
    pub substitution: Option<Vec<Vec<i64>>>,
    pub children: Vec<usize>,
}

impl ResolutionNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn parent(&self) -> Option<usize> {
        self.chart.lineage.last().map(|step| step.parent)
    }
}

/// One step of the resolution: the maximal invariant value and every
/// center blown up at that value. A locus with several components is
/// cleared over consecutive rounds that share one record, so recorded
/// values decrease strictly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub value: InvariantValue,
    pub centers: Vec<(usize, Boundary)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionTree {
    pub dim: usize,
    pub nodes: Vec<ResolutionNode>,
    pub steps: Vec<StepRecord>,
}

impl ResolutionTree {
    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].is_leaf())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolveStatus {
    /// Every stratum meeting the variety has codimension zero in its
    /// envelope on every leaf.
    Terminal,
    /// The round budget ran out before the tree became terminal.
    BudgetExhausted,
    /// A chart over a blown-up center reached the value of that center
    /// again, so the invariant failed to drop.
    Stalled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolveReport {
    pub tree: ResolutionTree,
    pub status: ResolveStatus,
}

/// Resolve the embedding by blowing up, in each round, the minimal
/// stratum of the maximal invariant locus in every chart attaining the
/// global maximum. The strict transform is taken on the lattice and the
/// chart ideal regenerated from it. Stops when the maximum has
/// codimension zero, the budget is exhausted, or a chart over a center
/// fails to drop below the center's value.
pub fn resolve(state: &EmbeddingState, budget: usize) -> Result<ResolveReport, DriverError> {
    if state.ideal.is_zero() {
        return Err(DriverError::ZeroIdeal);
    }
    let dim = state.chart.dim;
    let mut nodes = vec![ResolutionNode {
        chart: state.chart.clone(),
        ideal: state.ideal.clone(),
        lattice: state.lattice.clone(),
        substitution: None,
        children: Vec::new(),
    }];
    let mut steps: Vec<StepRecord> = Vec::new();
    let mut evaluated: BTreeMap<usize, (InvariantValue, Vec<Boundary>)> = BTreeMap::new();
    let mut rounds = 0usize;
    let status = loop {
        let leaf_ids: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].is_leaf()).collect();
        for &i in &leaf_ids {
            if !evaluated.contains_key(&i) {
                let node = &nodes[i];
                let leaf_state = EmbeddingState {
                    chart: node.chart.clone(),
                    ideal: node.ideal.clone(),
                    lattice: node.lattice.clone(),
                };
                evaluated.insert(i, invariant::max_locus(&leaf_state, &rat(1))?);
            }
        }
        let global = leaf_ids
            .iter()
            .map(|i| evaluated[i].0.clone())
            .max()
            .expect("at least one leaf");
        if global.hcodim == 0 {
            break ResolveStatus::Terminal;
        }
        let attaining: Vec<usize> = leaf_ids
            .iter()
            .copied()
            .filter(|i| evaluated[i].0 == global)
            .collect();
        let merge = match steps.last() {
            Some(last) if global > last.value => break ResolveStatus::Stalled,
            // equal-value rounds extend the current step: either remaining
            // components of the same locus, or a chart where one blow-up was
            // not enough to drop the value yet; the budget bounds how long
            // such a plateau may run
            Some(last) if global == last.value => true,
            _ => false,
        };
        if rounds >= budget {
            break ResolveStatus::BudgetExhausted;
        }
        rounds += 1;
        let mut centers = Vec::new();
        for &i in &attaining {
            let node = &nodes[i];
            centers.push((
                i,
                invariant::minimal_stratum(&node.chart, &node.lattice, &evaluated[&i].1),
            ));
        }
        for (i, center) in &centers {
            let parent = nodes[*i].clone();
            for t in blowup::blow_up_chart(&parent.chart, center, nodes.len()) {
                let lattice = blowup::strict_transform_lattice(&parent.lattice, &t);
                let ideal = binomial::ideal_of_lattice(&lattice);
                let id = t.chart.id;
                nodes.push(ResolutionNode {
                    chart: t.chart,
                    ideal,
                    lattice,
                    substitution: Some(t.substitution),
                    children: Vec::new(),
                });
                nodes[*i].children.push(id);
            }
            evaluated.remove(i);
        }
        if merge {
            steps
                .last_mut()
                .expect("merge follows a recorded step")
                .centers
                .extend(centers);
        } else {
            steps.push(StepRecord {
                value: global,
                centers,
            });
        }
    };
    Ok(ResolveReport {
        tree: ResolutionTree { dim, nodes, steps },
        status,
    })
}

/// Per-leaf certification data: transversality of the final lattice, the
/// hyperbolic generator witness, and the jacobian rank cross-check at
/// every stratum meeting the variety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafCheck {
    pub chart_id: usize,
    pub transversal: bool,
    pub jacobian_ok: bool,
    pub basis: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub leaves: Vec<LeafCheck>,
    /// Leaves on which the variety avoids every exceptional divisor, so
    /// the resolution restricts to an isomorphism there.
    pub iso_leaves: Vec<usize>,
    pub ok: bool,
}

/// Check the outcome of a resolution: every leaf lattice must be
/// transversal to its boundary, and at every stratum meeting the variety
/// the logarithmic jacobian of the hyperbolic generators must have full
/// rank.
pub fn certify(report: &ResolveReport) -> Certificate {
    let mut leaves = Vec::new();
    let mut iso_leaves = Vec::new();
    let mut ok = report.status == ResolveStatus::Terminal;
    for i in report.tree.leaves() {
        let node = &report.tree.nodes[i];
        let transversal = node.lattice.is_transversal(&node.chart.e);
        let meeting = chart::meeting_strata(&node.chart, &node.lattice);
        let mut jacobian_ok = transversal;
        let mut basis = Vec::new();
        if transversal {
            match HyperbolicIdeal::from_lattice(&node.lattice, &node.chart.e) {
                Ok(hyp) => {
                    basis = hyp.basis().to_vec();
                    let witness = hyp.to_ideal();
                    let rank = node.lattice.rank();
                    jacobian_ok = meeting
                        .iter()
                        .all(|s| witness.jacobian_rank_at_stratum(s) == rank);
                }
                Err(_) => jacobian_ok = false,
            }
        }
        if meeting.iter().all(|s| s.is_disjoint(&node.chart.h)) {
            iso_leaves.push(i);
        }
        ok = ok && transversal && jacobian_ok;
        leaves.push(LeafCheck {
            chart_id: i,
            transversal,
            jacobian_ok,
            basis,
        });
    }
    Certificate {
        leaves,
        iso_leaves,
        ok,
    }
}
