//! Blowups at boundary strata: the per-coordinate charts of the blown-up
//! space and the induced total, controlled, and strict transforms of
//! ideals and lattices.

use thiserror::Error;

use crate::binomial::{Binomial, BinomialIdeal};
use crate::chart::{Chart, LineageStep};
use crate::lattice::{Boundary, Lattice};
use crate::matrix;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("controlled transform is not exact: exceptional multiplicity {found} is below the control {control}")]
    DivisionNotExact { found: i64, control: i64 },
}

/// One chart of a blowup: the child chart, the substitution acting on
/// exponent vectors, and the coordinate carrying the new exceptional
/// divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartTransform {
    pub chart: Chart,
    pub substitution: Vec<Vec<i64>>,
    pub exceptional_index: usize,
}

/// Blow up the stratum `center` of a chart, producing one child chart per
/// center coordinate. In the j-chart the substitution adds up the center
/// exponents into coordinate j, which becomes exceptional; the divisor
/// previously at j does not pass through this chart.
pub fn blow_up_chart(
    parent: &Chart,
    center: &Boundary,
    first_child_id: usize,
) -> Vec<ChartTransform> {
    assert!(!center.is_empty(), "center must be a nonempty stratum");
    assert!(center.is_subset(&parent.e), "center must lie in the boundary");
    center
        .iter()
        .enumerate()
        .map(|(k, &j)| {
            let mut substitution = matrix::identity(parent.dim);
            for &i in center {
                substitution[j][i] = 1;
            }
            let mut lineage = parent.lineage.clone();
            lineage.push(LineageStep {
                parent: parent.id,
                center: center.clone(),
                coord: j,
            });
            let mut h = parent.h.clone();
            h.insert(j);
            ChartTransform {
                chart: Chart {
                    id: first_child_id + k,
                    dim: parent.dim,
                    e: parent.e.clone(),
                    h,
                    lineage,
                },
                substitution,
                exceptional_index: j,
            }
        })
        .collect()
}

/// Pull the ideal back along the chart substitution without dividing out
/// any exceptional multiplicity.
pub fn total_transform(ideal: &BinomialIdeal, t: &ChartTransform) -> BinomialIdeal {
    let map = |v: &[i64]| matrix::mat_vec(&t.substitution, v);
    let gens = ideal
        .gens()
        .iter()
        .map(|g| {
            Binomial::new(map(g.plus()), map(g.minus())).expect("substitution is injective")
        })
        .collect();
    BinomialIdeal::with_factor(ideal.dim(), gens, map(ideal.monomial_factor()))
}

/// Total transform divided by the c-th power of the exceptional
/// coordinate: the common exceptional monomial of the ideal is moved into
/// the stored factor and the control is subtracted there. Control 0 is
/// the total transform; a control above the actual multiplicity is an
/// error.
pub fn controlled_transform(
    ideal: &BinomialIdeal,
    t: &ChartTransform,
    c: u64,
) -> Result<BinomialIdeal, TransformError> {
    let total = total_transform(ideal, t);
    if c == 0 {
        return Ok(total);
    }
    let control = i64::try_from(c).expect("control out of range");
    let j = t.exceptional_index;
    let exc: Boundary = [j].into_iter().collect();
    let pulled = total.monomial_factorize(&exc);
    let mut factor = pulled.monomial_factor().to_vec();
    if factor[j] < control {
        return Err(TransformError::DivisionNotExact {
            found: factor[j],
            control,
        });
    }
    factor[j] -= control;
    Ok(BinomialIdeal::with_factor(
        pulled.dim(),
        pulled.gens().to_vec(),
        factor,
    ))
}

/// Total transform with every generator divided by its own full power of
/// the exceptional coordinate, and the exceptional entry of the factor
/// cleared.
pub fn strict_transform(ideal: &BinomialIdeal, t: &ChartTransform) -> BinomialIdeal {
    let total = total_transform(ideal, t);
    let j = t.exceptional_index;
    let gens = total
        .gens()
        .iter()
        .map(|g| {
            let m = g.plus()[j].min(g.minus()[j]);
            let mut plus = g.plus().to_vec();
            let mut minus = g.minus().to_vec();
            plus[j] -= m;
            minus[j] -= m;
            Binomial::new(plus, minus).expect("division preserves both sides")
        })
        .collect();
    let mut factor = total.monomial_factor().to_vec();
    factor[j] = 0;
    BinomialIdeal::with_factor(total.dim(), gens, factor)
}

/// Image of the lattice under the chart substitution. The substitution is
/// unimodular, so saturation is preserved and the image presents the
/// strict transform of the variety.
pub fn strict_transform_lattice(lattice: &Lattice, t: &ChartTransform) -> Lattice {
    let rows: Vec<Vec<i64>> = lattice
        .basis()
        .iter()
        .map(|row| matrix::mat_vec(&t.substitution, row))
        .collect();
    Lattice::from_rows(lattice.ambient_dim(), &rows)
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

    fn origin_blowup() -> Vec<ChartTransform> {
        let chart = Chart::root(4, boundary(&[0, 1, 2, 3]));
        blow_up_chart(&chart, &boundary(&[0, 1, 2, 3]), 1)
    }

    #[test]
    fn blowup_produces_one_chart_per_center_coordinate() {
        let charts = origin_blowup();
        assert_eq!(charts.len(), 4);
        for (k, t) in charts.iter().enumerate() {
            assert_eq!(t.exceptional_index, k);
            assert_eq!(t.chart.id, 1 + k);
            assert_eq!(t.chart.e, boundary(&[0, 1, 2, 3]));
            assert_eq!(t.chart.h, boundary(&[k]));
            assert_eq!(t.chart.lineage.len(), 1);
            assert_eq!(t.chart.lineage[0].coord, k);
            assert_eq!(matrix::det(&t.substitution), 1);
        }
    }

    #[test]
    fn total_transform_in_first_chart() {
        let t = &origin_blowup()[0];
        let total = total_transform(&example_ideal(), t);
        assert_eq!(
            total.gens(),
            &[
                bin(&[3, 1, 1, 0], &[2, 0, 0, 2]),
                bin(&[3, 3, 0, 0], &[2, 0, 0, 0]),
            ]
        );
        assert_eq!(total.monomial_factor(), &[0, 0, 0, 0]);
    }

    #[test]
    fn controlled_transform_divides_the_common_power() {
        let t = &origin_blowup()[0];
        let j = example_ideal();
        let once = controlled_transform(&j, t, 1).unwrap();
        assert_eq!(once.monomial_factor(), &[1, 0, 0, 0]);
        assert_eq!(
            once.gens(),
            &[
                bin(&[1, 1, 1, 0], &[0, 0, 0, 2]),
                bin(&[1, 3, 0, 0], &[0, 0, 0, 0]),
            ]
        );
        let twice = controlled_transform(&j, t, 2).unwrap();
        assert_eq!(twice.monomial_factor(), &[0, 0, 0, 0]);
        assert_eq!(twice.gens(), once.gens());
        assert_eq!(
            controlled_transform(&j, t, 3),
            Err(TransformError::DivisionNotExact {
                found: 2,
                control: 3
            })
        );
    }

    #[test]
    fn control_equal_to_center_order_clears_the_factor() {
        let j = example_ideal();
        let chart = Chart::root(4, boundary(&[0, 1, 2, 3]));
        let center = boundary(&[0, 1, 2, 3]);
        let c = j.eord(&center).unwrap();
        for t in blow_up_chart(&chart, &center, 1) {
            let weak = controlled_transform(&j, &t, c).unwrap();
            assert_eq!(weak.monomial_factor()[t.exceptional_index], 0);
        }
    }

    #[test]
    fn strict_lattice_matches_pinned_charts() {
        let charts = origin_blowup();
        let l = example_lattice();
        let lx = strict_transform_lattice(&l, &charts[0]);
        assert!(lx.module_eq(&Lattice::from_rows(
            4,
            &[vec![1, 1, 1, -2], vec![0, 2, -1, 2]]
        )));
        let lz = strict_transform_lattice(&l, &charts[2]);
        assert!(lz.module_eq(&Lattice::from_rows(
            4,
            &[vec![2, -3, -1, 0], vec![1, 1, 1, -2]]
        )));
    }

    #[test]
    fn every_transform_presents_the_strict_lattice() {
        let j = example_ideal();
        let l = example_lattice();
        for t in origin_blowup() {
            let image = strict_transform_lattice(&l, &t);
            assert!(total_transform(&j, &t).lattice_of_ideal().module_eq(&image));
            assert!(strict_transform(&j, &t).lattice_of_ideal().module_eq(&image));
            let c = j.eord(&boundary(&[0, 1, 2, 3])).unwrap();
            let weak = controlled_transform(&j, &t, c).unwrap();
            assert!(weak.lattice_of_ideal().module_eq(&image));
        }
    }

    #[test]
    fn partial_center_blowup_bookkeeping() {
        let mut parent = Chart::root(4, boundary(&[0, 1, 2, 3]));
        parent.id = 1;
        parent.h = boundary(&[0]);
        let charts = blow_up_chart(&parent, &boundary(&[2, 3]), 5);
        assert_eq!(charts.len(), 2);
        let w = &charts[1];
        assert_eq!(w.exceptional_index, 3);
        assert_eq!(w.chart.id, 6);
        assert_eq!(w.chart.h, boundary(&[0, 3]));
        let lx = Lattice::from_rows(4, &[vec![1, 1, 1, -2], vec![0, 2, -1, 2]]);
        let lw = strict_transform_lattice(&lx, w);
        assert!(lw.module_eq(&Lattice::from_rows(
            4,
            &[vec![1, 1, 1, -1], vec![0, 2, -1, 1]]
        )));
    }
}
