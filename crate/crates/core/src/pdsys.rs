//! Finite partial dynamical systems `α: Δ₁ → X` and the dictionary between
//! properties of `α` and of the induced endomorphism `δ(a) = a∘α` (zero off
//! `Δ₁`).
//!
//! On a finite discrete space every subset is clopen, so the openness
//! hypotheses on the domain and image of `α` hold automatically.

use std::collections::BTreeSet;

use crate::error::{breach, input, Result};
use crate::finalg::{MultiMatrixAlgebra, StarEndomorphism, TargetBlock};
use crate::scalar::StarField;
use crate::transfer;

/// `α: Δ₁ → X` on `X = {0, …, n−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialMap {
    names: Vec<String>,
    map: Vec<Option<usize>>,
}

impl PartialMap {
    /// Points are named by their index.
    pub fn new(map: Vec<Option<usize>>) -> Result<Self> {
        let names = (0..map.len()).map(|i| i.to_string()).collect();
        Self::with_names(names, map)
    }

    pub fn with_names(names: Vec<String>, map: Vec<Option<usize>>) -> Result<Self> {
        if names.len() != map.len() {
            return Err(input("one name per point required"));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            return Err(input("point names must be distinct"));
        }
        if let Some(bad) = map.iter().flatten().find(|&&y| y >= names.len()) {
            return Err(input(format!("image {bad} is not a point")));
        }
        Ok(PartialMap { names, map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    /// `α(x)`, if `x ∈ Δ₁`.
    pub fn image(&self, x: usize) -> Option<usize> {
        self.map[x]
    }

    /// `αⁿ(x)`, if `x ∈ Δ_n`.
    pub fn iterate(&self, x: usize, n: usize) -> Option<usize> {
        (0..n).try_fold(x, |y, _| self.map[y])
    }

    pub fn preimages(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&x| self.map[x] == Some(y))
    }

    /// `Δ₁`.
    pub fn domain(&self) -> BTreeSet<usize> {
        (0..self.len()).filter(|&x| self.map[x].is_some()).collect()
    }

    /// `Δ₋₁ = α(Δ₁)`.
    pub fn range(&self) -> BTreeSet<usize> {
        self.map.iter().flatten().copied().collect()
    }

    /// `(Δ_n, Δ_{−n})`: the domain of `αⁿ` and its image.
    pub fn iterate_domains(&self, n: usize) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let dom: BTreeSet<usize> = (0..self.len()).filter(|&x| self.iterate(x, n).is_some()).collect();
        let img = dom.iter().filter_map(|&x| self.iterate(x, n)).collect();
        (dom, img)
    }

    pub fn in_domain(&self, x: usize, n: usize) -> bool {
        self.iterate(x, n).is_some()
    }

    pub fn in_range(&self, x: usize) -> bool {
        self.map.contains(&Some(x))
    }

    pub fn is_total(&self) -> bool {
        self.map.iter().all(Option::is_some)
    }

    pub fn is_surjective(&self) -> bool {
        self.range().len() == self.len()
    }

    pub fn is_injective(&self) -> bool {
        let imgs: Vec<usize> = self.map.iter().flatten().copied().collect();
        imgs.iter().collect::<BTreeSet<_>>().len() == imgs.len()
    }

    /// `C(X)` and `δ(a)(x) = a(α(x))` on `Δ₁`, `0` elsewhere.
    pub fn induced_endomorphism<F: StarField>(&self) -> (MultiMatrixAlgebra, StarEndomorphism<F>) {
        let alg = MultiMatrixAlgebra::commutative(self.len());
        let blocks = self
            .map
            .iter()
            .map(|img| match img {
                Some(y) => TargetBlock::plain(vec![*y], 0, &alg),
                None => TargetBlock::plain(vec![], 1, &alg),
            })
            .collect();
        let endo = StarEndomorphism::new(alg.clone(), alg.clone(), blocks)
            .expect("induced endomorphism is well formed");
        (alg, endo)
    }

    /// All cycles of `α`, each listed along the orbit from its smallest point.
    pub fn cycles(&self) -> Vec<Cycle> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for start in 0..self.len() {
            if seen.contains(&start) {
                continue;
            }
            // start is periodic iff it returns to itself within |X| steps.
            let mut orbit = vec![start];
            let mut y = start;
            let periodic = loop {
                match self.map[y] {
                    None => break false,
                    Some(z) if z == start => break true,
                    Some(z) => {
                        if orbit.len() > self.len() {
                            break false;
                        }
                        orbit.push(z);
                        y = z;
                    }
                }
            };
            if periodic {
                seen.extend(orbit.iter().copied());
                out.push(Cycle { points: orbit });
            }
        }
        out
    }

    /// Every periodic point, tagged by cycle and phase.
    pub fn periodic_points(&self) -> Vec<PeriodicPoint> {
        self.cycles()
            .iter()
            .enumerate()
            .flat_map(|(c, cyc)| {
                cyc.points.iter().enumerate().map(move |(phase, &point)| PeriodicPoint { cycle: c, phase, point })
            })
            .collect()
    }

    /// Evaluates the five biconditionals between `α` and `δ`; fails on any mismatch.
    pub fn duality_report<F: StarField>(&self) -> Result<DualityReport> {
        let (alg, endo) = self.induced_endomorphism::<F>();
        let class = endo.classify()?;
        let unital = endo.apply(&alg.identity()) == alg.identity();
        let has_complete_transfer = transfer::complete_transfer(&endo).is_ok();
        let rows = vec![
            DualityRow::new("monomorphism / surjection", class.mono, self.is_surjective()),
            DualityRow::new("unital / total", unital, self.is_total()),
            DualityRow::new("epimorphism / injection with domain X", class.epi, self.is_injective() && self.is_total()),
            // Every subset of a finite discrete space is open.
            DualityRow::new("unital kernel / open image", class.unital_kernel, true),
            DualityRow::new(
                "complete transfer operator / injection with open image",
                has_complete_transfer,
                self.is_injective(),
            ),
        ];
        if let Some(bad) = rows.iter().find(|r| r.algebra_side != r.map_side) {
            return Err(breach(format!(
                "duality row '{}' fails: algebra side {}, map side {}",
                bad.name, bad.algebra_side, bad.map_side
            )));
        }
        Ok(DualityReport { rows })
    }
}

/// A cycle `c₀ ↦ c₁ ↦ … ↦ c₀` of `α`, starting at its smallest point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    points: Vec<usize>,
}

impl Cycle {
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, phase: usize) -> usize {
        self.points[phase % self.points.len()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodicPoint {
    pub cycle: usize,
    pub phase: usize,
    pub point: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityRow {
    pub name: &'static str,
    pub algebra_side: bool,
    pub map_side: bool,
}

impl DualityRow {
    fn new(name: &'static str, algebra_side: bool, map_side: bool) -> Self {
        DualityRow { name, algebra_side, map_side }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub rows: Vec<DualityRow>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{partial_map, Fixture};
    use crate::GaussRat;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn induced_endomorphisms() {
        let m = partial_map(Fixture::Shift3);
        let (alg, d) = m.induced_endomorphism::<GaussRat>();
        let a = alg.from_values(&[2, 3, 5].map(GaussRat::from_i64)).unwrap();
        assert_eq!(d.apply(&a), alg.from_values(&[3, 5, 0].map(GaussRat::from_i64)).unwrap());
        let (alg, d) = partial_map(Fixture::Id).induced_endomorphism::<GaussRat>();
        assert_eq!(d, StarEndomorphism::identity(&alg));
        let (alg, d) = partial_map(Fixture::Const3).induced_endomorphism::<GaussRat>();
        assert_eq!(d.apply(&a), alg.from_values(&[2, 2, 2].map(GaussRat::from_i64)).unwrap());
    }

    #[test]
    fn domains_iterate() {
        let m = partial_map(Fixture::Shift3);
        assert_eq!(m.iterate_domains(0).0, set(&[0, 1, 2]));
        assert_eq!(m.iterate_domains(1).0, set(&[0, 1]));
        assert_eq!(m.iterate_domains(2).0, set(&[0]));
        assert_eq!(m.iterate_domains(3).0, set(&[]));

        let m = partial_map(Fixture::Merge);
        for n in 0..6 {
            assert_eq!(m.iterate_domains(n).0, set(&[0, 1, 2]));
        }
        assert_eq!(m.iterate_domains(1).1, set(&[0, 1]));
        assert_eq!(m.iterate_domains(2).1, set(&[0]));
        assert_eq!(m.iterate_domains(3).1, set(&[0]));
    }

    #[test]
    fn duality_on_fixtures() {
        let r = partial_map(Fixture::Shift3).duality_report::<GaussRat>().unwrap();
        let complete = &r.rows[4];
        assert!(complete.algebra_side && complete.map_side);

        let r = partial_map(Fixture::Const3).duality_report::<GaussRat>().unwrap();
        assert!(!r.rows[0].algebra_side && !r.rows[0].map_side);

        let r = partial_map(Fixture::Id).duality_report::<GaussRat>().unwrap();
        assert!(r.rows.iter().all(|row| row.algebra_side && row.map_side));
    }

    #[test]
    fn unital_iff_total_and_kernel_unit_is_complement_of_range() {
        for f in Fixture::ALL {
            let m = partial_map(f);
            let (alg, d) = m.induced_endomorphism::<GaussRat>();
            assert_eq!(d.apply(&alg.identity()) == alg.identity(), m.is_total());
            let range = m.range();
            let expected: Vec<GaussRat> =
                (0..m.len()).map(|x| GaussRat::from_i64(i64::from(!range.contains(&x)))).collect();
            assert_eq!(d.kernel_unit().element(), &alg.from_values(&expected).unwrap());
        }
    }

    #[test]
    fn periodic_points_of_fixtures() {
        let pts = partial_map(Fixture::Merge).periodic_points();
        assert_eq!(pts, vec![PeriodicPoint { cycle: 0, phase: 0, point: 0 }]);
        assert!(partial_map(Fixture::Shift3).periodic_points().is_empty());
        assert_eq!(partial_map(Fixture::Id).periodic_points().len(), 1);

        let m = PartialMap::new(vec![Some(2), Some(0), Some(1), Some(3), None]).unwrap();
        let cycles = m.cycles();
        assert_eq!(cycles.len(), 2);
        assert_eq!(cycles[0].points(), &[0, 2, 1]);
        assert_eq!(cycles[1].points(), &[3]);
    }

    #[test]
    fn rejects_bad_maps() {
        assert!(PartialMap::new(vec![Some(3), None]).is_err());
        assert!(PartialMap::with_names(vec!["a".into(), "a".into()], vec![None, None]).is_err());
    }
}
