//! The natural extension `(X̃, α̃)` of a finite partial dynamical system,
//! the level spectra `X̃_n` of `B_n`, and evaluation of tower elements at
//! points of `X̃`.
//!
//! Over a finite `X` every infinite anti-orbit lies on a single cycle of
//! `α`, so `X_∞` is encoded by `(cycle, phase)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{breach, input, Error, Result};
use crate::finalg::AlgebraElement;
use crate::natext::{NaturalExtension, TowerElement};
use crate::pdsys::{Cycle, PartialMap};
use crate::scalar::StarField;

/// A point `(x₀, x₁, …)` of `X̃` with `α(xₖ) = xₖ₋₁`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtPoint {
    /// `(x₀, …, x_N)` with `x_N ∉ Δ₋₁`.
    Path(Vec<usize>),
    /// `xₖ = cycle[phase − k]`.
    Cycle { cycle: usize, phase: usize },
}

/// `(slot, point)` in the tagged disjoint union `X̃_n`.
pub type SlotPoint = (usize, usize);

/// `X̃_n = (X∖Δ₋₁) ⊔ (Δ₁∖Δ₋₁) ⊔ … ⊔ (Δ_{n−1}∖Δ₋₁) ⊔ Δ_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSpectrum {
    pub level: usize,
    pub slots: Vec<BTreeSet<usize>>,
}

impl LevelSpectrum {
    pub fn len(&self) -> usize {
        self.slots.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<SlotPoint> {
        self.slots.iter().enumerate().flat_map(|(s, set)| set.iter().map(move |&x| (s, x))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemCheckReport {
    pub depth: usize,
    pub points: usize,
    pub cardinality_checks: usize,
    pub bonding_checks: usize,
    pub dynamics_checks: usize,
}

/// A partial map together with the tower of its induced endomorphism.
#[derive(Clone, Debug)]
pub struct ExtendedSystem<F> {
    map: PartialMap,
    cycles: Vec<Cycle>,
    ext: NaturalExtension<F>,
}

impl<F: StarField> ExtendedSystem<F> {
    pub fn new(map: PartialMap) -> Self {
        let (_, endo) = map.induced_endomorphism::<F>();
        let ext = NaturalExtension::new(endo).expect("induced endomorphisms are endomorphisms");
        let cycles = map.cycles();
        ExtendedSystem { map, cycles, ext }
    }

    /// Pairs a map with an existing tower; the tower must be the map's own.
    pub fn from_parts(map: PartialMap, ext: NaturalExtension<F>) -> Result<Self> {
        if !ext.algebra().is_commutative() {
            return Err(input("spectral evaluation needs a commutative algebra"));
        }
        let (_, endo) = map.induced_endomorphism::<F>();
        if ext.endo() != &endo {
            return Err(input("tower does not come from this partial map"));
        }
        let cycles = map.cycles();
        Ok(ExtendedSystem { map, cycles, ext })
    }

    pub fn map(&self) -> &PartialMap {
        &self.map
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn tower(&self) -> &NaturalExtension<F> {
        &self.ext
    }

    /// All paths with `N ≤ n_max`, by `N` then `x_N`, followed by all cycle points.
    pub fn enumerate_points(&self, n_max: usize) -> Vec<ExtPoint> {
        let range = self.map.range();
        let mut out = Vec::new();
        for n in 0..=n_max {
            for x in self.map.iterate_domains(n).0 {
                if range.contains(&x) {
                    continue;
                }
                let path = (0..=n).map(|k| self.map.iterate(x, n - k).expect("x ∈ Δ_n")).collect();
                out.push(ExtPoint::Path(path));
            }
        }
        for (c, cycle) in self.cycles.iter().enumerate() {
            for phase in 0..cycle.len() {
                out.push(ExtPoint::Cycle { cycle: c, phase });
            }
        }
        out
    }

    /// `x_k`, or `None` past the end of a path.
    pub fn coord(&self, p: &ExtPoint, k: usize) -> Option<usize> {
        match p {
            ExtPoint::Path(xs) => xs.get(k).copied(),
            ExtPoint::Cycle { cycle, phase } => {
                let c = &self.cycles[*cycle];
                Some(c.point((phase + c.len() * (k / c.len() + 1) - k) % c.len()))
            }
        }
    }

    /// Last index `N` of a path; `None` for cycle points.
    pub fn path_end(p: &ExtPoint) -> Option<usize> {
        match p {
            ExtPoint::Path(xs) => Some(xs.len() - 1),
            ExtPoint::Cycle { .. } => None,
        }
    }

    /// Membership in `X̃`.
    pub fn is_point(&self, p: &ExtPoint) -> bool {
        match p {
            ExtPoint::Path(xs) => {
                let Some(&last) = xs.last() else { return false };
                xs.iter().all(|&x| x < self.map.len())
                    && xs.windows(2).all(|w| self.map.image(w[1]) == Some(w[0]))
                    && !self.map.in_range(last)
            }
            ExtPoint::Cycle { cycle, phase } => self.cycles.get(*cycle).is_some_and(|c| *phase < c.len()),
        }
    }

    /// `α̃(x₀, x₁, …) = (α(x₀), x₀, x₁, …)` on `Δ̃₁ = {x₀ ∈ Δ₁}`.
    pub fn alpha_tilde(&self, p: &ExtPoint) -> Result<ExtPoint> {
        match p {
            ExtPoint::Path(xs) => {
                let y = self
                    .map
                    .image(xs[0])
                    .ok_or_else(|| Error::Domain(format!("{} is not in the domain of α̃", self.display(p))))?;
                let mut out = Vec::with_capacity(xs.len() + 1);
                out.push(y);
                out.extend_from_slice(xs);
                Ok(ExtPoint::Path(out))
            }
            ExtPoint::Cycle { cycle, phase } => {
                Ok(ExtPoint::Cycle { cycle: *cycle, phase: (phase + 1) % self.cycles[*cycle].len() })
            }
        }
    }

    /// Drops `x₀`, on `Δ̃₋₁` (points with at least two coordinates).
    pub fn alpha_tilde_inv(&self, p: &ExtPoint) -> Result<ExtPoint> {
        match p {
            ExtPoint::Path(xs) if xs.len() >= 2 => Ok(ExtPoint::Path(xs[1..].to_vec())),
            ExtPoint::Path(_) => Err(Error::Domain(format!("{} is not in the range of α̃", self.display(p)))),
            ExtPoint::Cycle { cycle, phase } => {
                let len = self.cycles[*cycle].len();
                Ok(ExtPoint::Cycle { cycle: *cycle, phase: (phase + len - 1) % len })
            }
        }
    }

    pub fn in_domain(&self, p: &ExtPoint) -> bool {
        self.map.image(self.coord(p, 0).expect("x₀ exists")).is_some()
    }

    pub fn in_range(&self, p: &ExtPoint) -> bool {
        self.coord(p, 1).is_some()
    }

    pub fn level_spectrum(&self, n: usize) -> LevelSpectrum {
        let range = self.map.range();
        let mut slots: Vec<BTreeSet<usize>> = (0..n)
            .map(|k| self.map.iterate_domains(k).0.into_iter().filter(|x| !range.contains(x)).collect())
            .collect();
        slots.push(self.map.iterate_domains(n).0);
        LevelSpectrum { level: n, slots }
    }

    /// `X̃_{n+1} → X̃_n`: inclusion on slots `0..=n`, `α` from slot `n+1` to slot `n`.
    pub fn level_bonding(&self, n: usize) -> BTreeMap<SlotPoint, SlotPoint> {
        self.level_spectrum(n + 1)
            .points()
            .into_iter()
            .map(|(s, x)| {
                let image = if s <= n { (s, x) } else { (n, self.map.image(x).expect("x ∈ Δ_{n+1}")) };
                ((s, x), image)
            })
            .collect()
    }

    /// Where `p` sits in `X̃_n`: `(N, x_N)` if a path ends before `n`, else `(n, x_n)`.
    pub fn slot_of(&self, p: &ExtPoint, n: usize) -> SlotPoint {
        match Self::path_end(p) {
            Some(end) if end < n => (end, self.coord(p, end).expect("within path")),
            _ => (n, self.coord(p, n).expect("long enough")),
        }
    }

    /// The Gelfand transform of `x` at `p`.
    pub fn evaluate(&self, x: &TowerElement<F>, p: &ExtPoint) -> F {
        let (s, pt) = self.slot_of(p, x.level());
        x.coords()[s].value(pt).clone()
    }

    pub fn evaluate_at_slot(&self, x: &TowerElement<F>, (s, pt): SlotPoint) -> F {
        x.coords()[s].value(pt).clone()
    }

    /// `n ↦ x̃(δ*ⁿ(ι(a)))` for `n ≤ n_max`.
    pub fn functional_sequence(&self, p: &ExtPoint, a: &AlgebraElement<F>, n_max: usize) -> Vec<F> {
        let mut x = self.ext.inject(a);
        let mut out = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            if n > 0 {
                x = self.ext.ext_transfer(&x);
            }
            out.push(self.evaluate(&x, p));
        }
        out
    }

    /// Dimension count, bonding duality and `α̃` dynamics, up to depth `n`.
    pub fn natural_extension_system_check(&self, depth: usize) -> Result<SystemCheckReport> {
        if depth == 0 {
            return Err(input("system check needs depth ≥ 1"));
        }
        let mut report = SystemCheckReport {
            depth,
            points: 0,
            cardinality_checks: 0,
            bonding_checks: 0,
            dynamics_checks: 0,
        };
        for n in 0..=depth {
            let spectrum = self.level_spectrum(n);
            if spectrum.len() != self.ext.level_algebra(n).dim() {
                return Err(breach(format!("|X̃_{n}| = {} but dim B_{n} differs", spectrum.len())));
            }
            report.cardinality_checks += 1;
            let bonding = self.level_bonding(n);
            for b in self.ext.level_basis(n) {
                let up = self.ext.embed_level(&b);
                for (&point, &image) in &bonding {
                    if self.evaluate_at_slot(&up, point) != self.evaluate_at_slot(&b, image) {
                        return Err(breach(format!("bonding duality fails at level {n}, point {point:?}")));
                    }
                    report.bonding_checks += 1;
                }
            }
        }
        let points = self.enumerate_points(depth);
        report.points = points.len();
        let elements: Vec<TowerElement<F>> = (0..=depth).flat_map(|n| self.ext.level_basis(n)).collect();
        for p in &points {
            if !self.is_point(p) {
                return Err(breach(format!("enumerated {} is not a point", self.display(p))));
            }
            let forward = self.alpha_tilde(p).ok();
            let backward = self.alpha_tilde_inv(p).ok();
            if forward.is_some() != self.in_domain(p) || backward.is_some() != self.in_range(p) {
                return Err(breach(format!("α̃ domain mismatch at {}", self.display(p))));
            }
            if let Some(f) = &forward {
                if self.alpha_tilde_inv(f).ok().as_ref() != Some(p) || !self.is_point(f) {
                    return Err(breach(format!("α̃⁻¹α̃ ≠ id at {}", self.display(p))));
                }
            }
            if let Some(b) = &backward {
                if self.alpha_tilde(b).ok().as_ref() != Some(p) {
                    return Err(breach(format!("α̃α̃⁻¹ ≠ id at {}", self.display(p))));
                }
            }
            for x in &elements {
                let dx = self.evaluate(&self.ext.ext_delta(x), p);
                let expected = forward.as_ref().map_or_else(F::zero, |f| self.evaluate(x, f));
                let tx = self.evaluate(&self.ext.ext_transfer(x), p);
                let expected_t = backward.as_ref().map_or_else(F::zero, |b| self.evaluate(x, b));
                let raised = self.evaluate(&self.ext.embed_level(x), p);
                if dx != expected || tx != expected_t || raised != self.evaluate(x, p) {
                    return Err(breach(format!("dynamics mismatch at {}", self.display(p))));
                }
                report.dynamics_checks += 1;
            }
        }
        Ok(report)
    }

    /// The anti-orbit prefix `(x₀, …, x_{len−1})` of a cycle point.
    pub fn cycle_prefix(&self, cycle: usize, phase: usize, len: usize) -> Vec<usize> {
        let p = ExtPoint::Cycle { cycle, phase };
        (0..len).map(|k| self.coord(&p, k).expect("cycles are infinite")).collect()
    }

    pub fn display(&self, p: &ExtPoint) -> String {
        match p {
            ExtPoint::Path(xs) => {
                format!("({})", xs.iter().map(|&x| self.map.name(x)).collect::<Vec<_>>().join(","))
            }
            ExtPoint::Cycle { cycle, phase } => {
                let prefix = self.cycle_prefix(*cycle, *phase, self.cycles[*cycle].len());
                format!("({},…)", prefix.iter().map(|&x| self.map.name(x)).collect::<Vec<_>>().join(","))
            }
        }
    }

    /// Points up to depth `n_max` as nodes, `α̃` as edges inside the truncation.
    pub fn dot(&self, n_max: usize) -> String {
        let points = self.enumerate_points(n_max);
        let index: BTreeMap<&ExtPoint, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut out = String::from("digraph natural_extension {\n");
        for (i, p) in points.iter().enumerate() {
            let _ = writeln!(out, "  P{i} [label=\"{}\"];", self.display(p));
        }
        for (i, p) in points.iter().enumerate() {
            if let Some(j) = self.alpha_tilde(p).ok().and_then(|q| index.get(&q).copied()) {
                let _ = writeln!(out, "  P{i} -> P{j};");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{partial_map, Fixture};
    use crate::{GaussRat, MultiMatrixAlgebra};

    type Q = GaussRat;

    fn sys(f: Fixture) -> ExtendedSystem<Q> {
        ExtendedSystem::new(partial_map(f))
    }

    fn path(v: &[usize]) -> ExtPoint {
        ExtPoint::Path(v.to_vec())
    }

    fn vals(v: [i64; 3]) -> AlgebraElement<Q> {
        MultiMatrixAlgebra::commutative(3).from_values(&v.map(Q::from_i64)).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let s = sys(Fixture::Merge);
        let pts = s.enumerate_points(3);
        assert_eq!(
            pts,
            vec![
                path(&[2]),
                path(&[1, 2]),
                path(&[0, 1, 2]),
                path(&[0, 0, 1, 2]),
                ExtPoint::Cycle { cycle: 0, phase: 0 }
            ]
        );
        assert_eq!(sys(Fixture::Shift3).enumerate_points(5), vec![path(&[0]), path(&[1, 0]), path(&[2, 1, 0])]);
        assert_eq!(sys(Fixture::Const3).enumerate_points(2).len(), 7);
    }

    #[test]
    fn dynamics_examples() {
        let s = sys(Fixture::Merge);
        assert_eq!(s.alpha_tilde(&path(&[1, 2])).unwrap(), path(&[0, 1, 2]));
        assert_eq!(s.alpha_tilde_inv(&path(&[0, 1, 2])).unwrap(), path(&[1, 2]));
        let fixed = ExtPoint::Cycle { cycle: 0, phase: 0 };
        assert_eq!(s.alpha_tilde(&fixed).unwrap(), fixed);
        assert!(matches!(s.alpha_tilde_inv(&path(&[2])), Err(Error::Domain(_))));
        let shift = sys(Fixture::Shift3);
        assert!(matches!(shift.alpha_tilde(&path(&[2, 1, 0])), Err(Error::Domain(_))));
    }

    #[test]
    fn spectra_match_dimensions() {
        let s = sys(Fixture::Merge);
        let x1 = s.level_spectrum(1);
        assert_eq!(x1.slots, vec![BTreeSet::from([2]), BTreeSet::from([0, 1, 2])]);
        assert_eq!(x1.len(), 4);
        assert_eq!(sys(Fixture::Const3).level_spectrum(2).len(), 7);
        for f in Fixture::ALL {
            let s = sys(f);
            for n in 0..4 {
                let bond = s.level_bonding(n);
                for x in &s.level_spectrum(n + 1).slots[0] {
                    assert_eq!(bond[&(0, *x)], (0, *x));
                }
            }
        }
    }

    #[test]
    fn evaluation_examples() {
        let s = sys(Fixture::Merge);
        let t = s.tower();
        let a = vals([2, 3, 5]);
        assert_eq!(s.evaluate(&t.inject(&a), &path(&[1, 2])), Q::from_i64(3));
        assert_eq!(s.evaluate(&t.ext_transfer(&t.inject(&a)), &path(&[1, 2])), Q::from_i64(5));
        let one = t.inject(&t.algebra().identity());
        for p in s.enumerate_points(4) {
            assert_eq!(s.evaluate(&one, &p), Q::from_i64(1));
        }
    }

    #[test]
    fn functional_sequences() {
        let s = sys(Fixture::Merge);
        let a = vals([2, 3, 5]);
        assert_eq!(s.functional_sequence(&path(&[1, 2]), &a, 3), [3, 5, 0, 0].map(Q::from_i64).to_vec());
        let fixed = ExtPoint::Cycle { cycle: 0, phase: 0 };
        assert_eq!(s.functional_sequence(&fixed, &a, 4), vec![Q::from_i64(2); 5]);
        let one = vals([1, 1, 1]);
        let p = path(&[0, 0, 1, 2]);
        assert_eq!(s.functional_sequence(&p, &one, 5), [1, 1, 1, 1, 0, 0].map(Q::from_i64).to_vec());
    }

    #[test]
    fn system_checks_pass_on_fixtures() {
        for f in Fixture::ALL {
            let report = sys(f).natural_extension_system_check(4).unwrap();
            assert!(report.dynamics_checks > 0, "{}", f.name());
        }
        assert_eq!(sys(Fixture::Id).enumerate_points(4).len(), 1);
    }

    #[test]
    fn cycle_coordinates_run_backwards() {
        let m = PartialMap::new(vec![Some(1), Some(2), Some(0)]).unwrap();
        let s: ExtendedSystem<Q> = ExtendedSystem::new(m);
        assert_eq!(s.cycle_prefix(0, 0, 5), vec![0, 2, 1, 0, 2]);
        let p = ExtPoint::Cycle { cycle: 0, phase: 0 };
        assert_eq!(s.coord(&s.alpha_tilde(&p).unwrap(), 0), Some(1));
    }

    #[test]
    fn rejects_foreign_towers() {
        let t = NaturalExtension::new(partial_map(Fixture::Merge).induced_endomorphism::<Q>().1).unwrap();
        assert!(ExtendedSystem::from_parts(partial_map(Fixture::Shift3), t).is_err());
        let alg = MultiMatrixAlgebra::new(vec![2]).unwrap();
        let t = NaturalExtension::new(crate::StarEndomorphism::<Q>::identity(&alg)).unwrap();
        assert!(matches!(ExtendedSystem::from_parts(partial_map(Fixture::Id), t), Err(Error::Input(_))));
    }

    #[test]
    fn dot_export() {
        let dot = sys(Fixture::Merge).dot(2);
        assert!(dot.contains("P0 [label=\"(2)\"]"));
        assert!(dot.contains("P0 -> P1"));
    }
}
