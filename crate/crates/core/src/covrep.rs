//! Covariant representations on countable bases, applied to finitely
//! supported vectors.
//!
//! Two realizations are provided. The strict one lives on `ℓ²(X̃)` with
//! `U e_p = e_{α̃⁻¹(p)}`. The non-strict one lives on `⊕ₙ ℓ²(X)` with
//! `(Ũh)ₙ = U hₙ₊₁`. Operators are exact on the whole space. A check is
//! asserted only when every basis vector it touches lies in the enumerated
//! truncation.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{breach, input, Error, Result};
use crate::finalg::AlgebraElement;
use crate::natext::TowerElement;
use crate::pdsys::PartialMap;
use crate::scalar::StarField;
use crate::spectral::{ExtPoint, ExtendedSystem};
use crate::transfer::{complete_transfer, LinearMap};
use crate::unitize::{ideal_complement, unitize_kernel};

/// Default bound on enumerated basis vectors.
pub const DEFAULT_BASIS_LIMIT: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisId {
    /// `e_p ∈ ℓ²(X̃)`.
    Ext(ExtPoint),
    /// `e_x` in the `n`-th copy of `ℓ²(X)`.
    Pair { x: usize, n: usize },
}

/// Finitely supported vector; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SparseVector<F> {
    entries: BTreeMap<BasisId, F>,
}

impl<F: StarField> SparseVector<F> {
    pub fn zero() -> Self {
        SparseVector { entries: BTreeMap::new() }
    }

    pub fn basis(id: BasisId) -> Self {
        SparseVector { entries: BTreeMap::from([(id, F::one())]) }
    }

    pub fn entries(&self) -> &BTreeMap<BasisId, F> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn coefficient(&self, id: &BasisId) -> F {
        self.entries.get(id).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, id: BasisId, c: F) {
        if c.is_zero() {
            return;
        }
        let sum = self.coefficient(&id) + c;
        if sum.is_zero() {
            self.entries.remove(&id);
        } else {
            self.entries.insert(id, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (id, c) in &other.entries {
            out.add_term(id.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (id, c) in &other.entries {
            out.add_term(id.clone(), -c.clone());
        }
        out
    }
}

/// Operators of a covariant triple.
#[derive(Clone, Debug, PartialEq)]
pub enum RepOperator<F> {
    /// `π(a)`.
    Alg(AlgebraElement<F>),
    /// `π̃(b)` for `b` in the natural extension; strict contexts only.
    Tower(TowerElement<F>),
    Shift,
    ShiftAdjoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RepKind {
    /// `(π̃, U, ℓ²(X̃))` for the natural extension.
    Strict,
    /// `(π, Ũ, ⊕ₙ ℓ²(X))` built from an injective map.
    Example13,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    /// `Uπ(a) = π(δ(a))U`.
    CR1,
    /// `U*U ∈ π(A)′`.
    CR1Prime,
    /// `U*U = π(1 − q)`.
    CR1DoublePrime,
    /// `π(δ(a)) = Uπ(a)U*`.
    CR2,
    /// `π(δ*(a)) = U*π(a)U`.
    CR3,
}

impl Relation {
    pub const ALL: [Relation; 5] =
        [Relation::CR1, Relation::CR1Prime, Relation::CR1DoublePrime, Relation::CR2, Relation::CR3];

    pub fn name(self) -> &'static str {
        match self {
            Relation::CR1 => "CR1",
            Relation::CR1Prime => "CR1'",
            Relation::CR1DoublePrime => "CR1''",
            Relation::CR2 => "CR2",
            Relation::CR3 => "CR3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// No vector of the truncation could be certified.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub relation: Relation,
    /// Certified (vector, element) checks performed.
    pub checks: usize,
    /// Checks skipped because a word left the truncation.
    pub uncertified_checks: usize,
    /// Basis vectors all of whose checks were certified.
    pub certified_vectors: usize,
    pub failures: usize,
    /// Failing basis vectors, in basis order.
    pub witnesses: Vec<BasisId>,
}

impl RelationReport {
    pub fn status(&self) -> Status {
        if self.failures > 0 {
            Status::Fail
        } else if self.checks == 0 {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrReport {
    pub kind: RepKind,
    pub depth: usize,
    pub basis_size: usize,
    pub relations: Vec<RelationReport>,
}

impl CrReport {
    pub fn relation(&self, r: Relation) -> Option<&RelationReport> {
        self.relations.iter().find(|x| x.relation == r)
    }
}

/// Test element with its images under `δ` and the transfer operator.
#[derive(Clone, Debug)]
struct TestElement<F> {
    op: RepOperator<F>,
    delta: RepOperator<F>,
    transfer: Option<RepOperator<F>>,
}

/// A realized covariant triple over a truncated basis.
#[derive(Clone, Debug)]
pub struct RepContext<F> {
    kind: RepKind,
    depth: usize,
    system: ExtendedSystem<F>,
    basis: Vec<BasisId>,
    members: BTreeSet<BasisId>,
}

fn check_limit(size: usize, limit: usize) -> Result<()> {
    if size > limit {
        return Err(Error::Limit { what: format!("basis of {size} vectors"), limit });
    }
    Ok(())
}

/// `π(a) = a(x₀)`, `U e_p = e_{α̃⁻¹(p)}` on `ℓ²(X̃)` truncated at paths of length `depth + 1`.
pub fn build_strict_rep<F: StarField>(map: &PartialMap, depth: usize) -> Result<RepContext<F>> {
    build_strict_rep_with_limit(map, depth, DEFAULT_BASIS_LIMIT)
}

pub fn build_strict_rep_with_limit<F: StarField>(
    map: &PartialMap,
    depth: usize,
    limit: usize,
) -> Result<RepContext<F>> {
    let system = ExtendedSystem::new(map.clone());
    let basis: Vec<BasisId> = system.enumerate_points(depth).into_iter().map(BasisId::Ext).collect();
    check_limit(basis.len(), limit)?;
    let members = basis.iter().cloned().collect();
    Ok(RepContext { kind: RepKind::Strict, depth, system, basis, members })
}

/// `(π(a)h)ₙ = a hₙ`, `(Ũh)ₙ = U hₙ₊₁` with `U e_y = e_{α⁻¹(y)}` on `Δ₋₁`; copies `0..=depth`.
pub fn build_example_1_3<F: StarField>(map: &PartialMap, depth: usize) -> Result<RepContext<F>> {
    build_example_1_3_with_limit(map, depth, DEFAULT_BASIS_LIMIT)
}

pub fn build_example_1_3_with_limit<F: StarField>(
    map: &PartialMap,
    depth: usize,
    limit: usize,
) -> Result<RepContext<F>> {
    if !map.is_injective() {
        return Err(input("the non-strict realization needs an injective map"));
    }
    check_limit(map.len() * (depth + 1), limit)?;
    let system = ExtendedSystem::new(map.clone());
    let basis: Vec<BasisId> =
        (0..=depth).flat_map(|n| (0..map.len()).map(move |x| BasisId::Pair { x, n })).collect();
    let members = basis.iter().cloned().collect();
    Ok(RepContext { kind: RepKind::Example13, depth, system, basis, members })
}

impl<F: StarField> RepContext<F> {
    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn basis(&self) -> &[BasisId] {
        &self.basis
    }

    pub fn system(&self) -> &ExtendedSystem<F> {
        &self.system
    }

    pub fn map(&self) -> &PartialMap {
        self.system.map()
    }

    fn in_truncation(&self, id: &BasisId) -> bool {
        self.members.contains(id)
    }

    fn apply_basis(&self, op: &RepOperator<F>, id: &BasisId) -> Result<Option<(BasisId, F)>> {
        let map = self.map();
        Ok(match (op, id) {
            (RepOperator::Alg(a), BasisId::Ext(p)) => {
                let x0 = self.system.coord(p, 0).expect("x₀ exists");
                Some((id.clone(), a.value(x0).clone()))
            }
            (RepOperator::Alg(a), BasisId::Pair { x, .. }) => Some((id.clone(), a.value(*x).clone())),
            (RepOperator::Tower(b), BasisId::Ext(p)) => Some((id.clone(), self.system.evaluate(b, p))),
            (RepOperator::Tower(_), BasisId::Pair { .. }) => {
                return Err(input("tower elements act only on ℓ²(X̃)"));
            }
            (RepOperator::Shift, BasisId::Ext(p)) => {
                self.system.alpha_tilde_inv(p).ok().map(|q| (BasisId::Ext(q), F::one()))
            }
            (RepOperator::Shift, BasisId::Pair { x, n }) => {
                if *n == 0 {
                    None
                } else {
                    map.preimages(*x).next().map(|y| (BasisId::Pair { x: y, n: n - 1 }, F::one()))
                }
            }
            (RepOperator::ShiftAdjoint, BasisId::Ext(p)) => {
                self.system.alpha_tilde(p).ok().map(|q| (BasisId::Ext(q), F::one()))
            }
            (RepOperator::ShiftAdjoint, BasisId::Pair { x, n }) => {
                map.image(*x).map(|y| (BasisId::Pair { x: y, n: n + 1 }, F::one()))
            }
        })
    }

    /// Applies `op`; sets `escaped` when the result touches a vector outside the truncation.
    fn apply_tracked(&self, op: &RepOperator<F>, v: &SparseVector<F>, escaped: &mut bool) -> Result<SparseVector<F>> {
        let mut out = SparseVector::zero();
        for (id, c) in &v.entries {
            if let Some((target, w)) = self.apply_basis(op, id)? {
                if !self.in_truncation(&target) {
                    *escaped = true;
                }
                out.add_term(target, c.clone() * w);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, op: &RepOperator<F>, v: &SparseVector<F>) -> Result<SparseVector<F>> {
        let mut escaped = false;
        self.apply_tracked(op, v, &mut escaped)
    }

    /// `ops` applied right to left, with truncation tracking.
    fn word(&self, ops: &[&RepOperator<F>], v: &SparseVector<F>, escaped: &mut bool) -> Result<SparseVector<F>> {
        let mut out = v.clone();
        for op in ops.iter().rev() {
            out = self.apply_tracked(op, &out, escaped)?;
        }
        Ok(out)
    }

    /// `1 − q` for the system the operators represent.
    fn kernel_complement(&self) -> RepOperator<F> {
        let tower = self.system.tower();
        let p = &tower.algebra().identity::<F>() - tower.kernel_unit();
        RepOperator::Alg(p)
    }

    fn test_elements(&self, max_level: usize, with_transfer: bool) -> Result<Vec<TestElement<F>>> {
        let tower = self.system.tower();
        match self.kind {
            RepKind::Strict => Ok((0..=max_level)
                .flat_map(|n| tower.level_basis(n))
                .map(|b| TestElement {
                    delta: RepOperator::Tower(tower.ext_delta(&b)),
                    transfer: Some(RepOperator::Tower(tower.ext_transfer(&b))),
                    op: RepOperator::Tower(b),
                })
                .collect()),
            RepKind::Example13 => {
                let endo = tower.endo();
                let transfer: Option<LinearMap<F>> =
                    if with_transfer { Some(complete_transfer(endo)?) } else { None };
                Ok(tower
                    .algebra()
                    .basis::<F>()
                    .into_iter()
                    .map(|a| TestElement {
                        delta: RepOperator::Alg(endo.apply(&a)),
                        transfer: transfer.as_ref().map(|t| RepOperator::Alg(t.apply(&a))),
                        op: RepOperator::Alg(a),
                    })
                    .collect())
            }
        }
    }

    /// Checks the requested relations on every certified basis vector.
    ///
    /// Strict contexts test basis elements of `B_n` for `n ≤ max_level`
    /// against `ext_delta` and `ext_transfer`. Non-strict contexts test the
    /// basis of `A` against `δ` and the complete transfer operator.
    pub fn verify_cr(&self, relations: &[Relation], max_level: usize) -> Result<CrReport> {
        let elements = self.test_elements(max_level, relations.contains(&Relation::CR3))?;
        let u = RepOperator::Shift;
        let us = RepOperator::ShiftAdjoint;
        let p = self.kernel_complement();
        let mut reports = Vec::new();
        for &relation in relations {
            let mut report = RelationReport {
                relation,
                checks: 0,
                uncertified_checks: 0,
                certified_vectors: 0,
                failures: 0,
                witnesses: Vec::new(),
            };
            for id in &self.basis {
                let e = SparseVector::basis(id.clone());
                let mut vector_certified = true;
                let mut vector_failed = false;
                let per_element: &[TestElement<F>] =
                    if relation == Relation::CR1DoublePrime { &elements[..elements.len().min(1)] } else { &elements };
                for t in per_element {
                    let mut escaped = false;
                    let (lhs, rhs) = match relation {
                        Relation::CR1 => {
                            (self.word(&[&u, &t.op], &e, &mut escaped)?, self.word(&[&t.delta, &u], &e, &mut escaped)?)
                        }
                        Relation::CR1Prime => (
                            self.word(&[&us, &u, &t.op], &e, &mut escaped)?,
                            self.word(&[&t.op, &us, &u], &e, &mut escaped)?,
                        ),
                        Relation::CR1DoublePrime => {
                            (self.word(&[&us, &u], &e, &mut escaped)?, self.word(&[&p], &e, &mut escaped)?)
                        }
                        Relation::CR2 => (
                            self.word(&[&t.delta], &e, &mut escaped)?,
                            self.word(&[&u, &t.op, &us], &e, &mut escaped)?,
                        ),
                        Relation::CR3 => {
                            let transfer = t.transfer.as_ref().ok_or_else(|| input("CR3 needs a transfer operator"))?;
                            (self.word(&[transfer], &e, &mut escaped)?, self.word(&[&us, &t.op, &u], &e, &mut escaped)?)
                        }
                    };
                    if escaped {
                        report.uncertified_checks += 1;
                        vector_certified = false;
                        continue;
                    }
                    report.checks += 1;
                    if lhs != rhs {
                        report.failures += 1;
                        vector_failed = true;
                    }
                }
                if vector_certified && !per_element.is_empty() {
                    report.certified_vectors += 1;
                }
                if vector_failed {
                    report.witnesses.push(id.clone());
                }
            }
            reports.push(report);
        }
        Ok(CrReport { kind: self.kind, depth: self.depth, basis_size: self.basis.len(), relations: reports })
    }

    /// `UU*U = U` and `U*UU* = U*` on every enumerated basis vector; returns the number checked.
    pub fn partial_isometry_check(&self) -> Result<usize> {
        let u = RepOperator::Shift;
        let us = RepOperator::ShiftAdjoint;
        let mut checked = 0;
        for id in &self.basis {
            let e = SparseVector::basis(id.clone());
            let mut escaped = false;
            let a = self.word(&[&u, &us, &u], &e, &mut escaped)?;
            let b = self.word(&[&u], &e, &mut escaped)?;
            let c = self.word(&[&us, &u, &us], &e, &mut escaped)?;
            let d = self.word(&[&us], &e, &mut escaped)?;
            if a != b || c != d {
                return Err(breach(format!("U is not a partial isometry at {id:?}")));
            }
            checked += 1;
        }
        Ok(checked)
    }

    /// Diagonal entry of a diagonal word at `id`, or `None` if uncertified.
    fn diagonal(&self, ops: &[&RepOperator<F>], id: &BasisId) -> Result<Option<F>> {
        let mut escaped = false;
        let v = self.word(ops, &SparseVector::basis(id.clone()), &mut escaped)?;
        if escaped {
            return Ok(None);
        }
        if v.entries.keys().any(|k| k != id) {
            return Err(breach(format!("operator expected diagonal is not at {id:?}")));
        }
        Ok(Some(v.coefficient(id)))
    }

    /// Structural consequences for a diagonal representation of `C(X)`; failures are breaches.
    pub fn structural_checks(&self) -> Result<StructuralReport> {
        let tower = self.system.tower();
        let alg = tower.algebra().clone();
        let endo = tower.endo();
        let u = RepOperator::Shift;
        let us = RepOperator::ShiftAdjoint;
        let p = self.kernel_complement();
        let one = F::one();

        let mut gap_witness = None;
        let mut isometric = true;
        let mut certified = 0;
        for id in &self.basis {
            let (Some(uu), Some(pp)) = (self.diagonal(&[&us, &u], id)?, self.diagonal(&[&p], id)?) else {
                continue;
            };
            certified += 1;
            isometric &= uu == one;
            if uu == one && pp.is_zero() {
                return Err(breach(format!("U*U ≤ P fails at {id:?}")));
            }
            if uu.is_zero() && pp == one && gap_witness.is_none() {
                gap_witness = Some(id.clone());
            }
        }
        if certified == 0 {
            return Err(input("truncation too small to certify any vector"));
        }

        let basis = alg.basis::<F>();
        let ops: Vec<RepOperator<F>> = basis.iter().map(|a| RepOperator::Alg(a.clone())).collect();
        let deltas: Vec<RepOperator<F>> = basis.iter().map(|a| RepOperator::Alg(endo.apply(a))).collect();
        let ker = endo.kernel_ideal();
        let perp = ideal_complement(&alg, &ker)?;
        let one_minus = |op: &RepOperator<F>| -> RepOperator<F> {
            match op {
                RepOperator::Alg(a) => RepOperator::Alg(&alg.identity::<F>() - a),
                _ => unreachable!("diagonal algebra operators"),
            }
        };
        let q_op = one_minus(&p);

        // Each basis function χ_x, tested on every certified vector.
        let mut vanishes_uu = vec![true; basis.len()];
        let mut vanishes_p = vec![true; basis.len()];
        let mut fixed_by_1_minus_p = vec![true; basis.len()];
        let mut fixed_by_p = vec![true; basis.len()];
        let mut fixed_by_1_minus_uu = vec![true; basis.len()];
        for id in &self.basis {
            let e = SparseVector::basis(id.clone());
            for (i, a) in ops.iter().enumerate() {
                let mut escaped = false;
                let pa = self.word(&[a], &e, &mut escaped)?;
                let uu_a = self.word(&[&us, &u, a], &e, &mut escaped)?;
                let p_a = self.word(&[&p, a], &e, &mut escaped)?;
                let q_a = self.word(&[&q_op, a], &e, &mut escaped)?;
                let comm = self.word(&[a, &p], &e, &mut escaped)?;
                let iso_fwd = self.word(&[&u, &us, &u, a, &us], &e, &mut escaped)?;
                let delta_a = self.word(&[&deltas[i]], &e, &mut escaped)?;
                let iso_back = self.word(&[&us, &deltas[i], &u], &e, &mut escaped)?;
                if escaped {
                    continue;
                }
                if comm != p_a {
                    return Err(breach("P does not commute with π(A)"));
                }
                if iso_fwd != delta_a || iso_back != uu_a {
                    return Err(breach(format!("U*Uπ(A) ≅ δ(A) pair fails for basis element {i}")));
                }
                vanishes_uu[i] &= uu_a.is_zero();
                vanishes_p[i] &= p_a.is_zero();
                fixed_by_1_minus_p[i] &= q_a == pa;
                fixed_by_p[i] &= p_a == pa;
                fixed_by_1_minus_uu[i] &= pa.sub(&uu_a) == pa;
            }
        }
        let in_kernel: Vec<bool> = basis.iter().map(|a| ker.contains(a)).collect();
        let in_perp: Vec<bool> = basis.iter().map(|a| perp.contains(a)).collect();
        if fixed_by_1_minus_uu != in_kernel {
            return Err(breach("{a : (1 − U*U)π(a) = π(a)} differs from ker δ"));
        }
        if vanishes_uu != vanishes_p {
            return Err(breach("T₁(U*Uπ(a)) = Pπ(a) is not a well-defined injection"));
        }
        if fixed_by_1_minus_p != in_kernel || fixed_by_p != in_perp {
            return Err(breach("ideals read off P differ from ker δ and its complement"));
        }

        // δ̃ = U(·)U* on C*(π(A), P) and C*(π(A), U*U).
        let uu_op = |a: &RepOperator<F>, b: &RepOperator<F>, e: &SparseVector<F>, escaped: &mut bool| {
            let x = self.word(&[&us, &u, a], e, escaped)?;
            let y = self.word(&[b], e, escaped)?.sub(&self.word(&[&us, &u, b], e, escaped)?);
            Ok::<_, Error>(x.add(&y))
        };
        let mut conjugacy_checks = 0;
        for id in &self.basis {
            let e = SparseVector::basis(id.clone());
            for (i, a) in ops.iter().enumerate() {
                for b in &ops {
                    let mut escaped = false;
                    let us_e = self.word(&[&us], &e, &mut escaped)?;
                    let in_a1 = self.word(&[&p, a], &us_e, &mut escaped)?.add(&self.word(&[&q_op, b], &us_e, &mut escaped)?);
                    let lhs1 = self.apply_tracked(&u, &in_a1, &mut escaped)?;
                    let in_a2 = uu_op(a, b, &us_e, &mut escaped)?;
                    let lhs2 = self.apply_tracked(&u, &in_a2, &mut escaped)?;
                    let rhs = self.word(&[&deltas[i]], &e, &mut escaped)?;
                    if escaped {
                        continue;
                    }
                    if lhs1 != rhs || lhs2 != rhs {
                        return Err(breach("δ̃ ∘ T ≠ T ∘ δ̃"));
                    }
                    conjugacy_checks += 1;
                }
            }
        }

        let strict = gap_witness.is_none();
        match self.kind {
            RepKind::Strict if !strict => return Err(breach("strict realization has U*U < P")),
            RepKind::Example13 if strict => return Err(breach("non-strict realization has U*U = P")),
            _ => {}
        }
        if self.kind == RepKind::Strict && isometric != ker.is_zero() {
            return Err(breach("δ is a monomorphism but U is not an isometry, or conversely"));
        }

        let pi_plus = if self.kind == RepKind::Strict { Some(self.pi_plus_check()?) } else { None };

        let gap_dims = if self.kind == RepKind::Example13 {
            // a ↦ (1 − Ũ*Ũ)π(a) is injective on A while ker δ is smaller.
            let mut nonzero = vec![false; basis.len()];
            for id in &self.basis {
                let e = SparseVector::basis(id.clone());
                for (i, a) in ops.iter().enumerate() {
                    let mut escaped = false;
                    let v = self.word(&[a], &e, &mut escaped)?.sub(&self.word(&[&us, &u, a], &e, &mut escaped)?);
                    if !escaped && !v.is_zero() {
                        nonzero[i] = true;
                    }
                }
            }
            let image_dim = nonzero.iter().filter(|&&b| b).count();
            let kernel_dim = ker.dim(&alg);
            if image_dim != alg.dim() || kernel_dim == image_dim {
                return Err(breach("(1 − Ũ*Ũ)π(A) does not exhibit the expected gap"));
            }
            Some((image_dim, kernel_dim))
        } else {
            None
        };

        Ok(StructuralReport {
            certified_vectors: certified,
            strict,
            isometric,
            gap_witness,
            conjugacy_checks,
            pi_plus_checks: pi_plus,
            gap_dims,
        })
    }

    /// `π⁺((a + I) ⊕ (b + I^⊥)) = U*Uπ(a) + (1 − U*U)π(b)` with `π⁺ = π` under `A⁺ ≅ A`.
    fn pi_plus_check(&self) -> Result<usize> {
        let tower = self.system.tower();
        let alg = tower.algebra();
        let unitized = unitize_kernel(tower.endo())?;
        let u = RepOperator::Shift;
        let us = RepOperator::ShiftAdjoint;
        let basis = alg.basis::<F>();
        let mut checked = 0;
        for id in &self.basis {
            let e = SparseVector::basis(id.clone());
            for a in &basis {
                for b in &basis {
                    let plus = unitized.unembed(&unitized.pair(a, b));
                    let mut escaped = false;
                    let lhs = self.word(&[&RepOperator::Alg(plus)], &e, &mut escaped)?;
                    let ua = self.word(&[&us, &u, &RepOperator::Alg(a.clone())], &e, &mut escaped)?;
                    let pb = self.word(&[&RepOperator::Alg(b.clone())], &e, &mut escaped)?;
                    let uub = self.word(&[&us, &u, &RepOperator::Alg(b.clone())], &e, &mut escaped)?;
                    if escaped {
                        continue;
                    }
                    if lhs != ua.add(&pb.sub(&uub)) {
                        return Err(breach("π⁺ formula fails"));
                    }
                    checked += 1;
                }
            }
        }
        Ok(checked)
    }

    /// `π̃(Σ δ*ᵏ(aₖ)) = Σ U*ᵏπ(aₖ)Uᵏ` on certified vectors, for each coefficient list.
    pub fn correspondence_check(&self, lists: &[Vec<AlgebraElement<F>>]) -> Result<CorrespondenceReport> {
        if self.kind != RepKind::Strict {
            return Err(input("the correspondence is stated for the strict realization"));
        }
        let tower = self.system.tower();
        let u = RepOperator::Shift;
        let us = RepOperator::ShiftAdjoint;
        let mut report = CorrespondenceReport { lists: lists.len(), checks: 0, uncertified: 0 };
        for coeffs in lists {
            let b = RepOperator::Tower(tower.from_transfer_sum(coeffs)?);
            for id in &self.basis {
                let e = SparseVector::basis(id.clone());
                let mut escaped = false;
                let lhs = self.word(&[&b], &e, &mut escaped)?;
                let mut rhs = SparseVector::zero();
                for (k, a) in coeffs.iter().enumerate() {
                    let mut ops: Vec<&RepOperator<F>> = vec![&us; k];
                    let pa = RepOperator::Alg(a.clone());
                    ops.push(&pa);
                    ops.extend(std::iter::repeat_n(&u, k));
                    rhs = rhs.add(&self.word(&ops, &e, &mut escaped)?);
                }
                if escaped {
                    report.uncertified += 1;
                    continue;
                }
                if lhs != rhs {
                    return Err(breach(format!("correspondence fails at {id:?}")));
                }
                report.checks += 1;
            }
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    pub certified_vectors: usize,
    /// `U*U = P` on every certified vector.
    pub strict: bool,
    /// `U*U = 1` on every certified vector.
    pub isometric: bool,
    /// A vector with `U*U e = 0` and `P e = e`.
    pub gap_witness: Option<BasisId>,
    pub conjugacy_checks: usize,
    pub pi_plus_checks: Option<usize>,
    /// `(dim (1 − Ũ*Ũ)π(A), dim ker δ)` for the non-strict realization.
    pub gap_dims: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub lists: usize,
    pub checks: usize,
    pub uncertified: usize,
}
