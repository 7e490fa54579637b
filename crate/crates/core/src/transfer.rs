//! Transfer operators for an endomorphism `δ`.
//!
//! The canonical non-degenerate transfer comes from a trace-orthogonal
//! conditional expectation onto `δ(A)`. A complete transfer exists exactly
//! when the four completeness criteria hold.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{breach, input, CompletenessCondition, Error, Result};
use crate::finalg::{AlgebraElement, MultiMatrixAlgebra, ProjectionElement, StarEndomorphism};
use crate::linalg::{Matrix, Solver, Span};
use crate::scalar::StarField;

/// A linear map `A → A`, stored as its matrix in the matrix-unit basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap<F> {
    algebra: MultiMatrixAlgebra,
    matrix: Matrix<F>,
}

/// Candidate transfer operators are plain linear maps until verified.
pub type TransferCandidate<F> = LinearMap<F>;

impl<F: StarField> LinearMap<F> {
    pub fn from_matrix(algebra: MultiMatrixAlgebra, matrix: Matrix<F>) -> Result<Self> {
        let d = algebra.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(input(format!("linear map on a {d}-dimensional algebra needs a {d}×{d} matrix")));
        }
        Ok(LinearMap { algebra, matrix })
    }

    /// Tabulates `f` on the basis.
    pub fn from_fn(algebra: &MultiMatrixAlgebra, f: impl Fn(&AlgebraElement<F>) -> AlgebraElement<F>) -> Self {
        let columns: Vec<Vec<F>> = algebra.basis().iter().map(|b| f(b).coords()).collect();
        LinearMap { algebra: algebra.clone(), matrix: Matrix::from_columns(algebra.dim(), &columns) }
    }

    pub fn of_endomorphism(endo: &StarEndomorphism<F>) -> Self {
        Self::from_fn(endo.source(), |a| endo.apply(a))
    }

    pub fn zero(algebra: &MultiMatrixAlgebra) -> Self {
        LinearMap { algebra: algebra.clone(), matrix: Matrix::zeros(algebra.dim(), algebra.dim()) }
    }

    pub fn identity(algebra: &MultiMatrixAlgebra) -> Self {
        LinearMap { algebra: algebra.clone(), matrix: Matrix::identity(algebra.dim()) }
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn apply(&self, a: &AlgebraElement<F>) -> AlgebraElement<F> {
        self.algebra.from_coords(&self.matrix.mul_vec(&a.coords()))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        LinearMap { algebra: self.algebra.clone(), matrix: self.matrix.mul(&inner.matrix) }
    }
}

fn check_endo<F: StarField>(endo: &StarEndomorphism<F>) -> Result<()> {
    if endo.is_endomorphism() {
        Ok(())
    } else {
        Err(input("expected an endomorphism A → A"))
    }
}

fn check_map<F: StarField>(endo: &StarEndomorphism<F>, tau: &LinearMap<F>) -> Result<()> {
    check_endo(endo)?;
    if tau.algebra() != endo.source() {
        return Err(input("transfer candidate acts on a different algebra"));
    }
    Ok(())
}

/// Elements `x*x` whose images decide positivity at this scale: compressed
/// rank-one projections onto `e_c`, `e_c + e_d`, `e_c + i·e_d`, plus a few
/// seeded random rational `x`.
pub fn positivity_probes<F: StarField>(algebra: &MultiMatrixAlgebra) -> Vec<AlgebraElement<F>> {
    let mut xs = Vec::new();
    for (j, &n) in algebra.block_dims().iter().enumerate() {
        for c in 0..n {
            xs.push(algebra.matrix_unit(j, 0, c));
            for d in c + 1..n {
                let ec = algebra.matrix_unit::<F>(j, 0, c);
                let ed = algebra.matrix_unit::<F>(j, 0, d);
                xs.push(&ec + &ed);
                xs.push(&ec + &ed.scale(&F::i()));
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..3 {
        let coords: Vec<F> = (0..algebra.dim())
            .map(|_| F::from_parts((rng.gen_range(-3..=3), 1), (rng.gen_range(-3..=3), rng.gen_range(1..=3))))
            .collect();
        xs.push(algebra.from_coords(&coords));
    }
    xs.iter().map(|x| &x.adjoint() * x).collect()
}

/// `τ` is *-preserving and positive on the probe family.
/// `τ(δ(a)b) = aτ(b)` holds on all pairs of basis elements.
pub fn is_transfer<F: StarField>(endo: &StarEndomorphism<F>, tau: &LinearMap<F>) -> Result<bool> {
    check_map(endo, tau)?;
    let alg = endo.source();
    let basis = alg.basis::<F>();
    let star = basis.iter().all(|b| tau.apply(&b.adjoint()) == tau.apply(b).adjoint());
    if !star {
        return Ok(false);
    }
    if !positivity_probes::<F>(alg).iter().all(|y| tau.apply(y).is_positive()) {
        return Ok(false);
    }
    let images: Vec<AlgebraElement<F>> = basis.iter().map(|a| endo.apply(a)).collect();
    let tau_b: Vec<AlgebraElement<F>> = basis.iter().map(|b| tau.apply(b)).collect();
    for (a, da) in basis.iter().zip(&images) {
        for (b, tb) in basis.iter().zip(&tau_b) {
            if tau.apply(&(da * b)) != a * tb {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `δτδ = δ`, cross-checked against `δ(τ(1)) = δ(1)`.
pub fn is_nondegenerate<F: StarField>(endo: &StarEndomorphism<F>, tau: &LinearMap<F>) -> Result<bool> {
    if !is_transfer(endo, tau)? {
        return Err(input("candidate is not a transfer operator"));
    }
    let alg = endo.source();
    let retraction = alg.basis::<F>().iter().all(|a| {
        let da = endo.apply(a);
        endo.apply(&tau.apply(&da)) == da
    });
    let one = alg.identity::<F>();
    let unit_condition = endo.apply(&tau.apply(&one)) == endo.apply(&one);
    if retraction != unit_condition {
        return Err(breach(format!(
            "non-degeneracy conditions disagree: δτδ=δ is {retraction}, δ(τ(1))=δ(1) is {unit_condition}"
        )));
    }
    Ok(retraction)
}

/// Matrix units outside the kernel blocks: a basis of `pA`, `p = 1 − q`.
fn complement_basis<F: StarField>(endo: &StarEndomorphism<F>) -> Vec<AlgebraElement<F>> {
    let alg = endo.source();
    let ker = endo.kernel_ideal();
    let mut out = Vec::new();
    for (j, &n) in alg.block_dims().iter().enumerate() {
        if ker.blocks().contains(&j) {
            continue;
        }
        for r in 0..n {
            for c in 0..n {
                out.push(alg.matrix_unit(j, r, c));
            }
        }
    }
    out
}

/// Images of the `pA` basis under `δ`, as columns.
fn range_matrix<F: StarField>(endo: &StarEndomorphism<F>, pbasis: &[AlgebraElement<F>]) -> Matrix<F> {
    let cols: Vec<Vec<F>> = pbasis.iter().map(|b| endo.apply(b).coords()).collect();
    Matrix::from_columns(endo.target().dim(), &cols)
}

fn combine<F: StarField>(alg: &MultiMatrixAlgebra, basis: &[AlgebraElement<F>], coeffs: &[F]) -> AlgebraElement<F> {
    basis
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .fold(alg.zero(), |acc, (b, c)| &acc + &b.scale(c))
}

/// `τ(a) = δ⁻¹(E(δ(1)aδ(1)))` with `E` the trace-orthogonal projection of
/// the corner `δ(1)Aδ(1)` onto `δ(A)`.
pub fn canonical_nondegenerate_transfer<F: StarField>(endo: &StarEndomorphism<F>) -> Result<LinearMap<F>> {
    check_endo(endo)?;
    let alg = endo.source();
    let pbasis = complement_basis(endo);
    let m = range_matrix(endo, &pbasis);
    let m_adj = m.adjoint();
    let gram_inv = m_adj
        .mul(&m)
        .inverse()
        .ok_or_else(|| breach("δ is not injective on the complement of its kernel"))?;
    let project = gram_inv.mul(&m_adj);
    let d1 = endo.apply(&alg.identity());
    Ok(LinearMap::from_fn(alg, |a| {
        let coeffs = project.mul_vec(&a.compress(&d1).coords());
        combine(alg, &pbasis, &coeffs)
    }))
}

/// `δ*(a) = δ⁻¹(δ(1)aδ(1))`, defined exactly when the system is complete.
pub fn complete_transfer<F: StarField>(endo: &StarEndomorphism<F>) -> Result<LinearMap<F>> {
    let class = endo.classify()?;
    if !class.complete {
        let mut failed = Vec::new();
        if !class.unital_kernel {
            failed.push(CompletenessCondition::UnitalKernel);
        }
        if !class.hereditary_range {
            failed.push(CompletenessCondition::HereditaryRange);
        }
        return Err(Error::NotComplete { failed });
    }
    let alg = endo.source();
    let pbasis = complement_basis(endo);
    let solver = Solver::new(&range_matrix(endo, &pbasis));
    let d1 = endo.apply(&alg.identity());
    let mut columns = Vec::with_capacity(alg.dim());
    for a in alg.basis::<F>() {
        let coeffs = solver
            .solve(&a.compress(&d1).coords())
            .ok_or_else(|| breach("corner element outside the range of a hereditary δ"))?;
        columns.push(combine(alg, &pbasis, &coeffs).coords());
    }
    LinearMap::from_matrix(alg.clone(), Matrix::from_columns(alg.dim(), &columns))
}

/// `δ(τ(a)) = δ(1)aδ(1)` on every basis element.
pub fn satisfies_corner_identity<F: StarField>(endo: &StarEndomorphism<F>, tau: &LinearMap<F>) -> bool {
    let alg = endo.source();
    let d1 = endo.apply(&alg.identity());
    alg.basis::<F>().iter().all(|a| endo.apply(&tau.apply(a)) == a.compress(&d1))
}

/// `δ(1)Aδ(1) ⊆ span δ(A)`, decided by explicit spans rather than dimension counts.
pub fn hereditary_by_span<F: StarField>(endo: &StarEndomorphism<F>) -> bool {
    let alg = endo.source();
    let basis = alg.basis::<F>();
    let mut range = Span::new(alg.dim());
    for b in &basis {
        range.insert(&endo.apply(b).coords());
    }
    let d1 = endo.apply(&alg.identity());
    basis.iter().all(|b| range.contains(&b.compress(&d1).coords()))
}

/// Outcome of deciding each completeness criterion on its own.
#[derive(Clone, Debug, PartialEq)]
pub struct CompletenessReport<F> {
    /// Unital kernel and hereditary range.
    pub i: bool,
    /// Some transfer operator satisfies `δδ*(a) = δ(1)aδ(1)`.
    pub ii: bool,
    /// A non-degenerate transfer exists and the range is hereditary.
    pub iii: bool,
    /// A central projection `p` with `δ: pA → δ(A)` bijective and hereditary range.
    pub iv: bool,
    /// The projection found for (iv).
    pub p: Option<ProjectionElement<F>>,
    /// `δ*(1)` of the complete transfer operator, when complete.
    pub transfer_unit: Option<AlgebraElement<F>>,
    pub kernel_unit: ProjectionElement<F>,
}

impl<F> CompletenessReport<F> {
    pub fn complete(&self) -> bool {
        self.i
    }
}

pub fn completeness_report<F: StarField>(endo: &StarEndomorphism<F>) -> Result<CompletenessReport<F>> {
    check_endo(endo)?;
    let alg = endo.source();
    let class = endo.classify()?;
    let i = class.complete;

    let canonical = canonical_nondegenerate_transfer(endo)?;
    let complete = complete_transfer(endo).ok();
    let mut ii = false;
    for tau in std::iter::once(&canonical).chain(complete.as_ref()) {
        if is_transfer(endo, tau)? && satisfies_corner_identity(endo, tau) {
            ii = true;
        }
    }

    let hereditary = hereditary_by_span(endo);
    let iii = is_nondegenerate(endo, &canonical)? && hereditary;

    let basis = alg.basis::<F>();
    let mut range = Span::new(alg.dim());
    for b in &basis {
        range.insert(&endo.apply(b).coords());
    }
    let mut witness = None;
    if hereditary {
        for p in alg.central_projections::<F>()? {
            let pa = crate::finalg::independent_subset(alg.dim(), basis.iter().map(|b| p.element() * b));
            let mut image = Span::new(alg.dim());
            let injective = pa.iter().all(|b| image.insert(&endo.apply(b).coords()));
            if injective && image.dim() == range.dim() {
                witness = Some(p);
                break;
            }
        }
    }
    let iv = witness.is_some();

    if !(i == ii && ii == iii && iii == iv) {
        return Err(breach(format!("completeness criteria disagree: i={i} ii={ii} iii={iii} iv={iv}")));
    }
    let q = endo.kernel_unit();
    let transfer_unit = complete.as_ref().map(|tau| tau.apply(&alg.identity()));
    if let (Some(p), Some(t1)) = (&witness, &transfer_unit) {
        let complement = q.complement();
        if p.element() != t1 || p != &complement {
            return Err(breach("complete system with p ≠ δ*(1) or p ≠ 1 − q"));
        }
    }
    Ok(CompletenessReport { i, ii, iii, iv, p: witness, transfer_unit, kernel_unit: q })
}

/// `E = δ∘τ`, verified to be a conditional expectation onto `δ(A)`.
#[derive(Clone, Debug)]
pub struct ConditionalExpectation<F> {
    map: LinearMap<F>,
}

impl<F: StarField> ConditionalExpectation<F> {
    pub fn map(&self) -> &LinearMap<F> {
        &self.map
    }

    pub fn apply(&self, a: &AlgebraElement<F>) -> AlgebraElement<F> {
        self.map.apply(a)
    }
}

pub fn conditional_expectation<F: StarField>(
    endo: &StarEndomorphism<F>,
    tau: &LinearMap<F>,
) -> Result<ConditionalExpectation<F>> {
    if !is_nondegenerate(endo, tau)? {
        return Err(input("conditional expectation needs a non-degenerate transfer operator"));
    }
    let alg = endo.source();
    let e = LinearMap::of_endomorphism(endo).compose(tau);
    let basis = alg.basis::<F>();
    if !basis.iter().all(|a| {
        let ea = e.apply(a);
        e.apply(&ea) == ea
    }) {
        return Err(breach("δ∘τ is not idempotent"));
    }
    if !positivity_probes::<F>(alg).iter().all(|y| e.apply(y).is_positive()) {
        return Err(breach("δ∘τ is not positive"));
    }
    let range = crate::finalg::independent_subset(alg.dim(), basis.iter().map(|b| endo.apply(b)));
    for a in &basis {
        let ea = e.apply(a);
        for x in &range {
            for y in &range {
                if e.apply(&(&(x * a) * y)) != &(x * &ea) * y {
                    return Err(breach("δ∘τ is not δ(A)-bimodular"));
                }
            }
        }
    }
    Ok(ConditionalExpectation { map: e })
}

/// Affine space of linear maps satisfying `τ(δ(a)b) = aτ(b)` and `δτδ = δ`
/// on a commutative algebra.
#[derive(Clone, Debug)]
pub struct TransferSolutions<F> {
    pub particular: Option<LinearMap<F>>,
    /// Dimension of the homogeneous solution space.
    pub free_dim: usize,
}

impl<F> TransferSolutions<F> {
    /// Exactly one linear map satisfies the constraints.
    pub fn is_singleton(&self) -> bool {
        self.particular.is_some() && self.free_dim == 0
    }
}

pub fn transfer_solution_space<F: StarField>(endo: &StarEndomorphism<F>) -> Result<TransferSolutions<F>> {
    check_endo(endo)?;
    let alg = endo.source();
    if !alg.is_commutative() {
        return Err(input("exhaustive transfer solving is limited to commutative algebras"));
    }
    let n = alg.dim();
    let d = LinearMap::of_endomorphism(endo).matrix().clone();
    let var = |r: usize, c: usize| r * n + c;
    let mut rows: Vec<Vec<F>> = Vec::new();
    let mut rhs: Vec<F> = Vec::new();
    // τ(δ(e_a)e_b) − e_a τ(e_b) = 0, coordinate r.
    for a in 0..n {
        for b in 0..n {
            // δ(e_a)·e_b is d[b][a]·e_b in the commutative case.
            let coeff = d[(b, a)].clone();
            for r in 0..n {
                let mut row = vec![F::zero(); n * n];
                row[var(r, b)] = coeff.clone();
                if r == a {
                    row[var(r, b)] = row[var(r, b)].clone() - F::one();
                }
                rows.push(row);
                rhs.push(F::zero());
            }
        }
    }
    // (DTD)[s][a] = D[s][a].
    for s in 0..n {
        for a in 0..n {
            let mut row = vec![F::zero(); n * n];
            for r in 0..n {
                for c in 0..n {
                    let w = d[(s, r)].clone() * d[(c, a)].clone();
                    if !w.is_zero() {
                        row[var(r, c)] = row[var(r, c)].clone() + w;
                    }
                }
            }
            rows.push(row);
            rhs.push(d[(s, a)].clone());
        }
    }
    let system = Matrix::from_rows(rows);
    let particular = system
        .solve(&rhs)
        .map(|t| LinearMap { algebra: alg.clone(), matrix: Matrix::from_fn(n, n, |r, c| t[var(r, c)].clone()) });
    let free_dim = system.nullspace().len();
    Ok(TransferSolutions { particular, free_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{partial_map, Fixture};
    use crate::GaussRat;
    use num_traits::Zero;

    type Q = GaussRat;

    fn endo(f: Fixture) -> StarEndomorphism<Q> {
        partial_map(f).induced_endomorphism().1
    }

    /// Linear map on functions on three points given pointwise.
    fn pointwise(alg: &MultiMatrixAlgebra, f: impl Fn(&[Q]) -> [Q; 3]) -> LinearMap<Q> {
        LinearMap::from_fn(alg, |a: &AlgebraElement<Q>| {
            let v: Vec<Q> = (0..3).map(|x| a.value(x).clone()).collect();
            alg.from_values(&f(&v)).unwrap()
        })
    }

    fn half() -> Q {
        Q::from_ratio(1, 2)
    }

    fn merge_avg(alg: &MultiMatrixAlgebra) -> LinearMap<Q> {
        pointwise(alg, |a| [(a[0].clone() + a[1].clone()) * half(), a[2].clone(), Q::zero()])
    }

    fn merge_second(alg: &MultiMatrixAlgebra) -> LinearMap<Q> {
        pointwise(alg, |a| [a[1].clone(), a[2].clone(), Q::zero()])
    }

    #[test]
    fn transfer_examples_on_merge() {
        let d = endo(Fixture::Merge);
        let alg = d.source().clone();
        assert!(is_transfer(&d, &merge_avg(&alg)).unwrap());
        assert!(is_transfer(&d, &merge_second(&alg)).unwrap());
        let bad = pointwise(&alg, |a| [a[2].clone(), a[0].clone(), Q::zero()]);
        assert!(!is_transfer(&d, &bad).unwrap());
    }

    #[test]
    fn nondegeneracy_examples() {
        let d = endo(Fixture::Merge);
        let alg = d.source().clone();
        assert!(is_nondegenerate(&d, &merge_avg(&alg)).unwrap());

        let s = endo(Fixture::Shift3);
        let tau = pointwise(&alg, |a| [Q::zero(), a[0].clone(), a[1].clone()]);
        assert!(is_nondegenerate(&s, &tau).unwrap());

        for f in Fixture::ALL {
            let d = endo(f);
            let zero = LinearMap::zero(d.source());
            assert!(!is_nondegenerate(&d, &zero).unwrap());
        }
        let bad = pointwise(&alg, |a| [a[2].clone(), a[0].clone(), Q::zero()]);
        assert!(matches!(is_nondegenerate(&d, &bad), Err(Error::Input(_))));
    }

    #[test]
    fn canonical_transfers() {
        let d = endo(Fixture::Merge);
        let alg = d.source().clone();
        assert_eq!(canonical_nondegenerate_transfer(&d).unwrap(), merge_avg(&alg));
        let s = endo(Fixture::Shift3);
        let expected = pointwise(&alg, |a| [Q::zero(), a[0].clone(), a[1].clone()]);
        assert_eq!(canonical_nondegenerate_transfer(&s).unwrap(), expected);
        let i = endo(Fixture::Id);
        assert_eq!(canonical_nondegenerate_transfer(&i).unwrap(), LinearMap::identity(i.source()));
    }

    #[test]
    fn complete_transfers() {
        let s = endo(Fixture::Shift3);
        let alg = s.source().clone();
        let expected = pointwise(&alg, |a| [Q::zero(), a[0].clone(), a[1].clone()]);
        assert_eq!(complete_transfer(&s).unwrap(), expected);
        let i = endo(Fixture::Id);
        assert_eq!(complete_transfer(&i).unwrap(), LinearMap::identity(i.source()));
        match complete_transfer(&endo(Fixture::Const3)) {
            Err(Error::NotComplete { failed }) => assert_eq!(failed, vec![CompletenessCondition::HereditaryRange]),
            other => panic!("expected NotComplete, got {other:?}"),
        }
    }

    #[test]
    fn completeness_reports() {
        let r = completeness_report(&endo(Fixture::Shift3)).unwrap();
        assert!(r.i && r.ii && r.iii && r.iv);
        let alg = MultiMatrixAlgebra::commutative(3);
        let p = alg.from_values(&[0, 1, 1].map(Q::from_i64)).unwrap();
        assert_eq!(r.p.unwrap().element(), &p);

        let r = completeness_report(&endo(Fixture::Const3)).unwrap();
        assert!(!r.i && !r.ii && !r.iii && !r.iv);

        let d = endo(Fixture::Id);
        let r = completeness_report(&d).unwrap();
        assert!(r.complete());
        assert_eq!(r.p.unwrap().element(), &d.source().identity());
    }

    #[test]
    fn conditional_expectations() {
        let d = endo(Fixture::Merge);
        let alg = d.source().clone();
        let e = conditional_expectation(&d, &canonical_nondegenerate_transfer(&d).unwrap()).unwrap();
        let expected = pointwise(&alg, |a| {
            let m = (a[0].clone() + a[1].clone()) * half();
            [m.clone(), m, a[2].clone()]
        });
        assert_eq!(e.map(), &expected);

        let s = endo(Fixture::Shift3);
        let e = conditional_expectation(&s, &complete_transfer(&s).unwrap()).unwrap();
        assert_eq!(e.map(), &pointwise(&alg, |a| [a[0].clone(), a[1].clone(), Q::zero()]));

        let i = endo(Fixture::Id);
        let e = conditional_expectation(&i, &complete_transfer(&i).unwrap()).unwrap();
        assert_eq!(e.map(), &LinearMap::identity(i.source()));
    }

    #[test]
    fn uniqueness_of_transfers() {
        assert!(transfer_solution_space(&endo(Fixture::Shift3)).unwrap().is_singleton());
        assert!(transfer_solution_space(&endo(Fixture::Id)).unwrap().is_singleton());
        let merge = transfer_solution_space(&endo(Fixture::Merge)).unwrap();
        assert!(!merge.is_singleton());
        assert!(merge.free_dim > 0);
        let d = endo(Fixture::Merge);
        let alg = d.source().clone();
        assert_ne!(merge_avg(&alg), merge_second(&alg));
        assert!(is_nondegenerate(&d, &merge_second(&alg)).unwrap());
    }
}
