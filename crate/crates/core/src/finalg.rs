//! Finite-dimensional C*-algebras as direct sums of full matrix blocks,
//! with *-homomorphisms between them in Bratteli normal form.

use std::collections::BTreeSet;
use std::ops::{Add, Mul, Sub};



use crate::error::{breach, input, Result};
use crate::linalg::{Matrix, Span};
use crate::scalar::StarField;

/// Default refusal threshold for enumerating `2^B` central projections.
pub const CENTRAL_PROJECTION_BLOCK_LIMIT: usize = 20;

/// `M_{n_1} ⊕ … ⊕ M_{n_B}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiMatrixAlgebra {
    block_dims: Vec<usize>,
}

impl MultiMatrixAlgebra {
    /// Every block size must be positive. An empty list is the zero algebra.
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.contains(&0) {
            return Err(input("block dimensions must be positive"));
        }
        Ok(MultiMatrixAlgebra { block_dims })
    }

    /// Functions on `n` points.
    pub fn commutative(n: usize) -> Self {
        MultiMatrixAlgebra { block_dims: vec![1; n] }
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    pub fn is_commutative(&self) -> bool {
        self.block_dims.iter().all(|&n| n == 1)
    }

    pub fn zero<F: StarField>(&self) -> AlgebraElement<F> {
        AlgebraElement { blocks: self.block_dims.iter().map(|&n| Matrix::zeros(n, n)).collect() }
    }

    pub fn identity<F: StarField>(&self) -> AlgebraElement<F> {
        AlgebraElement { blocks: self.block_dims.iter().map(|&n| Matrix::identity(n)).collect() }
    }

    /// Sum of the identities of the listed blocks.
    pub fn block_unit<F: StarField>(&self, blocks: &BTreeSet<usize>) -> AlgebraElement<F> {
        AlgebraElement {
            blocks: self
                .block_dims
                .iter()
                .enumerate()
                .map(|(j, &n)| if blocks.contains(&j) { Matrix::identity(n) } else { Matrix::zeros(n, n) })
                .collect(),
        }
    }

    /// Matrix unit `E_{r,c}` in block `j`.
    pub fn matrix_unit<F: StarField>(&self, j: usize, r: usize, c: usize) -> AlgebraElement<F> {
        let mut z = self.zero();
        z.blocks[j][(r, c)] = F::one();
        z
    }

    /// Matrix units ordered by block, row, column; orthonormal for the trace form.
    pub fn basis<F: StarField>(&self) -> Vec<AlgebraElement<F>> {
        let mut out = Vec::with_capacity(self.dim());
        for (j, &n) in self.block_dims.iter().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    out.push(self.matrix_unit(j, r, c));
                }
            }
        }
        out
    }

    /// Index of `E_{r,c}` of block `j` within [`basis`](Self::basis).
    pub fn basis_index(&self, j: usize, r: usize, c: usize) -> usize {
        let offset: usize = self.block_dims[..j].iter().map(|n| n * n).sum();
        offset + r * self.block_dims[j] + c
    }

    pub fn from_coords<F: StarField>(&self, coords: &[F]) -> AlgebraElement<F> {
        assert_eq!(coords.len(), self.dim(), "coordinate length");
        let mut blocks = Vec::with_capacity(self.num_blocks());
        let mut offset = 0;
        for &n in &self.block_dims {
            blocks.push(Matrix::from_fn(n, n, |r, c| coords[offset + r * n + c].clone()));
            offset += n * n;
        }
        AlgebraElement { blocks }
    }

    /// Diagonal element of a commutative algebra.
    pub fn from_values<F: StarField>(&self, values: &[F]) -> Result<AlgebraElement<F>> {
        if !self.is_commutative() || values.len() != self.num_blocks() {
            return Err(input("from_values needs a commutative algebra and one value per point"));
        }
        Ok(AlgebraElement {
            blocks: values.iter().map(|v| Matrix::from_rows(vec![vec![v.clone()]])).collect(),
        })
    }

    pub fn contains<F: StarField>(&self, a: &AlgebraElement<F>) -> bool {
        a.blocks.len() == self.block_dims.len()
            && a.blocks.iter().zip(&self.block_dims).all(|(b, &n)| b.rows() == n && b.cols() == n)
    }

    pub fn check<F: StarField>(&self, a: &AlgebraElement<F>) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(input(format!(
                "element of shape {:?} does not belong to algebra {:?}",
                a.shape(),
                self.block_dims
            )))
        }
    }

    /// All sums of block identities, in subset-bitmask order.
    pub fn central_projections<F: StarField>(&self) -> Result<Vec<ProjectionElement<F>>> {
        self.central_projections_with_limit(CENTRAL_PROJECTION_BLOCK_LIMIT)
    }

    pub fn central_projections_with_limit<F: StarField>(
        &self,
        limit: usize,
    ) -> Result<Vec<ProjectionElement<F>>> {
        let b = self.num_blocks();
        if b > limit {
            return Err(crate::Error::Limit { what: format!("{b} blocks"), limit });
        }
        Ok((0u64..1 << b)
            .map(|mask| {
                let set = (0..b).filter(|j| mask >> j & 1 == 1).collect();
                ProjectionElement(self.block_unit(&set))
            })
            .collect())
    }
}

/// Tuple of square blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<F> {
    blocks: Vec<Matrix<F>>,
}

impl<F: StarField> AlgebraElement<F> {
    pub fn from_blocks(blocks: Vec<Matrix<F>>) -> Result<Self> {
        if blocks.iter().any(|b| !b.is_square()) {
            return Err(input("blocks must be square"));
        }
        Ok(AlgebraElement { blocks })
    }

    pub fn blocks(&self) -> &[Matrix<F>] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> &Matrix<F> {
        &self.blocks[j]
    }

    pub fn shape(&self) -> Vec<usize> {
        self.blocks.iter().map(Matrix::rows).collect()
    }

    pub fn algebra(&self) -> MultiMatrixAlgebra {
        MultiMatrixAlgebra { block_dims: self.shape() }
    }

    /// Value at point `x` of a commutative element.
    pub fn value(&self, x: usize) -> &F {
        debug_assert_eq!(self.blocks[x].rows(), 1);
        &self.blocks[x][(0, 0)]
    }

    /// Coordinates in the matrix-unit basis.
    pub fn coords(&self) -> Vec<F> {
        self.blocks.iter().flat_map(|b| b.entries().iter().cloned()).collect()
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!(self.shape(), other.shape(), "algebra element shape mismatch");
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement { blocks: self.blocks.iter().map(Matrix::adjoint).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        AlgebraElement { blocks: self.blocks.iter().map(|b| b.scale(s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.blocks.iter().all(Matrix::is_hermitian)
    }

    pub fn is_projection(&self) -> bool {
        self.is_self_adjoint() && &(self * self) == self
    }

    pub fn is_positive(&self) -> bool {
        self.blocks.iter().all(Matrix::is_positive_semidefinite)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self * other == other * self
    }

    /// Central iff every block is a scalar multiple of the identity.
    pub fn is_central(&self) -> bool {
        self.blocks.iter().all(|b| {
            let d = b[(0, 0)].clone();
            (0..b.rows()).all(|r| {
                (0..b.cols()).all(|c| if r == c { b[(r, c)] == d } else { b[(r, c)].is_zero() })
            })
        })
    }

    /// `e·self·e`.
    pub fn compress(&self, e: &Self) -> Self {
        &(e * self) * e
    }
}

impl<F: StarField> Mul for &AlgebraElement<F> {
    type Output = AlgebraElement<F>;
    fn mul(self, rhs: Self) -> AlgebraElement<F> {
        self.same_shape(rhs);
        AlgebraElement { blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a.mul(b)).collect() }
    }
}

impl<F: StarField> Add for &AlgebraElement<F> {
    type Output = AlgebraElement<F>;
    fn add(self, rhs: Self) -> AlgebraElement<F> {
        self.same_shape(rhs);
        AlgebraElement { blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a.add(b)).collect() }
    }
}

impl<F: StarField> Sub for &AlgebraElement<F> {
    type Output = AlgebraElement<F>;
    fn sub(self, rhs: Self) -> AlgebraElement<F> {
        self.same_shape(rhs);
        AlgebraElement { blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a.sub(b)).collect() }
    }
}

/// Self-adjoint idempotent.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionElement<F>(AlgebraElement<F>);

impl<F: StarField> ProjectionElement<F> {
    pub fn new(e: AlgebraElement<F>) -> Result<Self> {
        if e.is_projection() {
            Ok(ProjectionElement(e))
        } else {
            Err(input("element is not a projection"))
        }
    }

    pub fn element(&self) -> &AlgebraElement<F> {
        &self.0
    }

    pub fn into_element(self) -> AlgebraElement<F> {
        self.0
    }

    /// Rank of each block.
    pub fn ranks(&self) -> Vec<usize> {
        // The trace of a projection is its rank.
        self.0
            .blocks
            .iter()
            .map(|b| {
                let t = b.trace();
                (0..b.rows()).take_while(|&k| t != F::from_i64(k as i64)).count()
            })
            .collect()
    }

    pub fn is_central(&self) -> bool {
        self.0.is_central()
    }

    /// `self ≤ other`, i.e. `self·other = self`.
    pub fn is_below(&self, other: &Self) -> bool {
        &self.0 * &other.0 == self.0
    }

    /// `1 − self`.
    pub fn complement(&self) -> Self {
        ProjectionElement(&self.0.algebra().identity() - &self.0)
    }
}

/// Two-sided ideal: a set of blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    num_blocks: usize,
    blocks: BTreeSet<usize>,
}

impl Ideal {
    pub fn new(algebra: &MultiMatrixAlgebra, blocks: BTreeSet<usize>) -> Result<Self> {
        if blocks.iter().any(|&j| j >= algebra.num_blocks()) {
            return Err(input("ideal block index out of range"));
        }
        Ok(Ideal { num_blocks: algebra.num_blocks(), blocks })
    }

    pub fn zero(algebra: &MultiMatrixAlgebra) -> Self {
        Ideal { num_blocks: algebra.num_blocks(), blocks: BTreeSet::new() }
    }

    pub fn blocks(&self) -> &BTreeSet<usize> {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Dimension of the ideal inside `algebra`.
    pub fn dim(&self, algebra: &MultiMatrixAlgebra) -> usize {
        self.blocks.iter().map(|&j| algebra.block_dims[j].pow(2)).sum()
    }

    /// Largest ideal meeting `self` only in zero.
    pub fn complement(&self) -> Ideal {
        Ideal {
            num_blocks: self.num_blocks,
            blocks: (0..self.num_blocks).filter(|j| !self.blocks.contains(j)).collect(),
        }
    }

    /// The sum of the block identities; a central projection.
    pub fn unit<F: StarField>(&self, algebra: &MultiMatrixAlgebra) -> ProjectionElement<F> {
        ProjectionElement(algebra.block_unit(&self.blocks))
    }

    pub fn contains<F: StarField>(&self, a: &AlgebraElement<F>) -> bool {
        a.blocks.iter().enumerate().all(|(j, b)| self.blocks.contains(&j) || b.is_zero())
    }
}

/// Corner `eAe` of an algebra.
#[derive(Clone, Debug)]
pub struct Corner<F> {
    algebra: MultiMatrixAlgebra,
    projection: ProjectionElement<F>,
}

impl<F: StarField> Corner<F> {
    /// Abstract block structure: one block of size `rank(e_j)` per non-zero block of `e`.
    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn projection(&self) -> &ProjectionElement<F> {
        &self.projection
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn compress(&self, a: &AlgebraElement<F>) -> AlgebraElement<F> {
        a.compress(self.projection.element())
    }

    /// Inclusion of `eAe` into `A`; rejects elements not fixed by compression.
    pub fn embed(&self, x: &AlgebraElement<F>) -> Result<AlgebraElement<F>> {
        if &self.compress(x) == x {
            Ok(x.clone())
        } else {
            Err(input("element does not lie in the corner"))
        }
    }

    /// A basis of `eAe` made of compressed matrix units.
    pub fn basis(&self) -> Vec<AlgebraElement<F>> {
        let ambient = self.projection.element().algebra();
        independent_subset(ambient.dim(), ambient.basis().iter().map(|u| self.compress(u)))
    }
}

/// `(eAe, a ↦ eae, inclusion)`.
pub fn corner_algebra<F: StarField>(
    algebra: &MultiMatrixAlgebra,
    e: &AlgebraElement<F>,
) -> Result<Corner<F>> {
    algebra.check(e)?;
    let projection = ProjectionElement::new(e.clone())?;
    let dims = projection.ranks().into_iter().filter(|&r| r > 0).collect();
    Ok(Corner { algebra: MultiMatrixAlgebra { block_dims: dims }, projection })
}

/// Greedy linearly independent subset of the given elements (by coordinates).
pub fn independent_subset<F: StarField>(
    dim: usize,
    elements: impl IntoIterator<Item = AlgebraElement<F>>,
) -> Vec<AlgebraElement<F>> {
    let mut span = Span::new(dim);
    elements.into_iter().filter(|e| span.insert(&e.coords())).collect()
}

/// Target block `W · blockdiag(a_{i_1}, …, a_{i_m}, 0_r) · W*` of a *-homomorphism.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetBlock<F> {
    pub multiplicity: Vec<usize>,
    pub padding: usize,
    pub unitary: Matrix<F>,
}

impl<F: StarField> TargetBlock<F> {
    /// Unconjugated block.
    pub fn plain(multiplicity: Vec<usize>, padding: usize, source: &MultiMatrixAlgebra) -> Self {
        let n = multiplicity.iter().map(|&i| source.block_dims[i]).sum::<usize>() + padding;
        TargetBlock { multiplicity, padding, unitary: Matrix::identity(n) }
    }
}

/// *-homomorphism between multi-matrix algebras in Bratteli normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct StarEndomorphism<F> {
    source: MultiMatrixAlgebra,
    target: MultiMatrixAlgebra,
    blocks: Vec<TargetBlock<F>>,
}

impl<F: StarField> StarEndomorphism<F> {
    pub fn new(
        source: MultiMatrixAlgebra,
        target: MultiMatrixAlgebra,
        blocks: Vec<TargetBlock<F>>,
    ) -> Result<Self> {
        if blocks.len() != target.num_blocks() {
            return Err(input(format!(
                "{} target block descriptions for {} target blocks",
                blocks.len(),
                target.num_blocks()
            )));
        }
        for (j, tb) in blocks.iter().enumerate() {
            if let Some(&bad) = tb.multiplicity.iter().find(|&&i| i >= source.num_blocks()) {
                return Err(input(format!("target block {j} references missing source block {bad}")));
            }
            let filled: usize =
                tb.multiplicity.iter().map(|&i| source.block_dims[i]).sum::<usize>() + tb.padding;
            let n = target.block_dims[j];
            if filled != n {
                return Err(input(format!(
                    "target block {j}: multiplicities and padding fill {filled} rows, block has {n}"
                )));
            }
            if tb.unitary.rows() != n || tb.unitary.cols() != n {
                return Err(input(format!("target block {j}: unitary must be {n}×{n}")));
            }
            if !tb.unitary.is_unitary() {
                return Err(input(format!("target block {j}: conjugator is not unitary")));
            }
        }
        Ok(StarEndomorphism { source, target, blocks })
    }

    pub fn identity(algebra: &MultiMatrixAlgebra) -> Self {
        let blocks = (0..algebra.num_blocks()).map(|j| TargetBlock::plain(vec![j], 0, algebra)).collect();
        StarEndomorphism { source: algebra.clone(), target: algebra.clone(), blocks }
    }

    pub fn source(&self) -> &MultiMatrixAlgebra {
        &self.source
    }

    pub fn target(&self) -> &MultiMatrixAlgebra {
        &self.target
    }

    pub fn target_blocks(&self) -> &[TargetBlock<F>] {
        &self.blocks
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    /// Panics when `a` is not in the source algebra; see [`try_apply`](Self::try_apply).
    pub fn apply(&self, a: &AlgebraElement<F>) -> AlgebraElement<F> {
        assert!(self.source.contains(a), "element not in the source algebra");
        let blocks = self
            .blocks
            .iter()
            .map(|tb| {
                let mut parts: Vec<Matrix<F>> = tb.multiplicity.iter().map(|&i| a.blocks[i].clone()).collect();
                parts.push(Matrix::zeros(tb.padding, tb.padding));
                let inner = Matrix::block_diag(&parts);
                if tb.unitary.is_identity() {
                    inner
                } else {
                    tb.unitary.mul(&inner).mul(&tb.unitary.adjoint())
                }
            })
            .collect();
        AlgebraElement { blocks }
    }

    pub fn try_apply(&self, a: &AlgebraElement<F>) -> Result<AlgebraElement<F>> {
        self.source.check(a)?;
        Ok(self.apply(a))
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.target != self.source {
            return Err(input("composition shape mismatch"));
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for tb in &self.blocks {
            let mut multiplicity = Vec::new();
            // Positions of the inner source copies and of the zero rows in the nested layout.
            let mut copy_rows = Vec::new();
            let mut zero_rows = Vec::new();
            let mut conjugators = Vec::new();
            let mut row = 0;
            for &mid in &tb.multiplicity {
                let itb = &inner.blocks[mid];
                for &src in &itb.multiplicity {
                    multiplicity.push(src);
                    let n = inner.source.block_dims[src];
                    copy_rows.extend(row..row + n);
                    row += n;
                }
                zero_rows.extend(row..row + itb.padding);
                row += itb.padding;
                conjugators.push(itb.unitary.clone());
            }
            zero_rows.extend(row..row + tb.padding);
            row += tb.padding;
            conjugators.push(Matrix::identity(tb.padding));
            let perm: Vec<usize> = copy_rows.iter().chain(&zero_rows).copied().collect();
            let unitary = tb.unitary.mul(&Matrix::block_diag(&conjugators)).mul(&Matrix::permutation(&perm));
            debug_assert_eq!(row, unitary.rows());
            blocks.push(TargetBlock { multiplicity, padding: zero_rows.len(), unitary });
        }
        Ok(StarEndomorphism { source: inner.source.clone(), target: self.target.clone(), blocks })
    }

    /// `δⁿ(1)` for an endomorphism.
    pub fn power_of_unit(&self, n: usize) -> ProjectionElement<F> {
        assert!(self.is_endomorphism(), "power_of_unit needs an endomorphism");
        let mut e = self.source.identity();
        for _ in 0..n {
            e = self.apply(&e);
        }
        ProjectionElement(e)
    }

    /// How often source block `i` appears across all target blocks.
    pub fn total_multiplicity(&self, i: usize) -> usize {
        self.blocks.iter().map(|tb| tb.multiplicity.iter().filter(|&&s| s == i).count()).sum()
    }

    /// Source blocks that appear in no target block.
    pub fn kernel_ideal(&self) -> Ideal {
        Ideal {
            num_blocks: self.source.num_blocks(),
            blocks: (0..self.source.num_blocks()).filter(|&i| self.total_multiplicity(i) == 0).collect(),
        }
    }

    /// The unit `q` of `ker δ`.
    pub fn kernel_unit(&self) -> ProjectionElement<F> {
        self.kernel_ideal().unit(&self.source)
    }

    /// `dim δ(A) = dim A − dim ker δ`.
    pub fn range_dim(&self) -> usize {
        self.source.dim() - self.kernel_ideal().dim(&self.source)
    }

    /// `δ(A) = δ(1)Aδ(1)`, decided by comparing dimensions (`δ(A)` always sits in the corner).
    pub fn is_hereditary_range(&self) -> bool {
        let corner_dim: usize = self
            .apply(&self.source.identity())
            .blocks
            .iter()
            .map(|b| {
                let r = ProjectionElement(AlgebraElement { blocks: vec![b.clone()] }).ranks()[0];
                r * r
            })
            .sum();
        self.range_dim() == corner_dim
    }

    pub fn classify(&self) -> Result<Classification> {
        if !self.is_endomorphism() {
            return Err(input("classify needs an endomorphism"));
        }
        let q = self.kernel_unit();
        // Finite-dimensional ideals are always unital: q must be a central unit of the kernel.
        let ker = self.kernel_ideal();
        let unital_kernel = q.is_central()
            && self.apply(q.element()).is_zero()
            && self.source.basis::<F>().iter().filter(|b| ker.contains(*b)).all(|b| &(q.element() * b) == b);
        if !unital_kernel {
            return Err(breach("kernel of a finite-dimensional endomorphism has no unit"));
        }
        let range = self.range_dim();
        let mono = ker.is_zero();
        let epi = range == self.target.dim();
        let hereditary_range = self.is_hereditary_range();
        Ok(Classification {
            mono,
            epi,
            auto: mono && epi,
            unital_kernel,
            hereditary_range,
            complete: unital_kernel && hereditary_range,
        })
    }
}

/// Structural predicates of an endomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub mono: bool,
    pub epi: bool,
    pub auto: bool,
    pub unital_kernel: bool,
    pub hereditary_range: bool,
    pub complete: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, Fixture};
    use crate::GaussRat;

    fn q(n: i64) -> GaussRat {
        GaussRat::from_i64(n)
    }

    fn vals(alg: &MultiMatrixAlgebra, v: &[i64]) -> AlgebraElement<GaussRat> {
        alg.from_values(&v.iter().map(|&x| q(x)).collect::<Vec<_>>()).unwrap()
    }

    fn endo(f: Fixture) -> StarEndomorphism<GaussRat> {
        fixtures::partial_map(f).induced_endomorphism().1
    }

    #[test]
    fn apply_on_fixtures() {
        let d = endo(Fixture::Id);
        let a = vals(d.source(), &[7]);
        assert_eq!(d.apply(&a), a);

        let d = endo(Fixture::Const3);
        assert_eq!(d.apply(&vals(d.source(), &[2, 3, 5])), vals(d.source(), &[2, 2, 2]));

        let d = endo(Fixture::Shift3);
        assert_eq!(d.apply(&vals(d.source(), &[2, 3, 5])), vals(d.source(), &[3, 5, 0]));
    }

    #[test]
    fn apply_rejects_foreign_elements() {
        let d = endo(Fixture::Shift3);
        let other = MultiMatrixAlgebra::new(vec![2]).unwrap().identity::<GaussRat>();
        assert!(matches!(d.try_apply(&other), Err(crate::Error::Input(_))));
    }

    #[test]
    fn unit_powers() {
        let d = endo(Fixture::Shift3);
        let alg = d.source().clone();
        assert_eq!(d.power_of_unit(0).element(), &alg.identity());
        assert_eq!(d.power_of_unit(1).element(), &vals(&alg, &[1, 1, 0]));
        assert_eq!(d.power_of_unit(2).element(), &vals(&alg, &[1, 0, 0]));
        assert_eq!(d.power_of_unit(3).element(), &vals(&alg, &[0, 0, 0]));
        let c = endo(Fixture::Const3);
        for n in 0..5 {
            assert_eq!(c.power_of_unit(n).element(), &alg.identity());
        }
    }

    #[test]
    fn kernel_units() {
        let d = endo(Fixture::Shift3);
        assert_eq!(d.kernel_unit().element(), &vals(d.source(), &[1, 0, 0]));
        let d = endo(Fixture::Const3);
        assert_eq!(d.kernel_unit().element(), &vals(d.source(), &[0, 1, 1]));
        let d = endo(Fixture::Id);
        assert!(d.kernel_unit().element().is_zero());
    }

    #[test]
    fn corners() {
        let d = endo(Fixture::Shift3);
        let alg = d.source().clone();
        let full = corner_algebra(&alg, &alg.identity()).unwrap();
        assert_eq!(full.algebra(), &alg);
        let a = vals(&alg, &[2, 3, 5]);
        assert_eq!(full.compress(&a), a);

        let c = corner_algebra(&alg, d.power_of_unit(2).element()).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.basis().len(), 1);

        let m = endo(Fixture::Merge);
        let c = corner_algebra(&alg, m.kernel_unit().element()).unwrap();
        assert_eq!(c.algebra().block_dims(), &[1]);
        assert_eq!(c.compress(&a), vals(&alg, &[0, 0, 5]));
        assert!(c.embed(&a).is_err());

        assert!(corner_algebra(&alg, &vals(&alg, &[2, 0, 0])).is_err());
    }

    #[test]
    fn corner_of_non_diagonal_projection() {
        let alg = MultiMatrixAlgebra::new(vec![2]).unwrap();
        let half = GaussRat::from_ratio(1, 2);
        let e = AlgebraElement::from_blocks(vec![Matrix::from_rows(vec![
            vec![half.clone(), half.clone()],
            vec![half.clone(), half],
        ])])
        .unwrap();
        let c = corner_algebra(&alg, &e).unwrap();
        assert_eq!(c.algebra().block_dims(), &[1]);
        assert_eq!(c.basis().len(), 1);
    }

    #[test]
    fn hereditary_range_examples() {
        assert!(endo(Fixture::Shift3).is_hereditary_range());
        assert!(!endo(Fixture::Const3).is_hereditary_range());
        assert!(endo(Fixture::Id).is_hereditary_range());
    }

    #[test]
    fn classification_examples() {
        let c = endo(Fixture::Shift3).classify().unwrap();
        assert!(!c.mono && c.complete);
        let c = endo(Fixture::Const3).classify().unwrap();
        assert!(!c.complete);
        let c = endo(Fixture::Id).classify().unwrap();
        assert!(c.mono && c.epi && c.auto && c.complete);
    }

    #[test]
    fn central_projection_enumeration() {
        let alg = MultiMatrixAlgebra::commutative(3);
        let ps = alg.central_projections::<GaussRat>().unwrap();
        assert_eq!(ps.len(), 8);
        assert!(ps.iter().any(|p| p.element() == &vals(&alg, &[0, 0, 1])));
        assert!(ps.iter().any(|p| p.element() == &vals(&alg, &[1, 1, 0])));

        let factor = MultiMatrixAlgebra::new(vec![2]).unwrap();
        let ps = factor.central_projections::<GaussRat>().unwrap();
        assert_eq!(ps.len(), 2);
        assert!(ps[0].element().is_zero());
        assert_eq!(ps[1].element(), &factor.identity());

        let big = MultiMatrixAlgebra::commutative(21);
        assert!(matches!(big.central_projections::<GaussRat>(), Err(crate::Error::Limit { .. })));
        assert!(big.central_projections_with_limit::<GaussRat>(2).is_err());
    }

    #[test]
    fn endomorphism_validation() {
        let alg = MultiMatrixAlgebra::new(vec![1, 2]).unwrap();
        let bad = StarEndomorphism::<GaussRat>::new(
            alg.clone(),
            alg.clone(),
            vec![TargetBlock::plain(vec![0], 0, &alg), TargetBlock::plain(vec![0], 0, &alg)],
        );
        assert!(bad.is_err());
        let not_unitary = TargetBlock { multiplicity: vec![1], padding: 0, unitary: Matrix::identity(2).scale(&q(2)) };
        let bad = StarEndomorphism::new(alg.clone(), alg.clone(), vec![TargetBlock::plain(vec![0], 0, &alg), not_unitary]);
        assert!(bad.is_err());
        let ok = StarEndomorphism::<GaussRat>::new(
            alg.clone(),
            alg.clone(),
            vec![TargetBlock::plain(vec![0], 0, &alg), TargetBlock::plain(vec![0, 0], 0, &alg)],
        )
        .unwrap();
        assert_eq!(ok.kernel_ideal().blocks().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert!(MultiMatrixAlgebra::new(vec![0]).is_err());
    }

    #[test]
    fn compose_agrees_with_iterated_application() {
        let half = GaussRat::from_ratio(1, 2);
        let alg = MultiMatrixAlgebra::new(vec![1, 2]).unwrap();
        // Rotation-like rational unitary: (1/5)[[3, 4i], [4i, 3]].
        let w = Matrix::from_rows(vec![
            vec![GaussRat::from_ratio(3, 5), GaussRat::from_parts((0, 1), (4, 5))],
            vec![GaussRat::from_parts((0, 1), (4, 5)), GaussRat::from_ratio(3, 5)],
        ]);
        let d = StarEndomorphism::new(
            alg.clone(),
            alg.clone(),
            vec![
                TargetBlock::plain(vec![0], 0, &alg),
                TargetBlock { multiplicity: vec![0], padding: 1, unitary: w },
            ],
        )
        .unwrap();
        let a = AlgebraElement::from_blocks(vec![
            Matrix::from_rows(vec![vec![q(3)]]),
            Matrix::from_rows(vec![vec![q(1), half.clone()], vec![GaussRat::i(), q(-2)]]),
        ])
        .unwrap();
        let dd = d.compose(&d).unwrap();
        assert_eq!(dd.apply(&a), d.apply(&d.apply(&a)));
        let ddd = d.compose(&dd).unwrap();
        assert_eq!(ddd.apply(&a), d.apply(&d.apply(&d.apply(&a))));
        assert_eq!(ddd.apply(&alg.identity()), d.power_of_unit(3).into_element());
    }

    #[test]
    fn generic_over_floating_point() {
        use crate::ComplexF64;
        let m = fixtures::partial_map(Fixture::Shift3);
        let (alg, d) = m.induced_endomorphism::<ComplexF64>();
        let a = alg.from_values(&[2.0, 3.0, 5.0].map(|x| ComplexF64::new(x, 0.0))).unwrap();
        assert_eq!(d.apply(&a).coords(), [3.0, 5.0, 0.0].map(|x| ComplexF64::new(x, 0.0)).to_vec());
    }
}
