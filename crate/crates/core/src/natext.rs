//! The natural extension `(B, δ)` of a system with unital kernel, realized
//! as the direct sequence `B₀ → B₁ → …` with
//! `B_n = qA₀ ⊕ … ⊕ qA_{n−1} ⊕ A_n` and `A_k = δᵏ(1)Aδᵏ(1)`.
//!
//! Summand elements are stored as full-size elements of `A` fixed by the
//! summand projection, so products with `q` and `δᵏ(1)` need no embedding.

use std::fmt::Write as _;

use crate::error::{breach, input, Result};
use crate::finalg::{corner_algebra, AlgebraElement, MultiMatrixAlgebra, StarEndomorphism};
use crate::linalg::{Matrix, Solver};
use crate::scalar::StarField;

/// An element of `B_n`, tagged with its level `n`.
///
/// Derived equality is representation equality; use
/// [`NaturalExtension::equal`] for equality in the direct limit.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerElement<F> {
    level: usize,
    coords: Vec<AlgebraElement<F>>,
}

impl<F: StarField> TowerElement<F> {
    pub fn level(&self) -> usize {
        self.level
    }

    /// `(a₀, …, a_n)`.
    pub fn coords(&self) -> &[AlgebraElement<F>] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(AlgebraElement::is_zero)
    }

    /// Concatenated matrix-unit coordinates of all summands.
    pub fn flat_coords(&self) -> Vec<F> {
        self.coords.iter().flat_map(AlgebraElement::coords).collect()
    }
}

/// Summand structure of `B_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelAlgebra<F> {
    pub level: usize,
    /// `(e_k, e_kAe_k)` with `e_k = q·δᵏ(1)` for `k < n` and `e_n = δⁿ(1)`.
    pub summands: Vec<(AlgebraElement<F>, MultiMatrixAlgebra)>,
}

impl<F: StarField> LevelAlgebra<F> {
    pub fn dim(&self) -> usize {
        self.summands.iter().map(|(_, c)| c.dim()).sum()
    }

    pub fn summand_dims(&self) -> Vec<usize> {
        self.summands.iter().map(|(_, c)| c.dim()).collect()
    }
}

/// Pass/fail of one identity over a family of basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
}

impl IdentityCheck {
    fn new(name: &'static str) -> Self {
        IdentityCheck { name, checked: 0, failed: 0 }
    }

    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerReport {
    pub max_level: usize,
    pub checks: Vec<IdentityCheck>,
}

impl TowerReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }
}

/// The tower calculus for one endomorphism.
#[derive(Clone, Debug)]
pub struct NaturalExtension<F> {
    endo: StarEndomorphism<F>,
    q: AlgebraElement<F>,
    /// `δᵏ(1)` until the decreasing sequence stabilizes.
    units: Vec<AlgebraElement<F>>,
    pbasis: Vec<AlgebraElement<F>>,
    solver: Solver<F>,
}

impl<F: StarField> NaturalExtension<F> {
    pub fn new(endo: StarEndomorphism<F>) -> Result<Self> {
        if !endo.is_endomorphism() {
            return Err(input("natural extension needs an endomorphism A → A"));
        }
        let alg = endo.source().clone();
        let q = endo.kernel_unit().into_element();
        let mut units = vec![alg.identity::<F>()];
        loop {
            let next = endo.apply(units.last().expect("non-empty"));
            if &next == units.last().expect("non-empty") {
                break;
            }
            units.push(next);
        }
        let ker = endo.kernel_ideal();
        let pbasis: Vec<AlgebraElement<F>> =
            alg.basis::<F>().into_iter().filter(|b| !ker.contains(b)).collect();
        let cols: Vec<Vec<F>> = pbasis.iter().map(|b| endo.apply(b).coords()).collect();
        let solver = Solver::new(&Matrix::from_columns(alg.dim(), &cols));
        Ok(NaturalExtension { endo, q, units, pbasis, solver })
    }

    pub fn endo(&self) -> &StarEndomorphism<F> {
        &self.endo
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        self.endo.source()
    }

    /// Kernel unit `q` of `δ` on `A`.
    pub fn kernel_unit(&self) -> &AlgebraElement<F> {
        &self.q
    }

    /// `δᵏ(1)`.
    pub fn unit_power(&self, k: usize) -> &AlgebraElement<F> {
        &self.units[k.min(self.units.len() - 1)]
    }

    /// Projection of summand `k` of `B_n`.
    pub fn summand_projection(&self, n: usize, k: usize) -> AlgebraElement<F> {
        assert!(k <= n, "summand {k} of level {n}");
        if k == n {
            self.unit_power(n).clone()
        } else {
            &self.q * self.unit_power(k)
        }
    }

    pub fn level_algebra(&self, n: usize) -> LevelAlgebra<F> {
        let summands = (0..=n)
            .map(|k| {
                let e = self.summand_projection(n, k);
                let corner = corner_algebra(self.algebra(), &e).expect("summand projections are projections");
                (e, corner.algebra().clone())
            })
            .collect();
        LevelAlgebra { level: n, summands }
    }

    /// Compressed matrix units of every summand of `B_n`.
    pub fn level_basis(&self, n: usize) -> Vec<TowerElement<F>> {
        let mut out = Vec::new();
        for k in 0..=n {
            let e = self.summand_projection(n, k);
            let corner = corner_algebra(self.algebra(), &e).expect("summand projections are projections");
            for b in corner.basis() {
                let mut coords = vec![self.algebra().zero(); n + 1];
                coords[k] = b;
                out.push(TowerElement { level: n, coords });
            }
        }
        out
    }

    /// Validates summand membership.
    pub fn element(&self, coords: Vec<AlgebraElement<F>>) -> Result<TowerElement<F>> {
        if coords.is_empty() {
            return Err(input("a tower element has at least one coordinate"));
        }
        let n = coords.len() - 1;
        for (k, a) in coords.iter().enumerate() {
            self.algebra().check(a)?;
            if a.compress(&self.summand_projection(n, k)) != *a {
                return Err(input(format!("coordinate {k} lies outside summand {k} of level {n}")));
            }
        }
        Ok(TowerElement { level: n, coords })
    }

    /// `ι: A = B₀ → B`.
    pub fn inject(&self, a: &AlgebraElement<F>) -> TowerElement<F> {
        assert!(self.algebra().contains(a), "element of a different algebra");
        TowerElement { level: 0, coords: vec![a.clone()] }
    }

    pub fn zero(&self, n: usize) -> TowerElement<F> {
        TowerElement { level: n, coords: vec![self.algebra().zero(); n + 1] }
    }

    pub fn one(&self, n: usize) -> TowerElement<F> {
        TowerElement { level: n, coords: (0..=n).map(|k| self.summand_projection(n, k)).collect() }
    }

    /// `δ_n(a₀ ⊕ … ⊕ a_n) = a₀ ⊕ … ⊕ a_{n−1} ⊕ qa_n ⊕ δ(a_n)`.
    pub fn embed_level(&self, x: &TowerElement<F>) -> TowerElement<F> {
        let mut coords = x.coords.clone();
        let last = coords.pop().expect("non-empty");
        coords.push(&self.q * &last);
        coords.push(self.endo.apply(&last));
        TowerElement { level: x.level + 1, coords }
    }

    pub fn raise_to(&self, x: &TowerElement<F>, n: usize) -> TowerElement<F> {
        assert!(n >= x.level, "cannot lower level {} to {n}", x.level);
        let mut y = x.clone();
        while y.level < n {
            y = self.embed_level(&y);
        }
        y
    }

    /// `s_n(a₀ ⊕ a₁ ⊕ … ⊕ a_n) = a₁ ⊕ … ⊕ a_n`.
    pub fn left_shift(&self, x: &TowerElement<F>) -> Result<TowerElement<F>> {
        if x.level == 0 {
            return Err(input("left shift is undefined on level 0"));
        }
        Ok(TowerElement { level: x.level - 1, coords: x.coords[1..].to_vec() })
    }

    /// `s_{*,n}(a₀ ⊕ … ⊕ a_n) = 0 ⊕ δ(1)a₀δ(1) ⊕ … ⊕ δⁿ⁺¹(1)a_nδⁿ⁺¹(1)`.
    pub fn right_shift(&self, x: &TowerElement<F>) -> TowerElement<F> {
        let mut coords = Vec::with_capacity(x.level + 2);
        coords.push(self.algebra().zero());
        for (k, a) in x.coords.iter().enumerate() {
            coords.push(a.compress(self.unit_power(k + 1)));
        }
        TowerElement { level: x.level + 1, coords }
    }

    /// `δ = s_{n+1} ∘ δ_n`, level-preserving.
    pub fn ext_delta(&self, x: &TowerElement<F>) -> TowerElement<F> {
        self.left_shift(&self.embed_level(x)).expect("embedded level is positive")
    }

    /// `δ* = s_{*,n}`, raising the level by one.
    pub fn ext_transfer(&self, x: &TowerElement<F>) -> TowerElement<F> {
        self.right_shift(x)
    }

    fn align(&self, x: &TowerElement<F>, y: &TowerElement<F>) -> (TowerElement<F>, TowerElement<F>) {
        let n = x.level.max(y.level);
        (self.raise_to(x, n), self.raise_to(y, n))
    }

    fn zip(
        &self,
        x: &TowerElement<F>,
        y: &TowerElement<F>,
        f: impl Fn(&AlgebraElement<F>, &AlgebraElement<F>) -> AlgebraElement<F>,
    ) -> TowerElement<F> {
        let (x, y) = self.align(x, y);
        TowerElement { level: x.level, coords: x.coords.iter().zip(&y.coords).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn mul(&self, x: &TowerElement<F>, y: &TowerElement<F>) -> TowerElement<F> {
        self.zip(x, y, |a, b| a * b)
    }

    pub fn add(&self, x: &TowerElement<F>, y: &TowerElement<F>) -> TowerElement<F> {
        self.zip(x, y, |a, b| a + b)
    }

    pub fn sub(&self, x: &TowerElement<F>, y: &TowerElement<F>) -> TowerElement<F> {
        self.zip(x, y, |a, b| a - b)
    }

    pub fn scale(&self, x: &TowerElement<F>, s: &F) -> TowerElement<F> {
        TowerElement { level: x.level, coords: x.coords.iter().map(|a| a.scale(s)).collect() }
    }

    pub fn adjoint(&self, x: &TowerElement<F>) -> TowerElement<F> {
        TowerElement { level: x.level, coords: x.coords.iter().map(AlgebraElement::adjoint).collect() }
    }

    /// Equality in the direct limit.
    pub fn equal(&self, x: &TowerElement<F>, y: &TowerElement<F>) -> bool {
        let (x, y) = self.align(x, y);
        x.coords == y.coords
    }

    /// The preimage under `δ_{n−1}`, if any.
    fn peel(&self, x: &TowerElement<F>) -> Option<TowerElement<F>> {
        let n = x.level;
        if n == 0 {
            return None;
        }
        let coeffs = self.solver.solve(&x.coords[n].coords())?;
        let y = self
            .pbasis
            .iter()
            .zip(&coeffs)
            .filter(|(_, c)| !c.is_zero())
            .fold(self.algebra().zero(), |acc, (b, c)| &acc + &b.scale(c));
        let b = &x.coords[n - 1] + &y;
        if b.compress(self.unit_power(n - 1)) != b {
            return None;
        }
        let mut coords = x.coords[..n - 1].to_vec();
        coords.push(b);
        let candidate = TowerElement { level: n - 1, coords };
        (self.embed_level(&candidate) == *x).then_some(candidate)
    }

    /// Minimal-level representative.
    pub fn reduce(&self, x: &TowerElement<F>) -> TowerElement<F> {
        let mut current = x.clone();
        while let Some(prev) = self.peel(&current) {
            current = prev;
        }
        current
    }

    /// `Σₖ δ*ᵏ(ι(bₖ))`, at level `len − 1`.
    pub fn from_transfer_sum(&self, bs: &[AlgebraElement<F>]) -> Result<TowerElement<F>> {
        if bs.is_empty() {
            return Err(input("coefficient list is empty"));
        }
        let mut total = self.zero(bs.len() - 1);
        for (k, b) in bs.iter().enumerate() {
            self.algebra().check(b)?;
            let mut term = self.inject(b);
            for _ in 0..k {
                term = self.ext_transfer(&term);
            }
            total = self.add(&total, &term);
        }
        Ok(total)
    }

    /// Canonical coefficients `(a₀, …, a_n)` with `Σ δ*ᵏ(ι(aₖ)) = x`,
    /// `aₖ ∈ qAₖ` for `k < n` and `a_n ∈ A_n`.
    pub fn to_coordinates(&self, x: &TowerElement<F>) -> Vec<AlgebraElement<F>> {
        x.coords.clone()
    }

    /// Canonical coefficients of `Σ δ*ᵏ(ι(bₖ))` computed inside `A` alone:
    /// `a₀ = b₀q`, `c₁ = b₁ + δ(b₀)`, `aₖ = cₖq`, `cₖ₊₁ = bₖ₊₁ + δ(cₖ)`, `a_n = c_n`.
    pub fn inductive_coefficients(&self, bs: &[AlgebraElement<F>]) -> Vec<AlgebraElement<F>> {
        let n = bs.len().saturating_sub(1);
        let bs: Vec<AlgebraElement<F>> =
            bs.iter().enumerate().map(|(i, b)| b.compress(self.unit_power(i))).collect();
        let mut out = Vec::with_capacity(bs.len());
        let mut c = match bs.first() {
            Some(b) => b.clone(),
            None => return out,
        };
        for b in bs.iter().skip(1) {
            out.push(&c * &self.q);
            c = b + &self.endo.apply(&c);
        }
        debug_assert_eq!(out.len(), n);
        out.push(c);
        out
    }

    pub fn is_canonical(&self, coords: &[AlgebraElement<F>]) -> bool {
        let n = coords.len().saturating_sub(1);
        coords.iter().enumerate().all(|(k, a)| a.compress(&self.summand_projection(n, k)) == *a)
    }

    /// Both shift identities and both commuting squares on basis elements of `B_n`, `n ≤ max_level`.
    pub fn verify_tower(&self, max_level: usize) -> TowerReport {
        let mut module = IdentityCheck::new("s_*(s(a)b) = a s_*(b)");
        let mut corner = IdentityCheck::new("s(s_*(a)) = s(1) a s(1)");
        let mut left_square = IdentityCheck::new("s_{n+1} δ_n = δ_{n-1} s_n");
        let mut right_square = IdentityCheck::new("s_{*,n+1} δ_n = δ_{n+1} s_{*,n}");
        for n in 0..=max_level {
            let basis = self.level_basis(n);
            let upper = self.level_basis(n + 1);
            for a in &upper {
                let sa = self.left_shift(a).expect("positive level");
                for b in &basis {
                    module.record(self.right_shift(&self.mul(&sa, b)) == self.mul(a, &self.right_shift(b)));
                }
            }
            let s1 = self.left_shift(&self.one(n + 1)).expect("positive level");
            for a in &basis {
                let lhs = self.left_shift(&self.right_shift(a)).expect("positive level");
                corner.record(lhs == self.mul(&self.mul(&s1, a), &s1));
                if n >= 1 {
                    let lhs = self.left_shift(&self.embed_level(a)).expect("positive level");
                    let rhs = self.embed_level(&self.left_shift(a).expect("positive level"));
                    left_square.record(lhs == rhs);
                }
                let lhs = self.right_shift(&self.embed_level(a));
                let rhs = self.embed_level(&self.right_shift(a));
                right_square.record(lhs == rhs);
            }
        }
        TowerReport { max_level, checks: vec![module, corner, left_square, right_square] }
    }

    /// Transfer identities of `(ext_delta, ext_transfer)` on basis elements of `B_n`, `n ≤ max_level`:
    /// The module identity `δ*(δ(x)y) = xδ*(y)` and the corner identity `δδ*(x) = δ(1)xδ(1)`.
    /// The consequence `δδ*δ = δ` is recorded separately.
    pub fn verify_transfer_axioms(&self, max_level: usize) -> TowerReport {
        let mut module = IdentityCheck::new("δ*(δ(x)y) = x δ*(y)");
        let mut corner = IdentityCheck::new("δδ*(x) = δ(1) x δ(1)");
        let mut retraction = IdentityCheck::new("δδ*δ = δ");
        let d1 = self.inject(self.unit_power(1));
        for n in 0..=max_level {
            let basis = self.level_basis(n);
            let images: Vec<TowerElement<F>> = basis.iter().map(|x| self.ext_delta(x)).collect();
            let transfers: Vec<TowerElement<F>> = basis.iter().map(|y| self.ext_transfer(y)).collect();
            for (x, dx) in basis.iter().zip(&images) {
                for (y, ty) in basis.iter().zip(&transfers) {
                    module.record(self.equal(&self.ext_transfer(&self.mul(dx, y)), &self.mul(x, ty)));
                }
            }
            for ((x, dx), tx) in basis.iter().zip(&images).zip(&transfers) {
                corner.record(self.equal(&self.ext_delta(tx), &self.mul(&self.mul(&d1, x), &d1)));
                retraction.record(self.equal(&self.ext_delta(&self.ext_transfer(dx)), dx));
            }
        }
        TowerReport { max_level, checks: vec![module, corner, retraction] }
    }

    /// Matrix of a level map in flattened coordinates, columns indexed by the basis of `B_n`.
    fn level_map_matrix(&self, n: usize, f: impl Fn(&TowerElement<F>) -> TowerElement<F>) -> Matrix<F> {
        let cols: Vec<Vec<F>> = self.level_basis(n).iter().map(|b| f(b).flat_coords()).collect();
        let rows = cols.first().map_or(0, Vec::len);
        Matrix::from_columns(rows, &cols)
    }

    /// `δ_n: B_n → B_{n+1}` is injective and onto.
    pub fn embedding_is_bijective(&self, n: usize) -> bool {
        let m = self.level_map_matrix(n, |x| self.embed_level(x));
        let dim_n = self.level_algebra(n).dim();
        m.rank() == dim_n && dim_n == self.level_algebra(n + 1).dim()
    }

    /// The kernel of `ext_delta` on `B_n` is unital with unit `ι(q)`.
    pub fn kernel_unit_is_iota_q(&self, n: usize) -> Result<bool> {
        let basis = self.level_basis(n);
        let kernel = self.level_map_matrix(n, |x| self.ext_delta(x)).nullspace();
        let iq = self.raise_to(&self.inject(&self.q), n);
        if !self.ext_delta(&iq).is_zero() {
            return Ok(false);
        }
        let q_dim = corner_algebra(self.algebra(), &self.q)?.dim();
        if kernel.len() != q_dim {
            return Ok(false);
        }
        for v in kernel {
            let k = basis
                .iter()
                .zip(&v)
                .filter(|(_, c)| !c.is_zero())
                .fold(self.zero(n), |acc, (b, c)| self.add(&acc, &self.scale(b, c)));
            if self.mul(&iq, &k) != k || self.mul(&k, &iq) != k {
                return Err(breach("kernel element not absorbed by ι(q)"));
            }
        }
        Ok(true)
    }

    /// Bratteli diagram of `B₀ → … → B_levels` in DOT; node `L{n}S{k}` is summand `k` of `B_n`.
    pub fn bratteli_dot(&self, levels: usize) -> String {
        let mut out = String::from("digraph bratteli {\n  rankdir=TB;\n");
        for n in 0..=levels {
            let level = self.level_algebra(n);
            let _ = writeln!(out, "  subgraph level{n} {{ rank=same;");
            for (k, (_, corner)) in level.summands.iter().enumerate() {
                let _ = writeln!(out, "    L{n}S{k} [label=\"{:?}\"];", corner.block_dims());
            }
            out.push_str("  }\n");
        }
        for n in 0..levels {
            for k in 0..=n {
                let src = self.summand_projection(n, k);
                let edges: Vec<(usize, AlgebraElement<F>)> = if k < n {
                    vec![(k, src.clone())]
                } else {
                    vec![(n, &self.q * &src), (n + 1, self.endo.apply(&src))]
                };
                for (target, image_unit) in edges {
                    let dst = self.summand_projection(n + 1, target);
                    if let Some(label) = multiplicity_label(&src, &dst, &image_unit, |a| {
                        if k < n {
                            a.clone()
                        } else if target == n {
                            &self.q * a
                        } else {
                            self.endo.apply(a)
                        }
                    }) {
                        let _ = writeln!(out, "  L{n}S{k} -> L{}S{target} [label=\"{label}\"];", n + 1);
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Bratteli multiplicities of the component map between two summand corners,
/// or `None` when it vanishes. Entry `(i, j)` is the rank, inside target
/// corner block `i`, of the image of a minimal projection of source corner block `j`.
fn multiplicity_label<F: StarField>(
    src: &AlgebraElement<F>,
    dst: &AlgebraElement<F>,
    image_unit: &AlgebraElement<F>,
    map: impl Fn(&AlgebraElement<F>) -> AlgebraElement<F>,
) -> Option<String> {
    if image_unit.is_zero() {
        return None;
    }
    let src_blocks: Vec<usize> = (0..src.blocks().len()).filter(|&j| !src.block(j).is_zero()).collect();
    let dst_blocks: Vec<usize> = (0..dst.blocks().len()).filter(|&i| !dst.block(i).is_zero()).collect();
    let minimal: Vec<AlgebraElement<F>> = src_blocks.iter().map(|&j| minimal_projection(src, j)).collect();
    let rows: Vec<Vec<usize>> = dst_blocks
        .iter()
        .map(|&i| minimal.iter().map(|e| map(e).block(i).rank()).collect())
        .collect();
    if rows.len() == 1 && rows[0].len() == 1 {
        Some(rows[0][0].to_string())
    } else {
        Some(format!("{rows:?}"))
    }
}

/// A rank-one subprojection of block `j` of the projection `e`.
fn minimal_projection<F: StarField>(e: &AlgebraElement<F>, j: usize) -> AlgebraElement<F> {
    let block = e.block(j);
    let col = (0..block.cols()).find(|&c| !block.column(c).iter().all(F::is_zero)).expect("non-zero block");
    let v = block.column(col);
    let norm = v.iter().fold(F::zero(), |acc, x| acc + x.clone() * x.conj());
    let proj = Matrix::from_fn(block.rows(), block.rows(), |r, c| v[r].clone() * v[c].conj() / norm.clone());
    let blocks = e
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, b)| if i == j { proj.clone() } else { Matrix::zeros(b.rows(), b.cols()) })
        .collect();
    AlgebraElement::from_blocks(blocks).expect("same shape as e")
}
