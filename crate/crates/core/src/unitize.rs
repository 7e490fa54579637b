//! Adjoining a unit to the kernel: `A⁺ = (A/I) ⊕ (A/I^⊥)` with `I = ker δ`.
//!
//! In a multi-matrix algebra every ideal is a sum of blocks, `A/I` is the
//! complementary block sum, and `A⁺` is a block permutation of `A`.

use std::collections::BTreeSet;

use crate::error::{input, Result};
use crate::finalg::{AlgebraElement, Ideal, MultiMatrixAlgebra, ProjectionElement, StarEndomorphism, TargetBlock};
use crate::linalg::Span;
use crate::scalar::StarField;

/// Largest ideal meeting `I` trivially: the complementary block set.
pub fn ideal_complement(algebra: &MultiMatrixAlgebra, ideal: &Ideal) -> Result<Ideal> {
    let blocks: BTreeSet<usize> = (0..algebra.num_blocks()).filter(|j| !ideal.blocks().contains(j)).collect();
    Ideal::new(algebra, blocks)
}

#[derive(Clone, Debug)]
pub struct UnitizedSystem<F> {
    pub source: MultiMatrixAlgebra,
    pub aplus: MultiMatrixAlgebra,
    /// `blocks_of_aplus[t]` is the block of `A` carried by block `t` of `A⁺`;
    /// the `A/I` part comes first.
    pub blocks_of_aplus: Vec<usize>,
    /// Number of blocks in the `A/I` part.
    pub split: usize,
    pub delta_plus: StarEndomorphism<F>,
    /// `(1 + I) ⊕ (0 + I^⊥)`.
    pub p_plus: ProjectionElement<F>,
}

impl<F: StarField> UnitizedSystem<F> {
    /// `a ↦ (a + I) ⊕ (a + I^⊥)`.
    pub fn embed(&self, a: &AlgebraElement<F>) -> AlgebraElement<F> {
        let blocks = self.blocks_of_aplus.iter().map(|&j| a.block(j).clone()).collect();
        AlgebraElement::from_blocks(blocks).expect("block permutation keeps shapes")
    }

    /// Inverse of [`Self::embed`]; exists because `embed` is a block permutation here.
    pub fn unembed(&self, x: &AlgebraElement<F>) -> AlgebraElement<F> {
        let mut blocks = vec![None; self.blocks_of_aplus.len()];
        for (t, &j) in self.blocks_of_aplus.iter().enumerate() {
            blocks[j] = Some(x.block(t).clone());
        }
        AlgebraElement::from_blocks(blocks.into_iter().map(|b| b.expect("every block carried")).collect())
            .expect("block permutation keeps shapes")
    }

    /// Class `(a + I) ⊕ (b + I^⊥)`.
    pub fn pair(&self, a: &AlgebraElement<F>, b: &AlgebraElement<F>) -> AlgebraElement<F> {
        let blocks = self
            .blocks_of_aplus
            .iter()
            .enumerate()
            .map(|(t, &j)| if t < self.split { a.block(j).clone() } else { b.block(j).clone() })
            .collect();
        AlgebraElement::from_blocks(blocks).expect("block permutation keeps shapes")
    }

    /// The unit `(0 + I) ⊕ (1 + I^⊥)` of `ker δ⁺`.
    pub fn kernel_unit(&self) -> ProjectionElement<F> {
        self.p_plus.complement()
    }

    /// `embed` is injective and onto `A⁺`.
    pub fn embed_is_bijective(&self) -> bool {
        let mut image = Span::new(self.aplus.dim());
        let injective = self.source.basis::<F>().iter().all(|b| image.insert(&self.embed(b).coords()));
        injective && image.dim() == self.aplus.dim()
    }
}

/// `A⁺` with `δ⁺((a + I) ⊕ (b + I^⊥)) = (δ(a) + I) ⊕ (δ(a) + I^⊥)`.
pub fn unitize_kernel<F: StarField>(endo: &StarEndomorphism<F>) -> Result<UnitizedSystem<F>> {
    let alg = endo.source();
    if !endo.is_endomorphism() {
        return Err(input("unitization needs an endomorphism"));
    }
    let ker = endo.kernel_ideal();
    let perp = ideal_complement(alg, &ker)?;
    let mut blocks_of_aplus: Vec<usize> = perp.blocks().iter().copied().collect();
    let split = blocks_of_aplus.len();
    blocks_of_aplus.extend(ker.blocks().iter().copied());
    let dims = blocks_of_aplus.iter().map(|&j| alg.block_dims()[j]).collect();
    let aplus = MultiMatrixAlgebra::new(dims)?;
    let mut position = vec![0; alg.num_blocks()];
    for (t, &j) in blocks_of_aplus.iter().enumerate() {
        position[j] = t;
    }
    // δ only reads A/I, which sits at the front of A⁺.
    let targets = blocks_of_aplus
        .iter()
        .map(|&j| {
            let tb = &endo.target_blocks()[j];
            TargetBlock {
                multiplicity: tb.multiplicity.iter().map(|&i| position[i]).collect(),
                padding: tb.padding,
                unitary: tb.unitary.clone(),
            }
        })
        .collect();
    let delta_plus = StarEndomorphism::new(aplus.clone(), aplus.clone(), targets)?;
    let front: BTreeSet<usize> = (0..split).collect();
    let p_plus = ProjectionElement::new(aplus.block_unit(&front))?;
    Ok(UnitizedSystem { source: alg.clone(), aplus, blocks_of_aplus, split, delta_plus, p_plus })
}
