//! Seeded generators for property tests and acceptance runs.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::finalg::{AlgebraElement, MultiMatrixAlgebra, StarEndomorphism, TargetBlock};
use crate::linalg::Matrix;
use crate::pdsys::PartialMap;
use crate::scalar::StarField;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// `|X|` uniform in `1..=max_points`; each point leaves the domain with probability 1/4.
pub fn partial_map<R: Rng>(rng: &mut R, max_points: usize) -> PartialMap {
    let n = rng.gen_range(1..=max_points.max(1));
    let map = (0..n).map(|_| if rng.gen_ratio(1, 4) { None } else { Some(rng.gen_range(0..n)) }).collect();
    PartialMap::new(map).expect("images lie in X")
}

/// Gaussian rational with numerators in `-3..=3` and denominators in `1..=3`.
pub fn scalar<F: StarField, R: Rng>(rng: &mut R) -> F {
    fn part<R: Rng>(rng: &mut R) -> (i64, i64) {
        (rng.gen_range(-3..=3), rng.gen_range(1..=3))
    }
    let re = part(rng);
    let im = if rng.gen_bool(0.5) { part(rng) } else { (0, 1) };
    F::from_parts(re, im)
}

pub fn element<F: StarField, R: Rng>(rng: &mut R, algebra: &MultiMatrixAlgebra) -> AlgebraElement<F> {
    let coords: Vec<F> = (0..algebra.dim()).map(|_| scalar(rng)).collect();
    algebra.from_coords(&coords)
}

/// Coefficient list `a_0, …, a_n` with `n < max_len`.
pub fn coefficient_list<F: StarField, R: Rng>(
    rng: &mut R,
    algebra: &MultiMatrixAlgebra,
    max_len: usize,
) -> Vec<AlgebraElement<F>> {
    let len = rng.gen_range(1..=max_len.max(1));
    (0..len).map(|_| element(rng, algebra)).collect()
}

/// `P · D · C` with `C = (I − K)(I + K)⁻¹` the Cayley transform of a skew-Hermitian `K`.
/// `D` is diagonal with fourth roots of unity; `P` permutes rows.
pub fn unitary<F: StarField, R: Rng>(rng: &mut R, n: usize) -> Matrix<F> {
    let x: Matrix<F> = Matrix::from_fn(n, n, |_, _| if rng.gen_bool(0.5) { scalar(rng) } else { F::zero() });
    let k = x.sub(&x.adjoint()).scale(&F::from_ratio(1, 2));
    let id = Matrix::identity(n);
    let inv = id.add(&k).inverse().expect("I + K is invertible for skew-Hermitian K");
    let cayley = id.sub(&k).mul(&inv);
    let phases = [F::one(), F::i(), -F::one(), -F::i()];
    let d = Matrix::from_fn(n, n, |r, c| if r == c { phases[rng.gen_range(0..4)].clone() } else { F::zero() });
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    Matrix::permutation(&perm).mul(&d).mul(&cayley)
}

/// Endomorphism of a random algebra with at most `max_blocks` blocks of size at most `max_dim`.
pub fn endomorphism<F: StarField, R: Rng>(rng: &mut R, max_blocks: usize, max_dim: usize) -> StarEndomorphism<F> {
    let blocks = rng.gen_range(1..=max_blocks.max(1));
    let dims: Vec<usize> = (0..blocks).map(|_| rng.gen_range(1..=max_dim.max(1))).collect();
    let alg = MultiMatrixAlgebra::new(dims.clone()).expect("positive block sizes");
    let targets = dims
        .iter()
        .map(|&n| {
            let mut left = n;
            let mut multiplicity = Vec::new();
            loop {
                let fits: Vec<usize> = (0..blocks).filter(|&i| dims[i] <= left).collect();
                if fits.is_empty() || rng.gen_ratio(1, 4) {
                    break;
                }
                let i = fits[rng.gen_range(0..fits.len())];
                multiplicity.push(i);
                left -= dims[i];
            }
            let unitary = if rng.gen_bool(0.5) { unitary(rng, n) } else { Matrix::identity(n) };
            TargetBlock { multiplicity, padding: left, unitary }
        })
        .collect();
    StarEndomorphism::new(alg.clone(), alg, targets).expect("dimension bookkeeping is exact")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussRat;

    #[test]
    fn unitaries_are_unitary() {
        let mut r = rng(7);
        for n in 1..=3 {
            for _ in 0..20 {
                assert!(unitary::<GaussRat, _>(&mut r, n).is_unitary());
            }
        }
    }

    #[test]
    fn endomorphisms_are_multiplicative() {
        let mut r = rng(11);
        for _ in 0..30 {
            let d = endomorphism::<GaussRat, _>(&mut r, 3, 3);
            let alg = d.source().clone();
            let a = element(&mut r, &alg);
            let b = element(&mut r, &alg);
            assert_eq!(d.apply(&(&a * &b)), &d.apply(&a) * &d.apply(&b));
            assert_eq!(d.apply(&a.adjoint()), d.apply(&a).adjoint());
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a: Vec<_> = (0..5).map(|_| partial_map(&mut rng(3), 6)).collect();
        let b: Vec<_> = (0..5).map(|_| partial_map(&mut rng(3), 6)).collect();
        assert_eq!(a, b);
    }
}
