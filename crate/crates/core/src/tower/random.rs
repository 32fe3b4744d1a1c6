//! Seeded random towers for the comparison suites.
//!
//! Every generated tower is surjective, constant from a chosen stage `k` on,
//! and carries the declared limit `L = A_k` with the obvious projections.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{ExplicitRecipe, TowerSpec};
use crate::group::Presentation;
use crate::hom::Homomorphism;
use crate::matrix::IntMatrix;

/// Largest invariant factor allowed in any stage.
pub const MAX_FACTOR: u64 = 16;
/// Largest number of generators of any stage.
pub const MAX_RANK: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerFamily {
    /// Direct sums of cyclic groups, maps the identity on generators.
    Blockwise,
    /// Quotients of a free group by a shrinking relation lattice.
    Quotient,
    /// Torsion-free quotients by saturated sublattices.
    TorsionFree,
}

/// A random eventually-constant surjective tower in `family`, constant from
/// a stage in `1..=k_max`.
pub fn random_tower<R: Rng>(rng: &mut R, family: TowerFamily, k_max: usize) -> TowerSpec {
    let k = rng.gen_range(1..=k_max.max(1));
    let stages = loop {
        let s = match family {
            TowerFamily::Blockwise => blockwise_stages(rng, k),
            TowerFamily::Quotient => quotient_stages(rng, k),
            TowerFamily::TorsionFree => torsion_free_stages(rng, k),
        };
        if s.iter().all(factors_in_range) {
            break s;
        }
    };
    from_stages(stages, k)
}

fn factors_in_range(a: &Presentation) -> bool {
    a.canonical_form()
        .invariant_factors
        .iter()
        .all(|d| d <= &BigInt::from(MAX_FACTOR))
}

fn from_stages(stages: Vec<Presentation>, k: usize) -> TowerSpec {
    let gens = stages[0].gens();
    let maps = (1..stages.len())
        .map(|i| {
            Homomorphism::new(stages[i].clone(), stages[i - 1].clone(), IntMatrix::identity(gens))
                .expect("relations shrink up the tower")
        })
        .collect();
    let limit = stages[k - 1].clone();
    let projections = stages
        .iter()
        .map(|s| Homomorphism::new(limit.clone(), s.clone(), IntMatrix::identity(gens)).expect("limit maps down"))
        .collect();
    let recipe = ExplicitRecipe::new(stages, maps)
        .and_then(|r| r.with_limit(limit, projections))
        .expect("stages and maps line up");
    TowerSpec::new(recipe).surjective(true).eventually_constant_at(Some(k))
}

fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m % d == 0).collect()
}

fn blockwise_stages<R: Rng>(rng: &mut R, k: usize) -> Vec<Presentation> {
    let r = rng.gen_range(1..=MAX_RANK);
    let top: Vec<u64> = (0..r)
        .map(|_| if rng.gen_bool(0.2) { 0 } else { rng.gen_range(2..=MAX_FACTOR) })
        .collect();
    let mut levels = vec![top];
    for _ in 1..k {
        let above = levels.last().expect("nonempty");
        let below = above
            .iter()
            .map(|&m| match m {
                0 if rng.gen_bool(0.5) => 0,
                0 => rng.gen_range(1..=MAX_FACTOR),
                m => *divisors(m).choose(rng).expect("1 divides m"),
            })
            .collect();
        levels.push(below);
    }
    levels.reverse();
    levels
        .into_iter()
        .map(|ms| Presentation::cyclics(ms.into_iter().map(BigInt::from)))
        .collect()
}

fn small_column<R: Rng>(rng: &mut R, r: usize) -> Vec<BigInt> {
    (0..r).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect()
}

fn quotient_stages<R: Rng>(rng: &mut R, k: usize) -> Vec<Presentation> {
    let r = rng.gen_range(1..=MAX_RANK);
    let c = rng.gen_range(0..=2);
    let mut cols: Vec<Vec<BigInt>> = (0..c).map(|_| small_column(rng, r)).collect();
    let mut stages = vec![Presentation::new(r, IntMatrix::from_columns(r, &cols)).expect("r rows")];
    for _ in 1..k {
        cols.push(small_column(rng, r));
        stages.push(Presentation::new(r, IntMatrix::from_columns(r, &cols)).expect("r rows"));
    }
    stages.reverse();
    stages
}

/// A random matrix of determinant `±1`.
pub fn random_unimodular<R: Rng>(rng: &mut R, r: usize) -> IntMatrix {
    let mut w = IntMatrix::identity(r);
    if r < 2 {
        return w;
    }
    for _ in 0..3 * r {
        let a = rng.gen_range(0..r);
        let b = (a + rng.gen_range(1..r)) % r;
        let s = BigInt::from(rng.gen_range(-2i64..=2));
        for row in 0..r {
            let v = &w[(row, b)] * &s + &w[(row, a)];
            w[(row, a)] = v;
        }
    }
    w
}

fn torsion_free_stages<R: Rng>(rng: &mut R, k: usize) -> Vec<Presentation> {
    let r = rng.gen_range(1..=MAX_RANK);
    let w = random_unimodular(rng, r);
    // Stage i kills the last r − sᵢ columns of w; sᵢ grows up the tower.
    let mut s: Vec<usize> = (0..k).map(|_| rng.gen_range(0..=r)).collect();
    s.sort_unstable();
    s.into_iter()
        .map(|si| Presentation::new(r, w.select_cols(si..r)).expect("r rows"))
        .collect()
}

/// A random group with at most three cyclic factors of order `≤ 16`,
/// possibly with free summands.
pub fn random_group<R: Rng>(rng: &mut R) -> Presentation {
    let r = rng.gen_range(1..=MAX_RANK);
    Presentation::cyclics((0..r).map(|_| {
        if rng.gen_bool(0.2) {
            BigInt::ZERO
        } else {
            BigInt::from(rng.gen_range(2..=MAX_FACTOR))
        }
    }))
}

/// A random torsion-free group on a non-diagonal presentation.
pub fn random_torsion_free_group<R: Rng>(rng: &mut R) -> Presentation {
    let r = rng.gen_range(1..=MAX_RANK);
    let s = rng.gen_range(1..=r);
    let w = random_unimodular(rng, r);
    Presentation::new(r, w.select_cols(s..r)).expect("r rows")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::TowerWindow;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_towers_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for family in [TowerFamily::Blockwise, TowerFamily::Quotient, TowerFamily::TorsionFree] {
            for _ in 0..10 {
                let spec = random_tower(&mut rng, family, 3);
                let w = TowerWindow::new(&spec, 6).unwrap();
                assert!(w.tower.stages.iter().all(factors_in_range));
                if family == TowerFamily::TorsionFree {
                    assert!(w.tower.stages.iter().all(Presentation::is_torsion_free));
                }
            }
        }
    }

    #[test]
    fn unimodular_really_is() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for r in 1..=4 {
            assert!(random_unimodular(&mut rng, r).is_unimodular());
        }
    }
}
