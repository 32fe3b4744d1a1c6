use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::{Materialized, TowerRecipe, TowerSpec, TowerWindow};
use crate::error::{Error, Result};
use crate::functor::exterior::{compound_matrix, increasing_tuples};
use crate::functor::{homology, lambda, tensor, tor};
use crate::group::{CanonicalForm, Presentation};
use crate::hom::Homomorphism;
use crate::matrix::IntMatrix;

/// The truncated tower `Aᵢ = (⊕_p A′ᵢ,ₚ) ⊕ B` with `A′ᵢ,ₚ = ℤⁱ ⊕ (ℤ/p)^{M−i}`
/// and `B = ⊕_p ℤ/p`.
///
/// Generators of `A′ᵢ,ₚ` are `e¹ … e^M`, free up to index `i` and of order
/// `p` above it. The bonding map sends every `eʲ` to `eʲ` and is the
/// identity on `B`; at `j = i + 1` a free generator lands on a torsion one.
#[derive(Clone, Debug)]
pub struct Theorem1Recipe {
    pub primes: Vec<u64>,
    pub m: usize,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl Theorem1Recipe {
    pub fn new(primes: Vec<u64>, m: usize) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::Config("the prime set is empty".into()));
        }
        if let Some(p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::Config(format!("{p} is not prime")));
        }
        let mut primes = primes;
        primes.sort_unstable();
        primes.dedup();
        if m < 2 {
            return Err(Error::Config("the truncation must be at least 2".into()));
        }
        Ok(Theorem1Recipe { primes, m })
    }

    fn a_prime_moduli(&self, i: usize) -> Vec<BigInt> {
        self.primes
            .iter()
            .flat_map(|&p| (1..=self.m).map(move |j| if j <= i { BigInt::ZERO } else { BigInt::from(p) }))
            .collect()
    }

    /// `A′ᵢ = ⊕_p A′ᵢ,ₚ`.
    pub fn a_prime(&self, i: usize) -> Presentation {
        Presentation::cyclics(self.a_prime_moduli(i))
    }

    /// `A′ᵢ,ₚ`.
    pub fn a_prime_at(&self, i: usize, p: u64) -> Presentation {
        Presentation::cyclics((1..=self.m).map(|j| if j <= i { BigInt::ZERO } else { BigInt::from(p) }))
    }

    pub fn b(&self) -> Presentation {
        Presentation::cyclics(self.primes.iter().map(|&p| BigInt::from(p)))
    }

    /// Number of generators of the `A′` block.
    pub fn a_prime_gens(&self) -> usize {
        self.primes.len() * self.m
    }

    pub fn stage(&self, i: usize) -> Presentation {
        let mut moduli = self.a_prime_moduli(i);
        moduli.extend(self.primes.iter().map(|&p| BigInt::from(p)));
        Presentation::cyclics(moduli)
    }
}

impl TowerRecipe for Theorem1Recipe {
    fn describe(&self) -> String {
        format!("truncated construction over primes {:?} with M = {}", self.primes, self.m)
    }

    fn materialize(&self, n: usize) -> Result<Materialized> {
        if n >= self.m {
            return Err(Error::Config(format!(
                "window {n} must stay below the truncation {}",
                self.m
            )));
        }
        let stages: Vec<Presentation> = (1..=n).into_par_iter().map(|i| self.stage(i)).collect();
        let gens = stages[0].gens();
        let maps = (1..n)
            .map(|i| Homomorphism::new(stages[i].clone(), stages[i - 1].clone(), IntMatrix::identity(gens)))
            .collect::<Result<_>>()?;
        Ok(Materialized {
            stages,
            maps,
            limit: None,
        })
    }
}

/// The window `1..=N` of the truncated construction, with surjectivity claimed.
pub fn theorem1_construction(primes: &[u64], m: usize, n: usize) -> Result<TowerWindow> {
    if n >= m {
        return Err(Error::Config(format!("window {n} must stay below the truncation {m}")));
    }
    let spec = TowerSpec::new(Theorem1Recipe::new(primes.to_vec(), m)?).surjective(true);
    TowerWindow::new(&spec, n)
}

#[derive(Clone, Debug, Serialize)]
pub struct TorIdentity {
    pub stage: usize,
    pub prime: u64,
    pub computed: CanonicalForm,
    pub expected: CanonicalForm,
    pub pass: bool,
}

/// `Tor(A′ᵢ, ℤ/p)` against `(ℤ/p)^{M−i}` for every stage `i ≤ N` and `p ∈ P`.
pub fn theorem1_tor_identities(recipe: &Theorem1Recipe, n: usize) -> Vec<TorIdentity> {
    let jobs: Vec<(usize, u64)> = (1..=n).flat_map(|i| recipe.primes.iter().map(move |&p| (i, p))).collect();
    jobs.into_par_iter()
        .map(|(i, p)| {
            let computed = tor(&recipe.a_prime(i), &Presentation::cyclic(p)).canonical_form().clone();
            let expected = CanonicalForm::from_cyclics(0, vec![BigInt::from(p); recipe.m - i]);
            TorIdentity {
                stage: i,
                prime: p,
                pass: computed == expected,
                computed,
                expected,
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct KunnethSplitStage {
    pub stage: usize,
    pub h2: CanonicalForm,
    pub blocks: [CanonicalForm; 3],
    pub forms_agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KunnethSplitReport {
    pub stages: Vec<KunnethSplitStage>,
    /// `Λ²(fᵢ)` has no entries between the `A′A′`, `BB` and `A′B` blocks.
    pub maps_blockwise: bool,
    /// The `BB` block is an isomorphism `Λ²(B) → Λ²(B)`.
    pub middle_block_iso: bool,
    pub pass: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Block {
    PrimePrime,
    BB,
    Mixed,
}

/// Stagewise `H₂(Aᵢ) ≅ Λ²(A′ᵢ) ⊕ Λ²(B) ⊕ (A′ᵢ ⊗ B)` and the block shape of
/// the induced maps on `Λ² = H₂`.
pub fn kunneth_split_check(recipe: &Theorem1Recipe, n: usize) -> Result<KunnethSplitReport> {
    let window = TowerWindow::new(&TowerSpec::new(recipe.clone()).surjective(true), n)?;
    let b = recipe.b();
    let lambda_b = lambda(2, &b);
    let stages: Vec<KunnethSplitStage> = (1..=n)
        .into_par_iter()
        .map(|i| {
            let a = window.tower.stage(i);
            let ap = recipe.a_prime(i);
            let h2 = homology(a, 2).degree(2).canonical_form().clone();
            let blocks = [
                lambda(2, &ap).canonical_form().clone(),
                lambda_b.canonical_form().clone(),
                tensor(&ap, &b).canonical_form().clone(),
            ];
            let sum = blocks[0].direct_sum(&blocks[1]).direct_sum(&blocks[2]);
            KunnethSplitStage {
                stage: i,
                forms_agree: sum == h2,
                h2,
                blocks,
            }
        })
        .collect();

    let split = recipe.a_prime_gens();
    let pairs = increasing_tuples(window.tower.stage(1).gens(), 2);
    let kind = |t: &[usize]| match (t[0] >= split, t[1] >= split) {
        (false, false) => Block::PrimePrime,
        (true, true) => Block::BB,
        _ => Block::Mixed,
    };
    let bb: Vec<usize> = (0..pairs.len()).filter(|&k| kind(&pairs[k]) == Block::BB).collect();
    let per_map: Vec<(bool, bool)> = (1..n)
        .into_par_iter()
        .map(|i| {
            let c = compound_matrix(window.tower.map(i).matrix(), 2);
            let blockwise = (0..pairs.len()).all(|r| {
                (0..pairs.len()).all(|col| kind(&pairs[r]) == kind(&pairs[col]) || c[(r, col)] == BigInt::ZERO)
            });
            let middle = c.select_rows(bb.iter().copied()).select_cols(bb.iter().copied());
            let iso = Homomorphism::new(lambda_b.clone(), lambda_b.clone(), middle)
                .map(|h| h.is_isomorphism())
                .unwrap_or(false);
            (blockwise, iso)
        })
        .collect();
    let maps_blockwise = per_map.iter().all(|p| p.0);
    let middle_block_iso = per_map.iter().all(|p| p.1);
    let pass = maps_blockwise && middle_block_iso && stages.iter().all(|s| s.forms_agree);
    Ok(KunnethSplitReport {
        stages,
        maps_blockwise,
        middle_block_iso,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::check_materialized;

    #[test]
    fn small_prime_block() {
        let r = Theorem1Recipe::new(vec![2], 4).unwrap();
        assert_eq!(r.a_prime_at(2, 2).canonical_form().to_expr(), "Z^2 + Z/2^2");
        let ids = theorem1_tor_identities(&r, 3);
        assert!(ids.iter().all(|t| t.pass));
        assert_eq!(ids[1].computed.to_expr(), "Z/2^2");
    }

    #[test]
    fn boundary_stage_has_one_torsion_generator() {
        let r = Theorem1Recipe::new(vec![3], 5).unwrap();
        assert_eq!(r.a_prime_at(4, 3).canonical_form().to_expr(), "Z^4 + Z/3");
    }

    #[test]
    fn window_must_stay_below_truncation() {
        assert!(matches!(theorem1_construction(&[2], 4, 4), Err(Error::Config(_))));
    }

    #[test]
    fn split_and_surjective() {
        let w = theorem1_construction(&[2, 3], 5, 4).unwrap();
        let report = check_materialized(&w.tower, None, 3);
        assert!(report.lim1.is_zero());
        let r = Theorem1Recipe::new(vec![2, 3], 5).unwrap();
        assert!(kunneth_split_check(&r, 4).unwrap().pass);
    }

    #[test]
    fn tensor_block_at_the_boundary() {
        let r = Theorem1Recipe::new(vec![2], 4).unwrap();
        let block = tensor(&r.a_prime(3), &r.b());
        assert_eq!(block.canonical_form(), &CanonicalForm::from_factors(0, &[2, 2, 2, 2]));
    }
}
