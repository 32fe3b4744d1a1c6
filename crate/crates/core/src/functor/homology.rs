//! Integral homology of finitely generated abelian groups by the Künneth
//! formula, `L₁Λ²` by cross-effects, and the structural checks relating
//! them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{CanonicalForm, Presentation};

use super::cyclic;
use super::exterior::lambda;
use super::tor::tor;

/// Degree-indexed groups `H₀, …, H_n`.
#[derive(Clone, Debug)]
pub struct GradedGroup {
    components: Vec<Presentation>,
}

impl GradedGroup {
    pub fn new(components: Vec<Presentation>) -> Self {
        GradedGroup { components }
    }

    pub fn max_degree(&self) -> usize {
        self.components.len().saturating_sub(1)
    }

    /// Component in degree `k`; the trivial group past the computed range.
    pub fn degree(&self, k: usize) -> Presentation {
        self.components.get(k).cloned().unwrap_or_else(Presentation::trivial)
    }

    pub fn canonical_forms(&self) -> Vec<CanonicalForm> {
        self.components.iter().map(|p| p.canonical_form().clone()).collect()
    }
}

/// `A ⊗ B` on canonical forms.
pub fn tensor_form(a: &CanonicalForm, b: &CanonicalForm) -> CanonicalForm {
    let mut moduli = Vec::new();
    for x in &a.invariant_factors {
        moduli.extend(std::iter::repeat_n(x.clone(), b.free_rank));
        for y in &b.invariant_factors {
            moduli.push(x.gcd(y));
        }
    }
    for y in &b.invariant_factors {
        moduli.extend(std::iter::repeat_n(y.clone(), a.free_rank));
    }
    CanonicalForm::from_cyclics(a.free_rank * b.free_rank, moduli)
}

/// `Tor(A, B)` on canonical forms.
pub fn tor_form(a: &CanonicalForm, b: &CanonicalForm) -> CanonicalForm {
    let moduli = a
        .invariant_factors
        .iter()
        .flat_map(|x| b.invariant_factors.iter().map(move |y| x.gcd(y)));
    CanonicalForm::from_cyclics(0, moduli)
}

fn cyclic_homology_forms(modulus: &BigInt, n: usize) -> Vec<CanonicalForm> {
    (0..=n)
        .map(|k| match k {
            0 => CanonicalForm::free(1),
            1 if modulus.is_zero() => CanonicalForm::free(1),
            _ if modulus.is_zero() => CanonicalForm::trivial(),
            _ if k % 2 == 1 => CanonicalForm::from_cyclics(0, [modulus.clone()]),
            _ => CanonicalForm::trivial(),
        })
        .collect()
}

/// One Künneth step: `Hₖ(X ⊕ Y)` from `H_*(X)` and `H_*(Y)`.
pub fn kunneth(x: &[CanonicalForm], y: &[CanonicalForm], n: usize) -> Vec<CanonicalForm> {
    let get = |v: &[CanonicalForm], i: usize| v.get(i).cloned().unwrap_or_else(CanonicalForm::trivial);
    (0..=n)
        .map(|k| {
            let mut acc = CanonicalForm::trivial();
            for i in 0..=k {
                acc = acc.direct_sum(&tensor_form(&get(x, i), &get(y, k - i)));
            }
            for i in 0..k {
                acc = acc.direct_sum(&tor_form(&get(x, i), &get(y, k - 1 - i)));
            }
            acc
        })
        .collect()
}

/// Canonical forms of `H₀(A), …, H_n(A)`.
pub fn homology_forms(a: &CanonicalForm, n: usize) -> Vec<CanonicalForm> {
    let mut acc = cyclic_homology_forms(&BigInt::one(), n);
    let factors = std::iter::repeat_n(BigInt::zero(), a.free_rank).chain(a.invariant_factors.iter().cloned());
    for m in factors {
        acc = kunneth(&acc, &cyclic_homology_forms(&m, n), n);
    }
    acc
}

/// `H_*(A; ℤ)` up to degree `n`, computed by iterated Künneth over the
/// cyclic decomposition of `A`.
pub fn homology(a: &Presentation, n: usize) -> GradedGroup {
    GradedGroup::new(
        homology_forms(a.canonical_form(), n)
            .iter()
            .map(Presentation::from_canonical)
            .collect(),
    )
}

/// `L₁Λ²(A)` on canonical forms: `ℤ/dᵢ` per torsion summand plus
/// `Tor(ℤ/dᵢ, ℤ/dⱼ)` per pair.
pub fn l1lambda2_form(a: &CanonicalForm) -> CanonicalForm {
    let d = &a.invariant_factors;
    let mut moduli = d.clone();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            moduli.push(d[i].gcd(&d[j]));
        }
    }
    CanonicalForm::from_cyclics(0, moduli)
}

pub fn l1lambda2(a: &Presentation) -> Presentation {
    Presentation::from_canonical(&l1lambda2_form(a.canonical_form()))
}

/// Comparison of `H₃(A)` with `Λ³(A)` and `L₁Λ²(A)`.
#[derive(Clone, Debug, Serialize)]
pub struct BreenReport {
    pub h3: CanonicalForm,
    pub lambda3: CanonicalForm,
    pub l1lambda2: CanonicalForm,
    /// `H₃ ≅ Λ³ ⊕ L₁Λ²`.
    pub split: bool,
    /// `Λ³(A) → H₃(A)` injective with cokernel `≅ L₁Λ²(A)`, checked on chains.
    pub exact: bool,
}

/// Checks that `H₃(A)` is consistent with an extension of `L₁Λ²(A)` by
/// `Λ³(A)`.
///
/// Free ranks must add and the torsion orders must be compatible (they
/// multiply exactly when `A` is finite); otherwise one of the three functors
/// is wrong and [`Error::InconsistentOrders`] is returned. Splitting and
/// chain-level exactness are reported as separate flags.
pub fn breen_check(a: &Presentation) -> Result<BreenReport> {
    let cf = a.canonical_form();
    let h3 = homology_forms(cf, 3).pop().expect("degree 3 present");
    let lambda3 = lambda(3, a).canonical_form().clone();
    let l1 = l1lambda2_form(cf);
    if h3.free_rank != lambda3.free_rank + l1.free_rank {
        return Err(Error::InconsistentOrders(format!(
            "rank H3 = {} but rank Λ3 + rank L1Λ2 = {} + {}",
            h3.free_rank, lambda3.free_rank, l1.free_rank
        )));
    }
    let (th, tl, tq) = (h3.torsion_order(), lambda3.torsion_order(), l1.torsion_order());
    let product = &tl * &tq;
    let orders_ok = if cf.is_finite() {
        th == product
    } else {
        (&th % &tl).is_zero() && (&product % &th).is_zero()
    };
    if !orders_ok {
        return Err(Error::InconsistentOrders(format!(
            "|t(H3)| = {th}, |t(Λ3)| = {tl}, |L1Λ2| = {tq}"
        )));
    }
    let split = h3 == lambda3.direct_sum(&l1);
    let exact = cyclic::breen_sequence_exact(a);
    Ok(BreenReport {
        h3,
        lambda3,
        l1lambda2: l1,
        split,
        exact,
    })
}

/// Odd torsion of `L₁Λ²(A)` against odd torsion of `Tor(A, A)`.
#[derive(Clone, Debug, Serialize)]
pub struct OddSummandReport {
    pub l1lambda2_odd: CanonicalForm,
    pub tor_odd: CanonicalForm,
    pub holds: bool,
}

/// Whether the odd part of `L₁Λ²(A)` is a direct summand of the odd part of
/// `Tor(A, A)`, as maps composing to `2·Id` force.
pub fn odd_summand_check(a: &Presentation) -> OddSummandReport {
    let odd = |p: &BigInt| p != &BigInt::from(2);
    let l1 = l1lambda2_form(a.canonical_form()).torsion_restricted(odd);
    let t = tor(a, a).canonical_form().torsion_restricted(odd);
    OddSummandReport {
        holds: l1.is_summand_of(&t),
        l1lambda2_odd: l1,
        tor_odd: t,
    }
}
