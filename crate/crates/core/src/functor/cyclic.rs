//! Chain-level homology of direct sums of cyclic groups.
//!
//! For `A = ⊕ Cᵢ` the tensor product `K(A) = ⊗ K(Cᵢ)` of the small complexes
//!
//! * `K(ℤ/m)`: `ℤ` in every degree, `d₂ₖ = m`, odd differentials zero,
//! * `K(ℤ)`: `ℤ` in degrees 0 and 1 with zero differential,
//!
//! computes `H_*(A; ℤ)`. A homomorphism that sends each cyclic summand into
//! at most one summand (and hits each summand at most once) lifts to a tensor
//! product of explicit chain maps, which yields induced maps in every degree.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::Presentation;
use crate::hom::{cokernel_with_lift, kernel_basis, reduce, solve, Homomorphism};
use crate::matrix::IntMatrix;

use super::exterior::{compound_matrix, increasing_tuples, lambda};
use super::homology::l1lambda2_form;

/// A presentation identified with `⊕ ℤ/mᵢ` on cyclic generators
/// (`mᵢ = 0` for `ℤ`, `mᵢ = 1` for a generator that is zero).
#[derive(Clone, Debug)]
pub struct SplitView {
    pub moduli: Vec<BigInt>,
    /// From the original generators to the cyclic ones.
    pub to_split: IntMatrix,
    /// From the cyclic generators back to the original ones.
    pub from_split: IntMatrix,
}

/// Uses the presentation's own generators when every relation involves a
/// single generator, and the Smith basis otherwise.
pub fn split_view(a: &Presentation) -> SplitView {
    if let Some(moduli) = a.cyclic_moduli() {
        let l = a.gens();
        return SplitView {
            moduli,
            to_split: IntMatrix::identity(l),
            from_split: IntMatrix::identity(l),
        };
    }
    let r = reduce(a);
    SplitView {
        moduli: r.reduced.cyclic_moduli().expect("reduced presentations are diagonal"),
        to_split: r.to_reduced.matrix().clone(),
        from_split: r.from_reduced.matrix().clone(),
    }
}

/// The complex `⊗ K(ℤ/mᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorComplex {
    moduli: Vec<BigInt>,
}

impl TensorComplex {
    pub fn new(moduli: Vec<BigInt>) -> Self {
        TensorComplex { moduli }
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    fn top_degree(&self, i: usize) -> Option<u32> {
        let m = &self.moduli[i];
        if m.is_zero() {
            Some(1)
        } else if m.is_one() {
            Some(0)
        } else {
            None
        }
    }

    /// Basis of degree `n`: multi-degrees `(k₁, …, k_g)` summing to `n`.
    pub fn basis(&self, n: u32) -> Vec<Vec<u32>> {
        let g = self.moduli.len();
        let mut out = Vec::new();
        let mut cur = vec![0u32; g];
        self.compositions(0, n, &mut cur, &mut out);
        out
    }

    fn compositions(&self, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == self.moduli.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let hi = self.top_degree(i).map_or(left, |t| t.min(left));
        for k in (0..=hi).rev() {
            cur[i] = k;
            self.compositions(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }

    fn factor_boundary(&self, i: usize, k: u32) -> BigInt {
        let m = &self.moduli[i];
        if k > 0 && k % 2 == 0 && !m.is_zero() && !m.is_one() {
            m.clone()
        } else {
            BigInt::zero()
        }
    }

    /// `dₙ : Kₙ → Kₙ₋₁` with the Koszul sign `(−1)^{k₁+…+kᵢ₋₁}`.
    pub fn boundary(&self, n: u32) -> IntMatrix {
        let cols = self.basis(n);
        if n == 0 {
            return IntMatrix::zeros(0, cols.len());
        }
        let rows = self.basis(n - 1);
        let index: HashMap<&[u32], usize> = rows.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
        let mut d = IntMatrix::zeros(rows.len(), cols.len());
        for (c, t) in cols.iter().enumerate() {
            let mut before = 0u32;
            for i in 0..t.len() {
                let coeff = self.factor_boundary(i, t[i]);
                if !coeff.is_zero() {
                    let mut s = t.clone();
                    s[i] -= 1;
                    let v = if before % 2 == 0 { coeff } else { -coeff };
                    d[(index[s.as_slice()], c)] += v;
                }
                before += t[i];
            }
        }
        d
    }
}

/// `Hₙ` of a [`TensorComplex`] as a reduced presentation, with the data to
/// move between cycles and homology classes.
#[derive(Clone, Debug)]
pub struct CyclicHomology {
    pub complex: TensorComplex,
    pub degree: u32,
    pub group: Presentation,
    basis: Vec<Vec<u32>>,
    cycles: Homomorphism,
    to_group: IntMatrix,
    from_group: IntMatrix,
}

impl CyclicHomology {
    pub fn new(moduli: Vec<BigInt>, degree: u32) -> Self {
        let complex = TensorComplex::new(moduli);
        let basis = complex.basis(degree);
        let z = if degree == 0 {
            IntMatrix::identity(basis.len())
        } else {
            kernel_basis(&complex.boundary(degree))
        };
        let cycles = Homomorphism::unchecked(Presentation::free(z.cols()), Presentation::free(basis.len()), z);
        let boundaries = complex.boundary(degree + 1);
        let rel: Vec<Vec<BigInt>> = boundaries
            .columns()
            .map(|b| solve(&cycles, &b).expect("boundaries are cycles"))
            .collect();
        let pres = Presentation::new(cycles.source().gens(), IntMatrix::from_columns(cycles.source().gens(), &rel))
            .expect("row count matches");
        let r = reduce(&pres);
        CyclicHomology {
            complex,
            degree,
            group: r.reduced,
            basis,
            cycles,
            to_group: r.to_reduced.matrix().clone(),
            from_group: r.from_reduced.matrix().clone(),
        }
    }

    pub fn of(a: &Presentation, degree: u32) -> Self {
        Self::new(split_view(a).moduli, degree)
    }

    pub fn chain_basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    /// A cycle representing generator `j` of [`Self::group`].
    pub fn cycle(&self, j: usize) -> Vec<BigInt> {
        let y: Vec<BigInt> = (0..self.from_group.rows()).map(|r| self.from_group[(r, j)].clone()).collect();
        self.cycles.apply(&y)
    }

    /// Homology class of a cycle, in the coordinates of [`Self::group`].
    pub fn class_of(&self, cycle: &[BigInt]) -> Vec<BigInt> {
        let y = solve(&self.cycles, cycle).expect("argument must be a cycle");
        self.to_group.mul_vec(&y)
    }

    fn chain_index(&self) -> HashMap<&[u32], usize> {
        self.basis.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect()
    }
}

/// For each source summand, the target summand it maps into and the scalar.
pub type BlockPattern = Vec<Option<(usize, BigInt)>>;

/// Reads off a [`BlockPattern`] from a map between split presentations.
pub fn block_pattern(m: &IntMatrix, src: &[BigInt], tgt: &[BigInt]) -> Result<BlockPattern> {
    let effective = |r: usize, c: usize| {
        let x = &m[(r, c)];
        let t = &tgt[r];
        if t.is_zero() {
            !x.is_zero()
        } else {
            !x.mod_floor(t).is_zero()
        }
    };
    let mut pattern = vec![None; src.len()];
    let mut hit = vec![false; tgt.len()];
    for (c, slot) in pattern.iter_mut().enumerate() {
        let rows: Vec<usize> = (0..tgt.len()).filter(|&r| effective(r, c)).collect();
        match rows.as_slice() {
            [] => {}
            [r] => {
                if hit[*r] {
                    return Err(Error::UnsupportedInducedMap(
                        "two cyclic summands map into the same summand".into(),
                    ));
                }
                hit[*r] = true;
                *slot = Some((*r, m[(*r, c)].clone()));
            }
            _ => {
                return Err(Error::UnsupportedInducedMap(
                    "a cyclic summand maps into several summands".into(),
                ))
            }
        }
    }
    Ok(pattern)
}

/// Coefficient in degree `k` of the chain map `K(ℤ/m) → K(ℤ/m′)` lifting
/// multiplication by `a`.
fn factor_coefficient(m: &BigInt, m_tgt: &BigInt, a: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    if m.is_zero() {
        return if k == 1 { a.clone() } else { BigInt::zero() };
    }
    let b = (a * m).div_floor(m_tgt);
    let t = k.div_ceil(2);
    if k % 2 == 1 {
        a * num_traits::pow(b, (t - 1) as usize)
    } else {
        num_traits::pow(b, t as usize)
    }
}

/// Chain map `Kₙ(A) → Kₙ(B)` for a blockwise map.
pub fn chain_map(src: &TensorComplex, tgt: &TensorComplex, pattern: &BlockPattern, n: u32) -> IntMatrix {
    let sb = src.basis(n);
    let tb = tgt.basis(n);
    let index: HashMap<&[u32], usize> = tb.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let mut out = IntMatrix::zeros(tb.len(), sb.len());
    'cols: for (c, k) in sb.iter().enumerate() {
        let mut image = vec![0u32; tgt.moduli.len()];
        let mut coeff = BigInt::one();
        for (i, &ki) in k.iter().enumerate() {
            match &pattern[i] {
                None if ki > 0 => continue 'cols,
                None => {}
                Some((j, a)) => {
                    image[*j] = ki;
                    coeff *= factor_coefficient(&src.moduli[i], &tgt.moduli[*j], a, ki);
                }
            }
        }
        if coeff.is_zero() {
            continue;
        }
        let mut odd_swaps = 0u32;
        for i1 in 0..k.len() {
            for i2 in i1 + 1..k.len() {
                if let (Some((j1, _)), Some((j2, _))) = (&pattern[i1], &pattern[i2]) {
                    if j1 > j2 {
                        odd_swaps += k[i1] * k[i2];
                    }
                }
            }
        }
        if odd_swaps % 2 == 1 {
            coeff = -coeff;
        }
        out[(index[image.as_slice()], c)] = coeff;
    }
    out
}

/// Matrix of `Hₙ(f)` between two cyclic models, where `f` is given on the
/// split generators.
pub fn induced_matrix(f_split: &IntMatrix, s: &CyclicHomology, t: &CyclicHomology) -> Result<IntMatrix> {
    let pattern = block_pattern(f_split, s.complex.moduli(), t.complex.moduli())?;
    let c = chain_map(&s.complex, &t.complex, &pattern, s.degree);
    let cols: Vec<Vec<BigInt>> = (0..s.group.gens())
        .map(|j| t.class_of(&c.mul_vec(&s.cycle(j))))
        .collect();
    Ok(IntMatrix::from_columns(t.group.gens(), &cols))
}

/// `Hₙ(f) : Hₙ(A) → Hₙ(B)` in the cyclic model.
pub fn homology_induced(f: &Homomorphism, s: &CyclicHomology, t: &CyclicHomology) -> Result<Homomorphism> {
    let sv = split_view(f.source());
    let tv = split_view(f.target());
    let f_split = &(&tv.to_split * f.matrix()) * &sv.from_split;
    let m = induced_matrix(&f_split, s, t)?;
    Homomorphism::new(s.group.clone(), t.group.clone(), m)
}

/// The Pontryagin product `Λⁿ(A) → Hₙ(A)`, `a₁ ∧ … ∧ aₙ ↦ [a₁ ⋯ aₙ]`.
pub fn exterior_to_homology(a: &Presentation, h: &CyclicHomology) -> Result<Homomorphism> {
    let view = split_view(a);
    let n = h.degree as usize;
    let index = h.chain_index();
    let tuples = increasing_tuples(view.moduli.len(), n);
    let cols: Vec<Vec<BigInt>> = tuples
        .iter()
        .map(|t| {
            let mut k = vec![0u32; view.moduli.len()];
            for &i in t {
                k[i] = 1;
            }
            let mut v = vec![BigInt::zero(); h.chain_basis().len()];
            match index.get(k.as_slice()) {
                Some(&pos) => {
                    v[pos] = BigInt::one();
                    h.class_of(&v)
                }
                None => vec![BigInt::zero(); h.group.gens()],
            }
        })
        .collect();
    let on_split = IntMatrix::from_columns(h.group.gens(), &cols);
    let m = &on_split * &compound_matrix(&view.to_split, n);
    Homomorphism::new(lambda(n, a), h.group.clone(), m)
}

/// `L₁Λ²(A) = coker(Λ³(A) → H₃(A))`, with the data to induce maps.
#[derive(Clone, Debug)]
pub struct CyclicL1Lambda2 {
    pub h3: CyclicHomology,
    pub group: Presentation,
    projection: IntMatrix,
    lift: IntMatrix,
}

impl CyclicL1Lambda2 {
    pub fn of(a: &Presentation) -> Result<Self> {
        let h3 = CyclicHomology::of(a, 3);
        let product = exterior_to_homology(a, &h3)?;
        let (group, proj, lift) = cokernel_with_lift(&product);
        Ok(CyclicL1Lambda2 {
            h3,
            group,
            projection: proj.matrix().clone(),
            lift,
        })
    }

    pub fn induced(f: &Homomorphism, s: &Self, t: &Self) -> Result<Homomorphism> {
        let h3f = homology_induced(f, &s.h3, &t.h3)?;
        let m = &(&t.projection * h3f.matrix()) * &s.lift;
        Homomorphism::new(s.group.clone(), t.group.clone(), m)
    }
}

/// Whether `0 → Λ³(A) → H₃(A) → L₁Λ²(A) → 0` holds on chains: the product
/// map is injective and its cokernel has the cross-effect form.
pub fn breen_sequence_exact(a: &Presentation) -> bool {
    let h3 = CyclicHomology::of(a, 3);
    let Ok(product) = exterior_to_homology(a, &h3) else {
        return false;
    };
    let (coker, _, _) = cokernel_with_lift(&product);
    product.is_injective() && coker.canonical_form() == &l1lambda2_form(a.canonical_form())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::CanonicalForm;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn complex_squares_to_zero() {
        let k = TensorComplex::new(big(&[2, 0, 6, 1]));
        for n in 1..6 {
            let dd = &k.boundary(n) * &k.boundary(n + 1);
            assert!(dd.is_zero(), "d∘d ≠ 0 in degree {n}");
        }
    }

    #[test]
    fn cyclic_group_homology() {
        for n in 0..6u32 {
            let h = CyclicHomology::new(big(&[4]), n);
            let expected = match n {
                0 => CanonicalForm::free(1),
                _ if n % 2 == 1 => CanonicalForm::from_factors(0, &[4]),
                _ => CanonicalForm::trivial(),
            };
            assert_eq!(h.group.canonical_form(), &expected, "degree {n}");
        }
    }

    #[test]
    fn projection_kills_h3() {
        let s = CyclicHomology::new(big(&[4]), 3);
        let t = CyclicHomology::new(big(&[2]), 3);
        let m = induced_matrix(&IntMatrix::from_rows(&[vec![1]]).unwrap(), &s, &t).unwrap();
        let h = Homomorphism::new(s.group.clone(), t.group.clone(), m).unwrap();
        assert!(h.is_zero());
        let s1 = CyclicHomology::new(big(&[4]), 1);
        let t1 = CyclicHomology::new(big(&[2]), 1);
        let m1 = induced_matrix(&IntMatrix::from_rows(&[vec![1]]).unwrap(), &s1, &t1).unwrap();
        let h1 = Homomorphism::new(s1.group.clone(), t1.group.clone(), m1).unwrap();
        assert!(h1.is_surjective());
    }

    #[test]
    fn swap_is_supported_and_nonblockwise_is_not() {
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(block_pattern(&swap, &big(&[2, 2]), &big(&[2, 2])).is_ok());
        let diag = IntMatrix::from_rows(&[vec![1], vec![1]]).unwrap();
        assert!(block_pattern(&diag, &big(&[2]), &big(&[2, 2])).is_err());
    }
}
