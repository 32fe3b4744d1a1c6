//! Homomorphisms between presented groups and the constructions built on
//! them: kernels, images, cokernels, sums and lifting.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::Presentation;
use crate::matrix::IntMatrix;
use crate::snf::{smith_normal_form, SmithForm};

struct HomInner {
    source: Presentation,
    target: Presentation,
    matrix: IntMatrix,
    // Smith data of [M | R_target], shared by solve and kernel
    augmented: OnceLock<SmithForm>,
}

/// A homomorphism given on generators by an integer matrix
/// (`target.gens × source.gens`). Construction checks well-definedness.
#[derive(Clone)]
pub struct Homomorphism {
    inner: Arc<HomInner>,
}

impl Homomorphism {
    pub fn new(source: Presentation, target: Presentation, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.gens() || matrix.cols() != source.gens() {
            return Err(Error::DimensionMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.gens(),
                source.gens()
            )));
        }
        let images = &matrix * source.relations();
        for (j, col) in images.columns().enumerate() {
            if !target.is_zero_vector(&col) {
                return Err(Error::NotWellDefined(format!(
                    "source relation {j} maps outside the target relation lattice"
                )));
            }
        }
        Ok(Self::unchecked(source, target, matrix))
    }

    pub(crate) fn unchecked(source: Presentation, target: Presentation, matrix: IntMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), target.gens());
        debug_assert_eq!(matrix.cols(), source.gens());
        Homomorphism {
            inner: Arc::new(HomInner {
                source,
                target,
                matrix,
                augmented: OnceLock::new(),
            }),
        }
    }

    pub fn identity(a: &Presentation) -> Self {
        Self::unchecked(a.clone(), a.clone(), IntMatrix::identity(a.gens()))
    }

    pub fn zero(source: &Presentation, target: &Presentation) -> Self {
        Self::unchecked(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.gens(), source.gens()),
        )
    }

    /// Multiplication by `n` on `a`.
    pub fn multiplication(a: &Presentation, n: impl Into<BigInt>) -> Self {
        Self::unchecked(a.clone(), a.clone(), IntMatrix::scalar(a.gens(), n.into()))
    }

    pub fn source(&self) -> &Presentation {
        &self.inner.source
    }

    pub fn target(&self) -> &Presentation {
        &self.inner.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.inner.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.inner.matrix.mul_vec(x)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Homomorphism) -> Result<Homomorphism> {
        if first.target().gens() != self.source().gens()
            || first.target().relations() != self.source().relations()
        {
            return Err(Error::DimensionMismatch(
                "composition of maps whose middle groups differ".into(),
            ));
        }
        Ok(Self::unchecked(
            first.source().clone(),
            self.target().clone(),
            self.matrix() * first.matrix(),
        ))
    }

    /// Same map with source and target replaced by presentations on the same
    /// generators (re-checked).
    pub fn retarget(&self, source: &Presentation, target: &Presentation) -> Result<Homomorphism> {
        Homomorphism::new(source.clone(), target.clone(), self.matrix().clone())
    }

    pub fn is_zero(&self) -> bool {
        self.matrix()
            .columns()
            .all(|c| self.target().is_zero_vector(&c))
    }

    /// Pointwise equality on generators modulo the target relations.
    pub fn equals(&self, other: &Homomorphism) -> bool {
        self.source().gens() == other.source().gens()
            && self.target().same_as(other.target())
            && self
                .matrix()
                .sub(other.matrix())
                .columns()
                .all(|c| self.target().is_zero_vector(&c))
    }

    pub fn is_injective(&self) -> bool {
        kernel(self).0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        cokernel(self).0.is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }

    fn augmented(&self) -> &SmithForm {
        self.inner.augmented.get_or_init(|| {
            smith_normal_form(&self.matrix().hstack(self.target().relations()))
        })
    }
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Homomorphism({:?} -> {:?}, {})",
            self.source(),
            self.target(),
            self.matrix()
        )
    }
}

/// Finds `x` with `h(x) = y` in the target group, if one exists.
pub fn solve(h: &Homomorphism, y: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(y.len(), h.target().gens(), "target coordinate length mismatch");
    let snf = h.augmented();
    let diag = snf.diagonal();
    let w = snf.u.mul_vec(y);
    let mut sol = vec![BigInt::zero(); snf.v.rows()];
    for (i, wi) in w.iter().enumerate() {
        match diag.get(i) {
            Some(d) => {
                let (q, r) = wi.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                sol[i] = q;
            }
            None if !wi.is_zero() => return None,
            None => {}
        }
    }
    let full = snf.v.mul_vec(&sol);
    Some(full[..h.source().gens()].to_vec())
}

/// Columns of `V` beyond the rank: a basis of the integer kernel of `n`.
pub fn kernel_basis(n: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(n);
    snf.v.select_cols(snf.rank..n.cols())
}

/// A basis of the lattice spanned by the columns of `g`.
pub fn lattice_basis(g: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(g);
    (g * &snf.v).select_cols(0..snf.rank)
}

/// The subgroup of `a` generated by the classes of the columns of `g`,
/// returned on a reduced presentation together with its inclusion.
pub fn subgroup(a: &Presentation, g: &IntMatrix) -> (Presentation, Homomorphism) {
    assert_eq!(g.rows(), a.gens(), "generator rows must match the ambient group");
    let g = lattice_basis(g);
    let s = g.cols();
    let rel = kernel_basis(&g.hstack(a.relations())).select_rows(0..s);
    let sub = Presentation::new(s, rel).expect("row count matches");
    let incl = Homomorphism::unchecked(sub.clone(), a.clone(), g);
    reduce_source(&incl)
}

/// Whether every column of `g` represents an element of the image of `h`.
pub fn image_contains(h: &Homomorphism, g: &IntMatrix) -> bool {
    g.columns().all(|c| solve(h, &c).is_some())
}

/// `ker h` with its inclusion into the source.
pub fn kernel(h: &Homomorphism) -> (Presentation, Homomorphism) {
    let la = h.source().gens();
    let snf = h.augmented();
    let preimage = snf.v.select_cols(snf.rank..snf.v.cols()).select_rows(0..la);
    subgroup(h.source(), &preimage)
}

/// `im h` with its inclusion into the target.
pub fn image(h: &Homomorphism) -> (Presentation, Homomorphism) {
    subgroup(h.target(), h.matrix())
}

/// `coker h` with the projection from the target.
pub fn cokernel(h: &Homomorphism) -> (Presentation, Homomorphism) {
    let (c, proj, _) = cokernel_with_lift(h);
    (c, proj)
}

/// `coker h`, its projection, and a matrix sending each cokernel generator
/// to a representative in the target.
pub fn cokernel_with_lift(h: &Homomorphism) -> (Presentation, Homomorphism, IntMatrix) {
    let t = h.target();
    let c = Presentation::new(t.gens(), t.relations().hstack(h.matrix())).expect("row count matches");
    let r = reduce(&c);
    let proj = Homomorphism::unchecked(t.clone(), r.reduced.clone(), r.to_reduced.matrix().clone());
    (r.reduced, proj, r.from_reduced.matrix().clone())
}

/// Isomorphism data between a presentation and its Smith-reduced form
/// `ℤ^r ⊕ ⊕ ℤ/dᵢ` (unit factors dropped).
pub struct Reduction {
    pub reduced: Presentation,
    pub to_reduced: Homomorphism,
    pub from_reduced: Homomorphism,
}

pub fn reduce(a: &Presentation) -> Reduction {
    let lat = a.lattice();
    let picks: Vec<usize> = (0..a.gens())
        .filter(|&i| lat.diag.get(i).is_none_or(|d| !d.is_one()))
        .collect();
    let moduli = picks
        .iter()
        .map(|&i| lat.diag.get(i).cloned().unwrap_or_else(BigInt::zero));
    let reduced = Presentation::cyclics(moduli);
    let to_reduced =
        Homomorphism::unchecked(a.clone(), reduced.clone(), lat.snf.u.select_rows(picks.iter().copied()));
    let from_reduced = Homomorphism::unchecked(reduced.clone(), a.clone(), lat.snf.u_inv.select_cols(picks));
    Reduction {
        reduced,
        to_reduced,
        from_reduced,
    }
}

/// Replaces the source of `h` by its reduced form.
pub fn reduce_source(h: &Homomorphism) -> (Presentation, Homomorphism) {
    let r = reduce(h.source());
    let map = Homomorphism::unchecked(r.reduced.clone(), h.target().clone(), h.matrix() * r.from_reduced.matrix());
    (r.reduced, map)
}

/// Replaces the target of `h` by its reduced form.
pub fn reduce_target(h: &Homomorphism) -> (Presentation, Homomorphism) {
    let r = reduce(h.target());
    let map = Homomorphism::unchecked(h.source().clone(), r.reduced.clone(), r.to_reduced.matrix() * h.matrix());
    (r.reduced, map)
}

/// A finite direct sum with its canonical injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub sum: Presentation,
    pub injections: Vec<Homomorphism>,
    pub projections: Vec<Homomorphism>,
    pub offsets: Vec<usize>,
}

pub fn direct_sum(a: &Presentation, b: &Presentation) -> DirectSum {
    direct_sum_many(&[a.clone(), b.clone()])
}

pub fn direct_sum_many(parts: &[Presentation]) -> DirectSum {
    let gens: usize = parts.iter().map(Presentation::gens).sum();
    let rels: usize = parts.iter().map(|p| p.relations().cols()).sum();
    let mut rel = IntMatrix::zeros(gens, rels);
    let mut offsets = Vec::with_capacity(parts.len());
    let (mut r0, mut c0) = (0, 0);
    for p in parts {
        rel.set_block(r0, c0, p.relations());
        offsets.push(r0);
        r0 += p.gens();
        c0 += p.relations().cols();
    }
    let sum = Presentation::new(gens, rel).expect("block relations");
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    for (p, &off) in parts.iter().zip(&offsets) {
        let mut inj = IntMatrix::zeros(gens, p.gens());
        let mut proj = IntMatrix::zeros(p.gens(), gens);
        for k in 0..p.gens() {
            inj[(off + k, k)] = BigInt::one();
            proj[(k, off + k)] = BigInt::one();
        }
        injections.push(Homomorphism::unchecked(p.clone(), sum.clone(), inj));
        projections.push(Homomorphism::unchecked(sum.clone(), p.clone(), proj));
    }
    DirectSum {
        sum,
        injections,
        projections,
        offsets,
    }
}

/// `f ⊕ g` between the direct sums of sources and targets.
pub fn sum_of_maps(maps: &[Homomorphism]) -> (DirectSum, DirectSum, Homomorphism) {
    let src = direct_sum_many(&maps.iter().map(|m| m.source().clone()).collect::<Vec<_>>());
    let tgt = direct_sum_many(&maps.iter().map(|m| m.target().clone()).collect::<Vec<_>>());
    let mut mat = IntMatrix::zeros(tgt.sum.gens(), src.sum.gens());
    for (k, m) in maps.iter().enumerate() {
        mat.set_block(tgt.offsets[k], src.offsets[k], m.matrix());
    }
    let h = Homomorphism::unchecked(src.sum.clone(), tgt.sum.clone(), mat);
    (src, tgt, h)
}

/// The map `x ↦ (f₁(x), …, f_k(x))` into the direct sum of the targets.
pub fn stack_maps(source: &Presentation, maps: &[Homomorphism]) -> (DirectSum, Homomorphism) {
    let tgt = direct_sum_many(&maps.iter().map(|m| m.target().clone()).collect::<Vec<_>>());
    let mut mat = IntMatrix::zeros(tgt.sum.gens(), source.gens());
    for (k, m) in maps.iter().enumerate() {
        assert_eq!(m.source().gens(), source.gens(), "stacked maps need a common source");
        mat.set_block(tgt.offsets[k], 0, m.matrix());
    }
    let h = Homomorphism::unchecked(source.clone(), tgt.sum.clone(), mat);
    (tgt, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::CanonicalForm;

    fn z() -> Presentation {
        Presentation::free(1)
    }

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn hom(s: &Presentation, t: &Presentation, rows: &[Vec<i64>]) -> Homomorphism {
        Homomorphism::new(s.clone(), t.clone(), IntMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn rejects_ill_defined() {
        let z2 = Presentation::cyclic(2);
        let z3 = Presentation::cyclic(3);
        let bad = Homomorphism::new(z2, z3, IntMatrix::from_rows(&[vec![1]]).unwrap());
        assert!(matches!(bad, Err(Error::NotWellDefined(_))));
    }

    #[test]
    fn times_two_on_z() {
        let h = hom(&z(), &z(), &[vec![2]]);
        assert!(kernel(&h).0.is_trivial());
        assert_eq!(cokernel(&h).0.canonical_form(), &CanonicalForm::from_factors(0, &[2]));
        assert_eq!(solve(&h, &[b(4)]), Some(vec![b(2)]));
        assert_eq!(solve(&h, &[b(3)]), None);
    }

    #[test]
    fn projection_z4_to_z2() {
        let h = hom(&Presentation::cyclic(4), &Presentation::cyclic(2), &[vec![1]]);
        let (k, incl) = kernel(&h);
        assert_eq!(k.canonical_form(), &CanonicalForm::from_factors(0, &[2]));
        assert!(incl.is_injective());
        assert!(h.compose(&incl).unwrap().is_zero());
        assert!(h.is_surjective());
    }

    #[test]
    fn inclusion_of_2z_mod_4() {
        let z4 = Presentation::cyclic(4);
        let (i, _) = image(&hom(&z4, &z4, &[vec![2]]));
        assert_eq!(i.canonical_form(), &CanonicalForm::from_factors(0, &[2]));
        let (c, _) = cokernel(&hom(&z4, &z4, &[vec![2]]));
        assert_eq!(c.canonical_form(), &CanonicalForm::from_factors(0, &[2]));
    }

    #[test]
    fn solve_modulo_target() {
        let h = hom(&z(), &Presentation::cyclic(5), &[vec![1]]);
        let x = solve(&h, &[b(3)]).unwrap();
        assert!(h.target().is_zero_vector(&[&h.apply(&x)[0] - b(3)]));
    }

    #[test]
    fn direct_sums() {
        let s = direct_sum(&Presentation::cyclic(2), &Presentation::cyclic(3));
        assert_eq!(s.sum.canonical_form(), &CanonicalForm::from_factors(0, &[6]));
        for k in 0..2 {
            let id = s.projections[k].compose(&s.injections[k]).unwrap();
            assert!(id.equals(&Homomorphism::identity(id.source())));
        }
    }

    #[test]
    fn zero_map_kernel_is_source() {
        let a = Presentation::cyclics([0, 4].map(BigInt::from));
        let (k, _) = kernel(&Homomorphism::zero(&a, &Presentation::cyclic(3)));
        assert_eq!(k.canonical_form(), a.canonical_form());
    }
}
