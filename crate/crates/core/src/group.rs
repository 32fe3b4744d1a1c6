//! Finitely generated abelian groups given by generators and relations.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::snf::{invariant_factors, smith_normal_form, SmithForm};

/// Isomorphism class of a finitely generated abelian group:
/// `ℤ^free_rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_r` with `2 ≤ d₁ | d₂ | … | d_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl CanonicalForm {
    pub fn trivial() -> Self {
        CanonicalForm {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        CanonicalForm {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    /// Builds the canonical form of `ℤ^free_rank ⊕ ⊕ ℤ/mᵢ` for arbitrary
    /// moduli (units are dropped, coprime parts merged).
    pub fn from_cyclics<I: IntoIterator<Item = BigInt>>(free_rank: usize, moduli: I) -> Self {
        let mut free = free_rank;
        let mut torsion = Vec::new();
        for m in moduli {
            let m = m.abs();
            if m.is_zero() {
                free += 1;
            } else if !m.is_one() {
                torsion.push(m);
            }
        }
        let chain = crate::snf::diagonal_to_chain(torsion);
        CanonicalForm {
            free_rank: free,
            invariant_factors: chain.into_iter().filter(|d| !d.is_one()).collect(),
        }
    }

    pub fn from_factors(free_rank: usize, factors: &[u64]) -> Self {
        Self::from_cyclics(free_rank, factors.iter().map(|&f| BigInt::from(f)))
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_torsion_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_order())
    }

    /// Largest invariant factor; absent when there is no torsion.
    pub fn exponent_bound(&self) -> Option<BigInt> {
        self.invariant_factors.last().cloned()
    }

    pub fn direct_sum(&self, other: &CanonicalForm) -> CanonicalForm {
        Self::from_cyclics(
            self.free_rank + other.free_rank,
            self.invariant_factors
                .iter()
                .chain(&other.invariant_factors)
                .cloned(),
        )
    }

    /// Prime-power decomposition of the torsion part: `(p, [e₁, e₂, …])`
    /// meaning `ℤ/p^e₁ ⊕ ℤ/p^e₂ ⊕ …`, exponents sorted ascending.
    pub fn primary_parts(&self) -> Vec<(BigInt, Vec<u32>)> {
        let mut parts: std::collections::BTreeMap<BigInt, Vec<u32>> = Default::default();
        for d in &self.invariant_factors {
            for (p, e) in factorize(d) {
                parts.entry(p).or_default().push(e);
            }
        }
        parts
            .into_iter()
            .map(|(p, mut es)| {
                es.sort_unstable();
                (p, es)
            })
            .collect()
    }

    /// Keeps only the `p`-primary torsion for primes accepted by `keep`.
    pub fn torsion_restricted(&self, keep: impl Fn(&BigInt) -> bool) -> CanonicalForm {
        let moduli = self
            .primary_parts()
            .into_iter()
            .filter(|(p, _)| keep(p))
            .flat_map(|(p, es)| es.into_iter().map(move |e| num_traits::pow(p.clone(), e as usize)))
            .collect::<Vec<_>>();
        CanonicalForm::from_cyclics(0, moduli)
    }

    /// Whether `self` is isomorphic to a direct summand of `other`.
    pub fn is_summand_of(&self, other: &CanonicalForm) -> bool {
        if self.free_rank > other.free_rank {
            return false;
        }
        let theirs = other.primary_parts();
        self.primary_parts().into_iter().all(|(p, mine)| {
            let Some((_, avail)) = theirs.iter().find(|(q, _)| *q == p) else {
                return false;
            };
            let mut avail = avail.clone();
            mine.iter().all(|e| match avail.iter().position(|a| a == e) {
                Some(k) => {
                    avail.remove(k);
                    true
                }
                None => false,
            })
        })
    }

    /// Text in the group-expression syntax, e.g. `Z^2 + Z/2^2 + Z/12`.
    pub fn to_expr(&self) -> String {
        let mut terms = Vec::new();
        match self.free_rank {
            0 => {}
            1 => terms.push("Z".to_string()),
            k => terms.push(format!("Z^{k}")),
        }
        let mut i = 0;
        while i < self.invariant_factors.len() {
            let d = &self.invariant_factors[i];
            let mut k = 1;
            while i + k < self.invariant_factors.len() && &self.invariant_factors[i + k] == d {
                k += 1;
            }
            if k == 1 {
                terms.push(format!("Z/{d}"));
            } else {
                terms.push(format!("Z/{d}^{k}"));
            }
            i += k;
        }
        if terms.is_empty() {
            "Z/1".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

/// JSON number when it fits, decimal string otherwise.
pub(crate) fn big_to_json(b: &BigInt) -> serde_json::Value {
    match b.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(b.to_string()),
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CanonicalForm", 2)?;
        st.serialize_field("rank", &self.free_rank)?;
        let factors: Vec<serde_json::Value> = self.invariant_factors.iter().map(big_to_json).collect();
        st.serialize_field("factors", &factors)?;
        st.end()
    }
}

fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Smith data of a relation lattice: `U·R·V = D`, with `U⁻¹` cached.
#[derive(Debug)]
pub(crate) struct Lattice {
    pub snf: SmithForm,
    pub diag: Vec<BigInt>,
}

impl Lattice {
    fn new(relations: &IntMatrix) -> Self {
        let snf = smith_normal_form(relations);
        let diag = snf.diagonal();
        Lattice { snf, diag }
    }

    /// Whether `v` lies in the column span of the relations.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let w = self.snf.u.mul_vec(v);
        w.iter().enumerate().all(|(i, x)| match self.diag.get(i) {
            Some(d) => (x % d).is_zero(),
            None => x.is_zero(),
        })
    }
}

struct PresentationInner {
    gens: usize,
    relations: IntMatrix,
    canonical: OnceLock<CanonicalForm>,
    lattice: OnceLock<Lattice>,
}

/// `ℤ^gens / column-span(relations)`.
///
/// Presentations are immutable and cheap to clone; the canonical form and
/// the Smith data of the relation lattice are computed once on demand.
#[derive(Clone)]
pub struct Presentation {
    inner: Arc<PresentationInner>,
}

impl Presentation {
    pub fn new(gens: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != gens {
            return Err(Error::DimensionMismatch(format!(
                "relation matrix has {} rows for {gens} generators",
                relations.rows()
            )));
        }
        Ok(Self::from_parts(gens, relations))
    }

    fn from_parts(gens: usize, relations: IntMatrix) -> Self {
        Presentation {
            inner: Arc::new(PresentationInner {
                gens,
                relations,
                canonical: OnceLock::new(),
                lattice: OnceLock::new(),
            }),
        }
    }

    pub fn trivial() -> Self {
        Self::from_parts(0, IntMatrix::zeros(0, 0))
    }

    pub fn free(rank: usize) -> Self {
        Self::from_parts(rank, IntMatrix::zeros(rank, 0))
    }

    /// `ℤ/n` on one generator; `n = 0` gives `ℤ`.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::cyclics([n.into()])
    }

    /// `⊕ ℤ/mᵢ` with one generator per modulus (`0` means `ℤ`).
    pub fn cyclics<I: IntoIterator<Item = BigInt>>(moduli: I) -> Self {
        let moduli: Vec<BigInt> = moduli.into_iter().collect();
        let l = moduli.len();
        let nonzero: Vec<usize> = (0..l).filter(|&i| !moduli[i].is_zero()).collect();
        let mut rel = IntMatrix::zeros(l, nonzero.len());
        for (c, &i) in nonzero.iter().enumerate() {
            rel[(i, c)] = moduli[i].abs();
        }
        Self::from_parts(l, rel)
    }

    /// The standard presentation `ℤ^r ⊕ ℤ/d₁ ⊕ …`: free generators first.
    pub fn from_canonical(cf: &CanonicalForm) -> Self {
        let moduli = std::iter::repeat_n(BigInt::zero(), cf.free_rank)
            .chain(cf.invariant_factors.iter().cloned());
        let p = Self::cyclics(moduli);
        let _ = p.inner.canonical.set(cf.clone());
        p
    }

    pub fn gens(&self) -> usize {
        self.inner.gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.inner.relations
    }

    pub fn canonical_form(&self) -> &CanonicalForm {
        self.inner.canonical.get_or_init(|| {
            let d = invariant_factors(&self.inner.relations);
            CanonicalForm {
                free_rank: self.inner.gens - d.len(),
                invariant_factors: d.into_iter().filter(|x| !x.is_one()).collect(),
            }
        })
    }

    pub(crate) fn lattice(&self) -> &Lattice {
        self.inner.lattice.get_or_init(|| Lattice::new(&self.inner.relations))
    }

    pub fn is_trivial(&self) -> bool {
        self.gens() == 0 || self.canonical_form().is_trivial()
    }

    pub fn is_finite(&self) -> bool {
        self.canonical_form().is_finite()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.canonical_form().is_torsion_free()
    }

    pub fn exponent_bound(&self) -> Option<BigInt> {
        self.canonical_form().exponent_bound()
    }

    pub fn is_isomorphic(&self, other: &Presentation) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// Whether `v ∈ ℤ^gens` represents zero.
    pub fn is_zero_vector(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.gens(), "coordinate length mismatch");
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        self.lattice().contains(v)
    }

    /// Generator moduli when every relation column involves a single
    /// generator, i.e. the presentation is a direct sum of cyclic groups on
    /// its own generators. Entry `0` means an infinite cyclic summand.
    pub fn cyclic_moduli(&self) -> Option<Vec<BigInt>> {
        let rel = self.relations();
        let mut moduli = vec![BigInt::zero(); self.gens()];
        for c in 0..rel.cols() {
            let nz: Vec<usize> = (0..rel.rows()).filter(|&r| !rel[(r, c)].is_zero()).collect();
            match nz.as_slice() {
                [] => {}
                [r] => moduli[*r] = moduli[*r].gcd(&rel[(*r, c)]),
                _ => return None,
            }
        }
        Some(moduli)
    }

    /// Coordinates of `v` in the Smith basis: `(torsion residues, free coordinates)`.
    ///
    /// Torsion residues are reduced into `[0, dᵢ)`; together with the free
    /// part they identify the class of `v` uniquely.
    pub fn normal_coordinates(&self, v: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        let lat = self.lattice();
        let w = lat.snf.u.mul_vec(v);
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for (i, x) in w.into_iter().enumerate() {
            match lat.diag.get(i) {
                Some(d) if d.is_one() => {}
                Some(d) => torsion.push(x.mod_floor(d)),
                None => free.push(x),
            }
        }
        (torsion, free)
    }

    /// Torsion subgroup with its inclusion, built from the Smith basis.
    pub fn torsion_subgroup(&self) -> (Presentation, crate::hom::Homomorphism) {
        let lat = self.lattice();
        let picks: Vec<usize> = (0..lat.diag.len()).filter(|&i| !lat.diag[i].is_one()).collect();
        let moduli: Vec<BigInt> = picks.iter().map(|&i| lat.diag[i].clone()).collect();
        let t = Presentation::cyclics(moduli);
        let incl = lat.snf.u_inv.select_cols(picks);
        let h = crate::hom::Homomorphism::new(t.clone(), self.clone(), incl)
            .expect("Smith basis columns generate the torsion subgroup");
        (t, h)
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<Element> {
        if coords.len() != self.gens() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for {} generators",
                coords.len(),
                self.gens()
            )));
        }
        Ok(Element {
            owner: self.clone(),
            coords,
        })
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut coords = vec![BigInt::zero(); self.gens()];
        coords[i] = BigInt::one();
        Element {
            owner: self.clone(),
            coords,
        }
    }

    /// Same presentation object (pointer equality), not isomorphism.
    pub fn same_as(&self, other: &Presentation) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.gens() == other.gens() && self.relations() == other.relations())
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation({} gens, {} relations", self.gens(), self.relations().cols())?;
        if let Some(cf) = self.inner.canonical.get() {
            write!(f, " ≅ {cf}")?;
        }
        write!(f, ")")
    }
}

/// An element of a presented group, compared modulo the relation lattice.
#[derive(Clone, Debug)]
pub struct Element {
    owner: Presentation,
    coords: Vec<BigInt>,
}

impl Element {
    pub fn owner(&self) -> &Presentation {
        &self.owner
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.owner.is_zero_vector(&self.coords)
    }

    pub fn add(&self, other: &Element) -> Element {
        assert!(self.owner.same_as(&other.owner), "elements of different groups");
        Element {
            owner: self.owner.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> Element {
        Element {
            owner: self.owner.clone(),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Element {
        Element {
            owner: self.owner.clone(),
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.owner.same_as(&other.owner) && self.add(&other.neg()).is_zero()
    }
}
