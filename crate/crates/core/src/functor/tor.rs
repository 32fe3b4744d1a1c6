//! `Tor(A, B)` from the length-one resolution `0 → ℤ^k → ℤ^l → A → 0`.

use crate::group::Presentation;
use crate::hom::{kernel, lattice_basis, solve, Homomorphism};
use crate::matrix::IntMatrix;

/// `Tor(A, B)` with the data needed to compute induced maps.
#[derive(Clone, Debug)]
pub struct TorGroup {
    pub group: Presentation,
    /// Injective relation matrix of `A` (`l × k`).
    pub resolution: IntMatrix,
    /// `P₁ ⊗ B = B^k`.
    pub chains: Presentation,
    /// `Tor(A, B) ↪ P₁ ⊗ B`.
    pub inclusion: Homomorphism,
    b_gens: usize,
}

/// Relation matrix with linearly independent columns spanning the same
/// lattice, making `ℤ^k → ℤ^l` injective.
pub fn minimal_resolution(a: &Presentation) -> IntMatrix {
    lattice_basis(a.relations())
}

pub fn tor_group(a: &Presentation, b: &Presentation) -> TorGroup {
    let r = minimal_resolution(a);
    let k = r.cols();
    let lb = b.gens();
    let chains = Presentation::new(k * lb, IntMatrix::identity(k).kron(b.relations()))
        .expect("kronecker shapes agree");
    let cycles = Presentation::new(a.gens() * lb, IntMatrix::identity(a.gens()).kron(b.relations()))
        .expect("kronecker shapes agree");
    let boundary = Homomorphism::unchecked(chains.clone(), cycles, r.kron(&IntMatrix::identity(lb)));
    let (group, inclusion) = kernel(&boundary);
    TorGroup {
        group,
        resolution: r,
        chains,
        inclusion,
        b_gens: lb,
    }
}

pub fn tor(a: &Presentation, b: &Presentation) -> Presentation {
    tor_group(a, b).group
}

/// Restricts a chain-level map `P₁ ⊗ B → P₁′ ⊗ B′` to the Tor subgroups.
fn restrict(chain_map: &IntMatrix, source: &TorGroup, target: &TorGroup) -> Homomorphism {
    let pushed = chain_map * source.inclusion.matrix();
    let cols: Vec<_> = pushed
        .columns()
        .map(|v| solve(&target.inclusion, &v).expect("chain map preserves cycles"))
        .collect();
    let m = IntMatrix::from_columns(target.group.gens(), &cols);
    Homomorphism::new(source.group.clone(), target.group.clone(), m)
        .expect("restriction of a chain map is well defined")
}

/// Lift of `f` to the resolutions: the unique `F₁` with `R′·F₁ = F·R`.
pub fn lift_to_resolution(f: &Homomorphism, r_src: &IntMatrix, r_tgt: &IntMatrix) -> IntMatrix {
    let free_src = Presentation::free(r_tgt.cols());
    let free_tgt = Presentation::free(r_tgt.rows());
    let h = Homomorphism::unchecked(free_src, free_tgt, r_tgt.clone());
    let pushed = f.matrix() * r_src;
    let cols: Vec<_> = pushed
        .columns()
        .map(|v| solve(&h, &v).expect("well-defined maps carry relations to relations"))
        .collect();
    IntMatrix::from_columns(r_tgt.cols(), &cols)
}

/// `Tor(f, B) : Tor(A, B) → Tor(A′, B)`.
pub fn tor_induced(f: &Homomorphism, b: &Presentation) -> Homomorphism {
    let s = tor_group(f.source(), b);
    let t = tor_group(f.target(), b);
    tor_induced_between(f, &s, &t)
}

pub fn tor_induced_between(f: &Homomorphism, source: &TorGroup, target: &TorGroup) -> Homomorphism {
    let f1 = lift_to_resolution(f, &source.resolution, &target.resolution);
    restrict(&f1.kron(&IntMatrix::identity(source.b_gens)), source, target)
}

/// `Tor(A, g) : Tor(A, B) → Tor(A, B′)`.
pub fn tor_induced_right(a: &Presentation, g: &Homomorphism) -> Homomorphism {
    let s = tor_group(a, g.source());
    let t = tor_group(a, g.target());
    tor_induced_right_between(g, &s, &t)
}

pub fn tor_induced_right_between(g: &Homomorphism, source: &TorGroup, target: &TorGroup) -> Homomorphism {
    let k = source.resolution.cols();
    restrict(&IntMatrix::identity(k).kron(g.matrix()), source, target)
}
