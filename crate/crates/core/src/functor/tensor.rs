use crate::group::Presentation;
use crate::hom::Homomorphism;
use crate::matrix::IntMatrix;

/// `A ⊗ B` on generators `aᵢ ⊗ bⱼ`, indexed `i·l_B + j`.
pub fn tensor(a: &Presentation, b: &Presentation) -> Presentation {
    let rel = a
        .relations()
        .kron(&IntMatrix::identity(b.gens()))
        .hstack(&IntMatrix::identity(a.gens()).kron(b.relations()));
    Presentation::new(a.gens() * b.gens(), rel).expect("kronecker shapes agree")
}

/// `f ⊗ g : A ⊗ B → A′ ⊗ B′`.
pub fn tensor_induced(f: &Homomorphism, g: &Homomorphism) -> Homomorphism {
    let source = tensor(f.source(), g.source());
    let target = tensor(f.target(), g.target());
    tensor_induced_between(f, g, &source, &target)
}

/// `f ⊗ g` between already constructed tensor products.
pub fn tensor_induced_between(
    f: &Homomorphism,
    g: &Homomorphism,
    source: &Presentation,
    target: &Presentation,
) -> Homomorphism {
    Homomorphism::unchecked(source.clone(), target.clone(), f.matrix().kron(g.matrix()))
}
