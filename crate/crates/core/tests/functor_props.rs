//! Functor values against closed formulas on cyclic decompositions, and the
//! naturality laws of the induced maps.

mod common;

use abelim::dsl::parse_group_expr;
use abelim::functor::{
    breen_check, homology, l1lambda2, lambda, lambda_induced, odd_summand_check, tensor, tensor_induced, tor,
    tor_induced,
};
use abelim::hom::direct_sum;
use abelim::{CanonicalForm, Homomorphism, Presentation};
use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

/// A cyclic decomposition, `0` standing for `ℤ`; `1` entries are dropped.
type Cyclics = Vec<u64>;

fn form(c: &[u64]) -> CanonicalForm {
    let free = c.iter().filter(|&&d| d == 0).count();
    CanonicalForm::from_cyclics(free, c.iter().filter(|&&d| d > 1).map(|&d| BigInt::from(d)))
}

fn tensor_oracle(a: &[u64], b: &[u64]) -> Cyclics {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x.gcd(&y))).collect()
}

fn tor_oracle(a: &[u64], b: &[u64]) -> Cyclics {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| (x, y)))
        .filter(|&(x, y)| x > 0 && y > 0)
        .map(|(x, y)| x.gcd(&y))
        .collect()
}

/// `Λⁿ(⊕ ℤ/aᵢ) = ⊕_{i₁<…<iₙ} ℤ/gcd(aᵢ₁, …, aᵢₙ)`.
fn lambda_oracle(n: usize, a: &[u64]) -> Cyclics {
    fn go(n: usize, a: &[u64], acc: u64, out: &mut Cyclics) {
        if n == 0 {
            out.push(acc);
            return;
        }
        for (i, &x) in a.iter().enumerate() {
            go(n - 1, &a[i + 1..], acc.gcd(&x), out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![0];
    }
    go(n, a, 0, &mut out);
    out
}

fn l1lambda2_oracle(a: &[u64]) -> Cyclics {
    let mut out: Cyclics = a.iter().copied().filter(|&x| x > 0).collect();
    for (i, &x) in a.iter().enumerate() {
        out.extend(tor_oracle(&[x], &a[i + 1..]));
    }
    out
}

/// `H₀..=Hₙ` by iterated Künneth from `H_*(ℤ) = ℤ, ℤ` and
/// `H_*(ℤ/m) = ℤ, ℤ/m, 0, ℤ/m, 0, …`.
fn homology_oracle(a: &[u64], n: usize) -> Vec<Cyclics> {
    let mut h: Vec<Cyclics> = (0..=n).map(|k| if k == 0 { vec![0] } else { vec![] }).collect();
    for &m in a {
        let c: Vec<Cyclics> = (0..=n)
            .map(|k| match (m, k) {
                (_, 0) => vec![0],
                (0, 1) => vec![0],
                (0, _) => vec![],
                (m, k) if k % 2 == 1 => vec![m],
                _ => vec![],
            })
            .collect();
        h = (0..=n)
            .map(|k| {
                let mut out = Vec::new();
                for i in 0..=k {
                    out.extend(tensor_oracle(&h[i], &c[k - i]));
                }
                for i in 0..k {
                    out.extend(tor_oracle(&h[i], &c[k - 1 - i]));
                }
                out
            })
            .collect();
    }
    h
}

fn cf(p: &Presentation) -> CanonicalForm {
    p.canonical_form().clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gcd_laws(m in 1u64..=60, n in 1u64..=60) {
        let (a, b) = (cyclics(&[m]), cyclics(&[n]));
        let g = form(&[m.gcd(&n)]);
        prop_assert_eq!(cf(&tensor(&a, &b)), g.clone());
        prop_assert_eq!(cf(&tor(&a, &b)), g.clone());
    }

    #[test]
    fn tensor_and_tor_match_formulas(a in moduli(3), b in moduli(3)) {
        let (pa, pb) = (cyclics(&a), cyclics(&b));
        prop_assert_eq!(cf(&tensor(&pa, &pb)), form(&tensor_oracle(&a, &b)));
        prop_assert_eq!(cf(&tor(&pa, &pb)), form(&tor_oracle(&a, &b)));
    }

    #[test]
    fn tor_is_symmetric(a in moduli(3), b in moduli(3)) {
        let (pa, pb) = (cyclics(&a), cyclics(&b));
        prop_assert_eq!(cf(&tor(&pa, &pb)), cf(&tor(&pb, &pa)));
    }

    #[test]
    fn exterior_powers_match_formula(a in moduli(4), n in 0usize..=4) {
        prop_assert_eq!(cf(&lambda(n, &cyclics(&a))), form(&lambda_oracle(n, &a)));
    }

    #[test]
    fn homology_matches_kunneth_formula(a in moduli(3)) {
        let h = homology(&cyclics(&a), 3);
        for (k, expected) in homology_oracle(&a, 3).iter().enumerate() {
            prop_assert_eq!(cf(&h.degree(k)), form(expected), "degree {}", k);
        }
    }

    #[test]
    fn h2_is_lambda2(a in moduli(4)) {
        let p = cyclics(&a);
        prop_assert_eq!(cf(&homology(&p, 2).degree(2)), cf(&lambda(2, &p)));
    }

    #[test]
    fn l1lambda2_matches_formula(a in moduli(4)) {
        prop_assert_eq!(cf(&l1lambda2(&cyclics(&a))), form(&l1lambda2_oracle(&a)));
    }

    #[test]
    fn kunneth_consistency(a in moduli(2), b in moduli(2)) {
        let (pa, pb) = (cyclics(&a), cyclics(&b));
        let sum = direct_sum(&pa, &pb).sum;
        let (ha, hb, hs) = (homology(&pa, 3), homology(&pb, 3), homology(&sum, 3));
        for n in 0..=3 {
            let mut expected = CanonicalForm::trivial();
            for i in 0..=n {
                expected = expected.direct_sum(&cf(&tensor(&ha.degree(i), &hb.degree(n - i))));
            }
            for i in 0..n {
                expected = expected.direct_sum(&cf(&tor(&ha.degree(i), &hb.degree(n - 1 - i))));
            }
            prop_assert_eq!(cf(&hs.degree(n)), expected, "degree {}", n);
        }
    }

    #[test]
    fn tor_is_resolution_independent(a in moduli(3), b in moduli(2), ops in ops(), extra in coeffs()) {
        let other = scrambled(&a, &unimodular(a.len(), &ops), &extra);
        let pb = cyclics(&b);
        prop_assert_eq!(cf(&tor(&cyclics(&a), &pb)), cf(&tor(&other, &pb)));
    }

    #[test]
    fn breen_orders_hold(a in moduli(3)) {
        let r = breen_check(&cyclics(&a)).unwrap();
        prop_assert!(r.exact);
    }

    #[test]
    fn odd_part_of_l1lambda2_is_a_summand_of_tor(a in finite_moduli(3)) {
        prop_assert!(odd_summand_check(&cyclics(&a)).holds);
    }

    #[test]
    fn induced_maps_preserve_identities(a in moduli(3), b in moduli(2), n in 0usize..=3) {
        let (pa, pb) = (cyclics(&a), cyclics(&b));
        let (ia, ib) = (Homomorphism::identity(&pa), Homomorphism::identity(&pb));
        prop_assert!(tensor_induced(&ia, &ib).equals(&Homomorphism::identity(&tensor(&pa, &pb))));
        prop_assert!(lambda_induced(n, &ia).equals(&Homomorphism::identity(&lambda(n, &pa))));
        prop_assert!(tor_induced(&ia, &pb).equals(&Homomorphism::identity(&tor(&pa, &pb))));
    }

    #[test]
    fn induced_maps_preserve_composition(
        a in moduli(2), b in moduli(2), c in moduli(2), d in moduli(2),
        c1 in coeffs(), c2 in coeffs(), n in 1usize..=3,
    ) {
        let f = hom_from(&a, &b, &c1);
        let g = hom_from(&b, &c, &c2);
        let gf = g.compose(&f).unwrap();
        let id = Homomorphism::identity(&cyclics(&d));
        let t = tensor_induced(&g, &id).compose(&tensor_induced(&f, &id)).unwrap();
        prop_assert!(tensor_induced(&gf, &id).equals(&t));
        let l = lambda_induced(n, &g).compose(&lambda_induced(n, &f)).unwrap();
        prop_assert!(lambda_induced(n, &gf).equals(&l));
        let pd = cyclics(&d);
        let r = tor_induced(&g, &pd).compose(&tor_induced(&f, &pd)).unwrap();
        prop_assert!(tor_induced(&gf, &pd).equals(&r));
    }

    #[test]
    fn lambda_is_right_exact(tgt in moduli(3), extra in moduli(2), c in coeffs(), n in 2usize..=3) {
        let f = surjection(&tgt, &extra, &c);
        prop_assert!(f.is_surjective());
        prop_assert!(lambda_induced(n, &f).is_surjective());
    }
}

fn expr(s: &str) -> Presentation {
    parse_group_expr(s).unwrap()
}

fn assert_form(p: &Presentation, s: &str) {
    assert_eq!(p.canonical_form(), expr(s).canonical_form(), "expected {s}");
}

#[test]
fn worked_values() {
    assert_form(&tensor(&expr("Z/2"), &expr("Z/3")), "Z/1");
    assert_form(&tensor(&expr("Z/4"), &expr("Z/6")), "Z/2");
    assert_form(&tensor(&expr("Z^2"), &expr("Z/3")), "Z/3^2");
    assert_form(&tor(&expr("Z"), &expr("Z/6 + Z^2")), "Z/1");
    assert_form(&tor(&expr("Z/4"), &expr("Z/6")), "Z/2");
    assert_form(&lambda(2, &expr("Z^2")), "Z");
    assert_form(&lambda(2, &expr("Z/12")), "Z/1");
    assert_form(&lambda(2, &expr("Z/2 + Z/4")), "Z/2");
    assert_form(&homology(&expr("Z^3"), 2).degree(2), "Z^3");
    assert_form(&homology(&expr("Z/2 + Z/2"), 2).degree(2), "Z/2");
    assert_form(&homology(&expr("Z/7"), 2).degree(2), "Z/1");
    assert_form(&homology(&expr("Z^2"), 2).degree(2), "Z");
    assert_form(&homology(&expr("Z/2 + Z/2"), 3).degree(3), "Z/2^3");
    assert_form(&l1lambda2(&expr("Z^3")), "Z/1");
    assert_form(&l1lambda2(&expr("Z/5")), "Z/5");
    assert_form(&l1lambda2(&expr("Z/2 + Z/2")), "Z/2^3");
    let trivial = homology(&Presentation::trivial(), 3);
    assert_form(&trivial.degree(0), "Z");
    for k in 1..=3 {
        assert_form(&trivial.degree(k), "Z/1");
    }
}

#[test]
fn breen_worked_values() {
    let r = breen_check(&expr("Z/2 + Z/2")).unwrap();
    assert_eq!(r.h3.order(), Some(BigInt::from(8)));
    assert!(r.lambda3.is_trivial());
    assert_eq!(r.l1lambda2.order(), Some(BigInt::from(8)));
    let r = breen_check(&expr("Z^3")).unwrap();
    assert_eq!(r.h3, CanonicalForm::free(1));
    assert_eq!(r.lambda3, CanonicalForm::free(1));
    assert!(r.l1lambda2.is_trivial());
    let r = breen_check(&expr("Z/6")).unwrap();
    assert_eq!(r.h3.order(), Some(BigInt::from(6)));
}

#[test]
fn odd_summand_worked_values() {
    let r = odd_summand_check(&expr("Z/9"));
    assert!(r.holds);
    assert_eq!(r.l1lambda2_odd, *expr("Z/9").canonical_form());
    let r = odd_summand_check(&expr("Z/3 + Z/9"));
    assert!(r.holds);
    assert_eq!(r.l1lambda2_odd, *expr("Z/3 + Z/3 + Z/9").canonical_form());
    assert_eq!(r.tor_odd, *expr("Z/3 + Z/3 + Z/3 + Z/9").canonical_form());
    assert!(odd_summand_check(&expr("Z^2")).holds);
}
