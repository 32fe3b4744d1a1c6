mod common;

use abelim::dsl::parse_group_expr;
use abelim::functor::{lambda, tensor, FunctorTag};
use abelim::tower::random::{random_group, random_torsion_free_group, random_tower, TowerFamily};
use abelim::tower::*;
use abelim::{CanonicalForm, Error, Homomorphism, IntMatrix, Presentation};
use common::cyclics;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn family() -> impl Strategy<Value = TowerFamily> {
    prop_oneof![
        Just(TowerFamily::Blockwise),
        Just(TowerFamily::Quotient),
        Just(TowerFamily::TorsionFree)
    ]
}

fn functor() -> impl Strategy<Value = FunctorTag> {
    let small = || prop::collection::vec(prop_oneof![Just(0u64), 2u64..=8], 1..=2);
    prop_oneof![
        small().prop_map(|m| FunctorTag::TensorWith(cyclics(&m).canonical_form().clone())),
        small().prop_map(|m| FunctorTag::TorWith(cyclics(&m).canonical_form().clone())),
        (2usize..=3).prop_map(FunctorTag::Lambda),
        Just(FunctorTag::Homology(2)),
        Just(FunctorTag::L1Lambda2),
    ]
}

fn window_for(seed: u64, family: TowerFamily, n: usize) -> TowerWindow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = random_tower(&mut rng, family, n - DEFAULT_S_MIN);
    TowerWindow::new(&spec, n).unwrap()
}

fn expr(s: &str) -> Presentation {
    parse_group_expr(s).unwrap()
}

fn hom(src: &Presentation, tgt: &Presentation, rows: &[Vec<i64>]) -> Homomorphism {
    Homomorphism::new(src.clone(), tgt.clone(), IntMatrix::from_rows(rows).unwrap()).unwrap()
}

fn constant(a: &Presentation) -> TowerSpec {
    let id = Homomorphism::identity(a);
    let recipe = IteratedRecipe::new(id.clone()).unwrap().with_limit(id);
    TowerSpec::new(recipe).surjective(true).eventually_constant_at(Some(1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ledger_is_exact(seed: u64, family in family(), n in 4usize..=6, f in functor()) {
        let w = window_for(seed, family, n);
        let r = match comparison_map(&w, &f) {
            Err(Error::UnsupportedInducedMap(_)) => {
                // Only the chain model of L₁Λ² needs blockwise maps.
                prop_assert!(f == FunctorTag::L1Lambda2 && family == TowerFamily::Quotient);
                return Ok(());
            }
            r => r.unwrap(),
        };
        prop_assert!(r.ledger_exact());
        prop_assert!(r.kernel_matches_phi_limit);
        prop_assert_eq!(r.stages.len(), n);
    }

    #[test]
    fn right_exact_functors_keep_surjections(seed: u64, family in family(), n in 4usize..=6, f in functor()) {
        prop_assume!(f.is_right_exact());
        let w = window_for(seed, family, n);
        // The surjectivity claim survives application and is re-verified.
        let applied = apply_functor(&w.spec, &f).unwrap();
        prop_assert!(applied.surjective_claimed);
        prop_assert!(TowerWindow::new(&applied, n).is_ok());
        let r = comparison_map(&w, &f).unwrap();
        for s in &r.stages {
            prop_assert!(s.coker.is_trivial(), "stage {}", s.stage);
        }
        prop_assert!(r.coker_of_eta_window.unwrap().is_trivial());
    }

    #[test]
    fn theorem2_holds_on_torsion_free_towers(seed: u64, n in 4usize..=6, k in 2usize..=3) {
        let w = window_for(seed, TowerFamily::TorsionFree, n);
        prop_assert!(theorem2_check(&w, k).unwrap().injectivity.pass);
    }

    #[test]
    fn injectivity_statements(seed: u64, n in 4usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_group(&mut rng);
        let w = window_for(seed ^ 1, TowerFamily::Quotient, n);
        prop_assert!(statement2_check(&b, &w).unwrap().pass);
        let b = random_torsion_free_group(&mut rng);
        let w = window_for(seed ^ 2, TowerFamily::TorsionFree, n);
        prop_assert!(statement4_check(&b, &w).unwrap().pass);
    }

    #[test]
    fn theorem1_tor_identities_hold(mask in 1u8..16, m in 2usize..=7) {
        let primes: Vec<u64> = [2, 3, 5, 7].iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &p)| p).collect();
        let recipe = Theorem1Recipe::new(primes, m).unwrap();
        let ids = theorem1_tor_identities(&recipe, m - 1);
        prop_assert!(ids.iter().all(|t| t.pass));
    }

    #[test]
    fn reports_are_deterministic(seed: u64, family in family(), f in functor()) {
        // Errors count too: unsupported induced maps must fail the same way.
        let run = || comparison_map(&window_for(seed, family, 5), &f).map(|r| serde_json::to_string(&r).unwrap());
        prop_assert_eq!(run(), run());
    }
}

#[test]
fn apply_functor_examples() {
    let z2 = expr("Z^2");
    let t = TowerWindow::new(&apply_functor(&constant(&z2), &FunctorTag::Lambda(2)).unwrap(), 4).unwrap();
    assert!(t.tower.stages.iter().all(|a| a.canonical_form() == &CanonicalForm::free(1)));
    assert!(t.tower.maps.iter().all(Homomorphism::is_isomorphism));

    let z = expr("Z");
    let times_two = TowerSpec::new(IteratedRecipe::new(Homomorphism::multiplication(&z, 2)).unwrap());
    let mod2 = FunctorTag::TensorWith(CanonicalForm::from_factors(0, &[2]));
    let t = TowerWindow::new(&apply_functor(&times_two, &mod2).unwrap(), 4).unwrap();
    assert!(t.tower.stages.iter().all(|a| a.canonical_form() == &CanonicalForm::from_factors(0, &[2])));
    assert!(t.tower.maps.iter().all(Homomorphism::is_zero));

    let t = TowerWindow::new(&apply_functor(&times_two, &FunctorTag::Homology(0)).unwrap(), 4).unwrap();
    assert!(t.tower.maps.iter().all(|f| f.equals(&Homomorphism::identity(f.source()))));
}

#[test]
fn times_two_tower_is_undetermined() {
    let z = expr("Z");
    let spec = TowerSpec::new(IteratedRecipe::new(Homomorphism::multiplication(&z, 2)).unwrap());
    let r = check_tower(&spec, 10).unwrap();
    assert_eq!(r.ml_verdict, MlVerdict::NotStabilizedWithinWindow);
    assert_eq!(r.lim1, Lim1Certificate::Undetermined);
    assert_eq!(r.image_chains[0].images[3], CanonicalForm::free(1));
}

#[test]
fn false_constancy_claim_is_rejected() {
    let z = expr("Z");
    let spec = TowerSpec::new(IteratedRecipe::new(Homomorphism::multiplication(&z, 2)).unwrap())
        .eventually_constant_at(Some(2));
    assert!(matches!(TowerWindow::new(&spec, 4), Err(Error::ClaimViolation(_))));
}

#[test]
fn constant_tower_cokernels_vanish() {
    let w = TowerWindow::new(&constant(&expr("Z/2 + Z/4")), 5).unwrap();
    let r = theorem3_check(&w).unwrap();
    assert!(r.pass());
    assert!(r.part1.rules().contains(&abelim::cotorsion::RuleId::R1));

    let w = TowerWindow::new(&constant(&expr("Z^2")), 5).unwrap();
    let r = theorem3_check(&w).unwrap();
    assert!(r.cokernels_trivial && r.pass());
}

#[test]
fn injectivity_examples() {
    let w = TowerWindow::new(&constant(&expr("Z/6")), 4).unwrap();
    assert!(statement2_check(&expr("Z"), &w).unwrap().kernel.is_trivial());

    let w = TowerWindow::new(&constant(&expr("Z^3")), 4).unwrap();
    let r = theorem2_check(&w, 2).unwrap();
    assert!(r.injectivity.pass);
    assert!(r.coker_of_eta_window.unwrap().is_trivial());

    // ℤ² ← ℤ² by diag(1, 2), limit ℤ on the first coordinate.
    let z2 = expr("Z^2");
    let f = hom(&z2, &z2, &[vec![1, 0], vec![0, 2]]);
    let proj = hom(&expr("Z"), &z2, &[vec![1], vec![0]]);
    let spec = TowerSpec::new(IteratedRecipe::new(f).unwrap().with_limit(proj));
    let w = TowerWindow::new(&spec, 5).unwrap();
    assert!(statement4_check(&z2, &w).unwrap().pass);
    assert!(matches!(statement2_check(&expr("Z/2"), &w), Err(Error::HypothesisViolation(_))));
    assert!(matches!(
        statement4_check(&expr("Z/2"), &w),
        Err(Error::HypothesisViolation(_))
    ));
}

#[test]
fn theorem1_examples() {
    let r = Theorem1Recipe::new(vec![2], 4).unwrap();
    assert_eq!(r.a_prime_at(2, 2).canonical_form(), expr("Z^2 + Z/2^2").canonical_form());
    let ids = theorem1_tor_identities(&r, 3);
    let at2 = ids.iter().find(|t| t.stage == 2).unwrap();
    assert_eq!(at2.computed, *expr("Z/2^2").canonical_form());
    // Boundary of the truncation: a single torsion generator.
    assert_eq!(r.a_prime(3).canonical_form(), expr("Z^3 + Z/2").canonical_form());
    // A′ ⊗ B at i = M − 1.
    let block = tensor(&r.a_prime(3), &r.b());
    assert_eq!(block.canonical_form(), expr("Z/2^4").canonical_form());

    let r = Theorem1Recipe::new(vec![2, 3], 5).unwrap();
    assert!(kunneth_split_check(&r, 4).unwrap().pass);
    assert!(lambda(2, &r.b()).is_trivial());

    let w = theorem1_construction(&[2, 3, 5], 8, 6).unwrap();
    let report = check_materialized(&w.tower, w.constant_from(DEFAULT_S_MIN), DEFAULT_S_MIN);
    assert!(report.surjective.iter().all(|&s| s));
    assert!(matches!(report.lim1, Lim1Certificate::Zero(_)));
    assert!(matches!(theorem1_construction(&[2], 4, 4), Err(Error::Config(_))));
}

#[test]
fn product_retract_examples() {
    let ys: Vec<Presentation> = (1..=4).map(|i| cyclics(&[1 << i])).collect();
    assert!(product_retract_check(&ys, &FunctorTag::Homology(2)).unwrap().pass);
    let zs = vec![expr("Z"); 4];
    let r = product_retract_check(&zs, &FunctorTag::Lambda(3)).unwrap();
    assert!(r.pass && r.surjective.len() == 4);
}
