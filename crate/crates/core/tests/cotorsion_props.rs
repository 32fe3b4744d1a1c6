use abelim::cotorsion::*;
use abelim::functor::FunctorTag;
use abelim::{CanonicalForm, Error};
use num_bigint::BigInt;
use proptest::prelude::*;

const TOWERS: [&str; 5] = ["S", "T", "U", THEOREM1_TOWER, "theorem1.A'"];

fn engine() -> Engine {
    let mut e = Engine::new();
    e.register_theorem1_symbolic();
    e.register_tower(
        "S",
        TowerFacts {
            surjective: true,
            eventually_constant: true,
            stages_bounded: Some(BigInt::from(4)),
            stage_torsion_bounded: true,
            ..TowerFacts::default()
        },
    )
    .unwrap();
    e.register_tower(
        "T",
        TowerFacts {
            surjective: true,
            stage_torsion_bounded: true,
            ..TowerFacts::default()
        },
    )
    .unwrap();
    e.declare_abstract("U").unwrap();
    e
}

fn sym_functor() -> impl Strategy<Value = SymFunctor> {
    prop_oneof![
        Just(SymFunctor::Tag(FunctorTag::TensorWith(CanonicalForm::from_factors(0, &[2])))),
        Just(SymFunctor::Tag(FunctorTag::TorWith(CanonicalForm::from_factors(0, &[3])))),
        (2usize..=3).prop_map(|n| SymFunctor::Tag(FunctorTag::Lambda(n))),
        (0usize..=3).prop_map(|n| SymFunctor::Tag(FunctorTag::Homology(n))),
        Just(SymFunctor::Tag(FunctorTag::L1Lambda2)),
        Just(SymFunctor::TensorIndex),
        Just(SymFunctor::TorIndex),
        Just(SymFunctor::TorSelf),
    ]
}

fn tower() -> impl Strategy<Value = TowerRef> {
    let named = prop::sample::select(TOWERS.to_vec()).prop_map(|s| TowerRef::Named(s.to_string()));
    named.prop_recursive(2, 4, 1, |inner| {
        prop_oneof![
            (sym_functor(), inner.clone()).prop_map(|(f, t)| TowerRef::Applied(f, Box::new(t))),
            (sym_functor(), inner).prop_map(|(f, t)| TowerRef::Phi(f, Box::new(t))),
        ]
    })
}

fn term() -> impl Strategy<Value = GroupTerm> {
    let fg = (0usize..=2, prop::collection::vec(2u64..=9, 0..=2))
        .prop_map(|(r, m)| GroupTerm::FG(CanonicalForm::from_factors(r, &m)));
    let leaf = prop_oneof![
        fg,
        Just(GroupTerm::IndexCyclic),
        Just(GroupTerm::Rationals),
        (1u64..=12).prop_map(|n| GroupTerm::BoundedTorsion(BigInt::from(n))),
        prop_oneof![Just(TorsionKind::Mixed), (2u64..=7).prop_map(TorsionKind::Prime)]
            .prop_map(GroupTerm::ReducedUnboundedTorsion),
        tower().prop_map(GroupTerm::Lim),
        tower().prop_map(GroupTerm::Lim1),
        tower().prop_map(GroupTerm::Stage),
        (sym_functor(), tower()).prop_map(|(f, t)| GroupTerm::KerComparison(f, t)),
        (sym_functor(), tower()).prop_map(|(f, t)| GroupTerm::CokerComparison(f, t)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        let index = prop_oneof![
            (1usize..=4).prop_map(IndexSet::Finite),
            Just(IndexSet::AllPrimes),
            Just(IndexSet::AllNaturals)
        ];
        prop_oneof![
            (inner.clone(), index).prop_map(|(b, index)| GroupTerm::SumFamily { body: Box::new(b), index }),
            inner.clone().prop_map(|x| GroupTerm::QuotientOf(Box::new(x))),
            inner.clone().prop_map(|x| GroupTerm::SummandOf(Box::new(x))),
            (inner.clone(), 1u64..=6).prop_map(|(x, n)| GroupTerm::RetractTimesN { ambient: Box::new(x), n }),
            (inner.clone(), inner).prop_map(|(s, q)| GroupTerm::Extension {
                sub: Box::new(s),
                quot: Box::new(q)
            }),
        ]
    })
}

fn subterms(t: &GroupTerm, out: &mut Vec<GroupTerm>) {
    out.push(t.clone());
    match t {
        GroupTerm::SumFamily { body, .. } => subterms(body, out),
        GroupTerm::QuotientOf(x) | GroupTerm::SummandOf(x) => subterms(x, out),
        GroupTerm::RetractTimesN { ambient, .. } => subterms(ambient, out),
        GroupTerm::Extension { sub, quot } => {
            subterms(sub, out);
            subterms(quot, out);
        }
        _ => {}
    }
}

fn with_disabled(mask: u32) -> Engine {
    let mut e = engine();
    for (k, r) in RuleId::ALL.iter().enumerate() {
        if mask & (1 << k) != 0 {
            e.disable(*r);
        }
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn traces_replay(t in term(), mask in any::<u32>()) {
        for e in [engine(), with_disabled(mask)] {
            let j = e.judge(&t).unwrap();
            prop_assert_eq!(j.verdict == Verdict::Unknown, j.trace.is_empty());
            prop_assert!(check_trace(&e, &t, &j).is_ok(), "{}: {:?}", t, check_trace(&e, &t, &j));
        }
    }

    #[test]
    fn more_rules_never_flip_a_verdict(t in term(), fewer in any::<u32>(), more in any::<u32>()) {
        // `more` disables a superset of what `fewer` disables.
        let strong = with_disabled(fewer).judge(&t).unwrap().verdict;
        let weak = with_disabled(fewer | more).judge(&t).unwrap().verdict;
        prop_assert!(weak == Verdict::Unknown || weak == strong, "{}: {:?} then {:?}", t, weak, strong);
    }

    #[test]
    fn bounded_and_unbounded_certificates_exclude(t in term()) {
        let e = engine();
        let mut all = Vec::new();
        subterms(&t, &mut all);
        for s in all {
            prop_assert_ne!(e.leaf_certificates(&s), (true, true), "{}", s);
        }
    }

    #[test]
    fn printing_round_trips(t in term()) {
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }
}

#[test]
fn theorem1_regressions() {
    let mut e = engine();
    let j = derive_theorem1(&e, THEOREM1_TOWER).unwrap();
    assert_eq!(j.verdict, Verdict::NotCotorsion);
    let names: Vec<_> = j.trace.iter().map(|s| s.rule.name()).collect();
    assert_eq!(names, ["R8", "RW1", "R7a", "R7"]);

    e.register_theorem1_truncated("P235", &[2, 3, 5]);
    let j = derive_theorem1(&e, "P235").unwrap();
    assert_eq!(j.verdict, Verdict::Cotorsion);
    assert_eq!(j.rules(), [RuleId::R2]);

    let mut no_r7 = engine();
    no_r7.disable(RuleId::R7);
    assert_eq!(derive_theorem1(&no_r7, THEOREM1_TOWER).unwrap().verdict, Verdict::Unknown);
}

#[test]
fn theorem3_regressions() {
    let e = engine();
    for part in [1, 2] {
        let j = derive_theorem3(&e, "T", part).unwrap();
        assert_eq!(j.verdict, Verdict::Cotorsion, "part {part}");
    }
    assert!(matches!(derive_theorem3(&e, "U", 1), Err(Error::HypothesisViolation(_))));
    assert!(matches!(derive_theorem3(&e, "nope", 1), Err(Error::UnresolvedTowerRef(_))));
    assert!(matches!(derive_theorem3(&e, "T", 3), Err(Error::Config(_))));
}

#[test]
fn finitely_generated_z_is_unknown() {
    let j = engine().judge(&parse_term("Z").unwrap()).unwrap();
    assert_eq!(j.verdict, Verdict::Unknown);
    assert!(j.trace.is_empty());
}

#[test]
fn kernel_rewrites() {
    let t = parse_term("ker_cmp(tensor(Z/2), theorem1.A')").unwrap();
    assert_eq!(kernel_to_lim1_rewrite(&t).unwrap().to_string(), "lim1(apply(tor(Z/2), theorem1.A'))");
    let t = parse_term("ker_cmp(tensor(Z/3), A)").unwrap();
    assert_eq!(kernel_to_lim1_rewrite(&t).unwrap().to_string(), "lim1(apply(tor(Z/3), A))");
    let t = parse_term("ker_cmp(tensor(Z/p), A)").unwrap();
    assert_eq!(kernel_to_lim1_rewrite(&t).unwrap().to_string(), "lim1(apply(tor(Z/p), A))");
    for bad in ["lim1(A)", "ker_cmp(tensor(Z/4), A)", "ker_cmp(lambda(2), A)"] {
        let t = parse_term(bad).unwrap();
        assert!(matches!(kernel_to_lim1_rewrite(&t), Err(Error::ShapeMismatch(_))), "{bad}");
    }
}

#[test]
fn unresolved_references_are_errors() {
    let e = engine();
    let t = parse_term("lim1(missing)").unwrap();
    assert!(matches!(e.judge(&t), Err(Error::UnresolvedTowerRef(_))));
}
