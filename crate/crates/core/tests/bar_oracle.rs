use abelim::bar::{bar_homology, BarComplex, FiniteGroupTable, DEFAULT_BUDGET};
use abelim::dsl::parse_group_expr;
use abelim::functor::homology;
use abelim::suite::abelian_groups_up_to;
use abelim::{CanonicalForm, Error};
use num_traits::ToPrimitive;

fn table(cf: &CanonicalForm) -> FiniteGroupTable {
    let moduli: Vec<u64> = cf.invariant_factors.iter().map(|d| d.to_u64().unwrap()).collect();
    FiniteGroupTable::cyclic_product(&moduli).unwrap()
}

#[test]
fn low_degrees_on_the_corpus() {
    for cf in abelian_groups_up_to(16) {
        let t = table(&cf);
        assert_eq!(bar_homology(&t, 0, DEFAULT_BUDGET).unwrap(), CanonicalForm::free(1), "{cf}");
        assert_eq!(bar_homology(&t, 1, DEFAULT_BUDGET).unwrap(), cf, "{cf}");
    }
}

#[test]
fn differentials_square_to_zero() {
    let t = table(parse_group_expr("Z/2 + Z/4").unwrap().canonical_form());
    let bar = BarComplex::new(&t);
    for k in 1..=3 {
        let (d_k, d_next) = (bar.differential(k), bar.differential(k + 1));
        for col in &d_next {
            let mut acc = std::collections::BTreeMap::new();
            for (i, c) in col {
                for (j, e) in &d_k[*i] {
                    *acc.entry(*j).or_insert_with(num_bigint::BigInt::default) += c * e;
                }
            }
            assert!(acc.values().all(|v| v == &num_bigint::BigInt::ZERO));
        }
    }
}

#[test]
fn cyclic_worked_values() {
    let z2 = FiniteGroupTable::cyclic_product(&[2]).unwrap();
    let expected = ["Z", "Z/2", "Z/1", "Z/2"];
    for (n, e) in expected.iter().enumerate() {
        let h = bar_homology(&z2, n as u32, DEFAULT_BUDGET).unwrap();
        assert_eq!(&h, parse_group_expr(e).unwrap().canonical_form(), "degree {n}");
    }
}

#[test]
fn agrees_with_kunneth_in_degree_four_on_klein_four() {
    let a = parse_group_expr("Z/2 + Z/2").unwrap();
    let bar = bar_homology(&table(a.canonical_form()), 4, DEFAULT_BUDGET).unwrap();
    assert_eq!(&bar, homology(&a, 4).degree(4).canonical_form());
}

#[test]
fn budget_stops_large_complexes() {
    let t = table(parse_group_expr("Z/16").unwrap().canonical_form());
    assert!(matches!(bar_homology(&t, 4, 1000), Err(Error::BudgetExceeded { .. })));
}
