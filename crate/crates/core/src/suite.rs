//! The acceptance suites, one function per criterion.
//!
//! Randomized criteria draw from a ChaCha stream seeded by
//! `config.seed + id`, so every criterion is reproducible in isolation.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bar::{bar_homology, FiniteGroupTable, DEFAULT_BUDGET};
use crate::cotorsion::{
    check_trace, derive_theorem1, derive_theorem3, Engine, GroupTerm, Judgment, RuleId, SymFunctor, TowerFacts,
    TowerRef, Verdict, THEOREM1_TOWER,
};
use crate::error::{Error, Result};
use crate::functor::{breen_check, homology, l1lambda2, lambda, FunctorTag};
use crate::group::{CanonicalForm, Presentation};
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;
use crate::tower::{
    check_materialized, comparison_map, kunneth_split_check, product_retract_check, statement2_check,
    statement4_check, theorem1_construction, theorem1_tor_identities, theorem2_check, theorem3_check,
    Lim1Certificate, Theorem1Recipe, TowerWindow, DEFAULT_S_MIN,
};
use crate::tower::random::{random_group, random_torsion_free_group, random_tower, TowerFamily};

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Ids and names of the criteria, in report order.
pub const CRITERIA: [(u8, &str); 9] = [
    (1, "h2-lambda2-bar"),
    (2, "h3-kunneth-bar"),
    (3, "breen-orders"),
    (4, "theorem1-finitary"),
    (5, "comparison-suites"),
    (6, "statement2-statement4"),
    (7, "cotorsion-regressions"),
    (8, "snf-properties"),
    (9, "product-retract"),
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Generator cap for the bar oracle.
    pub budget: u128,
    /// Window size for the random tower suites.
    pub window: usize,
    pub primes: Vec<u64>,
    pub truncation: usize,
    /// Include wall-clock times in reports.
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            budget: DEFAULT_BUDGET,
            window: 6,
            primes: vec![2, 3, 5],
            truncation: 8,
            timing: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    /// Number of instances checked.
    pub checked: usize,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionOutcome {
    /// One line: `PASS 1 h2-lambda2-bar (checked 15)`.
    pub fn line(&self) -> String {
        let mut s = format!(
            "{} {} {} (checked {})",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checked
        );
        if let Some(f) = self.failures.first() {
            s.push_str(&format!(": {f}"));
            if self.failures.len() > 1 {
                s.push_str(&format!(" (+{} more)", self.failures.len() - 1));
            }
        }
        s
    }
}

/// Failures collected while checking a list of instances.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn record(&mut self, label: impl std::fmt::Display, outcome: Result<Vec<String>>) {
        self.checked += 1;
        match outcome {
            Ok(problems) => self.failures.extend(problems.into_iter().map(|p| format!("{label}: {p}"))),
            Err(e) => self.failures.push(format!("{label}: {e}")),
        }
    }

    fn expect(&mut self, label: impl std::fmt::Display, ok: bool, what: &str) {
        self.record(label, Ok(if ok { vec![] } else { vec![what.to_string()] }));
    }
}

/// Every abelian group of order at most `n`, one per isomorphism type, in
/// order of increasing order.
pub fn abelian_groups_up_to(n: u64) -> Vec<CanonicalForm> {
    let mut out = Vec::new();
    for order in 1..=n {
        let mut types: Vec<Vec<BigInt>> = vec![Vec::new()];
        for (p, e) in factorize(order) {
            let mut next = Vec::new();
            for part in partitions(e, e) {
                for t in &types {
                    let mut t = t.clone();
                    t.extend(part.iter().map(|&k| BigInt::from(p).pow(k)));
                    next.push(t);
                }
            }
            types = next;
        }
        let mut forms: Vec<CanonicalForm> = types.into_iter().map(|t| CanonicalForm::from_cyclics(0, t)).collect();
        forms.sort_by_key(|f| f.invariant_factors.clone());
        out.extend(forms);
    }
    out
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Partitions of `n` into parts of size at most `max`, parts decreasing.
fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (1..=max.min(n))
        .rev()
        .flat_map(|k| {
            partitions(n - k, k).into_iter().map(move |mut rest| {
                rest.insert(0, k);
                rest
            })
        })
        .collect()
}

fn table(a: &CanonicalForm) -> Result<FiniteGroupTable> {
    let moduli: Vec<u64> = a
        .invariant_factors
        .iter()
        .map(|d| d.to_u64().ok_or_else(|| Error::Config(format!("factor {d} too large"))))
        .collect::<Result<_>>()?;
    FiniteGroupTable::cyclic_product(&moduli)
}

fn rng_for(config: &SuiteConfig, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(id as u64))
}

fn mismatch(what: &str, a: &CanonicalForm, b: &CanonicalForm) -> String {
    format!("{what}: {} vs {}", a.to_expr(), b.to_expr())
}

/// Runs the criteria in parallel and reports them in id order.
pub fn run_all(config: &SuiteConfig) -> Vec<CriterionOutcome> {
    CRITERIA
        .par_iter()
        .map(|&(id, _)| run_criterion(id, config).expect("known id"))
        .collect()
}

pub fn run_criterion(id: u8, config: &SuiteConfig) -> Result<CriterionOutcome> {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .ok_or_else(|| Error::Config(format!("no criterion {id}; expected 1..=9")))?;
    let start = Instant::now();
    let tally = match id {
        1 => h2_lambda2_bar(config),
        2 => h3_kunneth_bar(config),
        3 => breen_orders(),
        4 => theorem1_finitary(config),
        5 => comparison_suites(config),
        6 => statement2_statement4(config),
        7 => cotorsion_regressions(config),
        8 => snf_properties(config),
        _ => product_retract(),
    };
    let elapsed = start.elapsed();
    Ok(CriterionOutcome {
        id,
        name,
        pass: tally.failures.is_empty() && tally.checked > 0,
        checked: tally.checked,
        failures: tally.failures,
        elapsed_ms: config.timing.then(|| elapsed.as_millis()),
        elapsed,
    })
}

fn over_groups(order: u64, check: impl Fn(&CanonicalForm) -> Result<Vec<String>> + Sync) -> Tally {
    let results: Vec<_> = abelian_groups_up_to(order)
        .par_iter()
        .map(|a| (a.to_expr(), check(a)))
        .collect();
    let mut tally = Tally::default();
    for (label, r) in results {
        tally.record(label, r);
    }
    tally
}

/// `H₂(A) = Λ²(A) = H₂` of the bar complex for `|A| ≤ 16`.
fn h2_lambda2_bar(config: &SuiteConfig) -> Tally {
    over_groups(16, |cf| {
        let a = Presentation::from_canonical(cf);
        let h2 = homology(&a, 2).degree(2).canonical_form().clone();
        let l2 = lambda(2, &a).canonical_form().clone();
        let bar = bar_homology(&table(cf)?, 2, config.budget)?;
        let mut problems = Vec::new();
        if h2 != l2 {
            problems.push(mismatch("H2 vs Λ2", &h2, &l2));
        }
        if h2 != bar {
            problems.push(mismatch("H2 vs bar", &h2, &bar));
        }
        Ok(problems)
    })
}

/// `H₃(A)` against the bar complex for `|A| ≤ 9`.
fn h3_kunneth_bar(config: &SuiteConfig) -> Tally {
    over_groups(9, |cf| {
        let a = Presentation::from_canonical(cf);
        let h3 = homology(&a, 3).degree(3).canonical_form().clone();
        let bar = bar_homology(&table(cf)?, 3, config.budget)?;
        Ok(if h3 == bar { vec![] } else { vec![mismatch("H3 vs bar", &h3, &bar)] })
    })
}

/// `|H₃| = |Λ³|·|L₁Λ²|` and chain-level exactness for `|A| ≤ 9`.
fn breen_orders() -> Tally {
    over_groups(9, |cf| {
        let a = Presentation::from_canonical(cf);
        let order = |p: &Presentation| p.canonical_form().order().unwrap_or_else(BigInt::zero);
        let h3 = order(&homology(&a, 3).degree(3));
        let product = order(&lambda(3, &a)) * order(&l1lambda2(&a));
        let mut problems = Vec::new();
        if h3 != product {
            problems.push(format!("|H3| = {h3} but |Λ3|·|L1Λ2| = {product}"));
        }
        if !breen_check(&a)?.exact {
            problems.push("Λ3 → H3 → L1Λ2 not exact on chains".into());
        }
        Ok(problems)
    })
}

fn theorem1_finitary(config: &SuiteConfig) -> Tally {
    let (primes, m, n) = (config.primes.clone(), config.truncation, config.window);
    let mut tally = Tally::default();
    let recipe = match Theorem1Recipe::new(primes.clone(), m) {
        Ok(r) => r,
        Err(e) => {
            tally.record("recipe", Err(e));
            return tally;
        }
    };
    for t in theorem1_tor_identities(&recipe, n) {
        tally.expect(
            format!("Tor(A'_{}, Z/{})", t.stage, t.prime),
            t.pass,
            &mismatch("Tor", &t.computed, &t.expected),
        );
    }
    tally.record(
        "kunneth split",
        kunneth_split_check(&recipe, n).map(|r| {
            let mut p = Vec::new();
            p.extend(r.stages.iter().filter(|s| !s.forms_agree).map(|s| format!("stage {} forms differ", s.stage)));
            if !r.maps_blockwise {
                p.push("induced maps mix blocks".into());
            }
            if !r.middle_block_iso {
                p.push("Λ2(B) block is not an isomorphism".into());
            }
            p
        }),
    );
    tally.record(
        "tower",
        theorem1_construction(&primes, m, n).map(|w| {
            let r = check_materialized(&w.tower, w.constant_from(DEFAULT_S_MIN), DEFAULT_S_MIN);
            let mut p = Vec::new();
            if !r.surjective.iter().all(|&s| s) {
                p.push("a map is not surjective".into());
            }
            if !matches!(r.lim1, Lim1Certificate::Zero(_)) {
                p.push(format!("lim1 certificate {:?}", r.lim1));
            }
            p
        }),
    );
    tally
}

/// Functors whose ledger is checked on every random tower.
fn ledger_functors() -> Vec<FunctorTag> {
    vec![
        FunctorTag::Homology(2),
        FunctorTag::Lambda(2),
        FunctorTag::TensorWith(CanonicalForm::from_factors(0, &[2])),
        FunctorTag::TorWith(CanonicalForm::from_factors(0, &[4])),
    ]
}

fn comparison_suites(config: &SuiteConfig) -> Tally {
    let n = config.window;
    let k_max = n.saturating_sub(DEFAULT_S_MIN).max(1);
    let mut rng = rng_for(config, 5);
    let towers: Vec<_> = (0..25)
        .map(|t| {
            let family = if rng.gen_bool(0.5) {
                TowerFamily::Blockwise
            } else {
                TowerFamily::TorsionFree
            };
            (t, family, random_tower(&mut rng, family, k_max))
        })
        .collect();
    let results: Vec<_> = towers
        .par_iter()
        .map(|(t, family, spec)| {
            let outcome = TowerWindow::new(spec, n).and_then(|w| {
                let mut problems = Vec::new();
                for f in ledger_functors() {
                    if !comparison_map(&w, &f)?.ledger_exact() {
                        problems.push(format!("{f:?} ledger not exact"));
                    }
                }
                if *family == TowerFamily::TorsionFree {
                    for k in [2, 3] {
                        if !theorem2_check(&w, k)?.injectivity.pass {
                            problems.push(format!("H{k} comparison not injective"));
                        }
                    }
                }
                let r3 = theorem3_check(&w)?;
                if !r3.pass() {
                    problems.push(format!(
                        "theorem3: cokernels trivial {}, verdicts {:?}/{:?}",
                        r3.cokernels_trivial, r3.part1.verdict, r3.part2.verdict
                    ));
                }
                Ok(problems)
            });
            (format!("tower {t} ({family:?})"), outcome)
        })
        .collect();
    let mut tally = Tally::default();
    for (label, r) in results {
        tally.record(label, r);
    }
    tally
}

fn statement2_statement4(config: &SuiteConfig) -> Tally {
    let n = config.window;
    let k_max = n.saturating_sub(DEFAULT_S_MIN).max(1);
    let mut rng = rng_for(config, 6);
    let mut jobs = Vec::new();
    for t in 0..100 {
        let family = if t % 2 == 0 { TowerFamily::Blockwise } else { TowerFamily::Quotient };
        let spec = random_tower(&mut rng, family, k_max);
        jobs.push((2, t, random_group(&mut rng), spec));
    }
    for t in 0..100 {
        let spec = random_tower(&mut rng, TowerFamily::TorsionFree, k_max);
        jobs.push((4, t, random_torsion_free_group(&mut rng), spec));
    }
    let results: Vec<_> = jobs
        .par_iter()
        .map(|(statement, t, b, spec)| {
            let outcome = TowerWindow::new(spec, n).and_then(|w| {
                let v = if *statement == 2 {
                    statement2_check(b, &w)?
                } else {
                    statement4_check(b, &w)?
                };
                Ok(if v.pass {
                    vec![]
                } else {
                    vec![format!("kernel {}", v.kernel.to_expr())]
                })
            });
            (format!("statement {statement} instance {t} (B = {})", b.canonical_form().to_expr()), outcome)
        })
        .collect();
    let mut tally = Tally::default();
    for (label, r) in results {
        tally.record(label, r);
    }
    tally
}

fn expect_judgment(
    tally: &mut Tally,
    engine: &Engine,
    label: &str,
    root: GroupTerm,
    judgment: Result<Judgment>,
    verdict: Verdict,
    rules: Option<&[RuleId]>,
) {
    let outcome = judgment.map(|j| {
        let mut p = Vec::new();
        if j.verdict != verdict {
            p.push(format!("verdict {:?}, expected {verdict:?}", j.verdict));
        }
        if let Some(rules) = rules {
            if j.rules() != rules {
                p.push(format!("trace {:?}", j.rules().iter().map(|r| r.name()).collect::<Vec<_>>()));
            }
        }
        if let Err(e) = check_trace(engine, &root, &j) {
            p.push(format!("trace rejected: {e}"));
        }
        p
    });
    tally.record(label, outcome);
}

fn cotorsion_regressions(config: &SuiteConfig) -> Tally {
    use RuleId::*;
    let mut tally = Tally::default();
    let h = |n| SymFunctor::Tag(FunctorTag::Homology(n));
    let named = |s: &str| TowerRef::Named(s.to_string());

    let mut engine = Engine::new();
    engine.register_theorem1_symbolic();
    engine.register_theorem1_truncated("theorem1.truncated", &config.primes);
    expect_judgment(
        &mut tally,
        &engine,
        "theorem1 symbolic",
        GroupTerm::KerComparison(h(2), named(THEOREM1_TOWER)),
        derive_theorem1(&engine, THEOREM1_TOWER),
        Verdict::NotCotorsion,
        Some(&[R8, RW1, R7a, R7]),
    );
    expect_judgment(
        &mut tally,
        &engine,
        "theorem1 truncated",
        GroupTerm::KerComparison(h(2), named("theorem1.truncated")),
        derive_theorem1(&engine, "theorem1.truncated"),
        Verdict::Cotorsion,
        Some(&[R2]),
    );

    let facts = TowerFacts {
        surjective: true,
        stage_torsion_bounded: true,
        ..TowerFacts::default()
    };
    if let Err(e) = engine.register_tower("T", facts) {
        tally.record("register", Err(e));
    }
    for (part, n) in [(1u8, 2usize), (2, 3)] {
        expect_judgment(
            &mut tally,
            &engine,
            &format!("theorem3 part {part}"),
            GroupTerm::CokerComparison(h(n), named("T")),
            derive_theorem3(&engine, "T", part),
            Verdict::Cotorsion,
            None,
        );
    }

    let z = GroupTerm::FG(CanonicalForm::free(1));
    let j = engine.judge(&z);
    expect_judgment(&mut tally, &engine, "judge(Z)", z, j, Verdict::Unknown, Some(&[]));
    tally
}

fn snf_properties(config: &SuiteConfig) -> Tally {
    let mut rng = rng_for(config, 8);
    let matrices: Vec<IntMatrix> = (0..1000)
        .map(|_| {
            let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
            let data = (0..r * c).map(|_| BigInt::from(rng.gen_range(-100i64..=100))).collect();
            IntMatrix::from_row_major(r, c, data).expect("sizes match")
        })
        .collect();
    let results: Vec<_> = matrices.par_iter().map(snf_problems).collect();
    let mut tally = Tally::default();
    for (k, r) in results.into_iter().enumerate() {
        tally.record(format!("matrix {k}"), Ok(r));
    }
    tally
}

fn snf_problems(m: &IntMatrix) -> Vec<String> {
    let s = smith_normal_form(m);
    let mut p = Vec::new();
    let product = s.u.checked_mul(m).and_then(|um| um.checked_mul(&s.v));
    if product.as_ref().ok() != Some(&s.d) {
        p.push("U·M·V ≠ D".into());
    }
    if !s.u.is_unimodular() || !s.v.is_unimodular() {
        p.push("U or V not unimodular".into());
    }
    if !s.d.is_diagonal() {
        p.push("D not diagonal".into());
    }
    let diag: Vec<BigInt> = (0..m.rows().min(m.cols())).map(|i| s.d[(i, i)].clone()).collect();
    let nonzero = diag.iter().take_while(|d| !d.is_zero()).count();
    if nonzero != s.rank || diag[nonzero..].iter().any(|d| !d.is_zero()) {
        p.push("zeros not trailing".into());
    }
    if diag[..nonzero].iter().any(|d| d < &BigInt::one()) {
        p.push("nonpositive invariant factor".into());
    }
    if diag[..nonzero].windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
        p.push("divisibility chain broken".into());
    }
    p
}

fn product_retract() -> Tally {
    let stages: Vec<Presentation> = (1..=4u32).map(|i| Presentation::cyclic(BigInt::from(2).pow(i))).collect();
    let functors = [
        FunctorTag::Homology(2),
        FunctorTag::Lambda(3),
        FunctorTag::TensorWith(CanonicalForm::from_factors(0, &[4])),
    ];
    let mut tally = Tally::default();
    for f in functors {
        let r = product_retract_check(&stages, &f);
        tally.record(
            format!("{f:?}"),
            r.map(|r| {
                r.surjective
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| !**s)
                    .map(|(n, _)| format!("not surjective at n = {}", n + 1))
                    .collect()
            }),
        );
    }
    tally
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_counts() {
        // Number of abelian groups of each order 1..=16.
        let counts = [1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5];
        let all = abelian_groups_up_to(16);
        assert_eq!(all.len(), counts.iter().sum::<usize>());
        for (k, &c) in counts.iter().enumerate() {
            let order = BigInt::from(k + 1);
            assert_eq!(all.iter().filter(|a| a.order() == Some(order.clone())).count(), c);
        }
    }

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(10, &SuiteConfig::default()).is_err());
    }
}
