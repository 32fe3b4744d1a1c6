use std::cell::RefCell;
use std::collections::HashMap;

use super::{
    kernel_to_lim1_rewrite, Engine, Fact, GroupTerm, IndexSet, Judgment, RuleId, SymFunctor, TowerRef, TraceStep,
    Verdict,
};
use crate::error::{Error, Result};
use crate::functor::FunctorTag;

type Derivation = Option<(Fact, Vec<TraceStep>)>;

/// One search. Rules that reduce a goal are recorded before the steps that
/// discharge it; rules that close a goal from premises are recorded after.
struct Search<'a> {
    engine: &'a Engine,
    memo: RefCell<HashMap<(GroupTerm, bool), Derivation>>,
}

fn step(rule: RuleId, t: &GroupTerm, fact: Fact) -> TraceStep {
    TraceStep::new(rule, t, fact)
}

impl Engine {
    /// Judges `t`. Towers it mentions must be registered or declared abstract.
    pub fn judge(&self, t: &GroupTerm) -> Result<Judgment> {
        self.check_refs(t)?;
        let search = Search {
            engine: self,
            memo: RefCell::default(),
        };
        Ok(match search.verdict(t) {
            Some((fact, trace)) => Judgment {
                verdict: fact.verdict().expect("verdict goals yield verdicts"),
                trace,
            },
            None => Judgment {
                verdict: Verdict::Unknown,
                trace: Vec::new(),
            },
        })
    }

    /// The term `Tor`-comparison rewrites produce, when `RW1` is on.
    pub(crate) fn rw1(&self, t: &GroupTerm) -> Option<GroupTerm> {
        kernel_to_lim1_rewrite(t).ok()
    }

    /// The rewrite target of `S1`, `BREEN`, `BREEN-X2` or `QUOT` on `t`.
    pub(crate) fn reduction(&self, rule: RuleId, t: &GroupTerm) -> Option<GroupTerm> {
        let GroupTerm::CokerComparison(f, tower) = t else {
            return None;
        };
        let boxed = || Box::new(tower.clone());
        match rule {
            RuleId::S1 if self.surjective(tower) && super::functor_preserves_surjections(f) => {
                Some(GroupTerm::Lim1(TowerRef::Phi(f.clone(), boxed())))
            }
            RuleId::Breen if *f == SymFunctor::Tag(FunctorTag::Homology(3)) && self.surjective(tower) => {
                Some(GroupTerm::Extension {
                    sub: Box::new(GroupTerm::CokerComparison(
                        SymFunctor::Tag(FunctorTag::Lambda(3)),
                        tower.clone(),
                    )),
                    quot: Box::new(GroupTerm::CokerComparison(
                        SymFunctor::Tag(FunctorTag::L1Lambda2),
                        tower.clone(),
                    )),
                })
            }
            RuleId::BreenX2 if *f == SymFunctor::Tag(FunctorTag::L1Lambda2) => Some(GroupTerm::RetractTimesN {
                ambient: Box::new(GroupTerm::CokerComparison(SymFunctor::TorSelf, tower.clone())),
                n: 2,
            }),
            RuleId::Quot => Some(GroupTerm::QuotientOf(Box::new(GroupTerm::Lim(TowerRef::Applied(
                f.clone(),
                boxed(),
            ))))),
            _ => None,
        }
    }
}

impl Search<'_> {
    fn on(&self, rule: RuleId) -> bool {
        self.engine.is_enabled(rule)
    }

    fn memo(&self, t: &GroupTerm, ptorsion: bool, f: impl FnOnce() -> Derivation) -> Derivation {
        let key = (t.clone(), ptorsion);
        if let Some(d) = self.memo.borrow().get(&key) {
            return d.clone();
        }
        // Guards against rewrite cycles: a goal under evaluation is unknown.
        self.memo.borrow_mut().insert(key.clone(), None);
        let d = f();
        self.memo.borrow_mut().insert(key, d.clone());
        d
    }

    fn cotorsion(&self, t: &GroupTerm) -> Option<Vec<TraceStep>> {
        match self.verdict(t)? {
            (Fact::Cotorsion, steps) => Some(steps),
            _ => None,
        }
    }

    fn not_cotorsion(&self, t: &GroupTerm) -> Option<Vec<TraceStep>> {
        match self.verdict(t)? {
            (Fact::NotCotorsion, steps) => Some(steps),
            _ => None,
        }
    }

    fn verdict(&self, t: &GroupTerm) -> Derivation {
        self.memo(t, false, || self.verdict_uncached(t))
    }

    fn closes(&self, rule: RuleId, t: &GroupTerm, fact: Fact, mut premises: Vec<TraceStep>) -> Derivation {
        premises.push(step(rule, t, fact));
        Some((fact, premises))
    }

    fn reduces(&self, rule: RuleId, t: &GroupTerm, (fact, steps): (Fact, Vec<TraceStep>)) -> Derivation {
        let mut out = vec![step(rule, t, fact)];
        out.extend(steps);
        Some((fact, out))
    }

    fn verdict_uncached(&self, t: &GroupTerm) -> Derivation {
        let e = self.engine;
        // Cokernel comparisons prefer the structural reductions over a
        // window-level boundedness certificate.
        let coker = matches!(t, GroupTerm::CokerComparison(..));
        if self.on(RuleId::R2) && !coker && e.bounded(t).is_some() {
            return Some((Fact::Cotorsion, vec![step(RuleId::R2, t, Fact::Cotorsion)]));
        }
        if self.on(RuleId::R7) && e.reduced_unbounded(t) {
            return Some((Fact::NotCotorsion, vec![step(RuleId::R7, t, Fact::NotCotorsion)]));
        }
        match t {
            GroupTerm::Lim1(_) if self.on(RuleId::R1) => Some((Fact::Cotorsion, vec![step(RuleId::R1, t, Fact::Cotorsion)])),
            GroupTerm::SumFamily { body, index } => match index {
                IndexSet::AllPrimes if self.on(RuleId::R7) => {
                    let premises = self.ptorsion(body)?;
                    self.closes(RuleId::R7, t, Fact::NotCotorsion, premises)
                }
                IndexSet::Finite(_) if self.on(RuleId::R3) => {
                    let premises = self.cotorsion(body)?;
                    self.closes(RuleId::R3, t, Fact::Cotorsion, premises)
                }
                _ => None,
            },
            GroupTerm::Extension { sub, quot } if self.on(RuleId::R3) => {
                let mut premises = self.cotorsion(sub)?;
                premises.extend(self.cotorsion(quot)?);
                self.closes(RuleId::R3, t, Fact::Cotorsion, premises)
            }
            GroupTerm::Lim(tower) if self.on(RuleId::R4) => {
                let premises = self.cotorsion(&GroupTerm::Stage(tower.clone()))?;
                self.closes(RuleId::R4, t, Fact::Cotorsion, premises)
            }
            GroupTerm::QuotientOf(x) if self.on(RuleId::R5) => {
                let premises = self.cotorsion(x)?;
                self.closes(RuleId::R5, t, Fact::Cotorsion, premises)
            }
            GroupTerm::RetractTimesN { ambient, .. } if self.on(RuleId::R6) => {
                let premises = self.cotorsion(ambient)?;
                self.closes(RuleId::R6, t, Fact::Cotorsion, premises)
            }
            GroupTerm::SummandOf(x) if self.on(RuleId::R8) => {
                let steps = self.not_cotorsion(x)?;
                self.reduces(RuleId::R8, t, (Fact::NotCotorsion, steps))
            }
            GroupTerm::KerComparison(f, tower) => {
                if self.on(RuleId::R8) {
                    for s in e.ledger_summands(f, tower) {
                        if let Some(steps) = self.not_cotorsion(s) {
                            return self.reduces(RuleId::R8, t, (Fact::NotCotorsion, steps));
                        }
                    }
                }
                if self.on(RuleId::RW1) {
                    if let Some(r) = e.rw1(t) {
                        let d = self.verdict(&r)?;
                        return self.reduces(RuleId::RW1, t, d);
                    }
                }
                None
            }
            GroupTerm::CokerComparison(..) => {
                for rule in [RuleId::S1, RuleId::Breen, RuleId::BreenX2, RuleId::Quot] {
                    if !self.on(rule) {
                        continue;
                    }
                    if let Some(r) = e.reduction(rule, t) {
                        if let Some(steps) = self.cotorsion(&r) {
                            return self.reduces(rule, t, (Fact::Cotorsion, steps));
                        }
                    }
                }
                if self.on(RuleId::R2) && e.bounded(t).is_some() {
                    return Some((Fact::Cotorsion, vec![step(RuleId::R2, t, Fact::Cotorsion)]));
                }
                None
            }
            _ => None,
        }
    }

    /// Derivations of [`Fact::NonzeroPTorsion`].
    fn ptorsion(&self, t: &GroupTerm) -> Option<Vec<TraceStep>> {
        self.memo(t, true, || {
            let e = self.engine;
            if self.on(RuleId::R7a) && e.lim1_tor_certificate(t) {
                return Some((Fact::NonzeroPTorsion, vec![step(RuleId::R7a, t, Fact::NonzeroPTorsion)]));
            }
            if self.on(RuleId::RW1) {
                if let Some(r) = e.rw1(t) {
                    let steps = self.ptorsion(&r)?;
                    return self.reduces(RuleId::RW1, t, (Fact::NonzeroPTorsion, steps));
                }
            }
            None
        })
        .map(|(_, steps)| steps)
    }
}

/// Judges the kernel of `H₂(lim Aᵢ) → lim H₂(Aᵢ)` for a registered
/// construction (see [`Engine::register_theorem1_symbolic`]).
pub fn derive_theorem1(engine: &Engine, tower: &str) -> Result<Judgment> {
    engine.judge(&GroupTerm::KerComparison(
        SymFunctor::Tag(FunctorTag::Homology(2)),
        TowerRef::Named(tower.to_string()),
    ))
}

/// Judges the cokernel of `H₂` (part 1) or `H₃` (part 2) comparison maps
/// for a registered surjective tower.
pub fn derive_theorem3(engine: &Engine, tower: &str, part: u8) -> Result<Judgment> {
    let facts = engine
        .facts(tower)
        .ok_or_else(|| Error::UnresolvedTowerRef(tower.to_string()))?;
    if !facts.surjective {
        return Err(Error::HypothesisViolation(format!("tower `{tower}` is not known to be surjective")));
    }
    let n = match part {
        1 => 2,
        2 => 3,
        _ => return Err(Error::Config(format!("part must be 1 or 2, got {part}"))),
    };
    engine.judge(&GroupTerm::CokerComparison(
        SymFunctor::Tag(FunctorTag::Homology(n)),
        TowerRef::Named(tower.to_string()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cotorsion::{check_trace, parse_term, TowerFacts};

    fn rules(j: &Judgment) -> Vec<&'static str> {
        j.trace.iter().map(|s| s.rule.name()).collect()
    }

    #[test]
    fn symbolic_theorem1() {
        let mut e = Engine::new();
        e.register_theorem1_symbolic();
        let j = derive_theorem1(&e, "theorem1").unwrap();
        assert_eq!(j.verdict, Verdict::NotCotorsion);
        assert_eq!(rules(&j), ["R8", "RW1", "R7a", "R7"]);
        let root = GroupTerm::KerComparison(SymFunctor::Tag(FunctorTag::Homology(2)), TowerRef::Named("theorem1".into()));
        check_trace(&e, &root, &j).unwrap();
    }

    #[test]
    fn truncated_theorem1_is_bounded() {
        let mut e = Engine::new();
        e.register_theorem1_truncated("t1", &[2, 3, 5]);
        let j = derive_theorem1(&e, "t1").unwrap();
        assert_eq!(j.verdict, Verdict::Cotorsion);
        assert_eq!(rules(&j), ["R2"]);
    }

    #[test]
    fn rw1_is_needed() {
        let mut e = Engine::new();
        e.register_theorem1_symbolic();
        e.disable(RuleId::RW1);
        assert_eq!(derive_theorem1(&e, "theorem1").unwrap().verdict, Verdict::Unknown);
    }

    #[test]
    fn theorem3_parts() {
        let mut e = Engine::new();
        e.register_tower(
            "T",
            TowerFacts {
                surjective: true,
                stage_torsion_bounded: true,
                ..TowerFacts::default()
            },
        )
        .unwrap();
        let p1 = derive_theorem3(&e, "T", 1).unwrap();
        assert_eq!(p1.verdict, Verdict::Cotorsion);
        assert_eq!(rules(&p1), ["S1", "R1"]);
        let p2 = derive_theorem3(&e, "T", 2).unwrap();
        assert_eq!(p2.verdict, Verdict::Cotorsion);
        for r in ["R6", "R2", "R4", "R5", "R3"] {
            assert!(rules(&p2).contains(&r), "{r} missing from {:?}", rules(&p2));
        }
        for (part, j) in [(2, &p1), (3, &p2)] {
            let root = GroupTerm::CokerComparison(SymFunctor::Tag(FunctorTag::Homology(part)), TowerRef::Named("T".into()));
            check_trace(&e, &root, j).unwrap();
        }

        let mut weak = Engine::new();
        weak.register_tower("T", TowerFacts { surjective: true, ..TowerFacts::default() }).unwrap();
        assert_eq!(derive_theorem3(&weak, "T", 2).unwrap().verdict, Verdict::Unknown);
        weak.register_tower("U", TowerFacts::default()).unwrap();
        assert!(matches!(derive_theorem3(&weak, "U", 1), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn small_judgments() {
        let mut e = Engine::new();
        e.declare_abstract("T").unwrap();
        let cases = [
            ("lim1(T)", Verdict::Cotorsion, vec!["R1"]),
            ("sum_p(Z/p)", Verdict::NotCotorsion, vec!["R7"]),
            ("Z", Verdict::Unknown, vec![]),
            ("Q", Verdict::Unknown, vec![]),
            ("bounded(4)", Verdict::Cotorsion, vec!["R2"]),
            ("ext(bounded(2), lim1(T))", Verdict::Cotorsion, vec!["R2", "R1", "R3"]),
            ("summand_of(sum_p(Z/p))", Verdict::NotCotorsion, vec!["R8", "R7"]),
            ("retract(lim1(T), 2)", Verdict::Cotorsion, vec!["R1", "R6"]),
            ("quot(Z/4 + Z/2)", Verdict::Cotorsion, vec!["R2", "R5"]),
            ("reduced_unbounded(3)", Verdict::NotCotorsion, vec!["R7"]),
        ];
        for (text, verdict, trace) in cases {
            let t = parse_term(text).unwrap();
            let j = e.judge(&t).unwrap();
            assert_eq!(j.verdict, verdict, "{text}");
            assert_eq!(rules(&j), trace, "{text}");
            check_trace(&e, &t, &j).unwrap();
        }
    }

    #[test]
    fn unresolved_towers_are_errors() {
        let e = Engine::new();
        assert!(matches!(
            e.judge(&parse_term("lim1(nowhere)").unwrap()),
            Err(Error::UnresolvedTowerRef(_))
        ));
    }
}
