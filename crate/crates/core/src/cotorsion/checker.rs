//! Replays a trace without the search: every step must be an instance of its
//! rule whose premises are established by other steps of the same trace.

use std::collections::HashSet;

use super::{Engine, Fact, GroupTerm, IndexSet, Judgment, RuleId, Verdict};

type Premises = Vec<(GroupTerm, Fact)>;

/// Candidate premise sets for `rule` concluding `fact` about `t`, or `None`
/// when the step is not an instance of the rule.
fn instances(engine: &Engine, rule: RuleId, t: &GroupTerm, fact: Fact) -> Option<Vec<Premises>> {
    use Fact::*;
    use GroupTerm as G;
    let leaf = || Some(vec![Vec::new()]);
    let one = |x: &GroupTerm, f: Fact| Some(vec![vec![(x.clone(), f)]]);
    match (rule, t, fact) {
        (RuleId::R1, G::Lim1(_), Cotorsion) => leaf(),
        (RuleId::R2, _, Cotorsion) if engine.bounded(t).is_some() => leaf(),
        (RuleId::R3, G::Extension { sub, quot }, Cotorsion) => {
            Some(vec![vec![((**sub).clone(), Cotorsion), ((**quot).clone(), Cotorsion)]])
        }
        (RuleId::R3, G::SumFamily { body, index: IndexSet::Finite(_) }, Cotorsion) => one(body, Cotorsion),
        (RuleId::R4, G::Lim(tower), Cotorsion) => one(&G::Stage(tower.clone()), Cotorsion),
        (RuleId::R5, G::QuotientOf(x), Cotorsion) => one(x, Cotorsion),
        (RuleId::R6, G::RetractTimesN { ambient, .. }, Cotorsion) => one(ambient, Cotorsion),
        (RuleId::R7, _, NotCotorsion) if engine.reduced_unbounded(t) => leaf(),
        (RuleId::R7, G::SumFamily { body, index: IndexSet::AllPrimes }, NotCotorsion) => one(body, NonzeroPTorsion),
        (RuleId::R7a, _, NonzeroPTorsion) if engine.lim1_tor_certificate(t) => leaf(),
        (RuleId::R8, G::SummandOf(x), NotCotorsion) => one(x, NotCotorsion),
        (RuleId::R8, G::KerComparison(f, tower), NotCotorsion) => Some(
            engine
                .ledger_summands(f, tower)
                .into_iter()
                .map(|s| vec![(s.clone(), NotCotorsion)])
                .collect(),
        ),
        (RuleId::RW1, G::KerComparison(..), _) => {
            let r = engine.rw1(t)?;
            one(&r, fact)
        }
        (RuleId::S1 | RuleId::Breen | RuleId::BreenX2 | RuleId::Quot, G::CokerComparison(..), Cotorsion) => {
            let r = engine.reduction(rule, t)?;
            one(&r, Cotorsion)
        }
        _ => None,
    }
}

/// Validates `judgment` as a derivation of its verdict for `root`.
pub fn check_trace(engine: &Engine, root: &GroupTerm, judgment: &Judgment) -> Result<(), String> {
    if judgment.verdict == Verdict::Unknown {
        return if judgment.trace.is_empty() {
            Ok(())
        } else {
            Err("an Unknown verdict carries a trace".into())
        };
    }
    engine.check_refs(root).map_err(|e| e.to_string())?;
    let mut candidates = Vec::new();
    for (k, s) in judgment.trace.iter().enumerate() {
        if !engine.is_enabled(s.rule) {
            return Err(format!("step {k} uses the disabled rule {}", s.rule.name()));
        }
        if s.subterm != s.term.to_string() {
            return Err(format!("step {k} prints a different subterm"));
        }
        let sets = instances(engine, s.rule, &s.term, s.conclusion)
            .ok_or_else(|| format!("step {k} ({}) does not apply to {}", s.rule.name(), s.subterm))?;
        candidates.push(sets);
    }

    // Premises must be established by other steps; iterate to a fixed point
    // so that only well-founded derivations validate.
    let mut established: HashSet<(GroupTerm, Fact)> = HashSet::new();
    let mut done = vec![false; judgment.trace.len()];
    loop {
        let mut progress = false;
        for (k, s) in judgment.trace.iter().enumerate() {
            if done[k] {
                continue;
            }
            if candidates[k].iter().any(|set| set.iter().all(|p| established.contains(p))) {
                established.insert((s.term.clone(), s.conclusion));
                done[k] = true;
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    if let Some(k) = done.iter().position(|d| !d) {
        return Err(format!("step {k} ({}) has unestablished premises", judgment.trace[k].rule.name()));
    }
    let fact = match judgment.verdict {
        Verdict::Cotorsion => Fact::Cotorsion,
        _ => Fact::NotCotorsion,
    };
    if !established.contains(&(root.clone(), fact)) {
        return Err("the trace does not conclude the verdict for the root term".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cotorsion::{parse_term, TraceStep};

    #[test]
    fn forged_traces_are_rejected() {
        let mut e = Engine::new();
        e.declare_abstract("T").unwrap();
        let t = parse_term("lim(T)").unwrap();
        let forged = Judgment {
            verdict: Verdict::Cotorsion,
            trace: vec![TraceStep::new(RuleId::R4, &t, Fact::Cotorsion)],
        };
        assert!(check_trace(&e, &t, &forged).is_err());
        let wrong_rule = Judgment {
            verdict: Verdict::Cotorsion,
            trace: vec![TraceStep::new(RuleId::R1, &t, Fact::Cotorsion)],
        };
        assert!(check_trace(&e, &t, &wrong_rule).is_err());
    }
}
