use std::path::Path;
use std::str::FromStr;

use abelim::bar::{bar_homology, FiniteGroupTable, DEFAULT_BUDGET};
use abelim::cotorsion::{
    check_trace, derive_theorem1, derive_theorem3, parse_term, Engine, Judgment, RuleId, TowerFacts, Verdict,
    THEOREM1_TOWER,
};
use abelim::dsl::parse_group_expr;
use abelim::functor::{homology, FunctorTag};
use abelim::snf::smith_normal_form;
use abelim::tower::spec_file::TowerFile;
use abelim::suite::{run_all, run_criterion, SuiteConfig, DEFAULT_SEED};
use abelim::tower::{
    check_materialized, check_tower, comparison_map, kunneth_split_check, product_retract_check, statement2_check,
    statement4_check, theorem1_construction, theorem1_tor_identities, theorem2_check, theorem3_check, Lim1Certificate,
    MlVerdict, Theorem1Recipe, TowerWindow, DEFAULT_S_MIN,
};
use abelim::{Error, IntMatrix, Presentation};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::report::{big, to_value, InputDigest, Status};
use crate::{Command, CotorsionCommand, Global, OracleCommand, PaperCommand, SuiteCommand, TowerCommand};

const DEFAULT_WINDOW: usize = 6;

/// A failed run: what went wrong and the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
    pub status: Status,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (kind, status) = match &e {
            Error::ClaimViolation(_) => ("claim_violation", Status::Fail),
            Error::LimitNotValidated(_) => ("limit_not_validated", Status::Fail),
            Error::InconsistentOrders(_) => ("inconsistent_orders", Status::Fail),
            Error::HypothesisViolation(_) => ("hypothesis_violation", Status::Error),
            Error::Parse { .. } | Error::ZeroModulus { .. } => ("parse", Status::Error),
            Error::BudgetExceeded { .. } => ("budget_exceeded", Status::Error),
            Error::UnsupportedInducedMap(_) => ("unsupported_induced_map", Status::Error),
            Error::UnresolvedTowerRef(_) => ("unresolved_tower_ref", Status::Error),
            Error::ShapeMismatch(_) => ("shape_mismatch", Status::Error),
            Error::DimensionMismatch(_) | Error::NotWellDefined(_) => ("invalid_input", Status::Error),
            Error::Config(_) => ("config", Status::Error),
        };
        Failure {
            kind,
            message: e.to_string(),
            status,
        }
    }
}

fn config(message: impl Into<String>) -> Failure {
    Failure {
        kind: "config",
        message: message.into(),
        status: Status::Error,
    }
}

type Outcome = Result<(Value, Status), Failure>;

pub fn run(command: &Command, g: &Global, digest: &mut InputDigest) -> Outcome {
    match command {
        Command::Snf { matrix } => snf(matrix),
        Command::Canon { expr } => {
            let a = parse_group_expr(expr)?;
            Ok((json!({"group": a.canonical_form(), "expr": a.canonical_form().to_expr()}), Status::Pass))
        }
        Command::Functor { functor, expr } => {
            let f = FunctorTag::from_str(functor)?;
            let a = parse_group_expr(expr)?;
            let fa = f.apply(&a)?;
            let cf = fa.canonical_form();
            Ok((
                json!({"functor": f.to_string(), "group": cf, "expr": cf.to_expr()}),
                Status::Pass,
            ))
        }
        Command::Hom { n, all, expr } => {
            let a = parse_group_expr(expr)?;
            let h = homology(&a, *n);
            let degrees = if *all { 0..=*n } else { *n..=*n };
            let out: serde_json::Map<String, Value> =
                degrees.map(|k| (format!("H{k}"), to_value(h.degree(k).canonical_form()))).collect();
            Ok((Value::Object(out), Status::Pass))
        }
        Command::Oracle(OracleCommand::Bar { n, expr, group }) => {
            let a = parse_group_expr(expr.as_ref().or(group.as_ref()).expect("clap requires one"))?;
            let table = FiniteGroupTable::from_presentation(&a)?;
            let budget = g.budget.unwrap_or(DEFAULT_BUDGET);
            let h = bar_homology(&table, *n, budget)?;
            Ok((json!({format!("H{n}"): h, "order": table.order()}), Status::Pass))
        }
        Command::Tower(t) => tower(t, g, digest),
        Command::Paper(p) => paper(p, g, digest),
        Command::Cotorsion(CotorsionCommand::Judge {
            term,
            towers,
            assumptions,
            disable,
        }) => judge(term, towers, assumptions, disable, g, digest),
        Command::Suite(SuiteCommand::Run { criteria }) => suite(criteria, g),
    }
}

fn snf(text: &str) -> Outcome {
    let rows: Vec<Vec<Value>> = serde_json::from_str(text).map_err(|e| config(format!("matrix JSON: {e}")))?;
    let entry = |v: &Value| -> Result<BigInt, Failure> {
        match v {
            Value::Number(n) => n.as_i64().map(BigInt::from),
            Value::String(s) => s.trim().parse().ok(),
            _ => None,
        }
        .ok_or_else(|| config(format!("matrix entry {v} is not an integer")))
    };
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(entry).collect())
        .collect::<Result<_, _>>()?;
    let m = IntMatrix::from_rows(&rows)?;
    let s = smith_normal_form(&m);
    let matrix = |m: &IntMatrix| -> Value { m.to_rows().iter().map(|r| r.iter().map(big).collect::<Vec<_>>()).collect() };
    Ok((
        json!({
            "rank": s.rank,
            "diagonal": s.diagonal().iter().map(big).collect::<Vec<_>>(),
            "D": matrix(&s.d),
            "U": matrix(&s.u),
            "V": matrix(&s.v),
        }),
        Status::Pass,
    ))
}

fn load_tower(path: &Path, g: &Global, digest: &mut InputDigest) -> Result<TowerWindow, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
    digest.add(text.as_bytes());
    let file = TowerFile::parse(&text)?;
    let n = g.window.or(file.window).unwrap_or(DEFAULT_WINDOW);
    Ok(TowerWindow::new(&file.to_spec()?, n)?)
}

fn tower(cmd: &TowerCommand, g: &Global, digest: &mut InputDigest) -> Outcome {
    match cmd {
        TowerCommand::Check { spec } => {
            let text = std::fs::read_to_string(spec).map_err(|e| config(format!("{}: {e}", spec.display())))?;
            digest.add(text.as_bytes());
            let file = TowerFile::parse(&text)?;
            let n = g.window.or(file.window).unwrap_or(DEFAULT_WINDOW);
            let r = check_tower(&file.to_spec()?, n)?;
            let settled = matches!(r.ml_verdict, MlVerdict::Stabilized(_)) && r.lim1 != Lim1Certificate::Undetermined;
            let status = if settled { Status::Pass } else { Status::Undetermined };
            Ok((to_value(&r), status))
        }
        TowerCommand::Compare { spec, functor } => {
            let f = FunctorTag::from_str(functor)?;
            let w = load_tower(spec, g, digest)?;
            let r = comparison_map(&w, &f)?;
            let status = if !r.ledger_exact() {
                Status::Fail
            } else if r.coker_of_eta_window.is_none() {
                Status::Undetermined
            } else {
                Status::Pass
            };
            let mut v = to_value(&r);
            v["ledger_exact"] = json!(r.ledger_exact());
            Ok((v, status))
        }
        TowerCommand::Statement2 { spec, b } => {
            let b = parse_group_expr(b)?;
            let r = statement2_check(&b, &load_tower(spec, g, digest)?)?;
            Ok((to_value(&r), Status::from_pass(r.pass)))
        }
        TowerCommand::Statement4 { spec, b } => {
            let b = parse_group_expr(b)?;
            let r = statement4_check(&b, &load_tower(spec, g, digest)?)?;
            Ok((to_value(&r), Status::from_pass(r.pass)))
        }
        TowerCommand::Theorem2 { spec, n } => {
            let r = theorem2_check(&load_tower(spec, g, digest)?, *n)?;
            Ok((to_value(&r), Status::from_pass(r.injectivity.pass)))
        }
        TowerCommand::ProductRetract { functor, stages } => {
            let f = FunctorTag::from_str(functor)?;
            let ys: Vec<Presentation> = stages.iter().map(|s| parse_group_expr(s)).collect::<Result<_, _>>()?;
            let r = product_retract_check(&ys, &f)?;
            Ok((to_value(&r), Status::from_pass(r.pass)))
        }
    }
}

fn traced(engine: &Engine, term: &abelim::cotorsion::GroupTerm, j: &Judgment) -> Value {
    let mut v = to_value(j);
    v["term"] = json!(term.to_string());
    v["trace_checked"] = json!(check_trace(engine, term, j).is_ok());
    v
}

fn paper(cmd: &PaperCommand, g: &Global, digest: &mut InputDigest) -> Outcome {
    match cmd {
        PaperCommand::Theorem1 { symbolic: true } => {
            let mut engine = Engine::new();
            engine.register_theorem1_symbolic();
            let j = derive_theorem1(&engine, THEOREM1_TOWER)?;
            let root = parse_term(&format!("ker_cmp(homology(2), {THEOREM1_TOWER})"))?;
            let v = traced(&engine, &root, &j);
            let ok = j.verdict == Verdict::NotCotorsion && v["trace_checked"] == json!(true);
            Ok((v, Status::from_pass(ok)))
        }
        PaperCommand::Theorem1 { symbolic: false } => {
            let primes = g.primes.clone().unwrap_or_else(|| vec![2, 3, 5]);
            let m = g.truncation.unwrap_or(8);
            let n = g.window.unwrap_or(DEFAULT_WINDOW);
            let recipe = Theorem1Recipe::new(primes.clone(), m)?;
            let ids = theorem1_tor_identities(&recipe, n.min(m - 1));
            let kunneth = kunneth_split_check(&recipe, n.min(m - 1))?;
            let w = theorem1_construction(&primes, m, n)?;
            let check = check_materialized(&w.tower, w.constant_from(DEFAULT_S_MIN), DEFAULT_S_MIN);
            let surjective = check.surjective.iter().all(|&s| s);

            let name = format!("{THEOREM1_TOWER}.truncated");
            let mut engine = Engine::new();
            engine.register_theorem1_truncated(&name, &primes);
            let j = derive_theorem1(&engine, &name)?;
            let root = parse_term(&format!("ker_cmp(homology(2), {name})"))?;

            let ok = ids.iter().all(|t| t.pass)
                && kunneth.pass
                && surjective
                && check.lim1.is_zero()
                && j.verdict == Verdict::Cotorsion;
            Ok((
                json!({
                    "primes": primes,
                    "truncation": m,
                    "window": n,
                    "tor_identities": ids,
                    "kunneth_split": kunneth,
                    "surjective": surjective,
                    "lim1": check.lim1,
                    "truncated_kernel": traced(&engine, &root, &j),
                }),
                Status::from_pass(ok),
            ))
        }
        PaperCommand::Theorem3 { spec: Some(spec) } => {
            let r = theorem3_check(&load_tower(spec, g, digest)?)?;
            let mut v = to_value(&r);
            v["pass"] = json!(r.pass());
            Ok((v, Status::from_pass(r.pass())))
        }
        PaperCommand::Theorem3 { spec: None } => {
            let mut engine = Engine::new();
            engine.register_tower(
                "T",
                TowerFacts {
                    surjective: true,
                    stage_torsion_bounded: true,
                    ..TowerFacts::default()
                },
            )?;
            let mut parts = Vec::new();
            let mut ok = true;
            for (part, degree) in [(1u8, 2), (2, 3)] {
                let j = derive_theorem3(&engine, "T", part)?;
                let root = parse_term(&format!("coker_cmp(homology({degree}), T)"))?;
                ok &= j.verdict == Verdict::Cotorsion && check_trace(&engine, &root, &j).is_ok();
                parts.push(traced(&engine, &root, &j));
            }
            Ok((json!({"tower": "T", "parts": parts}), Status::from_pass(ok)))
        }
    }
}

fn facts_from(list: &str) -> Result<TowerFacts, Failure> {
    let mut f = TowerFacts::default();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "surjective" => f.surjective = true,
            "eventually_constant" => f.eventually_constant = true,
            "torsion_bounded" => f.stage_torsion_bounded = true,
            "lim1_tor_nonzero" => f.lim1_tor_nonzero = true,
            other => {
                let e = other
                    .strip_prefix("bounded:")
                    .and_then(|e| e.parse::<BigInt>().ok())
                    .filter(|e| *e > BigInt::from(0))
                    .ok_or_else(|| config(format!("unknown tower fact `{other}`")))?;
                f.stages_bounded = Some(e);
                f.stage_torsion_bounded = true;
            }
        }
    }
    Ok(f)
}

fn split_named(s: &str) -> Result<(&str, &str), Failure> {
    s.split_once('=')
        .map(|(a, b)| (a.trim(), b.trim()))
        .filter(|(a, _)| !a.is_empty())
        .ok_or_else(|| config(format!("expected NAME=VALUE, got `{s}`")))
}

fn judge(
    term: &str,
    towers: &[String],
    assumptions: &[String],
    disable: &[String],
    g: &Global,
    digest: &mut InputDigest,
) -> Outcome {
    let mut engine = Engine::new();
    engine.register_theorem1_symbolic();
    for t in towers {
        let (name, file) = split_named(t)?;
        let w = load_tower(Path::new(file), g, digest)?;
        engine.register_tower(name, TowerFacts::from_window(&w))?;
    }
    for a in assumptions {
        let (name, facts) = split_named(a)?;
        engine.register_tower(name, facts_from(facts)?)?;
    }
    for r in disable.iter().map(|r| r.trim()).filter(|r| !r.is_empty()) {
        engine.disable(RuleId::from_name(r).ok_or_else(|| config(format!("unknown rule `{r}`")))?);
    }
    let t = parse_term(term)?;
    let j = engine.judge(&t)?;
    let status = match (j.verdict, check_trace(&engine, &t, &j)) {
        (_, Err(_)) => Status::Fail,
        (Verdict::Unknown, _) => Status::Undetermined,
        _ => Status::Pass,
    };
    Ok((traced(&engine, &t, &j), status))
}

fn seed(g: &Global) -> Result<u64, Failure> {
    if let Some(s) = g.seed {
        return Ok(s);
    }
    match std::env::var("ABELIM_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| config(format!("ABELIM_SEED `{s}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn suite(criteria: &[u8], g: &Global) -> Outcome {
    let defaults = SuiteConfig::default();
    let cfg = SuiteConfig {
        seed: seed(g)?,
        budget: g.budget.unwrap_or(defaults.budget),
        window: g.window.unwrap_or(defaults.window),
        primes: g.primes.clone().unwrap_or(defaults.primes),
        truncation: g.truncation.unwrap_or(defaults.truncation),
        timing: g.timing,
    };
    let outcomes = if criteria.is_empty() {
        run_all(&cfg)
    } else {
        criteria
            .iter()
            .map(|&k| run_criterion(k, &cfg))
            .collect::<Result<Vec<_>, _>>()?
    };
    let status = outcomes
        .iter()
        .fold(Status::Pass, |s, o| s.and(Status::from_pass(o.pass)));
    let lines: Vec<String> = outcomes.iter().map(|o| o.line()).collect();
    Ok((
        json!({"seed": cfg.seed, "summary": lines, "criteria": outcomes}),
        status,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use abelim::CanonicalForm;

    #[test]
    fn facts_parse() {
        let f = facts_from("surjective, bounded:4").unwrap();
        assert!(f.surjective && f.stage_torsion_bounded);
        assert_eq!(f.stages_bounded, Some(BigInt::from(4)));
        assert!(facts_from("bounded:0").is_err());
        assert!(facts_from("shiny").is_err());
    }

    #[test]
    fn error_classes() {
        assert_eq!(Failure::from(Error::ClaimViolation(String::new())).status, Status::Fail);
        assert_eq!(Failure::from(Error::Parse { column: 1, message: String::new() }).status, Status::Error);
    }

    #[test]
    fn canonical_forms_print() {
        let (v, s) = run(
            &Command::Canon { expr: "Z/6 + Z".into() },
            &Global::default(),
            &mut InputDigest::default(),
        )
        .ok()
        .unwrap();
        assert_eq!(s, Status::Pass);
        assert_eq!(v["expr"], json!(CanonicalForm::from_factors(1, &[6]).to_expr()));
    }
}
