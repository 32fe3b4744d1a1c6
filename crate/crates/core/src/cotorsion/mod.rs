//! A rule-based judge deciding whether a group expression is cotorsion.
//!
//! The engine is incomplete on purpose: it knows a short list of closure
//! rules and certificates ([`RuleId`]) and answers [`Verdict::Unknown`]
//! whenever they do not apply. Every other verdict comes with a trace that
//! [`check_trace`] replays independently of the search.
//!
//! ```
//! use abelim::cotorsion::{parse_term, Engine, Verdict};
//!
//! let engine = Engine::new();
//! let j = engine.judge(&parse_term("sum_p(Z/p)").unwrap()).unwrap();
//! assert_eq!(j.verdict, Verdict::NotCotorsion);
//! assert_eq!(engine.judge(&parse_term("Z").unwrap()).unwrap().verdict, Verdict::Unknown);
//! ```

mod checker;
mod engine;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::functor::FunctorTag;
use crate::group::CanonicalForm;
use crate::tower::TowerWindow;

pub use checker::check_trace;
pub use engine::{derive_theorem1, derive_theorem3};
pub use parse::{parse_term, parse_tower_ref};

/// Index range of a family of groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexSet {
    Finite(usize),
    AllPrimes,
    AllNaturals,
}

/// A functor as it appears in symbolic terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymFunctor {
    Tag(FunctorTag),
    /// `− ⊗ ℤ/p` for the index `p` of the enclosing family.
    TensorIndex,
    /// `Tor(−, ℤ/p)` for the index `p` of the enclosing family.
    TorIndex,
    /// `A ↦ Tor(A, A)`.
    TorSelf,
}

/// A tower: registered by name, or derived from one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TowerRef {
    Named(String),
    /// `F(Aᵢ)` with maps `F(fᵢ)`.
    Applied(SymFunctor, Box<TowerRef>),
    /// The kernels `Φᵢ` of the comparison maps for `F`.
    Phi(SymFunctor, Box<TowerRef>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorsionKind {
    Prime(u64),
    Mixed,
}

/// Group expressions the engine rules on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupTerm {
    FG(CanonicalForm),
    /// `ℤ/p` for the index `p` of the enclosing family.
    IndexCyclic,
    SumFamily { body: Box<GroupTerm>, index: IndexSet },
    /// A generic stage `Aᵢ`.
    Stage(TowerRef),
    Lim(TowerRef),
    Lim1(TowerRef),
    KerComparison(SymFunctor, TowerRef),
    CokerComparison(SymFunctor, TowerRef),
    QuotientOf(Box<GroupTerm>),
    Extension { sub: Box<GroupTerm>, quot: Box<GroupTerm> },
    /// Some group having the argument as a direct summand.
    SummandOf(Box<GroupTerm>),
    /// `A` with maps `A → C → A` composing to `n`, where `C` is the ambient term.
    RetractTimesN { ambient: Box<GroupTerm>, n: u64 },
    BoundedTorsion(BigInt),
    ReducedUnboundedTorsion(TorsionKind),
    Rationals,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Cotorsion,
    NotCotorsion,
    Unknown,
}

/// What a trace step establishes about its subterm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fact {
    Cotorsion,
    NotCotorsion,
    /// For every index `p`, a nonzero reduced `p`-group.
    NonzeroPTorsion,
}

impl Fact {
    fn verdict(self) -> Option<Verdict> {
        match self {
            Fact::Cotorsion => Some(Verdict::Cotorsion),
            Fact::NotCotorsion => Some(Verdict::NotCotorsion),
            Fact::NonzeroPTorsion => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R7a,
    R8,
    RW1,
    S1,
    Breen,
    BreenX2,
    Quot,
}

impl RuleId {
    pub const ALL: [RuleId; 14] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R7a,
        RuleId::R8,
        RuleId::RW1,
        RuleId::S1,
        RuleId::Breen,
        RuleId::BreenX2,
        RuleId::Quot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R5 => "R5",
            RuleId::R6 => "R6",
            RuleId::R7 => "R7",
            RuleId::R7a => "R7a",
            RuleId::R8 => "R8",
            RuleId::RW1 => "RW1",
            RuleId::S1 => "S1",
            RuleId::Breen => "BREEN",
            RuleId::BreenX2 => "BREEN-X2",
            RuleId::Quot => "QUOT",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleId> {
        RuleId::ALL.into_iter().find(|r| r.name().eq_ignore_ascii_case(s))
    }

    pub fn citation(self) -> &'static str {
        match self {
            RuleId::R1 => "lim1 of a tower of abelian groups is cotorsion (Huber)",
            RuleId::R2 => "a group of bounded exponent is cotorsion",
            RuleId::R3 => "an extension of a cotorsion group by a cotorsion group is cotorsion",
            RuleId::R4 => "an inverse limit of cotorsion groups is cotorsion",
            RuleId::R5 => "a quotient of a cotorsion group is cotorsion",
            RuleId::R6 => "a group whose identity times n factors through a cotorsion group is cotorsion",
            RuleId::R7 => "a reduced torsion group of unbounded exponent is not cotorsion (Baer)",
            RuleId::R7a => "lim1 Tor(A_i, Z/p) is a nonzero reduced p-group for this tower",
            RuleId::R8 => "a group with a non-cotorsion direct summand is not cotorsion",
            RuleId::RW1 => "ker[(lim A_i) (x) Z/p -> lim(A_i (x) Z/p)] is lim1 Tor(A_i, Z/p)",
            RuleId::S1 => "for surjective towers and surjection-preserving F, coker of the comparison map is lim1 Phi_i",
            RuleId::Breen => {
                "naturality of 0 -> L3 -> H3 -> L1L2 -> 0 with lim1 L3(A_i) = 0 makes the H3 cokernel an extension of the L1L2 cokernel by the L3 cokernel"
            }
            RuleId::BreenX2 => "L1L2 is naturally a retract of Tor(A, A) up to multiplication by 2",
            RuleId::Quot => "the cokernel of a map into lim F(A_i) is a quotient of lim F(A_i)",
        }
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// One rule application.
#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub rule: RuleId,
    pub citation: String,
    pub subterm: String,
    #[serde(skip)]
    pub term: GroupTerm,
    #[serde(skip)]
    pub conclusion: Fact,
}

impl TraceStep {
    fn new(rule: RuleId, term: &GroupTerm, conclusion: Fact) -> Self {
        TraceStep {
            rule,
            citation: rule.citation().into(),
            subterm: term.to_string(),
            term: term.clone(),
            conclusion,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Judgment {
    pub verdict: Verdict,
    pub trace: Vec<TraceStep>,
}

impl Judgment {
    pub fn rules(&self) -> Vec<RuleId> {
        self.trace.iter().map(|s| s.rule).collect()
    }
}

/// What is known about a registered tower.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TowerFacts {
    pub surjective: bool,
    /// The maps are eventually isomorphisms and the limit is the stable stage.
    pub eventually_constant: bool,
    /// Every stage is torsion of exponent dividing this.
    pub stages_bounded: Option<BigInt>,
    /// Each stage has a torsion subgroup of bounded exponent.
    pub stage_torsion_bounded: bool,
    /// `lim¹ Tor(Aᵢ, ℤ/p)` is a nonzero reduced `p`-group for every prime `p`.
    pub lim1_tor_nonzero: bool,
    /// Direct summands of the kernel of the comparison map for a functor.
    pub kernel_summands: Vec<(SymFunctor, GroupTerm)>,
}

impl TowerFacts {
    /// Facts verified on a window: surjectivity, eventual constancy with the
    /// declared limit as stable stage, and stage exponents.
    pub fn from_window(window: &TowerWindow) -> Self {
        let t = &window.tower;
        let n = t.window();
        let eventually_constant = window.constant_from(crate::tower::DEFAULT_S_MIN).is_some()
            && t.limit.as_ref().is_some_and(|l| l.projections[n - 1].is_isomorphism());
        let stages_bounded = t
            .stages
            .iter()
            .map(|a| a.canonical_form().is_finite().then(|| a.exponent_bound()).flatten())
            .try_fold(BigInt::one(), |acc, e| e.map(|e| acc.lcm(&e)));
        TowerFacts {
            surjective: t.maps.iter().all(|f| f.is_surjective()),
            eventually_constant,
            stages_bounded,
            stage_torsion_bounded: true,
            lim1_tor_nonzero: false,
            kernel_summands: Vec::new(),
        }
    }
}

/// Tower registry plus rule toggles.
#[derive(Clone, Debug, Default)]
pub struct Engine {
    towers: BTreeMap<String, TowerFacts>,
    disabled: BTreeSet<RuleId>,
}

pub const THEOREM1_TOWER: &str = "theorem1";

impl Engine {
    pub fn new() -> Self {
        Engine::default()
    }

    pub fn register_tower(&mut self, name: &str, facts: TowerFacts) -> Result<()> {
        if name.is_empty() {
            return Err(Error::Config("tower names must be nonempty".into()));
        }
        self.towers.insert(name.to_string(), facts);
        Ok(())
    }

    /// A tower about which nothing is known.
    pub fn declare_abstract(&mut self, name: &str) -> Result<()> {
        self.register_tower(name, TowerFacts::default())
    }

    pub fn facts(&self, name: &str) -> Option<&TowerFacts> {
        self.towers.get(name)
    }

    pub fn disable(&mut self, rule: RuleId) {
        self.disabled.insert(rule);
    }

    pub fn enable(&mut self, rule: RuleId) {
        self.disabled.remove(&rule);
    }

    pub fn is_enabled(&self, rule: RuleId) -> bool {
        !self.disabled.contains(&rule)
    }

    /// The untruncated construction `Aᵢ = (⊕_p A′ᵢ,ₚ) ⊕ B` over all primes,
    /// under [`THEOREM1_TOWER`], with its `A′` part under `theorem1.A'`.
    ///
    /// Its comparison kernel for `H₂` has the tensor block
    /// `⊕_p Ker[(lim A′ᵢ) ⊗ ℤ/p → lim(A′ᵢ ⊗ ℤ/p)]` as a direct summand.
    pub fn register_theorem1_symbolic(&mut self) {
        self.register_theorem1(THEOREM1_TOWER, IndexSet::AllPrimes, false);
    }

    /// The construction truncated to the finite prime set `primes` and
    /// finitely many torsion generators, so the tower is eventually constant.
    pub fn register_theorem1_truncated(&mut self, name: &str, primes: &[u64]) {
        self.register_theorem1(name, IndexSet::Finite(primes.len()), true);
    }

    fn register_theorem1(&mut self, name: &str, index: IndexSet, truncated: bool) {
        let a_prime = format!("{name}.A'");
        self.towers.insert(
            a_prime.clone(),
            TowerFacts {
                surjective: true,
                eventually_constant: truncated,
                stages_bounded: None,
                stage_torsion_bounded: true,
                lim1_tor_nonzero: !truncated,
                kernel_summands: Vec::new(),
            },
        );
        let block = GroupTerm::SumFamily {
            body: Box::new(GroupTerm::KerComparison(SymFunctor::TensorIndex, TowerRef::Named(a_prime))),
            index,
        };
        self.towers.insert(
            name.to_string(),
            TowerFacts {
                surjective: true,
                eventually_constant: truncated,
                stages_bounded: None,
                stage_torsion_bounded: true,
                lim1_tor_nonzero: false,
                kernel_summands: vec![(SymFunctor::Tag(FunctorTag::Homology(2)), block)],
            },
        );
    }

    /// Resolves every tower name in `t`.
    pub fn check_refs(&self, t: &GroupTerm) -> Result<()> {
        let mut names = Vec::new();
        t.tower_names(&mut names);
        match names.into_iter().find(|n| !self.towers.contains_key(*n)) {
            Some(n) => Err(Error::UnresolvedTowerRef(n.to_string())),
            None => Ok(()),
        }
    }

    pub(crate) fn tower(&self, name: &str) -> &TowerFacts {
        &self.towers[name]
    }
}

/// Exponent information behind an `R2` certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Bound {
    Exponent(BigInt),
    /// Bounded by the family index `p`.
    Index,
    /// Bounded, exponent not tracked.
    Finite,
}

fn combine_finite(b: Bound) -> Bound {
    match b {
        Bound::Exponent(n) => Bound::Exponent(n),
        _ => Bound::Finite,
    }
}

fn functor_preserves_surjections(f: &SymFunctor) -> bool {
    matches!(
        f,
        SymFunctor::Tag(FunctorTag::TensorWith(_) | FunctorTag::Lambda(_))
            | SymFunctor::Tag(FunctorTag::Homology(0..=2))
            | SymFunctor::TensorIndex
    )
}

fn torsion_exponent(cf: &CanonicalForm) -> BigInt {
    cf.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
}

impl Engine {
    /// Uniform exponent bound for all stages of a tower.
    fn tower_bound(&self, t: &TowerRef) -> Option<Bound> {
        match t {
            TowerRef::Named(n) => self.tower(n).stages_bounded.clone().map(Bound::Exponent),
            TowerRef::Applied(f, base) => match f {
                SymFunctor::TensorIndex | SymFunctor::TorIndex => Some(Bound::Index),
                SymFunctor::Tag(FunctorTag::TorWith(b)) => Some(Bound::Exponent(torsion_exponent(b))),
                SymFunctor::Tag(FunctorTag::TensorWith(b)) if b.is_finite() => {
                    Some(Bound::Exponent(torsion_exponent(b)))
                }
                SymFunctor::Tag(FunctorTag::TensorWith(_)) | SymFunctor::TorSelf => self.tower_bound(base),
                _ => None,
            },
            TowerRef::Phi(..) => None,
        }
    }

    /// Whether each single stage is bounded (not necessarily uniformly).
    fn stage_bound(&self, t: &TowerRef) -> Option<Bound> {
        if let Some(b) = self.tower_bound(t) {
            return Some(b);
        }
        match t {
            TowerRef::Applied(SymFunctor::TorSelf, base) if self.torsion_bounded(base) => Some(Bound::Finite),
            _ => None,
        }
    }

    fn torsion_bounded(&self, t: &TowerRef) -> bool {
        match t {
            TowerRef::Named(n) => self.tower(n).stage_torsion_bounded,
            _ => self.tower_bound(t).is_some(),
        }
    }

    fn eventually_constant(&self, t: &TowerRef) -> bool {
        match t {
            TowerRef::Named(n) => self.tower(n).eventually_constant,
            TowerRef::Applied(_, base) => self.eventually_constant(base),
            TowerRef::Phi(..) => false,
        }
    }

    pub(crate) fn surjective(&self, t: &TowerRef) -> bool {
        match t {
            TowerRef::Named(n) => self.tower(n).surjective,
            TowerRef::Applied(f, base) => functor_preserves_surjections(f) && self.surjective(base),
            TowerRef::Phi(..) => false,
        }
    }

    /// The `R2` certificate, if `t` has bounded exponent by construction.
    pub(crate) fn bounded(&self, t: &GroupTerm) -> Option<Bound> {
        match t {
            GroupTerm::BoundedTorsion(n) => Some(Bound::Exponent(n.clone())),
            GroupTerm::FG(cf) if cf.free_rank == 0 => Some(Bound::Exponent(torsion_exponent(cf))),
            GroupTerm::SumFamily { body, index } => match (self.bounded(body)?, index) {
                (Bound::Index, IndexSet::Finite(_)) => Some(Bound::Finite),
                (b, IndexSet::Finite(_)) => Some(combine_finite(b)),
                (Bound::Exponent(n), _) => Some(Bound::Exponent(n)),
                _ => None,
            },
            GroupTerm::Stage(tr) => self.stage_bound(tr),
            GroupTerm::Lim(tr) | GroupTerm::Lim1(tr) => self.tower_bound(tr),
            GroupTerm::KerComparison(_, tr) | GroupTerm::CokerComparison(_, tr) if self.eventually_constant(tr) => {
                Some(Bound::Exponent(BigInt::one()))
            }
            _ => None,
        }
    }

    /// Whether `t` carries the `R2` certificate and the leaf `R7`
    /// certificate, in that order. At most one of them ever holds.
    pub fn leaf_certificates(&self, t: &GroupTerm) -> (bool, bool) {
        (self.bounded(t).is_some(), self.reduced_unbounded(t))
    }

    /// The leaf `R7` certificate: reduced torsion of unbounded exponent.
    pub(crate) fn reduced_unbounded(&self, t: &GroupTerm) -> bool {
        match t {
            GroupTerm::ReducedUnboundedTorsion(_) => true,
            GroupTerm::SumFamily { body, index } => {
                **body == GroupTerm::IndexCyclic && *index == IndexSet::AllPrimes
            }
            _ => false,
        }
    }

    /// The `R7a` certificate.
    pub(crate) fn lim1_tor_certificate(&self, t: &GroupTerm) -> bool {
        match t {
            GroupTerm::Lim1(TowerRef::Applied(SymFunctor::TorIndex, base)) => match base.as_ref() {
                TowerRef::Named(n) => self.tower(n).lim1_tor_nonzero,
                _ => false,
            },
            _ => false,
        }
    }

    pub(crate) fn ledger_summands<'a>(&'a self, f: &SymFunctor, t: &TowerRef) -> Vec<&'a GroupTerm> {
        match t {
            TowerRef::Named(n) => self
                .tower(n)
                .kernel_summands
                .iter()
                .filter(|(g, _)| g == f)
                .map(|(_, s)| s)
                .collect(),
            _ => Vec::new(),
        }
    }
}

fn is_prime_cyclic(cf: &CanonicalForm) -> bool {
    cf.free_rank == 0
        && cf.invariant_factors.len() == 1
        && u64::try_from(&cf.invariant_factors[0])
            .map(|p| p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0))
            .unwrap_or(false)
}

/// Rewrites `Ker[(lim Aᵢ) ⊗ ℤ/p → lim(Aᵢ ⊗ ℤ/p)]` to `lim¹ Tor(Aᵢ, ℤ/p)`.
pub fn kernel_to_lim1_rewrite(t: &GroupTerm) -> Result<GroupTerm> {
    match t {
        GroupTerm::KerComparison(SymFunctor::TensorIndex, tower) => Ok(GroupTerm::Lim1(TowerRef::Applied(
            SymFunctor::TorIndex,
            Box::new(tower.clone()),
        ))),
        GroupTerm::KerComparison(SymFunctor::Tag(FunctorTag::TensorWith(cf)), tower) if is_prime_cyclic(cf) => {
            Ok(GroupTerm::Lim1(TowerRef::Applied(
                SymFunctor::Tag(FunctorTag::TorWith(cf.clone())),
                Box::new(tower.clone()),
            )))
        }
        other => Err(Error::ShapeMismatch(format!(
            "expected ker_cmp(tensor(Z/p), T), got {other}"
        ))),
    }
}

impl GroupTerm {
    fn tower_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            GroupTerm::SumFamily { body, .. } => body.tower_names(out),
            GroupTerm::Stage(t)
            | GroupTerm::Lim(t)
            | GroupTerm::Lim1(t)
            | GroupTerm::KerComparison(_, t)
            | GroupTerm::CokerComparison(_, t) => t.tower_names(out),
            GroupTerm::QuotientOf(x) | GroupTerm::SummandOf(x) => x.tower_names(out),
            GroupTerm::RetractTimesN { ambient, .. } => ambient.tower_names(out),
            GroupTerm::Extension { sub, quot } => {
                sub.tower_names(out);
                quot.tower_names(out);
            }
            _ => {}
        }
    }
}

impl TowerRef {
    fn tower_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            TowerRef::Named(n) => out.push(n),
            TowerRef::Applied(_, t) | TowerRef::Phi(_, t) => t.tower_names(out),
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet::Finite(n) => write!(f, "{n}"),
            IndexSet::AllPrimes => write!(f, "primes"),
            IndexSet::AllNaturals => write!(f, "naturals"),
        }
    }
}

impl fmt::Display for SymFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymFunctor::Tag(t) => write!(f, "{t}"),
            SymFunctor::TensorIndex => write!(f, "tensor(Z/p)"),
            SymFunctor::TorIndex => write!(f, "tor(Z/p)"),
            SymFunctor::TorSelf => write!(f, "tor_self"),
        }
    }
}

impl fmt::Display for TowerRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerRef::Named(n) => write!(f, "{n}"),
            TowerRef::Applied(func, t) => write!(f, "apply({func}, {t})"),
            TowerRef::Phi(func, t) => write!(f, "phi({func}, {t})"),
        }
    }
}

impl fmt::Display for GroupTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTerm::FG(cf) => write!(f, "{}", cf.to_expr()),
            GroupTerm::IndexCyclic => write!(f, "Z/p"),
            GroupTerm::SumFamily { body, index } => match index {
                IndexSet::AllPrimes => write!(f, "sum_p({body})"),
                IndexSet::AllNaturals => write!(f, "sum_n({body})"),
                IndexSet::Finite(n) => write!(f, "sum({body}, {n})"),
            },
            GroupTerm::Stage(t) => write!(f, "stage({t})"),
            GroupTerm::Lim(t) => write!(f, "lim({t})"),
            GroupTerm::Lim1(t) => write!(f, "lim1({t})"),
            GroupTerm::KerComparison(func, t) => write!(f, "ker_cmp({func}, {t})"),
            GroupTerm::CokerComparison(func, t) => write!(f, "coker_cmp({func}, {t})"),
            GroupTerm::QuotientOf(x) => write!(f, "quot({x})"),
            GroupTerm::Extension { sub, quot } => write!(f, "ext({sub}, {quot})"),
            GroupTerm::SummandOf(x) => write!(f, "summand_of({x})"),
            GroupTerm::RetractTimesN { ambient, n } => write!(f, "retract({ambient}, {n})"),
            GroupTerm::BoundedTorsion(n) => write!(f, "bounded({n})"),
            GroupTerm::ReducedUnboundedTorsion(TorsionKind::Prime(p)) => write!(f, "reduced_unbounded({p})"),
            GroupTerm::ReducedUnboundedTorsion(TorsionKind::Mixed) => write!(f, "reduced_unbounded(mixed)"),
            GroupTerm::Rationals => write!(f, "Q"),
        }
    }
}
