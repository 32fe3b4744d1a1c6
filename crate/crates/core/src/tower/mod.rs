//! Towers `A₁ ← A₂ ← A₃ ← …` of finitely generated abelian groups, evaluated
//! on finite windows.
//!
//! A [`TowerSpec`] is a recipe for the stages and bonding maps plus claims
//! about them. [`TowerWindow::new`] materializes stages `1..=N` and checks
//! every claim on that range; nothing is trusted across windows.

mod check;
mod compare;
pub mod random;
pub mod spec_file;
mod theorem1;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functor::{FObject, FunctorTag};
use crate::group::Presentation;
use crate::hom::Homomorphism;

pub use check::{check_materialized, check_tower, ImageChain, Lim1Certificate, MlVerdict, TowerReport};
pub use compare::{
    comparison_map, product_retract_check, statement2_check, statement4_check, theorem2_check, theorem3_check,
    ComparisonReport, InjectivityVerdict, ProductRetractReport, StageRecord, Theorem2Report, Theorem3Report,
};
pub use theorem1::{
    kunneth_split_check, theorem1_construction, theorem1_tor_identities, KunnethSplitReport, Theorem1Recipe,
    TorIdentity,
};

/// Default stability margin for Mittag-Leffler detection.
pub const DEFAULT_S_MIN: usize = 3;

/// Stages `1..=N`, maps `fᵢ : Aᵢ₊₁ → Aᵢ` for `i < N`, and the declared limit
/// with its projections when the recipe has one.
#[derive(Clone, Debug)]
pub struct Materialized {
    pub stages: Vec<Presentation>,
    pub maps: Vec<Homomorphism>,
    pub limit: Option<LimitData>,
}

#[derive(Clone, Debug)]
pub struct LimitData {
    pub group: Presentation,
    pub projections: Vec<Homomorphism>,
}

impl Materialized {
    pub fn window(&self) -> usize {
        self.stages.len()
    }

    /// Stage `i` (1-based).
    pub fn stage(&self, i: usize) -> &Presentation {
        &self.stages[i - 1]
    }

    /// `fᵢ : Aᵢ₊₁ → Aᵢ` (1-based).
    pub fn map(&self, i: usize) -> &Homomorphism {
        &self.maps[i - 1]
    }

    /// `Aⱼ → Aᵢ` for `j ≥ i`.
    pub fn composite(&self, j: usize, i: usize) -> Homomorphism {
        let mut h = Homomorphism::identity(self.stage(j));
        for k in (i..j).rev() {
            h = self.map(k).compose(&h).expect("consecutive stages match");
        }
        h
    }
}

/// How to produce the first `N` stages of a tower.
pub trait TowerRecipe: Send + Sync + fmt::Debug {
    fn describe(&self) -> String;
    fn materialize(&self, n: usize) -> Result<Materialized>;
}

/// A tower recipe together with the claims it makes.
#[derive(Clone, Debug)]
pub struct TowerSpec {
    pub recipe: Arc<dyn TowerRecipe>,
    pub surjective_claimed: bool,
    pub eventually_constant_at: Option<usize>,
}

impl TowerSpec {
    pub fn new(recipe: impl TowerRecipe + 'static) -> Self {
        TowerSpec {
            recipe: Arc::new(recipe),
            surjective_claimed: false,
            eventually_constant_at: None,
        }
    }

    pub fn surjective(mut self, claimed: bool) -> Self {
        self.surjective_claimed = claimed;
        self
    }

    pub fn eventually_constant_at(mut self, k: Option<usize>) -> Self {
        self.eventually_constant_at = k;
        self
    }
}

/// A list of stages and maps, continued by identities past its end.
#[derive(Clone, Debug)]
pub struct ExplicitRecipe {
    pub stages: Vec<Presentation>,
    pub maps: Vec<Homomorphism>,
    pub limit: Option<LimitData>,
}

impl ExplicitRecipe {
    pub fn new(stages: Vec<Presentation>, maps: Vec<Homomorphism>) -> Result<Self> {
        if stages.is_empty() || maps.len() + 1 != stages.len() {
            return Err(Error::Config(format!(
                "{} stages need {} maps, got {}",
                stages.len(),
                stages.len().saturating_sub(1),
                maps.len()
            )));
        }
        for (i, f) in maps.iter().enumerate() {
            if !f.source().same_as(&stages[i + 1]) || !f.target().same_as(&stages[i]) {
                return Err(Error::DimensionMismatch(format!(
                    "map {} does not go from stage {} to stage {}",
                    i + 1,
                    i + 2,
                    i + 1
                )));
            }
        }
        Ok(ExplicitRecipe {
            stages,
            maps,
            limit: None,
        })
    }

    /// Declares a limit; projections past the list repeat the last one.
    pub fn with_limit(mut self, group: Presentation, projections: Vec<Homomorphism>) -> Result<Self> {
        if projections.len() != self.stages.len() {
            return Err(Error::Config("one projection per listed stage is required".into()));
        }
        self.limit = Some(LimitData { group, projections });
        Ok(self)
    }
}

impl TowerRecipe for ExplicitRecipe {
    fn describe(&self) -> String {
        format!("explicit tower with {} listed stages", self.stages.len())
    }

    fn materialize(&self, n: usize) -> Result<Materialized> {
        let last = self.stages.len() - 1;
        let stages = (0..n).map(|i| self.stages[i.min(last)].clone()).collect();
        let maps = (0..n.saturating_sub(1))
            .map(|i| {
                self.maps
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| Homomorphism::identity(&self.stages[last]))
            })
            .collect();
        let limit = self.limit.as_ref().map(|l| LimitData {
            group: l.group.clone(),
            projections: (0..n).map(|i| l.projections[i.min(last)].clone()).collect(),
        });
        Ok(Materialized { stages, maps, limit })
    }
}

/// The constant stage `A` with the same endomorphism `f` at every step.
#[derive(Clone, Debug)]
pub struct IteratedRecipe {
    pub stage: Presentation,
    pub map: Homomorphism,
    pub limit: Option<(Presentation, Homomorphism)>,
}

impl IteratedRecipe {
    pub fn new(map: Homomorphism) -> Result<Self> {
        if !map.source().same_as(map.target()) {
            return Err(Error::DimensionMismatch("an iterated tower needs an endomorphism".into()));
        }
        Ok(IteratedRecipe {
            stage: map.source().clone(),
            map,
            limit: None,
        })
    }

    pub fn with_limit(mut self, projection: Homomorphism) -> Self {
        self.limit = Some((projection.source().clone(), projection));
        self
    }
}

impl TowerRecipe for IteratedRecipe {
    fn describe(&self) -> String {
        format!("iterated endomorphism {} of {}", self.map.matrix(), self.stage.canonical_form())
    }

    fn materialize(&self, n: usize) -> Result<Materialized> {
        Ok(Materialized {
            stages: vec![self.stage.clone(); n],
            maps: vec![self.map.clone(); n.saturating_sub(1)],
            limit: self.limit.as_ref().map(|(g, p)| LimitData {
                group: g.clone(),
                projections: vec![p.clone(); n],
            }),
        })
    }
}

/// `F` applied stagewise; one functor model serves the whole window.
#[derive(Clone, Debug)]
pub struct AppliedRecipe {
    pub base: TowerSpec,
    pub functor: FunctorTag,
}

impl TowerRecipe for AppliedRecipe {
    fn describe(&self) -> String {
        format!("{} of ({})", self.functor, self.base.recipe.describe())
    }

    fn materialize(&self, n: usize) -> Result<Materialized> {
        let base = self.base.recipe.materialize(n)?;
        apply_to_materialized(&base, &self.functor).map(|a| a.tower)
    }
}

/// A materialized tower after applying `F`, with the functor objects kept
/// for further induced maps.
pub(crate) struct AppliedTower {
    pub tower: Materialized,
}

pub(crate) fn apply_to_materialized(base: &Materialized, functor: &FunctorTag) -> Result<AppliedTower> {
    let mut family: Vec<&Presentation> = base.stages.iter().collect();
    if let Some(l) = &base.limit {
        family.push(&l.group);
    }
    let model = functor.model_for(&family)?;
    let objects: Vec<FObject> = base
        .stages
        .par_iter()
        .map(|a| model.object(a))
        .collect::<Result<_>>()?;
    let maps: Vec<Homomorphism> = base
        .maps
        .par_iter()
        .enumerate()
        .map(|(i, f)| model.induced(f, &objects[i + 1], &objects[i]))
        .collect::<Result<_>>()?;
    let limit = match &base.limit {
        Some(l) => {
            let lo = model.object(&l.group)?;
            let projections = l
                .projections
                .par_iter()
                .enumerate()
                .map(|(i, p)| model.induced(p, &lo, &objects[i]))
                .collect::<Result<_>>()?;
            Some(LimitData {
                group: lo.group,
                projections,
            })
        }
        None => None,
    };
    Ok(AppliedTower {
        tower: Materialized {
            stages: objects.into_iter().map(|o| o.group).collect(),
            maps,
            limit,
        },
    })
}

/// `F` applied to a tower: stages `F(Aᵢ)`, maps `F(fᵢ)`, and the declared
/// limit carried to `(F(L), F(πᵢ))`.
///
/// Isomorphisms stay isomorphisms, so an eventually-constant claim carries
/// over; surjectivity is only claimed for right-exact functors.
pub fn apply_functor(spec: &TowerSpec, functor: &FunctorTag) -> Result<TowerSpec> {
    functor.validate()?;
    Ok(TowerSpec {
        recipe: Arc::new(AppliedRecipe {
            base: spec.clone(),
            functor: functor.clone(),
        }),
        surjective_claimed: spec.surjective_claimed && functor.is_right_exact(),
        eventually_constant_at: spec.eventually_constant_at,
    })
}

/// A tower materialized on stages `1..=N` with every claim verified there.
#[derive(Clone, Debug)]
pub struct TowerWindow {
    pub spec: TowerSpec,
    pub tower: Materialized,
}

impl TowerWindow {
    /// Materializes and validates the window.
    ///
    /// Fails with [`Error::ClaimViolation`] when a surjectivity or
    /// eventual-constancy claim is contradicted, and with
    /// [`Error::LimitNotValidated`] when `πᵢ ≠ fᵢ ∘ πᵢ₊₁` somewhere.
    pub fn new(spec: &TowerSpec, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config("a tower window needs at least two stages".into()));
        }
        let tower = spec.recipe.materialize(n)?;
        let window = TowerWindow {
            spec: spec.clone(),
            tower,
        };
        window.validate()?;
        Ok(window)
    }

    fn validate(&self) -> Result<()> {
        let t = &self.tower;
        let n = t.window();
        let checks: Vec<Result<()>> = (1..n)
            .into_par_iter()
            .map(|i| {
                let f = t.map(i);
                if self.spec.surjective_claimed && !f.is_surjective() {
                    return Err(Error::ClaimViolation(format!("map {i} is not surjective")));
                }
                if let Some(k) = self.spec.eventually_constant_at {
                    if i >= k && !f.is_isomorphism() {
                        return Err(Error::ClaimViolation(format!(
                            "map {i} is not an isomorphism although the tower is claimed constant from stage {k}"
                        )));
                    }
                }
                if let Some(l) = &t.limit {
                    let composed = f.compose(&l.projections[i])?;
                    if !composed.equals(&l.projections[i - 1]) {
                        return Err(Error::LimitNotValidated(format!(
                            "projection {i} differs from f_{i} composed with projection {}",
                            i + 1
                        )));
                    }
                }
                Ok(())
            })
            .collect();
        checks.into_iter().collect()
    }

    pub fn window(&self) -> usize {
        self.tower.window()
    }

    pub fn limit(&self) -> Option<&LimitData> {
        self.tower.limit.as_ref()
    }

    /// Whether the window is constant from some stage `k ≤ N − s_min` on.
    pub fn constant_from(&self, s_min: usize) -> Option<usize> {
        self.spec
            .eventually_constant_at
            .filter(|&k| k + s_min <= self.window())
    }
}
