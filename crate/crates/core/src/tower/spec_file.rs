//! JSON tower-spec files.
//!
//! ```json
//! {
//!   "stages": {"kind": "explicit", "list": [{"group": "Z/2"}, {"group": "Z/4", "map": [[1]]}]},
//!   "window": 6,
//!   "surjective": true,
//!   "eventually_constant_at": 2,
//!   "declared_limit": {"group": "Z/4", "projections": [[[1]], [[1]]]}
//! }
//! ```
//!
//! Stage kinds are `explicit` (a list continued by identities), `iterated`
//! (one group and one endomorphism), `recipe` (`"name": "theorem1"` with
//! `primes` and `M`) and `applied` (a functor applied to a `base` stage
//! spec). Groups are DSL strings or `{"gens": l, "relations": [[...]]}` given
//! by rows; maps are integer matrices given by rows.

use serde::Deserialize;

use super::{apply_functor, ExplicitRecipe, IteratedRecipe, Theorem1Recipe, TowerSpec};
use crate::dsl::parse_group_expr;
use crate::error::{Error, Result};
use crate::functor::FunctorTag;
use crate::group::Presentation;
use crate::hom::Homomorphism;
use crate::matrix::IntMatrix;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerFile {
    pub stages: StagesSpec,
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default)]
    pub surjective: bool,
    #[serde(default)]
    pub eventually_constant_at: Option<usize>,
    #[serde(default)]
    pub declared_limit: Option<LimitSpec>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StagesSpec {
    Explicit {
        list: Vec<StageEntry>,
    },
    Iterated {
        group: GroupSpec,
        map: Vec<Vec<i64>>,
    },
    Recipe {
        name: String,
        primes: Vec<u64>,
        #[serde(rename = "M")]
        m: usize,
    },
    Applied {
        functor: FunctorTag,
        base: Box<StagesSpec>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageEntry {
    pub group: GroupSpec,
    /// Map from this stage to the previous one; absent on the first entry.
    #[serde(default)]
    pub map: Option<Vec<Vec<i64>>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Expr(String),
    Relations { gens: usize, relations: Vec<Vec<i64>> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitSpec {
    pub group: GroupSpec,
    /// One matrix per listed stage; the last one repeats.
    pub projections: Vec<Vec<Vec<i64>>>,
}

fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl GroupSpec {
    fn build(&self) -> Result<Presentation> {
        match self {
            GroupSpec::Expr(e) => parse_group_expr(e),
            GroupSpec::Relations { gens, relations } => {
                let m = if relations.is_empty() {
                    IntMatrix::zeros(*gens, 0)
                } else {
                    IntMatrix::from_rows(relations)?
                };
                if m.rows() != *gens {
                    return Err(config(format!("{} relation rows for {gens} generators", m.rows())));
                }
                Presentation::new(*gens, m)
            }
        }
    }
}

fn matrix(rows: &[Vec<i64>], target: &Presentation, source: &Presentation) -> Result<IntMatrix> {
    if rows.is_empty() {
        return Ok(IntMatrix::zeros(target.gens(), source.gens()));
    }
    IntMatrix::from_rows(rows)
}

fn hom(rows: &[Vec<i64>], source: &Presentation, target: &Presentation) -> Result<Homomorphism> {
    Homomorphism::new(source.clone(), target.clone(), matrix(rows, target, source)?)
}

impl StagesSpec {
    fn build(&self, limit: Option<&LimitSpec>) -> Result<TowerSpec> {
        match self {
            StagesSpec::Explicit { list } => {
                if list.is_empty() {
                    return Err(config("the stage list is empty"));
                }
                let stages: Vec<Presentation> = list.iter().map(|e| e.group.build()).collect::<Result<_>>()?;
                let maps = list
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, e)| {
                        let rows = e.map.as_ref().ok_or_else(|| config(format!("stage {} has no map", i + 1)))?;
                        hom(rows, &stages[i], &stages[i - 1])
                    })
                    .collect::<Result<_>>()?;
                let mut recipe = ExplicitRecipe::new(stages.clone(), maps)?;
                if let Some(l) = limit {
                    let group = l.group.build()?;
                    if l.projections.len() != stages.len() {
                        return Err(config("declared_limit needs one projection per listed stage"));
                    }
                    let projections = l
                        .projections
                        .iter()
                        .zip(&stages)
                        .map(|(rows, s)| hom(rows, &group, s))
                        .collect::<Result<_>>()?;
                    recipe = recipe.with_limit(group, projections)?;
                }
                Ok(TowerSpec::new(recipe))
            }
            StagesSpec::Iterated { group, map } => {
                let a = group.build()?;
                let mut recipe = IteratedRecipe::new(hom(map, &a, &a)?)?;
                if let Some(l) = limit {
                    let group = l.group.build()?;
                    let [rows] = l.projections.as_slice() else {
                        return Err(config("an iterated tower takes exactly one projection"));
                    };
                    recipe = recipe.with_limit(hom(rows, &group, &a)?);
                }
                Ok(TowerSpec::new(recipe))
            }
            StagesSpec::Recipe { name, primes, m } => {
                if name != "theorem1" {
                    return Err(config(format!("unknown recipe `{name}`")));
                }
                if limit.is_some() {
                    return Err(config("the theorem1 recipe has no finitely presented limit"));
                }
                Ok(TowerSpec::new(Theorem1Recipe::new(primes.clone(), *m)?))
            }
            StagesSpec::Applied { functor, base } => {
                let base = base.build(limit)?;
                apply_functor(&base, functor)
            }
        }
    }
}

impl TowerFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config(format!("tower spec: {e}")))
    }

    pub fn to_spec(&self) -> Result<TowerSpec> {
        let spec = self.stages.build(self.declared_limit.as_ref())?;
        let surjective = self.surjective || spec.surjective_claimed;
        let constant = self.eventually_constant_at.or(spec.eventually_constant_at);
        Ok(spec.surjective(surjective).eventually_constant_at(constant))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{check_tower, MlVerdict};

    #[test]
    fn times_two_file() {
        let f = TowerFile::parse(r#"{"stages": {"kind": "iterated", "group": "Z", "map": [[2]]}, "window": 10}"#)
            .unwrap();
        let r = check_tower(&f.to_spec().unwrap(), f.window.unwrap()).unwrap();
        assert_eq!(r.ml_verdict, MlVerdict::NotStabilizedWithinWindow);
    }

    #[test]
    fn explicit_with_limit() {
        let f = TowerFile::parse(
            r#"{"stages": {"kind": "explicit", "list": [{"group": "Z/2"}, {"group": "Z/4", "map": [[1]]}]},
                "surjective": true, "eventually_constant_at": 2,
                "declared_limit": {"group": "Z/4", "projections": [[[1]], [[1]]]}}"#,
        )
        .unwrap();
        let r = check_tower(&f.to_spec().unwrap(), 6).unwrap();
        assert!(r.lim1.is_zero());
        assert_eq!(r.window_limit.unwrap().to_expr(), "Z/4");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(TowerFile::parse(r#"{"stages": {"kind": "iterated", "group": "Z", "map": [[1]]}, "windw": 3}"#).is_err());
    }
}
