//! Functors on finitely generated abelian groups and their induced maps.
//!
//! Object-level constructions ([`tensor`], [`tor`], [`lambda`],
//! [`l1lambda2`], [`homology`]) accept any presentation. Induced maps come
//! through a [`Model`], chosen once for a whole family of groups so that all
//! objects and maps in, say, a tower share the same construction:
//!
//! * homology in degrees `≤ 2`, and in every degree on torsion-free groups,
//!   is computed as `Λⁿ`, which is natural for all maps;
//! * otherwise homology and `L₁Λ²` use the chain-level cyclic model, which
//!   induces maps only for blockwise maps of cyclic decompositions.

pub mod cyclic;
pub mod exterior;
pub mod homology;
pub mod tensor;
pub mod tor;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dsl::parse_group_expr;
use crate::error::{Error, Result};
use crate::group::{CanonicalForm, Presentation};
use crate::hom::Homomorphism;

pub use cyclic::{CyclicHomology, CyclicL1Lambda2};
pub use exterior::{h2_group, lambda, lambda_induced};
pub use homology::{
    breen_check, homology, homology_forms, l1lambda2, l1lambda2_form, odd_summand_check, tensor_form,
    tor_form, BreenReport, GradedGroup, OddSummandReport,
};
pub use tensor::{tensor, tensor_induced};
pub use tor::{tor, tor_group, tor_induced, tor_induced_right, TorGroup};

/// A functor `Ab → Ab` the workbench can evaluate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctorTag {
    TensorWith(CanonicalForm),
    TorWith(CanonicalForm),
    Lambda(usize),
    L1Lambda2,
    Homology(usize),
}

/// A construction of a functor fixed for a family of groups.
#[derive(Clone, Debug)]
pub enum Model {
    Tensor(Presentation),
    Tor(Presentation),
    /// `Λⁿ`; also `Hₙ` when `n ≤ 2` or the groups are torsion-free.
    Exterior(usize),
    CyclicHomology(u32),
    CyclicL1Lambda2,
    /// The zero functor on the family (`L₁Λ²` of torsion-free groups).
    Zero,
}

/// `F(A)` together with whatever the model needs to induce maps.
#[derive(Clone, Debug)]
pub struct FObject {
    pub group: Presentation,
    data: ObjectData,
}

#[derive(Clone, Debug)]
enum ObjectData {
    Plain,
    Tor(TorGroup),
    Cyclic(CyclicHomology),
    L1(CyclicL1Lambda2),
}

impl FunctorTag {
    pub fn validate(&self) -> Result<()> {
        match self {
            FunctorTag::Lambda(0) => Err(Error::Config("lambda needs n >= 1".into())),
            _ => Ok(()),
        }
    }

    /// Picks the model used for every group in `family`.
    pub fn model_for(&self, family: &[&Presentation]) -> Result<Model> {
        self.validate()?;
        let torsion_free = family.iter().all(|a| a.is_torsion_free());
        Ok(match self {
            FunctorTag::TensorWith(b) => Model::Tensor(Presentation::from_canonical(b)),
            FunctorTag::TorWith(b) => Model::Tor(Presentation::from_canonical(b)),
            FunctorTag::Lambda(n) => Model::Exterior(*n),
            FunctorTag::Homology(n) if *n <= 2 || torsion_free => Model::Exterior(*n),
            FunctorTag::Homology(n) => Model::CyclicHomology(*n as u32),
            FunctorTag::L1Lambda2 if torsion_free => Model::Zero,
            FunctorTag::L1Lambda2 => Model::CyclicL1Lambda2,
        })
    }

    /// `F(A)`.
    pub fn apply(&self, a: &Presentation) -> Result<Presentation> {
        Ok(self.model_for(&[a])?.object(a)?.group)
    }

    /// `F(f)`, with source and target built by the model chosen for the pair.
    pub fn induced(&self, f: &Homomorphism) -> Result<Homomorphism> {
        let model = self.model_for(&[f.source(), f.target()])?;
        let s = model.object(f.source())?;
        let t = model.object(f.target())?;
        model.induced(f, &s, &t)
    }

    /// Whether `F` is right exact, so that surjections go to surjections.
    pub fn is_right_exact(&self) -> bool {
        matches!(self, FunctorTag::TensorWith(_) | FunctorTag::Lambda(_))
    }
}

impl Model {
    pub fn object(&self, a: &Presentation) -> Result<FObject> {
        let plain = |group| FObject {
            group,
            data: ObjectData::Plain,
        };
        Ok(match self {
            Model::Tensor(b) => plain(tensor(a, b)),
            Model::Tor(b) => {
                let t = tor_group(a, b);
                FObject {
                    group: t.group.clone(),
                    data: ObjectData::Tor(t),
                }
            }
            Model::Exterior(n) => plain(if *n == 1 { a.clone() } else { lambda(*n, a) }),
            Model::CyclicHomology(n) => {
                let h = CyclicHomology::of(a, *n);
                FObject {
                    group: h.group.clone(),
                    data: ObjectData::Cyclic(h),
                }
            }
            Model::CyclicL1Lambda2 => {
                let l = CyclicL1Lambda2::of(a)?;
                FObject {
                    group: l.group.clone(),
                    data: ObjectData::L1(l),
                }
            }
            Model::Zero => plain(Presentation::trivial()),
        })
    }

    pub fn induced(&self, f: &Homomorphism, s: &FObject, t: &FObject) -> Result<Homomorphism> {
        match (self, &s.data, &t.data) {
            (Model::Tensor(b), _, _) => Ok(tensor::tensor_induced_between(
                f,
                &Homomorphism::identity(b),
                &s.group,
                &t.group,
            )),
            (Model::Tor(_), ObjectData::Tor(ts), ObjectData::Tor(tt)) => Ok(tor::tor_induced_between(f, ts, tt)),
            (Model::Exterior(1), _, _) => Ok(f.clone()),
            (Model::Exterior(n), _, _) => Ok(exterior::lambda_induced_between(*n, f, &s.group, &t.group)),
            (Model::CyclicHomology(_), ObjectData::Cyclic(hs), ObjectData::Cyclic(ht)) => {
                cyclic::homology_induced(f, hs, ht)
            }
            (Model::CyclicL1Lambda2, ObjectData::L1(ls), ObjectData::L1(lt)) => CyclicL1Lambda2::induced(f, ls, lt),
            (Model::Zero, _, _) => Ok(Homomorphism::zero(&s.group, &t.group)),
            _ => Err(Error::UnsupportedInducedMap(
                "objects were built by a different model".into(),
            )),
        }
    }
}

impl fmt::Display for FunctorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorTag::TensorWith(b) => write!(f, "tensor({b})"),
            FunctorTag::TorWith(b) => write!(f, "tor({b})"),
            FunctorTag::Lambda(n) => write!(f, "lambda({n})"),
            FunctorTag::L1Lambda2 => write!(f, "l1lambda2"),
            FunctorTag::Homology(n) => write!(f, "homology({n})"),
        }
    }
}

/// Parses the [`Display`](fmt::Display) syntax, e.g. `tensor(Z/2)` or `homology(3)`.
impl std::str::FromStr for FunctorTag {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::Parse {
            column: 1,
            message: format!("expected tensor(G), tor(G), lambda(n), homology(n) or l1lambda2, got `{text}`"),
        };
        if text == "l1lambda2" {
            return Ok(FunctorTag::L1Lambda2);
        }
        let (name, arg) = text
            .strip_suffix(')')
            .and_then(|t| t.split_once('('))
            .ok_or_else(bad)?;
        let tag = match name.trim() {
            "tensor" => FunctorTag::TensorWith(parse_group_expr(arg)?.canonical_form().clone()),
            "tor" => FunctorTag::TorWith(parse_group_expr(arg)?.canonical_form().clone()),
            "lambda" => FunctorTag::Lambda(arg.trim().parse().map_err(|_| bad())?),
            "homology" => FunctorTag::Homology(arg.trim().parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        tag.validate()?;
        Ok(tag)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTag {
    functor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    with: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
}

impl Serialize for FunctorTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (functor, with, n) = match self {
            FunctorTag::TensorWith(b) => ("tensor", Some(b.to_expr()), None),
            FunctorTag::TorWith(b) => ("tor", Some(b.to_expr()), None),
            FunctorTag::Lambda(n) => ("lambda", None, Some(*n)),
            FunctorTag::L1Lambda2 => ("l1lambda2", None, None),
            FunctorTag::Homology(n) => ("homology", None, Some(*n)),
        };
        RawTag {
            functor: functor.into(),
            with,
            n,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FunctorTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawTag::deserialize(d)?;
        let group = |w: Option<String>| -> std::result::Result<CanonicalForm, D::Error> {
            let w = w.ok_or_else(|| D::Error::custom(format!("`{}` needs a `with` group", raw.functor)))?;
            parse_group_expr(&w)
                .map(|p| p.canonical_form().clone())
                .map_err(D::Error::custom)
        };
        let degree = |n: Option<usize>| n.ok_or_else(|| D::Error::custom(format!("`{}` needs `n`", raw.functor)));
        let tag = match raw.functor.as_str() {
            "tensor" => FunctorTag::TensorWith(group(raw.with.clone())?),
            "tor" => FunctorTag::TorWith(group(raw.with.clone())?),
            "lambda" => FunctorTag::Lambda(degree(raw.n)?),
            "homology" => FunctorTag::Homology(degree(raw.n)?),
            "l1lambda2" => FunctorTag::L1Lambda2,
            other => return Err(D::Error::custom(format!("unknown functor `{other}`"))),
        };
        tag.validate().map_err(D::Error::custom)?;
        Ok(tag)
    }
}
