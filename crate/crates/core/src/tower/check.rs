use rayon::prelude::*;
use serde::Serialize;

use super::{Materialized, TowerSpec, TowerWindow, DEFAULT_S_MIN};
use crate::error::Result;
use crate::group::CanonicalForm;
use crate::hom::{image, image_contains};

/// Mittag-Leffler status of a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "lag")]
pub enum MlVerdict {
    /// Every image chain is constant from `i + lag − 1` on, within the margin.
    Stabilized(usize),
    NotStabilizedWithinWindow,
    /// The window is too short for the margin.
    NotApplicable,
}

/// What is known about `lim¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "reason")]
pub enum Lim1Certificate {
    Zero(String),
    CotorsionOnly(String),
    Undetermined,
}

impl Lim1Certificate {
    pub fn is_zero(&self) -> bool {
        matches!(self, Lim1Certificate::Zero(_))
    }
}

/// `Im(Aⱼ → Aᵢ)` for `j = i..N`.
#[derive(Clone, Debug, Serialize)]
pub struct ImageChain {
    pub stage: usize,
    pub images: Vec<CanonicalForm>,
    /// Least `j` with the chain constant on `j..=N`.
    pub stable_from: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub window: usize,
    pub s_min: usize,
    pub stages: Vec<CanonicalForm>,
    pub surjective: Vec<bool>,
    pub image_chains: Vec<ImageChain>,
    pub ml_verdict: MlVerdict,
    pub window_limit: Option<CanonicalForm>,
    pub declared_limit: Option<CanonicalForm>,
    pub lim1: Lim1Certificate,
}

/// Validates the window and reports surjectivity, image chains, the
/// Mittag-Leffler verdict, the limit where one is available and a `lim¹`
/// certificate.
pub fn check_tower(spec: &TowerSpec, n: usize) -> Result<TowerReport> {
    let window = TowerWindow::new(spec, n)?;
    Ok(check_materialized(&window.tower, window.constant_from(DEFAULT_S_MIN), DEFAULT_S_MIN))
}

/// The report for an already validated tower; `constant_from` is the stage
/// from which the maps are known to be isomorphisms.
pub fn check_materialized(t: &Materialized, constant_from: Option<usize>, s_min: usize) -> TowerReport {
    let n = t.window();
    let surjective: Vec<bool> = (1..n).into_par_iter().map(|i| t.map(i).is_surjective()).collect();
    let image_chains: Vec<ImageChain> = (1..=n).into_par_iter().map(|i| image_chain(t, i)).collect();

    let ml_verdict = if n <= s_min {
        MlVerdict::NotApplicable
    } else {
        let assessed = &image_chains[..n - s_min];
        if assessed.iter().all(|c| c.stable_from <= n - s_min) {
            MlVerdict::Stabilized(assessed.iter().map(|c| c.stable_from - c.stage + 1).max().unwrap_or(1))
        } else {
            MlVerdict::NotStabilizedWithinWindow
        }
    };

    let all_finite = t.stages.iter().all(|a| a.is_finite());
    let lim1 = if surjective.iter().all(|&s| s) {
        Lim1Certificate::Zero("every map in the window is surjective".into())
    } else if matches!(ml_verdict, MlVerdict::Stabilized(_)) && all_finite {
        Lim1Certificate::Zero("images stabilize within the window and every stage is finite".into())
    } else if matches!(ml_verdict, MlVerdict::Stabilized(_)) {
        Lim1Certificate::CotorsionOnly(
            "images stabilize within the window but stages are infinite; lim1 of a tower is cotorsion".into(),
        )
    } else {
        Lim1Certificate::Undetermined
    };

    TowerReport {
        window: n,
        s_min,
        stages: t.stages.iter().map(|a| a.canonical_form().clone()).collect(),
        surjective,
        image_chains,
        ml_verdict,
        window_limit: constant_from.map(|k| t.stage(k).canonical_form().clone()),
        declared_limit: t.limit.as_ref().map(|l| l.group.canonical_form().clone()),
        lim1,
    }
}

fn image_chain(t: &Materialized, i: usize) -> ImageChain {
    let n = t.window();
    let maps: Vec<_> = (i..=n).map(|j| t.composite(j, i)).collect();
    let images = maps.iter().map(|h| image(h).0.canonical_form().clone()).collect();
    // Im(j+1) ⊆ Im(j) always; equality iff Im(j) ⊆ Im(j+1).
    let mut stable_from = n;
    for j in (i..n).rev() {
        let (a, b) = (&maps[j - i], &maps[j + 1 - i]);
        if image_contains(b, a.matrix()) {
            stable_from = j;
        } else {
            break;
        }
    }
    ImageChain {
        stage: i,
        images,
        stable_from,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Presentation;
    use crate::hom::Homomorphism;
    use crate::tower::IteratedRecipe;

    #[test]
    fn constant_z4() {
        let a = Presentation::cyclic(4);
        let spec = TowerSpec::new(IteratedRecipe::new(Homomorphism::identity(&a)).unwrap())
            .surjective(true)
            .eventually_constant_at(Some(1));
        let r = check_tower(&spec, 6).unwrap();
        assert_eq!(r.ml_verdict, MlVerdict::Stabilized(1));
        assert_eq!(r.window_limit, Some(CanonicalForm::from_factors(0, &[4])));
        assert!(r.lim1.is_zero());
    }

    #[test]
    fn times_two_never_stabilizes() {
        let z = Presentation::free(1);
        let spec = TowerSpec::new(IteratedRecipe::new(Homomorphism::multiplication(&z, 2)).unwrap());
        let r = check_tower(&spec, 10).unwrap();
        assert_eq!(r.ml_verdict, MlVerdict::NotStabilizedWithinWindow);
        assert_eq!(r.lim1, Lim1Certificate::Undetermined);
        assert!(r.image_chains.iter().all(|c| c.stable_from == 10));
    }

    #[test]
    fn false_surjectivity_claim_is_rejected() {
        let z = Presentation::free(1);
        let spec = TowerSpec::new(IteratedRecipe::new(Homomorphism::multiplication(&z, 2)).unwrap()).surjective(true);
        assert!(matches!(check_tower(&spec, 4), Err(crate::error::Error::ClaimViolation(_))));
    }
}
