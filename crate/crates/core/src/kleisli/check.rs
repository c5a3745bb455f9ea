use num_traits::Zero;
use serde::Serialize;

use super::Morphism;
use crate::algebra::{SparseVec, Q};
use crate::exec::Exec;
use crate::pcs::{clique_membership, dual_sup, PolarPolytope};
use crate::{rng, Error, Result};

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum MorphismVerdict {
    /// No probed clique was mapped outside the codomain. Not a proof.
    PassedSampled { points: usize },
    Violated { point: SparseVec, image: SparseVec },
}

impl MorphismVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, MorphismVerdict::PassedSampled { .. })
    }
}

/// Probe `f` on every generator of its domain, every extreme basis clique
/// `λ_a·e_a`, and `trials` random convex combinations of generators.
pub fn is_morphism(f: &Morphism, trials: usize, seed: u64) -> Result<MorphismVerdict> {
    is_morphism_with(Exec::default(), f, trials, seed)
}

pub fn is_morphism_with(exec: Exec, f: &Morphism, trials: usize, seed: u64) -> Result<MorphismVerdict> {
    let Some(gens) = f.dom().generators()? else {
        return Err(Error::Capability(format!("cliques of {} cannot be enumerated", f.dom())));
    };
    let web = f.dom().web()?;
    let polar = PolarPolytope::new(web.clone(), gens.clone())?;
    let mut points = gens.clone();
    for a in web.elements() {
        let e = SparseVec::basis(web.clone(), a)?;
        match dual_sup(&e, &polar) {
            Ok(n) => points.push(e.scale(&n.recip())),
            Err(Error::Unbounded(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if !gens.is_empty() {
        let random = exec.map_range(trials, |t| {
            let mut r = rng::stream(seed, t as u64);
            let weights: Vec<Q> = gens.iter().map(|_| rng::unit_rational(&mut r, 16)).collect();
            let total: Q = weights.iter().sum();
            let mut x = SparseVec::zeros(web.clone());
            if !total.is_zero() {
                for (g, w) in gens.iter().zip(&weights) {
                    x = x.add(&g.scale(&(w / &total)))?;
                }
            }
            Ok(x)
        });
        for x in random {
            points.push(x?);
        }
    }
    let outcomes = exec.map(&points, |x| -> Result<Option<SparseVec>> {
        let image = f.apply(x)?;
        Ok((!clique_membership(&image, f.cod())?).then_some(image))
    });
    for (x, out) in points.iter().zip(outcomes) {
        if let Some(image) = out? {
            return Ok(MorphismVerdict::Violated { point: x.clone(), image });
        }
    }
    Ok(MorphismVerdict::PassedSampled { points: points.len() })
}
