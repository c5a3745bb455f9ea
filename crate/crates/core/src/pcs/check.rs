use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use super::polar::{bipolar_vertices, dual_sup, gauge_norm, PolarPolytope, MAX_VERTEX_DIM};
use super::{PcsDescriptor, Shape};
use crate::algebra::{format_q, Label, SparseVec, Q};
use crate::{rng, Error, Result};

/// Random directions probed when the closure cannot be certified exactly.
const CLOSURE_SAMPLES: usize = 32;

#[derive(Clone, Debug, Serialize)]
pub struct ElementValue {
    pub element: Label,
    /// `None` stands for +∞.
    #[serde(serialize_with = "ser_opt_q")]
    pub value: Option<Q>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ClosureVerdict {
    /// Every vertex of the bipolar lies in the downward hull of the generators.
    Certified { vertices: usize },
    /// A bipolar vertex outside the hull.
    Failed { witness: SparseVec },
    /// Web too large for vertex enumeration; norms were compared on random
    /// directions only. Not a proof.
    Sampled { directions: usize, reason: String },
    /// Sampling found a direction where the two norms differ.
    SampledFailed { witness: SparseVec, reason: String },
}

/// Outcome of certifying the three space axioms on a finite web.
#[derive(Clone, Debug, Serialize)]
pub struct PcsReport {
    pub space: String,
    /// Largest `λ` with `λ·e_a` a clique.
    pub lambda: Vec<ElementValue>,
    pub lambda_ok: bool,
    /// Largest coordinate `a` of any clique.
    pub bound: Vec<ElementValue>,
    pub bound_ok: bool,
    pub closure: ClosureVerdict,
}

impl PcsReport {
    /// All three verdicts hold, the closure one exactly.
    pub fn passed(&self) -> bool {
        self.lambda_ok && self.bound_ok && matches!(self.closure, ClosureVerdict::Certified { .. })
    }

    /// Some verdict is refuted by a concrete witness.
    pub fn violated(&self) -> bool {
        !self.lambda_ok
            || !self.bound_ok
            || matches!(self.closure, ClosureVerdict::Failed { .. } | ClosureVerdict::SampledFailed { .. })
    }
}

fn ser_opt_q<S: serde::Serializer>(v: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_str(&format_q(q)),
        None => s.serialize_str("inf"),
    }
}

/// Certify the space axioms for a builtin or generated space.
pub fn check_pcs(desc: &PcsDescriptor) -> Result<PcsReport> {
    let Some(gens) = desc.generators()? else {
        return Err(Error::Capability(format!("{desc} has no finite generator description")));
    };
    let web = desc.web()?;
    let polar = PolarPolytope::new(web.clone(), gens.clone())?;

    let mut lambda = Vec::with_capacity(web.len());
    for a in web.elements() {
        let e = SparseVec::basis(web.clone(), a)?;
        let value = match dual_sup(&e, &polar) {
            Ok(n) => Some(n.recip()),
            Err(Error::Unbounded(_)) => None,
            Err(e) => return Err(e),
        };
        lambda.push(ElementValue { element: a.clone(), value });
    }
    // No finite λ_a exists exactly when dual_sup(e_a) is infinite.
    let lambda_ok = lambda.iter().all(|v| v.value.is_some());

    let exact = web.len() <= MAX_VERTEX_DIM;
    let bipolar = if exact { Some(bipolar_vertices(&gens, &web)?) } else { None };
    let extremes: &[SparseVec] = bipolar.as_deref().unwrap_or(&gens);
    let bound: Vec<ElementValue> = web
        .elements()
        .iter()
        .enumerate()
        .map(|(i, a)| ElementValue {
            element: a.clone(),
            value: Some(extremes.iter().map(|v| v.get_index(i)).max().unwrap_or_else(Q::zero)),
        })
        .collect();
    let bound_ok = bound.iter().all(|v| v.value.is_some());

    let closure = match bipolar {
        Some(vertices) => {
            let mut verdict = ClosureVerdict::Certified { vertices: vertices.len() };
            for v in vertices {
                let inside = match gauge_norm(&v, &gens) {
                    Ok(g) => g <= Q::one(),
                    Err(Error::Unbounded(_)) => false,
                    Err(e) => return Err(e),
                };
                if !inside {
                    verdict = ClosureVerdict::Failed { witness: v };
                    break;
                }
            }
            verdict
        }
        None => sampled_closure(&web, &gens, &polar)?,
    };

    Ok(PcsReport { space: desc.to_string(), lambda, lambda_ok, bound, bound_ok, closure })
}

fn sampled_closure(
    web: &Arc<crate::algebra::Web>,
    gens: &[SparseVec],
    polar: &PolarPolytope,
) -> Result<ClosureVerdict> {
    let reason = format!("web has {} elements; exact certification needs at most {MAX_VERTEX_DIM}", web.len());
    let mut r = rng::seeded(0);
    for _ in 0..CLOSURE_SAMPLES {
        let coords = (0..web.len()).map(|_| rng::unit_rational(&mut r, 8)).collect();
        let x = SparseVec::from_dense(web.clone(), coords)?;
        if x.is_zero() {
            continue;
        }
        let dual = match dual_sup(&x, polar) {
            Ok(v) => v,
            Err(Error::Unbounded(_)) => continue,
            Err(e) => return Err(e),
        };
        let hull = gauge_norm(&x, gens)?;
        if hull != dual {
            return Ok(ClosureVerdict::SampledFailed { witness: x.scale(&dual.recip()), reason });
        }
    }
    Ok(ClosureVerdict::Sampled { directions: CLOSURE_SAMPLES, reason })
}

/// Exact clique membership. Arrow spaces delegate to sampled morphism
/// checking, so a `true` there means "no violation found".
pub fn clique_membership(x: &SparseVec, desc: &PcsDescriptor) -> Result<bool> {
    if **x.web() != *desc.web()? {
        return Err(Error::WebMismatch(format!("point is not over the web of {desc}")));
    }
    Ok(match desc.shape() {
        Shape::One | Shape::Bool | Shape::Nat(_) => x.total() <= Q::one(),
        Shape::Product(cs) => {
            for i in 0..cs.len() {
                if !clique_membership(&desc.component(i, x)?, &cs[i])? {
                    return Ok(false);
                }
            }
            true
        }
        Shape::Generated(_, gens) => super::in_bipolar(x, gens)?,
        Shape::Arrow(..) => {
            let f = crate::kleisli::Morphism::from_point(desc, x)?;
            crate::kleisli::is_morphism(&f, 64, 0)?.passed()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Web;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn builtins_pass() {
        for d in [PcsDescriptor::one(), PcsDescriptor::bool(), PcsDescriptor::nat(4)] {
            let r = check_pcs(&d).unwrap();
            assert!(r.passed(), "{d}: {r:?}");
            assert!(r.lambda.iter().all(|v| v.value == Some(q(1, 1))));
            assert!(r.bound.iter().all(|v| v.value == Some(q(1, 1))));
        }
    }

    #[test]
    fn large_nat_is_sampled_not_certified() {
        let r = check_pcs(&PcsDescriptor::nat(8)).unwrap();
        assert!(r.lambda_ok && r.bound_ok);
        assert!(matches!(r.closure, ClosureVerdict::Sampled { .. }));
        assert!(!r.passed() && !r.violated());
    }

    #[test]
    fn single_half_generator_is_exactly_closed() {
        let w = Arc::new(Web::nat(1));
        let g = SparseVec::from_dense(w.clone(), vec![q(1, 2)]).unwrap();
        let r = check_pcs(&PcsDescriptor::generated(w, vec![g]).unwrap()).unwrap();
        assert_eq!(r.lambda[0].value, Some(q(1, 2)));
        assert_eq!(r.bound[0].value, Some(q(1, 2)));
        assert!(matches!(r.closure, ClosureVerdict::Certified { vertices: 2 }));
    }

    #[test]
    fn uncovered_element_fails_lambda() {
        let w = Arc::new(Web::nat(2));
        let g = SparseVec::from_dense(w.clone(), vec![q(1, 1), q(0, 1)]).unwrap();
        let r = check_pcs(&PcsDescriptor::generated(w, vec![g]).unwrap()).unwrap();
        assert!(!r.lambda_ok && r.violated());
        assert_eq!(r.lambda[1].value, None);
    }

    #[test]
    fn membership_examples() {
        let n3 = PcsDescriptor::nat(3);
        let w = n3.web().unwrap();
        let third = SparseVec::from_dense(w.clone(), vec![q(1, 3); 3]).unwrap();
        assert!(clique_membership(&third, &n3).unwrap());
        let two = SparseVec::from_dense(w, vec![q(1, 1), q(1, 1), q(0, 1)]).unwrap();
        assert!(!clique_membership(&two, &n3).unwrap());
        let one = PcsDescriptor::one();
        let w1 = one.web().unwrap();
        assert!(clique_membership(&SparseVec::from_dense(w1.clone(), vec![q(1, 1)]).unwrap(), &one).unwrap());
        assert!(!clique_membership(&SparseVec::from_dense(w1, vec![q(3, 2)]).unwrap(), &one).unwrap());
    }
}
