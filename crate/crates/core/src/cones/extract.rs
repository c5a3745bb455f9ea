//! Recovering power-series coefficients from a function's derivatives at 0.

use num_traits::{One, Signed, Zero};

use super::derivative::{derivative_at_zero, DerivMode};
use super::function::ConeFn;
use super::scalar::Scalar;
use super::space::{cone_norm, ConeKind, ConeSpace};
use crate::algebra::{alpha, enum_multisets, factorial, Label, Multiset, SparseVec, Q};
use crate::exec::Exec;
use crate::kleisli::Morphism;
use crate::pcs::PcsDescriptor;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Extraction {
    pub morphism: Morphism,
    /// Exact interpolation on a function of known degree; otherwise the
    /// coefficients are numerical estimates.
    pub certified: bool,
}

fn descriptor(space: &ConeSpace) -> Result<PcsDescriptor> {
    match space.kind() {
        ConeKind::Pcs(d) => Ok(d.clone()),
        _ => Err(Error::Structural(format!("{space} is not a coherence-space cone"))),
    }
}

/// `f_{μ,b} = (α_μ/k!)·(Dᵏg(0 | e_{a₁},…,e_{aₖ}))_b` for every `μ = [a₁,…,aₖ]`
/// of degree at most `degree`.
///
/// Each `e_a` is shrunk to `e_a/(k‖e_a‖)` so the directions fit the unit
/// ball, and the derivative is scaled back up by multilinearity.
pub fn extract_coefficients<S: Scalar, F: ConeFn<S> + ?Sized>(
    g: &F,
    degree: u32,
    mode: &DerivMode,
    exec: Exec,
) -> Result<Extraction> {
    let dom = descriptor(g.dom())?;
    let cod = descriptor(g.cod())?;
    let dweb = g.dom().web().clone();
    let cweb = g.cod().web().clone();
    let basis_norms: Vec<Q> = (0..dweb.len())
        .map(|a| cone_norm(&SparseVec::basis(dweb.clone(), dweb.label(a))?, g.dom()))
        .collect::<Result<_>>()?;
    let mus = enum_multisets(&dweb, degree);
    let rows = exec.map(&mus, |mu| -> Result<Vec<(Label, Q)>> {
        let k = mu.degree();
        let mut dirs = Vec::with_capacity(k as usize);
        let mut rescale = Q::one();
        for a in mu.elements() {
            let i = dweb.index_of(a).expect("multisets are drawn from the web");
            let c = (Q::from_integer(k.into()) * &basis_norms[i]).recip();
            dirs.push(SparseVec::basis(dweb.clone(), a)?.scale(&c));
            rescale /= c;
        }
        let d = derivative_at_zero(g, &dirs, mode, Exec::Sequential).map_err(|e| at(mu, e))?;
        let weight = rescale * Q::from_integer(alpha(mu)) / Q::from_integer(factorial(k));
        let mut out = Vec::new();
        for (b, v) in d.iter().enumerate() {
            let mut q = v.to_q() * &weight;
            if q.is_negative() {
                if S::EXACT || q.abs() > Q::new(1.into(), 1_000_000.into()) {
                    return Err(at(mu, Error::Domain(format!("negative coefficient {q} at {}", cweb.label(b)))));
                }
                q = Q::zero();
            }
            if !q.is_zero() {
                out.push((cweb.label(b).clone(), q));
            }
        }
        Ok(out)
    });
    let mut coeffs = Vec::new();
    for (mu, row) in mus.iter().zip(rows) {
        coeffs.extend(row?.into_iter().map(|(b, q)| (mu.clone(), b, q)));
    }
    let morphism = Morphism::from_coeffs(dom, cod, degree, coeffs)?;
    let certified = matches!(mode, DerivMode::ExactPoly { degree: m } if g.degree().is_some_and(|d| d <= *m));
    Ok(Extraction { morphism, certified })
}

fn at(mu: &Multiset, e: Error) -> Error {
    match e {
        Error::Estimation(m) => Error::Estimation(format!("coefficient {mu:?}: {m}")),
        Error::Domain(m) => Error::Domain(format!("coefficient {mu:?}: {m}")),
        other => other,
    }
}
