use num_traits::Zero;

use crate::algebra::{enum_multisets, Q};
use crate::kleisli::Morphism;
use crate::pcs::PcsDescriptor;
use crate::rng;

/// Sparse random morphism between builtin spaces whose coefficients sum to
/// at most one, hence a clique of the arrow space.
pub(crate) fn random_morphism(dom: &PcsDescriptor, cod: &PcsDescriptor, degree: u32, seed: u64) -> Morphism {
    let mut r = rng::seeded(seed);
    let mut raw = Vec::new();
    for mu in enum_multisets(&dom.web().unwrap(), degree) {
        for b in cod.web().unwrap().elements() {
            let k = rng::unit_rational(&mut r, 8);
            if rng::flip(&mut r) && !k.is_zero() {
                raw.push((mu.clone(), b.clone(), k));
            }
        }
    }
    let total: Q = raw.iter().map(|(_, _, k)| k.clone()).sum();
    let norm = if total > Q::from_integer(1.into()) { total } else { Q::from_integer(1.into()) };
    Morphism::from_coeffs(dom.clone(), cod.clone(), degree, raw.into_iter().map(|(m, b, k)| (m, b, k / &norm)))
        .unwrap()
}
