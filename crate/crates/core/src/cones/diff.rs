//! Higher-order differences and randomized pre-stability testing.

use num_traits::{One, Zero};
use serde::Serialize;

use super::function::{add, sub, ConeFn};
use super::scalar::Scalar;
use super::space::{cone_norm, local_norm};
use crate::algebra::{Label, SparseVec, Q};
use crate::exec::Exec;
use crate::rng;
use crate::{Error, Result};

/// `Δ⁺`, `Δ⁻` and their difference, per codomain coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct Difference<S> {
    pub plus: Vec<S>,
    pub minus: Vec<S>,
    pub signed: Vec<S>,
}

/// Sum of the `us` indexed by the bits of `mask`, added to `x`.
fn shifted(x: &SparseVec, us: &[SparseVec], mask: usize) -> Result<SparseVec> {
    let mut p = x.clone();
    for (i, u) in us.iter().enumerate() {
        if mask >> i & 1 == 1 {
            p = p.add(u)?;
        }
    }
    Ok(p)
}

/// The two parity sums, without checking the local-norm precondition.
pub(crate) fn delta_parts<S: Scalar, F: ConeFn<S> + ?Sized>(
    f: &F,
    x: &SparseVec,
    us: &[SparseVec],
    exec: Exec,
) -> Result<Difference<S>> {
    let n = us.len();
    if n >= usize::BITS as usize - 1 {
        return Err(Error::Capability(format!("difference of order {n}")));
    }
    let values = exec.map_range(1 << n, |mask| f.eval(&shifted(x, us, mask)?));
    let dim = f.cod().dim();
    let mut plus = vec![S::nil(); dim];
    let mut minus = vec![S::nil(); dim];
    // Subset order is fixed, so float sums are reproducible.
    for (mask, v) in values.into_iter().enumerate() {
        let v = v?;
        if (n - mask.count_ones() as usize).is_multiple_of(2) {
            add(&mut plus, &v);
        } else {
            add(&mut minus, &v);
        }
    }
    let signed = sub(&plus, &minus);
    Ok(Difference { plus, minus, signed })
}

pub(crate) fn delta<S: Scalar, F: ConeFn<S> + ?Sized>(f: &F, x: &SparseVec, us: &[SparseVec]) -> Result<Vec<S>> {
    Ok(delta_parts(f, x, us, Exec::Sequential)?.signed)
}

/// Check `x + Σus` lies in the closed unit ball, with `x` in the open one
/// unless every direction vanishes.
pub(crate) fn check_local<S: Scalar, F: ConeFn<S> + ?Sized>(f: &F, x: &SparseVec, us: &[SparseVec]) -> Result<()> {
    if us.iter().all(SparseVec::is_zero) {
        let nx = cone_norm(x, f.dom())?;
        if nx > Q::one() {
            return Err(Error::Domain(format!("point has norm {nx} > 1")));
        }
        return Ok(());
    }
    let l = local_norm(x, us, f.dom())?;
    if l > Q::one() {
        return Err(Error::Domain(format!("directions have local norm {l} > 1")));
    }
    Ok(())
}

/// `Δₙ(f)(x | u₁,…,uₙ)` with `n = us.len()`; the `2ⁿ` evaluations run on `exec`.
pub fn diff<S: Scalar, F: ConeFn<S> + ?Sized>(
    f: &F,
    x: &SparseVec,
    us: &[SparseVec],
    exec: Exec,
) -> Result<Difference<S>> {
    check_local(f, x, us)?;
    delta_parts(f, x, us, exec)
}

/// Smallest signed difference seen for one order.
#[derive(Clone, Debug, Serialize)]
pub struct OrderReport {
    pub order: usize,
    pub trials: usize,
    pub min_signed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// A point and directions at which the signed difference is most negative.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub x: SparseVec,
    pub us: Vec<SparseVec>,
    pub coordinate: Label,
    pub signed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrestabilityReport {
    pub passed: bool,
    pub exact: bool,
    pub orders: Vec<OrderReport>,
}

impl PrestabilityReport {
    /// The worst witness among failing orders.
    pub fn witness(&self) -> Option<&Witness> {
        self.orders.iter().filter_map(|o| o.witness.as_ref()).next()
    }
}

/// Random point of the open ball with denominators in `16ℤ`.
fn random_point(rng: &mut rng::SeededRng, space: &super::ConeSpace) -> Result<SparseVec> {
    let d = space.point((0..space.dim()).map(|_| rng::unit_rational(rng, 16)).collect())?;
    let nd = cone_norm(&d, space)?;
    if nd.is_zero() {
        return Ok(d);
    }
    let r = rng::unit_rational(rng, 16) * Q::new(15.into(), 16.into());
    Ok(d.scale(&(r / nd)))
}

/// Random `(x, us)` with `local_norm(x, us) ≤ 1`.
pub(crate) fn random_instance(
    rng: &mut rng::SeededRng,
    space: &super::ConeSpace,
    n: usize,
) -> Result<(SparseVec, Vec<SparseVec>)> {
    let x = random_point(rng, space)?;
    let ds: Vec<SparseVec> = (0..n)
        .map(|_| space.point((0..space.dim()).map(|_| rng::unit_rational(rng, 16)).collect()))
        .collect::<Result<_>>()?;
    let l = local_norm(&x, &ds, space)?;
    if l.is_zero() {
        return Ok((x, ds));
    }
    let s = rng::positive_unit_rational(rng, 16) / l;
    Ok((x, ds.iter().map(|d| d.scale(&s)).collect()))
}

/// Search for `(x, u)` with `Δ⁻ₙ > Δ⁺ₙ`, for every `1 ≤ n ≤ n_max`.
///
/// Exact scalars must give nonnegative signed differences; floats may dip
/// to `-1e-9`. Trial `t` of order `n` draws from its own stream, so the
/// report does not depend on `exec`.
pub fn is_prestable<S: Scalar, F: ConeFn<S> + ?Sized>(
    f: &F,
    n_max: usize,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<PrestabilityReport> {
    let mut orders = Vec::new();
    let floor = S::sign_floor();
    for n in 1..=n_max {
        let results = exec.map_range(trials, |t| -> Result<_> {
            let mut r = rng::stream(seed, (n * trials + t) as u64);
            let (x, us) = random_instance(&mut r, f.dom(), n)?;
            let d = delta_parts(f, &x, &us, Exec::Sequential)?;
            let worst = d
                .signed
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
                .map(|(i, v)| (i, v.clone()));
            Ok((x, us, worst))
        });
        let mut min: Option<(S, Option<Witness>)> = None;
        for res in results {
            let (x, us, worst) = res?;
            let Some((i, v)) = worst else { continue };
            if min.as_ref().is_some_and(|(m, _)| *m <= v) {
                continue;
            }
            let witness = (v < floor).then(|| Witness {
                x,
                us,
                coordinate: f.cod().web().label(i).clone(),
                signed: v.render(),
            });
            min = Some((v, witness));
        }
        let (min_signed, witness) = min.unwrap_or((S::nil(), None));
        orders.push(OrderReport { order: n, trials, min_signed: min_signed.render(), witness });
    }
    Ok(PrestabilityReport { passed: orders.iter().all(|o| o.witness.is_none()), exact: S::EXACT, orders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::{BlackBoxFn, DoubleDouble, MorphismFn};
    use crate::cones::testutil::random_morphism;
    use crate::pcs::PcsDescriptor;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn square() -> BlackBoxFn<Q> {
        BlackBoxFn::scalar(|t: Q| &t * &t)
    }

    #[test]
    fn small_orders() {
        let f = square();
        let h = f.dom().clone();
        let x = h.point(vec![q(1, 3)]).unwrap();
        let u = h.point(vec![q(1, 4)]).unwrap();
        let d0 = diff(&f, &x, &[], Exec::Sequential).unwrap();
        assert_eq!(d0.signed, vec![q(1, 9)]);
        let d1 = diff(&f, &x, &[u.clone()], Exec::Sequential).unwrap();
        assert_eq!(d1.signed, vec![q(7, 12) * q(7, 12) - q(1, 9)]);
        let d2 = diff(&f, &h.zero(), &[u.clone(), u.clone()], Exec::Parallel).unwrap();
        assert_eq!(d2.signed, vec![q(1, 8)]);
        assert_eq!(d2.plus, vec![q(1, 4)]);
        assert_eq!(d2.minus, vec![q(1, 8)]);
        let big = h.point(vec![q(1, 2)]).unwrap();
        assert!(matches!(diff(&f, &x, &[big.clone(), big], Exec::Sequential), Err(Error::Domain(_))));
    }

    #[test]
    fn prestability_verdicts() {
        let rep = is_prestable(&square(), 3, 50, 1, Exec::Parallel).unwrap();
        assert!(rep.passed);
        let bump = BlackBoxFn::<Q>::scalar(|t: Q| &t * (Q::one() - &t));
        let rep = is_prestable(&bump, 3, 50, 1, Exec::Parallel).unwrap();
        assert!(!rep.passed);
        let w = rep.orders[1].witness.as_ref().expect("second differences are negative");
        // Witness replays: −2·u₁·u₂.
        let expect = -q(2, 1) * w.us[0].get_index(0) * w.us[1].get_index(0);
        assert_eq!(w.signed, crate::algebra::format_q(&expect));
        let constant = BlackBoxFn::<Q>::scalar(|_| q(1, 2));
        let rep = is_prestable(&constant, 3, 20, 1, Exec::Sequential).unwrap();
        assert!(rep.passed && rep.orders.iter().all(|o| o.min_signed == "0"));
    }

    #[test]
    fn float_mode_tolerates_rounding() {
        let f = BlackBoxFn::<DoubleDouble>::scalar(|t| t.exp() * DoubleDouble::from_f64(-1.0).exp());
        let rep = is_prestable(&f, 4, 40, 9, Exec::Parallel).unwrap();
        assert!(rep.passed && !rep.exact);
    }

    #[test]
    fn report_is_independent_of_execution() {
        let f = MorphismFn::new(random_morphism(&PcsDescriptor::nat(2), &PcsDescriptor::bool(), 2, 3)).unwrap();
        let a = is_prestable::<Q, _>(&f, 3, 30, 4, Exec::Sequential).unwrap();
        let b = is_prestable::<Q, _>(&f, 3, 30, 4, Exec::Parallel).unwrap();
        assert!(a.passed);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn symmetry_and_recurrence(seed in 0u64..10_000, n in 1usize..=3, perm in 0usize..6) {
            let f = MorphismFn::new(random_morphism(&PcsDescriptor::nat(2), &PcsDescriptor::nat(2), 3, seed)).unwrap();
            let mut r = rng::seeded(seed);
            let (x, us) = random_instance(&mut r, ConeFn::<Q>::dom(&f), n).unwrap();
            let d: Vec<Q> = delta(&f, &x, &us).unwrap();
            let mut shuffled = us.clone();
            shuffled.rotate_left(perm % n);
            if perm >= 3 { shuffled.reverse(); }
            prop_assert_eq!(&d, &delta::<Q, _>(&f, &x, &shuffled).unwrap());
            let (last, rest) = us.split_last().unwrap();
            let hi: Vec<Q> = delta(&f, &x.add(last).unwrap(), rest).unwrap();
            let lo: Vec<Q> = delta(&f, &x, rest).unwrap();
            prop_assert_eq!(d, sub(&hi, &lo));
        }
    }
}
