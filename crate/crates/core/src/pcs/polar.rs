//! Duality for finitely generated spaces: the polar polytope
//! `{u ≥ 0 | ⟨g,u⟩ ≤ 1 for every generator g}`, norms, bipolar membership
//! and exact vertex enumeration.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};

use super::simplex::{maximize, LpOutcome};
use crate::algebra::{scal, SparseVec, Web, Q};
use crate::{Error, Result};

/// Largest web on which vertices are enumerated.
pub const MAX_VERTEX_DIM: usize = 6;

/// Cap on the number of candidate bases examined during enumeration.
const MAX_CANDIDATES: u64 = 5_000_000;

/// Vertices of a polyhedron in the nonnegative orthant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    pub vertices: Vec<SparseVec>,
    /// Some coordinate is unconstrained by every generator.
    pub unbounded: bool,
}

/// The polar of a finite generator list, with lazily cached vertices.
#[derive(Debug)]
pub struct PolarPolytope {
    web: Arc<Web>,
    constraints: Vec<SparseVec>,
    vertices: OnceLock<Result<VertexSet>>,
}

impl PolarPolytope {
    pub fn new(web: Arc<Web>, generators: Vec<SparseVec>) -> Result<Self> {
        for g in &generators {
            if **g.web() != *web {
                return Err(Error::WebMismatch("generator outside the declared web".into()));
            }
        }
        Ok(PolarPolytope { web, constraints: generators, vertices: OnceLock::new() })
    }

    pub fn web(&self) -> &Arc<Web> {
        &self.web
    }

    pub fn constraints(&self) -> &[SparseVec] {
        &self.constraints
    }

    /// Vertex set, enumerated once.
    pub fn vertices(&self) -> Result<&VertexSet> {
        self.vertices
            .get_or_init(|| polar_vertices(&self.constraints, &self.web))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn contains(&self, u: &SparseVec) -> Result<bool> {
        for g in &self.constraints {
            if scal(g, u)? > Q::one() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `sup { ⟨x,u⟩ | u in the polar }`, the norm of `x` in the generated space.
///
/// Fails with [`Error::Unbounded`] when some coordinate of `x` lies outside
/// every generator's support.
pub fn dual_sup(x: &SparseVec, polar: &PolarPolytope) -> Result<Q> {
    if **x.web() != *polar.web {
        return Err(Error::WebMismatch("point and polar live on different webs".into()));
    }
    if x.is_zero() {
        return Ok(Q::zero());
    }
    // Coordinates outside supp(x) can be set to zero without loss.
    let support: Vec<usize> = x.iter_indexed().map(|(i, _)| i).collect();
    let c: Vec<Q> = x.iter_indexed().map(|(_, q)| q.clone()).collect();
    let a: Vec<Vec<Q>> = polar
        .constraints
        .iter()
        .map(|g| support.iter().map(|&i| g.get_index(i)).collect::<Vec<Q>>())
        .filter(|row| row.iter().any(|q| !q.is_zero()))
        .collect();
    let b = vec![Q::one(); a.len()];
    match maximize(&c, &a, &b)? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Unbounded => Err(Error::Unbounded(format!("{x:?} has infinite norm"))),
    }
}

/// `inf { 1/r | r·x ≤ Σ λ_i g_i, Σ λ_i ≤ 1 }`: the gauge of `x` with respect to
/// the downward convex hull of the generators.
pub fn gauge_norm(x: &SparseVec, generators: &[SparseVec]) -> Result<Q> {
    if x.is_zero() {
        return Ok(Q::zero());
    }
    for g in generators {
        if **g.web() != **x.web() {
            return Err(Error::WebMismatch("generator and point webs differ".into()));
        }
    }
    // Variables: r, λ_1..λ_m.
    let m = generators.len();
    let mut c = vec![Q::zero(); m + 1];
    c[0] = Q::one();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, xi) in x.iter_indexed() {
        let mut row = Vec::with_capacity(m + 1);
        row.push(xi.clone());
        row.extend(generators.iter().map(|g| -g.get_index(i)));
        a.push(row);
        b.push(Q::zero());
    }
    let mut total = vec![Q::one(); m + 1];
    total[0] = Q::zero();
    a.push(total);
    b.push(Q::one());
    match maximize(&c, &a, &b)? {
        LpOutcome::Optimal { value, .. } if value.is_positive() => Ok(value.recip()),
        _ => Err(Error::Unbounded(format!("{x:?} is outside every dilation of the hull"))),
    }
}

/// Exact membership in the bipolar of the generated pre-space.
pub fn in_bipolar(x: &SparseVec, generators: &[SparseVec]) -> Result<bool> {
    let polar = PolarPolytope::new(x.web().clone(), generators.to_vec())?;
    match dual_sup(x, &polar) {
        Ok(v) => Ok(v <= Q::one()),
        Err(Error::Unbounded(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Exact membership in the downward convex hull of the generators.
pub fn in_hull(x: &SparseVec, generators: &[SparseVec]) -> Result<bool> {
    match gauge_norm(x, generators) {
        Ok(v) => Ok(v <= Q::one()),
        Err(Error::Unbounded(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Vertices of `{u ≥ 0 | ⟨g,u⟩ ≤ 1 ∀g}` by enumerating every choice of
/// `|web|` active constraints and solving the square system exactly.
pub fn polar_vertices(generators: &[SparseVec], web: &Arc<Web>) -> Result<VertexSet> {
    let n = web.len();
    if n > MAX_VERTEX_DIM {
        return Err(Error::Capability(format!(
            "vertex enumeration is limited to webs of size {MAX_VERTEX_DIM}, got {n}"
        )));
    }
    let rows: Vec<Vec<Q>> = generators
        .iter()
        .map(SparseVec::to_dense)
        .filter(|r| r.iter().any(|q| !q.is_zero()))
        .collect();
    let unbounded = (0..n).any(|a| rows.iter().all(|r| r[a].is_zero()));
    let m = rows.len();
    if binomial(m + n, n) > MAX_CANDIDATES {
        return Err(Error::Capability(format!(
            "{m} constraints in dimension {n} exceed the enumeration budget"
        )));
    }
    // Constraint k < m: ⟨g_k,u⟩ = 1; constraint m + a: u_a = 0.
    let row_of = |k: usize| -> (Vec<Q>, Q) {
        if k < m {
            (rows[k].clone(), Q::one())
        } else {
            let mut r = vec![Q::zero(); n];
            r[k - m] = Q::one();
            (r, Q::zero())
        }
    };
    let mut found: BTreeSet<Vec<Q>> = BTreeSet::new();
    for subset in combinations(m + n, n) {
        let system: Vec<(Vec<Q>, Q)> = subset.iter().map(|&k| row_of(k)).collect();
        let Some(u) = solve_square(system) else { continue };
        if u.iter().any(Signed::is_negative) {
            continue;
        }
        let feasible = rows
            .iter()
            .all(|r| r.iter().zip(&u).map(|(x, y)| x * y).sum::<Q>() <= Q::one());
        if feasible {
            found.insert(u);
        }
    }
    let vertices = found
        .into_iter()
        .map(|u| SparseVec::from_dense(web.clone(), u))
        .collect::<Result<Vec<_>>>()?;
    Ok(VertexSet { vertices, unbounded })
}

/// Vertices of the bipolar: the polar of the polar's vertices, with
/// coordinates that the generators never reach pinned to zero.
pub fn bipolar_vertices(generators: &[SparseVec], web: &Arc<Web>) -> Result<Vec<SparseVec>> {
    let polar = polar_vertices(generators, web)?;
    let covered: Vec<usize> = (0..web.len())
        .filter(|&a| generators.iter().any(|g| !g.get_index(a).is_zero()))
        .collect();
    let sub = Arc::new(Web::new(covered.iter().map(|&a| web.label(a).clone()).collect())?);
    let restrict = |v: &SparseVec| {
        SparseVec::from_dense(sub.clone(), covered.iter().map(|&a| v.get_index(a)).collect())
    };
    let dual_gens = polar.vertices.iter().map(restrict).collect::<Result<Vec<_>>>()?;
    let inner = polar_vertices(&dual_gens, &sub)?;
    inner
        .vertices
        .iter()
        .map(|v| {
            let mut full = vec![Q::zero(); web.len()];
            for (k, &a) in covered.iter().enumerate() {
                full[a] = v.get_index(k);
            }
            SparseVec::from_dense(web.clone(), full)
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> u64 {
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Unique solution of a square system, or `None` when singular.
fn solve_square(mut rows: Vec<(Vec<Q>, Q)>) -> Option<Vec<Q>> {
    let n = rows.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !rows[r].0[col].is_zero())?;
        rows.swap(col, p);
        let piv = rows[col].0[col].clone();
        let (lhs, rhs) = {
            let (l, r) = &rows[col];
            (l.iter().map(|x| x / &piv).collect::<Vec<_>>(), r / &piv)
        };
        rows[col] = (lhs.clone(), rhs.clone());
        for r in 0..n {
            if r == col || rows[r].0[col].is_zero() {
                continue;
            }
            let f = rows[r].0[col].clone();
            for (x, y) in rows[r].0.iter_mut().zip(&lhs) {
                *x -= &f * y;
            }
            rows[r].1 -= &f * &rhs;
        }
    }
    Some(rows.into_iter().map(|(_, r)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Label;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn vecq(web: &Arc<Web>, xs: &[(i64, i64)]) -> SparseVec {
        SparseVec::from_dense(web.clone(), xs.iter().map(|&(a, b)| q(a, b)).collect()).unwrap()
    }

    fn basis(web: &Arc<Web>) -> Vec<SparseVec> {
        web.elements().iter().map(|l| SparseVec::basis(web.clone(), l).unwrap()).collect()
    }

    fn dense_set(vs: &[SparseVec]) -> BTreeSet<Vec<Q>> {
        vs.iter().map(SparseVec::to_dense).collect()
    }

    #[test]
    fn dual_sup_examples() {
        let w3 = Arc::new(Web::nat(3));
        let polar = PolarPolytope::new(w3.clone(), basis(&w3)).unwrap();
        let e1 = SparseVec::basis(w3.clone(), &Label::Num(1)).unwrap();
        assert_eq!(dual_sup(&e1, &polar).unwrap(), q(1, 1));
        assert_eq!(dual_sup(&SparseVec::zeros(w3.clone()), &polar).unwrap(), q(0, 1));
        let w2 = Arc::new(Web::nat(2));
        let polar2 = PolarPolytope::new(w2.clone(), basis(&w2)).unwrap();
        assert_eq!(dual_sup(&vecq(&w2, &[(1, 2), (1, 2)]), &polar2).unwrap(), q(1, 1));
    }

    #[test]
    fn uncovered_coordinate_is_unbounded() {
        let w2 = Arc::new(Web::nat(2));
        let polar = PolarPolytope::new(w2.clone(), vec![vecq(&w2, &[(1, 1), (0, 1)])]).unwrap();
        let x = vecq(&w2, &[(0, 1), (1, 3)]);
        assert!(matches!(dual_sup(&x, &polar), Err(Error::Unbounded(_))));
        assert!(!in_bipolar(&x, polar.constraints()).unwrap());
    }

    #[test]
    fn in_bipolar_examples() {
        let w2 = Arc::new(Web::nat(2));
        let gens = basis(&w2);
        assert!(in_bipolar(&vecq(&w2, &[(1, 2), (1, 2)]), &gens).unwrap());
        assert!(!in_bipolar(&vecq(&w2, &[(3, 4), (1, 2)]), &gens).unwrap());
        for g in &gens {
            assert!(in_bipolar(g, &gens).unwrap());
        }
    }

    #[test]
    fn vertex_examples() {
        let w2 = Arc::new(Web::nat(2));
        let square = polar_vertices(&basis(&w2), &w2).unwrap();
        assert!(!square.unbounded);
        assert_eq!(
            dense_set(&square.vertices),
            [vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]].into()
        );
        let simplex = polar_vertices(&[vecq(&w2, &[(1, 1), (1, 1)])], &w2).unwrap();
        assert_eq!(
            dense_set(&simplex.vertices),
            [vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]].into()
        );
        let free = polar_vertices(&[], &w2).unwrap();
        assert!(free.unbounded);
        assert_eq!(dense_set(&free.vertices), [vec![q(0, 1), q(0, 1)]].into());
        assert!(matches!(polar_vertices(&[], &Arc::new(Web::nat(7))), Err(Error::Capability(_))));
    }

    #[test]
    fn single_half_generator() {
        let w1 = Arc::new(Web::nat(1));
        let gens = vec![vecq(&w1, &[(1, 2)])];
        let polar = polar_vertices(&gens, &w1).unwrap();
        assert_eq!(dense_set(&polar.vertices), [vec![q(0, 1)], vec![q(2, 1)]].into());
        let bipolar = bipolar_vertices(&gens, &w1).unwrap();
        assert_eq!(dense_set(&bipolar), [vec![q(0, 1)], vec![q(1, 2)]].into());
    }

    #[test]
    fn combinations_are_complete() {
        assert_eq!(combinations(4, 2).count(), 6);
        assert_eq!(combinations(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(2, 3).count(), 0);
    }

    fn arb_point(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
        proptest::collection::vec((0i64..5, 1i64..5), n)
    }

    fn arb_gens(n: usize) -> impl Strategy<Value = Vec<Vec<(i64, i64)>>> {
        proptest::collection::vec(proptest::collection::vec((1i64..4, 1i64..4), n), 1..4)
    }

    proptest! {
        #[test]
        fn norm_laws(gens in arb_gens(3), x in arb_point(3), y in arb_point(3), c in (0i64..5, 1i64..4)) {
            let w = Arc::new(Web::nat(3));
            let gens: Vec<SparseVec> = gens.iter().map(|g| vecq(&w, g)).collect();
            let polar = PolarPolytope::new(w.clone(), gens.clone()).unwrap();
            let (x, y) = (vecq(&w, &x), vecq(&w, &y));
            let c = q(c.0, c.1);
            let nx = dual_sup(&x, &polar).unwrap();
            let ny = dual_sup(&y, &polar).unwrap();
            prop_assert_eq!(dual_sup(&x.scale(&c), &polar).unwrap(), &c * &nx);
            let nxy = dual_sup(&x.add(&y).unwrap(), &polar).unwrap();
            prop_assert!(nxy <= &nx + &ny);
            prop_assert!(nx <= nxy);
            prop_assert_eq!(gauge_norm(&x, &gens).unwrap(), nx);
            for g in &gens {
                prop_assert!(in_bipolar(g, &gens).unwrap());
            }
        }

        #[test]
        fn nat_norm_is_coordinate_sum(x in arb_point(5)) {
            let w = Arc::new(Web::nat(5));
            let polar = PolarPolytope::new(w.clone(), basis(&w)).unwrap();
            let x = vecq(&w, &x);
            prop_assert_eq!(dual_sup(&x, &polar).unwrap(), x.total());
        }

        #[test]
        fn vertices_satisfy_constraints_and_attain_norms(gens in arb_gens(3), x in arb_point(3)) {
            let w = Arc::new(Web::nat(3));
            let gens: Vec<SparseVec> = gens.iter().map(|g| vecq(&w, g)).collect();
            let polar = PolarPolytope::new(w.clone(), gens).unwrap();
            let vs = polar.vertices().unwrap();
            for v in &vs.vertices {
                prop_assert!(polar.contains(v).unwrap());
            }
            let x = vecq(&w, &x);
            let best = vs.vertices.iter().map(|v| scal(&x, v).unwrap()).max().unwrap();
            prop_assert_eq!(best, dual_sup(&x, &polar).unwrap());
        }
    }
}
