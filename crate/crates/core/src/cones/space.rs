//! Cones with a norm: PCS cones, the half-line, and finite orthants with the
//! sup norm. All three are lattices with pointwise meet and join.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::algebra::{scal, Label, SparseVec, Web, Q};
use crate::pcs::simplex::{maximize, LpOutcome};
use crate::pcs::{PcsDescriptor, PolarPolytope, Shape, MAX_VERTEX_DIM};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum ConeKind {
    Pcs(PcsDescriptor),
    /// `ℝ≥0` with the identity as norm.
    HalfLine,
    /// `ℝ≥0ⁿ` with the max-coordinate norm.
    OrthantSup(usize),
}

#[derive(Clone)]
pub struct ConeSpace(Arc<Inner>);

struct Inner {
    kind: ConeKind,
    web: Arc<Web>,
    norm: NormTree,
}

/// Norm evaluation plan, built once per space.
enum NormTree {
    /// Sum of coordinates.
    Sum,
    /// Max of coordinates.
    Max,
    /// Max over components, each on the listed coordinates of the product web.
    Product(Vec<(Vec<usize>, Arc<Web>, NormTree)>),
    /// Dual of an explicit polar polytope.
    Polar(Arc<PolarPolytope>),
}

impl ConeSpace {
    pub fn pcs(desc: PcsDescriptor) -> Result<Self> {
        let web = desc.web()?;
        let norm = norm_tree(&desc)?;
        Ok(ConeSpace(Arc::new(Inner { kind: ConeKind::Pcs(desc), web, norm })))
    }

    pub fn half_line() -> Self {
        let web = Arc::new(Web::new(vec![Label::atom("*")]).expect("one element"));
        ConeSpace(Arc::new(Inner { kind: ConeKind::HalfLine, web, norm: NormTree::Sum }))
    }

    pub fn orthant_sup(n: usize) -> Self {
        let web = Arc::new(Web::nat(n as u64));
        ConeSpace(Arc::new(Inner { kind: ConeKind::OrthantSup(n), web, norm: NormTree::Max }))
    }

    pub fn kind(&self) -> &ConeKind {
        &self.0.kind
    }

    pub fn web(&self) -> &Arc<Web> {
        &self.0.web
    }

    pub fn dim(&self) -> usize {
        self.0.web.len()
    }

    /// Point from dense coordinates.
    pub fn point(&self, coords: Vec<Q>) -> Result<SparseVec> {
        SparseVec::from_dense(self.0.web.clone(), coords)
    }

    pub fn zero(&self) -> SparseVec {
        SparseVec::zeros(self.0.web.clone())
    }

    fn check(&self, x: &SparseVec) -> Result<()> {
        if **x.web() != *self.0.web {
            return Err(Error::WebMismatch(format!("point is not in the cone {self}")));
        }
        Ok(())
    }
}

impl fmt::Display for ConeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            ConeKind::Pcs(d) => write!(f, "{d}"),
            ConeKind::HalfLine => f.write_str("ℝ≥0"),
            ConeKind::OrthantSup(n) => write!(f, "ℝ≥0^{n} (sup)"),
        }
    }
}

impl fmt::Debug for ConeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConeSpace({self})")
    }
}

fn norm_tree(desc: &PcsDescriptor) -> Result<NormTree> {
    Ok(match desc.shape() {
        Shape::One | Shape::Bool | Shape::Nat(_) => NormTree::Sum,
        Shape::Product(cs) => {
            let web = desc.web()?;
            let mut parts = Vec::with_capacity(cs.len());
            for (i, c) in cs.iter().enumerate() {
                let idx = (0..web.len())
                    .filter(|&k| matches!(web.label(k).as_tagged(), Some((t, _)) if t as usize == i))
                    .collect();
                parts.push((idx, c.web()?, norm_tree(c)?));
            }
            NormTree::Product(parts)
        }
        Shape::Generated(w, g) => NormTree::Polar(Arc::new(PolarPolytope::new(w.clone(), g.clone())?)),
        Shape::Arrow(..) => {
            return Err(Error::Capability(format!("no finite polar description for the norm of {desc}")))
        }
    })
}

fn restrict(x: &SparseVec, idx: &[usize], web: &Arc<Web>) -> Result<SparseVec> {
    SparseVec::from_dense(web.clone(), idx.iter().map(|&k| x.get_index(k)).collect())
}

fn norm_of(tree: &NormTree, x: &SparseVec) -> Result<Q> {
    match tree {
        NormTree::Sum => Ok(x.total()),
        NormTree::Max => Ok(x.iter().map(|(_, q)| q.clone()).max().unwrap_or_else(Q::zero)),
        NormTree::Product(parts) => {
            let mut best = Q::zero();
            for (idx, web, t) in parts {
                best = best.max(norm_of(t, &restrict(x, idx, web)?)?);
            }
            Ok(best)
        }
        NormTree::Polar(p) => crate::pcs::dual_sup(x, p),
    }
}

/// `inf { 1/r | x + r·s ∈ ball }`, given `‖x‖ < 1`.
fn local_of(tree: &NormTree, x: &SparseVec, s: &SparseVec) -> Result<Q> {
    if s.is_zero() {
        return Ok(Q::zero());
    }
    match tree {
        NormTree::Sum => Ok(s.total() / (Q::one() - x.total())),
        NormTree::Max => Ok(s
            .iter_indexed()
            .map(|(i, si)| si / (Q::one() - x.get_index(i)))
            .max()
            .unwrap_or_else(Q::zero)),
        NormTree::Product(parts) => {
            let mut best = Q::zero();
            for (idx, web, t) in parts {
                best = best.max(local_of(t, &restrict(x, idx, web)?, &restrict(s, idx, web)?)?);
            }
            Ok(best)
        }
        NormTree::Polar(p) if p.web().len() <= MAX_VERTEX_DIM => local_by_vertices(p, x, s),
        NormTree::Polar(p) => local_by_lp(p.constraints(), x, s),
    }
}

/// `max_v ⟨s,v⟩ / (1 − ⟨x,v⟩)` over the polar's vertices.
pub(crate) fn local_by_vertices(p: &PolarPolytope, x: &SparseVec, s: &SparseVec) -> Result<Q> {
    let vs = p.vertices()?;
    if vs.unbounded {
        let uncovered = |a: usize| p.constraints().iter().all(|g| g.get_index(a).is_zero());
        if s.iter_indexed().any(|(a, _)| uncovered(a)) {
            return Err(Error::Unbounded("direction leaves every bounded face".into()));
        }
    }
    let mut best = Q::zero();
    for v in &vs.vertices {
        let num = scal(s, v)?;
        if num.is_positive() {
            best = best.max(num / (Q::one() - scal(x, v)?));
        }
    }
    Ok(best)
}

/// The same quantity as a linear program after the Charnes–Cooper
/// substitution `w = u / (1 − ⟨x,u⟩)`: `max ⟨s,w⟩` s.t. `⟨g − x, w⟩ ≤ 1`.
pub(crate) fn local_by_lp(gens: &[SparseVec], x: &SparseVec, s: &SparseVec) -> Result<Q> {
    let n = x.web().len();
    let c = s.to_dense();
    let xd = x.to_dense();
    let a: Vec<Vec<Q>> = gens.iter().map(|g| (0..n).map(|i| g.get_index(i) - &xd[i]).collect()).collect();
    let b = vec![Q::one(); a.len()];
    match maximize(&c, &a, &b)? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Unbounded => Err(Error::Unbounded("direction leaves every bounded face".into())),
    }
}

/// The cone norm: `inf { 1/r | r·x ∈ ball }`.
pub fn cone_norm(x: &SparseVec, space: &ConeSpace) -> Result<Q> {
    space.check(x)?;
    norm_of(&space.0.norm, x)
}

/// Norm of `Σ us` in the local cone at `x`: `inf { 1/r | x + r·Σuᵢ ∈ ball }`.
pub fn local_norm(x: &SparseVec, us: &[SparseVec], space: &ConeSpace) -> Result<Q> {
    space.check(x)?;
    let mut s = space.zero();
    for u in us {
        space.check(u)?;
        s = s.add(u)?;
    }
    let nx = norm_of(&space.0.norm, x)?;
    if nx >= Q::one() {
        return Err(Error::Domain(format!("base point has norm {nx}, outside the open unit ball")));
    }
    local_of(&space.0.norm, x, &s)
}

/// Pointwise meet.
pub fn meet(a: &SparseVec, b: &SparseVec) -> Result<SparseVec> {
    crate::algebra::same_web(a.web(), b.web())?;
    let mut out = SparseVec::zeros(a.web().clone());
    for (i, q) in a.iter_indexed() {
        let m = q.clone().min(b.get_index(i));
        if !m.is_zero() {
            out.set_index(i, m)?;
        }
    }
    Ok(out)
}

/// Pointwise join.
pub fn join(a: &SparseVec, b: &SparseVec) -> Result<SparseVec> {
    crate::algebra::same_web(a.web(), b.web())?;
    let mut out = b.clone();
    for (i, q) in a.iter_indexed() {
        out.set_index(i, q.clone().max(b.get_index(i)))?;
    }
    Ok(out)
}
