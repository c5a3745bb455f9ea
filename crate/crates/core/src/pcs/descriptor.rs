use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::algebra::{enum_multisets, format_q, multiset_count, parse_nonneg_q, Label, SparseVec, Web};
use crate::{Error, Result};

/// Largest web the crate will materialise.
pub const MAX_WEB: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Web `{*}`, cliques `[0,1]`.
    One,
    /// Web `{t, f}`, cliques the subprobability distributions.
    Bool,
    /// Web `{0,…,W−1}`, cliques the subprobability distributions.
    Nat(u64),
    /// Cartesian product; web is the tagged disjoint union.
    Product(Vec<PcsDescriptor>),
    /// Power-series morphisms `dom ⇒ cod` truncated at the given degree.
    Arrow(PcsDescriptor, PcsDescriptor, u32),
    /// Bipolar closure of an explicit generator list.
    Generated(Arc<Web>, Vec<SparseVec>),
}

/// A probabilistic coherence space over a finite web.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "ShapeRepr", into = "ShapeRepr")]
pub struct PcsDescriptor(Arc<Inner>);

struct Inner {
    shape: Shape,
    web: OnceLock<Result<Arc<Web>>>,
}

impl PcsDescriptor {
    pub fn new(shape: Shape) -> Self {
        PcsDescriptor(Arc::new(Inner { shape, web: OnceLock::new() }))
    }

    pub fn one() -> Self {
        Self::new(Shape::One)
    }

    pub fn bool() -> Self {
        Self::new(Shape::Bool)
    }

    pub fn nat(cutoff: u64) -> Self {
        Self::new(Shape::Nat(cutoff))
    }

    pub fn product(components: Vec<PcsDescriptor>) -> Self {
        Self::new(Shape::Product(components))
    }

    pub fn arrow(dom: PcsDescriptor, cod: PcsDescriptor, degree: u32) -> Self {
        Self::new(Shape::Arrow(dom, cod, degree))
    }

    pub fn generated(web: Arc<Web>, generators: Vec<SparseVec>) -> Result<Self> {
        for g in &generators {
            if **g.web() != *web {
                return Err(Error::WebMismatch("generator outside the declared web".into()));
            }
        }
        Ok(Self::new(Shape::Generated(web, generators)))
    }

    pub fn shape(&self) -> &Shape {
        &self.0.shape
    }

    /// Number of web elements, computed without materialising the web.
    pub fn web_size(&self) -> BigInt {
        match &self.0.shape {
            Shape::One => 1.into(),
            Shape::Bool => 2.into(),
            Shape::Nat(w) => (*w).into(),
            Shape::Product(cs) => cs.iter().map(PcsDescriptor::web_size).sum(),
            Shape::Arrow(d, c, deg) => match d.web_size().to_usize() {
                Some(n) => multiset_count(n, *deg) * c.web_size(),
                None => d.web_size().pow(*deg) * c.web_size(),
            },
            Shape::Generated(w, _) => w.len().into(),
        }
    }

    /// Structural web membership; never materialises the web.
    pub fn contains(&self, l: &Label) -> bool {
        match (&self.0.shape, l) {
            (Shape::One, Label::Atom(a)) => &**a == "*",
            (Shape::Bool, Label::Atom(a)) => &**a == "t" || &**a == "f",
            (Shape::Nat(w), Label::Num(n)) => n < w,
            (Shape::Product(cs), Label::Tagged(i, inner)) => {
                cs.get(*i as usize).is_some_and(|c| c.contains(inner))
            }
            (Shape::Arrow(d, c, deg), Label::Arrow(p)) => {
                p.0.degree() <= *deg && p.0.iter().all(|(a, _)| d.contains(a)) && c.contains(&p.1)
            }
            (Shape::Generated(w, _), _) => w.contains(l),
            _ => false,
        }
    }

    /// The web, materialised once. Fails for webs above [`MAX_WEB`].
    pub fn web(&self) -> Result<Arc<Web>> {
        self.0.web.get_or_init(|| self.build_web()).clone()
    }

    fn build_web(&self) -> Result<Arc<Web>> {
        let size = self.web_size();
        if size > BigInt::from(MAX_WEB) {
            return Err(Error::Capability(format!("web of {self} has {size} elements")));
        }
        let elements = match &self.0.shape {
            Shape::One => vec![Label::atom("*")],
            Shape::Bool => vec![Label::atom("t"), Label::atom("f")],
            Shape::Nat(w) => return Ok(Arc::new(Web::nat(*w))),
            Shape::Product(cs) => {
                let mut v = Vec::new();
                for (i, c) in cs.iter().enumerate() {
                    v.extend(c.web()?.elements().iter().map(|a| Label::tagged(i as u32, a.clone())));
                }
                v
            }
            Shape::Arrow(d, c, deg) => {
                let cod = c.web()?;
                let mut v = Vec::new();
                for mu in enum_multisets(&*d.web()?, *deg) {
                    v.extend(cod.elements().iter().map(|b| Label::arrow(mu.clone(), b.clone())));
                }
                v
            }
            Shape::Generated(w, _) => return Ok(w.clone()),
        };
        Ok(Arc::new(Web::new(elements)?))
    }

    /// A finite generator list whose bipolar is the clique set, when one exists.
    /// Arrow spaces have none.
    pub fn generators(&self) -> Result<Option<Vec<SparseVec>>> {
        let basis = |d: &PcsDescriptor| -> Result<Vec<SparseVec>> {
            let w = d.web()?;
            w.elements().iter().map(|l| SparseVec::basis(w.clone(), l)).collect()
        };
        Ok(Some(match &self.0.shape {
            Shape::One | Shape::Bool | Shape::Nat(_) => basis(self)?,
            Shape::Generated(_, g) => g.clone(),
            Shape::Arrow(..) => return Ok(None),
            Shape::Product(cs) => {
                let web = self.web()?;
                let mut acc: Vec<Vec<(Label, crate::algebra::Q)>> = vec![Vec::new()];
                for (i, c) in cs.iter().enumerate() {
                    let Some(mut gs) = c.generators()? else { return Ok(None) };
                    if gs.is_empty() {
                        gs.push(SparseVec::zeros(c.web()?));
                    }
                    let mut next = Vec::with_capacity(acc.len() * gs.len());
                    for prefix in &acc {
                        for g in &gs {
                            let mut e = prefix.clone();
                            e.extend(g.iter().map(|(l, q)| (Label::tagged(i as u32, l.clone()), q.clone())));
                            next.push(e);
                        }
                    }
                    acc = next;
                }
                acc.into_iter()
                    .map(|e| SparseVec::from_entries(web.clone(), e))
                    .collect::<Result<_>>()?
            }
        }))
    }

    /// Tagged injection of a component vector into a product web.
    pub fn inject(&self, i: usize, x: &SparseVec) -> Result<SparseVec> {
        let Shape::Product(cs) = &self.0.shape else {
            return Err(Error::Structural(format!("{self} is not a product")));
        };
        if i >= cs.len() || **x.web() != *cs[i].web()? {
            return Err(Error::WebMismatch(format!("component {i} of {self}")));
        }
        SparseVec::from_entries(
            self.web()?,
            x.iter().map(|(l, q)| (Label::tagged(i as u32, l.clone()), q.clone())),
        )
    }

    /// Assemble a product point from component points.
    pub fn tuple(&self, parts: &[SparseVec]) -> Result<SparseVec> {
        let mut out = SparseVec::zeros(self.web()?);
        for (i, p) in parts.iter().enumerate() {
            out = out.add(&self.inject(i, p)?)?;
        }
        Ok(out)
    }

    /// Component `i` of a product point.
    pub fn component(&self, i: usize, x: &SparseVec) -> Result<SparseVec> {
        let Shape::Product(cs) = &self.0.shape else {
            return Err(Error::Structural(format!("{self} is not a product")));
        };
        let c = cs.get(i).ok_or_else(|| Error::WebMismatch(format!("no component {i}")))?;
        let entries = x
            .iter()
            .filter_map(|(l, q)| match l.as_tagged() {
                Some((t, a)) if t as usize == i => Some((a.clone(), q.clone())),
                _ => None,
            })
            .collect::<Vec<_>>();
        SparseVec::from_entries(c.web()?, entries)
    }
}

impl PartialEq for PcsDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.shape == other.0.shape
    }
}

impl Eq for PcsDescriptor {}

impl fmt::Display for PcsDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.shape {
            Shape::One => f.write_str("One"),
            Shape::Bool => f.write_str("Bool"),
            Shape::Nat(w) => write!(f, "Nat({w})"),
            Shape::Product(cs) => {
                f.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" × ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
            Shape::Arrow(d, c, deg) => write!(f, "({d} ⇒{deg} {c})"),
            Shape::Generated(w, g) => write!(f, "Generated(|web|={}, {} generators)", w.len(), g.len()),
        }
    }
}

impl fmt::Debug for PcsDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
enum ShapeRepr {
    One,
    Bool,
    Nat {
        cutoff: u64,
    },
    Product {
        components: Vec<PcsDescriptor>,
    },
    Arrow {
        dom: PcsDescriptor,
        cod: PcsDescriptor,
        degree: u32,
    },
    Generated {
        web: Vec<Label>,
        generators: Vec<Vec<(Label, String)>>,
    },
}

impl TryFrom<ShapeRepr> for PcsDescriptor {
    type Error = Error;

    fn try_from(r: ShapeRepr) -> Result<Self> {
        Ok(match r {
            ShapeRepr::One => Self::one(),
            ShapeRepr::Bool => Self::bool(),
            ShapeRepr::Nat { cutoff } => Self::nat(cutoff),
            ShapeRepr::Product { components } => Self::product(components),
            ShapeRepr::Arrow { dom, cod, degree } => Self::arrow(dom, cod, degree),
            ShapeRepr::Generated { web, generators } => {
                let web = Arc::new(Web::new(web)?);
                let gens = generators
                    .into_iter()
                    .map(|entries| {
                        let mut seen = std::collections::HashSet::new();
                        let parsed = entries
                            .into_iter()
                            .map(|(l, q)| {
                                if !seen.insert(l.clone()) {
                                    return Err(Error::Parse(format!("duplicate entry for `{l}`")));
                                }
                                Ok((l, parse_nonneg_q(&q)?))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        SparseVec::from_entries(web.clone(), parsed)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::generated(web, gens)?
            }
        })
    }
}

impl From<PcsDescriptor> for ShapeRepr {
    fn from(d: PcsDescriptor) -> Self {
        match d.shape() {
            Shape::One => ShapeRepr::One,
            Shape::Bool => ShapeRepr::Bool,
            Shape::Nat(w) => ShapeRepr::Nat { cutoff: *w },
            Shape::Product(cs) => ShapeRepr::Product { components: cs.clone() },
            Shape::Arrow(a, b, k) => ShapeRepr::Arrow { dom: a.clone(), cod: b.clone(), degree: *k },
            Shape::Generated(w, g) => ShapeRepr::Generated {
                web: w.elements().to_vec(),
                generators: g
                    .iter()
                    .map(|v| v.iter().map(|(l, q)| (l.clone(), format_q(q))).collect())
                    .collect(),
            },
        }
    }
}
