use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{format_q, parse_nonneg_q, Label, Multiset, Polynomial, SparseVec, Q};
use crate::exec::Exec;
use crate::pcs::{PcsDescriptor, Shape};
use crate::{Error, Result};

/// A value together with whether degree truncation discarded any nonzero
/// (hence nonnegative) mass while producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncated<T> {
    pub value: T,
    pub dropped: bool,
}

impl<T> Truncated<T> {
    pub fn exact(value: T) -> Self {
        Truncated { value, dropped: false }
    }
}

/// Power-series morphism `dom → cod`: `(f·x^!)_b = Σ_μ f_{μ,b} x^μ` with every
/// monomial of degree at most `degree`.
///
/// Coefficients are stored per output element as polynomials in the domain
/// web's labels. Webs are checked structurally, so morphisms between spaces
/// with astronomically large webs are fine as long as they are sparse.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MorphismRepr", into = "MorphismRepr")]
pub struct Morphism {
    dom: PcsDescriptor,
    cod: PcsDescriptor,
    degree: u32,
    rows: BTreeMap<Label, Polynomial>,
}

#[derive(Serialize, Deserialize)]
struct CoeffRepr {
    mu: Multiset,
    b: Label,
    val: String,
}

#[derive(Serialize, Deserialize)]
struct MorphismRepr {
    dom: PcsDescriptor,
    cod: PcsDescriptor,
    degree: u32,
    coeffs: Vec<CoeffRepr>,
}

impl Morphism {
    pub fn zero(dom: PcsDescriptor, cod: PcsDescriptor, degree: u32) -> Self {
        Morphism { dom, cod, degree, rows: BTreeMap::new() }
    }

    pub fn from_coeffs(
        dom: PcsDescriptor,
        cod: PcsDescriptor,
        degree: u32,
        coeffs: impl IntoIterator<Item = (Multiset, Label, Q)>,
    ) -> Result<Self> {
        let mut f = Self::zero(dom, cod, degree);
        for (mu, b, q) in coeffs {
            f.add_coeff(mu, b, q)?;
        }
        Ok(f)
    }

    /// Add `q` to the coefficient at `(μ, b)`.
    pub fn add_coeff(&mut self, mu: Multiset, b: Label, q: Q) -> Result<()> {
        if q.is_negative() {
            return Err(Error::Domain(format!("negative coefficient {q}")));
        }
        if mu.degree() > self.degree {
            return Err(Error::DegreeOverflow(format!(
                "monomial {mu:?} exceeds degree {}",
                self.degree
            )));
        }
        if let Some((a, _)) = mu.iter().find(|(a, _)| !self.dom.contains(a)) {
            return Err(Error::WebMismatch(format!("`{a}` is not in the web of {}", self.dom)));
        }
        if !self.cod.contains(&b) {
            return Err(Error::WebMismatch(format!("`{b}` is not in the web of {}", self.cod)));
        }
        if !q.is_zero() {
            self.rows.entry(b).or_default().add_term(mu, q);
        }
        Ok(())
    }

    /// Install a whole output row; the caller guarantees variables and degrees.
    pub(crate) fn set_row_unchecked(&mut self, b: Label, p: Polynomial) {
        if p.is_zero() {
            self.rows.remove(&b);
        } else {
            self.rows.insert(b, p);
        }
    }

    pub(crate) fn add_row_unchecked(&mut self, b: Label, p: &Polynomial) {
        if !p.is_zero() {
            self.rows.entry(b).or_default().add_assign(p);
        }
    }

    pub fn dom(&self) -> &PcsDescriptor {
        &self.dom
    }

    pub fn cod(&self) -> &PcsDescriptor {
        &self.cod
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coefficient(&self, mu: &Multiset, b: &Label) -> Q {
        self.rows.get(b).map(|p| p.coefficient(mu)).unwrap_or_else(Q::zero)
    }

    /// Output row `b` as a polynomial in the domain labels.
    pub fn row(&self, b: &Label) -> Option<&Polynomial> {
        self.rows.get(b)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Label, &Polynomial)> + '_ {
        self.rows.iter()
    }

    /// Nonzero coefficients in canonical `(μ, b)` order.
    pub fn coeffs(&self) -> Vec<(Multiset, Label, Q)> {
        let mut v: Vec<(Multiset, Label, Q)> = self
            .rows
            .iter()
            .flat_map(|(b, p)| p.terms().map(move |(mu, q)| (mu.clone(), b.clone(), q.clone())))
            .collect();
        v.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
        v
    }

    pub fn nnz(&self) -> usize {
        self.rows.values().map(Polynomial::len).sum()
    }

    /// Largest degree of any stored monomial.
    pub fn max_degree(&self) -> u32 {
        self.rows.values().filter_map(Polynomial::max_degree).max().unwrap_or(0)
    }

    /// Same coefficients, new degree bound; terms above it are dropped.
    pub fn with_degree(&self, degree: u32) -> Truncated<Morphism> {
        let mut out = self.clone();
        out.degree = degree;
        let mut dropped = false;
        for p in out.rows.values_mut() {
            dropped |= p.truncate(degree);
        }
        out.rows.retain(|_, p| !p.is_zero());
        Truncated { value: out, dropped }
    }

    /// `f · x^!`, exact. A lower bound for the untruncated series.
    pub fn apply(&self, x: &SparseVec) -> Result<SparseVec> {
        let dom = self.dom.web()?;
        if **x.web() != *dom {
            return Err(Error::WebMismatch(format!("point is not over the web of {}", self.dom)));
        }
        let cod = self.cod.web()?;
        let mut out = SparseVec::zeros(cod.clone());
        for (b, p) in &self.rows {
            let v = p.eval(x);
            if !v.is_zero() {
                let i = cod.index_of(b).expect("rows are checked against the codomain");
                out.add_at(i, &v);
            }
        }
        Ok(out)
    }

    /// Apply to many points; results in input order.
    pub fn apply_batch(&self, exec: Exec, xs: &[SparseVec]) -> Result<Vec<SparseVec>> {
        exec.map(xs, |x| self.apply(x)).into_iter().collect()
    }

    /// Reinterpret a clique of `dom ⇒ cod` as the morphism it denotes.
    pub fn from_point(arrow: &PcsDescriptor, x: &SparseVec) -> Result<Self> {
        let Shape::Arrow(dom, cod, degree) = arrow.shape() else {
            return Err(Error::Structural(format!("{arrow} is not an arrow space")));
        };
        let mut f = Morphism::zero(dom.clone(), cod.clone(), *degree);
        for (l, q) in x.iter() {
            let (mu, b) = l
                .as_arrow()
                .ok_or_else(|| Error::WebMismatch(format!("`{l}` is not an arrow-web element")))?;
            f.add_coeff(mu.clone(), b.clone(), q.clone())?;
        }
        Ok(f)
    }

    /// The clique of `dom ⇒_degree cod` carrying these coefficients.
    pub fn to_point(&self) -> Result<SparseVec> {
        let arrow = PcsDescriptor::arrow(self.dom.clone(), self.cod.clone(), self.degree);
        SparseVec::from_entries(
            arrow.web()?,
            self.coeffs().into_iter().map(|(mu, b, q)| (Label::arrow(mu, b), q)),
        )
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({} → {}, D={}) {{", self.dom, self.cod, self.degree)?;
        for (i, (mu, b, q)) in self.coeffs().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({mu:?},{b}): {}", format_q(q))?;
        }
        f.write_str("}")
    }
}

impl TryFrom<MorphismRepr> for Morphism {
    type Error = Error;

    fn try_from(r: MorphismRepr) -> Result<Self> {
        let mut f = Morphism::zero(r.dom, r.cod, r.degree);
        let mut seen = std::collections::HashSet::new();
        for c in r.coeffs {
            if !seen.insert((c.mu.clone(), c.b.clone())) {
                return Err(Error::Parse(format!("duplicate coefficient at ({:?},{})", c.mu, c.b)));
            }
            f.add_coeff(c.mu, c.b, parse_nonneg_q(&c.val)?)?;
        }
        Ok(f)
    }
}

impl From<Morphism> for MorphismRepr {
    fn from(f: Morphism) -> Self {
        MorphismRepr {
            coeffs: f
                .coeffs()
                .into_iter()
                .map(|(mu, b, q)| CoeffRepr { mu, b, val: format_q(&q) })
                .collect(),
            dom: f.dom,
            cod: f.cod,
            degree: f.degree,
        }
    }
}
