use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{format_q, parse_nonneg_q, Label, Web, Q};
use crate::{Error, Result};

/// Finitely supported nonnegative vector over a web.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VecRepr", into = "VecRepr")]
pub struct SparseVec {
    web: Arc<Web>,
    entries: BTreeMap<usize, Q>,
}

#[derive(Serialize, Deserialize)]
struct VecRepr {
    web: Vec<Label>,
    entries: Vec<(Label, String)>,
}

impl SparseVec {
    pub fn zeros(web: Arc<Web>) -> Self {
        SparseVec { web, entries: BTreeMap::new() }
    }

    pub fn basis(web: Arc<Web>, l: &Label) -> Result<Self> {
        let mut v = Self::zeros(web);
        v.set(l, Q::from_integer(1.into()))?;
        Ok(v)
    }

    pub fn from_entries(web: Arc<Web>, entries: impl IntoIterator<Item = (Label, Q)>) -> Result<Self> {
        let mut v = Self::zeros(web);
        for (l, q) in entries {
            let i = v.index(&l)?;
            let sum = v.get_index(i) + q;
            v.set_index(i, sum)?;
        }
        Ok(v)
    }

    /// Dense coordinates in web order.
    pub fn from_dense(web: Arc<Web>, coords: Vec<Q>) -> Result<Self> {
        if coords.len() != web.len() {
            return Err(Error::WebMismatch(format!(
                "{} coordinates for a web of size {}",
                coords.len(),
                web.len()
            )));
        }
        let mut v = Self::zeros(web);
        for (i, q) in coords.into_iter().enumerate() {
            v.set_index(i, q)?;
        }
        Ok(v)
    }

    pub fn web(&self) -> &Arc<Web> {
        &self.web
    }

    fn index(&self, l: &Label) -> Result<usize> {
        self.web
            .index_of(l)
            .ok_or_else(|| Error::WebMismatch(format!("label `{l}` is not in the web")))
    }

    /// Coordinate at `l`; zero for labels outside the web.
    pub fn get(&self, l: &Label) -> Q {
        self.web.index_of(l).map(|i| self.get_index(i)).unwrap_or_else(Q::zero)
    }

    pub fn get_index(&self, i: usize) -> Q {
        self.entries.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, l: &Label, q: Q) -> Result<()> {
        let i = self.index(l)?;
        self.set_index(i, q)
    }

    pub fn set_index(&mut self, i: usize, q: Q) -> Result<()> {
        if q.is_negative() {
            return Err(Error::Domain(format!("negative coordinate {q}")));
        }
        if q.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, q);
        }
        Ok(())
    }

    /// Add `q` to coordinate `i`.
    pub fn add_at(&mut self, i: usize, q: &Q) {
        if q.is_zero() {
            return;
        }
        let e = self.entries.entry(i).or_insert_with(Q::zero);
        *e += q;
    }

    /// Nonzero entries in web order.
    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Q)> + '_ {
        self.entries.iter().map(|(&i, q)| (self.web.label(i), q))
    }

    pub fn iter_indexed(&self) -> impl Iterator<Item = (usize, &Q)> + '_ {
        self.entries.iter().map(|(&i, q)| (i, q))
    }

    pub fn support(&self) -> Vec<Label> {
        self.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> Vec<Q> {
        (0..self.web.len()).map(|i| self.get_index(i)).collect()
    }

    /// Sum of all coordinates.
    pub fn total(&self) -> Q {
        self.entries.values().fold(Q::zero(), |a, q| a + q)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zeros(self.web.clone());
        if !c.is_zero() {
            out.entries = self.entries.iter().map(|(&i, q)| (i, q * c)).collect();
        }
        out
    }

    pub fn add(&self, other: &SparseVec) -> Result<Self> {
        same_web(&self.web, &other.web)?;
        let mut out = self.clone();
        for (&i, q) in &other.entries {
            out.add_at(i, q);
        }
        Ok(out)
    }

    /// `self - other`, failing if any coordinate would go negative.
    pub fn sub(&self, other: &SparseVec) -> Result<Self> {
        same_web(&self.web, &other.web)?;
        let mut out = self.clone();
        for (&i, q) in &other.entries {
            let d = out.get_index(i) - q;
            out.set_index(i, d)?;
        }
        Ok(out)
    }
}

pub(crate) fn same_web(a: &Arc<Web>, b: &Arc<Web>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::WebMismatch("vectors live on different webs".into()))
    }
}

/// `⟨u, v⟩ = Σ u_a v_a`. Webs are finite, so the value is always finite.
pub fn scal(u: &SparseVec, v: &SparseVec) -> Result<Q> {
    same_web(&u.web, &v.web)?;
    let (small, big) = if u.nnz() <= v.nnz() { (u, v) } else { (v, u) };
    Ok(small
        .entries
        .iter()
        .filter_map(|(i, q)| big.entries.get(i).map(|r| q * r))
        .fold(Q::zero(), |a, x| a + x))
}

/// Coordinatewise `u ≤ v`.
pub fn leq(u: &SparseVec, v: &SparseVec) -> Result<bool> {
    same_web(&u.web, &v.web)?;
    Ok(u.entries.iter().all(|(&i, q)| *q <= v.get_index(i)))
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.iter().map(|(l, q)| (l.to_string(), format_q(q))))
            .finish()
    }
}

impl TryFrom<VecRepr> for SparseVec {
    type Error = Error;

    fn try_from(r: VecRepr) -> Result<Self> {
        let web = Arc::new(Web::new(r.web)?);
        let mut v = SparseVec::zeros(web);
        for (l, q) in r.entries {
            let q = parse_nonneg_q(&q)?;
            let i = v.index(&l)?;
            if v.entries.contains_key(&i) {
                return Err(Error::Parse(format!("duplicate entry for `{l}`")));
            }
            v.set_index(i, q)?;
        }
        Ok(v)
    }
}

impl From<SparseVec> for VecRepr {
    fn from(v: SparseVec) -> Self {
        VecRepr {
            web: v.web.elements().to_vec(),
            entries: v.iter().map(|(l, q)| (l.clone(), format_q(q))).collect(),
        }
    }
}
