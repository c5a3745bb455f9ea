use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::vector::same_web;
use super::{Label, SparseVec, Web, Q};
use crate::{Error, Result};

/// Nonnegative matrix indexed by `rows × cols`; `(x·u)_b = Σ_a x_{a,b} u_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: Arc<Web>,
    cols: Arc<Web>,
    entries: BTreeMap<(usize, usize), Q>,
}

impl Matrix {
    pub fn zeros(rows: Arc<Web>, cols: Arc<Web>) -> Self {
        Matrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(web: Arc<Web>) -> Self {
        let mut m = Self::zeros(web.clone(), web.clone());
        for i in 0..web.len() {
            m.entries.insert((i, i), Q::from_integer(1.into()));
        }
        m
    }

    /// Dense rows in web order: `rows[a][b] = x_{a,b}`.
    pub fn from_dense(rows: Arc<Web>, cols: Arc<Web>, data: &[Vec<Q>]) -> Result<Self> {
        if data.len() != rows.len() || data.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::WebMismatch("matrix shape does not match its webs".into()));
        }
        let mut m = Self::zeros(rows, cols);
        for (a, row) in data.iter().enumerate() {
            for (b, q) in row.iter().enumerate() {
                m.set_index(a, b, q.clone())?;
            }
        }
        Ok(m)
    }

    pub fn set(&mut self, a: &Label, b: &Label, q: Q) -> Result<()> {
        let i = self.rows.index_of(a).ok_or_else(|| Error::WebMismatch(format!("row `{a}`")))?;
        let j = self.cols.index_of(b).ok_or_else(|| Error::WebMismatch(format!("column `{b}`")))?;
        self.set_index(i, j, q)
    }

    fn set_index(&mut self, i: usize, j: usize, q: Q) -> Result<()> {
        if q.is_negative() {
            return Err(Error::Domain(format!("negative matrix entry {q}")));
        }
        if q.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), q);
        }
        Ok(())
    }

    pub fn get(&self, a: &Label, b: &Label) -> Q {
        match (self.rows.index_of(a), self.cols.index_of(b)) {
            (Some(i), Some(j)) => self.entries.get(&(i, j)).cloned().unwrap_or_else(Q::zero),
            _ => Q::zero(),
        }
    }

    pub fn rows(&self) -> &Arc<Web> {
        &self.rows
    }

    pub fn cols(&self) -> &Arc<Web> {
        &self.cols
    }

    /// Row `a` as a vector over the column web.
    pub fn row(&self, a: &Label) -> SparseVec {
        let mut v = SparseVec::zeros(self.cols.clone());
        if let Some(i) = self.rows.index_of(a) {
            for ((_, j), q) in self.entries.range((i, 0)..(i + 1, 0)) {
                v.add_at(*j, q);
            }
        }
        v
    }
}

/// Exact matrix-vector product.
pub fn mat_apply(m: &Matrix, u: &SparseVec) -> Result<SparseVec> {
    same_web(&m.rows, u.web())?;
    let mut out = SparseVec::zeros(m.cols.clone());
    for ((i, j), q) in &m.entries {
        let ui = u.get_index(*i);
        if !ui.is_zero() {
            out.add_at(*j, &(q * ui));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn bool_web() -> Arc<Web> {
        Arc::new(Web::new(vec![Label::atom("t"), Label::atom("f")]).unwrap())
    }

    #[test]
    fn bool_matrix_examples() {
        let w = bool_web();
        let m = Matrix::from_dense(w.clone(), w.clone(), &[vec![q(1, 2), q(1, 2)], vec![q(1, 1), q(0, 1)]]).unwrap();
        let et = SparseVec::basis(w.clone(), &Label::atom("t")).unwrap();
        assert_eq!(mat_apply(&m, &et).unwrap().to_dense(), vec![q(1, 2), q(1, 2)]);
        let half = SparseVec::from_dense(w.clone(), vec![q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(mat_apply(&m, &half).unwrap().to_dense(), vec![q(3, 4), q(1, 4)]);
        assert_eq!(mat_apply(&Matrix::identity(w.clone()), &half).unwrap(), half);
        assert_eq!(m.row(&Label::atom("f")).to_dense(), vec![q(1, 1), q(0, 1)]);
    }

    #[test]
    fn web_mismatch_is_reported() {
        let m = Matrix::identity(bool_web());
        let u = SparseVec::zeros(Arc::new(Web::nat(2)));
        assert!(matches!(mat_apply(&m, &u), Err(Error::WebMismatch(_))));
    }
}
