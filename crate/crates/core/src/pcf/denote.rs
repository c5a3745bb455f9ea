//! Power-series semantics.
//!
//! `⟦N⟧ = Nat(W)`, `⟦A → B⟧ = ⟦A⟧ ⇒_D ⟦B⟧`. A term in context `x_0:A_0, …` denotes
//! a morphism from `⟦A_0⟧ × … × ⟦A_{n-1}⟧`; context variable `i` at web element
//! `a` is the label `(i,a)`. Every clause only ever drops nonnegative terms, so
//! each denotation is a lower bound of the untruncated one, nondecreasing in
//! `W`, `D` and `K`.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{typecheck, Context, Term, Type};
use crate::algebra::{Label, Multiset, Polynomial, SparseVec, Q};
use crate::exec::Exec;
use crate::kleisli::{apply_curried_with, Morphism, Truncated};
use crate::pcs::PcsDescriptor;
use crate::{Error, Result};

/// Largest type web a variable occurrence may enumerate.
pub const MAX_VAR_WEB: usize = 200_000;

/// Truncation budgets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DenParams {
    /// `W`: numerals `≥ W` are dropped.
    pub web_cutoff: u64,
    /// `D`: monomials of degree `> D` are dropped.
    pub degree: u32,
    /// `K`: Kleene iterations per fixpoint.
    pub fixpoint_iters: u32,
}

impl Default for DenParams {
    fn default() -> Self {
        DenParams { web_cutoff: 8, degree: 4, fixpoint_iters: 32 }
    }
}

impl DenParams {
    pub fn validate(&self) -> Result<()> {
        if self.web_cutoff == 0 {
            return Err(Error::Domain("web cutoff must be at least 1".into()));
        }
        Ok(())
    }
}

/// Space interpreting a type.
pub fn type_space(ty: &Type, p: &DenParams) -> PcsDescriptor {
    match ty {
        Type::N => PcsDescriptor::nat(p.web_cutoff),
        Type::Arrow(a, b) => PcsDescriptor::arrow(type_space(a, p), type_space(b, p), p.degree),
    }
}

/// Space interpreting a context.
pub fn context_space(ctx: &Context, p: &DenParams) -> PcsDescriptor {
    PcsDescriptor::product(ctx.iter().map(|(_, t)| type_space(t, p)).collect())
}

/// Denotation of a well-typed term in context.
pub fn denote(ctx: &Context, t: &Term, p: &DenParams) -> Result<Truncated<Morphism>> {
    denote_with(Exec::default(), ctx, t, p)
}

pub fn denote_with(exec: Exec, ctx: &Context, t: &Term, p: &DenParams) -> Result<Truncated<Morphism>> {
    p.validate()?;
    typecheck(ctx, t)?;
    let d = Denoter { p: *p, exec };
    let mut dropped = false;
    let value = d.den(ctx, &context_space(ctx, p), t, &mut dropped)?;
    Ok(Truncated { value, dropped })
}

/// Denotation of a closed term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Denotation {
    /// A subprobability vector on `{0,…,W−1}`.
    Vector(SparseVec),
    /// A morphism `⟦A⟧ → ⟦B⟧`.
    Function(Morphism),
}

impl Denotation {
    pub fn as_vector(&self) -> Option<&SparseVec> {
        match self {
            Denotation::Vector(v) => Some(v),
            Denotation::Function(_) => None,
        }
    }

    pub fn as_function(&self) -> Option<&Morphism> {
        match self {
            Denotation::Function(f) => Some(f),
            Denotation::Vector(_) => None,
        }
    }
}

pub fn denote_closed(t: &Term, p: &DenParams) -> Result<Truncated<Denotation>> {
    denote_closed_with(Exec::default(), t, p)
}

pub fn denote_closed_with(exec: Exec, t: &Term, p: &DenParams) -> Result<Truncated<Denotation>> {
    let ty = typecheck(&Vec::new(), t)?;
    let Truncated { value: m, dropped } = denote_with(exec, &Vec::new(), t, p)?;
    let constant = |poly: &Polynomial| poly.coefficient(&Multiset::empty());
    let value = match &ty {
        Type::N => {
            let web = m.cod().web()?;
            let mut v = SparseVec::zeros(web);
            for (b, poly) in m.rows() {
                v.set(b, constant(poly))?;
            }
            Denotation::Vector(v)
        }
        Type::Arrow(a, b) => {
            let mut f = Morphism::zero(type_space(a, p), type_space(b, p), p.degree);
            for (l, poly) in m.rows() {
                let (mu, c) = l.as_arrow().expect("arrow web");
                f.add_coeff(mu.clone(), c.clone(), constant(poly))?;
            }
            Denotation::Function(f)
        }
    };
    Ok(Truncated { value, dropped })
}

struct Denoter {
    p: DenParams,
    exec: Exec,
}

fn num(n: u64) -> Label {
    Label::Num(n)
}

impl Denoter {
    fn space(&self, ty: &Type) -> PcsDescriptor {
        type_space(ty, &self.p)
    }

    fn product(&self, a: &Polynomial, b: &Polynomial, dropped: &mut bool) -> Polynomial {
        let (prod, d) = a.mul_truncated(b, self.p.degree);
        *dropped |= d;
        prod
    }

    fn den(&self, ctx: &Context, gamma: &PcsDescriptor, t: &Term, dropped: &mut bool) -> Result<Morphism> {
        let ty = typecheck(ctx, t)?;
        let cod = self.space(&ty);
        let deg = self.p.degree;
        let w = self.p.web_cutoff;
        let mut out = Morphism::zero(gamma.clone(), cod.clone(), deg);
        match t {
            Term::Num(n) => {
                if *n < w {
                    out.set_row_unchecked(num(*n), Polynomial::constant(Q::one()));
                }
            }
            Term::Var(x) => {
                let i = ctx.iter().rposition(|(y, _)| y == x).expect("typechecked");
                if cod.web_size() > MAX_VAR_WEB.into() {
                    return Err(Error::Capability(format!(
                        "variable `{x}` ranges over {} web elements",
                        cod.web_size()
                    )));
                }
                if deg == 0 {
                    *dropped = true;
                } else {
                    for a in cod.web()?.elements() {
                        let v = Polynomial::variable(Label::tagged(i as u32, a.clone()));
                        out.set_row_unchecked(a.clone(), v);
                    }
                }
            }
            Term::Choice(a, b) => {
                let half = Q::new(1.into(), 2.into());
                for side in [a, b] {
                    for (l, poly) in self.den(ctx, gamma, side, dropped)?.rows() {
                        out.add_row_unchecked(l.clone(), &poly.scale(&half));
                    }
                }
            }
            Term::Succ(s) => {
                for (l, poly) in self.den(ctx, gamma, s, dropped)?.rows() {
                    let n = l.as_num().expect("numeral web");
                    if n + 1 < w {
                        out.set_row_unchecked(num(n + 1), poly.clone());
                    }
                }
            }
            Term::Pred(s) => {
                for (l, poly) in self.den(ctx, gamma, s, dropped)?.rows() {
                    let n = l.as_num().expect("numeral web");
                    out.add_row_unchecked(num(n.saturating_sub(1)), poly);
                }
            }
            Term::Ifz(c, z, s) => {
                let mc = self.den(ctx, gamma, c, dropped)?;
                let mz = self.den(ctx, gamma, z, dropped)?;
                let ms = self.den(ctx, gamma, s, dropped)?;
                let zero_mass = mc.row(&num(0)).cloned().unwrap_or_default();
                let mut pos_mass = Polynomial::zero();
                for (l, poly) in mc.rows() {
                    if l.as_num() != Some(0) {
                        pos_mass.add_assign(poly);
                    }
                }
                for (l, poly) in mz.rows() {
                    out.add_row_unchecked(l.clone(), &self.product(&zero_mass, poly, dropped));
                }
                for (l, poly) in ms.rows() {
                    out.add_row_unchecked(l.clone(), &self.product(&pos_mass, poly, dropped));
                }
            }
            Term::Let(x, m, body) => {
                let mm = self.den(ctx, gamma, m, dropped)?;
                let (inner_ctx, inner_gamma) = extend(ctx, x, Type::N, &self.p);
                let mb = self.den(&inner_ctx, &inner_gamma, body, dropped)?;
                let k = ctx.len() as u32;
                for (l, weight) in mm.rows() {
                    for (c, poly) in mb.rows() {
                        let fixed = substitute_numeral(poly, k, l);
                        out.add_row_unchecked(c.clone(), &self.product(weight, &fixed, dropped));
                    }
                }
            }
            Term::Lam(x, a, body) => {
                let (inner_ctx, inner_gamma) = extend(ctx, x, a.clone(), &self.p);
                let mb = self.den(&inner_ctx, &inner_gamma, body, dropped)?;
                let k = ctx.len() as u32;
                for (mu, c, q) in mb.coeffs() {
                    let mut outer = Multiset::empty();
                    let mut bound = Multiset::empty();
                    for (l, n) in mu.iter() {
                        match l.as_tagged() {
                            Some((i, a)) if i == k => bound.insert(a.clone(), n),
                            _ => outer.insert(l.clone(), n),
                        }
                    }
                    out.add_coeff(outer, Label::arrow(bound, c), q)?;
                }
            }
            Term::App(f, a) => {
                let mf = self.den(ctx, gamma, f, dropped)?;
                let ma = self.den(ctx, gamma, a, dropped)?;
                let r = apply_curried_with(self.exec, &mf, &ma, deg)?;
                *dropped |= r.dropped;
                out = r.value;
            }
            Term::Y(f) => {
                let mf = self.den(ctx, gamma, f, dropped)?;
                let mut h = out;
                for _ in 0..self.p.fixpoint_iters {
                    let r = apply_curried_with(self.exec, &mf, &h, deg)?;
                    *dropped |= r.dropped;
                    if r.value == h {
                        break;
                    }
                    h = r.value;
                }
                out = h;
            }
        }
        Ok(out)
    }
}

fn extend(ctx: &Context, x: &Arc<str>, ty: Type, p: &DenParams) -> (Context, PcsDescriptor) {
    let mut inner = ctx.clone();
    inner.push((x.clone(), ty));
    let gamma = context_space(&inner, p);
    (inner, gamma)
}

/// Evaluate context slot `k` (of type `N`) at the basis vector `e_n`.
fn substitute_numeral(poly: &Polynomial, k: u32, n: &Label) -> Polynomial {
    let mut out = Polynomial::zero();
    'terms: for (mu, q) in poly.terms() {
        let mut rest = Multiset::empty();
        for (l, c) in mu.iter() {
            match l.as_tagged() {
                Some((i, a)) if i == k => {
                    if a != n {
                        continue 'terms;
                    }
                }
                _ => rest.insert(l.clone(), c),
            }
        }
        out.add_term(rest, q.clone());
    }
    out
}

/// Coordinates `0..W` of a closed ground denotation.
pub fn ground_vector(d: &Denotation, cutoff: u64) -> Vec<Q> {
    match d {
        Denotation::Vector(v) => (0..cutoff).map(|n| v.get(&Label::Num(n))).collect(),
        Denotation::Function(_) => vec![Q::zero(); cutoff as usize],
    }
}
