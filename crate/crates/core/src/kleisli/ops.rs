use std::collections::{BTreeSet, HashMap};

use num_traits::One;

use super::{Morphism, Truncated};
use crate::algebra::{Label, Multiset, Polynomial, Q};
use crate::exec::Exec;
use crate::pcs::{PcsDescriptor, Shape};
use crate::{Error, Result};

/// Dereliction: coefficient 1 at `([a], a)`.
pub fn identity(x: &PcsDescriptor, degree: u32) -> Result<Morphism> {
    let mut f = Morphism::zero(x.clone(), x.clone(), degree.max(1));
    for a in x.web()?.elements() {
        f.set_row_unchecked(a.clone(), Polynomial::variable(a.clone()));
    }
    Ok(f)
}

/// `Π_{b∈ν} f_b` for every `ν` in `nus`, each truncated at `degree`.
///
/// Products are built level by level from their prefix `ν − max(ν)`, so each
/// level is one batch of independent multiplications.
fn powers(
    f: &Morphism,
    nus: impl IntoIterator<Item = Multiset>,
    degree: u32,
    exec: Exec,
) -> HashMap<Multiset, (Polynomial, bool)> {
    let mut needed: BTreeSet<Multiset> = BTreeSet::new();
    for nu in nus {
        let mut cur = nu;
        while needed.insert(cur.clone()) {
            match cur.split_last() {
                Some((rest, _)) => cur = rest,
                None => break,
            }
        }
    }
    let mut memo: HashMap<Multiset, (Polynomial, bool)> = HashMap::new();
    memo.insert(Multiset::empty(), (Polynomial::constant(Q::one()), false));
    let zero = Polynomial::zero();
    let top = needed.iter().map(Multiset::degree).max().unwrap_or(0);
    for k in 1..=top {
        let level: Vec<&Multiset> = needed.iter().filter(|m| m.degree() == k).collect();
        let computed = exec.map(&level, |nu| {
            let (parent, last) = nu.split_last().expect("degree ≥ 1");
            let (pp, dropped) = &memo[&parent];
            let (prod, d) = pp.mul_truncated(f.row(&last).unwrap_or(&zero), degree);
            (prod, *dropped || d)
        });
        for (nu, v) in level.into_iter().zip(computed) {
            memo.insert(nu.clone(), v);
        }
    }
    memo
}

/// Power-series substitution `g ∘ f`, truncated at `degree`.
pub fn compose(g: &Morphism, f: &Morphism, degree: u32) -> Result<Truncated<Morphism>> {
    compose_with(Exec::default(), g, f, degree)
}

pub fn compose_with(exec: Exec, g: &Morphism, f: &Morphism, degree: u32) -> Result<Truncated<Morphism>> {
    if g.dom() != f.cod() {
        return Err(Error::WebMismatch(format!("cannot compose {} after {}", g.dom(), f.cod())));
    }
    let nus: BTreeSet<Multiset> = g.rows().flat_map(|(_, p)| p.terms().map(|(m, _)| m.clone())).collect();
    let pw = powers(f, nus, degree, exec);
    let mut out = Morphism::zero(f.dom().clone(), g.cod().clone(), degree);
    let mut dropped = false;
    for (c, p) in g.rows() {
        let mut row = Polynomial::zero();
        for (nu, coeff) in p.terms() {
            let (prod, d) = &pw[nu];
            dropped |= *d;
            row.add_assign(&prod.scale(coeff));
        }
        out.set_row_unchecked(c.clone(), row);
    }
    Ok(Truncated { value: out, dropped })
}

/// `⟨f_1, …, f_n⟩ : X → X_1 × … × X_n`.
pub fn pair(fs: &[Morphism]) -> Result<Morphism> {
    let Some(first) = fs.first() else {
        return Err(Error::Structural("pairing needs at least one morphism".into()));
    };
    if fs.iter().any(|f| f.dom() != first.dom()) {
        return Err(Error::WebMismatch("paired morphisms must share a domain".into()));
    }
    let cod = PcsDescriptor::product(fs.iter().map(|f| f.cod().clone()).collect());
    let degree = fs.iter().map(Morphism::degree).max().unwrap_or(1);
    let mut out = Morphism::zero(first.dom().clone(), cod, degree);
    for (i, f) in fs.iter().enumerate() {
        for (b, p) in f.rows() {
            out.set_row_unchecked(Label::tagged(i as u32, b.clone()), p.clone());
        }
    }
    Ok(out)
}

/// `π_i : X_0 × … × X_n → X_i`.
pub fn proj(product: &PcsDescriptor, i: usize, degree: u32) -> Result<Morphism> {
    let Shape::Product(cs) = product.shape() else {
        return Err(Error::Structural(format!("{product} is not a product")));
    };
    let comp = cs.get(i).ok_or_else(|| Error::WebMismatch(format!("{product} has no component {i}")))?;
    let mut out = Morphism::zero(product.clone(), comp.clone(), degree.max(1));
    for b in comp.web()?.elements() {
        out.set_row_unchecked(b.clone(), Polynomial::variable(Label::tagged(i as u32, b.clone())));
    }
    Ok(out)
}

fn binary_product(d: &PcsDescriptor) -> Result<(&PcsDescriptor, &PcsDescriptor)> {
    match d.shape() {
        Shape::Product(cs) if cs.len() == 2 => Ok((&cs[0], &cs[1])),
        _ => Err(Error::Structural(format!("{d} is not a binary product"))),
    }
}

/// Split a multiset over `X × Y` into its `X` and `Y` parts.
fn split(mu: &Multiset) -> Result<(Multiset, Multiset)> {
    let mut left = Multiset::empty();
    let mut right = Multiset::empty();
    for (l, c) in mu.iter() {
        match l.as_tagged() {
            Some((0, a)) => left.insert(a.clone(), c),
            Some((1, a)) => right.insert(a.clone(), c),
            _ => return Err(Error::WebMismatch(format!("`{l}` is not in a binary product web"))),
        }
    }
    Ok((left, right))
}

fn join(left: &Multiset, right: &Multiset) -> Multiset {
    left.map(|a| Label::tagged(0, a.clone())).sum(&right.map(|a| Label::tagged(1, a.clone())))
}

/// `Λ f : X → (Y ⇒_D Z)` for `f : X × Y → Z`.
pub fn curry(f: &Morphism, degree: u32) -> Result<Truncated<Morphism>> {
    let (x, y) = binary_product(f.dom())?;
    let arrow = PcsDescriptor::arrow(y.clone(), f.cod().clone(), degree);
    let mut out = Morphism::zero(x.clone(), arrow, degree);
    let mut dropped = false;
    for (mu, c, q) in f.coeffs() {
        let (mx, my) = split(&mu)?;
        if mx.degree() > degree || my.degree() > degree {
            dropped = true;
            continue;
        }
        out.add_coeff(mx, Label::arrow(my, c), q)?;
    }
    Ok(Truncated { value: out, dropped })
}

/// Inverse of [`curry`]: `g : X → (Y ⇒ Z)` becomes `X × Y → Z`.
pub fn uncurry(g: &Morphism, degree: u32) -> Result<Truncated<Morphism>> {
    let Shape::Arrow(y, z, _) = g.cod().shape() else {
        return Err(Error::Structural(format!("{} is not an arrow space", g.cod())));
    };
    let dom = PcsDescriptor::product(vec![g.dom().clone(), y.clone()]);
    let mut out = Morphism::zero(dom, z.clone(), degree);
    let mut dropped = false;
    for (mx, l, q) in g.coeffs() {
        let (my, c) = l.as_arrow().expect("arrow codomain labels");
        let mu = join(&mx, my);
        if mu.degree() > degree {
            dropped = true;
            continue;
        }
        out.add_coeff(mu, c.clone(), q)?;
    }
    Ok(Truncated { value: out, dropped })
}

/// `ev : (Y ⇒ Z) × Y → Z`, coefficient 1 at `([(ν,c)] + ν, c)`.
pub fn eval(arrow: &PcsDescriptor, degree: u32) -> Result<Truncated<Morphism>> {
    let Shape::Arrow(y, z, _) = arrow.shape() else {
        return Err(Error::Structural(format!("{arrow} is not an arrow space")));
    };
    let dom = PcsDescriptor::product(vec![arrow.clone(), y.clone()]);
    let mut out = Morphism::zero(dom, z.clone(), degree);
    let mut dropped = false;
    for l in arrow.web()?.elements() {
        let (nu, c) = l.as_arrow().expect("arrow web");
        let mu = join(&Multiset::singleton(l.clone()), nu);
        if mu.degree() > degree {
            dropped = true;
            continue;
        }
        out.add_coeff(mu, c.clone(), Q::one())?;
    }
    Ok(Truncated { value: out, dropped })
}

/// Application in context: `ev ∘ ⟨fm, arg⟩` without materialising the
/// arrow web. `result_c = Σ_{(ν,c)} fm_{(ν,c)} · Π_{a∈ν} arg_a`.
pub fn apply_curried(fm: &Morphism, arg: &Morphism, degree: u32) -> Result<Truncated<Morphism>> {
    apply_curried_with(Exec::default(), fm, arg, degree)
}

pub fn apply_curried_with(exec: Exec, fm: &Morphism, arg: &Morphism, degree: u32) -> Result<Truncated<Morphism>> {
    let Shape::Arrow(a, b, _) = fm.cod().shape() else {
        return Err(Error::Structural(format!("{} is not an arrow space", fm.cod())));
    };
    if fm.dom() != arg.dom() {
        return Err(Error::WebMismatch("function and argument live in different contexts".into()));
    }
    if a != arg.cod() {
        return Err(Error::WebMismatch(format!("argument in {} where {a} was expected", arg.cod())));
    }
    let pw = powers(arg, fm.rows().map(|(l, _)| l.as_arrow().expect("arrow web").0.clone()), degree, exec);
    let rows: Vec<(&Label, &Polynomial)> = fm.rows().collect();
    let products = exec.map(&rows, |(l, p)| {
        let (nu, c) = l.as_arrow().expect("arrow web");
        let (argp, d) = &pw[nu];
        let (prod, d2) = p.mul_truncated(argp, degree);
        (c.clone(), prod, *d || d2)
    });
    let mut out = Morphism::zero(fm.dom().clone(), b.clone(), degree);
    let mut dropped = false;
    for (c, prod, d) in products {
        dropped |= d;
        out.add_row_unchecked(c, &prod);
    }
    Ok(Truncated { value: out, dropped })
}
