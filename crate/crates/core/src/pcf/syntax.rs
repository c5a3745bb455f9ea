use std::fmt;
use std::sync::Arc;

/// Simple types: `N` and arrows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Type {
    N,
    Arrow(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn arrow(a: Type, b: Type) -> Self {
        Type::Arrow(Arc::new(a), Arc::new(b))
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::N => f.write_str("N"),
            Type::Arrow(a, b) => match **a {
                Type::N => write!(f, "N -> {b}"),
                _ => write!(f, "({a}) -> {b}"),
            },
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Terms of PCF with fair binary choice.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Arc<str>),
    Lam(Arc<str>, Type, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    Y(Arc<Term>),
    Ifz(Arc<Term>, Arc<Term>, Arc<Term>),
    Let(Arc<str>, Arc<Term>, Arc<Term>),
    Choice(Arc<Term>, Arc<Term>),
    Num(u64),
    Succ(Arc<Term>),
    Pred(Arc<Term>),
}

impl Term {
    pub fn var(x: &str) -> Self {
        Term::Var(Arc::from(x))
    }

    pub fn lam(x: &str, ty: Type, body: Term) -> Self {
        Term::Lam(Arc::from(x), ty, Arc::new(body))
    }

    pub fn app(f: Term, a: Term) -> Self {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn y(f: Term) -> Self {
        Term::Y(Arc::new(f))
    }

    pub fn ifz(c: Term, z: Term, s: Term) -> Self {
        Term::Ifz(Arc::new(c), Arc::new(z), Arc::new(s))
    }

    pub fn let_(x: &str, m: Term, body: Term) -> Self {
        Term::Let(Arc::from(x), Arc::new(m), Arc::new(body))
    }

    pub fn choice(a: Term, b: Term) -> Self {
        Term::Choice(Arc::new(a), Arc::new(b))
    }

    pub fn succ(t: Term) -> Self {
        Term::Succ(Arc::new(t))
    }

    pub fn pred(t: Term) -> Self {
        Term::Pred(Arc::new(t))
    }

    /// `Y (λy:N. y)`, the divergent term of type `N`.
    pub fn omega() -> Self {
        Term::y(Term::lam("y", Type::N, Term::var("y")))
    }

    /// `self[v/x]` for a closed `v`; no capture can occur.
    pub fn subst(&self, x: &str, v: &Arc<Term>) -> Arc<Term> {
        Arc::new(self.subst_inner(x, v))
    }

    fn subst_inner(&self, x: &str, v: &Arc<Term>) -> Term {
        let s = |t: &Arc<Term>| -> Arc<Term> {
            if t.mentions(x) {
                Arc::new(t.subst_inner(x, v))
            } else {
                t.clone()
            }
        };
        match self {
            Term::Var(y) if &**y == x => (**v).clone(),
            Term::Var(_) | Term::Num(_) => self.clone(),
            Term::Lam(y, _, _) if &**y == x => self.clone(),
            Term::Lam(y, ty, b) => Term::Lam(y.clone(), ty.clone(), s(b)),
            Term::App(f, a) => Term::App(s(f), s(a)),
            Term::Y(f) => Term::Y(s(f)),
            Term::Ifz(c, z, n) => Term::Ifz(s(c), s(z), s(n)),
            Term::Let(y, m, b) if &**y == x => Term::Let(y.clone(), s(m), b.clone()),
            Term::Let(y, m, b) => Term::Let(y.clone(), s(m), s(b)),
            Term::Choice(a, b) => Term::Choice(s(a), s(b)),
            Term::Succ(t) => Term::Succ(s(t)),
            Term::Pred(t) => Term::Pred(s(t)),
        }
    }

    /// Whether `x` occurs free.
    pub fn mentions(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => &**y == x,
            Term::Num(_) => false,
            Term::Lam(y, _, b) => &**y != x && b.mentions(x),
            Term::App(a, b) | Term::Choice(a, b) => a.mentions(x) || b.mentions(x),
            Term::Y(t) | Term::Succ(t) | Term::Pred(t) => t.mentions(x),
            Term::Ifz(c, z, n) => c.mentions(x) || z.mentions(x) || n.mentions(x),
            Term::Let(y, m, b) => m.mentions(x) || (&**y != x && b.mentions(x)),
        }
    }

    fn is_atomic(&self) -> bool {
        matches!(
            self,
            Term::Var(_) | Term::Num(_) | Term::Succ(_) | Term::Pred(_) | Term::Ifz(..) | Term::Let(..)
        )
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atom = |f: &mut fmt::Formatter<'_>, t: &Term| {
            if t.is_atomic() {
                write!(f, "{t}")
            } else {
                write!(f, "({t})")
            }
        };
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Num(n) => write!(f, "{n}"),
            Term::Lam(x, ty, b) => write!(f, "\\{x}:{ty}. {b}"),
            Term::App(a, b) => {
                match **a {
                    Term::App(..) | Term::Y(_) => write!(f, "{a}")?,
                    _ => atom(f, a)?,
                }
                f.write_str(" ")?;
                atom(f, b)
            }
            Term::Y(t) => {
                f.write_str("Y ")?;
                atom(f, t)
            }
            Term::Ifz(c, z, n) => write!(f, "ifz({c}, {z}, {n})"),
            Term::Let(x, m, b) => write!(f, "let({x}, {m}, {b})"),
            Term::Choice(a, b) => {
                match **a {
                    Term::Choice(..) | Term::Lam(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                write!(f, " (+) {b}")
            }
            Term::Succ(t) => write!(f, "succ({t})"),
            Term::Pred(t) => write!(f, "pred({t})"),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
