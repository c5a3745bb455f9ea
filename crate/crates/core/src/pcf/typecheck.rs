use std::sync::Arc;

use super::{Term, Type};
use crate::{Error, Result};

/// Typing context; later entries shadow earlier ones.
pub type Context = Vec<(Arc<str>, Type)>;

fn fail(t: &Term, message: String) -> Error {
    Error::Type { term: t.to_string(), message }
}

pub fn typecheck(ctx: &Context, t: &Term) -> Result<Type> {
    let expect = |sub: &Term, got: &Type, want: &Type| {
        if got == want {
            Ok(())
        } else {
            Err(fail(sub, format!("expected {want}, found {got}")))
        }
    };
    match t {
        Term::Var(x) => ctx
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, ty)| ty.clone())
            .ok_or_else(|| fail(t, format!("unbound variable `{x}`"))),
        Term::Num(_) => Ok(Type::N),
        Term::Lam(x, ty, body) => {
            let mut inner = ctx.clone();
            inner.push((x.clone(), ty.clone()));
            Ok(Type::arrow(ty.clone(), typecheck(&inner, body)?))
        }
        Term::App(f, a) => match typecheck(ctx, f)? {
            Type::Arrow(dom, cod) => {
                expect(a, &typecheck(ctx, a)?, &dom)?;
                Ok((*cod).clone())
            }
            other => Err(fail(f, format!("applied a term of type {other}"))),
        },
        Term::Y(f) => match typecheck(ctx, f)? {
            Type::Arrow(dom, cod) if dom == cod => Ok((*dom).clone()),
            other => Err(fail(f, format!("fixpoint of a term of type {other}, expected A -> A"))),
        },
        Term::Ifz(c, z, n) => {
            expect(c, &typecheck(ctx, c)?, &Type::N)?;
            let tz = typecheck(ctx, z)?;
            expect(n, &typecheck(ctx, n)?, &tz)?;
            Ok(tz)
        }
        Term::Let(x, m, body) => {
            expect(m, &typecheck(ctx, m)?, &Type::N)?;
            let mut inner = ctx.clone();
            inner.push((x.clone(), Type::N));
            typecheck(&inner, body)
        }
        Term::Choice(a, b) => {
            let ta = typecheck(ctx, a)?;
            expect(b, &typecheck(ctx, b)?, &ta)?;
            Ok(ta)
        }
        Term::Succ(s) | Term::Pred(s) => {
            expect(s, &typecheck(ctx, s)?, &Type::N)?;
            Ok(Type::N)
        }
    }
}

/// Check that `t` is a closed program of type `N`.
pub fn check_program(t: &Term) -> Result<()> {
    match typecheck(&Vec::new(), t)? {
        Type::N => Ok(()),
        other => Err(fail(t, format!("a program must have type N, found {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn ty(src: &str) -> Result<Type> {
        typecheck(&Vec::new(), &parse(src).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(ty(r"\x:N. (0 (+) ifz(x, 1, ifz(x, 0, Omega)))").unwrap(), Type::arrow(Type::N, Type::N));
        assert!(matches!(ty(r"(\x:N.x) (\y:N.y)"), Err(Error::Type { .. })));
        assert_eq!(ty(r"Y (\y:N. 0 (+) succ(y))").unwrap(), Type::N);
        assert!(matches!(ty("x"), Err(Error::Type { .. })));
        assert!(matches!(ty(r"ifz(\x:N.x, 0, 1)"), Err(Error::Type { .. })));
        assert!(matches!(ty(r"Y (\f:N -> N. 0)"), Err(Error::Type { .. })));
        assert_eq!(ty(r"let(x, 3, \y:N. x)").unwrap(), Type::arrow(Type::N, Type::N));
    }

    #[test]
    fn errors_name_the_offending_subterm() {
        match ty(r"succ(\x:N. x)") {
            Err(Error::Type { term, .. }) => assert_eq!(term, r"\x:N. x"),
            other => panic!("{other:?}"),
        }
    }
}
