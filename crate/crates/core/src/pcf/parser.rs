//! Concrete syntax.
//!
//! ```text
//! term  := (lam | app) [ "(+)" term ]
//! lam   := "\" ident ":" type "." term
//! app   := atom { atom }
//! atom  := ident | number | "(" term ")" | "Y" atom | "Omega"
//!        | "succ" "(" term ")" | "pred" "(" term ")"
//!        | "ifz" "(" term "," term "," term ")" | "let" "(" ident "," term "," term ")"
//! type  := tatom [ "->" type ]
//! tatom := "N" | "(" type ")"
//! ```
//!
//! `λ` and `⊕` are accepted for `\` and `(+)`. `#` starts a line comment.

use super::{Term, Type};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Lambda,
    Plus,
    Arrow,
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

const KEYWORDS: [&str; 6] = ["Y", "succ", "pred", "ifz", "let", "Omega"];

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| Error::Syntax { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok, n: usize, i: &mut usize, col: &mut usize| {
            out.push(Token { tok, line: l0, column: c0 });
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' if chars.get(i + 1) == Some(&'+') && chars.get(i + 2) == Some(&')') => {
                push(Tok::Plus, 3, &mut i, &mut col)
            }
            '⊕' => push(Tok::Plus, 1, &mut i, &mut col),
            '\\' | 'λ' => push(Tok::Lambda, 1, &mut i, &mut col),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2, &mut i, &mut col),
            '→' => push(Tok::Arrow, 1, &mut i, &mut col),
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            ':' => push(Tok::Colon, 1, &mut i, &mut col),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse().map_err(|_| err(l0, c0, format!("numeral `{text}` is too large")))?;
                col += i - start;
                out.push(Token { tok: Tok::Num(n), line: l0, column: c0 });
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                col += i - start;
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, column: c0 });
            }
            other => return Err(err(l0, c0, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let t = &self.toks[self.pos];
        Error::Syntax { line: t.line, column: t.column, message: message.into() }
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Eof => "end of input".into(),
            t => format!("{t:?}"),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", self.describe())))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected a variable, found {}", self.describe()))),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let left = if *self.peek() == Tok::Lambda { self.lam()? } else { self.app()? };
        if *self.peek() == Tok::Plus {
            self.pos += 1;
            let right = self.term()?;
            return Ok(Term::choice(left, right));
        }
        Ok(left)
    }

    fn lam(&mut self) -> Result<Term> {
        self.expect(Tok::Lambda, "`\\`")?;
        let x = self.ident()?;
        self.expect(Tok::Colon, "`:`")?;
        let ty = self.ty()?;
        self.expect(Tok::Dot, "`.`")?;
        let body = self.term()?;
        Ok(Term::lam(&x, ty, body))
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Num(_) | Tok::LParen)
    }

    fn app(&mut self) -> Result<Term> {
        if !self.starts_atom() {
            return Err(self.error(format!("expected a term, found {}", self.describe())));
        }
        let mut t = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.pos += 1;
                Ok(Term::Num(n))
            }
            Tok::LParen => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::Ident(s) => match s.as_str() {
                "Y" => {
                    self.pos += 1;
                    if !self.starts_atom() {
                        return Err(self.error("`Y` needs an argument"));
                    }
                    Ok(Term::y(self.atom()?))
                }
                "Omega" => {
                    self.pos += 1;
                    Ok(Term::omega())
                }
                "succ" | "pred" => {
                    self.pos += 1;
                    self.expect(Tok::LParen, "`(`")?;
                    let t = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(if s == "succ" { Term::succ(t) } else { Term::pred(t) })
                }
                "ifz" => {
                    self.pos += 1;
                    self.expect(Tok::LParen, "`(`")?;
                    let c = self.term()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let z = self.term()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let n = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term::ifz(c, z, n))
                }
                "let" => {
                    self.pos += 1;
                    self.expect(Tok::LParen, "`(`")?;
                    let x = self.ident()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let m = self.term()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let b = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term::let_(&x, m, b))
                }
                _ => {
                    self.pos += 1;
                    Ok(Term::var(&s))
                }
            },
            _ => Err(self.error(format!("expected a term, found {}", self.describe()))),
        }
    }

    fn ty(&mut self) -> Result<Type> {
        let left = match self.peek() {
            Tok::LParen => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                t
            }
            _ if self.is_keyword("N") => {
                self.pos += 1;
                Type::N
            }
            _ => return Err(self.error(format!("expected a type, found {}", self.describe()))),
        };
        if *self.peek() == Tok::Arrow {
            self.pos += 1;
            return Ok(Type::arrow(left, self.ty()?));
        }
        Ok(left)
    }
}

pub fn parse(src: &str) -> Result<Term> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("unexpected {} after a complete term", p.describe())));
    }
    Ok(t)
}

pub fn parse_type(src: &str) -> Result<Type> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let t = p.ty()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("unexpected {} after a complete type", p.describe())));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(parse("0 (+) 1").unwrap(), Term::choice(Term::Num(0), Term::Num(1)));
        let m = parse(r"\x:N. (0 (+) ifz(x, 1, ifz(x, 0, Omega)))").unwrap();
        let x = Term::var("x");
        let want = Term::lam(
            "x",
            Type::N,
            Term::choice(Term::Num(0), Term::ifz(x.clone(), Term::Num(1), Term::ifz(x, Term::Num(0), Term::omega()))),
        );
        assert_eq!(m, want);
        assert!(matches!(parse("let(x, 0 (+) 1, ifz(x, 1, 0))").unwrap(), Term::Let(..)));
    }

    #[test]
    fn precedence_and_associativity() {
        let t = parse("f x y (+) 1 (+) 2").unwrap();
        let fxy = Term::app(Term::app(Term::var("f"), Term::var("x")), Term::var("y"));
        assert_eq!(t, Term::choice(fxy, Term::choice(Term::Num(1), Term::Num(2))));
        assert_eq!(parse_type("N -> N -> N").unwrap(), Type::arrow(Type::N, Type::arrow(Type::N, Type::N)));
        assert_eq!(parse_type("(N -> N) -> N").unwrap(), Type::arrow(Type::arrow(Type::N, Type::N), Type::N));
        assert_eq!(parse("Y f 3").unwrap(), Term::app(Term::y(Term::var("f")), Term::Num(3)));
    }

    #[test]
    fn errors_carry_positions() {
        match parse("ifz(0, 1\n  )") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("\\succ:N. 0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("0 $ 1"), Err(Error::Syntax { line: 1, column: 3, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { .. })));
    }

    #[test]
    fn display_round_trips() {
        for src in [
            r"\x:N. 0 (+) ifz(x, 1, ifz(x, 0, Y (\y:N. y)))",
            r"(\f:N -> N. f (f 0)) (\x:N. succ(x))",
            r"Y (\f:N -> N. \n:N. ifz(n, 0, f (pred(n)))) 3",
            r"let(x, 0 (+) 1, (0 (+) 1) (+) x)",
            r"\g:(N -> N) -> N. g (\z:N. z)",
        ] {
            let t = parse(src).unwrap();
            assert_eq!(parse(&t.to_string()).unwrap(), t, "{t}");
        }
    }
}
