use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Multiset;
use crate::{Error, Result};

/// Element of a web.
///
/// Text forms: `3` (numeral), `t` (atom), `(1,a)` (tagged product component),
/// `([a,a],b)` (arrow-web element: a finite multiset and an output).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Label {
    Num(u64),
    Atom(Arc<str>),
    Tagged(u32, Arc<Label>),
    Arrow(Arc<(Multiset, Label)>),
}

impl Label {
    pub fn atom(name: &str) -> Self {
        Label::Atom(Arc::from(name))
    }

    pub fn tagged(tag: u32, inner: Label) -> Self {
        Label::Tagged(tag, Arc::new(inner))
    }

    pub fn arrow(mu: Multiset, out: Label) -> Self {
        Label::Arrow(Arc::new((mu, out)))
    }

    pub fn as_num(&self) -> Option<u64> {
        match self {
            Label::Num(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_arrow(&self) -> Option<(&Multiset, &Label)> {
        match self {
            Label::Arrow(p) => Some((&p.0, &p.1)),
            _ => None,
        }
    }

    pub fn as_tagged(&self) -> Option<(u32, &Label)> {
        match self {
            Label::Tagged(t, l) => Some((*t, l)),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Label::Num(_) => 0,
            Label::Atom(_) => 1,
            Label::Tagged(..) => 2,
            Label::Arrow(_) => 3,
        }
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Label::Num(a), Label::Num(b)) => a.cmp(b),
            (Label::Atom(a), Label::Atom(b)) => a.cmp(b),
            (Label::Tagged(i, a), Label::Tagged(j, b)) => i.cmp(j).then_with(|| a.cmp(b)),
            (Label::Arrow(a), Label::Arrow(b)) => a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Num(n) => write!(f, "{n}"),
            Label::Atom(s) => f.write_str(s),
            Label::Tagged(i, l) => write!(f, "({i},{l})"),
            Label::Arrow(p) => {
                f.write_str("([")?;
                for (k, a) in p.0.elements().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, "],{})", p.1)
            }
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct LabelParser<'a> {
    src: &'a str,
    pos: usize,
}

impl LabelParser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("bad label `{}`: {what} at byte {}", self.src, self.pos))
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn label(&mut self) -> Result<Label> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                if self.peek() == Some(b'[') {
                    self.pos += 1;
                    let mut elems = Vec::new();
                    if self.peek() != Some(b']') {
                        loop {
                            elems.push(self.label()?);
                            if self.peek() == Some(b',') {
                                self.pos += 1;
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(b']')?;
                    self.expect(b',')?;
                    let out = self.label()?;
                    self.expect(b')')?;
                    Ok(Label::arrow(Multiset::from_elements(elems), out))
                } else {
                    let start = self.pos;
                    while matches!(self.peek(), Some(b'0'..=b'9')) {
                        self.pos += 1;
                    }
                    let tag: u32 = self.src[start..self.pos]
                        .parse()
                        .map_err(|_| self.err("expected tag"))?;
                    self.expect(b',')?;
                    let inner = self.label()?;
                    self.expect(b')')?;
                    Ok(Label::tagged(tag, inner))
                }
            }
            Some(_) => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if matches!(c, b'(' | b')' | b'[' | b']' | b',') || c.is_ascii_whitespace() {
                        break;
                    }
                    self.pos += 1;
                }
                let word = &self.src[start..self.pos];
                if word.is_empty() {
                    return Err(self.err("empty label"));
                }
                if word.bytes().all(|b| b.is_ascii_digit()) {
                    word.parse().map(Label::Num).map_err(|_| self.err("numeral too large"))
                } else {
                    Ok(Label::atom(word))
                }
            }
            None => Err(self.err("unexpected end")),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = LabelParser { src: s.trim(), pos: 0 };
        let l = p.label()?;
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(l)
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite, ordered, duplicate-free set of labels.
#[derive(Clone)]
pub struct Web {
    elements: Vec<Label>,
    index: HashMap<Label, usize>,
}

impl Web {
    pub fn new(elements: Vec<Label>) -> Result<Self> {
        let mut index = HashMap::with_capacity(elements.len());
        for (i, l) in elements.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Parse(format!("duplicate web element `{l}`")));
            }
        }
        Ok(Web { elements, index })
    }

    /// `{0, …, cutoff-1}`.
    pub fn nat(cutoff: u64) -> Self {
        Web::new((0..cutoff).map(Label::Num).collect()).expect("distinct numerals")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Label] {
        &self.elements
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.elements[i]
    }

    pub fn index_of(&self, l: &Label) -> Option<usize> {
        self.index.get(l).copied()
    }

    pub fn contains(&self, l: &Label) -> bool {
        self.index.contains_key(l)
    }
}

impl PartialEq for Web {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Web {}

impl fmt::Debug for Web {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.elements).finish()
    }
}
