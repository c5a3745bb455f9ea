//! Call-by-name operational semantics.
//!
//! Evaluation contexts `E ::= [] | E N | ifz(E,·,·) | succ(E) | pred(E) | let(x,E,·)`;
//! redexes `(λx.M)N → M[N/x]`, `Y M → M (Y M)`, `ifz(0,N,L) → N`,
//! `ifz(n+1,N,L) → L`, `succ(n) → n+1`, `pred(0) → 0`, `pred(n+1) → n`,
//! `let(x,n,N) → N[n/x]`, and `M ⊕ N` steps to either side with probability ½.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::Term;
use crate::algebra::{format_q, Q};
use crate::exec::Exec;
use crate::rng;

/// One reduction step.
enum Step {
    Value(u64),
    One(Term),
    Two(Term, Term),
    /// Open or ill-typed term; cannot happen for well-typed programs.
    Stuck,
}

fn step(t: &Term) -> Step {
    let wrap = |inner: &Arc<Term>, rebuild: &dyn Fn(Arc<Term>) -> Term| match step(inner) {
        Step::One(a) => Step::One(rebuild(Arc::new(a))),
        Step::Two(a, b) => Step::Two(rebuild(Arc::new(a)), rebuild(Arc::new(b))),
        Step::Value(_) | Step::Stuck => Step::Stuck,
    };
    match t {
        Term::Num(n) => Step::Value(*n),
        Term::Var(_) | Term::Lam(..) => Step::Stuck,
        Term::Choice(a, b) => Step::Two((**a).clone(), (**b).clone()),
        Term::Y(f) => Step::One(Term::App(f.clone(), Arc::new(t.clone()))),
        Term::App(f, a) => match &**f {
            Term::Lam(x, _, body) => Step::One((*body.subst(x, a)).clone()),
            _ => wrap(f, &|f2| Term::App(f2, a.clone())),
        },
        Term::Ifz(c, z, s) => match **c {
            Term::Num(0) => Step::One((**z).clone()),
            Term::Num(_) => Step::One((**s).clone()),
            _ => wrap(c, &|c2| Term::Ifz(c2, z.clone(), s.clone())),
        },
        Term::Succ(c) => match **c {
            Term::Num(n) => Step::One(Term::Num(n + 1)),
            _ => wrap(c, &|c2| Term::Succ(c2)),
        },
        Term::Pred(c) => match **c {
            Term::Num(n) => Step::One(Term::Num(n.saturating_sub(1))),
            _ => wrap(c, &|c2| Term::Pred(c2)),
        },
        Term::Let(x, m, body) => match **m {
            Term::Num(_) => Step::One((*body.subst(x, m)).clone()),
            _ => wrap(m, &|m2| Term::Let(x.clone(), m2, body.clone())),
        },
    }
}

/// Result distribution of a program at a finite budget.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubDistribution {
    pub probs: BTreeMap<u64, Q>,
    /// Mass of branches that have not produced a numeral.
    pub residual: Q,
}

impl SubDistribution {
    pub fn prob(&self, n: u64) -> Q {
        self.probs.get(&n).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terminated(&self) -> Q {
        self.probs.values().sum()
    }

    /// Total mass not on `0..cutoff`, unfinished branches included.
    pub fn mass_outside(&self, cutoff: u64) -> Q {
        self.probs.range(cutoff..).map(|(_, q)| q).sum::<Q>() + &self.residual
    }
}

impl Serialize for SubDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let probs: BTreeMap<u64, String> = self.probs.iter().map(|(k, q)| (*k, format_q(q))).collect();
        let mut st = s.serialize_struct("SubDistribution", 2)?;
        st.serialize_field("probs", &probs)?;
        st.serialize_field("residual", &format_q(&self.residual))?;
        st.end()
    }
}

/// Breadth-complete exploration of the reduction tree, at most `fuel` steps
/// per branch. Identical states reached along different branches are merged.
pub fn eval_exact(t: &Term, fuel: u64) -> SubDistribution {
    eval_exact_with(Exec::default(), t, fuel)
}

pub fn eval_exact_with(exec: Exec, t: &Term, fuel: u64) -> SubDistribution {
    let mut probs: BTreeMap<u64, Q> = BTreeMap::new();
    let mut frontier: Vec<(Term, Q)> = vec![(t.clone(), Q::one())];
    let half = Q::new(1.into(), 2.into());
    let mut stuck = Q::zero();
    for budget in (0..=fuel).rev() {
        let steps = exec.map(&frontier, |(t, p)| (step(t), p.clone()));
        let mut next: HashMap<Term, Q> = HashMap::new();
        let mut order: Vec<Term> = Vec::new();
        let mut push = |t: Term, p: Q| match next.get_mut(&t) {
            Some(q) => *q += p,
            None => {
                order.push(t.clone());
                next.insert(t, p);
            }
        };
        for ((s, p), (orig, _)) in steps.into_iter().zip(&frontier) {
            match s {
                Step::Value(n) => *probs.entry(n).or_insert_with(Q::zero) += p,
                Step::Stuck => stuck += p,
                _ if budget == 0 => push(orig.clone(), p),
                Step::One(a) => push(a, p),
                Step::Two(a, b) => {
                    let h = &p * &half;
                    push(a, h.clone());
                    push(b, h);
                }
            }
        }
        frontier = order
            .into_iter()
            .map(|t| {
                let p = next.remove(&t).expect("recorded");
                (t, p)
            })
            .collect();
        if frontier.is_empty() {
            break;
        }
    }
    let residual = frontier.iter().map(|(_, p)| p).sum::<Q>() + stuck;
    SubDistribution { probs, residual }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Value(u64),
    Timeout,
}

/// One leftmost-outermost run; each choice consumes one [`rng::flip`].
pub fn sample(t: &Term, seed: u64, fuel: u64) -> Outcome {
    sample_with(&mut rng::seeded(seed), t, fuel)
}

pub fn sample_with(r: &mut rng::SeededRng, t: &Term, fuel: u64) -> Outcome {
    let mut cur = t.clone();
    for _ in 0..=fuel {
        match step(&cur) {
            Step::Value(n) => return Outcome::Value(n),
            Step::Stuck => return Outcome::Timeout,
            Step::One(a) => cur = a,
            Step::Two(a, b) => cur = if rng::flip(r) { b } else { a },
        }
    }
    Outcome::Timeout
}

/// `n` independent runs using streams `0..n` of `seed`.
pub fn sample_many(exec: Exec, t: &Term, seed: u64, fuel: u64, n: usize) -> Vec<Outcome> {
    exec.map_range(n, |i| sample_with(&mut rng::stream(seed, i as u64), t, fuel))
}
