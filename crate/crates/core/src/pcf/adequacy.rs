use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::{check_program, denote_closed_with, eval_exact_with, ground_vector, DenParams, SubDistribution, Term};
use crate::algebra::{format_q, Q};
use crate::exec::Exec;
use crate::{Error, Result};

fn ser_q<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_q(q))
}

fn ser_qs<S: Serializer>(qs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(format_q))
}

/// Operational and denotational values at one budget pair.
#[derive(Clone, Debug, Serialize)]
pub struct AdequacyPoint {
    pub fuel: u64,
    pub params: DenParams,
    pub eval: SubDistribution,
    #[serde(serialize_with = "ser_qs")]
    pub denote: Vec<Q>,
    /// Whether degree truncation dropped mass in the denotation.
    pub truncated: bool,
    /// `max_{n<W} |eval_n − denote_n|`.
    #[serde(serialize_with = "ser_q")]
    pub gap: Q,
    /// Operational mass on numerals `≥ W`, which the denotation cannot represent.
    #[serde(serialize_with = "ser_q")]
    pub beyond_cutoff: Q,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdequacyReport {
    pub points: Vec<AdequacyPoint>,
    pub eval_monotone: bool,
    pub denote_monotone: bool,
    pub gap_nonincreasing: bool,
    #[serde(serialize_with = "ser_q")]
    pub final_gap: Q,
}

impl AdequacyReport {
    pub fn consistent(&self) -> bool {
        self.eval_monotone && self.denote_monotone && self.gap_nonincreasing
    }
}

/// Compare `eval_exact` and the denotation of a program along paired
/// schedules; a schedule of length one is repeated to match the other.
pub fn adequacy(t: &Term, fuels: &[u64], params: &[DenParams]) -> Result<AdequacyReport> {
    adequacy_with(Exec::default(), t, fuels, params)
}

pub fn adequacy_with(exec: Exec, t: &Term, fuels: &[u64], params: &[DenParams]) -> Result<AdequacyReport> {
    check_program(t)?;
    let n = fuels.len().max(params.len());
    if fuels.is_empty() || params.is_empty() || (fuels.len() != n && fuels.len() != 1) || (params.len() != n && params.len() != 1) {
        return Err(Error::Domain("fuel and budget schedules must be nonempty and of matching length".into()));
    }
    let pick = |v: usize, len: usize| if len == 1 { 0 } else { v };
    let mut points = Vec::with_capacity(n);
    for k in 0..n {
        let fuel = fuels[pick(k, fuels.len())];
        let p = params[pick(k, params.len())];
        let eval = eval_exact_with(exec, t, fuel);
        let den = denote_closed_with(exec, t, &p)?;
        let denote = ground_vector(&den.value, p.web_cutoff);
        let gap = (0..p.web_cutoff)
            .map(|i| {
                let d = denote.get(i as usize).cloned().unwrap_or_else(Q::zero);
                (eval.prob(i) - d).abs()
            })
            .max()
            .unwrap_or_else(Q::zero);
        let beyond_cutoff = eval.probs.range(p.web_cutoff..).map(|(_, q)| q).sum();
        points.push(AdequacyPoint { fuel, params: p, eval, denote, truncated: den.dropped, gap, beyond_cutoff });
    }
    let pairs = || points.windows(2).map(|w| (&w[0], &w[1]));
    let eval_monotone = pairs().all(|(a, b)| {
        a.eval.probs.iter().all(|(n, q)| *q <= b.eval.prob(*n)) && b.eval.residual <= a.eval.residual
    });
    let denote_monotone = pairs().all(|(a, b)| a.denote.iter().zip(&b.denote).all(|(x, y)| x <= y));
    let gap_nonincreasing = pairs().all(|(a, b)| b.gap <= a.gap);
    let final_gap = points.last().map(|p| p.gap.clone()).unwrap_or_else(Q::zero);
    Ok(AdequacyReport { points, eval_monotone, denote_monotone, gap_nonincreasing, final_gap })
}
