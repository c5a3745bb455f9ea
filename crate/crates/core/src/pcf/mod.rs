//! PCF with fair binary choice: syntax, typing, exact and sampled
//! operational semantics, power-series denotations and their agreement.

mod adequacy;
mod denote;
mod eval;
mod parser;
mod syntax;
mod typecheck;

pub use adequacy::{adequacy, adequacy_with, AdequacyPoint, AdequacyReport};
pub use denote::{
    context_space, denote, denote_closed, denote_closed_with, denote_with, ground_vector, type_space, DenParams,
    Denotation, MAX_VAR_WEB,
};
pub use eval::{eval_exact, eval_exact_with, sample, sample_many, sample_with, Outcome, SubDistribution};
pub use parser::{parse, parse_type};
pub use syntax::{Term, Type};
pub use typecheck::{check_program, typecheck, Context};

#[cfg(test)]
mod tests;
