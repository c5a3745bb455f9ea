//! Building analysable functions from command-line flags.

use std::path::Path;

use pcoh::algebra::{parse_nonneg_q, parse_q, SparseVec, Q};
use pcoh::cones::{BlackBoxFn, ConeFn, DerivMode, DoubleDouble, MorphismFn};
use pcoh::kleisli::Morphism;
use pcoh::{Error, Result};

use crate::{FnArgs, ModeArgs};

/// A function with exact or double-double arithmetic.
pub enum AnyFn {
    Exact(Box<dyn ConeFn<Q>>),
    Float(Box<dyn ConeFn<DoubleDouble>>),
}

impl AnyFn {
    pub fn degree(&self) -> Option<u32> {
        match self {
            AnyFn::Exact(f) => f.degree(),
            AnyFn::Float(f) => f.degree(),
        }
    }

    pub fn point(&self, text: &str) -> Result<SparseVec> {
        let coords = text.split(',').map(|s| parse_nonneg_q(s.trim())).collect::<Result<Vec<_>>>()?;
        match self {
            AnyFn::Exact(f) => f.dom().point(coords),
            AnyFn::Float(f) => f.dom().point(coords),
        }
    }
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

pub fn load_morphism(path: &Path) -> Result<Morphism> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn exp_coeffs(n: u32) -> Vec<DoubleDouble> {
    let inv_e = DoubleDouble::from_f64(-1.0).exp();
    let mut c = inv_e;
    let mut out = vec![c];
    for k in 1..=n {
        c = c / DoubleDouble::from_f64(k as f64);
        out.push(c);
    }
    out
}

/// The function named by `args`; `float` forces double-double evaluation.
pub fn build(args: &FnArgs, float: bool) -> Result<AnyFn> {
    if let Some(p) = &args.morphism {
        let f = MorphismFn::new(load_morphism(p)?)?;
        return Ok(if float { AnyFn::Float(Box::new(f)) } else { AnyFn::Exact(Box::new(f)) });
    }
    if !args.coeffs.is_empty() {
        let cs = args.coeffs.iter().map(|s| parse_q(s.trim())).collect::<Result<Vec<_>>>()?;
        return Ok(if float {
            AnyFn::Float(Box::new(BlackBoxFn::<DoubleDouble>::series(cs)))
        } else {
            AnyFn::Exact(Box::new(BlackBoxFn::<Q>::series(cs)))
        });
    }
    if args.exp {
        let inv_e = DoubleDouble::from_f64(-1.0).exp();
        return Ok(AnyFn::Float(Box::new(BlackBoxFn::scalar(move |t: DoubleDouble| t.exp() * inv_e))));
    }
    if let Some(n) = args.exp_degree {
        let cs = exp_coeffs(n);
        let f = BlackBoxFn::scalar(move |t: DoubleDouble| {
            cs.iter().rev().fold(DoubleDouble::from_f64(0.0), |acc, c| acc * t + *c)
        });
        return Ok(AnyFn::Float(Box::new(f.with_degree(n))));
    }
    Err(Error::Domain("name a function with --morphism, --coeffs, --exp or --exp-degree".into()))
}

/// Whether the requested mode needs floating-point evaluation.
pub fn wants_float(mode: &ModeArgs) -> bool {
    mode.mode == "scaling"
}

/// Resolve `--mode` against what is known about the function.
pub fn deriv_mode(mode: &ModeArgs, tol: f64, degree: Option<u32>) -> Result<DerivMode> {
    let scaling = DerivMode::ScalingLimit { tol, j_max: mode.j_max, richardson: mode.richardson };
    match mode.mode.as_str() {
        "auto" => Ok(match degree {
            Some(d) => DerivMode::ExactPoly { degree: d },
            None => scaling,
        }),
        "exact" => degree
            .map(|d| DerivMode::ExactPoly { degree: d })
            .ok_or_else(|| Error::Domain("exact mode needs a function of known degree".into())),
        "scaling" => Ok(scaling),
        "splits" => Ok(DerivMode::uniform_splits()),
        other => Err(Error::Domain(format!("unknown mode `{other}`; use auto, exact, scaling or splits"))),
    }
}
