use std::fmt::Write;

use serde::Serialize;

use pcoh::algebra::{format_q, parse_nonneg_q, Q};
use pcoh::cones::{
    bernstein_check, common_refinement, derivative, extract_coefficients, is_prestable, ConeSpace, MorphismFn,
    Partition, Scalar, DEFAULT_SCHEDULE,
};
use pcoh::exec::Exec;
use pcoh::kleisli::{is_morphism_with, Morphism};
use pcoh::pcf::{
    adequacy_with, check_program, denote_closed_with, eval_exact_with, parse, sample_many, DenParams,
    Denotation, Outcome, Term,
};
use pcoh::pcs::{check_pcs, PcsDescriptor};
use pcoh::{Error, Result};

use crate::functions::{build, deriv_mode, load_morphism, read, wants_float, AnyFn};
use crate::{Cli, Command, Opts};

pub struct Output {
    pub text: String,
    /// A checked property failed; the text holds the witness.
    pub violation: bool,
}

fn ok(text: String) -> Result<Output> {
    Ok(Output { text, violation: false })
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn program(path: &std::path::Path) -> Result<Term> {
    parse(&read(path)?)
}

fn exec(o: &Opts) -> Exec {
    if o.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn params(o: &Opts) -> DenParams {
    DenParams { web_cutoff: o.web_cutoff, degree: o.degree.unwrap_or(4), fixpoint_iters: o.fixpoint_iters }
}

fn seed(o: &Opts) -> Result<u64> {
    o.seed.ok_or_else(|| Error::Domain("this subcommand is randomized; pass --seed".into()))
}

pub fn run(cli: &Cli) -> Result<Output> {
    let o = &cli.opts;
    match &cli.command {
        Command::Dist { file } => {
            let t = program(file)?;
            check_program(&t)?;
            let d = eval_exact_with(exec(o), &t, o.fuel);
            if o.json {
                return ok(json(&d));
            }
            let mut s = String::from("n\tprobability\n");
            for (n, q) in &d.probs {
                writeln!(s, "{n}\t{}", format_q(q)).unwrap();
            }
            writeln!(s, "residual\t{}", format_q(&d.residual)).unwrap();
            ok(s)
        }
        Command::Sample { file } => {
            let t = program(file)?;
            check_program(&t)?;
            let seed = seed(o)?;
            let outs = sample_many(exec(o), &t, seed, o.fuel, o.trials);
            let mut counts = std::collections::BTreeMap::new();
            let mut timeouts = 0usize;
            for out in outs {
                match out {
                    Outcome::Value(n) => *counts.entry(n).or_insert(0usize) += 1,
                    Outcome::Timeout => timeouts += 1,
                }
            }
            if o.json {
                let v = serde_json::json!({"seed": seed, "trials": o.trials, "counts": counts, "timeouts": timeouts});
                return ok(json(&v));
            }
            let mut s = String::from("n\tcount\n");
            for (n, c) in &counts {
                writeln!(s, "{n}\t{c}").unwrap();
            }
            writeln!(s, "timeout\t{timeouts}").unwrap();
            ok(s)
        }
        Command::Denote { file } => {
            let t = program(file)?;
            let den = denote_closed_with(exec(o), &t, &params(o))?;
            if den.dropped {
                eprintln!("note: degree truncation dropped terms; the result is a lower bound");
            }
            match &den.value {
                Denotation::Vector(v) => {
                    if o.json {
                        return ok(json(v));
                    }
                    let mut s = String::from("n\tprobability\n");
                    for (l, q) in v.iter() {
                        writeln!(s, "{l}\t{}", format_q(q)).unwrap();
                    }
                    ok(s)
                }
                Denotation::Function(f) => ok(if o.json { json(f) } else { morphism_table(f) }),
            }
        }
        Command::Adequacy { file, fuels, ks } => {
            let t = program(file)?;
            let fuels = if fuels.is_empty() {
                let mut v: Vec<u64> = std::iter::successors(Some(4u64), |f| f.checked_mul(2)).take_while(|&f| f < o.fuel).collect();
                v.push(o.fuel);
                v
            } else {
                fuels.clone()
            };
            let base = params(o);
            let ps: Vec<DenParams> = if ks.is_empty() {
                vec![base]
            } else {
                ks.iter().map(|&k| DenParams { fixpoint_iters: k, ..base }).collect()
            };
            let rep = adequacy_with(exec(o), &t, &fuels, &ps)?;
            let violation = !rep.consistent();
            let text = if o.json || violation {
                json(&rep)
            } else {
                let mut s = String::from("fuel\tW\tD\tK\tgap\ttruncated\n");
                for p in &rep.points {
                    let DenParams { web_cutoff, degree, fixpoint_iters } = p.params;
                    writeln!(s, "{}\t{web_cutoff}\t{degree}\t{fixpoint_iters}\t{}\t{}", p.fuel, format_q(&p.gap), p.truncated)
                        .unwrap();
                }
                writeln!(s, "final gap\t{}", format_q(&rep.final_gap)).unwrap();
                s
            };
            Ok(Output { text, violation })
        }
        Command::PcsCheck { file } => {
            let d: PcsDescriptor =
                serde_json::from_str(&read(file)?).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
            let rep = check_pcs(&d)?;
            let violation = rep.violated();
            if o.json || violation {
                return Ok(Output { text: json(&rep), violation });
            }
            let closure = serde_json::to_value(&rep.closure).expect("serializable");
            let s = format!(
                "space\t{}\nlambda\t{}\nbound\t{}\nclosure\t{}\npassed\t{}\n",
                rep.space,
                verdict(rep.lambda_ok),
                verdict(rep.bound_ok),
                closure["status"].as_str().unwrap_or("?"),
                rep.passed()
            );
            ok(s)
        }
        Command::MorphismCheck { file } => {
            let f = load_morphism(file)?;
            let v = is_morphism_with(exec(o), &f, o.trials, seed(o)?)?;
            Ok(Output { violation: !v.passed(), text: json(&v) })
        }
        Command::Extract { morphism, from_denote, mode } => {
            let source = match (morphism, from_denote) {
                (Some(p), _) => load_morphism(p)?,
                (None, Some(p)) => {
                    let t = program(p)?;
                    match denote_closed_with(exec(o), &t, &params(o))?.value {
                        Denotation::Function(f) => f,
                        Denotation::Vector(_) => {
                            return Err(Error::Type { term: t.to_string(), message: "expected a function type".into() })
                        }
                    }
                }
                (None, None) => unreachable!("clap requires a source"),
            };
            let degree = o.degree.unwrap_or(source.degree());
            let g = MorphismFn::new(source.clone())?;
            let m = deriv_mode(mode, o.tol, Some(source.degree()))?;
            let ex = if wants_float(mode) {
                extract_coefficients::<pcoh::cones::DoubleDouble, _>(&g, degree, &m, exec(o))?
            } else {
                extract_coefficients::<Q, _>(&g, degree, &m, exec(o))?
            };
            let expected = source.with_degree(degree).value;
            let dev = max_deviation(&ex.morphism, &expected);
            let bound = if ex.certified { 0.0 } else { 1e-6f64.max(o.tol) };
            let violation = if ex.certified { ex.morphism != expected } else { dev > bound };
            if violation {
                let v = serde_json::json!({"extracted": ex.morphism, "source": expected, "max_deviation": dev});
                return Ok(Output { text: json(&v), violation });
            }
            ok(if o.json { json(&ex.morphism) } else { morphism_table(&ex.morphism) })
        }
        Command::Prestable { function, order } => {
            let f = build(function, false)?;
            let seed = seed(o)?;
            let rep = match &f {
                AnyFn::Exact(f) => is_prestable(f.as_ref(), *order, o.trials, seed, exec(o))?,
                AnyFn::Float(f) => is_prestable(f.as_ref(), *order, o.trials, seed, exec(o))?,
            };
            if o.json || !rep.passed {
                return Ok(Output { violation: !rep.passed, text: json(&rep) });
            }
            let mut s = String::from("order\ttrials\tmin signed\n");
            for r in &rep.orders {
                writeln!(s, "{}\t{}\t{}", r.order, r.trials, r.min_signed).unwrap();
            }
            ok(s)
        }
        Command::Derivative { function, x, dirs, schedule } => {
            let f = build(function, false)?;
            let base = f.point(x)?;
            let us = dirs.iter().map(|d| f.point(d)).collect::<Result<Vec<_>>>()?;
            let sched = if schedule.is_empty() { DEFAULT_SCHEDULE.to_vec() } else { schedule.clone() };
            let (text, mono) = match &f {
                AnyFn::Exact(f) => trace_out(derivative(f.as_ref(), &base, &us, &sched, exec(o))?, o.json),
                AnyFn::Float(f) => trace_out(derivative(f.as_ref(), &base, &us, &sched, exec(o))?, o.json),
            };
            Ok(Output { text, violation: !mono })
        }
        Command::Bernstein { function, x, order, mode } => {
            let f = build(function, wants_float(mode))?;
            let pt = f.point(x)?;
            let m = deriv_mode(mode, o.tol, f.degree())?;
            let n = order.or(f.degree().map(|d| d as usize)).unwrap_or(8);
            let (text, passed) = match &f {
                AnyFn::Exact(f) => bern_out(bernstein_check(f.as_ref(), &pt, n, o.tol, &m, exec(o))?, o.json),
                AnyFn::Float(f) => bern_out(bernstein_check(f.as_ref(), &pt, n, o.tol, &m, exec(o))?, o.json),
            };
            Ok(Output { text, violation: !passed })
        }
        Command::Refine { file } => refine(&read(file)?, o.json),
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "violated"
    }
}

fn morphism_table(f: &Morphism) -> String {
    let mut s = format!("# {} ⇒ {}, degree {}\nmu\tb\tcoefficient\n", f.dom(), f.cod(), f.degree());
    for (mu, b, q) in f.coeffs() {
        writeln!(s, "{mu:?}\t{b}\t{}", format_q(&q)).unwrap();
    }
    s
}

fn max_deviation(a: &Morphism, b: &Morphism) -> f64 {
    let mut keys: Vec<_> = a.coeffs().into_iter().map(|(m, l, _)| (m, l)).collect();
    keys.extend(b.coeffs().into_iter().map(|(m, l, _)| (m, l)));
    keys.iter()
        .map(|(m, l)| Scalar::to_f64(&(a.coefficient(m, l) - b.coefficient(m, l))).abs())
        .fold(0.0, f64::max)
}

fn trace_out<S: Scalar>(tr: pcoh::cones::DerivativeTrace<S>, as_json: bool) -> (String, bool) {
    if as_json || !tr.nonincreasing {
        return (json(&tr), tr.nonincreasing);
    }
    let mut s = String::from("splits\tphi\n");
    for (k, v) in tr.schedule.iter().zip(&tr.phi) {
        writeln!(s, "{k}\t{}", render_point(v)).unwrap();
    }
    writeln!(s, "estimate\t{}", render_point(&tr.estimate)).unwrap();
    (s, true)
}

fn bern_out<S: Scalar>(rep: pcoh::cones::BernsteinReport<S>, as_json: bool) -> (String, bool) {
    if as_json || !rep.passed {
        return (json(&rep), rep.passed);
    }
    let mut s = String::from("N\tremainder\n");
    for (n, r) in rep.remainders.iter().enumerate() {
        writeln!(s, "{n}\t{}", render_point(r)).unwrap();
    }
    writeln!(s, "passed\t{}", rep.passed).unwrap();
    (s, true)
}

fn render_point<S: Scalar>(v: &[S]) -> String {
    v.iter().map(Scalar::render).collect::<Vec<_>>().join(" ")
}

/// `{"p1": [[coords…], …], "p2": [[coords…], …]}` over an orthant.
fn refine(src: &str, as_json: bool) -> Result<Output> {
    #[derive(serde::Deserialize)]
    struct File {
        p1: Vec<Vec<String>>,
        p2: Vec<Vec<String>>,
    }
    let f: File = serde_json::from_str(src).map_err(|e| Error::Parse(format!("partition file: {e}")))?;
    let dim = f.p1.first().map_or(0, Vec::len);
    let space = ConeSpace::orthant_sup(dim);
    let parts = |ps: &[Vec<String>]| -> Result<Partition> {
        let pts = ps
            .iter()
            .map(|p| space.point(p.iter().map(|s| parse_nonneg_q(s)).collect::<Result<Vec<_>>>()?))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(pts)
    };
    let (p1, p2) = (parts(&f.p1)?, parts(&f.p2)?);
    let r = common_refinement(&p1, &p2)?;
    let verified = r.verify(&p1, &p2)?;
    let dense = |v: &pcoh::algebra::SparseVec| v.to_dense().iter().map(format_q).collect::<Vec<_>>();
    let out = serde_json::json!({
        "target": dense(p1.target()),
        "parts": r.partition.parts().iter().map(dense).collect::<Vec<_>>(),
        "left": r.left,
        "right": r.right,
        "verified": verified,
    });
    if as_json || !verified {
        return Ok(Output { text: json(&out), violation: !verified });
    }
    let mut s = String::from("part\tfrom p1\tfrom p2\n");
    for (k, p) in r.partition.parts().iter().enumerate() {
        writeln!(s, "{}\t{}\t{}", dense(p).join(" "), r.left[k], r.right[k]).unwrap();
    }
    writeln!(s, "verified\t{verified}").unwrap();
    ok(s)
}
