use proptest::prelude::*;

use super::*;
use crate::algebra::{Label, Multiset, Q};
use crate::exec::Exec;
use crate::kleisli::{compose, pair};
use crate::rng;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn pow2(k: u32) -> Q {
    q(1, 1i64 << k)
}

fn p(src: &str) -> Term {
    parse(src).unwrap()
}

const M: &str = r"\x:N. (0 (+) ifz(x, 1, ifz(x, 0, Omega)))";
const GEOM: &str = r"Y (\y:N. 0 (+) succ(y))";

const CORPUS: [&str; 8] = [
    "0 (+) 1",
    "Omega",
    GEOM,
    r"(\x:N. (0 (+) ifz(x, 1, ifz(x, 0, Omega)))) (0 (+) 1)",
    r"let(x, 0 (+) 1, ifz(x, 1, 0) (+) x)",
    r"(\f:N -> N. f (f 0)) (\n:N. succ(n) (+) 0)",
    r"Y (\f:N -> N. \n:N. ifz(n, 0, 1 (+) f (pred(n)))) 3",
    r"pred(2 (+) 0) (+) succ(Omega)",
];

#[test]
fn coin_and_omega() {
    let coin = eval_exact(&p("0 (+) 1"), 1);
    assert_eq!(coin.probs, [(0, q(1, 2)), (1, q(1, 2))].into());
    assert_eq!(coin.residual, q(0, 1));
    for fuel in [0, 1, 7, 40] {
        let om = eval_exact(&Term::omega(), fuel);
        assert!(om.probs.is_empty());
        assert_eq!(om.residual, q(1, 1));
    }
}

#[test]
fn geometric_law() {
    // Numeral n is produced after 3 + 4n steps.
    for fuel in [3u64, 10, 40, 63] {
        let d = eval_exact(&p(GEOM), fuel);
        let resolved = (fuel - 3) / 4;
        for n in 0..=resolved {
            assert_eq!(d.prob(n), pow2(n as u32 + 1), "fuel {fuel}, n {n}");
        }
        assert_eq!(d.probs.len() as u64, resolved + 1);
        assert_eq!(d.residual, pow2(resolved as u32 + 1));
    }
}

#[test]
fn subdistribution_json() {
    let d = eval_exact(&p("0 (+) 1"), 4);
    assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"probs":{"0":"1/2","1":"1/2"},"residual":"0"}"#);
}

#[test]
fn sampling() {
    assert_eq!(sample(&Term::Num(2), 99, 0), Outcome::Value(2));
    let coin = p("0 (+) 1");
    for seed in 0..20 {
        let want = if rng::flip(&mut rng::seeded(seed)) { 1 } else { 0 };
        assert_eq!(sample(&coin, seed, 5), Outcome::Value(want));
    }
    let ones = (0..10_000u64).filter(|&s| sample(&coin, s, 5) == Outcome::Value(1)).count() as f64;
    // σ = √(n/4) = 50.
    assert!((ones - 5000.0).abs() <= 250.0, "{ones}");
    assert_eq!(sample(&Term::omega(), 0, 100), Outcome::Timeout);
    let seq = sample_many(Exec::Sequential, &p(GEOM), 3, 200, 64);
    assert_eq!(seq, sample_many(Exec::Parallel, &p(GEOM), 3, 200, 64));
}

#[test]
fn denotation_of_m() {
    let params = DenParams { web_cutoff: 3, degree: 2, fixpoint_iters: 8 };
    let d = denote_closed(&p(M), &params).unwrap();
    let f = d.value.as_function().unwrap();
    let ms = |v: &[u64]| Multiset::from_elements(v.iter().map(|&n| Label::Num(n)));
    assert_eq!(
        f.coeffs(),
        vec![
            (ms(&[]), Label::Num(0), q(1, 2)),
            (ms(&[0]), Label::Num(1), q(1, 2)),
            (ms(&[0, 1]), Label::Num(0), q(1, 2)),
            (ms(&[0, 2]), Label::Num(0), q(1, 2)),
        ]
    );
}

#[test]
fn denotation_of_coin_and_geometric() {
    let d = denote_closed(&p("0 (+) 1"), &DenParams::default()).unwrap();
    let v = ground_vector(&d.value, 8);
    assert_eq!(v[..3], [q(1, 2), q(1, 2), q(0, 1)]);
    let params = DenParams { web_cutoff: 6, degree: 2, fixpoint_iters: 8 };
    let g = denote_closed(&p(GEOM), &params).unwrap();
    assert_eq!(ground_vector(&g.value, 6), (1..=6).map(pow2).collect::<Vec<_>>());
}

#[test]
fn adequacy_examples() {
    let r = adequacy(&p("0 (+) 1"), &[2], &[DenParams::default()]).unwrap();
    assert_eq!(r.points[0].gap, q(0, 1));
    let om = adequacy(&Term::omega(), &[5, 10], &[DenParams::default()]).unwrap();
    assert!(om.points.iter().all(|pt| pt.gap == q(0, 1) && pt.denote.iter().all(|x| *x == q(0, 1))));
    // Fixed K, growing fuel: the operational side catches up.
    let fixed = DenParams { web_cutoff: 8, degree: 2, fixpoint_iters: 8 };
    let g = adequacy(&p(GEOM), &[3, 11, 19, 27, 35], &[fixed]).unwrap();
    assert!(g.consistent(), "{g:?}");
    for pt in &g.points {
        let resolved = ((pt.fuel - 3) / 4 + 1) as u32;
        assert!(pt.gap <= pow2(resolved.min(pt.params.fixpoint_iters)));
    }
    // Fuel 35 resolves every numeral W = 8 represents, and numeral 8 beyond it.
    assert_eq!(g.final_gap, q(0, 1));
    assert_eq!(g.points[4].beyond_cutoff, pow2(9));
    // Aligned budgets: iterate k and fuel 4k - 1 see the same k outcomes.
    let params: Vec<DenParams> =
        (2..6).map(|k| DenParams { web_cutoff: 8, degree: 2, fixpoint_iters: k }).collect();
    let g = adequacy(&p(GEOM), &[7, 11, 15, 19], &params).unwrap();
    assert!(g.consistent());
    assert!(g.points.iter().all(|pt| pt.gap == q(0, 1)));
}

#[test]
fn substitution_commutes_with_denotation() {
    let params = DenParams { web_cutoff: 4, degree: 4, fixpoint_iters: 6 };
    let ctx: Context = vec![(std::sync::Arc::from("x"), Type::N)];
    let bodies = [r"ifz(x, 1, ifz(x, 0, Omega)) (+) 0", r"succ(x) (+) let(z, x, pred(z))", "ifz(x, x, 2)"];
    let args = ["0 (+) 1", "2", "pred(1 (+) 3)"];
    for b in bodies {
        for a in args {
            let body = p(b);
            let arg = p(a);
            let whole = body.subst("x", &std::sync::Arc::new(arg.clone()));
            let direct = denote(&Vec::new(), &whole, &params).unwrap().value;
            let mb = denote(&ctx, &body, &params).unwrap().value;
            let ma = denote(&Vec::new(), &arg, &params).unwrap().value;
            let via = compose(&mb, &pair(&[ma]).unwrap(), params.degree).unwrap().value;
            assert_eq!(direct.coeffs(), via.coeffs(), "{b} with x := {a}");
        }
    }
}

#[test]
fn parallel_exploration_matches_sequential() {
    for src in CORPUS {
        let t = p(src);
        assert_eq!(eval_exact_with(Exec::Sequential, &t, 30), eval_exact_with(Exec::Parallel, &t, 30));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn eval_conserves_mass_and_is_monotone(idx in 0usize..CORPUS.len(), fuel in 0u64..40, extra in 0u64..10) {
        let t = p(CORPUS[idx]);
        let a = eval_exact(&t, fuel);
        let b = eval_exact(&t, fuel + extra);
        prop_assert_eq!(a.terminated() + &a.residual, q(1, 1));
        prop_assert_eq!(b.terminated() + &b.residual, q(1, 1));
        for (n, pr) in &a.probs {
            prop_assert!(*pr <= b.prob(*n));
        }
        prop_assert!(b.residual <= a.residual);
    }

    #[test]
    fn denotation_is_monotone_in_budgets(idx in 0usize..CORPUS.len(), w in 1u64..6, d in 1u32..4, k in 0u32..6) {
        let t = p(CORPUS[idx]);
        let base = DenParams { web_cutoff: w, degree: d, fixpoint_iters: k };
        let v0 = ground_vector(&denote_closed(&t, &base).unwrap().value, w);
        for bigger in [
            DenParams { web_cutoff: w + 1, ..base },
            DenParams { degree: d + 1, ..base },
            DenParams { fixpoint_iters: k + 1, ..base },
        ] {
            let v1 = ground_vector(&denote_closed(&t, &bigger).unwrap().value, bigger.web_cutoff);
            for (x, y) in v0.iter().zip(&v1) {
                prop_assert!(x <= y, "{} at {:?} vs {:?}", CORPUS[idx], base, bigger);
            }
            prop_assert!(v1.iter().sum::<Q>() <= q(1, 1));
        }
    }
}
