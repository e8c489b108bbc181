//! The twelve acceptance criteria, each checked with exact equality.
//! Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hassett_core::chambers::{enumerate_chambers, Decomposition};
use hassett_core::descend::{
    generating_polynomial, kappa_by_all_partitions, kappa_number, kappa_number_traced, weighted_descendant, Equation,
    WeightedQuery,
};
use hassett_core::oracle::{load_target, ClassComb, Scheme, WittenKontsevich};
use hassett_core::rational::{factorial, int, rat};
use hassett_core::realize::{realize, Realization};
use hassett_core::suites;
use hassett_core::{MultiPoly, Rational, SimplicialComplex, TargetModel, VertexSet, WeightData};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn units(n: usize) -> Vec<ClassComb> {
    vec![ClassComb::unit(); n]
}

fn complex_of(w: &[Rational], genus: u32) -> Result<SimplicialComplex, String> {
    let w = WeightData::new(w.to_vec(), genus, 0).map_err(e)?;
    SimplicialComplex::from_weights(&w).map_err(e)
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(format!("{took:.2?}"))
}

fn suite_result(report: suites::SuiteReport) -> Result<(), String> {
    ensure(report.passed(), || {
        format!("{} of {} cases failed, first: {}", report.failures.len(), report.cases, report.failures[0])
    })
}

/// `(Σ_{i∈vars} t_i)^d` built directly in the polynomial ring.
fn power_of_sum(n: usize, vars: &[usize], d: u32) -> MultiPoly {
    MultiPoly::linear_sum(n, vars).unwrap().pow(d)
}

fn genus_zero_closed_form() -> Outcome {
    let start = Instant::now();
    let t = TargetModel::point();
    for n in 3..=8usize {
        let c = complex_of(&vec![int(1); n], 0)?;
        let e_poly = generating_polynomial(&t, 0, &c, &units(n), false).map_err(e)?;
        let all: Vec<usize> = (0..n).collect();
        let expected = power_of_sum(n, &all, n as u32 - 3);
        ensure(e_poly == expected, || format!("n={n}: got {e_poly}, expected {expected}"))?;
    }
    within(start, Duration::from_secs(10)).map(|t| format!("n=3..8 in {t}"))
}

fn losev_manin() -> Outcome {
    let t = TargetModel::point();
    for n in 4..=8usize {
        let mut w = vec![int(1), int(1)];
        w.extend(std::iter::repeat_n(rat(1, 2 * n as i64), n - 2));
        let c = complex_of(&w, 0)?;
        let e_poly = generating_polynomial(&t, 0, &c, &units(n), false).map_err(e)?;
        let expected = power_of_sum(n, &[0, 1], n as u32 - 3);
        ensure(e_poly == expected, || format!("n={n}: got {e_poly}, expected {expected}"))?;
    }
    Ok("n=4..8".into())
}

fn projective_family() -> Outcome {
    let t = TargetModel::point();
    for r in 3..=6usize {
        let n = r + 1;
        let a = rat(2, 2 * r as i64 - 1);
        let mut w = vec![int(1)];
        w.extend(std::iter::repeat_n(a, r));
        let c = complex_of(&w, 0)?;
        // vertex 1 isolated, boundary of the simplex on the other r vertices
        let others = VertexSet::full(n).without(0);
        let boundary = (1..n).map(|v| others.without(v));
        let expected_complex = SimplicialComplex::from_generators(n, boundary).map_err(e)?;
        ensure(c == expected_complex, || format!("r={r}: complex {c} is not the expected boundary"))?;

        let e_poly = generating_polynomial(&t, 0, &c, &units(n), true).map_err(e)?;
        let mut linear = MultiPoly::var(n, 0).unwrap();
        for v in 1..n {
            linear = linear.sub(&MultiPoly::var(n, v).unwrap()).unwrap();
        }
        let expected = linear.pow(r as u32 - 2).scale(&Rational::new(1.into(), factorial(r as u64 - 2)));
        ensure(e_poly == expected, || format!("r={r}: got {e_poly}, expected {expected}"))?;
    }
    Ok("r=3..6".into())
}

fn degree_minus_two() -> Outcome {
    let c = complex_of(&[rat(9, 10), rat(9, 10), rat(9, 10), rat(1, 10)], 0)?;
    let q = WeightedQuery::point(0, c, &[0, 0, 0, 1]).map_err(e)?;
    let v = weighted_descendant(&TargetModel::point(), &q).map_err(e)?;
    ensure(v == int(-2), || format!("got {v}"))?;
    Ok("value -2".into())
}

fn wallcross_identity() -> Outcome {
    let start = Instant::now();
    let report = suites::wallcross_suite(2024, 200, 7, 2).map_err(e)?;
    suite_result(report)?;
    within(start, Duration::from_secs(60)).map(|t| format!("200 crossings in {t}"))
}

fn path_composition() -> Outcome {
    suite_result(suites::path_suite(77, 50, 6, 2).map_err(e)?)?;
    Ok("50 dominating pairs".into())
}

fn genpoly_corollary() -> Outcome {
    suite_result(suites::genpoly_suite(31, 25, 6).map_err(e)?)?;
    Ok("25 crossings".into())
}

fn oracle_validation() -> Outcome {
    let start = Instant::now();
    let report = suites::oracle_suite(12).map_err(e)?;
    let cases = report.cases;
    suite_result(report)?;
    let base = WittenKontsevich::global(Scheme::Dvv).value(1, &[1]);
    ensure(base == rat(1, 24), || format!("⟨τ_1⟩_1 = {base}"))?;
    within(start, Duration::from_secs(60)).map(|t| format!("{cases} checks in {t}"))
}

fn kappa_consistency() -> Outcome {
    let mut checked = 0;
    for g in 0..=3u32 {
        for n in 0..=4usize {
            let total = 3 * g as i64 - 3 + n as i64;
            if total < 0 {
                continue;
            }
            for ks in hassett_core::descend::compositions(total as u32, n) {
                let (a, b) = (kappa_number(g, &ks), kappa_by_all_partitions(g, &ks));
                match (a, b) {
                    (Ok(a), Ok(b)) => {
                        ensure(a == b, || format!("g={g} ks={ks:?}: {a} vs {b}"))?;
                        checked += 1;
                    }
                    (Err(_), Err(_)) => {}
                    (a, b) => return Err(format!("g={g} ks={ks:?}: routes disagree on validity: {a:?} {b:?}")),
                }
            }
        }
    }
    let oracle = WittenKontsevich::new(Scheme::Kdv);
    let (value, trace) = kappa_number_traced(2, &[2, 3]).map_err(e)?;
    ensure(trace.len() == 2, || format!("expected two partitions, got {}", trace.len()))?;
    ensure(trace[0].sign == 1 && trace[0].oracle == oracle.value(2, &[2, 3]), || format!("{}", trace[0]))?;
    ensure(trace[1].sign == -1 && trace[1].oracle == oracle.value(2, &[4]), || format!("{}", trace[1]))?;
    let expected = oracle.value(2, &[2, 3]) - oracle.value(2, &[4]);
    ensure(value == expected, || format!("kappa(2,(2,3)) = {value}, expected {expected}"))?;
    Ok(format!("{checked} inputs; kappa(2,(2,3)) = {value}"))
}

fn symmetric_equations() -> Outcome {
    let dil = suites::symmetric_suite(Equation::Dilaton, 2, 5).map_err(e)?;
    let str_ = suites::symmetric_suite(Equation::String, 2, 5).map_err(e)?;
    let cases = dil.cases + str_.cases;
    suite_result(dil)?;
    suite_result(str_)?;
    // r = 0: the identity is the unweighted string equation
    let oracle = WittenKontsevich::new(Scheme::Kdv);
    let t = TargetModel::point();
    for (g, r, n) in suites::symmetric_parameters(2, 5, 0).into_iter().filter(|p| p.1 == 0) {
        let total = 3 * g as i64 - 3 + n as i64 + 1;
        for ks in hassett_core::descend::compositions(total as u32, n) {
            let ins: Vec<_> = ks.iter().map(|&k| hassett_core::descend::Insertion::psi(k as i64)).collect();
            let rep = hassett_core::descend::verify_symmetric_string(&t, g, r, &ins).map_err(e)?;
            let mut with_zero = ks.clone();
            with_zero.push(0);
            let unweighted_lhs = oracle.value(g, &with_zero);
            let unweighted_rhs: Rational = (0..n)
                .filter(|&l| ks[l] > 0)
                .map(|l| {
                    let mut k2 = ks.clone();
                    k2[l] -= 1;
                    oracle.value(g, &k2)
                })
                .sum();
            ensure(rep.lhs == unweighted_lhs && rep.rhs == unweighted_rhs && rep.corrections.len() == n, || {
                format!("r=0 g={g} n={n} ks={ks:?}: {rep:?}")
            })?;
        }
    }
    Ok(format!("{cases} identities"))
}

fn realizability() -> Outcome {
    let c = SimplicialComplex::parse("12,34", None).map_err(e)?;
    ensure(realize(&c).map_err(e)? == Realization::Infeasible, || "{12,34} reported feasible".into())?;
    let mut rng = suites::rng_from_seed(11);
    for _ in 0..100 {
        let n = rng.random_range(1..=7);
        let w = suites::random_positive_weights(&mut rng, n, 2);
        let c = SimplicialComplex::from_weights(&w).map_err(e)?;
        let Realization::Feasible(witness) = realize(&c).map_err(e)? else {
            return Err(format!("({w}) not realized"));
        };
        let back = complex_of(&witness, 2)?;
        ensure(back == c, || format!("({w}): witness gives {back}, expected {c}"))?;
    }
    Ok("{12,34} infeasible; 100 round trips".into())
}

fn gw_invariance() -> Outcome {
    let text =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/p1_degree1.target")).map_err(e)?;
    let target = load_target(&text).map_err(e)?;
    ensure(target.classes().len() == 2 && target.table_len() == 3, || "fixture shape changed".into())?;
    let h = target.class_by_name("H").ok_or("no class H")?;
    let complexes: Vec<SimplicialComplex> =
        enumerate_chambers(4, Decomposition::Fine, 0, 1).map_err(e)?.into_iter().map(|r| r.complex).take(10).collect();
    ensure(complexes.len() == 10, || "fewer than 10 chambers".into())?;
    let mut values = Vec::new();
    for c in &complexes {
        let q = WeightedQuery::with_classes(0, c.clone(), &[0; 4], &[h; 4]).map_err(e)?;
        values.push(weighted_descendant(&target, &q).map_err(e)?);
    }
    ensure(values.iter().all(|v| *v == int(1)), || format!("values {values:?}"))?;
    Ok("10 complexes, all equal to 1".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("genus-zero generating polynomial", genus_zero_closed_form),
        ("Losev-Manin generating polynomial", losev_manin),
        ("projective family exponential polynomial", projective_family),
        ("degree -2 psi class", degree_minus_two),
        ("wall-crossing identity", wallcross_identity),
        ("crossing-path composition", path_composition),
        ("generating-polynomial crossing", genpoly_corollary),
        ("oracle validation", oracle_validation),
        ("kappa consistency", kappa_consistency),
        ("symmetric dilaton and string", symmetric_equations),
        ("realizability", realizability),
        ("invariance of primary invariants", gw_invariance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:2} PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
