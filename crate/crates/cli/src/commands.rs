use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use hassett_core::chambers::{crossing_path, enumerate_chambers, Decomposition};
use hassett_core::descend::{
    generating_polynomial, kappa_number_traced, weighted_descendant_traced, Equation, PartitionTerm, WeightedQuery,
};
use hassett_core::oracle::{load_target, ClassId, DescendantKey, UNIT};
use hassett_core::rational::parse_rational;
use hassett_core::realize::{realize_with, Realization, RealizeOptions};
use hassett_core::suites::{self, SuiteReport};
use hassett_core::{ClassComb, Error, SimplicialComplex, TargetModel, VertexSet, WeightData};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Cli, CliError, Command, Format, GlobalOpts, Suite, TargetOpts, EXIT_FAILED};

type Result<T> = std::result::Result<T, CliError>;

/// What one invocation prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    pub fn ok(stdout: String) -> Self {
        Output { code: 0, stdout, stderr: String::new() }
    }

    pub fn error(code: i32, stderr: String) -> Self {
        Output { code, stdout: String::new(), stderr }
    }
}

pub(crate) fn dispatch(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Complex { weights, genus, beta } => complex(g, weights, *genus, *beta),
        Command::Realize { faces, n, domain } => realize(g, faces, *n, domain.as_deref()),
        Command::Descendant { genus, weights, ks, target, trace } => descendant(g, *genus, weights, ks, target, *trace),
        Command::Genpoly { genus, weights, exponential, target } => genpoly(g, *genus, weights, *exponential, target),
        Command::Kappa { genus, ks } => kappa(g, *genus, ks),
        Command::Unweighted { genus, ks, target } => unweighted(g, *genus, ks, target),
        Command::Path { from, to, genus, beta, seed } => path(g, from, to, *genus, *beta, *seed),
        Command::Verify { suite, params, seed } => verify(g, *suite, params, *seed),
        Command::Chambers { n, decomposition, genus, beta } => chambers(g, *n, decomposition, *genus, *beta),
    }
}

/// Text lines or the JSON document, depending on `--format`.
fn emit(g: &GlobalOpts, text: String, json: Value) -> Output {
    match g.format {
        Format::Text => Output::ok(text),
        Format::Json => {
            Output::ok(format!("{}\n", serde_json::to_string_pretty(&json).expect("json values serialize")))
        }
    }
}

fn lines<I: IntoIterator<Item = String>>(it: I) -> String {
    it.into_iter().map(|l| l + "\n").collect()
}

/// Weight list with `e` entries replaced by the `--epsilon` value.
fn weight_data(g: &GlobalOpts, text: &str, genus: u32, beta: u32) -> Result<WeightData> {
    let mut items = Vec::new();
    for item in text.split(',') {
        let (base, rep) = match item.split_once('^') {
            Some((b, r)) => (b.trim(), Some(r)),
            None => (item.trim(), None),
        };
        let base = if base == "e" {
            let eps = g
                .epsilon
                .as_deref()
                .ok_or_else(|| CliError::Usage("weight list uses e but no --epsilon was given".into()))?;
            parse_rational(eps)?;
            eps.trim()
        } else {
            base
        };
        items.push(match rep {
            Some(r) => format!("{base}^{r}"),
            None => base.to_string(),
        });
    }
    Ok(WeightData::parse(&items.join(","), genus, beta)?)
}

fn in_domain(w: &WeightData) -> Result<()> {
    if w.in_domain() {
        Ok(())
    } else {
        Err(Error::Domain(format!("({w}) at genus {}, degree {}", w.genus(), w.beta())).into())
    }
}

fn int_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("bad {what} entry {s:?} in {text:?}")).into()))
        .collect()
}

fn read_target(path: Option<&Path>) -> Result<TargetModel> {
    let Some(path) = path else {
        return Ok(TargetModel::point());
    };
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(load_target(&text)?)
}

fn class_id(target: &TargetModel, s: &str) -> Result<ClassId> {
    let s = s.trim();
    let id = match s.parse::<ClassId>() {
        Ok(id) => id,
        Err(_) => target.class_by_name(s).ok_or_else(|| Error::Parse(format!("unknown class {s:?}")))?,
    };
    target.degree(id)?;
    Ok(id)
}

/// The target and one class per marked point.
fn target_and_classes(opts: &TargetOpts, n: usize) -> Result<(TargetModel, Vec<ClassId>)> {
    let target = read_target(opts.target.as_deref())?;
    let classes = match &opts.classes {
        None => vec![UNIT; n],
        Some(text) => text.split(',').map(|s| class_id(&target, s)).collect::<Result<_>>()?,
    };
    if classes.len() != n {
        return Err(Error::Shape(format!("{} classes for {n} marked points", classes.len())).into());
    }
    Ok((target, classes))
}

fn complex(g: &GlobalOpts, weights: &str, genus: u32, beta: u32) -> Result<Output> {
    let w = weight_data(g, weights, genus, beta)?;
    let c = SimplicialComplex::from_weights(&w)?;
    let json = json!({
        "weights": w.to_string(),
        "genus": genus,
        "beta": beta,
        "in_domain": w.in_domain(),
        "maximal_faces": c.maximal_faces(),
    });
    Ok(emit(g, format!("{c}\n"), json))
}

fn realize(g: &GlobalOpts, faces: &str, n: Option<usize>, domain: Option<&str>) -> Result<Output> {
    let c = SimplicialComplex::parse(faces, n)?;
    let domain = match domain {
        None => None,
        Some(text) => match int_list::<u32>(text, "domain")?.as_slice() {
            [genus, beta] => Some((*genus, *beta)),
            _ => return Err(CliError::Usage(format!("--domain expects g,b, got {text:?}"))),
        },
    };
    let opts = RealizeOptions { domain, ..RealizeOptions::default() };
    let result = realize_with(&c, &opts)?;
    let witness: Option<Vec<String>> = result.witness().map(|w| w.iter().map(|a| a.to_string()).collect());
    let text = match &result {
        Realization::Feasible(_) => witness.as_ref().unwrap().join(","),
        Realization::Infeasible => "infeasible".into(),
    };
    let json = json!({
        "maximal_faces": c.maximal_faces(),
        "feasible": witness.is_some(),
        "witness": witness,
    });
    Ok(emit(g, text + "\n", json))
}

fn descendant(g: &GlobalOpts, genus: u32, weights: &str, ks: &str, target: &TargetOpts, trace: bool) -> Result<Output> {
    let ks: Vec<i64> = int_list(ks, "ks")?;
    let (target, classes) = target_and_classes(target, ks.len())?;
    let w = weight_data(g, weights, genus, target.beta())?;
    in_domain(&w)?;
    let c = SimplicialComplex::from_weights(&w)?;
    let q = WeightedQuery::with_classes(genus, c, &ks, &classes)?;
    let (value, terms) = weighted_descendant_traced(&target, &q)?;
    let text = if trace {
        lines(terms.iter().map(|t| t.to_string()).chain([format!("value = {value}")]))
    } else {
        format!("{value}\n")
    };
    let mut json = json!({ "value": value.to_string() });
    if trace {
        json["trace"] = serde_json::to_value(&terms).expect("partition terms serialize");
    }
    Ok(emit(g, text, json))
}

fn genpoly(g: &GlobalOpts, genus: u32, weights: &str, exponential: bool, target: &TargetOpts) -> Result<Output> {
    let probe = weight_data(g, weights, genus, 0)?;
    let (target, classes) = target_and_classes(target, probe.len())?;
    let w = weight_data(g, weights, genus, target.beta())?;
    in_domain(&w)?;
    let c = SimplicialComplex::from_weights(&w)?;
    let classes: Vec<ClassComb> = classes.into_iter().map(ClassComb::basis).collect();
    let p = generating_polynomial(&target, genus, &c, &classes, exponential)?;
    let terms: Vec<Value> =
        p.ordered_terms().into_iter().map(|(e, a)| json!({ "exponents": e, "coefficient": a.to_string() })).collect();
    let json = json!({ "polynomial": p.to_string(), "exponential": exponential, "terms": terms });
    Ok(emit(g, format!("{p}\n"), json))
}

fn kappa(g: &GlobalOpts, genus: u32, ks: &str) -> Result<Output> {
    let ks: Vec<u32> = int_list(ks, "ks")?;
    let (value, terms): (_, Vec<PartitionTerm>) = kappa_number_traced(genus, &ks)?;
    let json = json!({ "value": value.to_string(), "partitions": terms.len() });
    Ok(emit(g, format!("{value}\n"), json))
}

fn unweighted(g: &GlobalOpts, genus: u32, ks: &str, target: &TargetOpts) -> Result<Output> {
    let ks: Vec<i64> = int_list(ks, "ks")?;
    let (target, classes) = target_and_classes(target, ks.len())?;
    let key = DescendantKey::new(genus, ks.into_iter().zip(classes).collect());
    let value = target.unweighted_lookup(&key)?;
    let json = json!({ "key": key.to_string(), "value": value.to_string() });
    Ok(emit(g, format!("{value}\n"), json))
}

fn path(g: &GlobalOpts, from: &str, to: &str, genus: u32, beta: u32, seed: u64) -> Result<Output> {
    let a = weight_data(g, from, genus, beta)?;
    let b = weight_data(g, to, genus, beta)?;
    let p = crossing_path(&a, &b, seed)?;
    let complexes: Vec<String> = p.complexes()?.iter().map(|c| c.to_string()).collect();
    let json = json!({
        "from": p.from.to_string(),
        "to": p.to.to_string(),
        "events": p.events,
        "complexes": complexes,
    });
    Ok(emit(g, lines(p.events.iter().map(|e| e.to_string())), json))
}

/// `key=value` settings for a suite; every key must be consumed.
struct Params(BTreeMap<String, String>);

impl Params {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) =
                item.split_once('=').ok_or_else(|| CliError::Usage(format!("expected key=value, got {item:?}")))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Params(map))
    }

    fn get<T: FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        match self.0.remove(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| CliError::Usage(format!("bad value {v:?} for {key}"))),
        }
    }

    fn required(&mut self, key: &str) -> Result<String> {
        self.0.remove(key).ok_or_else(|| CliError::Usage(format!("missing parameter {key}")))
    }

    fn finish(self) -> Result<()> {
        match self.0.keys().next() {
            None => Ok(()),
            Some(k) => Err(CliError::Usage(format!("unknown parameter {k}"))),
        }
    }
}

fn verify(g: &GlobalOpts, suite: Suite, params: &str, seed: u64) -> Result<Output> {
    let mut p = Params::parse(params)?;
    let report = match suite {
        Suite::Wallcross => {
            let (count, max_n, max_g) = (p.get("count", 200)?, p.get("max_n", 7)?, p.get("max_g", 2)?);
            p.finish()?;
            suites::wallcross_suite(seed, count, max_n, max_g)?
        }
        Suite::Path => {
            let (count, max_n, max_g) = (p.get("count", 50)?, p.get("max_n", 6)?, p.get("max_g", 2)?);
            p.finish()?;
            suites::path_suite(seed, count, max_n, max_g)?
        }
        Suite::Genpoly => {
            let (count, max_n) = (p.get("count", 25)?, p.get("max_n", 6)?);
            p.finish()?;
            suites::genpoly_suite(seed, count, max_n)?
        }
        Suite::Dilaton | Suite::String => {
            let eq = if suite == Suite::Dilaton { Equation::Dilaton } else { Equation::String };
            let (count, max_n, max_g) = (p.get("count", 50)?, p.get("max_n", 5)?, p.get("max_g", 2)?);
            p.finish()?;
            let name = if suite == Suite::Dilaton { "dilaton" } else { "string" };
            suites::combined(
                vec![suites::symmetric_suite(eq, max_g, max_n)?, suites::cone_suite(eq, seed, count, max_n, max_g)?],
                name,
            )
        }
        Suite::Divisor => {
            let path = p.required("target")?;
            let target = read_target(Some(Path::new(&path)))?;
            let divisor = class_id(&target, &p.required("divisor")?)?;
            let (genus, max_n) = (p.get("genus", 0)?, p.get("max_n", 3)?);
            p.finish()?;
            suites::divisor_suite(&target, divisor, genus, max_n)?
        }
        Suite::Oracle => {
            let max_dim = p.get("max_dim", 12)?;
            p.finish()?;
            suites::oracle_suite(max_dim)?
        }
    };
    Ok(suite_output(g, &report))
}

fn suite_output(g: &GlobalOpts, report: &SuiteReport) -> Output {
    let head = if report.passed() {
        format!("PASS {}: {} cases", report.suite, report.cases)
    } else {
        format!("FAIL {}: {} of {} cases failed", report.suite, report.failures.len(), report.cases)
    };
    let text = lines(std::iter::once(head).chain(report.failures.iter().map(|f| format!("  counterexample: {f}"))));
    #[derive(Serialize)]
    struct Doc<'a> {
        #[serde(flatten)]
        report: &'a SuiteReport,
        passed: bool,
    }
    let json = serde_json::to_value(Doc { report, passed: report.passed() }).expect("reports serialize");
    let mut out = emit(g, text, json);
    if !report.passed() {
        out.code = EXIT_FAILED;
    }
    out
}

fn chambers(g: &GlobalOpts, n: usize, decomposition: &str, genus: u32, beta: u32) -> Result<Output> {
    let d: Decomposition = decomposition.parse()?;
    let records = enumerate_chambers(n, d, genus, beta)?;
    let text = lines(records.iter().map(|r| format!("{}  weights={}", r.complex, r.witness)));
    let docs: Vec<Value> = records
        .iter()
        .map(|r| {
            let faces: Vec<VertexSet> = r.complex.maximal_faces();
            json!({ "maximal_faces": faces, "witness": r.witness.to_string() })
        })
        .collect();
    let json = json!({ "n": n, "decomposition": decomposition, "count": records.len(), "chambers": docs });
    Ok(emit(g, text, json))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(epsilon: Option<&str>) -> GlobalOpts {
        GlobalOpts { format: Format::Text, epsilon: epsilon.map(String::from) }
    }

    #[test]
    fn epsilon_substitution() {
        let w = weight_data(&opts(Some("1/7")), "1, e^2,e", 0, 0).unwrap();
        assert_eq!(w.to_string(), "1,1/7,1/7,1/7");
        assert!(weight_data(&opts(None), "1,e", 0, 0).is_err());
        assert!(weight_data(&opts(Some("x")), "1,e", 0, 0).is_err());
        // `e` only matches a whole entry
        assert!(weight_data(&opts(Some("1/7")), "1,2e", 0, 0).is_err());
    }

    #[test]
    fn params_are_consumed() {
        let mut p = Params::parse("count=4, max_n=5").unwrap();
        assert_eq!(p.get("count", 1usize).unwrap(), 4);
        assert_eq!(p.get("max_g", 2u32).unwrap(), 2);
        assert!(p.finish().is_err());
        assert!(Params::parse("count").is_err());
        let mut p = Params::parse("count=x").unwrap();
        assert!(p.get("count", 1usize).is_err());
    }

    #[test]
    fn exit_code_classes() {
        assert_eq!(CliError::from(Error::Capacity("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(Error::OracleIncomplete("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(Error::Domain("x".into())).exit_code(), 2);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
    }
}
