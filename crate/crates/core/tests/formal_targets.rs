//! Formal targets: document loading and the divisor equation on a generated table.

use hassett_core::descend::{compositions, weighted_descendant, Equation, Insertion, WeightedQuery};
use hassett_core::oracle::{load_target, wk_point, ClassComb, DescendantKey, TargetKind, UNIT};
use hassett_core::rational::int;
use hassett_core::suites::{cone_suite, divisor_suite};
use hassett_core::{Error, SimplicialComplex, TargetModel};

const H: u32 = 2;

/// Genus-zero, degree-zero invariants of P¹. The virtual class splits as
/// `[M̄_{0,n}] × [P¹]`, so each invariant is the point value times `∫ ∏ γ_i`,
/// which is 1 when exactly one insertion is `H` and 0 otherwise.
fn p1_degree_zero(max_points: usize) -> TargetModel {
    let mut t = TargetModel::formal(1, 0, 0).unwrap();
    t.add_class(H, "H", 1).unwrap();
    t.add_product(H, H, ClassComb::zero()).unwrap();
    t.set_divisor_pairing(H, 0).unwrap();
    for n in 3..=max_points {
        for h_count in 0..=n {
            let total = n as i64 - 2 - h_count as i64;
            if total < 0 {
                continue;
            }
            for ks in compositions(total as u32, n) {
                let ins: Vec<(i64, u32)> =
                    ks.iter().enumerate().map(|(i, &k)| (k as i64, if i < h_count { H } else { UNIT })).collect();
                let value = if h_count == 1 { wk_point(0, &ks) } else { int(0) };
                t.add_descendant(DescendantKey::new(0, ins), value).unwrap();
            }
        }
    }
    t
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn divisor_equation_on_generated_table() {
    let t = p1_degree_zero(6);
    let report = divisor_suite(&t, H, 0, 4).unwrap();
    assert!(report.cases > 0);
    assert!(report.passed(), "{:?}", report.failures.first());
}

#[test]
fn point_suites_for_cones() {
    for eq in [Equation::Dilaton, Equation::String] {
        let report = cone_suite(eq, 5, 20, 5, 2).unwrap();
        assert!(report.passed(), "{:?}", report.failures.first());
    }
}

#[test]
fn missing_table_entries_are_reported() {
    let t = p1_degree_zero(4);
    let c = SimplicialComplex::discrete(5).unwrap();
    let q = WeightedQuery::with_classes(0, c, &[0, 0, 0, 0, 2], &[H, UNIT, UNIT, UNIT, UNIT]).unwrap();
    assert!(matches!(weighted_descendant(&t, &q), Err(Error::OracleIncomplete(_))));
}

#[test]
fn p1_fixture_loads() {
    let t = load_target(&fixture("p1_degree1.target")).unwrap();
    assert_eq!((t.dim(), t.pairing(), t.beta()), (1, 2, 1));
    assert_eq!(t.divisor_pairing(H).unwrap(), 1);
    assert!(t.multiply(&ClassComb::basis(H), &ClassComb::basis(H)).unwrap().is_zero());
    let c = SimplicialComplex::parse("12,34", Some(4)).unwrap();
    let ins = vec![Insertion::new(0, H); 4];
    let v = weighted_descendant(&t, &WeightedQuery::new(0, c, ins).unwrap()).unwrap();
    assert_eq!(v, int(1));

    let point = load_target(&fixture("point.target")).unwrap();
    assert_eq!(point.kind(), TargetKind::Point);
}
