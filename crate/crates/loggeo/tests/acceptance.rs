//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test -p loggeo --test acceptance -- --nocapture`
//! to see the lines while the suite runs.

use loggeo::crystal::Connection;
use loggeo::ctx::ChartData;
use loggeo::limits::Limits;
use loggeo::module;
use loggeo::omega::{Flavor, FormElement};
use loggeo::poly::ring_one;
use loggeo::report::{run_suite, Suite};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

fn data(name: &str) -> Arc<ChartData> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<ChartData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(name.to_string())
        .or_insert_with(|| {
            let chart = loggeo::corpus::load_builtin(name)
                .unwrap_or_else(|| panic!("unknown builtin {name}"))
                .unwrap();
            ChartData::new(chart, Limits::default())
        })
        .clone()
}

fn corpus_names() -> Vec<&'static str> {
    loggeo::corpus::list_corpus().iter().map(|(n, _)| *n).collect()
}

fn report(criterion: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("acceptance {criterion}: {status} ({detail})");
    assert!(ok, "acceptance {criterion} failed: {detail}");
}

/// Criterion 1: the five ideals agree in the square quotient for every
/// corpus chart at levels 1..=3, each within the stated time budget.
#[test]
fn criterion_1_five_ideal_equality() {
    let mut worst_ms = 0u128;
    for name in corpus_names() {
        let d = data(name);
        for n in 1..=3usize {
            let t0 = Instant::now();
            let five = loggeo::diagonal::five_ideals(&d, n).unwrap();
            let elapsed = t0.elapsed().as_millis();
            worst_ms = worst_ms.max(elapsed);
            assert!(five.all_equal, "five ideals differ on {name} at n={n}");
            assert!(
                elapsed < 60_000,
                "five ideals on {name} n={n} took {elapsed} ms"
            );
        }
    }
    report(
        "criterion 1 (five-ideal equality, n <= 3, all charts)",
        true,
        &format!("worst case {worst_ms} ms"),
    );
}

/// Criterion 2: the two maps are mutually inverse and both operator
/// factorizations hold, exactly, for n <= 3 on every corpus chart.
#[test]
fn criterion_2_inverse_isomorphisms() {
    let mut count = 0usize;
    for name in corpus_names() {
        let d = data(name);
        for n in 1..=3usize {
            let checks = loggeo::diagonal::composition_check(&d, n).unwrap();
            for c in &checks {
                assert!(
                    c.ok,
                    "{name} n={n}: {} failed with witness {:?}",
                    c.name, c.witness
                );
            }
            count += checks.len();
        }
    }
    report(
        "criterion 2 (inverse isomorphisms and operator factorizations)",
        true,
        &format!("{count} identities, zero tolerance"),
    );
}

/// Criterion 3: annihilation of the ideal squares, the three product
/// congruences, and the exhaustive merge reindexing table for n <= 3.
#[test]
fn criterion_3_annihilation_and_congruences() {
    let mut count = 0usize;
    for name in corpus_names() {
        let d = data(name);
        for n in 1..=3usize {
            for checks in [
                loggeo::diagonal::psi_annihilation_check(&d, n).unwrap(),
                loggeo::diagonal::merge_reindex_check(&d, n).unwrap(),
                loggeo::diagonal::inclusion_check(&d, n).unwrap(),
            ] {
                for c in &checks {
                    assert!(c.ok, "{name} n={n}: {} failed", c.name);
                }
                count += checks.len();
            }
            if n >= 2 {
                let checks = loggeo::diagonal::congruence_check(&d, n).unwrap();
                for c in &checks {
                    assert!(c.ok, "{name} n={n}: {} failed", c.name);
                }
                count += checks.len();
            }
        }
    }
    report(
        "criterion 3 (annihilation, congruences, merge table)",
        true,
        &format!("{count} identities"),
    );
}

/// Criterion 4: the divided-power model has equal five ideals, inverse
/// maps, the expected free rank of the common ideal over Q and F_2, and
/// agrees with the diagonal route in characteristic zero.
#[test]
fn criterion_4_pd_model() {
    let mut count = 0usize;
    for name in corpus_names() {
        let d = data(name);
        for n in 1..=3usize {
            let five = loggeo::pd::pd_five_ideals(&d, n).unwrap();
            assert!(five.all_equal, "{name} n={n}: model five ideals differ");
            assert!(
                five.free_of_expected_rank,
                "{name} n={n}: common ideal is not free of the expected rank"
            );
            count += 2;
            // inverse maps on the exterior basis and the common ideal
            let model = d.pd_model(n).unwrap();
            let ext = d.power(n, Flavor::Exterior).unwrap();
            for ti in 0..ext.tuples.len() {
                let mut w = FormElement::zero(&ext, &d.chart.ring);
                w.coords[ti] = ring_one(&d.chart.ring);
                let down = model.phi(&w);
                let back = model.psi(&d, &down).unwrap();
                let diff = ext
                    .pres
                    .normal_form(&module::vec_sub(&back.coords, &w.coords), &d.limits)
                    .unwrap();
                assert!(
                    module::vec_is_zero(&diff),
                    "{name} n={n}: psi(phi) misses wedge {ti}"
                );
                count += 1;
            }
            if d.chart.field.characteristic() == 0 {
                let (alg, model, images) = loggeo::pd::comparison_map(&d, n).unwrap();
                for rel in alg.base_relations.iter().chain(alg.square_relations.iter()) {
                    let mut acc = model.zero();
                    for (mono, coef) in &rel.terms {
                        let mut term = model.scalar(&loggeo::poly::ring_constant(
                            &model.chart.ring,
                            coef.clone(),
                        ));
                        for (v, &e) in mono.0.iter().enumerate() {
                            for _ in 0..e {
                                term = model.mul(&term, &images[v]);
                            }
                        }
                        acc = module::vec_add(&acc, &term);
                    }
                    assert!(
                        model.is_zero(&acc).unwrap(),
                        "{name} n={n}: comparison map misses {rel}"
                    );
                }
                count += 1;
            }
        }
    }
    report(
        "criterion 4 (divided-power model over Q and F_2)",
        true,
        &format!("{count} checks"),
    );
}

/// Criterion 5: the simplicial differential squares to zero, satisfies the
/// Leibniz operator identity, commutes with the wedge and derivative
/// diagrams, restricts to the derivation on functions, and produces the
/// four-term image of a dlog generator killed by the next map.
#[test]
fn criterion_5_derham_structure() {
    for name in corpus_names() {
        let d = data(name);
        let r = run_suite(&d, Suite::Derham, 3, false).unwrap();
        assert!(
            r.totals.fail == 0 && r.totals.skipped == 0,
            "{name}: {}",
            r.to_canonical_json()
        );
    }
    report(
        "criterion 5 (alternating-sum differential structure)",
        true,
        "complex, Leibniz, diagrams, function derivation, dlog image",
    );
}

/// Criterion 6: over the two-element field the antisymmetric route gives
/// a nonzero square of the dlog generator while the exterior route kills
/// it; over the rationals both vanish.
#[test]
fn criterion_6_characteristic_two_discriminator() {
    let d = data("standard-log-point-f2");
    let w = loggeo::derham::antisym_variant_differential(&d).unwrap();
    assert!(w.antisym_nonzero, "antisymmetric value vanished over F_2");
    assert!(w.matches_square, "value is not the square of the generator");
    assert!(
        module::vec_is_zero(&w.exterior_value.unwrap()),
        "exterior route should vanish"
    );
    let d = data("standard-log-point");
    let w = loggeo::derham::antisym_variant_differential(&d).unwrap();
    assert!(!w.antisym_nonzero, "value must vanish over the rationals");
    report(
        "criterion 6 (characteristic-two flavor discriminator)",
        true,
        "nonzero antisymmetric square over F_2, zero exterior image",
    );
}

/// Criterion 7: for the three corpus connections the alternating
/// transition sum equals the connection differential on generators for
/// n <= 2, the embedding is split with the merge kernels, and the sum
/// squares to zero.
#[test]
fn criterion_7_coefficients() {
    let mut count = 0usize;
    for name in ["trivial-line", "nc-divisor", "trivial-plane"] {
        let d = data(name);
        let conn = Connection::from_chart(&d.chart).unwrap();
        assert!(loggeo::crystal::is_integrable(&d, &conn).unwrap());
        for n in 0..=2usize {
            let checks = loggeo::crystal::nabla_complex_check(&d, &conn, n).unwrap();
            for c in &checks {
                assert!(
                    c.ok,
                    "{name} n={n}: {} failed with witness {:?}",
                    c.name, c.witness
                );
            }
            count += checks.len();
        }
    }
    report(
        "criterion 7 (connection coefficients)",
        true,
        &format!("{count} identities over zero, dlog, and nilpotent connections"),
    );
}

/// Criterion 8: reports are byte-reproducible and the full verification of
/// the corpus finishes inside ten minutes.
#[test]
fn criterion_8_infrastructure() {
    let t0 = Instant::now();
    let mut digests = Vec::new();
    for name in corpus_names() {
        let d = data(name);
        let report = run_suite(&d, Suite::All, 3, false).unwrap();
        assert_eq!(report.totals.fail, 0, "{}", report.to_canonical_json());
        digests.push(report.to_canonical_json());
    }
    let elapsed = t0.elapsed();
    // second run from fresh contexts must be byte-identical
    for (i, name) in corpus_names().into_iter().enumerate() {
        let chart = loggeo::corpus::load_builtin(name).unwrap().unwrap();
        let fresh = ChartData::new(chart, Limits::default());
        let report = run_suite(&fresh, Suite::All, 3, false).unwrap();
        assert_eq!(
            digests[i],
            report.to_canonical_json(),
            "report for {name} is not byte-reproducible"
        );
    }
    assert!(
        elapsed.as_secs() < 600,
        "full corpus verification took {elapsed:?}"
    );
    report(
        "criterion 8 (reproducible reports, corpus under ten minutes)",
        true,
        &format!("full corpus in {elapsed:?}"),
    );
}
