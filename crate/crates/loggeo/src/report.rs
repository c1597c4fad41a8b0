//! Machine-readable verification reports: named checks with canonical
//! JSON serialization (sorted keys, deterministic ordering, timings zeroed
//! unless requested so reports are byte-reproducible).

use crate::crystal::Connection;
use crate::ctx::ChartData;
use crate::diagonal::IdentityCheck;
use crate::error::{Error, Result};
use crate::module;
use crate::omega::{Flavor, FormElement};
use crate::poly::ring_one;
use serde::Serialize;
use std::sync::Arc;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ideals,
    Compositions,
    Derham,
    Pd,
    Crystal,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "ideals" => Some(Suite::Ideals),
            "compositions" => Some(Suite::Compositions),
            "derham" => Some(Suite::Derham),
            "pd" => Some(Suite::Pd),
            "crystal" => Some(Suite::Crystal),
            "all" => Some(Suite::All),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Ideals => "ideals",
            Suite::Compositions => "compositions",
            Suite::Derham => "derham",
            Suite::Pd => "pd",
            Suite::Crystal => "crystal",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub artifact_version: String,
    pub chart: String,
    pub suite: String,
    pub checks: Vec<Check>,
    pub totals: Totals,
}

impl ReportDocument {
    /// Canonical serialization: keys sorted by the JSON value model.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("report prints")
    }

    pub fn all_passed(&self) -> bool {
        self.totals.fail == 0
    }
}

struct Runner {
    checks: Vec<Check>,
    timings: bool,
}

impl Runner {
    fn push(&mut self, id: String, anchor: &str, result: Result<(bool, Option<Vec<String>>)>, t0: Instant) {
        let wall_ms = if self.timings {
            t0.elapsed().as_millis() as u64
        } else {
            0
        };
        let check = match result {
            Ok((true, witness)) => Check {
                id,
                anchor: anchor.to_string(),
                status: "pass".into(),
                witness,
                wall_ms,
            },
            Ok((false, witness)) => Check {
                id,
                anchor: anchor.to_string(),
                status: "fail".into(),
                witness,
                wall_ms,
            },
            Err(e) if e.is_resource_limit() => Check {
                id,
                anchor: anchor.to_string(),
                status: "skipped".into(),
                witness: Some(vec![e.to_string()]),
                wall_ms,
            },
            Err(e) => Check {
                id,
                anchor: anchor.to_string(),
                status: "fail".into(),
                witness: Some(vec![e.to_string()]),
                wall_ms,
            },
        };
        self.checks.push(check);
    }

    fn run(
        &mut self,
        id: impl Into<String>,
        anchor: &str,
        f: impl FnOnce() -> Result<(bool, Option<Vec<String>>)>,
    ) {
        let t0 = Instant::now();
        let result = f();
        self.push(id.into(), anchor, result, t0);
    }

    /// Aggregate a list of identity checks into a single report check.
    fn run_identities(
        &mut self,
        id: impl Into<String>,
        anchor: &str,
        f: impl FnOnce() -> Result<Vec<IdentityCheck>>,
    ) {
        self.run(id, anchor, || {
            let checks = f()?;
            let failures: Vec<String> = checks
                .iter()
                .filter(|c| !c.ok)
                .map(|c| {
                    format!(
                        "{}{}",
                        c.name,
                        c.witness
                            .as_ref()
                            .map(|w| format!(": {w}"))
                            .unwrap_or_default()
                    )
                })
                .collect();
            if failures.is_empty() {
                Ok((true, None))
            } else {
                Ok((false, Some(failures)))
            }
        });
    }
}

fn ideals_suite(runner: &mut Runner, data: &Arc<ChartData>, n_max: usize) {
    for n in 1..=n_max {
        runner.run(format!("ideals.five_equal.n{n}"), "local/five-ideals", || {
            let five = crate::diagonal::five_ideals(data, n)?;
            Ok((five.all_equal, None))
        });
        runner.run_identities(
            format!("ideals.mu_reindex.n{n}"),
            "local/merge-reindexing",
            || crate::diagonal::merge_reindex_check(data, n),
        );
        runner.run_identities(
            format!("ideals.triangle_inclusion.n{n}"),
            "local/triangle-inclusion",
            || crate::diagonal::inclusion_check(data, n),
        );
        runner.run_identities(
            format!("ideals.psi_annihilation.n{n}"),
            "local/annihilation",
            || crate::diagonal::psi_annihilation_check(data, n),
        );
        if n >= 2 {
            runner.run_identities(
                format!("ideals.congruences.n{n}"),
                "local/product-congruences",
                || crate::diagonal::congruence_check(data, n),
            );
        }
    }
}

fn compositions_suite(runner: &mut Runner, data: &Arc<ChartData>, n_max: usize) {
    for n in 1..=n_max {
        runner.run_identities(
            format!("compositions.phi_well_defined.n{n}"),
            "local/derivation-factors",
            || crate::diagonal::phi_well_defined_check(data, n),
        );
        runner.run_identities(
            format!("compositions.inverse_isomorphisms.n{n}"),
            "local/inverse-isomorphisms",
            || crate::diagonal::composition_check(data, n),
        );
    }
}

fn derham_suite(runner: &mut Runner, data: &Arc<ChartData>) {
    let chart = &data.chart;
    let has_witness = chart.omega1_basis.is_some();
    // alternating-sum square vanishes at both levels
    runner.run("derham.e_squared.diag", "derham/complex", || {
        for n in 0..=2usize {
            let alg = data.diagonal(n)?;
            let top = data.diagonal(n + 2)?;
            for v in 0..alg.ring.nvars() {
                let x = crate::poly::ring_var(&alg.ring, v);
                let e1 = crate::derham::e_diag(data, n, &x)?;
                let e2 = crate::derham::e_diag(data, n + 1, &e1)?;
                if !top.nf_base(&e2)?.is_zero() {
                    return Ok((false, Some(vec![format!("level {n}, variable {v}")])));
                }
            }
        }
        Ok((true, None))
    });
    if has_witness {
    runner.run("derham.e_squared.pd", "derham/complex", || {
        for n in 0..=2usize {
            let model = data.pd_model(n)?;
            let top = data.pd_model(n + 2)?;
            for i in 0..model.basis.len() {
                let mut x = model.zero();
                x[i] = ring_one(&chart.ring);
                let e1 = crate::derham::e_pd(data, n, &x)?;
                let e2 = crate::derham::e_pd(data, n + 1, &e1)?;
                if !top.is_zero(&e2)? {
                    return Ok((false, Some(vec![format!("level {n}, monomial {i}")])));
                }
            }
        }
        Ok((true, None))
    });
    }
    // Leibniz operator identity on generators
    runner.run("derham.leibniz", "derham/leibniz", || {
        for m in 0..=2usize {
            for n in 0..=2usize {
                let alg_m = data.diagonal(m)?;
                let alg_n = data.diagonal(n)?;
                let target = data.diagonal(m + n + 1)?;
                for va in 0..alg_m.ring.nvars() {
                    for vb in 0..alg_n.ring.nvars() {
                        let a = crate::poly::ring_var(&alg_m.ring, va);
                        let b = crate::poly::ring_var(&alg_n.ring, vb);
                        let s = crate::derham::smash_diag(data, m, n, &a, &b)?;
                        let lhs = crate::derham::e_diag(data, m + n, &s)?;
                        let ea = crate::derham::e_diag(data, m, &a)?;
                        let t1 = crate::derham::smash_diag(data, m + 1, n, &ea, &b)?;
                        let eb = crate::derham::e_diag(data, n, &b)?;
                        let t2 = crate::derham::smash_diag(data, m, n + 1, &a, &eb)?;
                        let rhs = if m % 2 == 0 { t1.add(&t2) } else { t1.sub(&t2) };
                        if !target.nf_base(&lhs.sub(&rhs))?.is_zero() {
                            return Ok((
                                false,
                                Some(vec![format!("m={m} n={n} vars ({va},{vb})")]),
                            ));
                        }
                    }
                }
            }
        }
        Ok((true, None))
    });
    // simplicial case tables
    runner.run("derham.simplicial_tables", "derham/simplicial", || {
        for n in 1..=2usize {
            let alg = data.diagonal(n)?;
            for i in 1..=(n + 1) {
                for j in 0..=(n + 1) {
                    for v in 0..alg.ring.nvars() {
                        let x = crate::poly::ring_var(&alg.ring, v);
                        let up = crate::derham::insertion_diag(data, n, j, &x)?;
                        let upper = data.diagonal(n + 1)?;
                        let lhs = upper.mu(data, i - 1, i)?.apply(&up);
                        let rhs = if j + 1 < i {
                            let down = alg.mu(data, i - 2, i - 1)?.apply(&x);
                            crate::derham::insertion_diag(data, n - 1, j, &down)?
                        } else if j == i - 1 || j == i {
                            x.clone()
                        } else {
                            let down = alg.mu(data, i - 1, i)?.apply(&x);
                            crate::derham::insertion_diag(data, n - 1, j - 1, &down)?
                        };
                        if !alg.nf_base(&lhs.sub(&rhs))?.is_zero() {
                            return Ok((false, Some(vec![format!("n={n} i={i} j={j} var {v}")])));
                        }
                    }
                }
            }
        }
        Ok((true, None))
    });
    // e_0 agrees with the derivation
    runner.run("derham.e0_derivation", "derham/functions", || {
        let alg0 = data.diagonal(0)?;
        let alg1 = data.diagonal(1)?;
        let p1 = data.power(1, Flavor::Antisymmetric)?;
        for k in 0..chart.b_var_indices().len() {
            let b = crate::poly::ring_var(&alg0.ring, alg0.slot_var(0, k));
            let e = crate::derham::e_diag(data, 0, &b)?;
            let psi = alg1.psi(data, &e)?;
            let chart_var =
                crate::poly::ring_var(&chart.ring, chart.b_var_indices().start + k);
            let expect = crate::omega::d_of_polynomial(chart, &chart_var);
            let diff = p1
                .pres
                .normal_form(&module::vec_sub(&psi.coords, &expect), &data.limits)
                .map_err(Error::from)?;
            if !module::vec_is_zero(&diff) {
                return Ok((false, Some(vec![format!("variable {k}")])));
            }
        }
        Ok((true, None))
    });
    // the four-term alternating image of a dlog generator
    if !chart.p.gens.is_empty() {
        runner.run("derham.e1_dlog_four_terms", "derham/dlog-image", || {
            let alg1 = data.diagonal(1)?;
            let alg2 = data.diagonal(2)?;
            let g0 = chart.p.gens[0].clone();
            let delta = alg1.gen_delta(0, 1, &g0)?;
            let e = crate::derham::e_diag(data, 1, &delta)?;
            let k = chart.p.rank;
            let tuple = |sel: [i64; 3]| -> Vec<Vec<i64>> {
                (0..3)
                    .map(|s| g0.iter().map(|&c| c * sel[s]).collect::<Vec<i64>>())
                    .collect()
            };
            let mut expect = crate::poly::ring_zero(&alg2.ring);
            for (sel, sign) in [
                ([0i64, -1, 1], 1i64),
                ([-1, 0, 1], -1),
                ([-1, 1, 0], 1),
            ] {
                let v = alg2
                    .pn
                    .lattice
                    .embed_tuple(&tuple(sel))
                    .map_err(Error::from)?;
                let m = alg2.monomial_of(&v)?;
                expect = if sign > 0 { expect.add(&m) } else { expect.sub(&m) };
            }
            expect = expect.sub(&ring_one(&alg2.ring));
            let _ = k;
            if !alg2.nf_base(&e.sub(&expect))?.is_zero() {
                return Ok((false, Some(vec!["four-term expression mismatch".into()])));
            }
            // psi_2 sends it into the square class of the dlog generator,
            // which vanishes in the exterior flavor and away from char 2
            let psi = alg2.psi(data, &e)?;
            let p2 = data.power(2, Flavor::Antisymmetric)?;
            let p1 = data.power(1, Flavor::Antisymmetric)?;
            let n_b = chart.b_var_indices().len();
            let mut dlog = FormElement::zero(&p1, &chart.ring);
            dlog.coords[n_b] = ring_one(&chart.ring);
            let square = crate::omega::wedge(&dlog, &dlog, &p1, &p1, &p2);
            let sum = p2
                .pres
                .normal_form(
                    &module::vec_add(&psi.coords, &square.coords),
                    &data.limits,
                )
                .map_err(Error::from)?;
            Ok((module::vec_is_zero(&sum), None))
        });
    }
    // wedge diagram through the smashing map
    runner.run("derham.wedge_diagram", "derham/wedge", || {
        let (m, n) = (1usize, 1usize);
        let alg_m = data.diagonal(m)?;
        let alg_n = data.diagonal(n)?;
        let target = data.diagonal(m + n)?;
        let p1 = data.power(1, Flavor::Antisymmetric)?;
        let p2 = data.power(2, Flavor::Antisymmetric)?;
        for ta in 0..p1.tuples.len() {
            for tb in 0..p1.tuples.len() {
                let mut wa = FormElement::zero(&p1, &chart.ring);
                wa.coords[ta] = ring_one(&chart.ring);
                let mut wb = FormElement::zero(&p1, &chart.ring);
                wb.coords[tb] = ring_one(&chart.ring);
                let fa = alg_m.phi(&wa, false)?;
                let fb = alg_n.phi(&wb, false)?;
                let s = crate::derham::smash_diag(data, m, n, &fa, &fb)?;
                let psi = target.psi(data, &s)?;
                let expect = crate::omega::wedge(&wa, &wb, &p1, &p1, &p2);
                let diff = p2
                    .pres
                    .normal_form(
                        &module::vec_sub(&psi.coords, &expect.coords),
                        &data.limits,
                    )
                    .map_err(Error::from)?;
                if !module::vec_is_zero(&diff) {
                    return Ok((false, Some(vec![format!("tuples ({ta},{tb})")])));
                }
            }
        }
        Ok((true, None))
    });
    // matrices compose to zero, with the classical cross-check
    if has_witness {
    runner.run("derham.matrices_d_squared", "derham/matrices", || {
        let witness = data.omega1_basis()?;
        let r = witness.rank;
        for q in 0..=1usize {
            if q > r {
                continue;
            }
            let subsets = crate::omega::strict_tuples(r, q);
            for s in &subsets {
                let w = crate::derham::basis_wedge(data, s)?;
                let dw = crate::derham::d_exterior(data, q, &w)?;
                let ddw = crate::derham::d_exterior(data, q + 1, &dw)?;
                let p = data.power(q + 2, Flavor::Exterior)?;
                let nf = p
                    .pres
                    .normal_form(&ddw.coords, &data.limits)
                    .map_err(Error::from)?;
                if !module::vec_is_zero(&nf) {
                    return Ok((false, Some(vec![format!("degree {q} wedge {s:?}")])));
                }
            }
        }
        // d after d on the variables through the matrices route
        for k in 0..chart.b_var_indices().len() {
            let var = crate::poly::ring_var(&chart.ring, chart.b_var_indices().start + k);
            let p0 = data.power(0, Flavor::Exterior)?;
            let f = FormElement::scalar(&p0, var);
            let d1 = crate::derham::d_exterior(data, 0, &f)?;
            let d2 = crate::derham::d_exterior(data, 1, &d1)?;
            let p2 = data.power(2, Flavor::Exterior)?;
            let nf = p2
                .pres
                .normal_form(&d2.coords, &data.limits)
                .map_err(Error::from)?;
            if !module::vec_is_zero(&nf) {
                return Ok((false, Some(vec![format!("variable {k}")])));
            }
        }
        Ok((true, None))
    });
    }
    // Koszul cross-check of the tower differential on scaled basis wedges
    if has_witness {
    runner.run("derham.koszul_crosscheck", "derham/matrices", || {
        let witness = data.omega1_basis()?;
        let r = witness.rank;
        for q in 0..=1usize {
            if q > r {
                continue;
            }
            for s in &crate::omega::strict_tuples(r, q) {
                let w = crate::derham::basis_wedge(data, s)?;
                for k in 0..chart.b_var_indices().len() {
                    let b =
                        crate::poly::ring_var(&chart.ring, chart.b_var_indices().start + k);
                    let scaled = w.scale(&b);
                    let lhs = crate::derham::d_exterior(data, q, &scaled)?;
                    // classical value: db wedge w (the basis wedges are
                    // closed: combinations of d and dlog generators)
                    let db_form = FormElement {
                        degree: 1,
                        flavor: Flavor::Exterior,
                        coords: crate::omega::d_of_polynomial(chart, &b),
                    };
                    let pq = data.power(q, Flavor::Exterior)?;
                    let p1 = data.power(1, Flavor::Exterior)?;
                    let pq1 = data.power(q + 1, Flavor::Exterior)?;
                    let rhs = crate::omega::wedge(&db_form, &w, &p1, &pq, &pq1);
                    let diff = pq1
                        .pres
                        .normal_form(
                            &module::vec_sub(&lhs.coords, &rhs.coords),
                            &data.limits,
                        )
                        .map_err(Error::from)?;
                    if !module::vec_is_zero(&diff) {
                        return Ok((false, Some(vec![format!("deg {q}, b = var {k}")])));
                    }
                }
            }
        }
        Ok((true, None))
    });
    }
    // the characteristic discriminator on charts with a monoid part
    if !chart.p.gens.is_empty() {
        runner.run("derham.antisym_witness", "derham/flavor-discriminator", || {
            let w = crate::derham::antisym_variant_differential(data)?;
            let char2 = chart.field.characteristic() == 2;
            let mut ok = w.matches_square;
            if char2 && !w.antisym_nonzero {
                ok = false;
            }
            if !char2 && w.antisym_nonzero {
                ok = false;
            }
            if let Some(ext) = &w.exterior_value {
                if !module::vec_is_zero(ext) {
                    ok = false;
                }
            }
            let value: Vec<String> = w
                .antisym_value
                .iter()
                .map(|p| p.to_string())
                .collect();
            Ok((
                ok,
                Some(vec![format!(
                    "antisym value [{}], nonzero: {}, matches square: {}",
                    value.join(", "),
                    w.antisym_nonzero,
                    w.matches_square
                )]),
            ))
        });
    }
}

fn pd_suite(runner: &mut Runner, data: &Arc<ChartData>, n_max: usize) {
    for n in 1..=n_max {
        runner.run(format!("pd.five_equal.n{n}"), "pd/five-ideals", || {
            let five = crate::pd::pd_five_ideals(data, n)?;
            Ok((five.all_equal, None))
        });
        runner.run(format!("pd.common_rank.n{n}"), "pd/common-rank", || {
            let five = crate::pd::pd_five_ideals(data, n)?;
            Ok((five.free_of_expected_rank, None))
        });
        runner.run(format!("pd.inverse.n{n}"), "pd/inverse-isomorphisms", || {
            let model = data.pd_model(n)?;
            let ext = data.power(n, Flavor::Exterior)?;
            for ti in 0..ext.tuples.len() {
                let mut w = FormElement::zero(&ext, &data.chart.ring);
                w.coords[ti] = ring_one(&data.chart.ring);
                let down = model.phi(&w);
                let back = model.psi(data, &down)?;
                let diff = ext
                    .pres
                    .normal_form(&module::vec_sub(&back.coords, &w.coords), &data.limits)
                    .map_err(Error::from)?;
                if !module::vec_is_zero(&diff) {
                    return Ok((false, Some(vec![format!("wedge {ti}")])));
                }
            }
            let full: u32 = (1 << n) - 1;
            for (i, &(j, _)) in model.basis.iter().enumerate() {
                if j != full {
                    continue;
                }
                let mut x = model.zero();
                x[i] = ring_one(&data.chart.ring);
                let up = model.psi(data, &x)?;
                let down = model.phi(&up);
                if !model.is_zero(&module::vec_sub(&down, &x))? {
                    return Ok((false, Some(vec![format!("monomial {i}")])));
                }
            }
            Ok((true, None))
        });
        if data.chart.field.characteristic() == 0 {
            runner.run(format!("pd.char0_crosscheck.n{n}"), "pd/comparison", || {
                let (alg, model, images) = crate::pd::comparison_map(data, n)?;
                let eval = |p: &crate::poly::Polynomial| -> crate::pd::PdElem {
                    let mut acc = model.zero();
                    for (mono, coef) in &p.terms {
                        let mut term = model.scalar(&crate::poly::ring_constant(
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
                    acc
                };
                for rel in alg.base_relations.iter().chain(alg.square_relations.iter()) {
                    if !model.is_zero(&eval(rel))? {
                        return Ok((
                            false,
                            Some(vec![format!("relation {rel} survives the comparison")]),
                        ));
                    }
                }
                let ext = data.power(n, Flavor::Exterior)?;
                let anti = data.power(n, Flavor::Antisymmetric)?;
                for ti in 0..ext.tuples.len() {
                    let mut w = FormElement::zero(&ext, &data.chart.ring);
                    w.coords[ti] = ring_one(&data.chart.ring);
                    let w_anti = crate::omega::exterior_to_antisym(&w, &ext, &anti);
                    let via_diag = alg.phi(&w_anti, false)?;
                    let mapped = eval(&via_diag);
                    let direct = model.phi(&w);
                    if !model.is_zero(&module::vec_sub(&mapped, &direct))? {
                        return Ok((false, Some(vec![format!("phi routes differ on {ti}")])));
                    }
                }
                for x in crate::diagonal::sample_elements(&alg, 3) {
                    let via_diag = alg.psi(data, &x)?;
                    let down = crate::omega::antisym_to_exterior(&via_diag, &anti, &ext);
                    let via_model = model.psi(data, &eval(&x))?;
                    let diff = ext
                        .pres
                        .normal_form(
                            &module::vec_sub(&down.coords, &via_model.coords),
                            &data.limits,
                        )
                        .map_err(Error::from)?;
                    if !module::vec_is_zero(&diff) {
                        return Ok((false, Some(vec![format!("psi routes differ on {x}")])));
                    }
                }
                Ok((true, None))
            });
        }
    }
}

fn crystal_suite(runner: &mut Runner, data: &Arc<ChartData>, conn: &Connection) {
    runner.run("crystal.integrable", "coefficients/curvature", || {
        Ok((crate::crystal::is_integrable(data, conn)?, None))
    });
    runner.run("crystal.nabla_recovery", "coefficients/first-transition", || {
        // theta along the second projection minus the identity is nabla
        let m1 = data.pd_model(1)?;
        for a in 0..conn.rank {
            let mut x = crate::crystal::CoefElem::zero(&m1, conn.rank);
            x.comps[a] = m1.one();
            let t = crate::crystal::theta_pi1(data, conn, &x)?;
            let diff = t.sub(&x);
            for b in 0..conn.rank {
                let expect = m1.form_in_slot(1, &conn.matrix[b][a]);
                if !m1.is_zero(&module::vec_sub(&diff.comps[b], &expect))? {
                    return Ok((false, Some(vec![format!("section {a}, row {b}")])));
                }
            }
        }
        Ok((true, None))
    });
    for n in 0..=2usize {
        runner.run_identities(
            format!("crystal.complex.n{n}"),
            "coefficients/alternating-sum",
            || crate::crystal::nabla_complex_check(data, conn, n),
        );
    }
}

/// Run a verification suite over a loaded chart.
pub fn run_suite(
    data: &Arc<ChartData>,
    suite: Suite,
    n_max: usize,
    timings: bool,
) -> Result<ReportDocument> {
    let mut runner = Runner {
        checks: Vec::new(),
        timings,
    };
    let wants = |s: Suite| suite == s || suite == Suite::All;
    if wants(Suite::Ideals) {
        ideals_suite(&mut runner, data, n_max);
    }
    if wants(Suite::Compositions) {
        compositions_suite(&mut runner, data, n_max);
    }
    if wants(Suite::Derham) {
        derham_suite(&mut runner, data);
    }
    if wants(Suite::Pd) {
        if data.chart.omega1_basis.is_some() {
            pd_suite(&mut runner, data, n_max);
        } else if suite == Suite::Pd {
            return Err(Error::Precondition(format!(
                "chart {} has no free-basis witness; the pd suite needs one",
                data.chart.name
            )));
        }
    }
    if wants(Suite::Crystal) {
        if data.chart.connection.is_some() {
            let conn = Connection::from_chart(&data.chart)?;
            crystal_suite(&mut runner, data, &conn);
        } else if suite == Suite::Crystal {
            return Err(Error::Precondition(format!(
                "chart {} has no connection; the crystal suite needs one",
                data.chart.name
            )));
        }
    }
    let totals = Totals {
        pass: runner.checks.iter().filter(|c| c.status == "pass").count(),
        fail: runner.checks.iter().filter(|c| c.status == "fail").count(),
        skipped: runner
            .checks
            .iter()
            .filter(|c| c.status == "skipped")
            .count(),
    };
    Ok(ReportDocument {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        chart: data.chart.name.clone(),
        suite: suite.name().to_string(),
        checks: runner.checks,
        totals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::LogChart;
    use crate::limits::Limits;

    fn data(name: &str) -> Arc<ChartData> {
        let chart = crate::corpus::load_builtin(name).unwrap().unwrap();
        ChartData::new(chart, Limits::default())
    }

    #[test]
    fn ideals_suite_trivial_plane() {
        let d = data("trivial-plane");
        let report = run_suite(&d, Suite::Ideals, 2, false).unwrap();
        assert!(report.all_passed(), "{}", report.to_canonical_json());
        assert_eq!(report.totals.skipped, 0);
    }

    #[test]
    fn crystal_requires_connection() {
        let d = data("cusp-monoid");
        let err = run_suite(&d, Suite::Crystal, 1, false);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn reports_byte_reproducible() {
        let d1 = data("nc-divisor");
        let r1 = run_suite(&d1, Suite::Compositions, 2, false).unwrap();
        let d2 = data("nc-divisor");
        let r2 = run_suite(&d2, Suite::Compositions, 2, false).unwrap();
        assert_eq!(r1.to_canonical_json(), r2.to_canonical_json());
    }

    #[test]
    fn resource_limits_mark_skipped() {
        let chart = crate::corpus::load_builtin("semistable-node")
            .unwrap()
            .unwrap();
        let tight = Limits {
            total_degree: 2,
            ..Limits::default()
        };
        let d = ChartData::new(chart, tight);
        let report = run_suite(&d, Suite::Ideals, 2, false).unwrap();
        assert!(report.totals.skipped > 0, "{}", report.to_canonical_json());
        assert_eq!(report.totals.fail, 0);
    }

    #[test]
    fn canonical_json_sorted_keys() {
        let chart = LogChart::from_file_str(
            crate::corpus::CORPUS
                .iter()
                .find(|e| e.name == "trivial-line")
                .unwrap()
                .json,
        )
        .unwrap();
        let d = ChartData::new(chart, Limits::default());
        let report = run_suite(&d, Suite::Compositions, 1, false).unwrap();
        let json = report.to_canonical_json();
        let a = json.find("\"artifact_version\"").unwrap();
        let c = json.find("\"chart\"").unwrap();
        let s = json.find("\"suite\"").unwrap();
        assert!(a < c && c < s);
    }
}
