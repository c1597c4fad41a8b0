//! Simplicial structure over the diagonal tower: insertion pullbacks, the
//! smashing product, the alternating-sum differential, and the induced
//! exterior derivative on the power modules.

use crate::ctx::ChartData;
use crate::error::{Error, Result};
use crate::module::{self};
use crate::omega::{antisym_to_exterior, Flavor, FormElement};
use crate::pd::PdElem;
use crate::poly::{ring_zero, Polynomial};
use std::sync::Arc;

/// Insertion pullback at the diagonal-algebra level: level n to n+1.
pub fn insertion_diag(
    data: &Arc<ChartData>,
    n: usize,
    j: usize,
    x: &Polynomial,
) -> Result<Polynomial> {
    let alg = data.diagonal(n)?;
    Ok(alg.insertion(data, j)?.apply(x))
}

/// The alternating insertion sum at the diagonal level.
pub fn e_diag(data: &Arc<ChartData>, n: usize, x: &Polynomial) -> Result<Polynomial> {
    let alg = data.diagonal(n)?;
    let target = data.diagonal(n + 1)?;
    let mut acc = ring_zero(&target.ring);
    for j in 0..=(n + 1) {
        let img = alg.insertion(data, j)?.apply(x);
        acc = if j % 2 == 0 { acc.add(&img) } else { acc.sub(&img) };
    }
    Ok(acc)
}

/// The alternating insertion sum at the divided-power level.
pub fn e_pd(data: &Arc<ChartData>, n: usize, x: &PdElem) -> Result<PdElem> {
    let model = data.pd_model(n)?;
    let target = data.pd_model(n + 1)?;
    let mut acc = target.zero();
    for j in 0..=(n + 1) {
        let img = model.insertion(data, j, x)?;
        acc = if j % 2 == 0 {
            module::vec_add(&acc, &img)
        } else {
            module::vec_sub(&acc, &img)
        };
    }
    Ok(acc)
}

/// Smashing pullback at the diagonal level: embed the left factor with
/// trailing unit slots, the right factor with leading unit slots, then
/// multiply at level m + n.
pub fn smash_diag(
    data: &Arc<ChartData>,
    m: usize,
    n: usize,
    a: &Polynomial,
    b: &Polynomial,
) -> Result<Polynomial> {
    let mut left = a.clone();
    for level in m..(m + n) {
        let alg = data.diagonal(level)?;
        left = alg.insertion(data, level + 1)?.apply(&left);
    }
    let mut right = b.clone();
    for level in n..(m + n) {
        let alg = data.diagonal(level)?;
        right = alg.insertion(data, 0)?.apply(&right);
    }
    Ok(left.mul(&right))
}

/// The exterior derivative through the divided-power tower:
/// psi after the alternating sum after phi.
pub fn d_exterior(data: &Arc<ChartData>, q: usize, form: &FormElement) -> Result<FormElement> {
    assert_eq!(form.flavor, Flavor::Exterior);
    assert_eq!(form.degree, q);
    let model = data.pd_model(q)?;
    let down = model.phi(form);
    let up = e_pd(data, q, &down)?;
    let target = data.pd_model(q + 1)?;
    target.psi(data, &up)
}

/// The antisymmetric-flavor variant through the diagonal tower.
pub fn d_antisym(data: &Arc<ChartData>, q: usize, form: &FormElement) -> Result<FormElement> {
    assert_eq!(form.flavor, Flavor::Antisymmetric);
    assert_eq!(form.degree, q);
    let alg = data.diagonal(q)?;
    let down = alg.phi(form, false)?;
    let up = e_diag(data, q, &down)?;
    let target = data.diagonal(q + 1)?;
    target.psi(data, &up)
}

/// One matrix of the de Rham complex in the certified free basis: columns
/// are the images of the degree-q basis wedges (for q = 0, of the relative
/// variables), rows the degree-(q+1) basis wedges.
pub struct DerhamMatrix {
    pub degree: usize,
    pub col_labels: Vec<String>,
    pub row_labels: Vec<String>,
    pub entries: Vec<Vec<Polynomial>>,
}

/// Wedge of chosen basis forms as an exterior form element.
pub fn basis_wedge(data: &Arc<ChartData>, subset: &[usize]) -> Result<FormElement> {
    let witness = data.omega1_basis()?;
    let chart = &data.chart;
    let powers: Vec<_> = (0..=subset.len())
        .map(|d| data.power(d, Flavor::Exterior))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = FormElement::scalar(&powers[0], crate::poly::ring_one(&chart.ring));
    for (l, &m) in subset.iter().enumerate() {
        let ambient = FormElement {
            degree: 1,
            flavor: Flavor::Exterior,
            coords: witness.basis[m].clone(),
        };
        acc = crate::omega::wedge(&acc, &ambient, &powers[l], &powers[1], &powers[l + 1]);
    }
    Ok(acc)
}

/// Coordinates of an exterior form over the basis wedges.
pub fn form_in_basis_wedges(
    data: &Arc<ChartData>,
    form: &FormElement,
) -> Result<Vec<Polynomial>> {
    let witness = data.omega1_basis()?;
    let chart = &data.chart;
    let q = form.degree;
    let r = witness.rank;
    let r1 = chart.omega1_labels().len();
    let tuples = crate::omega::strict_tuples(r1, q);
    let subsets = crate::omega::strict_tuples(r, q);
    let mut out = vec![ring_zero(&chart.ring); subsets.len()];
    for (ti, c) in form.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // expand each ambient label into basis coordinates and multiply out
        let mut partial: Vec<(Vec<usize>, Polynomial)> = vec![(Vec::new(), c.clone())];
        for &label in &tuples[ti] {
            let mut next: Vec<(Vec<usize>, Polynomial)> = Vec::new();
            for (seq, coeff) in &partial {
                for m in 0..r {
                    let w = &witness.coords[label][m];
                    if w.is_zero() || seq.contains(&m) {
                        continue;
                    }
                    let mut s = seq.clone();
                    s.push(m);
                    next.push((s, coeff.mul(w)));
                }
            }
            partial = next;
        }
        for (seq, coeff) in partial {
            // sort the sequence counting inversions
            let mut sorted = seq.clone();
            let mut sign = 1i32;
            for i in 0..sorted.len() {
                for j in (i + 1)..sorted.len() {
                    if sorted[i] > sorted[j] {
                        sorted.swap(i, j);
                        sign = -sign;
                    }
                }
            }
            let idx = subsets
                .iter()
                .position(|s| *s == sorted)
                .expect("subset present");
            out[idx] = if sign >= 0 {
                out[idx].add(&coeff)
            } else {
                out[idx].sub(&coeff)
            };
        }
    }
    // canonical entries
    let ideal = chart.b_ideal();
    out.iter()
        .map(|p| ideal.normal_form(p, &data.limits).map_err(Error::from))
        .collect()
}

/// Matrices of the exterior derivative for degrees 0..=maxdeg.
pub fn derham_matrices(data: &Arc<ChartData>, maxdeg: usize) -> Result<Vec<DerhamMatrix>> {
    let witness = data.omega1_basis()?;
    let chart = &data.chart;
    let r = witness.rank;
    let labels = chart.omega1_labels();
    let mut out = Vec::new();
    for q in 0..=maxdeg {
        let row_subsets = crate::omega::strict_tuples(r, q + 1);
        let row_labels: Vec<String> = row_subsets
            .iter()
            .map(|s| {
                s.iter()
                    .map(|&m| format!("b{m}"))
                    .collect::<Vec<_>>()
                    .join("^")
            })
            .collect();
        let (col_labels, columns): (Vec<String>, Vec<Vec<Polynomial>>) = if q == 0 {
            // the derivation on the relative variables
            let mut names = Vec::new();
            let mut cols = Vec::new();
            for (k, i) in chart.b_var_indices().enumerate() {
                let _ = k;
                let var = crate::poly::ring_var(&chart.ring, i);
                let p0 = data.power(0, Flavor::Exterior)?;
                let form = FormElement::scalar(&p0, var);
                let image = d_exterior(data, 0, &form)?;
                names.push(chart.ring.vars[i].clone());
                cols.push(form_in_basis_wedges(data, &image)?);
            }
            (names, cols)
        } else {
            let col_subsets = crate::omega::strict_tuples(r, q);
            let mut names = Vec::new();
            let mut cols = Vec::new();
            for s in &col_subsets {
                let w = basis_wedge(data, s)?;
                let image = d_exterior(data, q, &w)?;
                names.push(
                    s.iter()
                        .map(|&m| format!("b{m}"))
                        .collect::<Vec<_>>()
                        .join("^"),
                );
                cols.push(form_in_basis_wedges(data, &image)?);
            }
            (names, cols)
        };
        // transpose columns into entry rows
        let entries: Vec<Vec<Polynomial>> = (0..row_subsets.len())
            .map(|ri| columns.iter().map(|c| c[ri].clone()).collect())
            .collect();
        out.push(DerhamMatrix {
            degree: q,
            col_labels,
            row_labels,
            entries,
        });
        let _ = &labels;
    }
    Ok(out)
}

/// The characteristic-two discriminator: the antisymmetric-route
/// derivative of a dlog generator, which is the square of the generator in
/// the antisymmetric flavor, against the exterior route which kills it.
pub struct AntisymWitness {
    /// Normal form of d(dlog g0) in the antisymmetric square.
    pub antisym_value: Vec<Polynomial>,
    pub antisym_nonzero: bool,
    /// Normal form along the exterior route (when a free basis exists).
    pub exterior_value: Option<Vec<Polynomial>>,
    /// Normal form of dlog g0 wedge~ dlog g0 for comparison.
    pub square_value: Vec<Polynomial>,
    pub matches_square: bool,
}

pub fn antisym_variant_differential(data: &Arc<ChartData>) -> Result<AntisymWitness> {
    let chart = &data.chart;
    if chart.p.gens.is_empty() {
        return Err(Error::Precondition(
            "the antisymmetric witness needs a nontrivial monoid chart".into(),
        ));
    }
    let r1 = chart.omega1_labels().len();
    let n_b = chart.b_var_indices().len();
    let p1 = data.power(1, Flavor::Antisymmetric)?;
    let p2 = data.power(2, Flavor::Antisymmetric)?;
    let mut dlog = FormElement::zero(&p1, &chart.ring);
    dlog.coords[n_b] = crate::poly::ring_one(&chart.ring);
    let image = d_antisym(data, 1, &dlog)?;
    let nf = p2
        .pres
        .normal_form(&image.coords, &data.limits)
        .map_err(Error::from)?;
    let antisym_nonzero = !module::vec_is_zero(&nf);
    // the claimed value: dlog wedge~ dlog (note d = -dlog∧~dlog over any
    // base; the sign is invisible precisely when the class is nonzero)
    let square = crate::omega::wedge(&dlog, &dlog, &p1, &p1, &p2);
    let square_nf = p2
        .pres
        .normal_form(&square.coords, &data.limits)
        .map_err(Error::from)?;
    let sum = p2
        .pres
        .normal_form(
            &module::vec_add(&image.coords, &square.coords),
            &data.limits,
        )
        .map_err(Error::from)?;
    let matches_square = module::vec_is_zero(&sum)
        || module::vec_is_zero(&module::vec_sub(&nf, &square_nf));
    let exterior_value = if chart.omega1_basis.is_some() {
        let e1 = data.power(1, Flavor::Exterior)?;
        let ext1 = antisym_to_exterior(&dlog, &p1, &e1);
        let image = d_exterior(data, 1, &ext1)?;
        let p2e = data.power(2, Flavor::Exterior)?;
        Some(
            p2e.pres
                .normal_form(&image.coords, &data.limits)
                .map_err(Error::from)?,
        )
    } else {
        None
    };
    let _ = r1;
    Ok(AntisymWitness {
        antisym_value: nf,
        antisym_nonzero,
        exterior_value,
        square_value: square_nf,
        matches_square,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::LogChart;
    use crate::pd::PdModel;
    use crate::limits::Limits;
    use crate::poly::{ring_one, ring_var};

    fn ctx(json: &str) -> Arc<ChartData> {
        let chart = LogChart::from_file_str(json).unwrap();
        ChartData::new(chart, Limits::default())
    }

    const TRIVIAL_LINE: &str = r#"{
        "name": "trivial-line",
        "field": {"type": "Q"},
        "A": {"variables": [], "relations": []},
        "Q_monoid": {"ambient_rank": 1, "generators": []},
        "alpha_A": [],
        "B": {"variables": ["x"], "relations": []},
        "P_monoid": {"ambient_rank": 1, "generators": []},
        "alpha_B": [],
        "Q_to_P": [[0]],
        "omega1_basis": {"basis": ["d(x)"], "coords": {"d(x)": ["1"]}}
    }"#;

    const TRIVIAL_PLANE: &str = r#"{
        "name": "trivial-plane",
        "field": {"type": "Q"},
        "A": {"variables": [], "relations": []},
        "Q_monoid": {"ambient_rank": 1, "generators": []},
        "alpha_A": [],
        "B": {"variables": ["x", "y"], "relations": []},
        "P_monoid": {"ambient_rank": 1, "generators": []},
        "alpha_B": [],
        "Q_to_P": [[0]],
        "omega1_basis": {
            "basis": ["d(x)", "d(y)"],
            "coords": {"d(x)": ["1", "0"], "d(y)": ["0", "1"]}
        }
    }"#;

    const NC_DIVISOR: &str = r#"{
        "name": "nc-divisor",
        "field": {"type": "Q"},
        "A": {"variables": [], "relations": []},
        "Q_monoid": {"ambient_rank": 1, "generators": []},
        "alpha_A": [],
        "B": {"variables": ["x"], "relations": []},
        "P_monoid": {"ambient_rank": 1, "generators": [[1]]},
        "alpha_B": ["x"],
        "Q_to_P": [[0]],
        "omega1_basis": {
            "basis": ["dlog(g0)"],
            "coords": {"d(x)": ["x"], "dlog(g0)": ["1"]}
        }
    }"#;

    const LOG_POINT_F2: &str = r#"{
        "name": "standard-log-point-f2",
        "field": {"type": "Fp", "p": 2},
        "A": {"variables": [], "relations": []},
        "Q_monoid": {"ambient_rank": 1, "generators": []},
        "alpha_A": [],
        "B": {"variables": [], "relations": []},
        "P_monoid": {"ambient_rank": 1, "generators": [[1]]},
        "alpha_B": ["0"],
        "Q_to_P": [[0]],
        "omega1_basis": {"basis": ["dlog(g0)"], "coords": {"dlog(g0)": ["1"]}}
    }"#;

    const LOG_POINT_Q: &str = r#"{
        "name": "standard-log-point",
        "field": {"type": "Q"},
        "A": {"variables": [], "relations": []},
        "Q_monoid": {"ambient_rank": 1, "generators": []},
        "alpha_A": [],
        "B": {"variables": [], "relations": []},
        "P_monoid": {"ambient_rank": 1, "generators": [[1]]},
        "alpha_B": ["0"],
        "Q_to_P": [[0]],
        "omega1_basis": {"basis": ["dlog(g0)"], "coords": {"dlog(g0)": ["1"]}}
    }"#;

    #[test]
    fn insertion_formula() {
        // j = 1 on level 0: y maps to y (x) 1, i.e. slot 0 keeps it
        let data = ctx(TRIVIAL_LINE);
        let alg0 = data.diagonal(0).unwrap();
        let y = ring_var(&alg0.ring, alg0.slot_var(0, 0));
        let img1 = insertion_diag(&data, 0, 1, &y).unwrap();
        let alg1 = data.diagonal(1).unwrap();
        assert_eq!(img1, ring_var(&alg1.ring, alg1.slot_var(0, 0)));
        // j = 0 shifts into slot 1
        let img0 = insertion_diag(&data, 0, 0, &y).unwrap();
        assert_eq!(img0, ring_var(&alg1.ring, alg1.slot_var(1, 0)));
    }

    #[test]
    fn insertion_cosimplicial_identity() {
        // d_j^* d_i^* = d_i^* d_{j-1}^* for i < j on all generators
        let data = ctx(NC_DIVISOR);
        for n in 0..=1usize {
            let alg = data.diagonal(n).unwrap();
            let top = data.diagonal(n + 2).unwrap();
            for i in 0..=(n + 1) {
                for j in (i + 1)..=(n + 2) {
                    for v in 0..alg.ring.nvars() {
                        let x = ring_var(&alg.ring, v);
                        let a = insertion_diag(&data, n, i, &x).unwrap();
                        let a = insertion_diag(&data, n + 1, j, &a).unwrap();
                        let b = insertion_diag(&data, n, j - 1, &x).unwrap();
                        let b = insertion_diag(&data, n + 1, i, &b).unwrap();
                        let diff = top.nf_base(&a.sub(&b)).unwrap();
                        assert!(diff.is_zero(), "identity fails at n={n} i={i} j={j} var {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn merge_insertion_case_table() {
        // mu_{i-1,i} after d_j^* matches the case table
        let data = ctx(NC_DIVISOR);
        for n in 1..=2usize {
            let alg = data.diagonal(n).unwrap();
            for i in 1..=(n + 1) {
                for j in 0..=(n + 1) {
                    for v in 0..alg.ring.nvars() {
                        let x = ring_var(&alg.ring, v);
                        let up = insertion_diag(&data, n, j, &x).unwrap();
                        let upper = data.diagonal(n + 1).unwrap();
                        let lhs = upper.mu(&data, i - 1, i).unwrap().apply(&up);
                        let rhs = if j + 1 < i {
                            // d_j^* after mu_{i-2,i-1}
                            let down = alg.mu(&data, i - 2, i - 1).unwrap().apply(&x);
                            insertion_diag(&data, n - 1, j, &down).unwrap()
                        } else if j == i - 1 || j == i {
                            x.clone()
                        } else {
                            let down = alg.mu(&data, i - 1, i).unwrap().apply(&x);
                            insertion_diag(&data, n - 1, j - 1, &down).unwrap()
                        };
                        let diff = alg.nf_base(&lhs.sub(&rhs)).unwrap();
                        assert!(
                            diff.is_zero(),
                            "case table fails at n={n} i={i} j={j} var {v}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn e_squared_zero_diag() {
        let data = ctx(NC_DIVISOR);
        for n in 0..=1usize {
            let alg = data.diagonal(n).unwrap();
            let top = data.diagonal(n + 2).unwrap();
            for v in 0..alg.ring.nvars() {
                let x = ring_var(&alg.ring, v);
                let e1 = e_diag(&data, n, &x).unwrap();
                let e2 = e_diag(&data, n + 1, &e1).unwrap();
                assert!(top.nf_base(&e2).unwrap().is_zero(), "e∘e != 0 at n={n}");
            }
        }
    }

    #[test]
    fn e_squared_zero_pd() {
        let data = ctx(NC_DIVISOR);
        for n in 0..=1usize {
            let model = data.pd_model(n).unwrap();
            let top = data.pd_model(n + 2).unwrap();
            for i in 0..model.basis.len() {
                let mut x = model.zero();
                x[i] = ring_one(&data.chart.ring);
                let e1 = e_pd(&data, n, &x).unwrap();
                let e2 = e_pd(&data, n + 1, &e1).unwrap();
                assert!(top.is_zero(&e2).unwrap(), "e∘e != 0 in the model at n={n}");
            }
        }
    }

    #[test]
    fn e0_is_the_derivation() {
        // psi_1(e_0(b)) = db on both routes
        let data = ctx(TRIVIAL_PLANE);
        let alg0 = data.diagonal(0).unwrap();
        let b = ring_var(&alg0.ring, alg0.slot_var(0, 0))
            .mul(&ring_var(&alg0.ring, alg0.slot_var(0, 1))); // xy
        let e = e_diag(&data, 0, &b).unwrap();
        let alg1 = data.diagonal(1).unwrap();
        let psi = alg1.psi(&data, &e).unwrap();
        // expect d(xy) = x dy + y dx: ambient coords (y, x)
        let expect_x = crate::parse::parse_polynomial(&data.chart.ring, "y").unwrap();
        let expect_y = crate::parse::parse_polynomial(&data.chart.ring, "x").unwrap();
        assert_eq!(psi.coords[0], expect_x);
        assert_eq!(psi.coords[1], expect_y);
    }

    #[test]
    fn e1_dlog_four_terms_and_psi2() {
        let data = ctx(LOG_POINT_Q);
        let alg1 = data.diagonal(1).unwrap();
        let delta = alg1.gen_delta(0, 1, &[1]).unwrap();
        let e = e_diag(&data, 1, &delta).unwrap();
        let alg2 = data.diagonal(2).unwrap();
        // four-term shape: e^{(0,-p,p)} - e^{(-p,0,p)} + e^{(-p,p,0)} - 1
        let tuple = |a: i64, b: i64, c: i64| vec![vec![a], vec![b], vec![c]];
        let emb = |t: Vec<Vec<i64>>| {
            let v = alg2.pn.lattice.embed_tuple(&t).unwrap();
            alg2.monomial_of(&v).unwrap()
        };
        let expect = emb(tuple(0, -1, 1))
            .sub(&emb(tuple(-1, 0, 1)))
            .add(&emb(tuple(-1, 1, 0)))
            .sub(&crate::poly::ring_one(&alg2.ring));
        assert!(alg2.nf_base(&e.sub(&expect)).unwrap().is_zero());
        // over Q, psi_2 of it is zero in the antisymmetric square
        let psi = alg2.psi(&data, &e).unwrap();
        let p2 = data.power(2, Flavor::Antisymmetric).unwrap();
        let nf = p2.pres.normal_form(&psi.coords, &data.limits).unwrap();
        assert!(module::vec_is_zero(&nf));
    }

    #[test]
    fn char2_discriminator() {
        let data = ctx(LOG_POINT_F2);
        let w = antisym_variant_differential(&data).unwrap();
        assert!(w.antisym_nonzero, "antisymmetric witness must be nonzero");
        assert!(w.matches_square, "witness must equal dlog wedge~ dlog");
        let ext = w.exterior_value.unwrap();
        assert!(module::vec_is_zero(&ext), "exterior route must vanish");
        // over Q both routes vanish
        let data = ctx(LOG_POINT_Q);
        let w = antisym_variant_differential(&data).unwrap();
        assert!(!w.antisym_nonzero);
        assert!(module::vec_is_zero(&w.exterior_value.unwrap()));
    }

    #[test]
    fn derham_matrices_classical() {
        // trivial line: d0 is the partial derivative
        let data = ctx(TRIVIAL_LINE);
        let ms = derham_matrices(&data, 1).unwrap();
        assert_eq!(ms[0].entries.len(), 1);
        assert_eq!(ms[0].entries[0][0], ring_one(&data.chart.ring));
        // nc divisor: d(x) = x dlog(g0)
        let data = ctx(NC_DIVISOR);
        let ms = derham_matrices(&data, 1).unwrap();
        let x = crate::parse::parse_polynomial(&data.chart.ring, "x").unwrap();
        assert_eq!(ms[0].entries[0][0], x);
    }

    #[test]
    fn d_squared_zero_on_plane() {
        let data = ctx(TRIVIAL_PLANE);
        // d(x*y d(x)) and d of it again
        let p1 = data.power(1, Flavor::Exterior).unwrap();
        let xy = crate::parse::parse_polynomial(&data.chart.ring, "x*y").unwrap();
        let mut form = FormElement::zero(&p1, &data.chart.ring);
        form.coords[0] = xy;
        let d1 = d_exterior(&data, 1, &form).unwrap();
        let d2 = d_exterior(&data, 2, &d1).unwrap();
        let p3 = data.power(3, Flavor::Exterior).unwrap();
        let nf = p3.pres.normal_form(&d2.coords, &data.limits).unwrap();
        assert!(module::vec_is_zero(&nf));
        // classical value of the first step: d(xy dx) = x dy ∧ dx = -x dx ∧ dy
        let p2 = data.power(2, Flavor::Exterior).unwrap();
        let nf1 = p2.pres.normal_form(&d1.coords, &data.limits).unwrap();
        let minus_x = crate::parse::parse_polynomial(&data.chart.ring, "-x").unwrap();
        assert_eq!(nf1[0], minus_x);
    }

    #[test]
    fn leibniz_operator_identity() {
        // e_{m+n} s* = s*(e_m ⊗ id) + (-1)^m s*(id ⊗ e_n) on generators
        let data = ctx(NC_DIVISOR);
        for m in 0..=1usize {
            for n in 0..=1usize {
                let alg_m = data.diagonal(m).unwrap();
                let alg_n = data.diagonal(n).unwrap();
                let target = data.diagonal(m + n + 1).unwrap();
                for va in 0..alg_m.ring.nvars() {
                    for vb in 0..alg_n.ring.nvars() {
                        let a = ring_var(&alg_m.ring, va);
                        let b = ring_var(&alg_n.ring, vb);
                        let s = smash_diag(&data, m, n, &a, &b).unwrap();
                        let lhs = e_diag(&data, m + n, &s).unwrap();
                        let ea = e_diag(&data, m, &a).unwrap();
                        let t1 = smash_diag(&data, m + 1, n, &ea, &b).unwrap();
                        let eb = e_diag(&data, n, &b).unwrap();
                        let t2 = smash_diag(&data, m, n + 1, &a, &eb).unwrap();
                        let rhs = if m % 2 == 0 { t1.add(&t2) } else { t1.sub(&t2) };
                        let diff = target.nf_base(&lhs.sub(&rhs)).unwrap();
                        assert!(
                            diff.is_zero(),
                            "Leibniz fails at m={m} n={n} vars ({va},{vb})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn smash_induces_wedge() {
        // s*(phi(dx) ⊗ phi(dy)) equals phi_2(dx ∧ dy) at the pd level
        let data = ctx(TRIVIAL_PLANE);
        let m1 = data.pd_model(1).unwrap();
        let m2 = data.pd_model(2).unwrap();
        let dx = m1.gen_elem(1, 0);
        let dy = m1.gen_elem(1, 1);
        let smashed = PdModel::smash(&data, 1, 1, &dx, &dy).unwrap();
        let ext2 = data.power(2, Flavor::Exterior).unwrap();
        let mut w = FormElement::zero(&ext2, &data.chart.ring);
        w.coords[0] = ring_one(&data.chart.ring);
        let direct = m2.phi(&w);
        let diff = module::vec_sub(&smashed, &direct);
        assert!(m2.is_zero(&diff).unwrap());
        // smashing with a scalar second factor is the trailing insertion
        let m0 = data.pd_model(0).unwrap();
        let c = m0.scalar(&crate::parse::parse_polynomial(&data.chart.ring, "x").unwrap());
        let s = PdModel::smash(&data, 1, 0, &dx, &c).unwrap();
        let expect = m1.apply_map(
            &m1,
            &dx,
            &|slot, form| m1.gen_elem(slot, form),
            &|cc| m1.coeff_through_slot(1, &crate::parse::parse_polynomial(&data.chart.ring, "x").unwrap()).iter().map(|p| p.mul(cc)).collect(),
        );
        let diff = module::vec_sub(&s, &expect);
        assert!(m1.is_zero(&diff).unwrap());
    }

    #[test]
    fn e_image_lands_in_common_ideal_pd() {
        // mu_{i-1,i} kills e_n(phi(w)) in the model
        let data = ctx(TRIVIAL_PLANE);
        let n = 1usize;
        let model = data.pd_model(n).unwrap();
        let upper = data.pd_model(n + 1).unwrap();
        let ext = data.power(n, Flavor::Exterior).unwrap();
        for ti in 0..ext.tuples.len() {
            let mut w = FormElement::zero(&ext, &data.chart.ring);
            w.coords[ti] = ring_one(&data.chart.ring);
            let down = model.phi(&w);
            let e = e_pd(&data, n, &down).unwrap();
            for i in 1..=(n + 1) {
                let merged = upper.merge(&data, i - 1, i, &e).unwrap();
                let lower = data.pd_model(n).unwrap();
                assert!(
                    lower.is_zero(&merged).unwrap(),
                    "merge {i} does not kill the alternating image"
                );
            }
        }
    }

    #[test]
    fn wedge_diagram_diag_level() {
        // Psi_{m+n}(s*(Phi_m τ ⊗ Phi_n ω)) = τ ∧~ ω on the antisymmetric side
        let data = ctx(NC_DIVISOR);
        let (m, n) = (1usize, 1usize);
        let alg_m = data.diagonal(m).unwrap();
        let alg_n = data.diagonal(n).unwrap();
        let target = data.diagonal(m + n).unwrap();
        let p1 = data.power(1, Flavor::Antisymmetric).unwrap();
        let p2 = data.power(2, Flavor::Antisymmetric).unwrap();
        for ta in 0..p1.tuples.len() {
            for tb in 0..p1.tuples.len() {
                let mut wa = FormElement::zero(&p1, &data.chart.ring);
                wa.coords[ta] = ring_one(&data.chart.ring);
                let mut wb = FormElement::zero(&p1, &data.chart.ring);
                wb.coords[tb] = ring_one(&data.chart.ring);
                let fa = alg_m.phi(&wa, false).unwrap();
                let fb = alg_n.phi(&wb, false).unwrap();
                let s = smash_diag(&data, m, n, &fa, &fb).unwrap();
                let psi = target.psi(&data, &s).unwrap();
                let expect = crate::omega::wedge(&wa, &wb, &p1, &p1, &p2);
                let diff = p2
                    .pres
                    .normal_form(
                        &module::vec_sub(&psi.coords, &expect.coords),
                        &data.limits,
                    )
                    .unwrap();
                assert!(
                    module::vec_is_zero(&diff),
                    "wedge diagram fails on tuples ({ta},{tb})"
                );
            }
        }
    }
}
