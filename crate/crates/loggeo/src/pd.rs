//! The divided-power truncation at level n for charts with a certified
//! free basis of the differential module: a free module over the chart
//! ring on slot-by-form exterior monomials, with same-slot products and
//! same-form cross products dying. The slot-0 projection realizes the
//! coefficients; the maps to and from the exterior power are mutually
//! inverse on the common ideal.

use crate::chart::LogChart;
use crate::ctx::ChartData;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::module::{self, vec_zero, ModulePresentation, Vector};
use crate::omega::{wedge, Flavor, FormElement, Omega1Basis};
use crate::poly::{ring_one, Polynomial};
use std::collections::HashMap;
use std::sync::Arc;

/// Basis monomial: a set of slots (bit i-1 for slot i, 1 <= i <= n) and an
/// equally sized set of basis forms, paired in ascending order.
pub type Mask = (u32, u32);

#[derive(Debug)]
pub struct PdModel {
    pub chart: LogChart,
    pub limits: Limits,
    pub n: usize,
    /// Rank of the free differential basis.
    pub r: usize,
    pub witness: Arc<Omega1Basis>,
    pub basis: Vec<Mask>,
    pub index: HashMap<Mask, usize>,
    /// Free module over the chart ring modulo its relations.
    pub pres: ModulePresentation,
}

/// An element of the model in basis coordinates.
pub type PdElem = Vector;

fn popcount(m: u32) -> usize {
    m.count_ones() as usize
}

fn bits(m: u32) -> Vec<usize> {
    (0..32).filter(|b| m & (1 << b) != 0).collect()
}

/// Crossings between two disjoint ascending bit sets (the merge sign).
fn merge_sign(a: u32, b: u32) -> i32 {
    let mut crossings = 0u32;
    for bit in bits(b) {
        crossings += (a >> (bit + 1)).count_ones();
    }
    if crossings % 2 == 0 {
        1
    } else {
        -1
    }
}

impl PdModel {
    pub fn build(data: &Arc<ChartData>, n: usize) -> Result<PdModel> {
        let chart = data.chart.clone();
        let limits = data.limits;
        let witness = data.omega1_basis()?;
        let r = witness.rank;
        assert!(n <= 31, "level too large for the mask representation");
        let mut basis: Vec<Mask> = Vec::new();
        for k in 0..=n.min(r) {
            for &j in &subsets_of_size(n, k) {
                for &f in &subsets_of_size(r, k) {
                    basis.push((j, f));
                }
            }
        }
        basis.sort_by_key(|&(j, f)| (popcount(j), j, f));
        let index = basis.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let pres = ModulePresentation::new(
            chart.ring.clone(),
            basis.len(),
            Vec::new(),
            chart.full_relations(),
        );
        Ok(PdModel {
            chart,
            limits,
            n,
            r,
            witness,
            basis,
            index,
            pres,
        })
    }

    pub fn zero(&self) -> PdElem {
        vec_zero(&self.chart.ring, self.basis.len())
    }

    pub fn one(&self) -> PdElem {
        self.scalar(&ring_one(&self.chart.ring))
    }

    pub fn scalar(&self, p: &Polynomial) -> PdElem {
        let mut e = self.zero();
        e[self.index[&(0, 0)]] = p.clone();
        e
    }

    /// The generator carrying basis form `form` in slot `slot` (1-based).
    pub fn gen_elem(&self, slot: usize, form: usize) -> PdElem {
        assert!(slot >= 1 && slot <= self.n, "slot out of range");
        assert!(form < self.r, "form index out of range");
        let mut e = self.zero();
        e[self.index[&(1 << (slot - 1), 1 << form)]] = ring_one(&self.chart.ring);
        e
    }

    /// Product in the slot-exterior tensor form-exterior algebra, with the
    /// sign of moving the left form block past the right slot block.
    pub fn mul(&self, a: &PdElem, b: &PdElem) -> PdElem {
        let mut out = self.zero();
        for (ia, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let (ja, fa) = self.basis[ia];
            for (ib, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let (jb, fb) = self.basis[ib];
                if ja & jb != 0 || fa & fb != 0 {
                    continue;
                }
                let mut sign = merge_sign(ja, jb) * merge_sign(fa, fb);
                if (popcount(fa) * popcount(jb)) % 2 == 1 {
                    sign = -sign;
                }
                let idx = self.index[&(ja | jb, fa | fb)];
                let prod = ca.mul(cb);
                out[idx] = if sign >= 0 {
                    out[idx].add(&prod)
                } else {
                    out[idx].sub(&prod)
                };
            }
        }
        out
    }

    pub fn nf(&self, e: &PdElem) -> Result<PdElem> {
        self.pres.normal_form(e, &self.limits).map_err(Error::from)
    }

    pub fn is_zero(&self, e: &PdElem) -> Result<bool> {
        Ok(module::vec_is_zero(&self.nf(e)?))
    }

    /// A degree-one ambient form vector placed in one slot, through the
    /// certified basis coordinates.
    pub fn form_in_slot(&self, slot: usize, ambient: &Vector) -> PdElem {
        let coords = self.witness.express(ambient, &self.chart.ring);
        let mut out = self.zero();
        for (m, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                let idx = self.index[&(1 << (slot - 1), 1 << m)];
                out[idx] = out[idx].add(c);
            }
        }
        out
    }

    /// phi_slot of a degree-one form.
    pub fn phi_component(&self, slot: usize, form: &FormElement) -> PdElem {
        assert_eq!(form.degree, 1, "phi takes degree-one forms");
        self.form_in_slot(slot, &form.coords)
    }

    /// Phi on an exterior degree-n form: the product of the slot images of
    /// the wedge factors.
    pub fn phi(&self, form: &FormElement) -> PdElem {
        assert_eq!(form.degree, self.n, "phi takes degree-n forms");
        assert_eq!(form.flavor, Flavor::Exterior, "phi takes exterior forms");
        let r1 = self.chart.omega1_labels().len();
        let tuples = crate::omega::strict_tuples(r1, self.n);
        assert_eq!(tuples.len(), form.coords.len(), "power rank mismatch");
        let mut acc = self.zero();
        for (ti, c) in form.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut prod = self.scalar(c);
            for (l, &label) in tuples[ti].iter().enumerate() {
                let mut unit = vec_zero(&self.chart.ring, r1);
                unit[label] = ring_one(&self.chart.ring);
                let factor = self.form_in_slot(l + 1, &unit);
                prod = self.mul(&prod, &factor);
            }
            acc = module::vec_add(&acc, &prod);
        }
        acc
    }

    /// Psi: only the full-slot monomials survive, each mapping to the
    /// wedge of its basis forms with the orientation of the slot-ordered
    /// generator product.
    pub fn psi(&self, data: &Arc<ChartData>, e: &PdElem) -> Result<FormElement> {
        let ext: Vec<Arc<crate::omega::PowerModule>> = (0..=self.n)
            .map(|d| data.power(d, Flavor::Exterior))
            .collect::<Result<_>>()?;
        let target = ext[self.n].clone();
        let mut acc = FormElement::zero(&target, &self.chart.ring);
        if self.n > self.r {
            return Ok(acc);
        }
        let full: u32 = if self.n == 0 { 0 } else { (1 << self.n) - 1 };
        let flip = self.n >= 2 && (self.n * (self.n - 1) / 2) % 2 == 1;
        for (i, c) in e.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (j, f) = self.basis[i];
            if j != full {
                continue;
            }
            let mut w = FormElement::scalar(&ext[0], c.clone());
            for (l, form_idx) in bits(f).into_iter().enumerate() {
                let ambient = FormElement {
                    degree: 1,
                    flavor: Flavor::Exterior,
                    coords: self.witness.basis[form_idx].clone(),
                };
                w = wedge(&w, &ambient, &ext[l], &ext[1], &ext[l + 1]);
            }
            if flip {
                w = w.neg();
            }
            acc = acc.add(&w);
        }
        Ok(acc)
    }

    /// Apply a multiplicative map given by its action on the slot
    /// generators and on coefficients.
    pub fn apply_map(
        &self,
        target: &PdModel,
        e: &PdElem,
        slot_image: &dyn Fn(usize, usize) -> PdElem,
        coeff_image: &dyn Fn(&Polynomial) -> PdElem,
    ) -> PdElem {
        let mut out = target.zero();
        for (i, c) in e.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (j, f) = self.basis[i];
            let k = popcount(j);
            let mut acc = coeff_image(c);
            for (slot, form) in bits(j).into_iter().zip(bits(f)) {
                acc = target.mul(&acc, &slot_image(slot + 1, form));
            }
            if k >= 2 && (k * (k - 1) / 2) % 2 == 1 {
                acc = acc.iter().map(|p| p.neg()).collect();
            }
            out = module::vec_add(&out, &acc);
        }
        out
    }

    /// The image of a coefficient under the slot-m projection twist:
    /// b plus the slot-m form of its differential (slot 0 is the identity).
    pub fn coeff_through_slot(&self, slot: usize, c: &Polynomial) -> PdElem {
        if slot == 0 {
            return self.scalar(c);
        }
        let d = crate::omega::d_of_polynomial(&self.chart, c);
        let mut out = self.form_in_slot(slot, &d);
        let idx = self.index[&(0, 0)];
        out[idx] = out[idx].add(c);
        out
    }

    /// Insertion map to the level-(n+1) model at position j.
    pub fn insertion(&self, data: &Arc<ChartData>, j: usize, e: &PdElem) -> Result<PdElem> {
        assert!(j <= self.n + 1, "insertion position out of range");
        let target = data.pd_model(self.n + 1)?;
        let slot_image = |slot: usize, form: usize| -> PdElem {
            if j == 0 {
                let up = target.gen_elem(slot + 1, form);
                let corr = target.gen_elem(1, form);
                module::vec_sub(&up, &corr)
            } else if slot >= j {
                target.gen_elem(slot + 1, form)
            } else {
                target.gen_elem(slot, form)
            }
        };
        let coeff_image = |c: &Polynomial| -> PdElem {
            if j == 0 {
                target.coeff_through_slot(1, c)
            } else {
                target.scalar(c)
            }
        };
        Ok(self.apply_map(&target, e, &slot_image, &coeff_image))
    }

    /// Merge map to the level-(n-1) model collapsing slot j onto slot i.
    pub fn merge(&self, data: &Arc<ChartData>, i: usize, j: usize, e: &PdElem) -> Result<PdElem> {
        assert!(i < j && j <= self.n, "merge indices out of range");
        let target = data.pd_model(self.n - 1)?;
        let slot_image = |slot: usize, form: usize| -> PdElem {
            let new_slot = if slot == j {
                i
            } else if slot > j {
                slot - 1
            } else {
                slot
            };
            if new_slot == 0 {
                target.zero()
            } else {
                target.gen_elem(new_slot, form)
            }
        };
        let coeff_image = |c: &Polynomial| -> PdElem { target.scalar(c) };
        Ok(self.apply_map(&target, e, &slot_image, &coeff_image))
    }

    /// The smashing product into the level-(m+n) model: the left factor
    /// keeps its slots, the right factor shifts up by m with its
    /// coefficients pulled through slot m.
    pub fn smash(
        data: &Arc<ChartData>,
        m: usize,
        n: usize,
        a: &PdElem,
        b: &PdElem,
    ) -> Result<PdElem> {
        let model_m = data.pd_model(m)?;
        let model_n = data.pd_model(n)?;
        let target = data.pd_model(m + n)?;
        let left = model_m.apply_map(
            &target,
            a,
            &|slot, form| target.gen_elem(slot, form),
            &|c| target.scalar(c),
        );
        let right = model_n.apply_map(
            &target,
            b,
            &|slot, form| target.gen_elem(slot + m, form),
            &|c| target.coeff_through_slot(m, c),
        );
        Ok(target.mul(&left, &right))
    }

    /// Generators of the partial-diagonal image ideal for the pair (i, j):
    /// slot differences, or the plain slot forms when i = 0.
    pub fn ideal_gens(&self, i: usize, j: usize) -> Vec<PdElem> {
        assert!(i < j && j <= self.n);
        (0..self.r)
            .map(|m| {
                if i == 0 {
                    self.gen_elem(j, m)
                } else {
                    module::vec_sub(&self.gen_elem(j, m), &self.gen_elem(i, m))
                }
            })
            .collect()
    }

    /// The ideal generated by degree-one generators, as a submodule
    /// generating set: products with every basis monomial.
    pub fn ideal_span(&self, gens: &[PdElem]) -> Vec<PdElem> {
        let mut out = Vec::new();
        for g in gens {
            for i in 0..self.basis.len() {
                let mut unit = self.zero();
                unit[i] = ring_one(&self.chart.ring);
                let prod = self.mul(g, &unit);
                if !module::vec_is_zero(&prod) {
                    out.push(prod);
                }
            }
        }
        out
    }

    pub fn submodule_gb(&self, gens: &[PdElem]) -> Result<Vec<Vector>> {
        let mut all: Vec<Vector> = gens.to_vec();
        all.extend(self.pres.full_relations());
        crate::module::module_groebner(&self.chart.ring, self.basis.len(), &all, &self.limits)
            .map_err(Error::from)
    }

    pub fn submodule_equal(&self, a: &[PdElem], b: &[PdElem]) -> Result<bool> {
        Ok(self.submodule_gb(a)? == self.submodule_gb(b)?)
    }

    pub fn intersect(&self, a: &[PdElem], b: &[PdElem]) -> Result<Vec<PdElem>> {
        crate::module::module_intersection(
            &self.chart.ring,
            self.basis.len(),
            a,
            b,
            &self.pres.full_relations(),
            &self.limits,
        )
        .map_err(Error::from)
    }

    pub fn product(&self, a: &[PdElem], b: &[PdElem]) -> Vec<PdElem> {
        let mut out = Vec::new();
        for x in a {
            for y in b {
                let p = self.mul(x, y);
                if !module::vec_is_zero(&p) {
                    out.push(p);
                }
            }
        }
        out
    }
}

pub(crate) fn subsets_of_size(nbits: usize, k: usize) -> Vec<u32> {
    (0u32..(1 << nbits)).filter(|m| popcount(*m) == k).collect()
}

/// Five-ideal record inside the divided-power model.
pub struct PdFiveIdeals {
    pub all_equal: bool,
    /// Generators of the common ideal (from the slot-0 intersection).
    pub common: Vec<PdElem>,
    /// Whether the common ideal is spanned by the full-slot basis
    /// monomials, hence free of rank (r choose n).
    pub free_of_expected_rank: bool,
}

pub fn pd_five_ideals(data: &Arc<ChartData>, n: usize) -> Result<PdFiveIdeals> {
    let model = data.pd_model(n)?;
    let span_of = |pairs: &[(usize, usize)]| -> Vec<Vec<PdElem>> {
        pairs
            .iter()
            .map(|&(i, j)| model.ideal_span(&model.ideal_gens(i, j)))
            .collect()
    };
    let intersect_all = |spans: &[Vec<PdElem>]| -> Result<Vec<PdElem>> {
        let mut acc: Option<Vec<PdElem>> = None;
        for s in spans {
            acc = Some(match acc {
                None => s.clone(),
                Some(cur) => model.intersect(&cur, s)?,
            });
        }
        Ok(acc.expect("nonempty"))
    };
    let product_all = |spans: &[Vec<PdElem>]| -> Vec<PdElem> {
        let mut acc: Vec<PdElem> = vec![model.one()];
        for s in spans {
            acc = model.product(&acc, s);
        }
        acc
    };
    let zero_pairs: Vec<(usize, usize)> = (1..=n).map(|j| (0, j)).collect();
    let adj_pairs: Vec<(usize, usize)> = (1..=n).map(|j| (j - 1, j)).collect();
    let all_pairs: Vec<(usize, usize)> = (0..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .collect();
    let zero_spans = span_of(&zero_pairs);
    let adj_spans = span_of(&adj_pairs);
    let all_spans = span_of(&all_pairs);
    let inter_0j = intersect_all(&zero_spans)?;
    let prod_0j = product_all(&zero_spans);
    let inter_adj = intersect_all(&adj_spans)?;
    let prod_adj = product_all(&adj_spans);
    let inter_all = intersect_all(&all_spans)?;
    let mut all_equal = true;
    for other in [&prod_0j, &inter_adj, &prod_adj, &inter_all] {
        if !model.submodule_equal(&inter_0j, other)? {
            all_equal = false;
        }
    }
    // the common ideal should be exactly the span of the full-slot
    // monomials: free of rank (r choose n)
    let full: u32 = if n == 0 { 0 } else { (1 << n) - 1 };
    let mut expected: Vec<PdElem> = Vec::new();
    for (i, &(j, _)) in model.basis.iter().enumerate() {
        if j == full {
            let mut unit = model.zero();
            unit[i] = ring_one(&model.chart.ring);
            expected.push(unit);
        }
    }
    let free_of_expected_rank = model.submodule_equal(&inter_0j, &expected)?;
    Ok(PdFiveIdeals {
        all_equal,
        common: inter_0j,
        free_of_expected_rank,
    })
}

/// The canonical algebra map from the level-n diagonal quotient to the
/// model: slot variables map to their slot projections, monoid variables
/// to the exponentials of their defining tuples. Returns the images of
/// every diagonal presentation variable.
pub fn comparison_map(
    data: &Arc<ChartData>,
    n: usize,
) -> Result<(
    Arc<crate::diagonal::DiagonalAlgebra>,
    Arc<PdModel>,
    Vec<PdElem>,
)> {
    let alg = data.diagonal(n)?;
    let model = data.pd_model(n)?;
    let chart = &data.chart;
    let n_b = chart.b_var_indices().len();
    let mut images: Vec<PdElem> = Vec::new();
    for v in 0..alg.ring.nvars() {
        let img = match alg.var_kind(v) {
            crate::diagonal::DiagVar::Base(t) => {
                model.scalar(&crate::poly::ring_var(&chart.ring, t))
            }
            crate::diagonal::DiagVar::Slot(i, k) => {
                let var = crate::poly::ring_var(&chart.ring, chart.n_a_vars + k);
                model.coeff_through_slot(i, &var)
            }
            crate::diagonal::DiagVar::PiGen(gi) | crate::diagonal::DiagVar::DiffGen(gi) => {
                // e^{(p_0,...,p_n)} = pi_0(alpha(sum)) prod_{i>=1} (1 + omega_i(dlog p_i))
                let g = &alg.pn.gens[gi];
                let mut sum = vec![0i64; chart.p.rank];
                for entry in &g.tuple {
                    for (a, &c) in sum.iter_mut().zip(entry) {
                        *a += c;
                    }
                }
                let s_exps = chart
                    .p
                    .decompose(&sum, &data.limits)
                    .map_err(Error::from)?
                    .ok_or_else(|| Error::Chart(format!("{sum:?} is not in P")))?;
                let mut acc = model.scalar(&chart.alpha_b_power(&s_exps));
                for (i, entry) in g.tuple.iter().enumerate().skip(1) {
                    if entry.iter().all(|&c| c == 0) {
                        continue;
                    }
                    let unit = dlog_unit(&model, chart, i, entry, n_b)?;
                    acc = model.mul(&acc, &unit);
                }
                acc
            }
        };
        images.push(img);
    }
    Ok((alg, model, images))
}

/// The unit 1 + omega_slot(dlog p) for p in P^gp.
fn dlog_unit(
    model: &PdModel,
    chart: &LogChart,
    slot: usize,
    p: &[i64],
    n_b: usize,
) -> Result<PdElem> {
    let labels = chart.omega1_labels().len();
    let z = chart
        .p
        .group_decompose(p)
        .map_err(Error::from)?
        .ok_or_else(|| Error::Chart(format!("{p:?} not in the group of P")))?;
    let mut dlog = vec_zero(&chart.ring, labels);
    for (j, &zj) in z.iter().enumerate() {
        if zj != 0 {
            dlog[n_b + j] =
                crate::poly::ring_constant(&chart.ring, chart.ring.field.from_i64(zj));
        }
    }
    Ok(module::vec_add(
        &model.one(),
        &model.form_in_slot(slot, &dlog),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(json: &str) -> Arc<ChartData> {
        let chart = LogChart::from_file_str(json).unwrap();
        ChartData::new(chart, Limits::default())
    }

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
        "omega1_basis": {
            "basis": ["dlog(g0)"],
            "coords": {"dlog(g0)": ["1"]}
        }
    }"#;

    #[test]
    fn rank_counts() {
        // n = 1: 1 + r
        let data = ctx(NC_DIVISOR);
        let m1 = data.pd_model(1).unwrap();
        assert_eq!(m1.basis.len(), 2);
        // n = 2, r = 1: rank 3, the mixed monomial with a repeated form dies
        let m2 = data.pd_model(2).unwrap();
        assert_eq!(m2.basis.len(), 3);
        // n = 2, r = 2: 1 + 4 + 1
        let data = ctx(TRIVIAL_PLANE);
        let m = data.pd_model(2).unwrap();
        assert_eq!(m.basis.len(), 6);
        // n = 3, r = 2: 1 + 6 + 3 + 0
        let m3 = data.pd_model(3).unwrap();
        assert_eq!(m3.basis.len(), 10);
    }

    #[test]
    fn multiplication_rules() {
        let data = ctx(TRIVIAL_PLANE);
        let m = data.pd_model(2).unwrap();
        let w1x = m.gen_elem(1, 0);
        let w1y = m.gen_elem(1, 1);
        let w2x = m.gen_elem(2, 0);
        let w2y = m.gen_elem(2, 1);
        // same slot dies
        assert!(module::vec_is_zero(&m.mul(&w1x, &w1y)));
        // same form across slots dies (the divided-square relation)
        assert!(module::vec_is_zero(&m.mul(&w1x, &w2x)));
        // cross antisymmetry in the arguments
        let ab = m.mul(&w1x, &w2y);
        let ba = m.mul(&w1y, &w2x);
        assert!(module::vec_is_zero(&module::vec_add(&ab, &ba)));
        assert!(!module::vec_is_zero(&ab));
        // associativity on a sample
        let s = module::vec_add(&w1x, &w2y);
        let left = m.mul(&m.mul(&s, &w2x), &w1y);
        let right = m.mul(&s, &m.mul(&w2x, &w1y));
        assert_eq!(left, right);
    }

    #[test]
    fn phi_kills_same_form_even_in_char2() {
        let data = ctx(LOG_POINT_F2);
        let model = data.pd_model(2).unwrap();
        let chart_ring = &data.chart.ring;
        let unit = vec![ring_one(chart_ring)];
        let f1 = model.form_in_slot(1, &unit);
        let f2 = model.form_in_slot(2, &unit);
        let prod = model.mul(&f1, &f2);
        assert!(
            module::vec_is_zero(&prod),
            "same-form product must vanish in characteristic 2"
        );
    }

    #[test]
    fn psi_phi_inverse_on_basis() {
        for json in [NC_DIVISOR, TRIVIAL_PLANE, LOG_POINT_F2] {
            let data = ctx(json);
            for n in 1..=3usize {
                let model = data.pd_model(n).unwrap();
                let ext = data.power(n, Flavor::Exterior).unwrap();
                for ti in 0..ext.tuples.len() {
                    let mut w = FormElement::zero(&ext, &data.chart.ring);
                    w.coords[ti] = ring_one(&data.chart.ring);
                    let down = model.phi(&w);
                    let back = model.psi(&data, &down).unwrap();
                    let diff = ext
                        .pres
                        .normal_form(&module::vec_sub(&back.coords, &w.coords), &data.limits)
                        .unwrap();
                    assert!(
                        module::vec_is_zero(&diff),
                        "psi(phi(w)) != w on {json} n={n} tuple {ti}"
                    );
                }
                // phi(psi(x)) = x on the full-slot monomials
                let full: u32 = (1 << n) - 1;
                for (i, &(j, _)) in model.basis.iter().enumerate() {
                    if j != full {
                        continue;
                    }
                    let mut x = model.zero();
                    x[i] = ring_one(&data.chart.ring);
                    let up = model.psi(&data, &x).unwrap();
                    let down = model.phi(&up);
                    let diff = module::vec_sub(&down, &x);
                    assert!(
                        model.is_zero(&diff).unwrap(),
                        "phi(psi(x)) != x on {json} n={n} monomial {i}"
                    );
                }
            }
        }
    }

    #[test]
    fn five_ideals_all_charts() {
        for json in [NC_DIVISOR, TRIVIAL_PLANE, LOG_POINT_F2] {
            let data = ctx(json);
            for n in 1..=3usize {
                let five = pd_five_ideals(&data, n).unwrap();
                assert!(five.all_equal, "five ideals differ on {json} n={n}");
                assert!(
                    five.free_of_expected_rank,
                    "common ideal rank off on {json} n={n}"
                );
            }
        }
    }

    /// Substitute model images into a diagonal-ring polynomial.
    fn eval_through(model: &PdModel, p: &Polynomial, images: &[PdElem]) -> PdElem {
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
    }

    #[test]
    fn comparison_map_kills_relations() {
        let data = ctx(NC_DIVISOR);
        let (alg, model, images) = comparison_map(&data, 2).unwrap();
        for rel in alg.base_relations.iter().chain(alg.square_relations.iter()) {
            let image = eval_through(&model, rel, &images);
            assert!(
                model.is_zero(&image).unwrap(),
                "comparison map does not kill {rel}"
            );
        }
    }

    #[test]
    fn char0_crosscheck_nc_divisor() {
        let data = ctx(NC_DIVISOR);
        let n = 2;
        let (alg, model, images) = comparison_map(&data, n).unwrap();
        let ext = data.power(n, Flavor::Exterior).unwrap();
        let anti = data.power(n, Flavor::Antisymmetric).unwrap();
        // phi through the diagonal then the comparison map agrees with the
        // model phi on exterior wedges
        for ti in 0..ext.tuples.len() {
            let mut w = FormElement::zero(&ext, &data.chart.ring);
            w.coords[ti] = ring_one(&data.chart.ring);
            let w_anti = crate::omega::exterior_to_antisym(&w, &ext, &anti);
            let via_diag = alg.phi(&w_anti, false).unwrap();
            let mapped = eval_through(&model, &via_diag, &images);
            let direct = model.phi(&w);
            let diff = module::vec_sub(&mapped, &direct);
            assert!(model.is_zero(&diff).unwrap(), "phi routes disagree");
        }
        // psi routes agree on samples
        for x in crate::diagonal::sample_elements(&alg, 3) {
            let via_diag = alg.psi(&data, &x).unwrap();
            let down = crate::omega::antisym_to_exterior(&via_diag, &anti, &ext);
            let mapped = eval_through(&model, &x, &images);
            let via_model = model.psi(&data, &mapped).unwrap();
            let diff = ext
                .pres
                .normal_form(
                    &module::vec_sub(&down.coords, &via_model.coords),
                    &data.limits,
                )
                .unwrap();
            assert!(module::vec_is_zero(&diff), "psi routes disagree on {x}");
        }
    }
}
