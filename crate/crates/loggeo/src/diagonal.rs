//! The level-n diagonal algebra of a chart: the n+1-fold relative tensor
//! algebra base-changed along the exactified monoid, its partial-diagonal
//! ideals, the quotient by their squares, and the mutually inverse maps
//! between the common ideal and the antisymmetric power of the
//! differential module.

use crate::chart::LogChart;
use crate::ctx::ChartData;
use crate::error::{Error, Result};
use crate::grobner::Ideal;
use crate::limits::Limits;
use crate::monoid::{build_pn_prime, monoid_algebra_presentation, PnGenKind, PnPrime};
use crate::omega::{wedge, Flavor, FormElement};
use crate::parse::FormLabel;
use crate::poly::{ring_one, ring_zero, Monomial, PolyRing, Polynomial};
use std::sync::Arc;

/// Classification of a presentation variable of the diagonal algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagVar {
    /// u-variable of a slot-inclusion generator of the exactified monoid.
    PiGen(usize),
    /// A base (A) variable, shared by all slots.
    Base(usize),
    /// Copy of a relative variable in one slot: (slot, relative index).
    Slot(usize, usize),
    /// u-variable of a signed difference generator.
    DiffGen(usize),
}

#[derive(Debug)]
pub struct DiagonalAlgebra {
    pub chart: LogChart,
    pub limits: Limits,
    pub n: usize,
    pub ring: Arc<PolyRing>,
    pub pn: PnPrime,
    /// Relations presenting the level-n algebra itself.
    pub base_relations: Vec<Polynomial>,
    /// Pairwise products of partial-diagonal ideal generators.
    pub square_relations: Vec<Polynomial>,
    pub base_ideal: Ideal,
    pub full_ideal: Ideal,
    var_kinds: Vec<DiagVar>,
    gen_var: Vec<usize>,
    a_var0: usize,
    slot_var0: usize,
    n_bvars: usize,
}

/// A ring map between diagonal levels, given by variable images.
#[derive(Debug, Clone)]
pub struct RingMap {
    pub source: Arc<PolyRing>,
    pub target: Arc<PolyRing>,
    pub images: Vec<Polynomial>,
}

impl RingMap {
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        assert!(p.ring == self.source, "ring map applied to foreign element");
        p.eval(&self.target, &self.images)
    }
}

/// One expanded tensor term of an element: coefficient, a monomial of the
/// chart ring per slot, and the exponent vector in the exactified monoid.
#[derive(Debug, Clone)]
pub struct TensorTerm {
    pub coeff: crate::field::Coef,
    /// Slot parts as chart-ring polynomials (slot 0 carries the base
    /// variables).
    pub slots: Vec<Polynomial>,
    /// Tuple representative of the monoid part over P^gp.
    pub tuple: Vec<Vec<i64>>,
}

impl DiagonalAlgebra {
    pub fn build(data: &Arc<ChartData>, n: usize) -> Result<DiagonalAlgebra> {
        let chart = data.chart.clone();
        let limits = data.limits;
        let pn = build_pn_prime(&chart.p, &chart.q_to_p, n).map_err(Error::from)?;
        let n_a = chart.n_a_vars;
        let n_bvars = chart.b_var_indices().len();
        // variable layout: slot-inclusion u's, base vars, slot copies,
        // difference u's
        let mut vars: Vec<String> = Vec::new();
        let mut var_kinds: Vec<DiagVar> = Vec::new();
        let mut gen_var = vec![usize::MAX; pn.gens.len()];
        for (gi, g) in pn.gens.iter().enumerate() {
            if matches!(g.kind, PnGenKind::Slot { .. }) {
                gen_var[gi] = vars.len();
                var_kinds.push(DiagVar::PiGen(gi));
                vars.push(g.name.clone());
            }
        }
        let a_var0 = vars.len();
        for t in 0..n_a {
            var_kinds.push(DiagVar::Base(t));
            vars.push(chart.ring.vars[t].clone());
        }
        let slot_var0 = vars.len();
        for i in 0..=n {
            for k in 0..n_bvars {
                var_kinds.push(DiagVar::Slot(i, k));
                vars.push(format!("{}@{}", chart.ring.vars[n_a + k], i));
            }
        }
        for (gi, g) in pn.gens.iter().enumerate() {
            if matches!(g.kind, PnGenKind::Diff { .. }) {
                gen_var[gi] = vars.len();
                var_kinds.push(DiagVar::DiffGen(gi));
                vars.push(g.name.clone());
            }
        }
        let ring = PolyRing::new(chart.field, vars);
        let mut alg = DiagonalAlgebra {
            chart: chart.clone(),
            limits,
            n,
            ring: ring.clone(),
            pn,
            base_relations: Vec::new(),
            square_relations: Vec::new(),
            base_ideal: Ideal::new(ring.clone(), Vec::new()),
            full_ideal: Ideal::new(ring.clone(), Vec::new()),
            var_kinds,
            gen_var,
            a_var0,
            slot_var0,
            n_bvars,
        };
        let mut rels: Vec<Polynomial> = Vec::new();
        // base relations once, relative relations per slot
        for r in &chart.a_relations {
            rels.push(alg.slot_map(0).apply(r));
        }
        for i in 0..=n {
            let map = alg.slot_map(i);
            for r in &chart.b_relations {
                rels.push(map.apply(r));
            }
        }
        // toric relations of P on the slot-0 inclusion variables
        {
            let names: Vec<String> = (0..chart.p.gens.len()).map(|j| format!("m{j}")).collect();
            let (toric_ring, toric) =
                monoid_algebra_presentation(&chart.p, chart.field, names, &limits)?;
            let images: Vec<Polynomial> = (0..chart.p.gens.len())
                .map(|j| crate::poly::ring_var(&ring, alg.gen_var[alg.pn.slot_gen(0, j)]))
                .collect();
            let map = RingMap {
                source: toric_ring,
                target: ring.clone(),
                images,
            };
            for t in &toric {
                rels.push(map.apply(t));
            }
        }
        // per-slot difference lattice: unit pairs and kernel binomials
        if !alg.pn.classes.is_empty() {
            let class_mat =
                crate::intmat::IntMat::from_cols(&alg.pn.classes, alg.pn.lattice.class_dim);
            let kernel = crate::intmat::kernel_basis(&class_mat).map_err(Error::from)?;
            for i in 1..=n {
                for c in 0..alg.pn.classes.len() {
                    let up = crate::poly::ring_var(&ring, alg.gen_var[alg.pn.diff_gen(i, c, true)]);
                    let um =
                        crate::poly::ring_var(&ring, alg.gen_var[alg.pn.diff_gen(i, c, false)]);
                    rels.push(up.mul(&um).sub(&ring_one(&ring)));
                }
                for z in &kernel {
                    let mut plus = ring_one(&ring);
                    for (c, &zc) in z.iter().enumerate() {
                        if zc > 0 {
                            let v = crate::poly::ring_var(
                                &ring,
                                alg.gen_var[alg.pn.diff_gen(i, c, true)],
                            );
                            plus = plus.mul(&v.pow(zc as u32));
                        } else if zc < 0 {
                            let v = crate::poly::ring_var(
                                &ring,
                                alg.gen_var[alg.pn.diff_gen(i, c, false)],
                            );
                            plus = plus.mul(&v.pow((-zc) as u32));
                        }
                    }
                    rels.push(plus.sub(&ring_one(&ring)));
                }
            }
        }
        // slot inclusions factor through slot 0 times the difference
        for i in 1..=n {
            for j in 0..chart.p.gens.len() {
                let Some((c, positive)) = alg.pn.pgen_class[j] else {
                    continue;
                };
                let pi_i = crate::poly::ring_var(&ring, alg.gen_var[alg.pn.slot_gen(i, j)]);
                let pi_0 = crate::poly::ring_var(&ring, alg.gen_var[alg.pn.slot_gen(0, j)]);
                let diff =
                    crate::poly::ring_var(&ring, alg.gen_var[alg.pn.diff_gen(i, c, positive)]);
                rels.push(pi_i.sub(&pi_0.mul(&diff)));
            }
        }
        // chart compatibility: the slot-inclusion monoid variables are the
        // slot images of the chart values
        for i in 0..=n {
            let map = alg.slot_map(i);
            for (j, a) in chart.alpha_b.iter().enumerate() {
                let pi = crate::poly::ring_var(&ring, alg.gen_var[alg.pn.slot_gen(i, j)]);
                rels.push(pi.sub(&map.apply(a)));
            }
        }
        rels.retain(|r| !r.is_zero());
        alg.base_relations = rels;
        // squares of the partial-diagonal ideals
        let mut squares: Vec<Polynomial> = Vec::new();
        for i in 0..=n {
            for j in (i + 1)..=n {
                let gens = alg.ideal_gens(i, j)?;
                for a in 0..gens.len() {
                    for b in a..gens.len() {
                        squares.push(gens[a].mul(&gens[b]));
                    }
                }
            }
        }
        alg.square_relations = squares;
        alg.base_ideal = Ideal::new(ring.clone(), alg.base_relations.clone());
        let mut full = alg.base_relations.clone();
        full.extend(alg.square_relations.iter().cloned());
        alg.full_ideal = Ideal::new(ring, full);
        Ok(alg)
    }

    /// The i-th slot inclusion of the chart's coordinate ring.
    pub fn slot_map(&self, i: usize) -> RingMap {
        let chart_ring = &self.chart.ring;
        let images = (0..chart_ring.nvars())
            .map(|v| {
                if v < self.chart.n_a_vars {
                    crate::poly::ring_var(&self.ring, self.a_var0 + v)
                } else {
                    let k = v - self.chart.n_a_vars;
                    crate::poly::ring_var(&self.ring, self.slot_var(i, k))
                }
            })
            .collect();
        RingMap {
            source: chart_ring.clone(),
            target: self.ring.clone(),
            images,
        }
    }

    pub fn slot_var(&self, slot: usize, k: usize) -> usize {
        self.slot_var0 + slot * self.n_bvars + k
    }

    pub fn var_kind(&self, v: usize) -> DiagVar {
        self.var_kinds[v]
    }

    /// The monomial representing `e^v` for an embedded vector of the
    /// exactified monoid.
    pub fn monomial_of(&self, v: &[i64]) -> Result<Polynomial> {
        let exps = self.pn.express(v, &self.limits).map_err(Error::from)?;
        let mut mono = Monomial::one(self.ring.nvars());
        for (gi, &e) in exps.iter().enumerate() {
            if e > 0 {
                mono.0[self.gen_var[gi]] += e as u16;
            }
        }
        Ok(crate::poly::ring_monomial(
            &self.ring,
            mono,
            self.ring.field.one(),
        ))
    }

    /// Generator d^{i,j}(y_k) = y_k@j - y_k@i.
    pub fn gen_d(&self, i: usize, j: usize, k: usize) -> Polynomial {
        let yj = crate::poly::ring_var(&self.ring, self.slot_var(j, k));
        let yi = crate::poly::ring_var(&self.ring, self.slot_var(i, k));
        yj.sub(&yi)
    }

    /// Generator delta^{i,j}(p) = e^{pi_j^* p - pi_i^* p} - 1 for an
    /// element p of P^gp, through the multiplicative cocycle expression of
    /// the difference vector over the signed difference generators.
    pub fn gen_delta(&self, i: usize, j: usize, p: &[i64]) -> Result<Polynomial> {
        let z = self
            .chart
            .p
            .group_decompose(p)
            .map_err(Error::from)?
            .ok_or_else(|| Error::Chart(format!("{p:?} is not in the group of P")))?;
        let lattice = &self.pn.lattice;
        let mut tuple = vec![vec![0i64; lattice.k]; self.n + 1];
        for (c, &zc) in p.iter().enumerate() {
            tuple[j][c] += zc;
            tuple[i][c] -= zc;
        }
        let _ = z;
        let v = lattice.embed_tuple(&tuple).map_err(Error::from)?;
        let m = self.monomial_of(&v)?;
        Ok(m.sub(&ring_one(&self.ring)))
    }

    /// Generators of the partial-diagonal ideal I_{ij}: the slot
    /// differences of every relative variable and of every P generator.
    pub fn ideal_gens(&self, i: usize, j: usize) -> Result<Vec<Polynomial>> {
        let mut gens = Vec::new();
        for k in 0..self.n_bvars {
            gens.push(self.gen_d(i, j, k));
        }
        for g in self.chart.p.gens.clone() {
            let d = self.gen_delta(i, j, &g)?;
            if !d.is_zero() {
                gens.push(d);
            }
        }
        Ok(gens)
    }

    /// The partial-diagonal ideal lifted to the presentation ring
    /// (including the algebra relations), optionally inside the
    /// square-quotient.
    pub fn ideal(&self, i: usize, j: usize, quotiented: bool) -> Result<Ideal> {
        let mut gens = self.ideal_gens(i, j)?;
        gens.extend(self.base_relations.iter().cloned());
        if quotiented {
            gens.extend(self.square_relations.iter().cloned());
        }
        Ok(Ideal::new(self.ring.clone(), gens))
    }

    fn defining_gens(&self, quotiented: bool) -> Vec<Polynomial> {
        let mut gens = self.base_relations.clone();
        if quotiented {
            gens.extend(self.square_relations.iter().cloned());
        }
        gens
    }

    /// Normal form modulo the level-n algebra relations.
    pub fn nf_base(&self, p: &Polynomial) -> Result<Polynomial> {
        self.base_ideal.normal_form(p, &self.limits).map_err(Error::from)
    }

    /// Normal form in the square-quotient.
    pub fn nf(&self, p: &Polynomial) -> Result<Polynomial> {
        self.full_ideal.normal_form(p, &self.limits).map_err(Error::from)
    }

    /// Expand an element into tensor terms: each monomial splits into slot
    /// parts and a monoid exponent tuple. Base variables join slot 0.
    pub fn expand(&self, p: &Polynomial) -> Vec<TensorTerm> {
        let chart_ring = &self.chart.ring;
        let mut out = Vec::with_capacity(p.terms.len());
        for (m, c) in &p.terms {
            let mut slots: Vec<Monomial> =
                vec![Monomial::one(chart_ring.nvars()); self.n + 1];
            let mut tuple = vec![vec![0i64; self.pn.lattice.k]; self.n + 1];
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match self.var_kinds[v] {
                    DiagVar::Base(t) => slots[0].0[t] += e,
                    DiagVar::Slot(i, k) => slots[i].0[self.chart.n_a_vars + k] += e,
                    DiagVar::PiGen(gi) | DiagVar::DiffGen(gi) => {
                        let g = &self.pn.gens[gi];
                        for (slot, entry) in g.tuple.iter().enumerate() {
                            for (t, &coord) in entry.iter().enumerate() {
                                tuple[slot][t] += coord * e as i64;
                            }
                        }
                    }
                }
            }
            out.push(TensorTerm {
                coeff: c.clone(),
                slots: slots
                    .into_iter()
                    .map(|m| {
                        crate::poly::ring_monomial(chart_ring, m, chart_ring.field.one())
                    })
                    .collect(),
                tuple,
            });
        }
        out
    }

    /// The map into the antisymmetric power: each tensor term
    /// (y_0 ⊗ ... ⊗ y_n) e^{(p_0,...,p_n)} maps to
    /// y_0 alpha(p_0+...+p_n) (dy_1 + y_1 dlog p_1) ∧~ ... ∧~ (dy_n + y_n dlog p_n).
    pub fn psi(&self, data: &Arc<ChartData>, p: &Polynomial) -> Result<FormElement> {
        let chart = &self.chart;
        let target = data.power(self.n, Flavor::Antisymmetric)?;
        let mut acc = FormElement::zero(&target, &chart.ring);
        let powers: Vec<_> = (0..=self.n)
            .map(|d| data.power(d, Flavor::Antisymmetric))
            .collect::<Result<Vec<_>>>()?;
        for term in self.expand(p) {
            // the total monoid degree must land in P
            let mut s = vec![0i64; self.pn.lattice.k];
            for entry in &term.tuple {
                for (a, &c) in s.iter_mut().zip(entry) {
                    *a += c;
                }
            }
            let s_exps = chart
                .p
                .decompose(&s, &self.limits)
                .map_err(Error::from)?
                .ok_or_else(|| Error::Chart(format!("monoid part {s:?} is not in P")))?;
            let alpha_s = chart.alpha_b_power(&s_exps);
            let head = term.slots[0]
                .scale(&term.coeff)
                .mul(&alpha_s);
            let mut form = FormElement::scalar(&powers[0], head);
            for i in 1..=self.n {
                let yi = &term.slots[i];
                let mut factor = crate::omega::d_of_polynomial(chart, yi);
                // y_i dlog p_i
                let z = chart
                    .p
                    .group_decompose(&term.tuple[i])
                    .map_err(Error::from)?
                    .ok_or_else(|| {
                        Error::Chart(format!(
                            "tuple entry {:?} is not in the group of P",
                            term.tuple[i]
                        ))
                    })?;
                let n_b = chart.b_var_indices().len();
                for (j, &zc) in z.iter().enumerate() {
                    if zc != 0 {
                        let c = chart.ring.field.from_i64(zc);
                        let scaled = yi.scale(&c);
                        factor[n_b + j] = factor[n_b + j].add(&scaled);
                    }
                }
                let factor_form = FormElement {
                    degree: 1,
                    flavor: Flavor::Antisymmetric,
                    coords: factor,
                };
                form = wedge(&form, &factor_form, &powers[i - 1], &powers[1], &powers[i]);
            }
            acc = acc.add(&form);
        }
        Ok(acc)
    }

    /// phi_i on a first-degree form: the d-generators map to slot
    /// differences against slot 0, the dlog-generators to the
    /// corresponding delta; coefficients act through slot 0.
    pub fn phi_component(&self, i: usize, omega: &FormElement) -> Result<Polynomial> {
        assert_eq!(omega.degree, 1, "phi_i takes a degree-one form");
        assert!(i >= 1 && i <= self.n, "slot index out of range");
        self.phi_on_generator_pair(0, i, omega)
    }

    fn phi_on_generator_pair(
        &self,
        lo: usize,
        hi: usize,
        omega: &FormElement,
    ) -> Result<Polynomial> {
        let chart = &self.chart;
        let labels = chart.omega1_labels();
        let pi0 = self.slot_map(0);
        let mut acc = ring_zero(&self.ring);
        for (t, c) in omega.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let image = match &labels[t] {
                FormLabel::D(name) => {
                    let k = chart
                        .ring
                        .var_index(name)
                        .expect("label refers to a ring variable")
                        - chart.n_a_vars;
                    self.gen_d(lo, hi, k)
                }
                FormLabel::Dlog(_) => {
                    let j = t - chart.b_var_indices().len();
                    let g = chart.p.gens[j].clone();
                    self.gen_delta(lo, hi, &g)?
                }
            };
            acc = acc.add(&pi0.apply(c).mul(&image));
        }
        Ok(acc)
    }

    /// Phi on a degree-n antisymmetric form: products of phi_i over the
    /// wedge factors. With `adjacent` the (i-1,i) differences are used
    /// instead of the (0,i) ones.
    pub fn phi(&self, omega: &FormElement, adjacent: bool) -> Result<Polynomial> {
        assert_eq!(omega.degree, self.n, "phi_n takes a degree-n form");
        let chart = &self.chart;
        let labels = chart.omega1_labels();
        let r1 = labels.len();
        let pi0 = self.slot_map(0);
        // ambient tuples of the antisymmetric power in the fixed order
        let tuples = crate::omega::multisets(r1, self.n);
        assert_eq!(tuples.len(), omega.coords.len(), "power rank mismatch");
        let mut acc = ring_zero(&self.ring);
        for (ti, c) in omega.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut prod = pi0.apply(c);
            for (l, &label_idx) in tuples[ti].iter().enumerate() {
                let slot = l + 1;
                let mut unit = crate::module::vec_zero(&chart.ring, r1);
                unit[label_idx] = ring_one(&chart.ring);
                let factor_form = FormElement {
                    degree: 1,
                    flavor: Flavor::Antisymmetric,
                    coords: unit,
                };
                let factor = if adjacent {
                    self.phi_on_generator_pair(slot - 1, slot, &factor_form)?
                } else {
                    self.phi_on_generator_pair(0, slot, &factor_form)?
                };
                prod = prod.mul(&factor);
            }
            acc = acc.add(&prod);
        }
        Ok(acc)
    }

    /// The merge map to level n-1: slots i and j collapse onto the lower
    /// index, later slots shift down.
    pub fn mu(&self, data: &Arc<ChartData>, i: usize, j: usize) -> Result<RingMap> {
        assert!(i < j && j <= self.n, "merge indices out of range");
        let target = data.diagonal(self.n - 1)?;
        let reindex = |s: usize| -> usize {
            if s == j {
                i
            } else if s > j {
                s - 1
            } else {
                s
            }
        };
        self.tuple_map(&target, |tuple| {
            let mut out = vec![vec![0i64; tuple[0].len()]; tuple.len() - 1];
            for (s, entry) in tuple.iter().enumerate() {
                let d = reindex(s);
                for (a, &c) in out[d].iter_mut().zip(entry) {
                    *a += c;
                }
            }
            out
        }, &|s| reindex(s))
    }

    /// The insertion map to level n+1: a unit slot appears at position j.
    pub fn insertion(&self, data: &Arc<ChartData>, j: usize) -> Result<RingMap> {
        assert!(j <= self.n + 1, "insertion index out of range");
        let target = data.diagonal(self.n + 1)?;
        self.tuple_map(&target, |tuple| {
            let mut out: Vec<Vec<i64>> = Vec::with_capacity(tuple.len() + 1);
            for (s, entry) in tuple.iter().enumerate() {
                if s == j {
                    out.push(vec![0i64; entry.len()]);
                }
                out.push(entry.clone());
            }
            if j == tuple.len() {
                out.push(vec![0i64; tuple[0].len()]);
            }
            out
        }, &|s| if s >= j { s + 1 } else { s })
    }

    /// Generic level map: how monoid tuples and slot indices transform.
    fn tuple_map(
        &self,
        target: &DiagonalAlgebra,
        tuple_transform: impl Fn(&[Vec<i64>]) -> Vec<Vec<i64>>,
        slot_transform: &dyn Fn(usize) -> usize,
    ) -> Result<RingMap> {
        let mut images = Vec::with_capacity(self.ring.nvars());
        for v in 0..self.ring.nvars() {
            let img = match self.var_kinds[v] {
                DiagVar::Base(t) => crate::poly::ring_var(&target.ring, target.a_var0 + t),
                DiagVar::Slot(s, k) => {
                    crate::poly::ring_var(&target.ring, target.slot_var(slot_transform(s), k))
                }
                DiagVar::PiGen(gi) | DiagVar::DiffGen(gi) => {
                    let new_tuple = tuple_transform(&self.pn.gens[gi].tuple);
                    let vec = target
                        .pn
                        .lattice
                        .embed_tuple(&new_tuple)
                        .map_err(Error::from)?;
                    target.monomial_of(&vec)?
                }
            };
            images.push(img);
        }
        Ok(RingMap {
            source: self.ring.clone(),
            target: target.ring.clone(),
            images,
        })
    }

    /// The operator id - M_j (or id - M'_j with `adjacent`): M_j merges
    /// slot j onto slot 0 (or j-1) and reinserts a unit slot at j. Both
    /// factor through the merge map.
    pub fn m_operator(
        &self,
        data: &Arc<ChartData>,
        j: usize,
        adjacent: bool,
        x: &Polynomial,
    ) -> Result<Polynomial> {
        assert!(j >= 1 && j <= self.n, "operator index out of range");
        let lo = if adjacent { j - 1 } else { 0 };
        let merged = self.mu(data, lo, j)?.apply(x);
        let lower = data.diagonal(self.n - 1)?;
        let merged = lower.nf_base(&merged)?;
        let back = lower.insertion(data, j)?.apply(&merged);
        self.nf_base(&back)
    }
}

/// View over the cached algebra with the quotient flag of the original
/// request.
pub fn build_diagonal(
    data: &Arc<ChartData>,
    n: usize,
    quotiented: bool,
) -> Result<(Arc<DiagonalAlgebra>, Vec<Polynomial>)> {
    if n < 1 {
        return Err(Error::Precondition("diagonal level must be >= 1".into()));
    }
    let alg = data.diagonal(n)?;
    let rels = alg.defining_gens(quotiented);
    Ok((alg, rels))
}

/// The five ideals of the square-quotient: intersections and products of
/// the slot-0 and adjacent partial-diagonal images, and the intersection
/// over all pairs.
pub struct FiveIdeals {
    pub inter_0j: Ideal,
    pub prod_0j: Ideal,
    pub inter_adj: Ideal,
    pub prod_adj: Ideal,
    pub inter_all: Ideal,
    pub all_equal: bool,
}

pub fn five_ideals(data: &Arc<ChartData>, n: usize) -> Result<FiveIdeals> {
    let alg = data.diagonal(n)?;
    let limits = &alg.limits;
    let common = alg.defining_gens(true);
    let lifted = |pairs: &[(usize, usize)]| -> Result<Ideal> {
        let mut acc: Option<Ideal> = None;
        for &(i, j) in pairs {
            let next = alg.ideal(i, j, true)?;
            acc = Some(match acc {
                None => next,
                Some(cur) => cur
                    .intersection_with_common(&next, &common, limits)
                    .map_err(Error::from)?,
            });
        }
        Ok(acc.expect("at least one pair"))
    };
    let product = |pairs: &[(usize, usize)]| -> Result<Ideal> {
        let mut gens: Vec<Polynomial> = vec![ring_one(&alg.ring)];
        for &(i, j) in pairs {
            let factors = alg.ideal_gens(i, j)?;
            let mut next = Vec::with_capacity(gens.len() * factors.len());
            for g in &gens {
                for f in &factors {
                    next.push(g.mul(f));
                }
            }
            gens = next;
        }
        gens.extend(common.iter().cloned());
        Ok(Ideal::new(alg.ring.clone(), gens))
    };
    let zero_pairs: Vec<(usize, usize)> = (1..=n).map(|j| (0, j)).collect();
    let adj_pairs: Vec<(usize, usize)> = (1..=n).map(|j| (j - 1, j)).collect();
    let all_pairs: Vec<(usize, usize)> = (0..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .collect();
    let inter_0j = lifted(&zero_pairs)?;
    let prod_0j = product(&zero_pairs)?;
    let inter_adj = lifted(&adj_pairs)?;
    let prod_adj = product(&adj_pairs)?;
    let inter_all = lifted(&all_pairs)?;
    let mut all_equal = true;
    for other in [&prod_0j, &inter_adj, &prod_adj, &inter_all] {
        if !inter_0j.equal(other, limits).map_err(Error::from)? {
            all_equal = false;
        }
    }
    Ok(FiveIdeals {
        inter_0j,
        prod_0j,
        inter_adj,
        prod_adj,
        inter_all,
        all_equal,
    })
}

/// Outcome of one named identity check, with a witness when it fails.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: String,
    pub ok: bool,
    pub witness: Option<String>,
}

fn record(checks: &mut Vec<IdentityCheck>, name: impl Into<String>, diff: &Polynomial) {
    let ok = diff.is_zero();
    checks.push(IdentityCheck {
        name: name.into(),
        ok,
        witness: if ok { None } else { Some(diff.to_string()) },
    });
}

/// Deterministic sample elements: the ring variables, a few fixed-seed
/// random quadratic combinations, and the partial-diagonal generators.
pub fn sample_elements(alg: &DiagonalAlgebra, count: usize) -> Vec<Polynomial> {
    use rand::{Rng, SeedableRng};
    let mut out: Vec<Polynomial> = (0..alg.ring.nvars())
        .map(|v| crate::poly::ring_var(&alg.ring, v))
        .collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x4c47_4745_4f21);
    for _ in 0..count {
        let a = rng.gen_range(0..alg.ring.nvars());
        let b = rng.gen_range(0..alg.ring.nvars());
        let c = alg.ring.field.from_i64(rng.gen_range(-2i64..=2));
        let p = crate::poly::ring_var(&alg.ring, a)
            .mul(&crate::poly::ring_var(&alg.ring, b))
            .scale(&c)
            .add(&crate::poly::ring_var(&alg.ring, a));
        out.push(p);
    }
    out
}

/// The inverse-isomorphism checks: psi then phi is the identity on the
/// antisymmetric power, phi then psi is the identity on the common ideal,
/// and both operator factorizations through the merge maps hold.
pub fn composition_check(data: &Arc<ChartData>, n: usize) -> Result<Vec<IdentityCheck>> {
    let alg = data.diagonal(n)?;
    let limits = &alg.limits;
    let mut checks: Vec<IdentityCheck> = Vec::new();
    let power = data.power(n, Flavor::Antisymmetric)?;
    // psi(phi(w)) = w on every ambient basis tuple
    for (ti, _) in power.tuples.iter().enumerate() {
        let mut w = FormElement::zero(&power, &alg.chart.ring);
        w.coords[ti] = ring_one(&alg.chart.ring);
        let down = alg.phi(&w, false)?;
        let back = alg.psi(data, &down)?;
        let diff = power
            .pres
            .normal_form(&crate::module::vec_sub(&back.coords, &w.coords), limits)
            .map_err(Error::from)?;
        let ok = crate::module::vec_is_zero(&diff);
        checks.push(IdentityCheck {
            name: format!("psi_phi_identity.basis{ti}"),
            ok,
            witness: if ok {
                None
            } else {
                Some(format!("{:?}", diff.iter().map(|p| p.to_string()).collect::<Vec<_>>()))
            },
        });
    }
    // phi(psi(x)) = x on generators of the intersection ideal
    let common = alg.defining_gens(true);
    let mut inter: Option<Ideal> = None;
    for j in 1..=n {
        let next = alg.ideal(0, j, true)?;
        inter = Some(match inter {
            None => next,
            Some(cur) => cur
                .intersection_with_common(&next, &common, limits)
                .map_err(Error::from)?,
        });
    }
    let inter = inter.expect("n >= 1");
    let mut ideal_gens: Vec<Polynomial> = Vec::new();
    for g in inter.groebner(limits).map_err(Error::from)? {
        let red = alg.nf(g)?;
        if !red.is_zero() {
            ideal_gens.push(red);
        }
    }
    {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x4c47_4745_4f22);
        if !ideal_gens.is_empty() {
            let mut combo = ring_zero(&alg.ring);
            for g in &ideal_gens {
                let v = rng.gen_range(0..alg.ring.nvars());
                let c = alg.ring.field.from_i64(rng.gen_range(-2i64..=2));
                combo = combo.add(&g.mul(&crate::poly::ring_var(&alg.ring, v)).scale(&c));
            }
            ideal_gens.push(combo);
        }
    }
    for (gi, g) in ideal_gens.iter().enumerate() {
        let up = alg.psi(data, g)?;
        let down = alg.phi(&up, false)?;
        let diff = alg.nf(&down.sub(g))?;
        record(&mut checks, format!("phi_psi_identity.gen{gi}"), &diff);
    }
    // operator factorizations on sample elements
    for (si, x) in sample_elements(&alg, 4).iter().enumerate() {
        let lhs = alg.phi(&alg.psi(data, x)?, false)?;
        // product over j of (id - M_j), any order (the operators commute)
        let mut rhs = x.clone();
        for j in 1..=n {
            let m = alg.m_operator(data, j, false, &rhs)?;
            rhs = rhs.sub(&m);
        }
        let diff = alg.nf(&lhs.sub(&rhs))?;
        record(&mut checks, format!("m_factorization.sample{si}"), &diff);
        // adjacent variant: (id - M'_n) ... (id - M'_1), applied from j = 1
        let mut rhs2 = x.clone();
        for j in 1..=n {
            let m = alg.m_operator(data, j, true, &rhs2)?;
            rhs2 = rhs2.sub(&m);
        }
        let diff2 = alg.nf(&lhs.sub(&rhs2))?;
        record(
            &mut checks,
            format!("m_adjacent_factorization.sample{si}"),
            &diff2,
        );
        // both phi formulations agree
        let psi_form = alg.psi(data, x)?;
        let via_adjacent = alg.phi(&psi_form, true)?;
        let diff3 = alg.nf(&lhs.sub(&via_adjacent))?;
        record(&mut checks, format!("phi_adjacent_agrees.sample{si}"), &diff3);
    }
    Ok(checks)
}

/// The merge reindexing table: merging (i,j) sends the partial-diagonal
/// ideal of (k,l) either to zero (equal pairs) or to the ideal of the
/// reindexed pair.
pub fn merge_reindex_check(data: &Arc<ChartData>, n: usize) -> Result<Vec<IdentityCheck>> {
    let alg = data.diagonal(n)?;
    let lower = data.diagonal(n - 1)?;
    let limits = &alg.limits;
    let reindex = |s: usize, i: usize, j: usize| -> usize {
        if s == j {
            i
        } else if s > j {
            s - 1
        } else {
            s
        }
    };
    let mut checks = Vec::new();
    for i in 0..=n {
        for j in (i + 1)..=n {
            let map = alg.mu(data, i, j)?;
            for k in 0..=n {
                for l in (k + 1)..=n {
                    let images: Vec<Polynomial> = alg
                        .ideal_gens(k, l)?
                        .iter()
                        .map(|g| map.apply(g))
                        .collect();
                    let name = format!("mu{i}{j}.of.I{k}{l}");
                    if (k, l) == (i, j) {
                        let mut ok = true;
                        let mut witness = None;
                        for img in &images {
                            let nf = lower.nf_base(img)?;
                            if !nf.is_zero() {
                                ok = false;
                                witness = Some(nf.to_string());
                                break;
                            }
                        }
                        checks.push(IdentityCheck {
                            name: format!("{name}.is_zero"),
                            ok,
                            witness,
                        });
                    } else {
                        let (mut kk, mut ll) = (reindex(k, i, j), reindex(l, i, j));
                        if kk > ll {
                            std::mem::swap(&mut kk, &mut ll);
                        }
                        let mut lhs = images;
                        lhs.extend(lower.base_relations.iter().cloned());
                        let lhs = Ideal::new(lower.ring.clone(), lhs);
                        let rhs = {
                            let mut gens = lower.ideal_gens(kk, ll)?;
                            gens.extend(lower.base_relations.iter().cloned());
                            Ideal::new(lower.ring.clone(), gens)
                        };
                        let ok = lhs.equal(&rhs, limits).map_err(Error::from)?;
                        checks.push(IdentityCheck {
                            name: format!("{name}.equals.I{kk}{ll}"),
                            ok,
                            witness: None,
                        });
                    }
                }
            }
        }
    }
    Ok(checks)
}

/// The triangle inclusion: the ideal of a distant pair sits inside the sum
/// across an intermediate slot.
pub fn inclusion_check(data: &Arc<ChartData>, n: usize) -> Result<Vec<IdentityCheck>> {
    let alg = data.diagonal(n)?;
    let limits = &alg.limits;
    let mut checks = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            for l in 0..=n {
                if i == j || j == l || i == l {
                    continue;
                }
                let (a, b) = (i.min(l), i.max(l));
                let sum = {
                    let mut gens = alg.ideal_gens(i.min(j), i.max(j))?;
                    gens.extend(alg.ideal_gens(j.min(l), j.max(l))?);
                    gens.extend(alg.base_relations.iter().cloned());
                    Ideal::new(alg.ring.clone(), gens)
                };
                let mut ok = true;
                let mut witness = None;
                for g in alg.ideal_gens(a, b)? {
                    if !sum.contains(&g, limits).map_err(Error::from)? {
                        ok = false;
                        witness = Some(g.to_string());
                        break;
                    }
                }
                checks.push(IdentityCheck {
                    name: format!("I{a}{b}.in.I{i}{j}+I{j}{l}"),
                    ok,
                    witness,
                });
            }
        }
    }
    Ok(checks)
}

/// Psi annihilates products of two generators of the same
/// partial-diagonal ideal, including against coefficient samples.
pub fn psi_annihilation_check(data: &Arc<ChartData>, n: usize) -> Result<Vec<IdentityCheck>> {
    let alg = data.diagonal(n)?;
    let power = data.power(n, Flavor::Antisymmetric)?;
    let limits = &alg.limits;
    let coeffs = {
        let mut out = vec![ring_one(&alg.ring)];
        out.extend(
            (0..alg.ring.nvars().min(3)).map(|v| crate::poly::ring_var(&alg.ring, v)),
        );
        out
    };
    let mut checks = Vec::new();
    for i in 0..=n {
        for j in (i + 1)..=n {
            let gens = alg.ideal_gens(i, j)?;
            let mut ok = true;
            let mut witness = None;
            'outer: for a in &gens {
                for b in &gens {
                    for c in &coeffs {
                        let x = a.mul(b).mul(c);
                        let form = alg.psi(data, &x)?;
                        let nf = power
                            .pres
                            .normal_form(&form.coords, limits)
                            .map_err(Error::from)?;
                        if !crate::module::vec_is_zero(&nf) {
                            ok = false;
                            witness = Some(format!("psi({x}) is nonzero"));
                            break 'outer;
                        }
                    }
                }
            }
            checks.push(IdentityCheck {
                name: format!("psi_kills_I{i}{j}_squared"),
                ok,
                witness,
            });
        }
    }
    Ok(checks)
}

/// The three product congruences modulo the squares of the slot-0 ideals:
/// dd, delta-d, and delta-delta products of a distant pair reduce to the
/// negated symmetric sums of slot-0 products.
pub fn congruence_check(data: &Arc<ChartData>, n: usize) -> Result<Vec<IdentityCheck>> {
    let alg = data.diagonal(n)?;
    let limits = &alg.limits;
    let chart = &alg.chart;
    let n_b = chart.b_var_indices().len();
    let mut checks = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let modulus = {
                let sq = |a: usize, b: usize| -> Result<Vec<Polynomial>> {
                    let gens = alg.ideal_gens(a, b)?;
                    let mut out = Vec::new();
                    for x in &gens {
                        for y in &gens {
                            out.push(x.mul(y));
                        }
                    }
                    Ok(out)
                };
                let mut gens = sq(0, i)?;
                gens.extend(sq(0, j)?);
                gens.extend(alg.base_relations.iter().cloned());
                Ideal::new(alg.ring.clone(), gens)
            };
            let mut ok = true;
            let mut witness = None;
            let push = |name: &str, expr: Polynomial, ok: &mut bool, witness: &mut Option<String>| -> Result<()> {
                if !modulus.contains(&expr, limits).map_err(Error::from)? {
                    *ok = false;
                    if witness.is_none() {
                        *witness = Some(format!("{name}: {expr}"));
                    }
                }
                Ok(())
            };
            for ka in 0..n_b {
                for kb in 0..n_b {
                    let expr = alg
                        .gen_d(i, j, ka)
                        .mul(&alg.gen_d(i, j, kb))
                        .add(&alg.gen_d(0, i, ka).mul(&alg.gen_d(0, j, kb)))
                        .add(&alg.gen_d(0, i, kb).mul(&alg.gen_d(0, j, ka)));
                    push("dd", expr, &mut ok, &mut witness)?;
                }
            }
            for pg in chart.p.gens.clone() {
                for kb in 0..n_b {
                    let expr = alg
                        .gen_delta(i, j, &pg)?
                        .mul(&alg.gen_d(i, j, kb))
                        .add(&alg.gen_delta(0, i, &pg)?.mul(&alg.gen_d(0, j, kb)))
                        .add(&alg.gen_d(0, i, kb).mul(&alg.gen_delta(0, j, &pg)?));
                    push("delta_d", expr, &mut ok, &mut witness)?;
                }
                for pg2 in chart.p.gens.clone() {
                    let expr = alg
                        .gen_delta(i, j, &pg)?
                        .mul(&alg.gen_delta(i, j, &pg2)?)
                        .add(&alg.gen_delta(0, i, &pg)?.mul(&alg.gen_delta(0, j, &pg2)?))
                        .add(&alg.gen_delta(0, i, &pg2)?.mul(&alg.gen_delta(0, j, &pg)?));
                    push("delta_delta", expr, &mut ok, &mut witness)?;
                }
            }
            checks.push(IdentityCheck {
                name: format!("congruences.pair{i}{j}"),
                ok,
                witness,
            });
        }
    }
    Ok(checks)
}

/// phi_i is well-defined: it kills every presentation relation of the
/// differential module inside the square quotient.
pub fn phi_well_defined_check(data: &Arc<ChartData>, n: usize) -> Result<Vec<IdentityCheck>> {
    let alg = data.diagonal(n)?;
    let omega = data.omega1()?;
    let mut checks = Vec::new();
    for i in 1..=n {
        let mut ok = true;
        let mut witness = None;
        for rel in &omega.pres.relations {
            let form = FormElement {
                degree: 1,
                flavor: Flavor::Antisymmetric,
                coords: rel.clone(),
            };
            let image = alg.phi_component(i, &form)?;
            let nf = alg.nf(&image)?;
            if !nf.is_zero() {
                ok = false;
                witness = Some(nf.to_string());
                break;
            }
        }
        checks.push(IdentityCheck {
            name: format!("phi{i}_well_defined"),
            ok,
            witness,
        });
    }
    Ok(checks)
}
