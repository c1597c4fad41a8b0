//! The presented module of relative log differentials and its
//! antisymmetric and exterior powers, with wedge products and normal-form
//! equality.

use crate::chart::{LogChart, Omega1BasisSpec};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::module::{vec_zero, ModulePresentation, Vector};
use crate::parse::FormLabel;
use crate::poly::{ring_zero, Polynomial};
use std::collections::HashMap;

/// Power flavor: the antisymmetric power kills symmetric two-tensors; the
/// exterior power additionally kills squares, which differs only in
/// characteristic two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Antisymmetric,
    Exterior,
}

/// First-degree module: ambient basis `d(y)` for every relative variable
/// and `dlog(g)` for every P generator, with the derivation, chart and
/// monoid relations.
#[derive(Debug, Clone)]
pub struct DifferentialModule {
    pub labels: Vec<FormLabel>,
    pub pres: ModulePresentation,
}

/// Differential of a ring element as an ambient vector: formal partials
/// with respect to the relative variables (base variables die).
pub fn d_of_polynomial(chart: &LogChart, f: &Polynomial) -> Vector {
    let labels = chart.omega1_labels();
    let mut v = vec_zero(&chart.ring, labels.len());
    for (slot, i) in chart.b_var_indices().enumerate() {
        v[slot] = f.partial(i);
    }
    v
}

pub fn omega1(chart: &LogChart) -> Result<DifferentialModule> {
    let labels = chart.omega1_labels();
    let rank = labels.len();
    let n_bvars = chart.b_var_indices().len();
    let mut relations: Vec<Vector> = Vec::new();
    // derivation relations of the algebra presentation
    for rel in chart.full_relations() {
        let v = d_of_polynomial(chart, &rel);
        if !crate::module::vec_is_zero(&v) {
            relations.push(v);
        }
    }
    // d(alpha(g)) = alpha(g) dlog(g) for every P generator
    for (j, a) in chart.alpha_b.iter().enumerate() {
        let mut v = d_of_polynomial(chart, a);
        v[n_bvars + j] = v[n_bvars + j].sub(a);
        if !crate::module::vec_is_zero(&v) {
            relations.push(v);
        }
    }
    // dlog kills the image of Q
    for qg in &chart.q.gens {
        let img = chart.q_to_p.apply(qg).map_err(Error::from)?;
        let z = chart
            .p
            .group_decompose(&img)
            .map_err(Error::from)?
            .ok_or_else(|| {
                Error::Chart(format!(
                    "image {img:?} of a Q generator is not in the group of P"
                ))
            })?;
        let mut v = vec_zero(&chart.ring, rank);
        let field = chart.ring.field;
        for (j, &c) in z.iter().enumerate() {
            v[n_bvars + j] = crate::poly::ring_constant(&chart.ring, field.from_i64(c));
        }
        if !crate::module::vec_is_zero(&v) {
            relations.push(v);
        }
    }
    // linear dlog relations from the lattice relations of the P generators
    if !chart.p.gens.is_empty() {
        let mat = crate::intmat::IntMat::from_cols(&chart.p.gens, chart.p.rank);
        for z in crate::intmat::kernel_basis(&mat).map_err(Error::from)? {
            let mut v = vec_zero(&chart.ring, rank);
            let field = chart.ring.field;
            for (j, &c) in z.iter().enumerate() {
                v[n_bvars + j] = crate::poly::ring_constant(&chart.ring, field.from_i64(c));
            }
            if !crate::module::vec_is_zero(&v) {
                relations.push(v);
            }
        }
    }
    let pres = ModulePresentation::new(
        chart.ring.clone(),
        rank,
        relations,
        chart.full_relations(),
    );
    Ok(DifferentialModule { labels, pres })
}

/// Insert `j` into the nondecreasing tuple `w`, returning the sorted tuple
/// and the sign of the move (elements strictly greater than `j` are
/// crossed).
fn sort_insert(w: &[usize], j: usize) -> (Vec<usize>, i32) {
    let pos = w.partition_point(|&x| x <= j);
    let crossed = w.len() - pos;
    let mut out = Vec::with_capacity(w.len() + 1);
    out.extend_from_slice(&w[..pos]);
    out.push(j);
    out.extend_from_slice(&w[pos..]);
    let sign = if crossed % 2 == 0 { 1 } else { -1 };
    (out, sign)
}

fn has_repeat(t: &[usize]) -> bool {
    t.windows(2).any(|w| w[0] == w[1])
}

/// Merge two sorted tuples counting crossings (the wedge sign).
fn merge_sorted(a: &[usize], b: &[usize]) -> (Vec<usize>, i32) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut crossings = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            crossings += a.len() - i;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    (out, if crossings % 2 == 0 { 1 } else { -1 })
}

pub(crate) fn multisets(nvals: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    fn rec(nvals: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..nvals {
            cur.push(v);
            rec(nvals, size, v, cur, out);
            cur.pop();
        }
    }
    rec(nvals, size, 0, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn strict_tuples(nvals: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    fn rec(nvals: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..nvals {
            cur.push(v);
            rec(nvals, size, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(nvals, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Presented n-th power of the differential module with wedge-monomial
/// ambient basis.
#[derive(Debug, Clone)]
pub struct PowerModule {
    pub degree: usize,
    pub flavor: Flavor,
    /// Ambient basis tuples over the first-degree labels: nondecreasing
    /// for the antisymmetric flavor, strictly increasing for the exterior
    /// flavor.
    pub tuples: Vec<Vec<usize>>,
    pub index: HashMap<Vec<usize>, usize>,
    pub pres: ModulePresentation,
}

pub fn power_module(
    chart: &LogChart,
    omega: &DifferentialModule,
    degree: usize,
    flavor: Flavor,
) -> PowerModule {
    let r1 = omega.labels.len();
    let tuples = match flavor {
        Flavor::Antisymmetric => multisets(r1, degree),
        Flavor::Exterior => strict_tuples(r1, degree),
    };
    let index: HashMap<Vec<usize>, usize> = tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let ring = &chart.ring;
    let field = ring.field;
    let mut relations: Vec<Vector> = Vec::new();
    if degree >= 1 {
        // first-degree relations wedged against every smaller multiset
        let contexts = match flavor {
            Flavor::Antisymmetric => multisets(r1, degree - 1),
            Flavor::Exterior => multisets(r1, degree - 1),
        };
        for w in &contexts {
            for rel in &omega.pres.relations {
                let mut v = vec_zero(ring, tuples.len());
                let mut nonzero = false;
                for (j, c) in rel.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (t, sign) = sort_insert(w, j);
                    if flavor == Flavor::Exterior && has_repeat(&t) {
                        continue;
                    }
                    let Some(&idx) = index.get(&t) else { continue };
                    let signed = if sign >= 0 { c.clone() } else { c.neg() };
                    v[idx] = v[idx].add(&signed);
                    nonzero = true;
                }
                if nonzero && !crate::module::vec_is_zero(&v) {
                    relations.push(v);
                }
            }
        }
        // symmetric two-tensors with equal entries survive the sorting
        // convention as a two-torsion relation
        if flavor == Flavor::Antisymmetric {
            let two = field.from_i64(2);
            if !field.is_zero(&two) {
                for (i, t) in tuples.iter().enumerate() {
                    if has_repeat(t) {
                        let mut v = vec_zero(ring, tuples.len());
                        v[i] = crate::poly::ring_constant(ring, two.clone());
                        relations.push(v);
                    }
                }
            }
        }
    }
    let pres = ModulePresentation::new(
        ring.clone(),
        tuples.len(),
        relations,
        chart.full_relations(),
    );
    PowerModule {
        degree,
        flavor,
        tuples,
        index,
        pres,
    }
}

/// An element of a power module in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormElement {
    pub degree: usize,
    pub flavor: Flavor,
    pub coords: Vec<Polynomial>,
}

impl FormElement {
    pub fn zero(module: &PowerModule, ring: &std::sync::Arc<crate::poly::PolyRing>) -> Self {
        FormElement {
            degree: module.degree,
            flavor: module.flavor,
            coords: vec_zero(ring, module.tuples.len()),
        }
    }

    pub fn scalar(module: &PowerModule, p: Polynomial) -> Self {
        assert_eq!(module.degree, 0, "scalar forms have degree zero");
        FormElement {
            degree: 0,
            flavor: module.flavor,
            coords: vec![p],
        }
    }

    pub fn add(&self, other: &FormElement) -> FormElement {
        assert_eq!(self.flavor, other.flavor, "flavor mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch");
        FormElement {
            degree: self.degree,
            flavor: self.flavor,
            coords: crate::module::vec_add(&self.coords, &other.coords),
        }
    }

    pub fn sub(&self, other: &FormElement) -> FormElement {
        assert_eq!(self.flavor, other.flavor, "flavor mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch");
        FormElement {
            degree: self.degree,
            flavor: self.flavor,
            coords: crate::module::vec_sub(&self.coords, &other.coords),
        }
    }

    pub fn neg(&self) -> FormElement {
        FormElement {
            degree: self.degree,
            flavor: self.flavor,
            coords: self.coords.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, p: &Polynomial) -> FormElement {
        FormElement {
            degree: self.degree,
            flavor: self.flavor,
            coords: self.coords.iter().map(|c| c.mul(p)).collect(),
        }
    }
}

/// Wedge two forms of the same flavor into the target module.
pub fn wedge(
    a: &FormElement,
    b: &FormElement,
    src_a: &PowerModule,
    src_b: &PowerModule,
    target: &PowerModule,
) -> FormElement {
    assert_eq!(a.flavor, b.flavor, "flavor mismatch in wedge");
    assert_eq!(a.degree + b.degree, target.degree, "degree mismatch");
    let ring = target.pres.ring.clone();
    let mut coords = vec_zero(&ring, target.tuples.len());
    for (ia, ca) in a.coords.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (ib, cb) in b.coords.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            let (t, sign) = merge_sorted(&src_a.tuples[ia], &src_b.tuples[ib]);
            if target.flavor == Flavor::Exterior && has_repeat(&t) {
                continue;
            }
            let Some(&idx) = target.index.get(&t) else {
                continue;
            };
            let prod = ca.mul(cb);
            coords[idx] = if sign >= 0 {
                coords[idx].add(&prod)
            } else {
                coords[idx].sub(&prod)
            };
        }
    }
    FormElement {
        degree: target.degree,
        flavor: target.flavor,
        coords,
    }
}

/// The canonical quotient map from the antisymmetric to the exterior power
/// (repeat tuples die).
pub fn antisym_to_exterior(
    v: &FormElement,
    src: &PowerModule,
    target: &PowerModule,
) -> FormElement {
    assert_eq!(v.flavor, Flavor::Antisymmetric);
    assert_eq!(target.flavor, Flavor::Exterior);
    let ring = target.pres.ring.clone();
    let mut coords = vec_zero(&ring, target.tuples.len());
    for (i, c) in v.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let t = &src.tuples[i];
        if has_repeat(t) {
            continue;
        }
        let idx = target.index[t];
        coords[idx] = coords[idx].add(c);
    }
    FormElement {
        degree: v.degree,
        flavor: Flavor::Exterior,
        coords,
    }
}

/// The section of the quotient: strict tuples included into the
/// antisymmetric power.
pub fn exterior_to_antisym(
    v: &FormElement,
    src: &PowerModule,
    target: &PowerModule,
) -> FormElement {
    assert_eq!(v.flavor, Flavor::Exterior);
    assert_eq!(target.flavor, Flavor::Antisymmetric);
    let ring = target.pres.ring.clone();
    let mut coords = vec_zero(&ring, target.tuples.len());
    for (i, c) in v.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let idx = target.index[&src.tuples[i]];
        coords[idx] = coords[idx].add(c);
    }
    FormElement {
        degree: v.degree,
        flavor: Flavor::Antisymmetric,
        coords,
    }
}

/// A verified free basis of the differential module: basis vectors plus
/// coordinates of every ambient generator.
#[derive(Debug, Clone)]
pub struct Omega1Basis {
    pub rank: usize,
    /// Basis elements as ambient vectors.
    pub basis: Vec<Vector>,
    /// For each ambient label, its coordinates over the basis.
    pub coords: Vec<Vec<Polynomial>>,
}

impl Omega1Basis {
    /// Coordinates of an arbitrary ambient vector over the basis.
    pub fn express(&self, v: &Vector, ring: &std::sync::Arc<crate::poly::PolyRing>) -> Vec<Polynomial> {
        let mut out = vec![ring_zero(ring); self.rank];
        for (t, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for m in 0..self.rank {
                out[m] = out[m].add(&c.mul(&self.coords[t][m]));
            }
        }
        out
    }
}

/// Resolve and certify a freeness witness: the claimed base change must
/// be two-sided inverse to the inclusion of the basis, and must kill all
/// presentation relations.
pub fn resolve_omega1_basis(
    chart: &LogChart,
    omega: &DifferentialModule,
    spec: &Omega1BasisSpec,
    limits: &Limits,
) -> Result<Omega1Basis> {
    let ring = &chart.ring;
    let rank = spec.basis.len();
    let mut basis: Vec<Vector> = Vec::new();
    for s in &spec.basis {
        basis.push(chart.resolve_form(s)?);
    }
    let labels = chart.omega1_labels();
    let mut coords: Vec<Vec<Polynomial>> = Vec::new();
    for label in &labels {
        let key = label.to_string();
        let Some(c) = spec.coords.get(&key) else {
            return Err(Error::Chart(format!(
                "freeness witness is missing coordinates for {key}"
            )));
        };
        if c.len() != rank {
            return Err(Error::Chart(format!(
                "witness coordinates for {key} must have length {rank}"
            )));
        }
        let row: Vec<Polynomial> = c
            .iter()
            .map(|s| crate::parse::parse_polynomial(ring, s).map_err(Error::from))
            .collect::<Result<_>>()?;
        coords.push(row);
    }
    let witness = Omega1Basis { rank, basis, coords };
    let ideal = chart.b_ideal();
    // (1) coords(basis_m) = e_m in B^rank
    for (m, b) in witness.basis.iter().enumerate() {
        let expr = witness.express(b, ring);
        for (m2, c) in expr.iter().enumerate() {
            let expect = if m == m2 {
                crate::poly::ring_one(ring)
            } else {
                ring_zero(ring)
            };
            if !ideal.contains(&c.sub(&expect), limits).map_err(Error::from)? {
                return Err(Error::Chart(format!(
                    "freeness witness fails: basis element {m} does not have unit coordinates"
                )));
            }
        }
    }
    // (2) coords kill every first-degree relation
    for rel in &omega.pres.relations {
        let expr = witness.express(rel, ring);
        for c in &expr {
            if !ideal.contains(c, limits).map_err(Error::from)? {
                return Err(Error::Chart(
                    "freeness witness fails: a presentation relation has nonzero coordinates"
                        .into(),
                ));
            }
        }
    }
    // (3) every ambient generator is recovered from its coordinates
    for (t, _) in labels.iter().enumerate() {
        let mut v = vec_zero(ring, labels.len());
        v[t] = crate::poly::ring_one(ring);
        for (m, b) in witness.basis.iter().enumerate() {
            let scaled: Vector = b.iter().map(|c| c.mul(&witness.coords[t][m])).collect();
            v = crate::module::vec_sub(&v, &scaled);
        }
        if !omega.pres.is_zero(&v, limits).map_err(Error::from)? {
            return Err(Error::Chart(format!(
                "freeness witness fails: ambient generator {} is not recovered from the basis",
                labels[t]
            )));
        }
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::LogChart;
    use crate::poly::ring_one;

    fn lim() -> Limits {
        Limits::default()
    }

    fn chart(json: &str) -> LogChart {
        LogChart::from_file_str(json).unwrap()
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

    #[test]
    fn omega1_nc_divisor() {
        let c = chart(NC_DIVISOR);
        let om = omega1(&c).unwrap();
        assert_eq!(om.labels.len(), 2);
        // the relation d(x) = x dlog(g0) is recorded, both generators kept
        assert_eq!(om.pres.relations.len(), 1);
        let dx = vec![ring_one(&c.ring), ring_zero(&c.ring)];
        let x_dlog = vec![
            ring_zero(&c.ring),
            crate::parse::parse_polynomial(&c.ring, "x").unwrap(),
        ];
        assert!(om
            .pres
            .equal_elements(&dx, &x_dlog, &lim())
            .unwrap());
        // witness certifies rank one
        let w = resolve_omega1_basis(&c, &om, c.omega1_basis.as_ref().unwrap(), &lim()).unwrap();
        assert_eq!(w.rank, 1);
    }

    #[test]
    fn omega1_log_point_free_rank_one() {
        let c = chart(LOG_POINT_F2);
        let om = omega1(&c).unwrap();
        assert_eq!(om.labels.len(), 1);
        assert!(om.pres.relations.is_empty());
        let w = resolve_omega1_basis(&c, &om, c.omega1_basis.as_ref().unwrap(), &lim()).unwrap();
        assert_eq!(w.rank, 1);
    }

    #[test]
    fn omega1_trivial_plane_rank_two() {
        let c = chart(TRIVIAL_PLANE);
        let om = omega1(&c).unwrap();
        assert_eq!(om.labels.len(), 2);
        assert!(om.pres.relations.is_empty());
    }

    #[test]
    fn power_module_degree_zero_is_base() {
        let c = chart(TRIVIAL_PLANE);
        let om = omega1(&c).unwrap();
        let p0 = power_module(&c, &om, 0, Flavor::Exterior);
        assert_eq!(p0.tuples, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn exterior_plane_top_rank_one() {
        let c = chart(TRIVIAL_PLANE);
        let om = omega1(&c).unwrap();
        let p2 = power_module(&c, &om, 2, Flavor::Exterior);
        assert_eq!(p2.tuples.len(), 1);
        assert_eq!(p2.tuples[0], vec![0, 1]);
        assert!(p2.pres.relations.is_empty());
    }

    #[test]
    fn log_point_antisym_vs_exterior_in_char2() {
        let c = chart(LOG_POINT_F2);
        let om = omega1(&c).unwrap();
        let anti = power_module(&c, &om, 2, Flavor::Antisymmetric);
        let ext = power_module(&c, &om, 2, Flavor::Exterior);
        // antisymmetric square of a rank-one module survives in char 2
        assert_eq!(anti.tuples.len(), 1);
        let e = FormElement {
            degree: 2,
            flavor: Flavor::Antisymmetric,
            coords: vec![ring_one(&c.ring)],
        };
        let nf = anti.pres.normal_form(&e.coords, &lim()).unwrap();
        assert!(!crate::module::vec_is_zero(&nf));
        // the exterior square vanishes identically
        assert_eq!(ext.tuples.len(), 0);
    }

    #[test]
    fn log_point_antisym_dies_in_char0() {
        let mut json: serde_json::Value = serde_json::from_str(LOG_POINT_F2).unwrap();
        json["field"] = serde_json::json!({"type": "Q"});
        json["name"] = serde_json::json!("standard-log-point");
        let c = chart(&json.to_string());
        let om = omega1(&c).unwrap();
        let anti = power_module(&c, &om, 2, Flavor::Antisymmetric);
        let e = vec![ring_one(&c.ring)];
        let nf = anti.pres.normal_form(&e, &lim()).unwrap();
        assert!(crate::module::vec_is_zero(&nf), "2-torsion dies over Q");
    }

    #[test]
    fn wedge_antisymmetry() {
        let c = chart(TRIVIAL_PLANE);
        let om = omega1(&c).unwrap();
        let p1 = power_module(&c, &om, 1, Flavor::Exterior);
        let p2 = power_module(&c, &om, 2, Flavor::Exterior);
        let dx = FormElement {
            degree: 1,
            flavor: Flavor::Exterior,
            coords: vec![ring_one(&c.ring), ring_zero(&c.ring)],
        };
        let dy = FormElement {
            degree: 1,
            flavor: Flavor::Exterior,
            coords: vec![ring_zero(&c.ring), ring_one(&c.ring)],
        };
        let xy = wedge(&dx, &dy, &p1, &p1, &p2);
        let yx = wedge(&dy, &dx, &p1, &p1, &p2);
        assert_eq!(xy.coords[0], ring_one(&c.ring));
        assert!(crate::module::vec_is_zero(&crate::module::vec_add(
            &xy.coords, &yx.coords
        )));
        // dx wedge dx = 0 in the exterior flavor
        let xx = wedge(&dx, &dx, &p1, &p1, &p2);
        assert!(crate::module::vec_is_zero(&xx.coords));
    }

    #[test]
    fn flavors_agree_in_char0() {
        // on the nc-divisor chart the antisymmetric and exterior squares
        // agree over Q: the section composed with the quotient map fixes
        // normal forms
        let c = chart(NC_DIVISOR);
        let om = omega1(&c).unwrap();
        let anti = power_module(&c, &om, 2, Flavor::Antisymmetric);
        let ext = power_module(&c, &om, 2, Flavor::Exterior);
        for i in 0..anti.tuples.len() {
            let mut e = FormElement {
                degree: 2,
                flavor: Flavor::Antisymmetric,
                coords: vec_zero(&c.ring, anti.tuples.len()),
            };
            e.coords[i] = ring_one(&c.ring);
            let down = antisym_to_exterior(&e, &anti, &ext);
            let down_nf = ext.pres.normal_form(&down.coords, &lim()).unwrap();
            let back = exterior_to_antisym(
                &FormElement {
                    degree: 2,
                    flavor: Flavor::Exterior,
                    coords: down_nf,
                },
                &ext,
                &anti,
            );
            let e_nf = anti.pres.normal_form(&e.coords, &lim()).unwrap();
            let back_nf = anti.pres.normal_form(&back.coords, &lim()).unwrap();
            assert_eq!(e_nf, back_nf, "tuple {:?}", anti.tuples[i]);
        }
    }

    #[test]
    fn bad_witness_rejected() {
        let broken = NC_DIVISOR.replace(r#""d(x)": ["x"]"#, r#""d(x)": ["1"]"#);
        let c = chart(&broken);
        let om = omega1(&c).unwrap();
        let err = resolve_omega1_basis(&c, &om, c.omega1_basis.as_ref().unwrap(), &lim());
        assert!(err.is_err());
    }
}
