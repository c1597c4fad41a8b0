//! The charted morphism datum: a base algebra with a monoid map into it,
//! an algebra over it with a second monoid chart, and the connecting
//! square. Charts are read from JSON with polynomials as grammar strings.

use crate::error::{Error, Result};
use crate::field::CoefficientField;
use crate::grobner::Ideal;
use crate::intmat::IntMat;
use crate::limits::Limits;
use crate::monoid::{monoid_algebra_presentation, FineMonoid, MonoidMap};
use crate::parse::{parse_form, parse_polynomial, FormExpr, FormLabel};
use crate::poly::{ring_one, PolyRing, Polynomial};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldSpec {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub variables: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonoidSpec {
    pub ambient_rank: usize,
    #[serde(default)]
    pub generators: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Omega1BasisSpec {
    /// Basis elements as form strings.
    pub basis: Vec<String>,
    /// Coordinates of every ambient generator label (`d(x)`, `dlog(g0)`,
    /// ...) with respect to `basis`, as polynomial strings.
    pub coords: std::collections::BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConnectionSpec {
    pub rank: usize,
    pub matrix: Vec<Vec<String>>,
}

/// On-disk chart document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChartFile {
    pub name: String,
    pub field: FieldSpec,
    #[serde(rename = "A")]
    pub a: AlgebraSpec,
    #[serde(rename = "Q_monoid")]
    pub q_monoid: MonoidSpec,
    #[serde(rename = "alpha_A")]
    pub alpha_a: Vec<String>,
    #[serde(rename = "B")]
    pub b: AlgebraSpec,
    #[serde(rename = "P_monoid")]
    pub p_monoid: MonoidSpec,
    #[serde(rename = "alpha_B")]
    pub alpha_b: Vec<String>,
    #[serde(rename = "Q_to_P")]
    pub q_to_p: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1_basis: Option<Omega1BasisSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<ConnectionSpec>,
}

/// A loaded chart: the presentation ring holds the base variables first,
/// then the relative variables.
#[derive(Debug, Clone)]
pub struct LogChart {
    pub name: String,
    pub field: CoefficientField,
    pub ring: Arc<PolyRing>,
    /// Number of base (A) variables at the front of the ring.
    pub n_a_vars: usize,
    pub a_relations: Vec<Polynomial>,
    pub b_relations: Vec<Polynomial>,
    pub q: FineMonoid,
    pub p: FineMonoid,
    pub alpha_a: Vec<Polynomial>,
    pub alpha_b: Vec<Polynomial>,
    pub q_to_p: MonoidMap,
    pub omega1_basis: Option<Omega1BasisSpec>,
    pub connection: Option<ConnectionSpec>,
}

impl LogChart {
    pub fn from_file_str(s: &str) -> Result<LogChart> {
        let file: ChartFile = serde_json::from_str(s)?;
        LogChart::from_spec(file)
    }

    pub fn from_spec(file: ChartFile) -> Result<LogChart> {
        let field = match file.field.kind.as_str() {
            "Q" => CoefficientField::Q,
            "Fp" => {
                let p = file
                    .field
                    .p
                    .ok_or_else(|| Error::Chart("field of type Fp needs a prime p".into()))?;
                CoefficientField::Fp(p)
            }
            other => return Err(Error::Chart(format!("unknown field type {other:?}"))),
        };
        field.validate().map_err(Error::Chart)?;
        let mut vars = file.a.variables.clone();
        vars.extend(file.b.variables.iter().cloned());
        for v in &vars {
            let ok = !v.is_empty()
                && v.chars().next().unwrap().is_alphabetic()
                && v.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::Chart(format!("invalid variable name {v:?}")));
            }
        }
        let n_a_vars = file.a.variables.len();
        let ring = PolyRing::new(field, vars);
        let parse_all = |ss: &[String]| -> Result<Vec<Polynomial>> {
            ss.iter()
                .map(|s| parse_polynomial(&ring, s).map_err(Error::from))
                .collect()
        };
        let a_relations = parse_all(&file.a.relations)?;
        for r in &a_relations {
            if r.terms
                .iter()
                .any(|(m, _)| m.0[n_a_vars..].iter().any(|&e| e > 0))
            {
                return Err(Error::Chart(format!(
                    "base relation {r} involves a relative variable"
                )));
            }
        }
        let b_relations = parse_all(&file.b.relations)?;
        let q = FineMonoid::new(file.q_monoid.ambient_rank, file.q_monoid.generators.clone());
        let p = FineMonoid::new(file.p_monoid.ambient_rank, file.p_monoid.generators.clone());
        let alpha_a = parse_all(&file.alpha_a)?;
        for a in &alpha_a {
            if a.terms
                .iter()
                .any(|(m, _)| m.0[n_a_vars..].iter().any(|&e| e > 0))
            {
                return Err(Error::Chart(format!(
                    "base chart value {a} involves a relative variable"
                )));
            }
        }
        let alpha_b = parse_all(&file.alpha_b)?;
        if alpha_a.len() != q.gens.len() {
            return Err(Error::Chart(format!(
                "alpha_A must list one value per Q generator ({} expected, {} given)",
                q.gens.len(),
                alpha_a.len()
            )));
        }
        if alpha_b.len() != p.gens.len() {
            return Err(Error::Chart(format!(
                "alpha_B must list one value per P generator ({} expected, {} given)",
                p.gens.len(),
                alpha_b.len()
            )));
        }
        if file.q_to_p.len() != p.rank {
            return Err(Error::Chart(format!(
                "Q_to_P must have {} rows (ambient rank of P)",
                p.rank
            )));
        }
        for row in &file.q_to_p {
            if row.len() != q.rank {
                return Err(Error::Chart(format!(
                    "Q_to_P rows must have {} entries (ambient rank of Q)",
                    q.rank
                )));
            }
        }
        let matrix = IntMat::from_rows(&file.q_to_p);
        let q_to_p = MonoidMap::new(q.clone(), p.clone(), matrix);
        Ok(LogChart {
            name: file.name,
            field,
            ring,
            n_a_vars,
            a_relations,
            b_relations,
            q,
            p,
            alpha_a,
            alpha_b,
            q_to_p,
            omega1_basis: file.omega1_basis,
            connection: file.connection,
        })
    }

    /// All relations of the coordinate ring of the total space.
    pub fn full_relations(&self) -> Vec<Polynomial> {
        let mut rels = self.a_relations.clone();
        rels.extend(self.b_relations.iter().cloned());
        rels
    }

    pub fn b_ideal(&self) -> Ideal {
        Ideal::new(self.ring.clone(), self.full_relations())
    }

    /// Indices of the relative (B) variables in the presentation ring.
    pub fn b_var_indices(&self) -> std::ops::Range<usize> {
        self.n_a_vars..self.ring.nvars()
    }

    /// The ambient generator labels of the differential module: `d` of
    /// every relative variable, then `dlog` of every P generator (named
    /// positionally `g0`, `g1`, ...).
    pub fn omega1_labels(&self) -> Vec<FormLabel> {
        let mut labels: Vec<FormLabel> = self
            .b_var_indices()
            .map(|i| FormLabel::D(self.ring.vars[i].clone()))
            .collect();
        for j in 0..self.p.gens.len() {
            labels.push(FormLabel::Dlog(format!("g{j}")));
        }
        labels
    }

    /// Resolve a form string into an ambient coefficient vector over
    /// `omega1_labels`.
    pub fn resolve_form(&self, s: &str) -> Result<Vec<Polynomial>> {
        let expr = parse_form(&self.ring, s)?;
        self.resolve_form_expr(&expr, s)
    }

    pub fn resolve_form_expr(&self, expr: &FormExpr, origin: &str) -> Result<Vec<Polynomial>> {
        if !expr.scalar.is_zero() {
            return Err(Error::Chart(format!(
                "form expression {origin:?} has a scalar part; only degree-one forms are allowed"
            )));
        }
        let labels = self.omega1_labels();
        let mut out: Vec<Polynomial> = labels
            .iter()
            .map(|_| crate::poly::ring_zero(&self.ring))
            .collect();
        for (label, coeff) in &expr.terms {
            let idx = labels.iter().position(|l| l == label).ok_or_else(|| {
                Error::Chart(format!("unknown form label {label} in {origin:?}"))
            })?;
            out[idx] = out[idx].add(coeff);
        }
        Ok(out)
    }

    /// Evaluate the chart map on a monoid element of P given by
    /// exponents over the generators.
    pub fn alpha_b_power(&self, exps: &[u64]) -> Polynomial {
        let mut acc = ring_one(&self.ring);
        for (a, &e) in self.alpha_b.iter().zip(exps) {
            if e > 0 {
                acc = acc.mul(&a.pow(e as u32));
            }
        }
        acc
    }

    pub fn alpha_a_power(&self, exps: &[u64]) -> Polynomial {
        let mut acc = ring_one(&self.ring);
        for (a, &e) in self.alpha_a.iter().zip(exps) {
            if e > 0 {
                acc = acc.mul(&a.pow(e as u32));
            }
        }
        acc
    }

    /// Structural diagnostics: monoid map validity, multiplicativity of
    /// both chart maps on the monoid relations, and commutativity of the
    /// connecting square. An empty list means the chart is valid.
    pub fn validate(&self, limits: &Limits) -> Result<Vec<String>> {
        let mut diags: Vec<String> = Vec::new();
        let ideal = self.b_ideal();
        if let Err(e) = self.q_to_p.validate(limits) {
            diags.push(format!(
                "monoid map Q -> P does not land in P: {e}"
            ));
        }
        // multiplicativity of alpha_B over the toric relations of P
        let names: Vec<String> = (0..self.p.gens.len()).map(|j| format!("g{j}")).collect();
        let (toric_ring, toric) =
            monoid_algebra_presentation(&self.p, self.field, names, limits)?;
        for rel in &toric {
            let image = rel.eval(&self.ring, &self.alpha_b);
            if !ideal.contains(&image, limits).map_err(Error::from)? {
                diags.push(format!(
                    "alpha_B is not multiplicative on the P relation {rel} (image {image} is nonzero)"
                ));
            }
        }
        let _ = toric_ring;
        // multiplicativity of alpha_A over the toric relations of Q
        let names: Vec<String> = (0..self.q.gens.len()).map(|j| format!("q{j}")).collect();
        let (_, toric_q) = monoid_algebra_presentation(&self.q, self.field, names, limits)?;
        for rel in &toric_q {
            let image = rel.eval(&self.ring, &self.alpha_a);
            if !ideal.contains(&image, limits).map_err(Error::from)? {
                diags.push(format!(
                    "alpha_A is not multiplicative on the Q relation {rel}"
                ));
            }
        }
        // the connecting square: alpha_B(QtoP(q)) = alpha_A(q) in B
        for (j, qg) in self.q.gens.iter().enumerate() {
            let img = self.q_to_p.apply(qg).map_err(Error::from)?;
            match self.p.decompose(&img, limits) {
                Err(e) => diags.push(format!(
                    "cannot express the image of Q generator {j} inside P: {e}"
                )),
                Ok(None) => diags.push(format!(
                    "image {img:?} of Q generator {j} is not in P"
                )),
                Ok(Some(exps)) => {
                    let via_p = self.alpha_b_power(&exps);
                    let diff = via_p.sub(&self.alpha_a[j]);
                    if !ideal.contains(&diff, limits).map_err(Error::from)? {
                        diags.push(format!(
                            "chart square fails on Q generator {j}: alpha_B(image) - alpha_A = {diff}"
                        ));
                    }
                }
            }
        }
        Ok(diags)
    }
}
