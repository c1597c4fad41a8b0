//! Sparse multivariate polynomials over an exact coefficient field, with a
//! fixed graded reverse lexicographic term order. Internal elimination
//! computations use a block order whose head segment dominates.

use crate::field::{Coef, CoefficientField};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] += 1;
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow(&self, k: u16) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|&e| e.checked_mul(k).expect("exponent overflow"))
                .collect(),
        )
    }
}

fn cmp_grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    // ties: the last nonzero entry of a - b decides; negative means larger
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return if a[i] < b[i] {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
    }
    Ordering::Equal
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermOrder {
    /// Graded reverse lexicographic (the fixed user-facing order).
    GrevLex,
    /// Elimination order: the first `head` variables dominate. Used only
    /// internally for intersections and saturations.
    Block { head: usize },
}

impl TermOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::GrevLex => cmp_grevlex(&a.0, &b.0),
            TermOrder::Block { head } => match cmp_grevlex(&a.0[..*head], &b.0[..*head]) {
                Ordering::Equal => cmp_grevlex(&a.0[*head..], &b.0[*head..]),
                o => o,
            },
        }
    }
}

#[derive(Debug)]
pub struct PolyRing {
    pub field: CoefficientField,
    pub vars: Vec<String>,
    pub order: TermOrder,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars && self.order == other.order
    }
}
impl Eq for PolyRing {}

impl PolyRing {
    pub fn new(field: CoefficientField, vars: Vec<String>) -> Arc<Self> {
        Self::with_order(field, vars, TermOrder::GrevLex)
    }

    pub fn with_order(field: CoefficientField, vars: Vec<String>, order: TermOrder) -> Arc<Self> {
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            assert!(seen.insert(v.clone()), "duplicate variable name {v}");
        }
        Arc::new(PolyRing { field, vars, order })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b)
    }
}

pub fn ring_zero(ring: &Arc<PolyRing>) -> Polynomial {
    Polynomial {
        ring: ring.clone(),
        terms: Vec::new(),
    }
}

pub fn ring_one(ring: &Arc<PolyRing>) -> Polynomial {
    ring_constant(ring, ring.field.one())
}

pub fn ring_constant(ring: &Arc<PolyRing>, c: Coef) -> Polynomial {
    if ring.field.is_zero(&c) {
        return ring_zero(ring);
    }
    Polynomial {
        ring: ring.clone(),
        terms: vec![(Monomial::one(ring.nvars()), c)],
    }
}

pub fn ring_var(ring: &Arc<PolyRing>, idx: usize) -> Polynomial {
    Polynomial {
        ring: ring.clone(),
        terms: vec![(Monomial::var(ring.nvars(), idx), ring.field.one())],
    }
}

pub fn ring_monomial(ring: &Arc<PolyRing>, m: Monomial, c: Coef) -> Polynomial {
    if ring.field.is_zero(&c) {
        return ring_zero(ring);
    }
    assert_eq!(m.0.len(), ring.nvars(), "monomial arity mismatch");
    Polynomial {
        ring: ring.clone(),
        terms: vec![(m, c)],
    }
}

/// A polynomial: terms sorted strictly descending in the ring order, with
/// no zero coefficients.
#[derive(Debug, Clone)]
pub struct Polynomial {
    pub ring: Arc<PolyRing>,
    pub terms: Vec<(Monomial, Coef)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for Polynomial {}

impl Polynomial {
    pub fn from_terms(ring: &Arc<PolyRing>, terms: Vec<(Monomial, Coef)>) -> Polynomial {
        let mut map: std::collections::HashMap<Monomial, Coef> = std::collections::HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), ring.nvars(), "monomial arity mismatch");
            match map.entry(m) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let s = ring.field.add(e.get(), &c);
                    if ring.field.is_zero(&s) {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    if !ring.field.is_zero(&c) {
                        e.insert(c);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, Coef)> = map.into_iter().collect();
        terms.sort_by(|a, b| ring.cmp_mono(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Coef)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Coef {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    pub fn neg(&self) -> Polynomial {
        let f = &self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f.neg(c)))
                .collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.add_scaled_term(other, None, None)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let f = &self.ring.field;
        let minus_one = f.neg(&f.one());
        self.add_scaled_term(other, Some(&minus_one), None)
    }

    /// `self + c * m * other`, merge-based.
    pub fn add_scaled_term(
        &self,
        other: &Polynomial,
        c: Option<&Coef>,
        m: Option<&Monomial>,
    ) -> Polynomial {
        let ring = &self.ring;
        let f = &ring.field;
        if let Some(c) = c {
            if f.is_zero(c) {
                return self.clone();
            }
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let scaled = |mm: &Monomial, cc: &Coef| {
            let mono = match m {
                Some(m) => mm.mul(m),
                None => mm.clone(),
            };
            let coef = match c {
                Some(c) => f.mul(cc, c),
                None => cc.clone(),
            };
            (mono, coef)
        };
        while i < self.terms.len() && j < other.terms.len() {
            let (om, oc) = scaled(&other.terms[j].0, &other.terms[j].1);
            match ring.cmp_mono(&self.terms[i].0, &om) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((om, oc));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = f.add(&self.terms[i].1, &oc);
                    if !f.is_zero(&s) {
                        out.push((om, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        while j < other.terms.len() {
            out.push(scaled(&other.terms[j].0, &other.terms[j].1));
            j += 1;
        }
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let ring = &self.ring;
        if self.is_zero() || other.is_zero() {
            return ring_zero(ring);
        }
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = ring_zero(ring);
        for (m, c) in &small.terms {
            acc = acc.add_scaled_term(big, Some(c), Some(m));
        }
        acc
    }

    pub fn scale(&self, c: &Coef) -> Polynomial {
        let f = &self.ring.field;
        if f.is_zero(c) {
            return ring_zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, cc)| (m.clone(), f.mul(cc, c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = ring_one(&self.ring);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn make_monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                if self.ring.field.is_one(c) {
                    self.clone()
                } else {
                    let inv = self.ring.field.inv(c);
                    self.scale(&inv)
                }
            }
        }
    }

    /// Formal partial derivative with respect to variable `idx`.
    pub fn partial(&self, idx: usize) -> Polynomial {
        let f = &self.ring.field;
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut mm = m.clone();
            mm.0[idx] -= 1;
            let coef = f.mul(c, &f.from_i64(e as i64));
            if !f.is_zero(&coef) {
                terms.push((mm, coef));
            }
        }
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Transport into `target` by renaming: variable `i` maps to the
    /// variable `var_map[i]` of the target ring.
    pub fn rename(&self, target: &Arc<PolyRing>, var_map: &[usize]) -> Polynomial {
        assert_eq!(var_map.len(), self.ring.nvars());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u16; target.nvars()];
                for (i, &exp) in m.0.iter().enumerate() {
                    if exp > 0 {
                        e[var_map[i]] += exp;
                    }
                }
                (Monomial(e), c.clone())
            })
            .collect();
        Polynomial::from_terms(target, terms)
    }

    /// Full substitution: variable `i` maps to `images[i]`.
    pub fn eval(&self, target: &Arc<PolyRing>, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars());
        let mut pow_cache: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![ring_one(target), p.clone()])
            .collect();
        let power = |i: usize, e: u16, cache: &mut Vec<Vec<Polynomial>>| -> Polynomial {
            while cache[i].len() <= e as usize {
                let next = cache[i].last().unwrap().mul(&images[i]);
                cache[i].push(next);
            }
            cache[i][e as usize].clone()
        };
        let mut acc = ring_zero(target);
        for (m, c) in &self.terms {
            let mut t = ring_constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&power(i, e, &mut pow_cache));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Render a single term for display.
    fn render_term(&self, m: &Monomial, c: &Coef, lead: bool) -> String {
        let f = &self.ring.field;
        let mut s = String::new();
        let neg = f.is_display_negative(c);
        let mag = if neg { f.neg(c) } else { c.clone() };
        if lead {
            if neg {
                s.push('-');
            }
        } else if neg {
            s.push_str(" - ");
        } else {
            s.push_str(" + ");
        }
        let mut factors: Vec<String> = Vec::new();
        if !f.is_one(&mag) || m.is_one() {
            factors.push(f.render(&mag));
        }
        for (i, &e) in m.0.iter().enumerate() {
            if e == 1 {
                factors.push(self.ring.vars[i].clone());
            } else if e > 1 {
                factors.push(format!("{}^{}", self.ring.vars[i], e));
            }
        }
        s.push_str(&factors.join("*"));
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            write!(f, "{}", self.render_term(m, c, i == 0))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qring(vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(
            CoefficientField::Q,
            vars.iter().map(|s| s.to_string()).collect(),
        )
    }

    #[test]
    fn grevlex_degree_first() {
        let r = qring(&["x", "y", "z"]);
        let x2 = Monomial(vec![2, 0, 0]);
        let xyz = Monomial(vec![1, 1, 1]);
        assert_eq!(r.cmp_mono(&xyz, &x2), Ordering::Greater);
    }

    #[test]
    fn grevlex_tiebreak() {
        let r = qring(&["x", "y", "z"]);
        // among degree-2: x^2 > xy > y^2 > xz > yz > z^2
        let seq = [
            Monomial(vec![2, 0, 0]),
            Monomial(vec![1, 1, 0]),
            Monomial(vec![0, 2, 0]),
            Monomial(vec![1, 0, 1]),
            Monomial(vec![0, 1, 1]),
            Monomial(vec![0, 0, 2]),
        ];
        for w in seq.windows(2) {
            assert_eq!(r.cmp_mono(&w[0], &w[1]), Ordering::Greater);
        }
    }

    #[test]
    fn block_order_eliminates() {
        let r = PolyRing::with_order(
            CoefficientField::Q,
            vec!["t".into(), "x".into()],
            TermOrder::Block { head: 1 },
        );
        // t beats any power of x
        let t = Monomial(vec![1, 0]);
        let x5 = Monomial(vec![0, 5]);
        assert_eq!(r.cmp_mono(&t, &x5), Ordering::Greater);
    }

    #[test]
    fn arithmetic() {
        let r = qring(&["x", "y"]);
        let x = ring_var(&r, 0);
        let y = ring_var(&r, 1);
        let p = x.add(&y); // x + y
        let sq = p.mul(&p);
        // (x+y)^2 = x^2 + 2xy + y^2
        assert_eq!(sq.terms.len(), 3);
        assert_eq!(sq, p.pow(2));
        let diff = sq.sub(&x.mul(&x)).sub(&y.mul(&y)).sub(&x.mul(&y).scale(
            &CoefficientField::Q.from_i64(2),
        ));
        assert!(diff.is_zero());
    }

    #[test]
    fn cancellation_in_char2() {
        let r = PolyRing::new(CoefficientField::Fp(2), vec!["x".into()]);
        let x = ring_var(&r, 0);
        assert!(x.add(&x).is_zero());
    }

    #[test]
    fn partial_derivative() {
        let r = qring(&["x", "y"]);
        let x = ring_var(&r, 0);
        let y = ring_var(&r, 1);
        let p = x.pow(3).mul(&y).add(&y.pow(2)); // x^3 y + y^2
        let px = p.partial(0); // 3 x^2 y
        assert_eq!(px, x.pow(2).mul(&y).scale(&CoefficientField::Q.from_i64(3)));
    }

    #[test]
    fn display_roundtrip_shape() {
        let r = qring(&["x", "y"]);
        let x = ring_var(&r, 0);
        let y = ring_var(&r, 1);
        let p = x.pow(2).sub(&y.scale(&CoefficientField::Q.from_ratio(1, 2).unwrap()));
        assert_eq!(p.to_string(), "x^2 - 1/2*y");
    }

    #[test]
    fn zero_variable_ring() {
        let r = qring(&[]);
        let one = ring_one(&r);
        assert!(one.mul(&one).is_constant());
        assert_eq!(one.add(&one.neg()), ring_zero(&r));
    }
}
