//! Buchberger's algorithm with the Gebauer-Moeller pair criteria, unique
//! reduced bases, and the ideal operations built on them (sum, product,
//! intersection by an auxiliary variable, equality of reduced bases).

use crate::error::KernelError;
use crate::field::Coef;
use crate::limits::Limits;
use crate::poly::{ring_one, Monomial, PolyRing, Polynomial, TermOrder};
use std::sync::{Arc, OnceLock};

type Result<T> = std::result::Result<T, KernelError>;

/// Fully reduce `f` against `basis`: the returned remainder has no term
/// divisible by any basis leading monomial.
pub fn reduce(f: &Polynomial, basis: &[Polynomial], limits: &Limits) -> Result<Polynomial> {
    let ring = &f.ring;
    let field = &ring.field;
    let mut work = f.clone();
    let mut remainder: Vec<(Monomial, Coef)> = Vec::new();
    'outer: while let Some((lm, lc)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
        for g in basis {
            let Some((gm, gc)) = g.leading() else { continue };
            if gm.divides(&lm) {
                let q = gm.quotient_into(&lm);
                let factor = field.neg(&field.div(&lc, gc));
                work = work.add_scaled_term(g, Some(&factor), Some(&q));
                continue 'outer;
            }
        }
        // irreducible leading term moves to the remainder
        remainder.push((lm, lc));
        work.terms.remove(0);
        if remainder.len() as u32 > 0 && remainder.last().unwrap().0.degree() > limits.total_degree
        {
            return Err(KernelError::ResourceLimit(format!(
                "normal form degree exceeds cap {}",
                limits.total_degree
            )));
        }
    }
    Ok(Polynomial {
        ring: ring.clone(),
        terms: remainder,
    })
}

fn spair(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let field = &f.ring.field;
    let (fm, fc) = f.leading().unwrap();
    let (gm, gc) = g.leading().unwrap();
    let l = fm.lcm(gm);
    let qf = fm.quotient_into(&l);
    let qg = gm.quotient_into(&l);
    let a = f.mul_monomial(&qf).scale(&field.inv(fc));
    let b = g.mul_monomial(&qg).scale(&field.inv(gc));
    a.sub(&b)
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    degree: u32,
}

/// Buchberger with the Gebauer-Moeller update; returns the unique reduced
/// basis (monic, pairwise irreducible, sorted ascending by leading term).
pub fn buchberger(
    ring: &Arc<PolyRing>,
    gens: &[Polynomial],
    limits: &Limits,
) -> Result<Vec<Polynomial>> {
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let add_element = |h: Polynomial,
                           basis: &mut Vec<Polynomial>,
                           pairs: &mut Vec<Pair>|
     -> Result<()> {
        let (hm, _) = h.leading().unwrap();
        let t = basis.len();
        // candidate pairs with the new element
        let mut cand: Vec<Pair> = Vec::new();
        for (i, g) in basis.iter().enumerate() {
            let gm = g.leading().unwrap().0;
            let lcm = gm.lcm(hm);
            cand.push(Pair {
                i,
                j: t,
                lcm: lcm.clone(),
                degree: lcm.degree(),
            });
        }
        // Gebauer-Moeller M criterion: drop candidates whose lcm is a proper
        // multiple of another candidate's lcm.
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            if !keep[a] {
                continue;
            }
            for b in 0..cand.len() {
                if a != b
                    && keep[b]
                    && cand[b].lcm.divides(&cand[a].lcm)
                    && cand[b].lcm != cand[a].lcm
                {
                    keep[a] = false;
                    break;
                }
            }
        }
        // F criterion: among equal lcms keep a single representative.
        for a in 0..cand.len() {
            if !keep[a] {
                continue;
            }
            for b in (a + 1)..cand.len() {
                if keep[b] && cand[a].lcm == cand[b].lcm {
                    keep[b] = false;
                }
            }
        }
        // B criterion: drop old pairs whose lcm is a proper multiple of the
        // new leading monomial unless one of their own lcms matches.
        pairs.retain(|p| {
            if !hm.divides(&p.lcm) {
                return true;
            }
            let li = basis[p.i].leading().unwrap().0.lcm(hm);
            let lj = basis[p.j].leading().unwrap().0.lcm(hm);
            li == p.lcm || lj == p.lcm
        });
        // Buchberger product criterion on the kept candidates.
        for (k, p) in cand.into_iter().enumerate() {
            if !keep[k] {
                continue;
            }
            let gm = basis[p.i].leading().unwrap().0;
            if gm.coprime(hm) {
                continue;
            }
            pairs.push(p);
        }
        basis.push(h);
        if basis.len() > limits.basis_size {
            return Err(KernelError::ResourceLimit(format!(
                "basis size exceeds cap {}",
                limits.basis_size
            )));
        }
        Ok(())
    };

    for g in gens {
        if g.is_zero() {
            continue;
        }
        let red = reduce(g, &basis, limits)?;
        if red.is_zero() {
            continue;
        }
        if red.total_degree() > limits.total_degree {
            return Err(KernelError::ResourceLimit(format!(
                "generator degree exceeds cap {}",
                limits.total_degree
            )));
        }
        add_element(red.make_monic(), &mut basis, &mut pairs)?;
    }

    while !pairs.is_empty() {
        // normal selection: smallest lcm in the term order
        let mut best = 0usize;
        for k in 1..pairs.len() {
            let cand = &pairs[k];
            let cur = &pairs[best];
            if cand.degree < cur.degree
                || (cand.degree == cur.degree
                    && ring.cmp_mono(&cand.lcm, &cur.lcm) == std::cmp::Ordering::Less)
            {
                best = k;
            }
        }
        let p = pairs.swap_remove(best);
        let s = spair(&basis[p.i], &basis[p.j]);
        let red = reduce(&s, &basis, limits)?;
        if red.is_zero() {
            continue;
        }
        if red.leading().unwrap().0.degree() > limits.total_degree {
            return Err(KernelError::ResourceLimit(format!(
                "basis element degree exceeds cap {}",
                limits.total_degree
            )));
        }
        add_element(red.make_monic(), &mut basis, &mut pairs)?;
    }

    // minimize: drop elements whose leading monomial is divisible by another
    let mut minimal: Vec<Polynomial> = Vec::new();
    'cand: for (i, g) in basis.iter().enumerate() {
        let gm = g.leading().unwrap().0;
        for (j, h) in basis.iter().enumerate() {
            if i == j {
                continue;
            }
            let hm = h.leading().unwrap().0;
            if hm.divides(gm) && (hm != gm || j < i) {
                continue 'cand;
            }
        }
        minimal.push(g.clone());
    }
    // inter-reduce tails for the unique reduced basis
    let mut reduced: Vec<Polynomial> = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let r = reduce(&minimal[i], &others, limits)?;
        if !r.is_zero() {
            reduced.push(r.make_monic());
        }
    }
    reduced.sort_by(|a, b| ring.cmp_mono(a.leading().unwrap().0, b.leading().unwrap().0));
    Ok(reduced)
}

/// An ideal with cached reduced Groebner basis.
#[derive(Debug, Clone)]
pub struct Ideal {
    pub ring: Arc<PolyRing>,
    pub gens: Vec<Polynomial>,
    gb: Arc<OnceLock<Vec<Polynomial>>>,
}

impl Ideal {
    pub fn new(ring: Arc<PolyRing>, gens: Vec<Polynomial>) -> Ideal {
        for g in &gens {
            assert!(
                g.ring == ring,
                "ideal generators must live in the ambient ring"
            );
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal {
            ring,
            gens,
            gb: Arc::new(OnceLock::new()),
        }
    }

    pub fn groebner(&self, limits: &Limits) -> Result<&[Polynomial]> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb);
        }
        let gb = buchberger(&self.ring, &self.gens, limits)?;
        Ok(self.gb.get_or_init(|| gb))
    }

    pub fn normal_form(&self, f: &Polynomial, limits: &Limits) -> Result<Polynomial> {
        if f.ring != self.ring {
            return Err(KernelError::RingMismatch(
                "polynomial not in the ideal's ring".into(),
            ));
        }
        let gb = self.groebner(limits)?;
        reduce(f, gb, limits)
    }

    pub fn contains(&self, f: &Polynomial, limits: &Limits) -> Result<bool> {
        Ok(self.normal_form(f, limits)?.is_zero())
    }

    pub fn is_zero_ideal(&self, limits: &Limits) -> Result<bool> {
        Ok(self.groebner(limits)?.is_empty())
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.ring.clone(), gens)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        Ideal::new(self.ring.clone(), gens)
    }

    /// Intersection by the auxiliary-variable method: eliminate `w` from
    /// `w*I + (1-w)*J`. Generators known to lie in both ideals may be
    /// passed through `common` without splitting.
    pub fn intersection(&self, other: &Ideal, limits: &Limits) -> Result<Ideal> {
        self.intersection_with_common(other, &[], limits)
    }

    pub fn intersection_with_common(
        &self,
        other: &Ideal,
        common: &[Polynomial],
        limits: &Limits,
    ) -> Result<Ideal> {
        let ring = &self.ring;
        let aux = aux_ring(ring);
        let lift = |p: &Polynomial| -> Polynomial {
            let map: Vec<usize> = (0..ring.nvars()).map(|i| i + 1).collect();
            p.rename(&aux, &map)
        };
        let w = crate::poly::ring_var(&aux, 0);
        let one_minus_w = ring_one(&aux).sub(&w);
        let mut gens: Vec<Polynomial> = Vec::new();
        for g in &self.gens {
            gens.push(lift(g).mul(&w));
        }
        for g in &other.gens {
            gens.push(lift(g).mul(&one_minus_w));
        }
        for g in common {
            gens.push(lift(g));
        }
        let gb = buchberger(&aux, &gens, limits)?;
        let mut out = Vec::new();
        for g in gb {
            if g.terms.iter().all(|(m, _)| m.0[0] == 0) {
                let map: Vec<usize> = (0..ring.nvars()).map(|i| i + 1).collect();
                out.push(unrename(&g, ring, &map));
            }
        }
        Ok(Ideal::new(ring.clone(), out))
    }

    /// Reduced bases coincide iff the ideals are equal.
    pub fn equal(&self, other: &Ideal, limits: &Limits) -> Result<bool> {
        if self.ring != other.ring {
            return Err(KernelError::RingMismatch(
                "comparing ideals of different rings".into(),
            ));
        }
        let a = self.groebner(limits)?;
        let b = other.groebner(limits)?;
        Ok(a == b)
    }
}

/// Ring with a leading elimination variable `w` prepended.
fn aux_ring(ring: &Arc<PolyRing>) -> Arc<PolyRing> {
    let mut vars = Vec::with_capacity(ring.nvars() + 1);
    vars.push("@w".to_string());
    vars.extend(ring.vars.iter().cloned());
    PolyRing::with_order(ring.field, vars, TermOrder::Block { head: 1 })
}

/// Inverse of `rename` along an injective variable map: coordinates not in
/// the image must not occur.
fn unrename(p: &Polynomial, target: &Arc<PolyRing>, map: &[usize]) -> Polynomial {
    let mut back = vec![usize::MAX; p.ring.nvars()];
    for (src, &dst) in map.iter().enumerate() {
        back[dst] = src;
    }
    let terms = p
        .terms
        .iter()
        .map(|(m, c)| {
            let mut e = vec![0u16; target.nvars()];
            for (i, &exp) in m.0.iter().enumerate() {
                if exp > 0 {
                    assert!(back[i] != usize::MAX, "unrename hit a foreign variable");
                    e[back[i]] += exp;
                }
            }
            (Monomial(e), c.clone())
        })
        .collect();
    Polynomial::from_terms(target, terms)
}

/// Saturate a binomial/lattice ideal with respect to the product of all
/// variables: eliminate `w` from `I + (w * x1*...*xn - 1)`.
pub fn saturate_by_product(
    ring: &Arc<PolyRing>,
    gens: &[Polynomial],
    limits: &Limits,
) -> Result<Vec<Polynomial>> {
    let aux = aux_ring(ring);
    let map: Vec<usize> = (0..ring.nvars()).map(|i| i + 1).collect();
    let mut lifted: Vec<Polynomial> = gens.iter().map(|g| g.rename(&aux, &map)).collect();
    let mut prod = crate::poly::ring_var(&aux, 0);
    for i in 0..ring.nvars() {
        prod = prod.mul(&crate::poly::ring_var(&aux, i + 1));
    }
    lifted.push(prod.sub(&ring_one(&aux)));
    let gb = buchberger(&aux, &lifted, limits)?;
    let mut out = Vec::new();
    for g in gb {
        if g.terms.iter().all(|(m, _)| m.0[0] == 0) {
            out.push(unrename(&g, ring, &map));
        }
    }
    Ok(out)
}
