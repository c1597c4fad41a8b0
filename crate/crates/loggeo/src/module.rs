//! Groebner bases for submodules of free modules over a polynomial ring,
//! with term-over-position ordering. Used to decide equality in presented
//! modules (differential forms, divided-power models).

use crate::error::KernelError;
use crate::field::Coef;
use crate::limits::Limits;
use crate::poly::{ring_one, ring_zero, Monomial, PolyRing, Polynomial, TermOrder};
use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

type Result<T> = std::result::Result<T, KernelError>;

pub type Vector = Vec<Polynomial>;

pub fn vec_zero(ring: &Arc<PolyRing>, rank: usize) -> Vector {
    (0..rank).map(|_| ring_zero(ring)).collect()
}

pub fn vec_is_zero(v: &Vector) -> bool {
    v.iter().all(|p| p.is_zero())
}

pub fn vec_add(a: &Vector, b: &Vector) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub(a: &Vector, b: &Vector) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_scale_poly(v: &Vector, p: &Polynomial) -> Vector {
    v.iter().map(|x| x.mul(p)).collect()
}

/// Leading term of a vector: term-over-position, lower position wins ties.
pub fn vec_leading<'a>(
    ring: &PolyRing,
    v: &'a Vector,
) -> Option<(usize, &'a Monomial, &'a Coef)> {
    let mut best: Option<(usize, &Monomial, &Coef)> = None;
    for (pos, p) in v.iter().enumerate() {
        if let Some((m, c)) = p.leading() {
            match best {
                None => best = Some((pos, m, c)),
                Some((_, bm, _)) => {
                    if ring.cmp_mono(m, bm) == Ordering::Greater {
                        best = Some((pos, m, c));
                    }
                }
            }
        }
    }
    best
}

fn vec_add_scaled_term(
    v: &Vector,
    other: &Vector,
    c: &Coef,
    m: &Monomial,
) -> Vector {
    v.iter()
        .zip(other)
        .map(|(x, y)| x.add_scaled_term(y, Some(c), Some(m)))
        .collect()
}

fn vec_make_monic(ring: &PolyRing, v: &Vector) -> Vector {
    match vec_leading(ring, v) {
        None => v.clone(),
        Some((_, _, c)) => {
            let inv = ring.field.inv(c);
            v.iter().map(|p| p.scale(&inv)).collect()
        }
    }
}

/// Fully reduce a vector against a set of vectors.
pub fn module_reduce(v: &Vector, basis: &[Vector], limits: &Limits) -> Result<Vector> {
    if basis.is_empty() {
        return Ok(v.clone());
    }
    let ring = v
        .iter()
        .map(|p| p.ring.clone())
        .next()
        .expect("empty vector");
    let field = &ring.field;
    let mut work = v.clone();
    let mut rem = vec_zero(&ring, v.len());
    let mut steps = 0usize;
    'outer: while let Some((pos, lm, lc)) =
        vec_leading(&ring, &work).map(|(p, m, c)| (p, m.clone(), c.clone()))
    {
        steps += 1;
        if steps > 2_000_000 {
            return Err(KernelError::ResourceLimit(
                "module reduction step cap exceeded".into(),
            ));
        }
        for g in basis {
            if let Some((gpos, gm, gc)) = vec_leading(&ring, g) {
                if gpos == pos && gm.divides(&lm) {
                    let q = gm.quotient_into(&lm);
                    let factor = field.neg(&field.div(&lc, gc));
                    work = vec_add_scaled_term(&work, g, &factor, &q);
                    continue 'outer;
                }
            }
        }
        if lm.degree() > limits.total_degree {
            return Err(KernelError::ResourceLimit(format!(
                "module normal form degree exceeds cap {}",
                limits.total_degree
            )));
        }
        // move irreducible leading term to the remainder
        rem[pos].terms.push((lm.clone(), lc.clone()));
        work[pos].terms.remove(0);
    }
    // remainder terms were pushed in decreasing order per position
    Ok(rem)
}

/// Buchberger for submodules: S-pairs only between vectors with leading
/// terms in the same position.
pub fn module_groebner(
    ring: &Arc<PolyRing>,
    rank: usize,
    gens: &[Vector],
    limits: &Limits,
) -> Result<Vec<Vector>> {
    let field = &ring.field;
    let mut basis: Vec<Vector> = Vec::new();
    for g in gens {
        assert_eq!(g.len(), rank, "vector rank mismatch");
        if vec_is_zero(g) {
            continue;
        }
        let red = module_reduce(g, &basis, limits)?;
        if !vec_is_zero(&red) {
            basis.push(vec_make_monic(ring, &red));
        }
    }
    #[derive(Clone)]
    struct MPair {
        i: usize,
        j: usize,
        lcm: Monomial,
        degree: u32,
    }
    let mut pairs: Vec<MPair> = Vec::new();
    let push_pairs = |t: usize, basis: &[Vector], pairs: &mut Vec<MPair>| {
        let (tp, tm, _) = vec_leading(ring, &basis[t]).unwrap();
        let mut cand: Vec<MPair> = Vec::new();
        for (i, g) in basis.iter().enumerate().take(t) {
            let (gp, gm, _) = vec_leading(ring, g).unwrap();
            if gp != tp {
                continue;
            }
            let lcm = gm.lcm(tm);
            cand.push(MPair {
                i,
                j: t,
                degree: lcm.degree(),
                lcm,
            });
        }
        // drop candidates whose lcm is a proper multiple of another's
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            for b in 0..cand.len() {
                if a != b
                    && keep[a]
                    && keep[b]
                    && cand[b].lcm.divides(&cand[a].lcm)
                    && cand[b].lcm != cand[a].lcm
                {
                    keep[a] = false;
                }
            }
        }
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
        for (k, p) in cand.into_iter().enumerate() {
            if keep[k] {
                pairs.push(p);
            }
        }
    };
    for t in 0..basis.len() {
        push_pairs(t, &basis, &mut pairs);
    }
    while !pairs.is_empty() {
        let mut best = 0usize;
        for k in 1..pairs.len() {
            if pairs[k].degree < pairs[best].degree
                || (pairs[k].degree == pairs[best].degree
                    && ring.cmp_mono(&pairs[k].lcm, &pairs[best].lcm) == Ordering::Less)
            {
                best = k;
            }
        }
        let p = pairs.swap_remove(best);
        let (_, fm, fc) = vec_leading(ring, &basis[p.i]).unwrap();
        let (_, gm, gc) = vec_leading(ring, &basis[p.j]).unwrap();
        let qf = fm.quotient_into(&p.lcm);
        let qg = gm.quotient_into(&p.lcm);
        let a: Vector = basis[p.i]
            .iter()
            .map(|x| x.mul_monomial(&qf).scale(&field.inv(fc)))
            .collect();
        let b: Vector = basis[p.j]
            .iter()
            .map(|x| x.mul_monomial(&qg).scale(&field.inv(gc)))
            .collect();
        let s = vec_sub(&a, &b);
        let red = module_reduce(&s, &basis, limits)?;
        if vec_is_zero(&red) {
            continue;
        }
        let (_, lm, _) = vec_leading(ring, &red).unwrap();
        if lm.degree() > limits.total_degree {
            return Err(KernelError::ResourceLimit(format!(
                "module basis degree exceeds cap {}",
                limits.total_degree
            )));
        }
        basis.push(vec_make_monic(ring, &red));
        if basis.len() > limits.basis_size {
            return Err(KernelError::ResourceLimit(format!(
                "module basis size exceeds cap {}",
                limits.basis_size
            )));
        }
        push_pairs(basis.len() - 1, &basis, &mut pairs);
    }
    // minimize
    let mut minimal: Vec<Vector> = Vec::new();
    'cand: for (i, g) in basis.iter().enumerate() {
        let (gp, gm, _) = vec_leading(ring, g).unwrap();
        for (j, h) in basis.iter().enumerate() {
            if i == j {
                continue;
            }
            let (hp, hm, _) = vec_leading(ring, h).unwrap();
            if hp == gp && hm.divides(gm) && (hm != gm || j < i) {
                continue 'cand;
            }
        }
        minimal.push(g.clone());
    }
    // tail reduction for uniqueness
    let mut reduced: Vec<Vector> = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<Vector> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let r = module_reduce(&minimal[i], &others, limits)?;
        if !vec_is_zero(&r) {
            reduced.push(vec_make_monic(ring, &r));
        }
    }
    reduced.sort_by(|a, b| {
        let (ap, am, _) = vec_leading(ring, a).unwrap();
        let (bp, bm, _) = vec_leading(ring, b).unwrap();
        ap.cmp(&bp).then(ring.cmp_mono(am, bm))
    });
    Ok(reduced)
}

/// Intersection of two submodules by the auxiliary-variable method.
/// `common` vectors lie in both submodules and are not split.
pub fn module_intersection(
    ring: &Arc<PolyRing>,
    rank: usize,
    a: &[Vector],
    b: &[Vector],
    common: &[Vector],
    limits: &Limits,
) -> Result<Vec<Vector>> {
    let mut vars = Vec::with_capacity(ring.nvars() + 1);
    vars.push("@w".to_string());
    vars.extend(ring.vars.iter().cloned());
    let aux = PolyRing::with_order(ring.field, vars, TermOrder::Block { head: 1 });
    let map: Vec<usize> = (0..ring.nvars()).map(|i| i + 1).collect();
    let lift = |v: &Vector| -> Vector { v.iter().map(|p| p.rename(&aux, &map)).collect() };
    let w = crate::poly::ring_var(&aux, 0);
    let omw = ring_one(&aux).sub(&w);
    let mut gens: Vec<Vector> = Vec::new();
    for v in a {
        gens.push(lift(v).iter().map(|p| p.mul(&w)).collect());
    }
    for v in b {
        gens.push(lift(v).iter().map(|p| p.mul(&omw)).collect());
    }
    for v in common {
        gens.push(lift(v));
    }
    let gb = module_groebner(&aux, rank, &gens, limits)?;
    let mut out = Vec::new();
    for v in gb {
        if v.iter()
            .all(|p| p.terms.iter().all(|(m, _)| m.0[0] == 0))
        {
            let back: Vector = v
                .iter()
                .map(|p| {
                    let terms = p
                        .terms
                        .iter()
                        .map(|(m, c)| (Monomial(m.0[1..].to_vec()), c.clone()))
                        .collect();
                    Polynomial::from_terms(ring, terms)
                })
                .collect();
            out.push(back);
        }
    }
    Ok(out)
}

/// A finitely presented module: ambient free module of the given rank over
/// `ring / quotient`, modulo the relation vectors.
#[derive(Debug, Clone)]
pub struct ModulePresentation {
    pub ring: Arc<PolyRing>,
    pub rank: usize,
    pub relations: Vec<Vector>,
    /// Generators of the ring ideal the base is divided by; contributes
    /// `k * e_i` relations for every position.
    pub quotient: Vec<Polynomial>,
    gb: Arc<OnceLock<Vec<Vector>>>,
}

impl ModulePresentation {
    pub fn new(
        ring: Arc<PolyRing>,
        rank: usize,
        relations: Vec<Vector>,
        quotient: Vec<Polynomial>,
    ) -> Self {
        for r in &relations {
            assert_eq!(r.len(), rank, "relation rank mismatch");
        }
        ModulePresentation {
            ring,
            rank,
            relations,
            quotient,
            gb: Arc::new(OnceLock::new()),
        }
    }

    /// All relation vectors including the quotient-ideal multiples of the
    /// ambient basis.
    pub fn full_relations(&self) -> Vec<Vector> {
        let mut rels = self.relations.clone();
        for k in &self.quotient {
            for pos in 0..self.rank {
                let mut v = vec_zero(&self.ring, self.rank);
                v[pos] = k.clone();
                rels.push(v);
            }
        }
        rels
    }

    pub fn groebner(&self, limits: &Limits) -> Result<&[Vector]> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb);
        }
        let gb = module_groebner(&self.ring, self.rank, &self.full_relations(), limits)?;
        Ok(self.gb.get_or_init(|| gb))
    }

    pub fn normal_form(&self, v: &Vector, limits: &Limits) -> Result<Vector> {
        if v.len() != self.rank {
            return Err(KernelError::RankMismatch {
                expected: self.rank,
                got: v.len(),
            });
        }
        let gb = self.groebner(limits)?;
        module_reduce(v, gb, limits)
    }

    pub fn is_zero(&self, v: &Vector, limits: &Limits) -> Result<bool> {
        Ok(vec_is_zero(&self.normal_form(v, limits)?))
    }

    pub fn equal_elements(&self, a: &Vector, b: &Vector, limits: &Limits) -> Result<bool> {
        self.is_zero(&vec_sub(a, b), limits)
    }
}
