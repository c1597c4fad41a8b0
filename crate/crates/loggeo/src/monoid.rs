//! Finitely generated integral monoids embedded in a lattice, their
//! groupifications, membership searches, exactness of maps, and the
//! diagonal exactification monoids living over the n+1-fold tensor level.

use crate::error::MonoidError;
use crate::field::CoefficientField;
use crate::grobner::saturate_by_product;
use crate::intmat::{self, IntMat};
use crate::limits::Limits;
use crate::poly::{ring_one, PolyRing, Polynomial};
use std::sync::Arc;

type Result<T> = std::result::Result<T, MonoidError>;

/// A finitely generated integral monoid, given by its generators inside
/// the ambient lattice Z^rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FineMonoid {
    pub rank: usize,
    pub gens: Vec<Vec<i64>>,
}

impl FineMonoid {
    pub fn new(rank: usize, gens: Vec<Vec<i64>>) -> Self {
        let mut clean: Vec<Vec<i64>> = Vec::new();
        for g in gens {
            assert_eq!(g.len(), rank, "generator has wrong ambient rank");
            if !clean.contains(&g) {
                clean.push(g);
            }
        }
        FineMonoid { rank, gens: clean }
    }

    pub fn zero(rank: usize) -> Self {
        FineMonoid {
            rank,
            gens: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        let gens = (0..rank)
            .map(|i| {
                let mut v = vec![0; rank];
                v[i] = 1;
                v
            })
            .collect();
        FineMonoid { rank, gens }
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    fn gen_matrix(&self) -> IntMat {
        IntMat::from_cols(&self.gens, self.rank)
    }

    fn max_coord(&self) -> i64 {
        self.gens
            .iter()
            .flat_map(|g| g.iter().map(|c| c.abs()))
            .max()
            .unwrap_or(0)
    }

    /// A strictly positive grading functional on the generators, when one
    /// of the candidate functionals works. Makes membership search finite.
    pub fn grading(&self) -> Option<Vec<i64>> {
        if self.gens.is_empty() {
            return Some(vec![0; self.rank]);
        }
        let mut candidates: Vec<Vec<i64>> = Vec::new();
        // sum of all generators
        let mut sum = vec![0i64; self.rank];
        for g in &self.gens {
            for (s, &c) in sum.iter_mut().zip(g) {
                *s += c;
            }
        }
        candidates.push(sum);
        for i in 0..self.rank {
            let mut v = vec![0; self.rank];
            v[i] = 1;
            candidates.push(v.clone());
            v[i] = -1;
            candidates.push(v);
        }
        // signed coordinate sums for low ambient ranks
        if self.rank <= 10 {
            for mask in 0u32..(1 << self.rank) {
                let v: Vec<i64> = (0..self.rank)
                    .map(|i| if mask & (1 << i) != 0 { -1 } else { 1 })
                    .collect();
                candidates.push(v);
            }
        }
        candidates.into_iter().find(|l| {
            self.gens
                .iter()
                .all(|g| g.iter().zip(l).map(|(a, b)| a * b).sum::<i64>() > 0)
        })
    }

    /// Decompose `v` as a nonnegative integer combination of the
    /// generators by branch and bound. With a grading the search is
    /// complete; otherwise coefficients are capped and exhausting the cap
    /// is an explicit error.
    pub fn decompose(&self, v: &[i64], limits: &Limits) -> Result<Option<Vec<u64>>> {
        assert_eq!(v.len(), self.rank, "vector has wrong ambient rank");
        if v.iter().all(|&c| c == 0) {
            return Ok(Some(vec![0; self.gens.len()]));
        }
        if self.gens.is_empty() {
            return Ok(None);
        }
        let grading = self.grading();
        let pairing = |l: &[i64], x: &[i64]| -> i64 { l.iter().zip(x).map(|(a, b)| a * b).sum() };
        let cap: u64 = {
            let m = v.iter().map(|c| c.abs()).max().unwrap_or(0) + self.max_coord() + 1;
            (limits.height_mult.max(1) as u64) * (m as u64)
        };
        let mut coeffs = vec![0u64; self.gens.len()];
        let mut truncated = false;
        // depth-first over generator coefficients
        fn dfs(
            m: &FineMonoid,
            grading: &Option<Vec<i64>>,
            pairing: &dyn Fn(&[i64], &[i64]) -> i64,
            cap: u64,
            idx: usize,
            remaining: &mut Vec<i64>,
            coeffs: &mut Vec<u64>,
            truncated: &mut bool,
            nodes: &mut u64,
        ) -> Option<Vec<u64>> {
            *nodes += 1;
            if *nodes > 5_000_000 {
                *truncated = true;
                return None;
            }
            if remaining.iter().all(|&c| c == 0) {
                let mut out = coeffs.clone();
                for c in out.iter_mut().skip(idx) {
                    *c = 0;
                }
                return Some(out);
            }
            if idx == m.gens.len() {
                return None;
            }
            if let Some(l) = grading {
                if pairing(l, remaining) < 0 {
                    return None;
                }
            }
            let g = &m.gens[idx];
            let max_c = match grading {
                Some(l) => {
                    let lg = pairing(l, g);
                    let lr = pairing(l, remaining);
                    if lg <= 0 {
                        // cannot happen when the grading was validated
                        cap
                    } else {
                        (lr / lg).max(0) as u64
                    }
                }
                None => {
                    *truncated = true; // search below is bounded, not complete
                    cap
                }
            };
            for c in (0..=max_c).rev() {
                for (r, &gc) in remaining.iter_mut().zip(g) {
                    *r -= (c as i64) * gc;
                }
                coeffs[idx] = c;
                let hit = dfs(
                    m, grading, pairing, cap, idx + 1, remaining, coeffs, truncated, nodes,
                );
                for (r, &gc) in remaining.iter_mut().zip(g) {
                    *r += (c as i64) * gc;
                }
                if hit.is_some() {
                    return hit;
                }
            }
            None
        }
        let mut remaining = v.to_vec();
        let mut nodes = 0u64;
        let hit = dfs(
            self,
            &grading,
            &pairing,
            cap,
            0,
            &mut remaining,
            &mut coeffs,
            &mut truncated,
            &mut nodes,
        );
        match hit {
            Some(c) => Ok(Some(c)),
            None if truncated => Err(MonoidError::SearchBound(format!(
                "membership search for {v:?} exhausted its bound without a grading"
            ))),
            None => Ok(None),
        }
    }

    /// Membership of a lattice vector.
    pub fn contains(&self, v: &[i64], limits: &Limits) -> Result<bool> {
        Ok(self.decompose(v, limits)?.is_some())
    }

    /// Solve `v = sum z_j g_j` over the integers (membership in the
    /// groupification, with a witness).
    pub fn group_decompose(&self, v: &[i64]) -> Result<Option<Vec<i64>>> {
        if self.gens.is_empty() {
            return Ok(if v.iter().all(|&c| c == 0) {
                Some(Vec::new())
            } else {
                None
            });
        }
        intmat::solve(&self.gen_matrix(), v)
    }
}

/// Abelian group datum: rank plus the invariant factors of the generator
/// matrix, each dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupPresentation {
    pub rank: usize,
    pub invariant_factors: Vec<i64>,
}

/// Groupification: the subgroup of the ambient lattice generated by the
/// monoid, in Smith normal form, along with a lattice basis of its span.
pub fn groupify(m: &FineMonoid) -> Result<(AbelianGroupPresentation, Vec<Vec<i64>>)> {
    if m.gens.is_empty() {
        return Ok((
            AbelianGroupPresentation {
                rank: 0,
                invariant_factors: Vec::new(),
            },
            Vec::new(),
        ));
    }
    let g = m.gen_matrix();
    let (_, d, _) = intmat::smith(&g)?;
    let mut factors = Vec::new();
    for k in 0..m.rank.min(m.gens.len()) {
        let dk = d.get(k, k);
        if dk == 0 {
            break;
        }
        factors.push(dk);
    }
    let rank = factors.len();
    let ech = intmat::col_echelon(&g)?;
    let basis = (0..ech.pivots.len()).map(|c| ech.h.col(c)).collect();
    Ok((
        AbelianGroupPresentation {
            rank,
            invariant_factors: factors,
        },
        basis,
    ))
}

/// A monoid map given by an integer matrix between the ambient lattices.
#[derive(Debug, Clone)]
pub struct MonoidMap {
    pub source: FineMonoid,
    pub target: FineMonoid,
    /// target.rank x source.rank matrix.
    pub matrix: IntMat,
}

impl MonoidMap {
    pub fn new(source: FineMonoid, target: FineMonoid, matrix: IntMat) -> Self {
        assert_eq!(matrix.rows, target.rank, "matrix rows must match target");
        assert_eq!(matrix.cols, source.rank, "matrix cols must match source");
        MonoidMap {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(m: &FineMonoid) -> Self {
        MonoidMap {
            source: m.clone(),
            target: m.clone(),
            matrix: IntMat::identity(m.rank),
        }
    }

    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        self.matrix.apply(v)
    }

    /// Check that every source generator maps into the target monoid.
    pub fn validate(&self, limits: &Limits) -> Result<()> {
        for g in &self.source.gens {
            let img = self.apply(g)?;
            if !self.target.contains(&img, limits)? {
                return Err(MonoidError::NotMember(img));
            }
        }
        Ok(())
    }
}

/// Exactness of a monoid map: every group element of the source whose
/// image lies in the target monoid must already lie in the source monoid.
/// Decided on the irreducible elements of the preimage monoid inside a
/// bounded box (side `height_mult * max generator coordinate`); a negative
/// witness is definitive, a positive verdict requires the irreducibles to
/// sit well inside the box, otherwise the search is inconclusive.
pub fn is_exact(f: &MonoidMap, limits: &Limits) -> Result<bool> {
    let q = &f.source;
    let p = &f.target;
    if q.gens.is_empty() {
        // source group is trivial: only 0 has image in P, and 0 is in Q
        return Ok(true);
    }
    let h = limits.height_mult.max(1) * q.max_coord().max(1);
    // enumerate lattice points of Q^gp in the box via integer coefficients
    // on a basis of the span
    let (_, basis) = groupify(q)?;
    let dim = basis.len();
    let mut members: Vec<Vec<i64>> = Vec::new();
    let mut z = vec![-h; dim];
    'enumerate: loop {
        let mut x = vec![0i64; q.rank];
        for (zi, b) in z.iter().zip(&basis) {
            for (xc, &bc) in x.iter_mut().zip(b) {
                *xc = xc
                    .checked_add(zi.checked_mul(bc).ok_or(MonoidError::Overflow)?)
                    .ok_or(MonoidError::Overflow)?;
            }
        }
        if x.iter().any(|&c| c != 0) && x.iter().all(|&c| c.abs() <= h) {
            let img = f.apply(&x)?;
            if p.contains(&img, limits)? {
                members.push(x);
            }
        }
        // advance the counter
        for i in 0..dim {
            z[i] += 1;
            if z[i] <= h {
                continue 'enumerate;
            }
            z[i] = -h;
        }
        break;
    }
    // irreducible members: not a sum of two nonzero members
    let member_set: std::collections::HashSet<Vec<i64>> = members.iter().cloned().collect();
    let mut interior_bound = 0i64;
    for x in &members {
        let mut reducible = false;
        for y in &members {
            let rest: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            if rest.iter().any(|&c| c != 0) && member_set.contains(&rest) {
                reducible = true;
                break;
            }
        }
        if !reducible {
            if !q.contains(x, limits)? {
                // definitive witness of non-exactness
                return Ok(false);
            }
            interior_bound = interior_bound.max(x.iter().map(|c| c.abs()).max().unwrap_or(0));
        }
    }
    if interior_bound * 2 > h {
        return Err(MonoidError::Inconclusive(format!(
            "irreducible preimage element with height {interior_bound} too close to box bound {h}"
        )));
    }
    Ok(true)
}

/// Binomial presentation of the monoid algebra: one variable per
/// generator, relations the toric ideal of the generator configuration
/// (computed from a kernel lattice basis and saturation by the product of
/// the variables).
pub fn monoid_algebra_presentation(
    m: &FineMonoid,
    field: CoefficientField,
    var_names: Vec<String>,
    limits: &Limits,
) -> std::result::Result<(Arc<PolyRing>, Vec<Polynomial>), crate::error::Error> {
    assert_eq!(var_names.len(), m.gens.len(), "one variable per generator");
    let ring = PolyRing::new(field, var_names);
    if m.gens.is_empty() {
        return Ok((ring, Vec::new()));
    }
    let kernel = intmat::kernel_basis(&m.gen_matrix())?;
    if kernel.is_empty() {
        return Ok((ring, Vec::new()));
    }
    let binomials: Vec<Polynomial> = kernel
        .iter()
        .map(|z| binomial_from_vector(&ring, z))
        .collect();
    let sat = saturate_by_product(&ring, &binomials, limits)?;
    Ok((ring, sat))
}

/// The binomial u^{z+} - u^{z-} of an integer vector.
pub fn binomial_from_vector(ring: &Arc<PolyRing>, z: &[i64]) -> Polynomial {
    let mut plus = ring_one(ring);
    let mut minus = ring_one(ring);
    for (i, &c) in z.iter().enumerate() {
        if c > 0 {
            plus = plus.mul(&crate::poly::ring_var(ring, i).pow(c as u32));
        } else if c < 0 {
            minus = minus.mul(&crate::poly::ring_var(ring, i).pow((-c) as u32));
        }
    }
    plus.sub(&minus)
}

/// Shared lattice data for the diagonal constructions at level n over a
/// monoid map Q -> P: the class map to P^gp / im(Q^gp) and the embedding
/// of the level-n group quotient.
#[derive(Debug, Clone)]
pub struct DiagonalLattice {
    pub n: usize,
    /// Ambient rank of P.
    pub k: usize,
    /// Rank of P^gp / im(Q^gp).
    pub class_dim: usize,
    p_gens: FineMonoid,
    /// Basis of the span of P (columns, in Z^k).
    span_basis: Vec<Vec<i64>>,
    /// Projection from span coordinates to class coordinates.
    class_proj: IntMat,
    /// Section from class coordinates back to span coordinates.
    class_section: IntMat,
}

impl DiagonalLattice {
    pub fn new(p: &FineMonoid, q_to_p: &MonoidMap, n: usize) -> Result<Self> {
        let (_, span_basis) = groupify(p)?;
        let span_rank = span_basis.len();
        let span_mat = IntMat::from_cols(&span_basis, p.rank);
        // image of Q^gp inside the span coordinates
        let mut q_img_coords: Vec<Vec<i64>> = Vec::new();
        for qg in &q_to_p.source.gens {
            let img = q_to_p.apply(qg)?;
            let coords = intmat::solve(&span_mat, &img)?
                .ok_or_else(|| MonoidError::NotInGroup(img.clone()))?;
            q_img_coords.push(coords);
        }
        let rels = IntMat::from_cols(&q_img_coords, span_rank);
        let quotient = intmat::lattice_quotient(span_rank, &rels)?;
        Ok(DiagonalLattice {
            n,
            k: p.rank,
            class_dim: quotient.rank,
            p_gens: p.clone(),
            span_basis,
            class_proj: quotient.proj,
            class_section: quotient.section,
        })
    }

    /// Class of an element of P^gp in P^gp / im(Q^gp).
    pub fn class_of(&self, v: &[i64]) -> Result<Vec<i64>> {
        if self.span_basis.is_empty() {
            if v.iter().any(|&c| c != 0) {
                return Err(MonoidError::NotInGroup(v.to_vec()));
            }
            return Ok(vec![0; self.class_dim]);
        }
        let span_mat = IntMat::from_cols(&self.span_basis, self.k);
        let coords =
            intmat::solve(&span_mat, v)?.ok_or_else(|| MonoidError::NotInGroup(v.to_vec()))?;
        self.class_proj.apply(&coords)
    }

    /// A representative in P^gp of a class vector.
    pub fn class_rep(&self, c: &[i64]) -> Result<Vec<i64>> {
        let span_coords = self.class_section.apply(c)?;
        let mut out = vec![0i64; self.k];
        for (zc, b) in span_coords.iter().zip(&self.span_basis) {
            for (o, &bc) in out.iter_mut().zip(b) {
                *o += zc * bc;
            }
        }
        Ok(out)
    }

    /// Ambient rank of the embedded level-n group quotient: sum block plus
    /// one class block per slot 1..n.
    pub fn embed_rank(&self) -> usize {
        self.k + self.class_dim * self.n
    }

    /// Embed an (n+1)-tuple over P^gp: (sum of entries, class of entry 1,
    /// ..., class of entry n).
    pub fn embed_tuple(&self, tuple: &[Vec<i64>]) -> Result<Vec<i64>> {
        assert_eq!(tuple.len(), self.n + 1, "tuple arity mismatch");
        let mut out = vec![0i64; self.embed_rank()];
        for entry in tuple {
            for (o, &c) in out.iter_mut().zip(entry) {
                *o = o.checked_add(c).ok_or(MonoidError::Overflow)?;
            }
        }
        for (i, entry) in tuple.iter().enumerate().skip(1) {
            let cls = self.class_of(entry)?;
            for (j, &c) in cls.iter().enumerate() {
                out[self.k + (i - 1) * self.class_dim + j] = c;
            }
        }
        Ok(out)
    }

    /// A tuple representative of an embedded vector; entries lie in P^gp
    /// and their sum is the sum block.
    pub fn lift_tuple(&self, v: &[i64]) -> Result<Vec<Vec<i64>>> {
        assert_eq!(v.len(), self.embed_rank(), "embedded vector rank mismatch");
        let mut tuple = vec![vec![0i64; self.k]; self.n + 1];
        let mut rest = v[..self.k].to_vec();
        for i in 1..=self.n {
            let cls = &v[self.k + (i - 1) * self.class_dim..self.k + i * self.class_dim];
            let rep = self.class_rep(cls)?;
            for (r, &c) in rest.iter_mut().zip(&rep) {
                *r -= c;
            }
            tuple[i] = rep;
        }
        tuple[0] = rest;
        Ok(tuple)
    }

    /// The sum component (chart of the diagonal) of an embedded vector.
    pub fn sum_of(&self, v: &[i64]) -> Vec<i64> {
        v[..self.k].to_vec()
    }

    pub fn p(&self) -> &FineMonoid {
        &self.p_gens
    }
}

/// One generator of the exactified level-n monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PnGenKind {
    /// pi_i^*(g_j): the j-th generator of P placed in slot i.
    Slot { slot: usize, pgen: usize },
    /// Difference pi_i^*(±g_j) - pi_0^*(±g_j) for slot i >= 1; `positive`
    /// records the sign of the underlying generator.
    Diff {
        slot: usize,
        /// canonical class vector index within the slot's class list
        class_idx: usize,
        positive: bool,
    },
}

#[derive(Debug, Clone)]
pub struct PnGen {
    pub name: String,
    pub kind: PnGenKind,
    /// Embedded vector in the level-n lattice.
    pub vec: Vec<i64>,
    /// Defining (n+1)-tuple over P^gp.
    pub tuple: Vec<Vec<i64>>,
}

/// The monoid P_n (images of the slot inclusions) together with the
/// quotient-lattice embedding.
#[derive(Debug, Clone)]
pub struct PnData {
    pub lattice: DiagonalLattice,
    pub monoid: FineMonoid,
}

impl PnData {
    /// The inclusion map pi_i^*: it places an element of P^gp in slot `i`.
    pub fn include(&self, slot: usize, v: &[i64]) -> Result<Vec<i64>> {
        assert!(slot <= self.lattice.n, "slot out of range");
        let mut tuple = vec![vec![0i64; self.lattice.k]; self.lattice.n + 1];
        tuple[slot] = v.to_vec();
        self.lattice.embed_tuple(&tuple)
    }
}

/// Build P_n: the quotient of the (n+1)-fold direct sum of P by the
/// antidiagonal congruence of Q, realized in the embedded lattice.
pub fn build_pn(p: &FineMonoid, q_to_p: &MonoidMap, n: usize) -> Result<PnData> {
    let lattice = DiagonalLattice::new(p, q_to_p, n)?;
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for i in 0..=n {
        for g in &p.gens {
            let mut tuple = vec![vec![0i64; p.rank]; n + 1];
            tuple[i] = g.clone();
            gens.push(lattice.embed_tuple(&tuple)?);
        }
    }
    let monoid = FineMonoid::new(lattice.embed_rank(), gens);
    Ok(PnData { lattice, monoid })
}

/// The exactified monoid P_n' = { tuples in the level-n group quotient
/// whose sum lies in P }, with an explicit finite generator list: the slot
/// inclusions of the P-generators together with the signed slot
/// differences. The decomposition
///   v = pi_0^*(sum v) + sum_i (pi_i^* - pi_0^*)(v_i)
/// shows this list generates.
#[derive(Debug, Clone)]
pub struct PnPrime {
    pub lattice: DiagonalLattice,
    pub monoid: FineMonoid,
    pub gens: Vec<PnGen>,
    /// Distinct nonzero class vectors of the P-generators (canonical sign
    /// representatives), shared by every slot.
    pub classes: Vec<Vec<i64>>,
    /// For each P-generator, its class expressed over `classes`: index and
    /// sign, or None when the class vanishes.
    pub pgen_class: Vec<Option<(usize, bool)>>,
    /// Kernel lattice of the distinct-class configuration, used to keep
    /// expressions short.
    pub class_kernel: Vec<Vec<i64>>,
}

/// Greedy descent: shift a solution by kernel vectors while the
/// coefficient mass strictly decreases.
pub fn shorten_by_kernel(mut z: Vec<i64>, kernel: &[Vec<i64>]) -> Vec<i64> {
    let cost = |v: &[i64]| -> i64 { v.iter().map(|c| c.abs()).sum() };
    let mut best = cost(&z);
    loop {
        let mut improved = false;
        for k in kernel {
            for sign in [1i64, -1] {
                let cand: Vec<i64> = z.iter().zip(k).map(|(a, b)| a + sign * b).collect();
                let c = cost(&cand);
                if c < best {
                    z = cand;
                    best = c;
                    improved = true;
                }
            }
        }
        if !improved {
            return z;
        }
    }
}

fn canonical_sign(v: &[i64]) -> (Vec<i64>, bool) {
    for &c in v {
        if c > 0 {
            return (v.to_vec(), true);
        }
        if c < 0 {
            return (v.iter().map(|x| -x).collect(), false);
        }
    }
    (v.to_vec(), true)
}

pub fn build_pn_prime(p: &FineMonoid, q_to_p: &MonoidMap, n: usize) -> Result<PnPrime> {
    let lattice = DiagonalLattice::new(p, q_to_p, n)?;
    let mut classes: Vec<Vec<i64>> = Vec::new();
    let mut pgen_class: Vec<Option<(usize, bool)>> = Vec::new();
    for g in &p.gens {
        let cls = lattice.class_of(g)?;
        if cls.iter().all(|&c| c == 0) {
            pgen_class.push(None);
            continue;
        }
        let (canon, positive) = canonical_sign(&cls);
        let idx = match classes.iter().position(|c| *c == canon) {
            Some(i) => i,
            None => {
                classes.push(canon);
                classes.len() - 1
            }
        };
        pgen_class.push(Some((idx, positive)));
    }
    let mut gens: Vec<PnGen> = Vec::new();
    let push_unique = |g: PnGen, gens: &mut Vec<PnGen>| {
        if !gens.iter().any(|h| h.vec == g.vec) {
            gens.push(g);
        }
    };
    for i in 0..=n {
        for (j, g) in p.gens.iter().enumerate() {
            let mut tuple = vec![vec![0i64; p.rank]; n + 1];
            tuple[i] = g.clone();
            let vec = lattice.embed_tuple(&tuple)?;
            push_unique(
                PnGen {
                    name: format!("ep{i}g{j}"),
                    kind: PnGenKind::Slot { slot: i, pgen: j },
                    vec,
                    tuple,
                },
                &mut gens,
            );
        }
    }
    for i in 1..=n {
        for (c_idx, cls) in classes.iter().enumerate() {
            let rep = lattice.class_rep(cls)?;
            for positive in [true, false] {
                let signed: Vec<i64> = if positive {
                    rep.clone()
                } else {
                    rep.iter().map(|x| -x).collect()
                };
                let mut tuple = vec![vec![0i64; p.rank]; n + 1];
                tuple[i] = signed.clone();
                tuple[0] = signed.iter().map(|x| -x).collect();
                let vec = lattice.embed_tuple(&tuple)?;
                let suffix = if positive { "" } else { "i" };
                push_unique(
                    PnGen {
                        name: format!("dl{i}c{c_idx}{suffix}"),
                        kind: PnGenKind::Diff {
                            slot: i,
                            class_idx: c_idx,
                            positive,
                        },
                        vec,
                        tuple,
                    },
                    &mut gens,
                );
            }
        }
    }
    let monoid = FineMonoid::new(
        lattice.embed_rank(),
        gens.iter().map(|g| g.vec.clone()).collect(),
    );
    let class_kernel = if classes.is_empty() {
        Vec::new()
    } else {
        intmat::kernel_basis(&IntMat::from_cols(&classes, lattice.class_dim))?
    };
    Ok(PnPrime {
        lattice,
        monoid,
        gens,
        classes,
        pgen_class,
        class_kernel,
    })
}

impl PnPrime {
    /// Index of the generator pi_i^*(g_j) in the deduplicated list.
    pub fn slot_gen(&self, slot: usize, pgen: usize) -> usize {
        let target = &self.lattice;
        let p = target.p();
        let mut tuple = vec![vec![0i64; p.rank]; target.n + 1];
        tuple[slot] = p.gens[pgen].clone();
        let vec = target.embed_tuple(&tuple).expect("embed slot generator");
        self.gens
            .iter()
            .position(|g| g.vec == vec)
            .expect("slot generator present")
    }

    /// Index of the difference generator for (slot, class index, sign).
    pub fn diff_gen(&self, slot: usize, class_idx: usize, positive: bool) -> usize {
        let target = &self.lattice;
        let rep = target
            .class_rep(&self.classes[class_idx])
            .expect("class representative");
        let signed: Vec<i64> = if positive {
            rep.clone()
        } else {
            rep.iter().map(|x| -x).collect()
        };
        let p_rank = target.p().rank;
        let mut tuple = vec![vec![0i64; p_rank]; target.n + 1];
        tuple[slot] = signed.clone();
        tuple[0] = signed.iter().map(|x| -x).collect();
        let vec = target.embed_tuple(&tuple).expect("embed diff generator");
        self.gens
            .iter()
            .position(|g| g.vec == vec)
            .expect("difference generator present")
    }

    /// Express an embedded vector of P_n' as a nonnegative combination of
    /// the generators: decompose the sum part over P and the class parts
    /// over the signed differences.
    pub fn express(&self, v: &[i64], limits: &Limits) -> Result<Vec<u64>> {
        let lattice = &self.lattice;
        let s = lattice.sum_of(v);
        let p = lattice.p();
        let s_coeffs = p
            .decompose(&s, limits)?
            .ok_or_else(|| MonoidError::NotMember(s.clone()))?;
        let mut out = vec![0u64; self.gens.len()];
        for (j, &c) in s_coeffs.iter().enumerate() {
            if c > 0 {
                out[self.slot_gen(0, j)] += c;
            }
        }
        if self.classes.is_empty() {
            return Ok(out);
        }
        let class_mat = IntMat::from_cols(&self.classes, lattice.class_dim);
        for i in 1..=lattice.n {
            let cls =
                &v[lattice.k + (i - 1) * lattice.class_dim..lattice.k + i * lattice.class_dim];
            if cls.iter().all(|&c| c == 0) {
                continue;
            }
            let coords = intmat::solve(&class_mat, cls)?
                .ok_or_else(|| MonoidError::NotInGroup(cls.to_vec()))?;
            let coords = shorten_by_kernel(coords, &self.class_kernel);
            for (c_idx, &z) in coords.iter().enumerate() {
                if z > 0 {
                    out[self.diff_gen(i, c_idx, true)] += z as u64;
                } else if z < 0 {
                    out[self.diff_gen(i, c_idx, false)] += (-z) as u64;
                }
            }
        }
        // correct the sum part for the class representatives consumed by
        // the difference generators: differences have sum zero, so the sum
        // block still matches; nothing further to do.
        Ok(out)
    }
}
