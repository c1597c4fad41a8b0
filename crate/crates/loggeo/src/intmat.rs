//! Exact integer matrix computations: column echelon form, Smith normal
//! form, lattice solving and kernels. All arithmetic is checked; overflow
//! is an explicit error rather than a wrong answer.

use crate::error::MonoidError;

type Result<T> = std::result::Result<T, MonoidError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = IntMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<i64>], rows: usize) -> Self {
        let mut m = IntMat::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn col(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row(&self, r: usize) -> Vec<i64> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in apply");
        let mut out = vec![0i64; self.rows];
        for r in 0..self.rows {
            let mut acc: i64 = 0;
            for c in 0..self.cols {
                let prod = self
                    .get(r, c)
                    .checked_mul(v[c])
                    .ok_or(MonoidError::Overflow)?;
                acc = acc.checked_add(prod).ok_or(MonoidError::Overflow)?;
            }
            out[r] = acc;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    let prod = self
                        .get(r, k)
                        .checked_mul(other.get(k, c))
                        .ok_or(MonoidError::Overflow)?;
                    acc = acc.checked_add(prod).ok_or(MonoidError::Overflow)?;
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    fn col_axpy(&mut self, dst: usize, src: usize, factor: i64) -> Result<()> {
        for r in 0..self.rows {
            let add = self
                .get(r, src)
                .checked_mul(factor)
                .ok_or(MonoidError::Overflow)?;
            let v = self
                .get(r, dst)
                .checked_add(add)
                .ok_or(MonoidError::Overflow)?;
            self.set(r, dst, v);
        }
        Ok(())
    }

    fn row_axpy(&mut self, dst: usize, src: usize, factor: i64) -> Result<()> {
        for c in 0..self.cols {
            let add = self
                .get(src, c)
                .checked_mul(factor)
                .ok_or(MonoidError::Overflow)?;
            let v = self
                .get(dst, c)
                .checked_add(add)
                .ok_or(MonoidError::Overflow)?;
            self.set(dst, c, v);
        }
        Ok(())
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            let (x, y) = (self.get(r, a), self.get(r, b));
            self.set(r, a, y);
            self.set(r, b, x);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let (x, y) = (self.get(a, c), self.get(b, c));
            self.set(a, c, y);
            self.set(b, c, x);
        }
    }

    fn neg_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = self.get(r, c);
            self.set(r, c, -v);
        }
    }

    fn neg_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = self.get(r, c);
            self.set(r, c, -v);
        }
    }
}

/// Column echelon data: `a * v = h` with `v` unimodular and the columns of
/// `h` in staircase form; `pivots[k] = (row, k)` for the k-th pivot.
pub struct ColEchelon {
    pub h: IntMat,
    pub v: IntMat,
    pub pivots: Vec<(usize, usize)>,
}

pub fn col_echelon(a: &IntMat) -> Result<ColEchelon> {
    let mut h = a.clone();
    let mut v = IntMat::identity(a.cols);
    let mut pivots = Vec::new();
    let mut pc = 0usize;
    for r in 0..a.rows {
        if pc >= a.cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for c in pc..a.cols {
                let val = h.get(r, c);
                if val != 0 && best.map_or(true, |b| h.get(r, b).abs() > val.abs()) {
                    best = Some(c);
                }
            }
            let Some(bc) = best else { break };
            let mut cleared = true;
            for c in pc..a.cols {
                if c != bc && h.get(r, c) != 0 {
                    let q = h.get(r, c).div_euclid(h.get(r, bc));
                    if q != 0 {
                        h.col_axpy(c, bc, -q)?;
                        v.col_axpy(c, bc, -q)?;
                    }
                    if h.get(r, c) != 0 {
                        cleared = false;
                    }
                }
            }
            if cleared {
                h.swap_cols(pc, bc);
                v.swap_cols(pc, bc);
                if h.get(r, pc) < 0 {
                    h.neg_col(pc);
                    v.neg_col(pc);
                }
                pivots.push((r, pc));
                pc += 1;
                break;
            }
        }
    }
    Ok(ColEchelon { h, v, pivots })
}

/// Solve `a * z = b` over the integers. Returns `None` when no integral
/// solution exists.
pub fn solve(a: &IntMat, b: &[i64]) -> Result<Option<Vec<i64>>> {
    assert_eq!(b.len(), a.rows, "dimension mismatch in solve");
    let ech = col_echelon(a)?;
    let mut residual = b.to_vec();
    let mut y = vec![0i64; a.cols];
    let mut piv_iter = ech.pivots.iter().peekable();
    for r in 0..a.rows {
        if let Some(&&(pr, pc)) = piv_iter.peek() {
            if pr == r {
                piv_iter.next();
                let h = ech.h.get(pr, pc);
                if residual[r] % h != 0 {
                    return Ok(None);
                }
                let coef = residual[r] / h;
                y[pc] = coef;
                if coef != 0 {
                    for rr in 0..a.rows {
                        let sub = ech
                            .h
                            .get(rr, pc)
                            .checked_mul(coef)
                            .ok_or(MonoidError::Overflow)?;
                        residual[rr] = residual[rr]
                            .checked_sub(sub)
                            .ok_or(MonoidError::Overflow)?;
                    }
                }
                continue;
            }
        }
        if residual[r] != 0 {
            return Ok(None);
        }
    }
    Ok(Some(ech.v.apply(&y)?))
}

/// Basis of the right kernel `{z : a z = 0}` as vectors of length `a.cols`.
pub fn kernel_basis(a: &IntMat) -> Result<Vec<Vec<i64>>> {
    let ech = col_echelon(a)?;
    let first_free = ech.pivots.len();
    Ok((first_free..a.cols).map(|c| ech.v.col(c)).collect())
}

/// Smith normal form: returns `(u, d, v)` with `u * a * v = d` diagonal and
/// each diagonal entry dividing the next.
pub fn smith(a: &IntMat) -> Result<(IntMat, IntMat, IntMat)> {
    let mut d = a.clone();
    let mut u = IntMat::identity(a.rows);
    let mut v = IntMat::identity(a.cols);
    let n = a.rows.min(a.cols);
    for k in 0..n {
        'outer: loop {
            // locate a minimal-magnitude nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for r in k..a.rows {
                for c in k..a.cols {
                    let val = d.get(r, c);
                    if val != 0
                        && best.map_or(true, |(br, bc)| d.get(br, bc).abs() > val.abs())
                    {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else { break };
            d.swap_rows(k, br);
            u.swap_rows(k, br);
            d.swap_cols(k, bc);
            v.swap_cols(k, bc);
            // clear the pivot row and column
            let mut dirty = false;
            for r in k + 1..a.rows {
                let q = d.get(r, k).div_euclid(d.get(k, k));
                if q != 0 {
                    d.row_axpy(r, k, -q)?;
                    u.row_axpy(r, k, -q)?;
                }
                if d.get(r, k) != 0 {
                    dirty = true;
                }
            }
            for c in k + 1..a.cols {
                let q = d.get(k, c).div_euclid(d.get(k, k));
                if q != 0 {
                    d.col_axpy(c, k, -q)?;
                    v.col_axpy(c, k, -q)?;
                }
                if d.get(k, c) != 0 {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            for r in k + 1..a.rows {
                for c in k + 1..a.cols {
                    if d.get(r, c) % d.get(k, k) != 0 {
                        d.row_axpy(k, r, 1)?;
                        u.row_axpy(k, r, 1)?;
                        continue 'outer;
                    }
                }
            }
            break;
        }
        if d.get(k, k) < 0 {
            d.neg_row(k);
            u.neg_row(k);
        }
    }
    Ok((u, d, v))
}

/// Quotient of Z^n by the column span of `rels`: the free part with an
/// explicit class-coordinate projection. Errors on torsion.
pub struct LatticeQuotient {
    /// Rank of the quotient.
    pub rank: usize,
    /// `rank x n` projection: class coordinates of a vector.
    pub proj: IntMat,
    /// `n x rank` section: representative vector of a class.
    pub section: IntMat,
}

pub fn lattice_quotient(n: usize, rels: &IntMat) -> Result<LatticeQuotient> {
    assert_eq!(rels.rows, n, "relation matrix must have n rows");
    let (u, d, _v) = smith(rels)?;
    let mut s = 0usize;
    for k in 0..n.min(rels.cols) {
        let dk = d.get(k, k);
        if dk == 0 {
            break;
        }
        if dk.abs() != 1 {
            return Err(MonoidError::Torsion(dk.abs()));
        }
        s += 1;
    }
    let rank = n - s;
    let mut proj = IntMat::zeros(rank, n);
    for r in 0..rank {
        for c in 0..n {
            proj.set(r, c, u.get(s + r, c));
        }
    }
    // section: invert u and take the last `rank` columns
    let uinv = unimodular_inverse(&u)?;
    let mut section = IntMat::zeros(n, rank);
    for r in 0..n {
        for c in 0..rank {
            section.set(r, c, uinv.get(r, s + c));
        }
    }
    Ok(LatticeQuotient {
        rank,
        proj,
        section,
    })
}

/// Inverse of a unimodular integer matrix via integer Gauss-Jordan.
pub fn unimodular_inverse(m: &IntMat) -> Result<IntMat> {
    assert_eq!(m.rows, m.cols, "inverse of non-square matrix");
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = IntMat::identity(n);
    for k in 0..n {
        loop {
            let mut best: Option<usize> = None;
            for r in k..n {
                let val = a.get(r, k);
                if val != 0 && best.map_or(true, |b| a.get(b, k).abs() > val.abs()) {
                    best = Some(r);
                }
            }
            let br = best.expect("singular matrix passed to unimodular_inverse");
            a.swap_rows(k, br);
            inv.swap_rows(k, br);
            let mut cleared = true;
            for r in 0..n {
                if r != k && a.get(r, k) != 0 {
                    let q = a.get(r, k).div_euclid(a.get(k, k));
                    if q != 0 {
                        a.row_axpy(r, k, -q)?;
                        inv.row_axpy(r, k, -q)?;
                    }
                    if a.get(r, k) != 0 {
                        cleared = false;
                    }
                }
            }
            if cleared {
                break;
            }
        }
        if a.get(k, k) < 0 {
            a.neg_row(k);
            inv.neg_row(k);
        }
        assert!(a.get(k, k) == 1, "matrix is not unimodular");
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_4x4() {
        let m = IntMat::from_rows(&[
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let (u, d, v) = smith(&m).unwrap();
        // u * m * v == d
        assert_eq!(u.mul(&m).unwrap().mul(&v).unwrap(), d);
        let diag: Vec<i64> = (0..4).map(|i| d.get(i, i)).collect();
        assert_eq!(diag, vec![1, 3, 21, 0]);
        // off-diagonal zero and divisibility chain
        for r in 0..4 {
            for c in 0..4 {
                if r != c {
                    assert_eq!(d.get(r, c), 0);
                }
            }
        }
    }

    #[test]
    fn solve_and_kernel() {
        // columns (2) and (3) generate Z: 1 = -1*2 + 1*3
        let a = IntMat::from_cols(&[vec![2], vec![3]], 1);
        let z = solve(&a, &[1]).unwrap().unwrap();
        assert_eq!(2 * z[0] + 3 * z[1], 1);
        let ker = kernel_basis(&a).unwrap();
        assert_eq!(ker.len(), 1);
        let k = &ker[0];
        assert_eq!(2 * k[0] + 3 * k[1], 0);
        assert!(k[0].abs() == 3 && k[1].abs() == 2);
    }

    #[test]
    fn no_solution() {
        let a = IntMat::from_cols(&[vec![2]], 1);
        assert!(solve(&a, &[3]).unwrap().is_none());
    }

    #[test]
    fn quotient_free() {
        // Z^2 / <(1,1)> has rank 1; classes of e1 and e2 are opposite
        let rels = IntMat::from_cols(&[vec![1, 1]], 2);
        let q = lattice_quotient(2, &rels).unwrap();
        assert_eq!(q.rank, 1);
        let c1 = q.proj.apply(&[1, 0]).unwrap();
        let c2 = q.proj.apply(&[0, 1]).unwrap();
        assert_eq!(c1[0], -c2[0]);
        assert_eq!(c1[0].abs(), 1);
    }

    #[test]
    fn quotient_torsion() {
        let rels = IntMat::from_cols(&[vec![2, -2]], 2);
        assert!(matches!(
            lattice_quotient(2, &rels),
            Err(MonoidError::Torsion(2))
        ));
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let m = IntMat::from_rows(&[vec![1, 2, 0], vec![0, 1, 3], vec![0, 0, 1]]);
        let inv = unimodular_inverse(&m).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), IntMat::identity(3));
    }
}
