//! Dense matrices over `F_q`: the characteristic polynomial by Hessenberg
//! reduction, minimal polynomials from Krylov sequences, Gaussian solving,
//! and the Hankel system used by the randomized solver.
//!
//! These kernels are deliberately plain O(n^3) routines; they back the
//! brute-force oracle and must stay simple enough to trust.

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::poly::FqPoly;

#[derive(Clone, PartialEq, Eq)]
pub struct FqMatrix {
    field: Fq,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FqMatrix {
    pub fn zeros(field: Fq, rows: usize, cols: usize) -> Self {
        FqMatrix {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Fq, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Fq, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&v| field.reduce(v)));
        }
        FqMatrix {
            field,
            rows: r,
            cols: c,
            entries,
        }
    }

    /// Companion matrix of a monic polynomial: subdiagonal ones, last column
    /// the negated low coefficients.
    pub fn companion(p: &FqPoly) -> Self {
        let f = p.field();
        let n = p.degree().expect("nonzero polynomial");
        assert!(p.is_monic() && n >= 1);
        let mut m = Self::zeros(f, n, n);
        for i in 1..n {
            m.set(i, i - 1, 1);
        }
        for i in 0..n {
            m.set(i, n - 1, f.neg(p.coeff(i)));
        }
        m
    }

    #[inline]
    pub fn field(&self) -> Fq {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = self.field.reduce(v);
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.entries[i * out.cols + j] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        let mut out = vec![0u64; self.rows];
        if f.small_modulus() && self.cols <= (1 << 14) {
            for (i, o) in out.iter_mut().enumerate() {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                let mut acc = 0u64;
                for (a, b) in row.iter().zip(v) {
                    acc = acc.wrapping_add(a.wrapping_mul(*b));
                }
                *o = acc % f.modulus();
            }
        } else {
            for (i, o) in out.iter_mut().enumerate() {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                let mut acc = 0u64;
                for (a, b) in row.iter().zip(v) {
                    acc = f.add(acc, f.mul(*a, *b));
                }
                *o = acc;
            }
        }
        out
    }

    /// Monic characteristic polynomial `det(xI - M)` by similarity reduction
    /// to Hessenberg form followed by the leading-minor recurrence. Exact
    /// over any field, O(n^3).
    pub fn charpoly(&self) -> FqPoly {
        assert_eq!(self.rows, self.cols, "characteristic polynomial of a square matrix");
        let f = self.field;
        let n = self.rows;
        if n == 0 {
            return FqPoly::one(f);
        }
        let mut h = self.clone();
        // reduce to upper Hessenberg with similarity transforms
        for m in 0..n.saturating_sub(2) {
            let pivot = (m + 1..n).find(|&r| h.get(r, m) != 0);
            let Some(p) = pivot else { continue };
            if p != m + 1 {
                h.swap_rows(p, m + 1);
                h.swap_cols(p, m + 1);
            }
            let inv = f.inv(h.get(m + 1, m)).expect("nonzero pivot");
            for r in m + 2..n {
                let t = f.mul(h.get(r, m), inv);
                if t == 0 {
                    continue;
                }
                // row_r -= t * row_{m+1}, then col_{m+1} += t * col_r
                for c in 0..n {
                    let v = f.sub(h.get(r, c), f.mul(t, h.get(m + 1, c)));
                    h.set(r, c, v);
                }
                for rr in 0..n {
                    let v = f.add(h.get(rr, m + 1), f.mul(t, h.get(rr, r)));
                    h.set(rr, m + 1, v);
                }
            }
        }
        // p_m(x) = (x - h_mm) p_{m-1}(x) - sum_i h_im * (prod of subdiagonal) * p_{i-1}(x)
        let mut polys = vec![FqPoly::one(f)];
        for m in 0..n {
            let x_minus = FqPoly::new(f, &[f.neg(h.get(m, m)), 1]);
            let mut p = x_minus.mul(&polys[m]);
            let mut sub = 1u64;
            for i in (0..m).rev() {
                sub = f.mul(sub, h.get(i + 1, i));
                if sub == 0 {
                    break;
                }
                let t = f.mul(h.get(i, m), sub);
                p = p.sub(&polys[i].scale(t));
            }
            polys.push(p);
        }
        polys.pop().expect("n >= 0")
    }

    /// Minimal polynomial: the lcm of the minimal polynomials of the Krylov
    /// sequences of the standard basis vectors. Deterministic.
    pub fn minpoly(&self) -> FqPoly {
        assert_eq!(self.rows, self.cols);
        let f = self.field;
        let n = self.rows;
        if n == 0 {
            return FqPoly::one(f);
        }
        let mut acc = FqPoly::one(f);
        for k in 0..n {
            let mut e = vec![0u64; n];
            e[k] = 1;
            let local = self.krylov_minpoly(&e);
            // lcm(acc, local)
            let g = acc.gcd(&local);
            acc = acc.mul(&local.divmod(&g).expect("gcd divides").0);
            if acc.degree() == Some(n) {
                break;
            }
        }
        acc.monic()
    }

    /// Monic minimal polynomial of the Krylov sequence `v, Mv, M^2 v, ...`:
    /// incremental elimination with an augmented combination record.
    fn krylov_minpoly(&self, v: &[u64]) -> FqPoly {
        let f = self.field;
        let n = self.rows;
        // rows in echelon form: (reduced vector, pivot col, combination poly)
        let mut basis: Vec<(Vec<u64>, usize, Vec<u64>)> = Vec::new();
        let mut cur = v.to_vec();
        for step in 0..=n {
            let mut vec = cur.clone();
            let mut comb = vec![0u64; n + 1];
            comb[step] = 1;
            for (b, pivot, bc) in &basis {
                let c = vec[*pivot];
                if c == 0 {
                    continue;
                }
                for i in 0..n {
                    vec[i] = f.sub(vec[i], f.mul(c, b[i]));
                }
                for (i, &x) in bc.iter().enumerate() {
                    comb[i] = f.sub(comb[i], f.mul(c, x));
                }
            }
            if let Some(pivot) = vec.iter().position(|&x| x != 0) {
                let inv = f.inv(vec[pivot]).expect("nonzero");
                for x in vec.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                for x in comb.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                basis.push((vec, pivot, comb));
                cur = self.mul_vec(&cur);
            } else {
                // dependency found: comb gives the monic annihilator,
                // monic at x^step since older rows only touch lower terms
                return FqPoly::new(f, &comb);
            }
        }
        unreachable!("Krylov sequence of length n+1 is always dependent")
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }
}

impl std::fmt::Debug for FqMatrix {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(w, "[{}x{} mod {}]", self.rows, self.cols, self.field.modulus())?;
        for r in 0..self.rows {
            let row: Vec<u64> = (0..self.cols).map(|c| self.get(r, c)).collect();
            writeln!(w, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Solves the `v x v` Hankel system with `H[i][j] = s[i+j]` built from
/// `first_col_row` (length `2v-1`) against `rhs` (length `v`), by Gaussian
/// elimination with partial pivoting.
///
/// A singular matrix is reported as an error so the randomized solver can
/// retry with fresh projections.
pub fn hankel_solve(field: Fq, first_col_row: &[u64], rhs: &[u64]) -> Result<Vec<u64>> {
    let v = rhs.len();
    assert_eq!(first_col_row.len(), 2 * v - 1, "need 2v-1 Hankel entries");
    let mut m = FqMatrix::zeros(field, v, v);
    for i in 0..v {
        for j in 0..v {
            m.set(i, j, first_col_row[i + j]);
        }
    }
    solve_dense(&mut m, rhs)
}

/// In-place Gaussian elimination; consumes the matrix scratch space.
///
/// With a small modulus the row updates accumulate `t * (q - v)` raw and
/// rows are reduced only when they become the pivot row, so the inner loop
/// is a bare multiply-add.
fn solve_dense(m: &mut FqMatrix, rhs: &[u64]) -> Result<Vec<u64>> {
    let f = m.field();
    let q = f.modulus();
    let n = rhs.len();
    let fast = f.small_modulus() && (n as u128 + 2) * (q as u128) * (q as u128) < u64::MAX as u128;
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| m.get(r, col) % q != 0)
            .ok_or(Error::SingularMatrix)?;
        if pivot != col {
            m.swap_rows(pivot, col);
            b.swap(pivot, col);
        }
        // the pivot row is the subtrahend below: bring it back under q
        for c in col..n {
            let v = m.get(col, c) % q;
            m.entries[col * n + c] = v;
        }
        b[col] %= q;
        let inv = f.inv(m.get(col, col))?;
        for r in col + 1..n {
            let t = f.mul(m.get(r, col) % q, inv);
            if t == 0 {
                continue;
            }
            if fast {
                for c in col..n {
                    m.entries[r * n + c] = m.entries[r * n + c]
                        .wrapping_add(t.wrapping_mul(q - m.entries[col * n + c]));
                }
                b[r] = b[r].wrapping_add(t.wrapping_mul(q - b[col]));
            } else {
                for c in col..n {
                    let v = f.sub(m.get(r, c) % q, f.mul(t, m.get(col, c)));
                    m.entries[r * n + c] = v;
                }
                b[r] = f.sub(b[r] % q, f.mul(t, b[col]));
            }
        }
    }
    let mut x = vec![0u64; n];
    for col in (0..n).rev() {
        let mut acc = b[col] % q;
        for c in col + 1..n {
            acc = f.sub(acc, f.mul(m.get(col, c) % q, x[c]));
        }
        x[col] = f.mul(acc, f.inv(m.get(col, col))?);
    }
    Ok(x)
}
