//! Exact linear algebra over the scalar fields.
//!
//! Two matrix types: `Mat` holds `Scalar` entries and works over any
//! supported field, dispatching to fraction-free (Bareiss) elimination when
//! the entries are rational functions so intermediate results stay
//! polynomial; `FfMat` is the dense u8 workhorse for finite fields, used by
//! the heavier algebra routines.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::sync::Arc;

use crate::exactfield::ff::FieldTable;
use crate::exactfield::poly::MultiPoly;
use crate::exactfield::ratfn::RatFn;
use crate::exactfield::scalar::{FieldDesc, Scalar};

#[derive(Clone)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub fld: FieldDesc,
    data: Vec<Scalar>,
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.rows, self.cols, self.fld.name())?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{}", self[(r, c)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zero(rows: usize, cols: usize, fld: &FieldDesc) -> Mat {
        Mat { rows, cols, fld: fld.clone(), data: vec![fld.zero(); rows * cols] }
    }

    pub fn identity(n: usize, fld: &FieldDesc) -> Mat {
        let mut m = Self::zero(n, n, fld);
        for i in 0..n {
            m[(i, i)] = fld.one();
        }
        m
    }

    pub fn from_rows(fld: &FieldDesc, rows: Vec<Vec<Scalar>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, fld: fld.clone(), data: rows.into_iter().flatten().collect() }
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col_vec(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows, &self.fld);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].clone();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Mat::zero(self.rows, rhs.cols, &self.fld);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = out[(r, c)].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = self.fld.zero();
                for c in 0..self.cols {
                    if !v[c].is_zero() && !self[(r, c)].is_zero() {
                        acc = acc.add(&self[(r, c)].mul(&v[c]));
                    }
                }
                acc
            })
            .collect()
    }

    fn to_ff(&self) -> Option<(Arc<FieldTable>, FfMat)> {
        let fld = match &self.fld {
            FieldDesc::Ff(f) => f.clone(),
            _ => return None,
        };
        let mut m = FfMat::zero(fld.clone(), self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if let Scalar::Ff { ix, .. } = &self[(r, c)] {
                    m[(r, c)] = *ix;
                } else {
                    return None;
                }
            }
        }
        Some((fld, m))
    }

    fn from_ff(fld: &Arc<FieldTable>, m: &FfMat) -> Mat {
        let fd = FieldDesc::Ff(fld.clone());
        let mut out = Mat::zero(m.rows, m.cols, &fd);
        for r in 0..m.rows {
            for c in 0..m.cols {
                out[(r, c)] = Scalar::Ff { fld: fld.clone(), ix: m[(r, c)] };
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        if let Some((_, m)) = self.to_ff() {
            return m.rank();
        }
        rf_echelon(self).1.len()
    }

    /// True when every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    /// Basis of the right kernel: vectors v with self v = 0.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        if let Some((fld, m)) = self.to_ff() {
            return m
                .kernel_basis()
                .into_iter()
                .map(|v| v.into_iter().map(|ix| Scalar::Ff { fld: fld.clone(), ix }).collect())
                .collect();
        }
        let (ech, pivots, _) = rf_echelon(self);
        rf_kernel_from_echelon(&ech, &pivots, self.cols, &self.fld)
    }

    /// One solution x of self x = b, or None when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        if let Some((fld, m)) = self.to_ff() {
            let bv: Vec<u8> = b
                .iter()
                .map(|s| match s {
                    Scalar::Ff { ix, .. } => *ix,
                    _ => unreachable!(),
                })
                .collect();
            return m
                .solve(&bv)
                .map(|v| v.into_iter().map(|ix| Scalar::Ff { fld: fld.clone(), ix }).collect());
        }
        rf_solve(self, b)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        if let Some((fld, m)) = self.to_ff() {
            return m.inverse().map(|inv| Mat::from_ff(&fld, &inv));
        }
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![self.fld.zero(); n];
            e[j] = self.fld.one();
            cols.push(rf_solve(self, &e)?);
        }
        let mut out = Mat::zero(n, n, &self.fld);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                out[(i, j)] = col[i].clone();
            }
        }
        Some(out)
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        if let Some((fld, m)) = self.to_ff() {
            return Scalar::Ff { fld, ix: m.det() };
        }
        rf_det(self)
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = &self[(r, c)];
                if r == c && !e.is_one() {
                    return false;
                }
                if r != c && !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

// ---- rational-function elimination ----
//
// Rows are cleared to polynomials, then reduced with fraction-free (Bareiss)
// steps so every intermediate entry is a polynomial (a minor of the cleared
// matrix). Back-substitution returns to honest rational functions at the end.

fn entry_rf(s: &Scalar) -> RatFn {
    match s {
        Scalar::Rf(r) => r.as_ref().clone(),
        _ => unreachable!("rf elimination on non-rf scalar"),
    }
}

struct RfEchelon {
    /// Echelon rows as polynomial entries, each row scaled independently.
    rows: Vec<Vec<MultiPoly>>,
}

/// Fraction-free row echelon; returns the echelon, pivot columns, and the
/// number of row swaps performed.
fn rf_echelon(m: &Mat) -> (RfEchelon, Vec<usize>, usize) {
    let ctx = match &m.fld {
        FieldDesc::Rf(c) => c.clone(),
        _ => unreachable!(),
    };
    let mut rows: Vec<Vec<MultiPoly>> = (0..m.rows)
        .map(|r| {
            let rfs: Vec<RatFn> = (0..m.cols).map(|c| entry_rf(&m[(r, c)])).collect();
            let mut den = MultiPoly::one(&ctx);
            for rf in &rfs {
                if !rf.den.is_one() {
                    den = den.mul(&rf.den);
                }
            }
            rfs.iter()
                .map(|rf| {
                    // den / rf.den is exact by construction
                    let cof = den.exact_div(&rf.den).unwrap();
                    rf.num.mul(&cof)
                })
                .collect()
        })
        .collect();
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prev = MultiPoly::one(&ctx);
    let mut r0 = 0;
    let mut swaps = 0;
    for col in 0..m.cols {
        let Some(pr) = (r0..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        if pr != r0 {
            rows.swap(r0, pr);
            swaps += 1;
        }
        let pivot = rows[r0][col].clone();
        for r in r0 + 1..nrows {
            if rows[r].iter().all(|e| e.is_zero()) {
                continue;
            }
            let head = rows[r][col].clone();
            for c in 0..m.cols {
                let t = pivot.mul(&rows[r][c]).sub(&head.mul(&rows[r0][c]));
                rows[r][c] = t.exact_div(&prev).expect("bareiss division is exact");
            }
        }
        prev = pivot;
        pivots.push(col);
        r0 += 1;
        if r0 == nrows {
            break;
        }
    }
    rows.truncate(r0);
    (RfEchelon { rows }, pivots, swaps)
}

fn rf_kernel_from_echelon(
    ech: &RfEchelon,
    pivots: &[usize],
    cols: usize,
    fld: &FieldDesc,
) -> Vec<Vec<Scalar>> {
    let ctx = match fld {
        FieldDesc::Rf(c) => c.clone(),
        _ => unreachable!(),
    };
    let piv_set: Vec<bool> = {
        let mut v = vec![false; cols];
        for &p in pivots {
            v[p] = true;
        }
        v
    };
    let mut out = Vec::new();
    for free in 0..cols {
        if piv_set[free] {
            continue;
        }
        let mut v: Vec<RatFn> = (0..cols)
            .map(|c| if c == free { RatFn::one(&ctx) } else { RatFn::zero(&ctx) })
            .collect();
        // back-substitute pivot coordinates from bottom to top
        for (ri, &pc) in pivots.iter().enumerate().rev() {
            let row = &ech.rows[ri];
            let mut acc = RatFn::zero(&ctx);
            for c in pc + 1..cols {
                if !row[c].is_zero() && !v[c].is_zero() {
                    acc = acc.add(&RatFn::from_poly(row[c].clone()).mul(&v[c]));
                }
            }
            let piv = RatFn::from_poly(row[pc].clone());
            v[pc] = acc.neg().div(&piv).unwrap();
        }
        out.push(v.into_iter().map(|r| Scalar::Rf(Arc::new(r))).collect());
    }
    out
}

fn rf_solve(m: &Mat, b: &[Scalar]) -> Option<Vec<Scalar>> {
    // solve via echelon of the augmented matrix
    let ctx = match &m.fld {
        FieldDesc::Rf(c) => c.clone(),
        _ => unreachable!(),
    };
    let mut aug = Mat::zero(m.rows, m.cols + 1, &m.fld);
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug[(r, c)] = m[(r, c)].clone();
        }
        aug[(r, m.cols)] = b[r].clone();
    }
    let (ech, pivots, _) = rf_echelon(&aug);
    if pivots.contains(&m.cols) {
        return None;
    }
    let mut x: Vec<RatFn> = vec![RatFn::zero(&ctx); m.cols];
    for (ri, &pc) in pivots.iter().enumerate().rev() {
        let row = &ech.rows[ri];
        let mut acc = RatFn::from_poly(row[m.cols].clone());
        for c in pc + 1..m.cols {
            if !row[c].is_zero() && !x[c].is_zero() {
                acc = acc.sub(&RatFn::from_poly(row[c].clone()).mul(&x[c]));
            }
        }
        x[pc] = acc.div(&RatFn::from_poly(row[pc].clone())).unwrap();
    }
    Some(x.into_iter().map(|r| Scalar::Rf(Arc::new(r))).collect())
}

fn rf_det(m: &Mat) -> Scalar {
    let n = m.rows;
    let (ech, pivots, swaps) = rf_echelon(m);
    if pivots.len() < n {
        return m.fld.zero();
    }
    // Bareiss invariant: the final pivot equals the determinant of the
    // denominator-cleared matrix, up to the sign of the row swaps. Divide the
    // clearing factors back out.
    let mut det = RatFn::from_poly(ech.rows[n - 1][pivots[n - 1]].clone());
    let ctx = match &m.fld {
        FieldDesc::Rf(c) => c.clone(),
        _ => unreachable!(),
    };
    for r in 0..n {
        let mut den = MultiPoly::one(&ctx);
        for c in 0..n {
            let rf = entry_rf(&m[(r, c)]);
            if !rf.den.is_one() {
                den = den.mul(&rf.den);
            }
        }
        det = det.div(&RatFn::from_poly(den)).unwrap();
    }
    if swaps % 2 == 1 {
        det = det.neg();
    }
    Scalar::Rf(Arc::new(det))
}

// ---- dense u8 matrices over one finite field ----

#[derive(Clone)]
pub struct FfMat {
    pub fld: Arc<FieldTable>,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u8>,
}

impl PartialEq for FfMat {
    fn eq(&self, other: &FfMat) -> bool {
        Arc::ptr_eq(&self.fld, &other.fld)
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Index<(usize, usize)> for FfMat {
    type Output = u8;
    fn index(&self, (r, c): (usize, usize)) -> &u8 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for FfMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u8 {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for FfMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FfMat {}x{} over {}", self.rows, self.cols, self.fld.name)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl FfMat {
    pub fn zero(fld: Arc<FieldTable>, rows: usize, cols: usize) -> FfMat {
        FfMat { fld, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(fld: Arc<FieldTable>, n: usize) -> FfMat {
        let mut m = Self::zero(fld, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u8] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn matmul(&self, rhs: &FfMat) -> FfMat {
        assert_eq!(self.cols, rhs.rows);
        let f = self.fld.clone();
        let mut out = FfMat::zero(f.clone(), self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == 0 {
                    continue;
                }
                let src = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d = f.add(*d, f.mul(a, s));
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> FfMat {
        let mut out = FfMat::zero(self.fld.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)];
            }
        }
        out
    }

    pub fn apply(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(self.cols, v.len());
        let f = &self.fld;
        let mut out = vec![0u8; self.rows];
        for r in 0..self.rows {
            let row = self.row(r);
            let mut acc = 0u8;
            for (c, &x) in v.iter().enumerate() {
                if x != 0 && row[c] != 0 {
                    acc = f.add(acc, f.mul(row[c], x));
                }
            }
            out[r] = acc;
        }
        out
    }

    /// In-place reduced row echelon; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.fld.clone();
        let mut pivots = Vec::new();
        let mut r0 = 0;
        for col in 0..self.cols {
            let Some(pr) = (r0..self.rows).find(|&r| self[(r, col)] != 0) else {
                continue;
            };
            if pr != r0 {
                for c in 0..self.cols {
                    self.data.swap(pr * self.cols + c, r0 * self.cols + c);
                }
            }
            let inv = f.inv(self[(r0, col)]).unwrap();
            if inv != 1 {
                for c in col..self.cols {
                    self[(r0, c)] = f.mul(self[(r0, c)], inv);
                }
            }
            for r in 0..self.rows {
                if r == r0 {
                    continue;
                }
                let head = self[(r, col)];
                if head == 0 {
                    continue;
                }
                let nh = f.neg(head);
                for c in col..self.cols {
                    let add = f.mul(nh, self[(r0, c)]);
                    if add != 0 {
                        self[(r, c)] = f.add(self[(r, c)], add);
                    }
                }
            }
            pivots.push(col);
            r0 += 1;
            if r0 == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<u8>> {
        let f = self.fld.clone();
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_piv = vec![usize::MAX; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            is_piv[p] = i;
        }
        let mut out = Vec::new();
        for free in 0..self.cols {
            if is_piv[free] != usize::MAX {
                continue;
            }
            let mut v = vec![0u8; self.cols];
            v[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                // rref row i reads v[p] + m[i][free] * v[free] = 0
                v[p] = f.neg(m[(i, free)]);
            }
            out.push(v);
        }
        out
    }

    pub fn solve(&self, b: &[u8]) -> Option<Vec<u8>> {
        assert_eq!(b.len(), self.rows);
        let f = self.fld.clone();
        let mut aug = FfMat::zero(f.clone(), self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.row_mut(r)[..self.cols].copy_from_slice(self.row(r));
            aug[(r, self.cols)] = b[r];
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u8; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug[(i, self.cols)];
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<FfMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = self.fld.clone();
        let mut aug = FfMat::zero(f.clone(), n, 2 * n);
        for r in 0..n {
            aug.row_mut(r)[..n].copy_from_slice(self.row(r));
            aug[(r, n + r)] = 1;
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        let mut inv = FfMat::zero(f, n, n);
        for r in 0..n {
            inv.row_mut(r).copy_from_slice(&aug.row(r)[n..]);
        }
        Some(inv)
    }

    pub fn det(&self) -> u8 {
        assert_eq!(self.rows, self.cols);
        let f = self.fld.clone();
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u8;
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| m[(r, col)] != 0) else {
                return 0;
            };
            if pr != col {
                for c in 0..n {
                    m.data.swap(pr * n + c, col * n + c);
                }
                det = f.neg(det);
            }
            let piv = m[(col, col)];
            det = f.mul(det, piv);
            let inv = f.inv(piv).unwrap();
            for r in col + 1..n {
                let head = f.mul(m[(r, col)], inv);
                if head == 0 {
                    continue;
                }
                let nh = f.neg(head);
                for c in col..n {
                    let add = f.mul(nh, m[(col, c)]);
                    m[(r, c)] = f.add(m[(r, c)], add);
                }
            }
        }
        det
    }

    /// Characteristic polynomial coefficients, degree 0 upward, monic.
    /// Hessenberg reduction followed by the standard recurrence.
    pub fn charpoly(&self) -> Vec<u8> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = self.fld.clone();
        if n == 0 {
            return vec![1];
        }
        let mut h = self.clone();
        // similarity reduction to upper Hessenberg
        for col in 0..n.saturating_sub(2) {
            let Some(pr) = (col + 1..n).find(|&r| h[(r, col)] != 0) else {
                continue;
            };
            if pr != col + 1 {
                for c in 0..n {
                    h.data.swap(pr * n + c, (col + 1) * n + c);
                }
                for r in 0..n {
                    h.data.swap(r * n + pr, r * n + col + 1);
                }
            }
            let inv = f.inv(h[(col + 1, col)]).unwrap();
            for r in col + 2..n {
                let factor = f.mul(h[(r, col)], inv);
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for c in 0..n {
                    let add = f.mul(nf, h[(col + 1, c)]);
                    h[(r, c)] = f.add(h[(r, c)], add);
                }
                // column operation to keep similarity
                for r2 in 0..n {
                    let add = f.mul(factor, h[(r2, r)]);
                    h[(r2, col + 1)] = f.add(h[(r2, col + 1)], add);
                }
            }
        }
        // p_0 = 1; p_k(x) = (x - h[k-1][k-1]) p_{k-1}(x)
        //                   - sum_i (prod of subdiagonal) h[i][k-1] p_i(x)
        let mut polys: Vec<Vec<u8>> = vec![vec![1]];
        for k in 1..=n {
            let mut pk = vec![0u8; k + 1];
            let prev = &polys[k - 1];
            // x * p_{k-1}
            for (i, &c) in prev.iter().enumerate() {
                pk[i + 1] = c;
            }
            // - h[k-1][k-1] * p_{k-1}
            let d = h[(k - 1, k - 1)];
            for (i, &c) in prev.iter().enumerate() {
                pk[i] = f.sub(pk[i], f.mul(d, c));
            }
            let mut beta = 1u8;
            for i in (0..k - 1).rev() {
                beta = f.mul(beta, h[(i + 1, i)]);
                if beta == 0 {
                    break;
                }
                let coeff = f.mul(beta, h[(i, k - 1)]);
                if coeff == 0 {
                    continue;
                }
                for (j, &c) in polys[i].iter().enumerate() {
                    pk[j] = f.sub(pk[j], f.mul(coeff, c));
                }
            }
            polys.push(pk);
        }
        polys.pop().unwrap()
    }
}

// ---- incremental echelon over an exact field ----

/// Growing row-echelon basis with pivot-normalized rows; supports membership
/// tests and exact coordinate extraction against the stored rows. Entries
/// over a finite field are kept as bytes internally.
pub(crate) enum Ech {
    Ff { fld: Arc<FieldTable>, rows: Vec<Vec<u8>>, pivots: Vec<usize> },
    Gen { rows: Vec<Vec<Scalar>>, pivots: Vec<usize> },
}

impl Ech {
    pub fn new(fld: &FieldDesc) -> Ech {
        match fld {
            FieldDesc::Ff(f) => Ech::Ff { fld: f.clone(), rows: Vec::new(), pivots: Vec::new() },
            FieldDesc::Rf(_) => Ech::Gen { rows: Vec::new(), pivots: Vec::new() },
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Ech::Ff { rows, .. } => rows.len(),
            Ech::Gen { rows, .. } => rows.len(),
        }
    }

    /// Insert a vector; true when it enlarges the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        match self {
            Ech::Ff { fld, rows, pivots } => {
                let f = fld.clone();
                let mut w: Vec<u8> = v.iter().map(scalar_ix).collect();
                for (row, &p) in rows.iter().zip(pivots.iter()) {
                    let c = w[p];
                    if c == 0 {
                        continue;
                    }
                    let nc = f.neg(c);
                    for (wi, ri) in w.iter_mut().zip(row) {
                        if *ri != 0 {
                            *wi = f.add(*wi, f.mul(nc, *ri));
                        }
                    }
                }
                let Some(p) = w.iter().position(|&c| c != 0) else { return false };
                let inv = f.inv(w[p]).unwrap();
                if inv != 1 {
                    for c in w.iter_mut() {
                        *c = f.mul(*c, inv);
                    }
                }
                rows.push(w);
                pivots.push(p);
                true
            }
            Ech::Gen { rows, pivots } => {
                let mut w = v.to_vec();
                for (row, &p) in rows.iter().zip(pivots.iter()) {
                    let c = w[p].clone();
                    if c.is_zero() {
                        continue;
                    }
                    for (wi, ri) in w.iter_mut().zip(row) {
                        if !ri.is_zero() {
                            *wi = wi.sub(&c.mul(ri));
                        }
                    }
                }
                let Some(p) = w.iter().position(|c| !c.is_zero()) else { return false };
                let inv = w[p].inv().unwrap();
                if !inv.is_one() {
                    for c in w.iter_mut() {
                        *c = c.mul(&inv);
                    }
                }
                rows.push(w);
                pivots.push(p);
                true
            }
        }
    }

    /// Exact coordinates of v as a combination of the stored rows, in
    /// insertion order; None when v is outside the span.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        match self {
            Ech::Ff { fld, rows, pivots } => {
                let f = fld;
                let mut w: Vec<u8> = v.iter().map(scalar_ix).collect();
                let mut cs = Vec::with_capacity(rows.len());
                for (row, &p) in rows.iter().zip(pivots.iter()) {
                    let c = w[p];
                    cs.push(c);
                    if c == 0 {
                        continue;
                    }
                    let nc = f.neg(c);
                    for (wi, ri) in w.iter_mut().zip(row) {
                        if *ri != 0 {
                            *wi = f.add(*wi, f.mul(nc, *ri));
                        }
                    }
                }
                if w.iter().any(|&c| c != 0) {
                    return None;
                }
                Some(cs.into_iter().map(|ix| Scalar::Ff { fld: fld.clone(), ix }).collect())
            }
            Ech::Gen { rows, pivots } => {
                let mut w = v.to_vec();
                let mut cs = Vec::with_capacity(rows.len());
                for (row, &p) in rows.iter().zip(pivots.iter()) {
                    let c = w[p].clone();
                    if !c.is_zero() {
                        for (wi, ri) in w.iter_mut().zip(row) {
                            if !ri.is_zero() {
                                *wi = wi.sub(&c.mul(ri));
                            }
                        }
                    }
                    cs.push(c);
                }
                if w.iter().any(|c| !c.is_zero()) {
                    return None;
                }
                Some(cs)
            }
        }
    }

    /// Stored row as scalars.
    pub fn row_vec(&self, r: usize) -> Vec<Scalar> {
        match self {
            Ech::Ff { fld, rows, .. } => {
                rows[r].iter().map(|&ix| Scalar::Ff { fld: fld.clone(), ix }).collect()
            }
            Ech::Gen { rows, .. } => rows[r].clone(),
        }
    }
}

fn scalar_ix(s: &Scalar) -> u8 {
    match s {
        Scalar::Ff { ix, .. } => *ix,
        Scalar::Rf(_) => unreachable!("byte echelon fed a rational function"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ff::field;
    use crate::exactfield::poly::RfCtx;

    fn s(fld: &Arc<FieldTable>, ix: u8) -> Scalar {
        Scalar::Ff { fld: fld.clone(), ix }
    }

    #[test]
    fn ff_rref_and_kernel() {
        let f = field(2, 1).unwrap();
        // [[1,1,0],[0,1,1]] over F_2: kernel spanned by (1,1,1)
        let m = FfMat { fld: f.clone(), rows: 2, cols: 3, data: vec![1, 1, 0, 0, 1, 1] };
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![1, 1, 1]]);
    }

    #[test]
    fn ff_inverse_roundtrip() {
        let f = field(2, 4).unwrap();
        let n = 6;
        let mut m = FfMat::zero(f.clone(), n, n);
        // a shifted companion-like matrix that is invertible
        for i in 0..n {
            m[(i, (i + 1) % n)] = 1;
            m[(i, i)] = f.gen();
        }
        let inv = m.inverse().expect("invertible");
        let prod = m.matmul(&inv);
        assert_eq!(prod, FfMat::identity(f, n));
    }

    #[test]
    fn charpoly_of_companion() {
        // companion matrix of x^3 + x + 1 over F_2
        let f = field(2, 1).unwrap();
        let mut m = FfMat::zero(f, 3, 3);
        m[(0, 2)] = 1; // -c0
        m[(1, 0)] = 1;
        m[(1, 2)] = 1; // -c1
        m[(2, 1)] = 1;
        let cp = m.charpoly();
        assert_eq!(cp, vec![1, 1, 0, 1]);
    }

    #[test]
    fn charpoly_det_consistency() {
        let f = field(3, 2).unwrap();
        let mut m = FfMat::zero(f.clone(), 4, 4);
        let mut x = 1u8;
        for r in 0..4 {
            for c in 0..4 {
                x = f.add(f.mul(x, f.gen()), if (r + c) % 3 == 0 { 1 } else { 2 });
                m[(r, c)] = x;
            }
        }
        let cp = m.charpoly();
        // char poly at 0 is det(-M) = (-1)^n det M
        let sign_det = m.det(); // n = 4 even
        assert_eq!(cp[0], sign_det);
        // trace consistency: coefficient of x^3 is -trace
        let mut tr = 0u8;
        for i in 0..4 {
            tr = f.add(tr, m[(i, i)]);
        }
        assert_eq!(cp[3], f.neg(tr));
    }

    #[test]
    fn scalar_mat_over_f16() {
        let f = field(2, 4).unwrap();
        let fd = FieldDesc::Ff(f.clone());
        let g = f.gen();
        let m = Mat::from_rows(
            &fd,
            vec![vec![s(&f, 1), s(&f, g)], vec![s(&f, g), s(&f, 1)]],
        );
        let inv = m.inverse().expect("invertible since det = 1 + g^2 != 0");
        assert!(m.matmul(&inv).is_identity());
    }

    #[test]
    fn rf_elimination_small() {
        let c = RfCtx::new(field(2, 1).unwrap(), vec!["t".into()]);
        let fd = FieldDesc::Rf(c.clone());
        let t = Scalar::Rf(Arc::new(RatFn::var(&c, 0)));
        let one = fd.one();
        let zero = fd.zero();
        // [[t, 1], [t^2, t]] is singular; kernel spanned by (1, t) scaled
        let m = Mat::from_rows(
            &fd,
            vec![vec![t.clone(), one.clone()], vec![t.mul(&t), t.clone()]],
        );
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        // t * v0 + v1 = 0
        assert!(t.mul(&v[0]).add(&v[1]).is_zero());

        // [[t, 1], [1, t]] invertible for t^2 != 1
        let m2 = Mat::from_rows(
            &fd,
            vec![vec![t.clone(), one.clone()], vec![one.clone(), t.clone()]],
        );
        assert_eq!(m2.rank(), 2);
        let inv = m2.inverse().unwrap();
        assert!(m2.matmul(&inv).is_identity());
        let d = m2.det();
        assert_eq!(d, t.mul(&t).sub(&one));
        let solved = m2.solve(&[one.clone(), zero.clone()]).unwrap();
        assert_eq!(m2.apply(&solved), vec![one.clone(), zero.clone()]);
    }

    #[test]
    fn rf_bareiss_matches_ff_after_specialization() {
        // random-ish 4x4 over F_2(t): rank over F_2(t) should match rank of
        // the specialized matrix at a generic point of F_16
        let f2 = field(2, 1).unwrap();
        let f16 = field(2, 4).unwrap();
        let c = RfCtx::new(f2.clone(), vec!["t".into()]);
        let fd = FieldDesc::Rf(c.clone());
        let t = Scalar::Rf(Arc::new(RatFn::var(&c, 0)));
        let one = fd.one();
        let mut rows = Vec::new();
        for r in 0..4u32 {
            let mut row = Vec::new();
            for cc in 0..4u32 {
                let mut e = fd.zero();
                if (r + cc) % 2 == 0 {
                    e = e.add(&t);
                }
                if (r * cc) % 3 == 1 {
                    e = e.add(&one);
                }
                if r == cc {
                    e = e.add(&t.mul(&t));
                }
                row.push(e);
            }
            rows.push(row);
        }
        let m = Mat::from_rows(&fd, rows);
        let rank_rf = m.rank();
        let g = f16.gen();
        let mut spec = FfMat::zero(f16.clone(), 4, 4);
        for r in 0..4 {
            for cc in 0..4 {
                spec[(r, cc)] = m[(r, cc)].specialize(&f16, &[g]).unwrap();
            }
        }
        assert_eq!(rank_rf, spec.rank());
    }
}
