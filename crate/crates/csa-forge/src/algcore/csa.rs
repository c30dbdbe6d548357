//! Central simplicity certification.
//!
//! The decision procedure is exact in every path:
//!
//! * dimension at most 16: the bimodule map A (x) A^op -> End(A) is written
//!   out and its rank computed; full rank is equivalent to A being central
//!   simple over its scalar field.
//! * larger dimensions over a finite field: the center is computed exactly,
//!   then irreducibility of A as a module over A (x) A^op is proven by the
//!   nullity-one spinning criterion (random element, eigenvalue of geometric
//!   multiplicity one, spin the null vector on both sides). A full spin in
//!   the module and in its transpose is a proof of irreducibility; a proper
//!   spin exhibits a two-sided ideal.
//! * rational-function fields: the structure constants are specialized at a
//!   point of a finite extension where all denominators survive. A central
//!   simple specialization forces the bimodule determinant, a fixed rational
//!   function, to be nonzero at that point, hence nonzero; so the algebra is
//!   central simple over the function field. A failed specialization proves
//!   nothing and another point is tried.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algcore::{unit_vec, Algebra};
use crate::exactfield::ff::{field, FieldTable};
use crate::exactfield::scalar::{FieldDesc, Scalar};
use crate::linalg::{FfMat, Mat};

#[derive(Debug, Clone)]
pub enum CsaVerdict {
    CentralSimple,
    /// A central element outside the scalars, in basis coordinates.
    NotCentral { witness: Vec<Scalar> },
    /// A proper nonzero two-sided ideal of this dimension was found.
    NotSimple { ideal_dim: usize },
    /// The bimodule map has this corank, so the algebra is not central
    /// simple; the center is trivial when this verdict is reached.
    BimoduleDeficient { corank: usize },
    Indeterminate { reason: String },
}

impl CsaVerdict {
    pub fn is_csa(&self) -> bool {
        matches!(self, CsaVerdict::CentralSimple)
    }
}

#[derive(Debug, Clone)]
pub enum CsaMethod {
    BimoduleRank,
    MeatAxe { tries: u32 },
    /// Finite verdict transported through a specialization point.
    Specialized { field: String, point: Vec<String>, tries: u32 },
}

#[derive(Debug, Clone)]
pub struct CsaReport {
    pub algebra: String,
    pub dim: usize,
    pub field: String,
    pub method: CsaMethod,
    pub verdict: CsaVerdict,
}

impl fmt::Display for CsaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match &self.method {
            CsaMethod::BimoduleRank => "bimodule rank".to_string(),
            CsaMethod::MeatAxe { tries } => format!("spinning after {tries} tries"),
            CsaMethod::Specialized { field, point, tries } => {
                format!("specialization at ({}) in {field}, {tries} tries", point.join(", "))
            }
        };
        let v = match &self.verdict {
            CsaVerdict::CentralSimple => "central simple".to_string(),
            CsaVerdict::NotCentral { .. } => "center larger than the scalars".to_string(),
            CsaVerdict::NotSimple { ideal_dim } => {
                format!("two-sided ideal of dimension {ideal_dim}")
            }
            CsaVerdict::BimoduleDeficient { corank } => {
                format!("bimodule map has corank {corank}")
            }
            CsaVerdict::Indeterminate { reason } => format!("indeterminate: {reason}"),
        };
        write!(f, "{} (dim {} over {}): {v} [{m}]", self.algebra, self.dim, self.field, v = v)
    }
}

// ---- byte-compiled algebra over one finite field ----

pub(crate) struct U8Algebra {
    pub fld: Arc<FieldTable>,
    pub dim: usize,
    /// Row-major basis products, entries (index, coefficient).
    pub table: Vec<Vec<(u32, u8)>>,
    pub one: Vec<u8>,
    pub gens: Vec<usize>,
}

impl U8Algebra {
    pub fn compile(a: &Algebra) -> Option<U8Algebra> {
        let fld = match &a.fld {
            FieldDesc::Ff(f) => f.clone(),
            FieldDesc::Rf(_) => return None,
        };
        let mut table = Vec::with_capacity(a.dim * a.dim);
        for i in 0..a.dim {
            for j in 0..a.dim {
                table.push(
                    a.basis_product(i, j)
                        .iter()
                        .map(|(k, c)| match c {
                            Scalar::Ff { ix, .. } => (*k as u32, *ix),
                            Scalar::Rf(_) => unreachable!(),
                        })
                        .collect(),
                );
            }
        }
        let one = a
            .one
            .iter()
            .map(|c| match c {
                Scalar::Ff { ix, .. } => *ix,
                Scalar::Rf(_) => unreachable!(),
            })
            .collect();
        Some(U8Algebra { fld, dim: a.dim, table, one, gens: effective_gens(a) })
    }

    /// Evaluate every structure constant at a point of a finite field; None
    /// when any denominator vanishes or no embedding exists.
    pub fn specialize(a: &Algebra, target: &Arc<FieldTable>, point: &[u8]) -> Option<U8Algebra> {
        let mut table = Vec::with_capacity(a.dim * a.dim);
        for i in 0..a.dim {
            for j in 0..a.dim {
                let mut row = Vec::new();
                for (k, c) in a.basis_product(i, j) {
                    let v = c.specialize(target, point)?;
                    if v != 0 {
                        row.push((*k as u32, v));
                    }
                }
                table.push(row);
            }
        }
        let mut one = Vec::with_capacity(a.dim);
        for c in &a.one {
            one.push(c.specialize(target, point)?);
        }
        Some(U8Algebra { fld: target.clone(), dim: a.dim, table, one, gens: effective_gens(a) })
    }

    pub fn left_mult(&self, x: &[u8]) -> FfMat {
        let f = &self.fld;
        let mut m = FfMat::zero(self.fld.clone(), self.dim, self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for j in 0..self.dim {
                for &(k, t) in &self.table[i * self.dim + j] {
                    let k = k as usize;
                    m[(k, j)] = f.add(m[(k, j)], f.mul(xi, t));
                }
            }
        }
        m
    }

    pub fn right_mult(&self, x: &[u8]) -> FfMat {
        let f = &self.fld;
        let mut m = FfMat::zero(self.fld.clone(), self.dim, self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for j in 0..self.dim {
                for &(k, t) in &self.table[j * self.dim + i] {
                    let k = k as usize;
                    m[(k, j)] = f.add(m[(k, j)], f.mul(xi, t));
                }
            }
        }
        m
    }

    fn basis_left_mult(&self, g: usize) -> FfMat {
        let mut x = vec![0u8; self.dim];
        x[g] = 1;
        self.left_mult(&x)
    }

    fn basis_right_mult(&self, g: usize) -> FfMat {
        let mut x = vec![0u8; self.dim];
        x[g] = 1;
        self.right_mult(&x)
    }
}

fn effective_gens(a: &Algebra) -> Vec<usize> {
    if a.gen_indices.is_empty() {
        (0..a.dim).collect()
    } else {
        a.gen_indices.clone()
    }
}

// ---- center ----

/// Basis of the center, as rows.
pub(crate) fn center_basis_u8(a: &U8Algebra) -> FfMat {
    let n = a.dim;
    let mut basis = FfMat::identity(a.fld.clone(), n);
    for &g in &a.gens {
        if basis.rows == 0 {
            break;
        }
        let l = a.basis_left_mult(g);
        let r = a.basis_right_mult(g);
        // constraint matrix C z = 0 where C = L_g - R_g
        let mut c = l;
        for (ci, ri) in c.data.iter_mut().zip(&r.data) {
            *ci = a.fld.sub(*ci, *ri);
        }
        // restrict to current span: kernel of C * basis^T in coefficient space
        let m = c.matmul(&basis.transpose());
        let coeffs = m.kernel_basis();
        let mut next = FfMat::zero(a.fld.clone(), coeffs.len(), n);
        for (ri, co) in coeffs.iter().enumerate() {
            for (bi, &w) in co.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                for col in 0..n {
                    let add = a.fld.mul(w, basis[(bi, col)]);
                    next[(ri, col)] = a.fld.add(next[(ri, col)], add);
                }
            }
        }
        basis = next;
    }
    basis
}

/// A center element outside the span of the unit, if the center is larger.
fn noncentral_witness_u8(a: &U8Algebra, center: &FfMat) -> Option<Vec<u8>> {
    let n = a.dim;
    for r in 0..center.rows {
        let mut m = FfMat::zero(a.fld.clone(), 2, n);
        m.row_mut(0).copy_from_slice(&a.one);
        m.row_mut(1).copy_from_slice(center.row(r));
        if m.rank() == 2 {
            return Some(center.row(r).to_vec());
        }
    }
    None
}

// ---- irreducibility by spinning ----

struct Echelon {
    fld: Arc<FieldTable>,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(fld: Arc<FieldTable>) -> Echelon {
        Echelon { fld, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Reduce v against the stored rows; if independent, store and return
    /// the reduced vector.
    fn insert(&mut self, mut v: Vec<u8>) -> Option<Vec<u8>> {
        let f = &self.fld;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            for (vi, ri) in v.iter_mut().zip(row) {
                if *ri != 0 {
                    *vi = f.add(*vi, f.mul(nc, *ri));
                }
            }
        }
        let p = v.iter().position(|&c| c != 0)?;
        let inv = f.inv(v[p]).unwrap();
        if inv != 1 {
            for c in v.iter_mut() {
                *c = f.mul(*c, inv);
            }
        }
        self.rows.push(v.clone());
        self.pivots.push(p);
        Some(v)
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn into_mat(self, cols: usize) -> FfMat {
        let mut m = FfMat::zero(self.fld.clone(), self.rows.len(), cols);
        for (i, r) in self.rows.iter().enumerate() {
            m.row_mut(i).copy_from_slice(r);
        }
        m
    }
}

/// Closure of v under the given actions; either the full space or the basis
/// of a proper invariant subspace.
fn spin(fld: &Arc<FieldTable>, n: usize, v: Vec<u8>, actions: &[FfMat]) -> Result<(), FfMat> {
    let mut ech = Echelon::new(fld.clone());
    let mut queue = Vec::new();
    if let Some(red) = ech.insert(v) {
        queue.push(red);
    }
    while let Some(w) = queue.pop() {
        for act in actions {
            if ech.rank() == n {
                return Ok(());
            }
            let u = act.apply(&w);
            if let Some(red) = ech.insert(u) {
                queue.push(red);
            }
        }
    }
    if ech.rank() == n {
        Ok(())
    } else {
        Err(ech.into_mat(n))
    }
}

enum NortonOutcome {
    Irreducible { tries: u32 },
    Submodule { basis: FfMat },
    GaveUp { tries: u32 },
}

/// Irreducibility of A as a module over A (x) A^op.
fn norton_u8(a: &U8Algebra, seed: u64, budget: u32) -> NortonOutcome {
    let n = a.dim;
    let f = &a.fld;
    let q = f.q;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // module generators: left and right multiplication by algebra generators
    let mut actions = Vec::new();
    for &g in &a.gens {
        actions.push(a.basis_left_mult(g));
        actions.push(a.basis_right_mult(g));
    }
    let dual_actions: Vec<FfMat> = actions.iter().map(|m| m.transpose()).collect();
    for t in 1..=budget {
        // random envelope element: a short sum of L_x R_y
        let mut theta = FfMat::zero(f.clone(), n, n);
        for _ in 0..3 {
            let x: Vec<u8> = (0..n).map(|_| rng.gen_range(0..q) as u8).collect();
            let y: Vec<u8> = (0..n).map(|_| rng.gen_range(0..q) as u8).collect();
            let prod = a.left_mult(&x).matmul(&a.right_mult(&y));
            for (ti, pi) in theta.data.iter_mut().zip(&prod.data) {
                *ti = f.add(*ti, *pi);
            }
        }
        let cp = theta.charpoly();
        for lam in 0..q as u8 {
            // Horner evaluation of the characteristic polynomial
            let mut val = 0u8;
            for &c in cp.iter().rev() {
                val = f.add(f.mul(val, lam), c);
            }
            if val != 0 {
                continue;
            }
            let mut shifted = theta.clone();
            for i in 0..n {
                shifted[(i, i)] = f.sub(shifted[(i, i)], lam);
            }
            let ker = shifted.kernel_basis();
            if ker.len() != 1 {
                continue;
            }
            match spin(f, n, ker[0].clone(), &actions) {
                Err(basis) => return NortonOutcome::Submodule { basis },
                Ok(()) => {}
            }
            let dual_ker = shifted.transpose().kernel_basis();
            debug_assert_eq!(dual_ker.len(), 1);
            match spin(f, n, dual_ker[0].clone(), &dual_actions) {
                Err(dual_basis) => {
                    // the annihilator of a dual submodule is a submodule
                    let ann = dual_basis.kernel_basis();
                    let mut basis = FfMat::zero(f.clone(), ann.len(), n);
                    for (i, v) in ann.iter().enumerate() {
                        basis.row_mut(i).copy_from_slice(v);
                    }
                    return NortonOutcome::Submodule { basis };
                }
                Ok(()) => return NortonOutcome::Irreducible { tries: t },
            }
        }
    }
    NortonOutcome::GaveUp { tries: budget }
}

// ---- bimodule rank ----

/// The matrix of A (x) A^op -> End(A) in basis coordinates; n^2 x n^2.
fn bimodule_matrix_u8(a: &U8Algebra) -> FfMat {
    let n = a.dim;
    let f = &a.fld;
    let mut m = FfMat::zero(f.clone(), n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let col = i * n + j;
            // column: the endomorphism z -> b_i z b_j
            for k in 0..n {
                // b_i b_k first
                for &(l, c1) in &a.table[i * n + k] {
                    for &(w, c2) in &a.table[l as usize * n + j] {
                        let row = w as usize * n + k;
                        m[(row, col)] = f.add(m[(row, col)], f.mul(c1, c2));
                    }
                }
            }
        }
    }
    m
}

fn bimodule_matrix_exact(a: &Algebra) -> Mat {
    let n = a.dim;
    let fld = &a.fld;
    let mut m = Mat::zero(n * n, n * n, fld);
    for i in 0..n {
        for j in 0..n {
            let col = i * n + j;
            let bi = unit_vec(fld, n, i);
            let bj = unit_vec(fld, n, j);
            for k in 0..n {
                let bk = unit_vec(fld, n, k);
                let prod = a.mul_vec(&a.mul_vec(&bi, &bk), &bj);
                for (w, c) in prod.iter().enumerate() {
                    if !c.is_zero() {
                        m[(w * n + k, col)] = c.clone();
                    }
                }
            }
        }
    }
    m
}

// ---- the decision procedure ----

const MEATAXE_BUDGET: u32 = 48;
const SMALL_DIM: usize = 16;

fn u8_to_scalars(f: &Arc<FieldTable>, v: &[u8]) -> Vec<Scalar> {
    v.iter().map(|&ix| Scalar::Ff { fld: f.clone(), ix }).collect()
}

/// Finite-field verdict; exact in both directions.
fn finite_verdict(a: &U8Algebra, seed: u64) -> (CsaVerdict, CsaMethod) {
    let n = a.dim;
    if n <= SMALL_DIM {
        let m = bimodule_matrix_u8(a);
        let rank = m.rank();
        let verdict = if rank == n * n {
            CsaVerdict::CentralSimple
        } else {
            // distinguish a big center from a hidden ideal for the report
            let center = center_basis_u8(a);
            match noncentral_witness_u8(a, &center) {
                Some(w) => CsaVerdict::NotCentral { witness: u8_to_scalars(&a.fld, &w) },
                None => CsaVerdict::BimoduleDeficient { corank: n * n - rank },
            }
        };
        return (verdict, CsaMethod::BimoduleRank);
    }
    let center = center_basis_u8(a);
    if center.rows != 1 {
        if let Some(w) = noncentral_witness_u8(a, &center) {
            return (
                CsaVerdict::NotCentral { witness: u8_to_scalars(&a.fld, &w) },
                CsaMethod::MeatAxe { tries: 0 },
            );
        }
        // center of dimension zero cannot happen in a unital algebra
        unreachable!("unit is always central");
    }
    match norton_u8(a, seed, MEATAXE_BUDGET) {
        NortonOutcome::Irreducible { tries } => {
            (CsaVerdict::CentralSimple, CsaMethod::MeatAxe { tries })
        }
        NortonOutcome::Submodule { basis } => (
            CsaVerdict::NotSimple { ideal_dim: basis.rows },
            CsaMethod::MeatAxe { tries: 0 },
        ),
        NortonOutcome::GaveUp { tries } => (
            CsaVerdict::Indeterminate {
                reason: format!("no nullity-one eigenvalue in {tries} random envelope elements"),
            },
            CsaMethod::MeatAxe { tries },
        ),
    }
}

/// Specialization targets for a rational-function field of this
/// characteristic, larger fields first.
pub(crate) fn specialization_fields(p: u32, base_k: u32) -> Vec<Arc<FieldTable>> {
    let ks: &[u32] = match p {
        2 => &[6, 4, 5, 3, 2],
        3 => &[4, 3, 2],
        5 => &[2],
        _ => &[],
    };
    ks.iter().filter(|&&k| k % base_k == 0).filter_map(|&k| field(p, k).ok()).collect()
}

pub fn csa_test(a: &Algebra) -> CsaReport {
    csa_test_seeded(a, 0xC5AF)
}

pub fn csa_test_seeded(a: &Algebra, seed: u64) -> CsaReport {
    let (verdict, method) = match &a.fld {
        FieldDesc::Ff(_) => {
            let u8a = U8Algebra::compile(a).unwrap();
            finite_verdict(&u8a, seed)
        }
        FieldDesc::Rf(ctx) => {
            let mut outcome = None;
            let mut tries = 0u32;
            'fields: for target in specialization_fields(ctx.base.p, ctx.base.k) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (target.q as u64) << 32);
                for _ in 0..8 {
                    let point: Vec<u8> =
                        (0..ctx.vars.len()).map(|_| rng.gen_range(1..target.q) as u8).collect();
                    tries += 1;
                    let Some(u8a) = U8Algebra::specialize(a, &target, &point) else {
                        continue;
                    };
                    let (v, _) = finite_verdict(&u8a, seed.wrapping_add(tries as u64));
                    if v.is_csa() {
                        outcome = Some((
                            CsaVerdict::CentralSimple,
                            CsaMethod::Specialized {
                                field: target.name.clone(),
                                point: point
                                    .iter()
                                    .map(|&ix| crate::exactfield::grammar::print_ff_elem(
                                        &target, ix,
                                    ))
                                    .collect(),
                                tries,
                            },
                        ));
                        break 'fields;
                    }
                }
            }
            match outcome {
                Some(o) => o,
                None if a.dim <= 8 => {
                    // exact fallback: small enough for fraction-free rank
                    let m = bimodule_matrix_exact(a);
                    let rank = m.rank();
                    let n = a.dim;
                    let v = if rank == n * n {
                        CsaVerdict::CentralSimple
                    } else {
                        CsaVerdict::BimoduleDeficient { corank: n * n - rank }
                    };
                    (v, CsaMethod::BimoduleRank)
                }
                None => (
                    CsaVerdict::Indeterminate {
                        reason: format!(
                            "no specialization of {} points certified the algebra",
                            tries
                        ),
                    },
                    CsaMethod::Specialized { field: "none".into(), point: vec![], tries },
                ),
            }
        }
    };
    CsaReport {
        algebra: a.name.clone(),
        dim: a.dim,
        field: a.fld.name(),
        method,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::tests::m2_algebra;
    use crate::algcore::{zero_vec, SparseVec};
    use crate::exactfield::rf_field;

    #[test]
    fn m2_is_central_simple() {
        for fld in [
            FieldDesc::Ff(field(2, 1).unwrap()),
            FieldDesc::Ff(field(2, 3).unwrap()),
            FieldDesc::Ff(field(3, 2).unwrap()),
        ] {
            let a = m2_algebra(&fld);
            let rep = csa_test(&a);
            assert!(rep.verdict.is_csa(), "{rep}");
        }
    }

    #[test]
    fn commutative_extension_is_not_central() {
        // F_4 as a 2-dimensional algebra over F_2: basis 1, g with g^2 = g + 1
        let fld = FieldDesc::Ff(field(2, 1).unwrap());
        let one = fld.one();
        let table: Vec<SparseVec> = vec![
            vec![(0, one.clone())],                      // 1*1
            vec![(1, one.clone())],                      // 1*g
            vec![(1, one.clone())],                      // g*1
            vec![(0, one.clone()), (1, one.clone())],    // g*g = 1 + g
        ];
        let mut unit = zero_vec(&fld, 2);
        unit[0] = one;
        let a = Algebra::build_sc_algebra(
            "F4/F2",
            &fld,
            vec!["1".into(), "g".into()],
            table,
            unit,
            vec![1],
        )
        .unwrap();
        let rep = csa_test(&a);
        match rep.verdict {
            CsaVerdict::NotCentral { ref witness } => {
                assert!(!witness[1].is_zero(), "witness must involve g");
            }
            ref other => panic!("expected NotCentral, got {other:?}"),
        }
    }

    #[test]
    fn upper_triangular_is_deficient() {
        // basis E11, E12, E22 of upper triangular 2x2 matrices: central
        // (center is the scalars) but with the ideal spanned by E12
        let fld = FieldDesc::Ff(field(2, 1).unwrap());
        let one = fld.one();
        let e = |k: usize| -> SparseVec { vec![(k, one.clone())] };
        let z = SparseVec::new();
        let table: Vec<SparseVec> = vec![
            // rows: E11 * (E11, E12, E22), E12 * ..., E22 * ...
            e(0), e(1), z.clone(),
            z.clone(), z.clone(), e(1),
            z.clone(), z.clone(), e(2),
        ];
        let mut unit = zero_vec(&fld, 3);
        unit[0] = one.clone();
        unit[2] = one;
        let a = Algebra::build_sc_algebra(
            "T2",
            &fld,
            vec!["E11".into(), "E12".into(), "E22".into()],
            table,
            unit,
            vec![0, 1, 2],
        )
        .unwrap();
        let rep = csa_test(&a);
        assert!(matches!(rep.verdict, CsaVerdict::BimoduleDeficient { .. }), "{rep}");
    }

    #[test]
    fn meataxe_on_m2_tensor_m2() {
        // dim 16 forces the small path; tensor once more for dim 64 spinning
        let fld = FieldDesc::Ff(field(2, 2).unwrap());
        let m2 = m2_algebra(&fld);
        let m4 = Algebra::tensor("M2xM2", &m2, &m2);
        let rep = csa_test(&m4);
        assert!(rep.verdict.is_csa(), "{rep}");
        let m8 = Algebra::tensor("M2xM2xM2", &m4, &m2);
        assert_eq!(m8.dim, 64);
        let rep = csa_test(&m8);
        assert!(rep.verdict.is_csa(), "{rep}");
        assert!(matches!(rep.method, CsaMethod::MeatAxe { .. }));
    }

    #[test]
    fn meataxe_finds_ideal_in_direct_sum() {
        // M2 + M2 as a direct sum: simple summands, so not simple; dim 8
        // keeps the small path off when we tensor with M2 to reach 32...
        // instead build the 8-dimensional sum and tensor with M2 for dim 32
        let fld = FieldDesc::Ff(field(2, 1).unwrap());
        let m2 = m2_algebra(&fld);
        let one = fld.one();
        let dim = 8;
        let mut table: Vec<SparseVec> = vec![Vec::new(); dim * dim];
        for i in 0..4 {
            for j in 0..4 {
                let p = m2.basis_product(i, j).clone();
                table[i * dim + j] = p.clone();
                table[(i + 4) * dim + (j + 4)] =
                    p.iter().map(|(k, c)| (k + 4, c.clone())).collect();
            }
        }
        let mut unit = zero_vec(&fld, dim);
        unit[0] = one.clone();
        unit[3] = one.clone();
        unit[4] = one.clone();
        unit[7] = one;
        let labels = (0..8).map(|i| format!("b{i}")).collect();
        let sum =
            Algebra::build_sc_algebra("M2+M2", &fld, labels, table, unit, (0..8).collect())
                .unwrap();
        let big = Algebra::tensor("(M2+M2)xM2", &sum, &m2);
        assert_eq!(big.dim, 32);
        let rep = csa_test(&big);
        match rep.verdict {
            CsaVerdict::NotSimple { ideal_dim } => {
                assert!(ideal_dim > 0 && ideal_dim < 32);
            }
            CsaVerdict::NotCentral { .. } => {
                // the center of a direct sum is 2-dimensional, also a valid
                // detection for this input
            }
            ref other => panic!("expected a negative verdict, got {other:?}"),
        }
    }

    #[test]
    fn rf_quaternion_like_by_specialization() {
        // M2 over F_2(t) twisted trivially: still M2, certified through a
        // specialization
        let fld = rf_field(&field(2, 1).unwrap(), &["t"]);
        let a = m2_algebra(&fld);
        let rep = csa_test(&a);
        assert!(rep.verdict.is_csa(), "{rep}");
    }
}
