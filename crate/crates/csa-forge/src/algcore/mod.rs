//! Associative algebras as structure-constant tables.
//!
//! An [`Algebra`] stores the products of basis pairs as sparse coordinate
//! vectors over an exact scalar field, together with the coordinates of the
//! unit and a set of basis indices known to generate the algebra. The raw
//! builder checks the unit law and full associativity and names the first
//! offending triple; the tensor construction inherits validity from its
//! factors instead of re-checking quadratically many triples.

pub mod csa;
pub mod split;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::exactfield::ff::FieldTable;
use crate::exactfield::scalar::{FieldDesc, Scalar};
use crate::linalg::Mat;

pub type SparseVec = Vec<(usize, Scalar)>;

#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraError {
    WrongTableLength { expected: usize, got: usize },
    WrongVectorLength { what: &'static str, expected: usize, got: usize },
    UnitFails { basis: String, side: &'static str },
    NonAssociative { i: String, j: String, k: String },
    ZeroUnit,
    BadIndex { row: usize, col: usize, index: usize },
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::WrongTableLength { expected, got } => {
                write!(f, "structure table has {got} entries, expected {expected}")
            }
            AlgebraError::WrongVectorLength { what, expected, got } => {
                write!(f, "{what} has length {got}, expected {expected}")
            }
            AlgebraError::UnitFails { basis, side } => {
                write!(f, "unit fails on the {side} of basis element {basis}")
            }
            AlgebraError::NonAssociative { i, j, k } => {
                write!(f, "associativity fails on the triple ({i}, {j}, {k})")
            }
            AlgebraError::ZeroUnit => write!(f, "unit vector is zero"),
            AlgebraError::BadIndex { row, col, index } => {
                write!(f, "table entry ({row}, {col}) references basis index {index}")
            }
        }
    }
}

impl std::error::Error for AlgebraError {}

#[derive(Clone)]
pub struct Algebra {
    pub name: String,
    pub fld: FieldDesc,
    pub dim: usize,
    pub labels: Vec<String>,
    /// Coordinates of the multiplicative unit.
    pub one: Vec<Scalar>,
    /// Basis indices that generate the algebra as a unital algebra.
    pub gen_indices: Vec<usize>,
    /// Row-major: table[i * dim + j] is the product b_i b_j.
    table: Vec<SparseVec>,
    /// Byte-compiled copy of the table over a finite scalar field, built on
    /// first use; multiplication routes through it when present.
    packed: OnceLock<Option<PackedTable>>,
}

#[derive(Clone)]
pub(crate) struct PackedTable {
    pub fld: Arc<FieldTable>,
    pub rows: Vec<Vec<(u32, u8)>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra {} (dim {} over {})", self.name, self.dim, self.fld.name())
    }
}

// ---- coordinate vector helpers ----

pub fn zero_vec(fld: &FieldDesc, n: usize) -> Vec<Scalar> {
    vec![fld.zero(); n]
}

pub fn unit_vec(fld: &FieldDesc, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(fld, n);
    v[i] = fld.one();
    v
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn scale_vec(c: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| x.mul(c)).collect()
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn to_sparse(a: &[Scalar]) -> SparseVec {
    a.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense(fld: &FieldDesc, n: usize, s: &[(usize, Scalar)]) -> Vec<Scalar> {
    let mut v = zero_vec(fld, n);
    for (i, c) in s {
        v[*i] = v[*i].add(c);
    }
    v
}

impl Algebra {
    /// Build from raw structure constants, checking the unit law and full
    /// associativity; the first offending triple is named in the error.
    pub fn build_sc_algebra(
        name: &str,
        fld: &FieldDesc,
        labels: Vec<String>,
        table: Vec<SparseVec>,
        one: Vec<Scalar>,
        gen_indices: Vec<usize>,
    ) -> Result<Algebra, AlgebraError> {
        let dim = labels.len();
        if table.len() != dim * dim {
            return Err(AlgebraError::WrongTableLength { expected: dim * dim, got: table.len() });
        }
        if one.len() != dim {
            return Err(AlgebraError::WrongVectorLength {
                what: "unit vector",
                expected: dim,
                got: one.len(),
            });
        }
        if is_zero_vec(&one) {
            return Err(AlgebraError::ZeroUnit);
        }
        for (pos, entry) in table.iter().enumerate() {
            if let Some(&(ix, _)) = entry.iter().find(|&&(ix, _)| ix >= dim) {
                return Err(AlgebraError::BadIndex { row: pos / dim, col: pos % dim, index: ix });
            }
        }
        let a = Algebra {
            name: name.to_string(),
            fld: fld.clone(),
            dim,
            labels,
            one,
            gen_indices,
            table,
            packed: OnceLock::new(),
        };
        for i in 0..dim {
            let bi = unit_vec(fld, dim, i);
            if a.mul_vec(&a.one, &bi) != bi {
                return Err(AlgebraError::UnitFails { basis: a.labels[i].clone(), side: "left" });
            }
            if a.mul_vec(&bi, &a.one) != bi {
                return Err(AlgebraError::UnitFails { basis: a.labels[i].clone(), side: "right" });
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let ij = to_dense(fld, dim, a.basis_product(i, j));
                for k in 0..dim {
                    let jk = to_dense(fld, dim, a.basis_product(j, k));
                    let lhs = a.mul_vec(&ij, &unit_vec(fld, dim, k));
                    let rhs = a.mul_vec(&unit_vec(fld, dim, i), &jk);
                    if lhs != rhs {
                        return Err(AlgebraError::NonAssociative {
                            i: a.labels[i].clone(),
                            j: a.labels[j].clone(),
                            k: a.labels[k].clone(),
                        });
                    }
                }
            }
        }
        Ok(a)
    }

    /// Construct without any checking; for constructions whose validity is
    /// an algebraic consequence of how the table is produced.
    pub(crate) fn from_parts(
        name: &str,
        fld: &FieldDesc,
        labels: Vec<String>,
        table: Vec<SparseVec>,
        one: Vec<Scalar>,
        gen_indices: Vec<usize>,
    ) -> Algebra {
        let dim = labels.len();
        debug_assert_eq!(table.len(), dim * dim);
        debug_assert_eq!(one.len(), dim);
        Algebra {
            name: name.to_string(),
            fld: fld.clone(),
            dim,
            labels,
            one,
            gen_indices,
            table,
            packed: OnceLock::new(),
        }
    }

    pub(crate) fn packed(&self) -> Option<&PackedTable> {
        self.packed
            .get_or_init(|| {
                let FieldDesc::Ff(f) = &self.fld else { return None };
                let rows = self
                    .table
                    .iter()
                    .map(|entry| {
                        entry
                            .iter()
                            .map(|(k, c)| match c {
                                Scalar::Ff { ix, .. } => (*k as u32, *ix),
                                Scalar::Rf(_) => unreachable!("finite algebra with Rf entry"),
                            })
                            .collect()
                    })
                    .collect();
                Some(PackedTable { fld: f.clone(), rows })
            })
            .as_ref()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim + j]
    }

    pub fn one_index(&self) -> Option<usize> {
        let mut found = None;
        for (i, c) in self.one.iter().enumerate() {
            if c.is_one() && found.is_none() {
                found = Some(i);
            } else if !c.is_zero() {
                return None;
            }
        }
        found
    }

    pub fn mul_vec(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        if let Some(pt) = self.packed() {
            let f = pt.fld.clone();
            let to_ix = |s: &Scalar| match s {
                Scalar::Ff { ix, .. } => *ix,
                Scalar::Rf(_) => unreachable!("finite algebra with Rf coordinate"),
            };
            let xb: Vec<u8> = x.iter().map(to_ix).collect();
            let yb: Vec<u8> = y.iter().map(to_ix).collect();
            let mut out = vec![0u8; self.dim];
            for (i, &xi) in xb.iter().enumerate() {
                if xi == 0 {
                    continue;
                }
                let base = i * self.dim;
                for (j, &yj) in yb.iter().enumerate() {
                    if yj == 0 {
                        continue;
                    }
                    let c = f.mul(xi, yj);
                    for &(k, t) in &pt.rows[base + j] {
                        let k = k as usize;
                        out[k] = f.add(out[k], f.mul(c, t));
                    }
                }
            }
            return out.into_iter().map(|ix| Scalar::Ff { fld: f.clone(), ix }).collect();
        }
        let mut out = zero_vec(&self.fld, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.mul(yj);
                for (k, t) in self.basis_product(i, j) {
                    out[*k] = out[*k].add(&c.mul(t));
                }
            }
        }
        out
    }

    /// Product of several elements, left to right.
    pub fn mul_chain(&self, xs: &[&[Scalar]]) -> Vec<Scalar> {
        let mut acc = xs[0].to_vec();
        for x in &xs[1..] {
            acc = self.mul_vec(&acc, x);
        }
        acc
    }

    pub fn pow_vec(&self, x: &[Scalar], e: u64) -> Vec<Scalar> {
        let mut acc = self.one.clone();
        let mut base = x.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_vec(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_vec(&base, &base);
            }
        }
        acc
    }

    /// Matrix of left multiplication by x on the basis.
    pub fn left_mult_matrix(&self, x: &[Scalar]) -> Mat {
        let mut m = Mat::zero(self.dim, self.dim, &self.fld);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for (k, t) in self.basis_product(i, j) {
                    m[(*k, j)] = m[(*k, j)].add(&xi.mul(t));
                }
            }
        }
        m
    }

    /// Matrix of right multiplication by x on the basis.
    pub fn right_mult_matrix(&self, x: &[Scalar]) -> Mat {
        let mut m = Mat::zero(self.dim, self.dim, &self.fld);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for (k, t) in self.basis_product(j, i) {
                    m[(*k, j)] = m[(*k, j)].add(&xi.mul(t));
                }
            }
        }
        m
    }

    /// Kronecker tensor product. Basis pairs are indexed a-major: the pair
    /// (i, j) becomes i * dim_b + j. Validity follows from the factors'.
    pub fn tensor(name: &str, a: &Algebra, b: &Algebra) -> Algebra {
        assert!(a.fld == b.fld, "tensor factors over different fields");
        let dim = a.dim * b.dim;
        let fld = &a.fld;
        let mut labels = Vec::with_capacity(dim);
        for la in &a.labels {
            for lb in &b.labels {
                labels.push(match (la.as_str(), lb.as_str()) {
                    ("1", "1") => "1".to_string(),
                    (la, "1") => la.to_string(),
                    ("1", lb) => lb.to_string(),
                    (la, lb) => format!("{la}.{lb}"),
                });
            }
        }
        let mut table = vec![Vec::new(); dim * dim];
        for i1 in 0..a.dim {
            for j1 in 0..a.dim {
                let pa = a.basis_product(i1, j1);
                for i2 in 0..b.dim {
                    for j2 in 0..b.dim {
                        let pb = b.basis_product(i2, j2);
                        let mut entry = Vec::with_capacity(pa.len() * pb.len());
                        for (k1, c1) in pa {
                            for (k2, c2) in pb {
                                entry.push((k1 * b.dim + k2, c1.mul(c2)));
                            }
                        }
                        table[(i1 * b.dim + i2) * dim + (j1 * b.dim + j2)] = entry;
                    }
                }
            }
        }
        let mut one = zero_vec(fld, dim);
        for (i, ci) in a.one.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in b.one.iter().enumerate() {
                if !cj.is_zero() {
                    one[i * b.dim + j] = ci.mul(cj);
                }
            }
        }
        // generator embeddings need the factor units to be basis elements
        let gen_indices = match (a.one_index(), b.one_index()) {
            (Some(ia), Some(ib)) => a
                .gen_indices
                .iter()
                .map(|&g| g * b.dim + ib)
                .chain(b.gen_indices.iter().map(|&h| ia * b.dim + h))
                .collect(),
            _ => (0..dim).collect(),
        };
        Algebra::from_parts(name, fld, labels, table, one, gen_indices)
    }

    /// Index of the basis label, when present.
    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ff::field;

    /// 2x2 matrix units over a field: basis E11, E12, E21, E22.
    pub(crate) fn m2_algebra(fld: &FieldDesc) -> Algebra {
        let one = fld.one();
        let dim = 4;
        let mut table: Vec<SparseVec> = vec![Vec::new(); dim * dim];
        // E_{ab} E_{cd} = [b == c] E_{ad}; index of E_{ab} is 2(a-1)+(b-1)
        for a in 0..2usize {
            for b in 0..2usize {
                for c in 0..2usize {
                    for d in 0..2usize {
                        if b == c {
                            table[(2 * a + b) * dim + (2 * c + d)] = vec![(2 * a + d, one.clone())];
                        }
                    }
                }
            }
        }
        let labels = vec!["E11".into(), "E12".into(), "E21".into(), "E22".into()];
        let mut unit = zero_vec(fld, dim);
        unit[0] = one.clone();
        unit[3] = one;
        Algebra::build_sc_algebra("M2", fld, labels, table, unit, vec![1, 2]).unwrap()
    }

    #[test]
    fn m2_builds_and_multiplies() {
        let fld = FieldDesc::Ff(field(2, 2).unwrap());
        let a = m2_algebra(&fld);
        // E12 * E21 = E11
        let p = a.mul_vec(&unit_vec(&fld, 4, 1), &unit_vec(&fld, 4, 2));
        assert_eq!(p, unit_vec(&fld, 4, 0));
        // E12 * E12 = 0
        let z = a.mul_vec(&unit_vec(&fld, 4, 1), &unit_vec(&fld, 4, 1));
        assert!(is_zero_vec(&z));
        assert_eq!(a.one_index(), None);
    }

    #[test]
    fn corrupted_table_is_named() {
        let fld = FieldDesc::Ff(field(2, 1).unwrap());
        let good = m2_algebra(&fld);
        let mut table: Vec<SparseVec> =
            (0..16).map(|p| good.basis_product(p / 4, p % 4).clone()).collect();
        // corrupt E12 * E21: make it E22 instead of E11
        table[1 * 4 + 2] = vec![(3, fld.one())];
        let err = Algebra::build_sc_algebra(
            "bad",
            &fld,
            good.labels.clone(),
            table,
            good.one.clone(),
            vec![],
        )
        .unwrap_err();
        match err {
            AlgebraError::UnitFails { .. } | AlgebraError::NonAssociative { .. } => {}
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn unit_violation_detected() {
        let fld = FieldDesc::Ff(field(2, 1).unwrap());
        // dim 1 with b0 * b0 = 0 but unit = b0
        let err = Algebra::build_sc_algebra(
            "bad",
            &fld,
            vec!["1".into()],
            vec![Vec::new()],
            vec![fld.one()],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::UnitFails { .. }));
    }

    #[test]
    fn tensor_of_m2s() {
        let fld = FieldDesc::Ff(field(3, 1).unwrap());
        let a = m2_algebra(&fld);
        let t = Algebra::tensor("M2xM2", &a, &a);
        assert_eq!(t.dim, 16);
        // unit acts as unit
        for i in 0..16 {
            let bi = unit_vec(&fld, 16, i);
            assert_eq!(t.mul_vec(&t.one, &bi), bi);
            assert_eq!(t.mul_vec(&bi, &t.one), bi);
        }
        // (E12 x E21)(E21 x E12) = E11 x E22
        let x = unit_vec(&fld, 16, 1 * 4 + 2);
        let y = unit_vec(&fld, 16, 2 * 4 + 1);
        let p = t.mul_vec(&x, &y);
        assert_eq!(p, unit_vec(&fld, 16, 0 * 4 + 3));
        // spot-check associativity on a few random-ish triples
        for (i, j, k) in [(1, 6, 11), (5, 10, 15), (3, 7, 12)] {
            let bi = unit_vec(&fld, 16, i);
            let bj = unit_vec(&fld, 16, j);
            let bk = unit_vec(&fld, 16, k);
            let lhs = t.mul_vec(&t.mul_vec(&bi, &bj), &bk);
            let rhs = t.mul_vec(&bi, &t.mul_vec(&bj, &bk));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn mult_matrices_agree_with_products() {
        let fld = FieldDesc::Ff(field(2, 2).unwrap());
        let a = m2_algebra(&fld);
        let g = fld.from_residue(1).add(&Scalar::Ff {
            fld: field(2, 2).unwrap(),
            ix: field(2, 2).unwrap().gen(),
        });
        let mut x = unit_vec(&fld, 4, 1);
        x[0] = g.clone();
        let l = a.left_mult_matrix(&x);
        let r = a.right_mult_matrix(&x);
        for j in 0..4 {
            let bj = unit_vec(&fld, 4, j);
            assert_eq!(l.apply(&bj), a.mul_vec(&x, &bj));
            assert_eq!(r.apply(&bj), a.mul_vec(&bj, &x));
        }
    }

    #[test]
    fn pow_vec_matches_repeated_mul() {
        let fld = FieldDesc::Ff(field(5, 1).unwrap());
        let a = m2_algebra(&fld);
        let mut x = unit_vec(&fld, 4, 1);
        x[2] = fld.one(); // E12 + E21, squares to identity
        assert_eq!(a.pow_vec(&x, 2), a.one);
        assert_eq!(a.pow_vec(&x, 5), x);
    }
}
