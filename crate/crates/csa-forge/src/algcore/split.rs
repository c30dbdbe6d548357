//! Splitting off a 2x2 matrix factor from a nontrivial idempotent.
//!
//! Given an idempotent e in an algebra A, the constructor completes e to a
//! 2x2 system of matrix units by finding x in eA(1-e) and y in (1-e)Ae with
//! xy = e and yx = 1-e; the remaining unit identities then hold identically.
//! The centralizer B of the units is produced by the retraction
//! z -> e11 z e11 + e21 z e12, whose image is exactly B; running the images
//! of the ambient basis through an echelon filter yields a basis of B and
//! exact coordinates for its multiplication table. The verifier re-checks
//! every claim from scratch: the unit identities, that each factor basis
//! vector commutes with the units, that the stored table matches ambient
//! products, and that the assembled map from 2x2 matrices over the factor
//! onto A is bijective, which together certify the isomorphism.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algcore::csa::specialization_fields;
use crate::algcore::{add_vec, is_zero_vec, sub_vec, unit_vec, zero_vec, Algebra, SparseVec};
use crate::exactfield::scalar::{FieldDesc, Scalar};
use crate::linalg::{Ech, FfMat, Mat};

#[derive(Debug, Clone)]
pub enum SplitError {
    WrongLength { what: &'static str, expected: usize, got: usize },
    NotIdempotent,
    TrivialIdempotent,
    /// No complementary pair x, y completing the idempotent to matrix units
    /// was found among the projected basis candidates.
    NoComplementaryPair,
    UnitProductFails { i: usize, j: usize, k: usize, l: usize },
    UnitSumFails,
    NotCommuting { basis_index: usize, unit_row: usize, unit_col: usize },
    DependentInclusion { row: usize },
    NotClosed { i: usize, j: usize },
    UnitNotInFactor,
    WrongFactorDimension { algebra_dim: usize, factor_dim: usize },
    NotBijective,
    /// Bijectivity could not be settled within the sampling budget; nothing
    /// is claimed either way.
    BijectivityUnresolved,
}

impl fmt::Display for SplitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitError::WrongLength { what, expected, got } => {
                write!(f, "{what}: expected length {expected}, got {got}")
            }
            SplitError::NotIdempotent => write!(f, "element is not idempotent"),
            SplitError::TrivialIdempotent => {
                write!(f, "idempotent is 0 or 1, nothing to split off")
            }
            SplitError::NoComplementaryPair => {
                write!(f, "no complementary pair completes the idempotent to matrix units")
            }
            SplitError::UnitProductFails { i, j, k, l } => {
                write!(f, "matrix unit identity e{i}{j} e{k}{l} fails")
            }
            SplitError::UnitSumFails => write!(f, "diagonal units do not sum to 1"),
            SplitError::NotCommuting { basis_index, unit_row, unit_col } => write!(
                f,
                "factor basis vector {basis_index} does not commute with e{}{}",
                unit_row + 1,
                unit_col + 1
            ),
            SplitError::DependentInclusion { row } => {
                write!(f, "inclusion row {row} is dependent on earlier rows")
            }
            SplitError::NotClosed { i, j } => {
                write!(f, "product of factor basis vectors {i} and {j} leaves the span")
            }
            SplitError::UnitNotInFactor => write!(f, "ambient unit is not in the factor span"),
            SplitError::WrongFactorDimension { algebra_dim, factor_dim } => write!(
                f,
                "factor dimension {factor_dim} is not a quarter of the algebra dimension {algebra_dim}"
            ),
            SplitError::NotBijective => write!(f, "assembled 2x2 map is not bijective"),
            SplitError::BijectivityUnresolved => {
                write!(f, "bijectivity sampling budget exhausted without a certificate")
            }
        }
    }
}

impl std::error::Error for SplitError {}

/// A 2x2 system of matrix units in ambient coordinates; e[r][c] is the unit
/// with a 1 in row r+1, column c+1.
#[derive(Debug, Clone)]
pub struct MatrixUnits {
    pub e: [[Vec<Scalar>; 2]; 2],
}

fn vecs_equal(x: &[Scalar], y: &[Scalar]) -> bool {
    is_zero_vec(&sub_vec(x, y))
}

impl MatrixUnits {
    /// Check all sixteen unit products and the diagonal sum.
    pub fn verify(&self, a: &Algebra) -> Result<(), SplitError> {
        for v in self.e.iter().flatten() {
            if v.len() != a.dim {
                return Err(SplitError::WrongLength {
                    what: "matrix unit",
                    expected: a.dim,
                    got: v.len(),
                });
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let prod = a.mul_vec(&self.e[i][j], &self.e[k][l]);
                        let ok = if j == k {
                            vecs_equal(&prod, &self.e[i][l])
                        } else {
                            is_zero_vec(&prod)
                        };
                        if !ok {
                            return Err(SplitError::UnitProductFails {
                                i: i + 1,
                                j: j + 1,
                                k: k + 1,
                                l: l + 1,
                            });
                        }
                    }
                }
            }
        }
        if !vecs_equal(&add_vec(&self.e[0][0], &self.e[1][1]), &a.one) {
            return Err(SplitError::UnitSumFails);
        }
        Ok(())
    }
}

/// A certified decomposition A = M2 (x) B: matrix units, the factor B with
/// its own multiplication table, and the inclusion of B's basis into A.
#[derive(Debug, Clone)]
pub struct MatrixSplit {
    pub units: MatrixUnits,
    pub factor: Algebra,
    /// Row r is the ambient coordinate vector of the factor's basis vector r.
    pub inclusion: Vec<Vec<Scalar>>,
}

/// Find y in the span with x y = e11 and y x = e22; both conditions are
/// linear in y.
fn solve_for_partner(
    a: &Algebra,
    x: &[Scalar],
    yspan: &[Vec<Scalar>],
    e11: &[Scalar],
    e22: &[Scalar],
) -> Option<Vec<Scalar>> {
    let n = a.dim;
    let m = yspan.len();
    if m == 0 {
        return None;
    }
    let mut sys = Mat::zero(2 * n, m, &a.fld);
    for (c, y) in yspan.iter().enumerate() {
        let top = a.mul_vec(x, y);
        let bottom = a.mul_vec(y, x);
        for r in 0..n {
            sys[(r, c)] = top[r].clone();
            sys[(n + r, c)] = bottom[r].clone();
        }
    }
    let mut rhs = Vec::with_capacity(2 * n);
    rhs.extend_from_slice(e11);
    rhs.extend_from_slice(e22);
    let coeffs = sys.solve(&rhs)?;
    let mut y = zero_vec(&a.fld, n);
    for (c, co) in coeffs.iter().enumerate() {
        if !co.is_zero() {
            y = add_vec(&y, &yspan[c].iter().map(|v| v.mul(co)).collect::<Vec<_>>());
        }
    }
    Some(y)
}

/// Complete a nontrivial idempotent to matrix units and split off the
/// centralizer factor.
pub fn split_off_matrix_factor(a: &Algebra, e: &[Scalar]) -> Result<MatrixSplit, SplitError> {
    let n = a.dim;
    if e.len() != n {
        return Err(SplitError::WrongLength { what: "idempotent", expected: n, got: e.len() });
    }
    if !vecs_equal(&a.mul_vec(e, e), e) {
        return Err(SplitError::NotIdempotent);
    }
    if is_zero_vec(e) || vecs_equal(e, &a.one) {
        return Err(SplitError::TrivialIdempotent);
    }
    let e11 = e.to_vec();
    let e22 = sub_vec(&a.one, e);

    // span of (1-e) A e, echelon-filtered
    let mut yech = Ech::new(&a.fld);
    for j in 0..n {
        let w = a.mul_chain(&[&e22, &unit_vec(&a.fld, n, j), &e11]);
        yech.insert(&w);
    }
    let yspan: Vec<Vec<Scalar>> = (0..yech.rank()).map(|r| yech.row_vec(r)).collect();

    // candidates from e A (1-e): single projections first, then pair sums
    let mut singles: Vec<Vec<Scalar>> = Vec::new();
    let mut found = None;
    for i in 0..n {
        let x = a.mul_chain(&[&e11, &unit_vec(&a.fld, n, i), &e22]);
        if is_zero_vec(&x) {
            continue;
        }
        if let Some(y) = solve_for_partner(a, &x, &yspan, &e11, &e22) {
            found = Some((x, y));
            break;
        }
        singles.push(x);
    }
    if found.is_none() {
        'outer: for i in 0..singles.len() {
            for j in i + 1..singles.len() {
                let x = add_vec(&singles[i], &singles[j]);
                if let Some(y) = solve_for_partner(a, &x, &yspan, &e11, &e22) {
                    found = Some((x, y));
                    break 'outer;
                }
            }
        }
    }
    let Some((e12, e21)) = found else {
        return Err(SplitError::NoComplementaryPair);
    };
    let units = MatrixUnits { e: [[e11, e12], [e21, e22]] };
    units.verify(a)?;

    // the retraction z -> e11 z e11 + e21 z e12 maps A onto the centralizer
    let mut ech = Ech::new(&a.fld);
    for i in 0..n {
        let b = unit_vec(&a.fld, n, i);
        let lhs = a.mul_chain(&[&units.e[0][0], &b, &units.e[0][0]]);
        let rhs = a.mul_chain(&[&units.e[1][0], &b, &units.e[0][1]]);
        ech.insert(&add_vec(&lhs, &rhs));
    }
    let k = ech.rank();
    let inclusion: Vec<Vec<Scalar>> = (0..k).map(|r| ech.row_vec(r)).collect();

    let Some(one_c) = ech.coords(&a.one) else {
        return Err(SplitError::UnitNotInFactor);
    };
    let mut table: Vec<SparseVec> = Vec::with_capacity(k * k);
    for r in 0..k {
        for s in 0..k {
            let p = a.mul_vec(&inclusion[r], &inclusion[s]);
            let Some(c) = ech.coords(&p) else {
                return Err(SplitError::NotClosed { i: r, j: s });
            };
            table.push(c.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect());
        }
    }
    let labels = (0..k).map(|r| format!("c{r}")).collect();
    let factor = Algebra::from_parts(
        &format!("factor({})", a.name),
        &a.fld,
        labels,
        table,
        one_c,
        (0..k).collect(),
    );
    Ok(MatrixSplit { units, factor, inclusion })
}

/// Re-check a stored split from scratch; a pass certifies that the ambient
/// algebra is 2x2 matrices over the factor.
pub fn verify_split(a: &Algebra, s: &MatrixSplit) -> Result<(), SplitError> {
    let n = a.dim;
    let k = s.inclusion.len();
    if s.factor.dim != k {
        return Err(SplitError::WrongLength {
            what: "inclusion rows",
            expected: s.factor.dim,
            got: k,
        });
    }
    for row in &s.inclusion {
        if row.len() != n {
            return Err(SplitError::WrongLength {
                what: "inclusion row",
                expected: n,
                got: row.len(),
            });
        }
    }
    s.units.verify(a)?;

    for (bi, row) in s.inclusion.iter().enumerate() {
        for ur in 0..2 {
            for uc in 0..2 {
                let u = &s.units.e[ur][uc];
                if !vecs_equal(&a.mul_vec(row, u), &a.mul_vec(u, row)) {
                    return Err(SplitError::NotCommuting {
                        basis_index: bi,
                        unit_row: ur,
                        unit_col: uc,
                    });
                }
            }
        }
    }

    let mut ech = Ech::new(&a.fld);
    for (r, row) in s.inclusion.iter().enumerate() {
        if !ech.insert(row) {
            return Err(SplitError::DependentInclusion { row: r });
        }
    }

    // stored unit and table must match ambient arithmetic exactly
    let mut one_ambient = zero_vec(&a.fld, n);
    for (r, c) in s.factor.one.iter().enumerate() {
        if !c.is_zero() {
            one_ambient =
                add_vec(&one_ambient, &s.inclusion[r].iter().map(|v| v.mul(c)).collect::<Vec<_>>());
        }
    }
    if !vecs_equal(&one_ambient, &a.one) {
        return Err(SplitError::UnitNotInFactor);
    }
    for r in 0..k {
        for c in 0..k {
            let ambient = a.mul_vec(&s.inclusion[r], &s.inclusion[c]);
            let mut expected = zero_vec(&a.fld, n);
            for (t, co) in s.factor.basis_product(r, c) {
                expected = add_vec(
                    &expected,
                    &s.inclusion[*t].iter().map(|v| v.mul(co)).collect::<Vec<_>>(),
                );
            }
            if !vecs_equal(&ambient, &expected) {
                return Err(SplitError::NotClosed { i: r, j: c });
            }
        }
    }

    if 4 * k != n {
        return Err(SplitError::WrongFactorDimension { algebra_dim: n, factor_dim: k });
    }

    // bijectivity of (i, j, b) -> e_ij b as a linear map onto A
    let mut m = Mat::zero(n, 4 * k, &a.fld);
    for ur in 0..2 {
        for uc in 0..2 {
            for r in 0..k {
                let col = (ur * 2 + uc) * k + r;
                let v = a.mul_vec(&s.units.e[ur][uc], &s.inclusion[r]);
                for row in 0..n {
                    m[(row, col)] = v[row].clone();
                }
            }
        }
    }
    match &a.fld {
        FieldDesc::Ff(_) => {
            if m.rank() == n {
                Ok(())
            } else {
                Err(SplitError::NotBijective)
            }
        }
        FieldDesc::Rf(ctx) => {
            // a full-rank specialization certifies a nonzero determinant
            for target in specialization_fields(ctx.base.p, ctx.base.k) {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5917 ^ ((target.q as u64) << 24));
                'points: for _ in 0..8 {
                    let point: Vec<u8> =
                        (0..ctx.vars.len()).map(|_| rng.gen_range(1..target.q) as u8).collect();
                    let mut sp = FfMat::zero(target.clone(), n, 4 * k);
                    for row in 0..n {
                        for col in 0..4 * k {
                            match m[(row, col)].specialize(&target, &point) {
                                Some(v) => sp[(row, col)] = v,
                                None => continue 'points,
                            }
                        }
                    }
                    if sp.rank() == n {
                        return Ok(());
                    }
                }
            }
            Err(SplitError::BijectivityUnresolved)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::tests::m2_algebra;
    use crate::algcore::csa::csa_test;
    use crate::exactfield::ff::field;

    #[test]
    fn split_m2_by_diagonal_idempotent() {
        let fld = FieldDesc::Ff(field(2, 2).unwrap());
        let a = m2_algebra(&fld);
        // E11 is a nontrivial idempotent
        let e = unit_vec(&fld, 4, 0);
        let s = split_off_matrix_factor(&a, &e).unwrap();
        assert_eq!(s.factor.dim, 1);
        verify_split(&a, &s).unwrap();
    }

    #[test]
    fn split_m2_tensor_m2_leaves_m2() {
        let fld = FieldDesc::Ff(field(3, 1).unwrap());
        let m2 = m2_algebra(&fld);
        let a = Algebra::tensor("M2xM2", &m2, &m2);
        // E11 (x) 1 is idempotent: index of E11 in the left factor is 0
        let mut e = zero_vec(&fld, 16);
        // (E11 (x) E11) + (E11 (x) E22): left index 0 and right indices 0, 3
        e[0] = fld.one();
        e[3] = fld.one();
        let s = split_off_matrix_factor(&a, &e).unwrap();
        assert_eq!(s.factor.dim, 4);
        verify_split(&a, &s).unwrap();
        let rep = csa_test(&s.factor);
        assert!(rep.verdict.is_csa(), "{rep}");
    }

    #[test]
    fn non_idempotent_is_rejected() {
        let fld = FieldDesc::Ff(field(2, 1).unwrap());
        let a = m2_algebra(&fld);
        let e = unit_vec(&fld, 4, 1);
        assert!(matches!(split_off_matrix_factor(&a, &e), Err(SplitError::NotIdempotent)));
    }

    #[test]
    fn trivial_idempotent_is_rejected() {
        let fld = FieldDesc::Ff(field(2, 1).unwrap());
        let a = m2_algebra(&fld);
        assert!(matches!(
            split_off_matrix_factor(&a, &a.one.clone()),
            Err(SplitError::TrivialIdempotent)
        ));
    }

    #[test]
    fn corrupted_split_fails_verification() {
        let fld = FieldDesc::Ff(field(2, 2).unwrap());
        let a = m2_algebra(&fld);
        let e = unit_vec(&fld, 4, 0);
        let mut s = split_off_matrix_factor(&a, &e).unwrap();
        // tamper with one matrix unit
        s.units.e[0][1][1] = s.units.e[0][1][1].add(&fld.one());
        assert!(verify_split(&a, &s).is_err());
    }
}
