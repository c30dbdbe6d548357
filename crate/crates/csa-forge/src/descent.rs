//! One-parameter descent for tuples of Artin-Schreier classes.
//!
//! A rank-r subspace V of a field of characteristic p determines the
//! additive polynomial psi_V with kernel V. Writing psi_V(lambda_i t) =
//! Theta_i(wp(t)) with wp(t) = t^p - t, the single scalar
//! x = sum Theta_i(a_i) carries all r classes (a_1, .., a_r) at once:
//! recovery operators pi_i produce c_i = pi_i(x) with c_i = a_i mod wp,
//! together with explicit preimages. The classes therefore descend to the
//! subfield generated by x, and a tuple of symbol algebras [a_i, b_i)
//! descends to a field with at most r + 1 generators.
//!
//! All certificates are re-verified against a brute-force oracle: the
//! splitting ring adjoining roots of wp(y_i) = a_i is built explicitly and
//! psi_V(sum lambda_i y_i) = x is checked there.

use std::fmt;
use std::sync::Arc;

use crate::exactfield::scalar::{FieldDesc, Scalar};
use crate::exactfield::tower::{Tower, TowerElem};
use crate::linalg::Mat;
use crate::symbols::{symbol_algebra, shift_iso, SymbolAlgebra, SymbolError};

#[derive(Debug, Clone)]
pub enum DescentError {
    EmptyBasis,
    DependentBasis,
    FieldMismatch { what: String },
    WrongLength { expected: usize, got: usize },
    NotDivisible,
    RecoveryUnsupported { field: String },
    RecoveryFailed,
    Symbol(SymbolError),
}

impl fmt::Display for DescentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DescentError::EmptyBasis => write!(f, "basis needs at least one element"),
            DescentError::DependentBasis => {
                write!(f, "basis elements are linearly dependent over the prime field")
            }
            DescentError::FieldMismatch { what } => write!(f, "field mismatch: {what}"),
            DescentError::WrongLength { expected, got } => {
                write!(f, "expected {expected} entries, got {got}")
            }
            DescentError::NotDivisible => {
                write!(f, "polynomial does not vanish at 1, so wp does not right-divide it")
            }
            DescentError::RecoveryUnsupported { field } => {
                write!(f, "class recovery is only supported over finite fields, not {field}")
            }
            DescentError::RecoveryFailed => {
                write!(f, "no recovery operators below the degree bound")
            }
            DescentError::Symbol(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DescentError {}

impl From<SymbolError> for DescentError {
    fn from(e: SymbolError) -> DescentError {
        DescentError::Symbol(e)
    }
}

/// A p-polynomial sum c_i t^(p^i), additive as a map on any extension.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditivePolynomial {
    pub fld: FieldDesc,
    /// coeffs[i] multiplies t^(p^i); trailing zeros are trimmed.
    pub coeffs: Vec<Scalar>,
}

impl AdditivePolynomial {
    pub fn new(fld: &FieldDesc, mut coeffs: Vec<Scalar>) -> AdditivePolynomial {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        AdditivePolynomial { fld: fld.clone(), coeffs }
    }

    /// The identity map t.
    pub fn ident(fld: &FieldDesc) -> AdditivePolynomial {
        AdditivePolynomial::new(fld, vec![fld.one()])
    }

    /// t^p - t.
    pub fn wp(fld: &FieldDesc) -> AdditivePolynomial {
        AdditivePolynomial::new(fld, vec![fld.one().neg(), fld.one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        let p = self.fld.characteristic() as u64;
        let mut acc = self.fld.zero();
        let mut pw = 1u64;
        for c in &self.coeffs {
            acc = acc.add(&c.mul(&t.pow(pw)));
            pw *= p;
        }
        acc
    }

    pub fn eval_in(&self, tower: &Arc<Tower>, t: &TowerElem) -> TowerElem {
        let p = tower.p() as u64;
        let mut acc = TowerElem::zero(tower);
        let mut pw = 1u64;
        for c in &self.coeffs {
            acc = acc.add(&t.pow(pw).scale(c));
            pw *= p;
        }
        acc
    }

    pub fn add(&self, rhs: &AdditivePolynomial) -> AdditivePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = self.fld.zero();
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs
                    .get(i)
                    .unwrap_or(&zero)
                    .add(rhs.coeffs.get(i).unwrap_or(&zero))
            })
            .collect();
        AdditivePolynomial::new(&self.fld, coeffs)
    }

    pub fn scale(&self, c: &Scalar) -> AdditivePolynomial {
        AdditivePolynomial::new(&self.fld, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    /// The composite self(rhs(t)): the twisted product with
    /// (f g)_n = sum_{i+j=n} f_i g_j^(p^i).
    pub fn compose(&self, rhs: &AdditivePolynomial) -> AdditivePolynomial {
        let p = self.fld.characteristic() as u64;
        if self.is_zero() || rhs.is_zero() {
            return AdditivePolynomial::new(&self.fld, vec![]);
        }
        let n = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut coeffs = vec![self.fld.zero(); n];
        for (i, fi) in self.coeffs.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            for (j, gj) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&fi.mul(&gj.pow(p.pow(i as u32))));
            }
        }
        AdditivePolynomial::new(&self.fld, coeffs)
    }

    /// self(c t): rescale the argument.
    pub fn precompose_scale(&self, c: &Scalar) -> AdditivePolynomial {
        let p = self.fld.characteristic() as u64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, ci)| ci.mul(&c.pow(p.pow(i as u32))))
            .collect();
        AdditivePolynomial::new(&self.fld, coeffs)
    }
}

impl fmt::Display for AdditivePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let p = self.fld.characteristic() as u64;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = p.pow(i as u32);
            if c.is_one() {
                if e == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{e}")?;
                }
            } else if e == 1 {
                write!(f, "({c}) t")?;
            } else {
                write!(f, "({c}) t^{e}")?;
            }
        }
        Ok(())
    }
}

/// An F_p-independent tuple together with the p^r elements it spans.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    pub fld: FieldDesc,
    pub lambdas: Vec<Scalar>,
    /// All sums e_1 lambda_1 + .. + e_r lambda_r; entry k uses the base-p
    /// digits of k as the e_i.
    pub space: Vec<Scalar>,
}

impl SubspaceBasis {
    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }
}

/// Span the lambdas and reject dependent tuples (detected as collisions
/// among the p^r combinations).
pub fn subspace_basis(fld: &FieldDesc, lambdas: &[Scalar]) -> Result<SubspaceBasis, DescentError> {
    if lambdas.is_empty() {
        return Err(DescentError::EmptyBasis);
    }
    for l in lambdas {
        if l.field() != *fld {
            return Err(DescentError::FieldMismatch { what: format!("basis element {l}") });
        }
    }
    let p = fld.characteristic() as usize;
    let r = lambdas.len();
    let size = p.pow(r as u32);
    let mut space = Vec::with_capacity(size);
    for code in 0..size {
        let mut v = fld.zero();
        let mut rem = code;
        for l in lambdas {
            let e = (rem % p) as u32;
            rem /= p;
            v = v.add(&fld.from_residue(e as u64).mul(l));
        }
        space.push(v);
    }
    for i in 0..size {
        for j in 0..i {
            if space[i].sub(&space[j]).is_zero() {
                return Err(DescentError::DependentBasis);
            }
        }
    }
    Ok(SubspaceBasis { fld: fld.clone(), lambdas: lambdas.to_vec(), space })
}

/// The monic additive polynomial with kernel exactly the span:
/// psi_V(t) = prod_{v in V} (t - v), verified to be a p-polynomial and to
/// vanish precisely on V.
pub fn psi_subspace(basis: &SubspaceBasis) -> AdditivePolynomial {
    let fld = &basis.fld;
    // dense product of the linear factors
    let mut dense = vec![fld.one()];
    for v in &basis.space {
        let mut next = vec![fld.zero(); dense.len() + 1];
        for (i, c) in dense.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(v));
        }
        dense = next;
    }
    let p = fld.characteristic() as usize;
    let mut coeffs = Vec::new();
    let mut pw = 1usize;
    for (i, c) in dense.iter().enumerate() {
        if i == pw {
            coeffs.push(c.clone());
            pw *= p;
        } else {
            assert!(c.is_zero(), "subspace product has a non-p-power term");
        }
    }
    // index 0 never equals a positive power of p, so dense[0] is skipped
    // above; it is psi(0) = 0 up to sign
    assert!(dense[0].is_zero());
    let psi = AdditivePolynomial::new(fld, coeffs);
    for v in &basis.space {
        assert!(psi.eval(v).is_zero(), "psi_V must vanish on V");
    }
    psi
}

/// Solve psi = theta(wp(t)) for theta by the downward coefficient
/// recurrence; possible exactly when psi(1) = 0, and re-verified by exact
/// composition.
pub fn right_divide_wp(psi: &AdditivePolynomial) -> Result<AdditivePolynomial, DescentError> {
    let fld = &psi.fld;
    if !psi.eval(&fld.one()).is_zero() {
        return Err(DescentError::NotDivisible);
    }
    if psi.is_zero() {
        return Ok(AdditivePolynomial::new(fld, vec![]));
    }
    let k = psi.coeffs.len() - 1;
    let mut d = vec![fld.zero(); k];
    // theta(wp(t)) = sum d_j (t^(p^(j+1)) - t^(p^j)) matches psi from the
    // top down
    d[k - 1] = psi.coeffs[k].clone();
    for i in (1..k).rev() {
        d[i - 1] = psi.coeffs[i].add(&d[i]);
    }
    let theta = AdditivePolynomial::new(fld, d);
    let back = theta.compose(&AdditivePolynomial::wp(fld));
    assert_eq!(back, *psi, "right quotient failed to recompose");
    Ok(theta)
}

/// Recovery operators: pi_i and the quotients rho_ij certifying
/// pi_i(theta_j(t)) = delta_ij t + wp(rho_ij(t)) as exact identities.
#[derive(Debug, Clone)]
pub struct RecoveryData {
    pub pis: Vec<AdditivePolynomial>,
    pub rhos: Vec<Vec<AdditivePolynomial>>,
    /// c_i = pi_i(x), each congruent to a_i modulo wp.
    pub cs: Vec<Scalar>,
    /// s_i with wp(s_i) = a_i - c_i.
    pub preimages: Vec<Scalar>,
}

/// The descent certificate: the quotients theta_i, the single parameter
/// x = sum theta_i(a_i), and (over finite fields) the recovered classes.
#[derive(Debug, Clone)]
pub struct DescentRecord {
    pub basis: SubspaceBasis,
    pub psi: AdditivePolynomial,
    pub thetas: Vec<AdditivePolynomial>,
    pub x: Scalar,
    /// None flags an indeterminate record: recovery is unsupported over
    /// the base field.
    pub recovery: Option<RecoveryData>,
}

fn inv_frobenius(c: &Scalar, times: usize, k: u32, p: u64) -> Scalar {
    // the p-th root in F_(p^k) is the (p^(k-1))-th power
    let mut out = c.clone();
    for _ in 0..times {
        out = out.pow(p.pow(k - 1));
    }
    out
}

/// The residue of an additive polynomial modulo left composites of wp:
/// f = residue * t + wp(rho(t)) for a unique residue and rho (finite
/// fields only, where p-th roots exist).
fn wp_residue(f: &AdditivePolynomial, k: u32, p: u64) -> Scalar {
    let mut res = f.fld.zero();
    for (i, c) in f.coeffs.iter().enumerate() {
        res = res.add(&inv_frobenius(c, i % k as usize, k, p));
    }
    res
}

/// The rho with f = residue * t + wp(rho(t)), by the downward recurrence
/// rho_(i-1) = (f_i + rho_i)^(1/p).
fn wp_left_quotient(f: &AdditivePolynomial, k: u32, p: u64) -> AdditivePolynomial {
    let fld = &f.fld;
    let res = wp_residue(f, k, p);
    let g0 = f.coeffs.first().cloned().unwrap_or_else(|| fld.zero());
    let mut g = f.coeffs.clone();
    if g.is_empty() {
        g.push(fld.zero());
    }
    g[0] = g0.sub(&res);
    let n = g.len() - 1;
    let mut rho = vec![fld.zero(); n.max(1)];
    if n > 0 {
        rho[n - 1] = inv_frobenius(&g[n], 1, k, p);
        for i in (1..n).rev() {
            rho[i - 1] = inv_frobenius(&g[i].add(&rho[i]), 1, k, p);
        }
        assert!(rho[0].neg().sub(&g[0]).is_zero(), "left quotient recurrence broke");
    }
    AdditivePolynomial::new(fld, rho)
}

fn base_p_digit(ix: u32, pos: u32, p: u32) -> u32 {
    (ix / p.pow(pos)) % p
}

/// Solve for the recovery operators over a finite field: pi_i of degree
/// below p^k with residue(pi_i theta_j) = delta_ij, as one F_p-linear
/// system per class.
fn solve_recovery(
    fld: &FieldDesc,
    thetas: &[AdditivePolynomial],
) -> Result<Vec<AdditivePolynomial>, DescentError> {
    let table = match fld {
        FieldDesc::Ff(t) => t.clone(),
        FieldDesc::Rf(_) => {
            return Err(DescentError::RecoveryUnsupported { field: fld.name() })
        }
    };
    let p = table.p as u64;
    let k = table.k;
    let r = thetas.len();
    let prime = FieldDesc::Ff(crate::exactfield::field(table.p, 1).expect("prime field"));
    // monomials g^e t^(p^a) for e < k, a < k span every residue functional,
    // since t^(p^k) acts trivially on residues over F_(p^k)
    let monos: Vec<(usize, u32)> =
        (0..k as usize).flat_map(|a| (0..k).map(move |e| (a, e))).collect();
    let gen = if k == 1 {
        fld.one()
    } else {
        match fld {
            FieldDesc::Ff(t) => Scalar::Ff { fld: t.clone(), ix: table.p as u8 },
            _ => unreachable!(),
        }
    };
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(monos.len());
    for (a, e) in &monos {
        let mut coeffs = vec![fld.zero(); a + 1];
        coeffs[*a] = gen.pow(*e as u64);
        let mono = AdditivePolynomial::new(fld, coeffs);
        let mut col = Vec::with_capacity(r * k as usize);
        for th in thetas {
            let res = wp_residue(&mono.compose(th), k, p);
            let ix = match &res {
                Scalar::Ff { ix, .. } => *ix as u32,
                _ => unreachable!(),
            };
            for pos in 0..k {
                col.push(prime.from_residue(base_p_digit(ix, pos, table.p) as u64));
            }
        }
        cols.push(col);
    }
    let rows = r * k as usize;
    let mut m = Mat::zero(rows, monos.len(), &prime);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..rows {
            m[(i, j)] = col[i].clone();
        }
    }
    let mut pis = Vec::with_capacity(r);
    for i in 0..r {
        let mut rhs = vec![prime.zero(); rows];
        rhs[i * k as usize] = prime.one();
        let sol = m.solve(&rhs).ok_or(DescentError::RecoveryFailed)?;
        let mut coeffs = vec![fld.zero(); k as usize];
        for (mu, (a, e)) in monos.iter().enumerate() {
            let t = match &sol[mu] {
                Scalar::Ff { ix, .. } => *ix as u32,
                _ => unreachable!(),
            };
            if t == 0 {
                continue;
            }
            coeffs[*a] = coeffs[*a].add(&fld.from_residue(t as u64).mul(&gen.pow(*e as u64)));
        }
        pis.push(AdditivePolynomial::new(fld, coeffs));
    }
    Ok(pis)
}

/// Descend the classes a_1..a_r along the basis: compute theta_i with
/// theta_i(wp(t)) = psi_V(lambda_i t), the parameter x = sum theta_i(a_i),
/// and over finite fields the recovered classes c_i with explicit
/// wp-preimages for a_i - c_i.
pub fn descent_parameter(
    a: &[Scalar],
    basis: &SubspaceBasis,
) -> Result<DescentRecord, DescentError> {
    let fld = &basis.fld;
    if a.len() != basis.rank() {
        return Err(DescentError::WrongLength { expected: basis.rank(), got: a.len() });
    }
    for ai in a {
        if ai.field() != *fld {
            return Err(DescentError::FieldMismatch { what: format!("class {ai}") });
        }
    }
    let psi = psi_subspace(basis);
    let mut thetas = Vec::with_capacity(basis.rank());
    for l in &basis.lambdas {
        // psi_V(lambda t) kills 1 because lambda lies in V
        thetas.push(right_divide_wp(&psi.precompose_scale(l))?);
    }
    let mut x = fld.zero();
    for (th, ai) in thetas.iter().zip(a) {
        x = x.add(&th.eval(ai));
    }
    let recovery = match fld {
        FieldDesc::Rf(_) => None,
        FieldDesc::Ff(table) => {
            let p = table.p as u64;
            let k = table.k;
            let pis = solve_recovery(fld, &thetas)?;
            let ident = AdditivePolynomial::ident(fld);
            let wp = AdditivePolynomial::wp(fld);
            let mut rhos = Vec::with_capacity(pis.len());
            let mut cs = Vec::with_capacity(pis.len());
            let mut preimages = Vec::with_capacity(pis.len());
            for (i, pi) in pis.iter().enumerate() {
                let mut row = Vec::with_capacity(thetas.len());
                for (j, th) in thetas.iter().enumerate() {
                    let comp = pi.compose(th);
                    let expect = if i == j { ident.clone() } else { AdditivePolynomial::new(fld, vec![]) };
                    let rho = wp_left_quotient(&comp, k, p);
                    // exact identity pi_i theta_j = delta_ij t + wp rho_ij
                    assert_eq!(
                        expect.add(&wp.compose(&rho)),
                        comp,
                        "recovery operator identity failed to recompose"
                    );
                    row.push(rho);
                }
                let c = pi.eval(&x);
                // s_i = -sum_j rho_ij(a_j) has wp(s_i) = a_i - c_i
                let mut s = fld.zero();
                for (j, rho) in row.iter().enumerate() {
                    s = s.add(&rho.eval(&a[j]));
                }
                let s = s.neg();
                assert!(
                    s.wp().sub(&a[i].sub(&c)).is_zero(),
                    "recovered preimage must certify a_i - c_i"
                );
                rhos.push(row);
                cs.push(c);
                preimages.push(s);
            }
            Some(RecoveryData { pis, rhos, cs, preimages })
        }
    };
    Ok(DescentRecord { basis: basis.clone(), psi, thetas, x, recovery })
}

/// Oracle check of a record against the classes it claims to descend.
///
/// Builds the splitting ring adjoining formal roots y_i of wp(y_i) = a_i,
/// evaluates psi_V at y = sum lambda_i y_i there, and compares with x;
/// then re-validates the recovered classes by the trace criterion and
/// their attached preimages. Finite base fields only; anything
/// structurally off fails rather than erroring.
pub fn verify_descent(record: &DescentRecord, a: &[Scalar]) -> bool {
    let fld = &record.basis.fld;
    let table = match fld {
        FieldDesc::Ff(t) => t.clone(),
        FieldDesc::Rf(_) => return false,
    };
    let r = record.basis.rank();
    if a.len() != r || record.thetas.len() != r {
        return false;
    }
    if a.iter().any(|ai| ai.field() != *fld) {
        return false;
    }
    // the quotients must recompose and x must match
    let psi = psi_subspace(&record.basis);
    if psi != record.psi {
        return false;
    }
    let wp = AdditivePolynomial::wp(fld);
    let mut x = fld.zero();
    for (th, (l, ai)) in record.thetas.iter().zip(record.basis.lambdas.iter().zip(a)) {
        if th.compose(&wp) != psi.precompose_scale(l) {
            return false;
        }
        x = x.add(&th.eval(ai));
    }
    if !x.sub(&record.x).is_zero() {
        return false;
    }
    // splitting-ring oracle: psi_V(sum lambda_i y_i) = x with wp(y_i) = a_i
    let layers: Vec<(String, Scalar)> =
        a.iter().enumerate().map(|(i, ai)| (format!("y{}", i + 1), ai.clone())).collect();
    let tower = Tower::new(fld.clone(), layers);
    let mut y = TowerElem::zero(&tower);
    for (i, l) in record.basis.lambdas.iter().enumerate() {
        y = y.add(&TowerElem::gen(&tower, i).scale(l));
    }
    let lhs = record.psi.eval_in(&tower, &y);
    if !lhs.sub(&TowerElem::from_base(&tower, x.clone())).is_zero() {
        return false;
    }
    // recovered classes: trace criterion and explicit preimages
    let Some(rec) = &record.recovery else { return false };
    if rec.cs.len() != r || rec.preimages.len() != r {
        return false;
    }
    let p = table.p as u64;
    for i in 0..r {
        let diff = a[i].sub(&rec.cs[i]);
        let mut tr = fld.zero();
        let mut pw = 1u64;
        for _ in 0..table.k {
            tr = tr.add(&diff.pow(pw));
            pw *= p;
        }
        if !tr.is_zero() {
            return false;
        }
        if !rec.preimages[i].wp().sub(&diff).is_zero() {
            return false;
        }
    }
    true
}

/// One descended symbol: the shift isomorphism [c_i, b_i) -> [a_i, b_i)
/// over the field of b_i, certified by the preimage s_i.
#[derive(Debug, Clone)]
pub struct DecShift {
    pub index: usize,
    pub c: Scalar,
    pub preimage: Scalar,
    pub source: SymbolAlgebra,
    pub target: SymbolAlgebra,
    pub iso: Mat,
}

/// Full witness that a tuple of symbols descends to at most r + 1
/// generators: the descent record plus one verified shift iso per symbol
/// and the generator list of L.
#[derive(Debug, Clone)]
pub struct DecWitness {
    pub record: DescentRecord,
    pub shifts: Vec<DecShift>,
    pub generators: Vec<String>,
}

fn lift_to(ambient: &FieldDesc, s: &Scalar) -> Result<Scalar, DescentError> {
    if s.field() == *ambient {
        return Ok(s.clone());
    }
    match (ambient, s) {
        (FieldDesc::Rf(ctx), Scalar::Ff { fld, ix })
            if Arc::ptr_eq(fld, &ctx.base) || (fld.p == ctx.base.p && fld.k == ctx.base.k) =>
        {
            Ok(Scalar::Rf(Arc::new(crate::exactfield::ratfn::RatFn::constant(ctx, *ix))))
        }
        _ => Err(DescentError::FieldMismatch {
            what: format!("cannot view {s} inside {}", ambient.name()),
        }),
    }
}

/// Descend a tuple of symbols [a_i, b_i): run descent_parameter on the
/// a_i, then certify [c_i, b_i) = [a_i, b_i) by an explicit shift iso over
/// the field of the b_i. The descent field L is generated by x and the
/// b_i, hence by at most r + 1 elements; the generator list is reported.
pub fn dec_upper_witness(
    symbols: &[(Scalar, Scalar)],
    basis: &SubspaceBasis,
) -> Result<DecWitness, DescentError> {
    let fld = &basis.fld;
    let a: Vec<Scalar> = symbols.iter().map(|(ai, _)| ai.clone()).collect();
    let record = descent_parameter(&a, basis)?;
    let rec = record
        .recovery
        .as_ref()
        .ok_or_else(|| DescentError::RecoveryUnsupported { field: fld.name() })?;
    let mut shifts = Vec::with_capacity(symbols.len());
    for (i, (ai, bi)) in symbols.iter().enumerate() {
        let ambient = bi.field();
        let a_l = lift_to(&ambient, ai)?;
        let c_l = lift_to(&ambient, &rec.cs[i])?;
        let s_l = lift_to(&ambient, &rec.preimages[i])?;
        let source = symbol_algebra(&ambient, fld.characteristic(), &c_l, bi)?;
        let target = symbol_algebra(&ambient, fld.characteristic(), &a_l, bi)?;
        let iso = shift_iso(&source, &target, &s_l)?;
        shifts.push(DecShift {
            index: i,
            c: rec.cs[i].clone(),
            preimage: rec.preimages[i].clone(),
            source,
            target,
            iso,
        });
    }
    let mut generators = Vec::new();
    let x_is_constant = match &record.x {
        Scalar::Ff { .. } => true,
        Scalar::Rf(r) => r.num.is_constant() && r.den.is_constant(),
    };
    if !x_is_constant {
        generators.push("x".to_string());
    }
    for i in 0..symbols.len() {
        generators.push(format!("b{}", i + 1));
    }
    assert!(generators.len() <= basis.rank() + 1);
    Ok(DecWitness { record, shifts, generators })
}
