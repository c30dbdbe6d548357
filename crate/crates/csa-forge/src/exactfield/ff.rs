//! Finite fields F_{p^k} with table-driven arithmetic.
//!
//! Every supported field has at most 256 elements, so an element is a u8
//! index encoding the coefficient vector of its polynomial representative in
//! base p: the element sum c_i g^i has index sum c_i p^i. Extension fields
//! use a fixed published irreducible per (p, k); the table below lists them,
//! and construction rejects any reducible candidate by scanning the finished
//! multiplication table for zero divisors.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Published irreducibles, coefficients listed from degree 0 upward.
/// These are the Conway polynomials for each (p, k).
pub const PUBLISHED_IRREDUCIBLES: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u32),
    TooLarge { p: u32, k: u32 },
    NoPublishedIrreducible { p: u32, k: u32 },
    ReducibleModulus { p: u32, coeffs: Vec<u32> },
    BadModulus(String),
    UnknownField(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{} is not prime", p),
            FieldError::TooLarge { p, k } => {
                write!(f, "field F_{}^{} exceeds the 256-element table limit", p, k)
            }
            FieldError::NoPublishedIrreducible { p, k } => {
                write!(f, "no published irreducible for p={}, k={}", p, k)
            }
            FieldError::ReducibleModulus { p, coeffs } => {
                write!(f, "modulus {:?} over F_{} has zero divisors", coeffs, p)
            }
            FieldError::BadModulus(s) => write!(f, "bad modulus: {}", s),
            FieldError::UnknownField(s) => write!(f, "unknown field name: {}", s),
        }
    }
}

impl std::error::Error for FieldError {}

/// A concrete finite field with full operation tables.
pub struct FieldTable {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    pub name: String,
    /// Modulus coefficients from degree 0 upward; empty when k = 1.
    pub irred: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    frob: Vec<u8>,
    /// Absolute trace to F_p, stored as a residue 0..p.
    trace: Vec<u8>,
    /// Smallest x with x^p - x = y, or u16::MAX when none exists.
    wp_pre: Vec<u16>,
}

impl fmt::Debug for FieldTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldTable({})", self.name)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Digits of idx in base p, little-endian, padded to k entries.
fn digits(idx: u32, p: u32, k: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(k as usize);
    let mut n = idx;
    for _ in 0..k {
        v.push(n % p);
        n /= p;
    }
    v
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    let mut n = 0;
    for &d in ds.iter().rev() {
        n = n * p + d;
    }
    n
}

/// Multiply two coefficient vectors mod p, then reduce mod the modulus.
fn polymulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // modulus is monic, so long division is plain subtraction of shifts
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (e, &m) in modulus.iter().enumerate().take(k) {
            let pos = d - k + e;
            prod[pos] = (prod[pos] + c * (p - m % p)) % p;
        }
    }
    prod.truncate(k.max(1));
    prod
}

impl FieldTable {
    fn build(p: u32, k: u32, irred: &[u32]) -> Result<FieldTable, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let q = p.checked_pow(k).filter(|&q| q <= 256).ok_or(FieldError::TooLarge { p, k })?;
        if k >= 2 {
            if irred.len() != k as usize + 1 {
                return Err(FieldError::BadModulus(format!(
                    "expected degree {} modulus, got {} coefficients",
                    k,
                    irred.len()
                )));
            }
            if irred[k as usize] != 1 {
                return Err(FieldError::BadModulus("modulus must be monic".into()));
            }
            if irred.iter().any(|&c| c >= p) {
                return Err(FieldError::BadModulus("coefficients must be reduced mod p".into()));
            }
        }
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        let mut neg = vec![0u8; qs];
        for i in 0..q {
            let di = digits(i, p, k);
            let nd: Vec<u32> = di.iter().map(|&c| (p - c) % p).collect();
            neg[i as usize] = undigits(&nd, p) as u8;
            for j in 0..q {
                let dj = digits(j, p, k);
                let ds: Vec<u32> = di.iter().zip(&dj).map(|(&a, &b)| (a + b) % p).collect();
                add[(i * q + j) as usize] = undigits(&ds, p) as u8;
                let dm = if k == 1 {
                    vec![(i * j) % p]
                } else {
                    polymulmod(&di, &dj, irred, p)
                };
                mul[(i * q + j) as usize] = undigits(&dm, p) as u8;
            }
        }
        // a zero divisor here means the modulus was reducible
        for i in 1..q {
            for j in 1..q {
                if mul[(i * q + j) as usize] == 0 {
                    return Err(FieldError::ReducibleModulus { p, coeffs: irred.to_vec() });
                }
            }
        }
        let mut inv = vec![0u8; qs];
        for i in 1..q {
            for j in 1..q {
                if mul[(i * q + j) as usize] == 1 {
                    inv[i as usize] = j as u8;
                    break;
                }
            }
        }
        let mut frob = vec![0u8; qs];
        for i in 0..q {
            let mut acc = 1u32;
            for _ in 0..p {
                acc = mul[(acc * q + i) as usize] as u32;
            }
            frob[i as usize] = acc as u8;
        }
        let mut trace = vec![0u8; qs];
        for i in 0..q {
            let mut term = i;
            let mut t = 0u32;
            for _ in 0..k {
                t = add[(t * q + term) as usize] as u32;
                term = frob[term as usize] as u32;
            }
            debug_assert!(t < p, "trace must land in the prime subfield");
            trace[i as usize] = t as u8;
        }
        let mut wp_pre = vec![u16::MAX; qs];
        for x in 0..q {
            let y = add[(frob[x as usize] as u32 * q + neg[x as usize] as u32) as usize];
            if wp_pre[y as usize] == u16::MAX {
                wp_pre[y as usize] = x as u16;
            }
        }
        Ok(FieldTable {
            p,
            k,
            q,
            name: format!("F{}", q),
            irred: if k >= 2 { irred.to_vec() } else { Vec::new() },
            add,
            mul,
            neg,
            inv,
            frob,
            trace,
            wp_pre,
        })
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; None for zero.
    #[inline]
    pub fn inv(&self, a: u8) -> Option<u8> {
        if a == 0 {
            None
        } else {
            Some(self.inv[a as usize])
        }
    }

    #[inline]
    pub fn frob(&self, a: u8) -> u8 {
        self.frob[a as usize]
    }

    /// x^p - x.
    #[inline]
    pub fn wp(&self, a: u8) -> u8 {
        self.sub(self.frob(a), a)
    }

    /// Smallest preimage under x^p - x, if the class is trivial.
    #[inline]
    pub fn wp_preimage(&self, a: u8) -> Option<u8> {
        let x = self.wp_pre[a as usize];
        if x == u16::MAX {
            None
        } else {
            Some(x as u8)
        }
    }

    /// Absolute trace to F_p as a residue.
    #[inline]
    pub fn trace(&self, a: u8) -> u8 {
        self.trace[a as usize]
    }

    pub fn pow(&self, a: u8, e: u64) -> u8 {
        let mut acc = 1u8;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Index of the residue n viewed in the prime subfield.
    #[inline]
    pub fn from_residue(&self, n: u64) -> u8 {
        (n % self.p as u64) as u8
    }

    /// The generator g of the polynomial representation (index p), or 1 in a prime field.
    pub fn gen(&self) -> u8 {
        if self.k == 1 {
            1
        } else {
            self.p as u8
        }
    }

    /// Coefficients of the element's polynomial representative, degree 0 upward.
    pub fn coeffs(&self, a: u8) -> Vec<u32> {
        digits(a as u32, self.p, self.k)
    }

    pub fn from_coeffs(&self, ds: &[u32]) -> u8 {
        let mut v: Vec<u32> = ds.iter().map(|&c| c % self.p).collect();
        v.truncate(self.k as usize);
        undigits(&v, self.p) as u8
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.q).map(|i| i as u8)
    }
}

type Registry = Mutex<HashMap<(u32, u32, Vec<u32>), Arc<FieldTable>>>;

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The field F_{p^k} with its published modulus.
pub fn field(p: u32, k: u32) -> Result<Arc<FieldTable>, FieldError> {
    if k == 1 {
        return field_with_modulus(p, 1, &[]);
    }
    let irred = PUBLISHED_IRREDUCIBLES
        .iter()
        .find(|&&(tp, tk, _)| tp == p && tk == k)
        .map(|&(_, _, cs)| cs)
        .ok_or(FieldError::NoPublishedIrreducible { p, k })?;
    field_with_modulus(p, k, irred)
}

/// A field with an explicit modulus, memoized so repeated lookups share tables.
pub fn field_with_modulus(p: u32, k: u32, irred: &[u32]) -> Result<Arc<FieldTable>, FieldError> {
    let key = (p, k, irred.to_vec());
    if let Some(t) = registry().lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let t = Arc::new(FieldTable::build(p, k, irred)?);
    registry().lock().unwrap().insert(key, t.clone());
    Ok(t)
}

/// Index table embedding `from` into `to` as a subfield, when one exists.
/// The generator of `from` maps to the smallest root of its modulus in `to`,
/// so the embedding is deterministic.
pub fn embedding(from: &Arc<FieldTable>, to: &Arc<FieldTable>) -> Option<Vec<u8>> {
    if from.p != to.p || to.k % from.k != 0 {
        return None;
    }
    if Arc::ptr_eq(from, to) || (from.q == to.q && from.irred == to.irred) {
        return Some((0..from.q).map(|i| i as u8).collect());
    }
    if from.k == 1 {
        return Some((0..from.q).map(|i| i as u8).collect());
    }
    let root = (0..to.q).map(|i| i as u8).find(|&r| {
        let mut acc = 0u8;
        // evaluate the modulus of `from` at r inside `to`
        for (e, &c) in from.irred.iter().enumerate() {
            let term = to.mul(to.from_residue(c as u64), to.pow(r, e as u64));
            acc = to.add(acc, term);
        }
        acc == 0
    })?;
    let mut table = vec![0u8; from.q as usize];
    for a in from.elements() {
        let mut acc = 0u8;
        for (e, &c) in from.coeffs(a).iter().enumerate() {
            acc = to.add(acc, to.mul(to.from_residue(c as u64), to.pow(root, e as u64)));
        }
        table[a as usize] = acc;
    }
    Some(table)
}

/// Resolve a name like "F16" or "F81" to a field with its published modulus.
pub fn field_by_name(name: &str) -> Result<Arc<FieldTable>, FieldError> {
    let q: u32 = name
        .strip_prefix('F')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| FieldError::UnknownField(name.to_string()))?;
    for p in 2..=q {
        if !is_prime(p) {
            continue;
        }
        let mut k = 0;
        let mut n = q;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        if n == 1 {
            return field(p, k);
        }
        if q % p == 0 {
            break;
        }
    }
    Err(FieldError::UnknownField(name.to_string()))
}
