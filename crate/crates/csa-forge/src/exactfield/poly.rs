//! Multivariate polynomials over a finite coefficient field.
//!
//! Terms are kept sorted in descending graded-lex order with nonzero
//! coefficients, so structural equality is semantic equality. Univariate
//! multiplication, division, and gcd route through a dense representation,
//! bit-packed when the coefficient field is F_2.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::ff::FieldTable;

/// Context for a rational function field: coefficient field plus named variables.
#[derive(Debug)]
pub struct RfCtx {
    pub base: Arc<FieldTable>,
    pub vars: Vec<String>,
    /// Per-variable degree cap enforced on coordinate inputs (not intermediates).
    pub degree_cap: u16,
}

impl RfCtx {
    pub fn new(base: Arc<FieldTable>, vars: Vec<String>) -> Arc<RfCtx> {
        Arc::new(RfCtx { base, vars, degree_cap: 8 })
    }

    pub fn with_cap(base: Arc<FieldTable>, vars: Vec<String>, degree_cap: u16) -> Arc<RfCtx> {
        Arc::new(RfCtx { base, vars, degree_cap })
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

impl PartialEq for RfCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.base, &other.base) || (self.base.name == other.base.name && self.base.irred == other.base.irred)
    }
}

pub fn same_ctx(a: &Arc<RfCtx>, b: &Arc<RfCtx>) -> bool {
    Arc::ptr_eq(a, b) || (a.base.name == b.base.name && a.vars == b.vars)
}

/// Descending graded-lex order on exponent vectors.
pub fn mono_cmp(a: &[u16], b: &[u16]) -> Ordering {
    let ta: u32 = a.iter().map(|&e| e as u32).sum();
    let tb: u32 = b.iter().map(|&e| e as u32).sum();
    match ta.cmp(&tb) {
        Ordering::Equal => a.cmp(b),
        o => o,
    }
}

#[derive(Clone)]
pub struct MultiPoly {
    pub ctx: Arc<RfCtx>,
    /// (exponents, coefficient index), sorted descending by `mono_cmp`, coeffs nonzero.
    pub terms: Vec<(Vec<u16>, u8)>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({:?})", self.terms)
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(ctx: &Arc<RfCtx>) -> MultiPoly {
        MultiPoly { ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn constant(ctx: &Arc<RfCtx>, c: u8) -> MultiPoly {
        if c == 0 {
            return Self::zero(ctx);
        }
        MultiPoly { ctx: ctx.clone(), terms: vec![(vec![0; ctx.vars.len()], c)] }
    }

    pub fn one(ctx: &Arc<RfCtx>) -> MultiPoly {
        Self::constant(ctx, 1)
    }

    pub fn var(ctx: &Arc<RfCtx>, i: usize) -> MultiPoly {
        let mut e = vec![0u16; ctx.vars.len()];
        e[i] = 1;
        MultiPoly { ctx: ctx.clone(), terms: vec![(e, 1)] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1 == 1 && self.terms[0].0.iter().all(|&e| e == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<u8> {
        if self.terms.is_empty() {
            Some(0)
        } else if self.is_constant() {
            Some(self.terms[0].1)
        } else {
            None
        }
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().map(|&x| x as u32).sum()).max().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> u8 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    fn from_map(ctx: &Arc<RfCtx>, map: BTreeMap<Vec<u16>, u8>) -> MultiPoly {
        let mut terms: Vec<(Vec<u16>, u8)> = map.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_by(|a, b| mono_cmp(&b.0, &a.0));
        MultiPoly { ctx: ctx.clone(), terms }
    }

    pub fn add(&self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert!(same_ctx(&self.ctx, &rhs.ctx));
        let f = &self.ctx.base;
        let mut out: Vec<(Vec<u16>, u8)> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            match mono_cmp(&self.terms[i].0, &rhs.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(rhs.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(self.terms[i].1, rhs.terms[j].1);
                    if c != 0 {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&rhs.terms[j..]);
        MultiPoly { ctx: self.ctx.clone(), terms: out }
    }

    pub fn neg(&self) -> MultiPoly {
        let f = &self.ctx.base;
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f.neg(*c))).collect(),
        }
    }

    pub fn sub(&self, rhs: &MultiPoly) -> MultiPoly {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: u8) -> MultiPoly {
        if c == 0 {
            return Self::zero(&self.ctx);
        }
        let f = &self.ctx.base;
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), f.mul(*a, c))).collect(),
        }
    }

    pub fn mul(&self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert!(same_ctx(&self.ctx, &rhs.ctx));
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.ctx);
        }
        if self.ctx.vars.len() == 1 {
            let a = self.to_dense();
            let b = rhs.to_dense();
            return Self::from_dense(&self.ctx, &dense_mul(&self.ctx.base, &a, &b));
        }
        let f = &self.ctx.base;
        let mut map: BTreeMap<Vec<u16>, u8> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let c = f.mul(*ca, *cb);
                if c == 0 {
                    continue;
                }
                let e: Vec<u16> = ea
                    .iter()
                    .zip(eb)
                    .map(|(&x, &y)| x.checked_add(y).expect("monomial degree overflow"))
                    .collect();
                let slot = map.entry(e).or_insert(0);
                *slot = f.add(*slot, c);
            }
        }
        Self::from_map(&self.ctx, map)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division; Err when the divisor does not divide exactly.
    pub fn exact_div(&self, rhs: &MultiPoly) -> Result<MultiPoly, String> {
        if rhs.is_zero() {
            return Err("division by zero polynomial".into());
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        if self.ctx.vars.len() == 1 {
            let (q, r) = dense_divrem(&self.ctx.base, &self.to_dense(), &rhs.to_dense());
            if r.iter().any(|&c| c != 0) {
                return Err("non-exact univariate division".into());
            }
            return Ok(Self::from_dense(&self.ctx, &q));
        }
        let f = self.ctx.base.clone();
        let mut rem = self.clone();
        let mut quo: BTreeMap<Vec<u16>, u8> = BTreeMap::new();
        let (lead_e, lead_c) = (rhs.terms[0].0.clone(), rhs.terms[0].1);
        let lead_inv = f.inv(lead_c).unwrap();
        while !rem.is_zero() {
            let (re, rc) = (&rem.terms[0].0, rem.terms[0].1);
            if re.iter().zip(&lead_e).any(|(&a, &b)| a < b) {
                return Err("non-exact multivariate division".into());
            }
            let qe: Vec<u16> = re.iter().zip(&lead_e).map(|(&a, &b)| a - b).collect();
            let qc = f.mul(rc, lead_inv);
            let mono = MultiPoly { ctx: self.ctx.clone(), terms: vec![(qe.clone(), qc)] };
            rem = rem.sub(&mono.mul(rhs));
            let slot = quo.entry(qe).or_insert(0);
            *slot = f.add(*slot, qc);
        }
        Ok(Self::from_map(&self.ctx, quo))
    }

    /// Dense coefficient vector for univariate polynomials, degree 0 upward.
    pub fn to_dense(&self) -> Vec<u8> {
        debug_assert_eq!(self.ctx.vars.len(), 1);
        let d = self.degree_in(0) as usize;
        let mut out = vec![0u8; d + 1];
        for (e, c) in &self.terms {
            out[e[0] as usize] = *c;
        }
        out
    }

    pub fn from_dense(ctx: &Arc<RfCtx>, coeffs: &[u8]) -> MultiPoly {
        let mut terms: Vec<(Vec<u16>, u8)> = coeffs
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(i, &c)| (vec![i as u16], c))
            .collect();
        terms.reverse();
        MultiPoly { ctx: ctx.clone(), terms }
    }

    /// Monic gcd for univariate polynomials.
    pub fn gcd_univ(&self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.ctx.vars.len(), 1);
        let g = dense_gcd(&self.ctx.base, self.to_dense(), rhs.to_dense());
        Self::from_dense(&self.ctx, &g)
    }

    /// Evaluate at a point, mapping coefficients through `emb` into `target`.
    /// `emb` must send the coefficient field's indices into `target` indices.
    pub fn eval_embedded(&self, target: &FieldTable, emb: &[u8], point: &[u8]) -> u8 {
        debug_assert_eq!(point.len(), self.ctx.vars.len());
        let mut acc = 0u8;
        for (e, c) in &self.terms {
            let mut t = emb[*c as usize];
            for (v, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    t = target.mul(t, target.pow(point[v], exp as u64));
                }
            }
            acc = target.add(acc, t);
        }
        acc
    }

    /// Evaluate within the coefficient field itself.
    pub fn eval(&self, point: &[u8]) -> u8 {
        let f = &self.ctx.base;
        let id: Vec<u8> = (0..f.q as usize).map(|i| i as u8).collect();
        self.eval_embedded(f, &id, point)
    }

    /// Per-variable minimum exponent over all terms; the common monomial content.
    pub fn mono_content(&self) -> Vec<u16> {
        let n = self.ctx.vars.len();
        let mut m = vec![u16::MAX; n];
        for (e, _) in &self.terms {
            for (i, &x) in e.iter().enumerate() {
                m[i] = m[i].min(x);
            }
        }
        if self.terms.is_empty() {
            m = vec![0; n];
        }
        m
    }

    pub fn shift_down(&self, by: &[u16]) -> MultiPoly {
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(by).map(|(&a, &b)| a - b).collect(), *c))
                .collect(),
        }
    }

    /// Apply Frobenius to every coefficient (used by semilinear solves).
    pub fn coeff_frob(&self) -> MultiPoly {
        let f = &self.ctx.base;
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f.frob(*c))).collect(),
        }
    }
}

// ---- dense univariate helpers ----

fn dense_trim(v: &mut Vec<u8>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn dense_mul(f: &FieldTable, a: &[u8], b: &[u8]) -> Vec<u8> {
    if a.is_empty() || b.is_empty() || a.iter().all(|&c| c == 0) || b.iter().all(|&c| c == 0) {
        return Vec::new();
    }
    if f.q == 2 {
        return bits_to_dense(&bits_mul(&dense_to_bits(a), &dense_to_bits(b)));
    }
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                out[i + j] = f.add(out[i + j], f.mul(ai, bj));
            }
        }
    }
    dense_trim(&mut out);
    out
}

/// Quotient and remainder; divisor must be nonzero.
pub fn dense_divrem(f: &FieldTable, a: &[u8], b: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let mut b = b.to_vec();
    dense_trim(&mut b);
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = a.to_vec();
    dense_trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    if f.q == 2 {
        let (q, r) = bits_divrem(&dense_to_bits(&rem), &dense_to_bits(&b));
        return (bits_to_dense(&q), bits_to_dense(&r));
    }
    let lead_inv = f.inv(*b.last().unwrap()).unwrap();
    let mut quo = vec![0u8; rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = f.mul(*rem.last().unwrap(), lead_inv);
        quo[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            rem[shift + i] = f.sub(rem[shift + i], f.mul(c, bi));
        }
        dense_trim(&mut rem);
    }
    dense_trim(&mut quo);
    (quo, rem)
}

pub fn dense_gcd(f: &FieldTable, mut a: Vec<u8>, mut b: Vec<u8>) -> Vec<u8> {
    dense_trim(&mut a);
    dense_trim(&mut b);
    if f.q == 2 {
        let g = bits_gcd(dense_to_bits(&a), dense_to_bits(&b));
        return bits_to_dense(&g);
    }
    while !b.is_empty() {
        let (_, r) = dense_divrem(f, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        let inv = f.inv(lc).unwrap();
        for c in &mut a {
            *c = f.mul(*c, inv);
        }
    }
    a
}

// ---- bit-packed F_2[t] ----

fn dense_to_bits(a: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; (a.len() + 63) / 64];
    for (i, &c) in a.iter().enumerate() {
        if c != 0 {
            out[i / 64] |= 1u64 << (i % 64);
        }
    }
    bits_trim(&mut out);
    out
}

fn bits_to_dense(a: &[u64]) -> Vec<u8> {
    let deg = match bits_degree(a) {
        Some(d) => d,
        None => return Vec::new(),
    };
    let mut out = vec![0u8; deg + 1];
    for (i, slot) in out.iter_mut().enumerate() {
        if a[i / 64] >> (i % 64) & 1 == 1 {
            *slot = 1;
        }
    }
    out
}

fn bits_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn bits_degree(a: &[u64]) -> Option<usize> {
    for (w, &x) in a.iter().enumerate().rev() {
        if x != 0 {
            return Some(w * 64 + 63 - x.leading_zeros() as usize);
        }
    }
    None
}

fn bits_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &aw) in a.iter().enumerate() {
        if aw == 0 {
            continue;
        }
        for bit in 0..64 {
            if aw >> bit & 1 == 1 {
                for (j, &bw) in b.iter().enumerate() {
                    if bw == 0 {
                        continue;
                    }
                    out[i + j] ^= bw << bit;
                    if bit > 0 {
                        out[i + j + 1] ^= bw >> (64 - bit);
                    }
                }
            }
        }
    }
    bits_trim(&mut out);
    out
}

fn bits_divrem(a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = bits_degree(b).expect("division by zero polynomial");
    let mut rem = a.to_vec();
    let da = match bits_degree(&rem) {
        None => return (Vec::new(), Vec::new()),
        Some(d) => d,
    };
    if da < db {
        return (Vec::new(), rem);
    }
    let mut quo = vec![0u64; (da - db) / 64 + 1];
    loop {
        let dr = match bits_degree(&rem) {
            Some(d) if d >= db => d,
            _ => break,
        };
        let shift = dr - db;
        quo[shift / 64] |= 1u64 << (shift % 64);
        bits_xor_shifted(&mut rem, b, shift);
    }
    bits_trim(&mut rem);
    bits_trim(&mut quo);
    (quo, rem)
}

fn bits_xor_shifted(target: &mut [u64], src: &[u64], shift: usize) {
    let (words, bits) = (shift / 64, shift % 64);
    for (j, &w) in src.iter().enumerate() {
        if w == 0 {
            continue;
        }
        target[j + words] ^= w << bits;
        if bits > 0 && j + words + 1 < target.len() {
            target[j + words + 1] ^= w >> (64 - bits);
        }
    }
}

fn bits_gcd(mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    loop {
        let da = match bits_degree(&a) {
            None => {
                return b;
            }
            Some(d) => d,
        };
        let db = match bits_degree(&b) {
            None => {
                return a;
            }
            Some(d) => d,
        };
        if da < db {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        // reduce a by b
        let mut rem = a.clone();
        loop {
            let dr = match bits_degree(&rem) {
                Some(d) if d >= db => d,
                _ => break,
            };
            bits_xor_shifted(&mut rem, &b, dr - db);
        }
        bits_trim(&mut rem);
        a = b;
        b = rem;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ff::field;

    fn ctx1() -> Arc<RfCtx> {
        RfCtx::new(field(2, 1).unwrap(), vec!["t".into()])
    }

    fn ctx2() -> Arc<RfCtx> {
        RfCtx::new(field(2, 1).unwrap(), vec!["x".into(), "y".into()])
    }

    #[test]
    fn univariate_mul_matches_hand_expansion() {
        let c = ctx1();
        let t = MultiPoly::var(&c, 0);
        let one = MultiPoly::one(&c);
        // (t+1)^2 = t^2+1 over F_2
        let sq = t.add(&one).pow(2);
        let expect = t.pow(2).add(&one);
        assert_eq!(sq, expect);
    }

    #[test]
    fn gcd_of_t2_plus_t_and_t() {
        let c = ctx1();
        let t = MultiPoly::var(&c, 0);
        let f = t.pow(2).add(&t);
        let g = f.gcd_univ(&t);
        assert_eq!(g, t);
    }

    #[test]
    fn exact_division_multivariate() {
        let c = ctx2();
        let x = MultiPoly::var(&c, 0);
        let y = MultiPoly::var(&c, 1);
        let prod = x.add(&y).mul(&x.add(&MultiPoly::one(&c)));
        let q = prod.exact_div(&x.add(&y)).unwrap();
        assert_eq!(q, x.add(&MultiPoly::one(&c)));
        assert!(prod.add(&MultiPoly::one(&c)).exact_div(&x.add(&y)).is_err());
    }

    #[test]
    fn dense_matches_sparse_over_f3() {
        let c = RfCtx::new(field(3, 1).unwrap(), vec!["t".into()]);
        let t = MultiPoly::var(&c, 0);
        let two = MultiPoly::constant(&c, 2);
        let a = t.pow(3).add(&two.mul(&t)).add(&MultiPoly::one(&c));
        let b = t.pow(2).add(&two);
        let p = a.mul(&b);
        // spot value: evaluate both sides at t = 2
        assert_eq!(p.eval(&[2]), c.base.mul(a.eval(&[2]), b.eval(&[2])));
        let (q, r) = dense_divrem(&c.base, &p.to_dense(), &b.to_dense());
        assert_eq!(MultiPoly::from_dense(&c, &q), a);
        assert!(r.is_empty());
    }

    #[test]
    fn bitpacked_gcd_large() {
        let c = ctx1();
        let t = MultiPoly::var(&c, 0);
        let one = MultiPoly::one(&c);
        let a = t.pow(2).add(&t).add(&one);
        let b = t.pow(3).add(&one);
        let prod_a = a.mul(&b);
        let prod_b = a.mul(&t.pow(5).add(&t.pow(2)).add(&one));
        let g = prod_a.gcd_univ(&prod_b);
        // result is divisible by a and divides both products
        assert!(g.exact_div(&a).is_ok());
        assert!(prod_a.exact_div(&g).is_ok());
        assert!(prod_b.exact_div(&g).is_ok());
    }

    #[test]
    fn eval_embedded_into_extension() {
        let f2 = field(2, 1).unwrap();
        let f16 = field(2, 4).unwrap();
        let c = RfCtx::new(f2, vec!["t".into()]);
        let t = MultiPoly::var(&c, 0);
        let p = t.pow(2).add(&t);
        let emb = vec![0u8, 1u8];
        let g = f16.gen();
        // g^2 + g in F_16
        assert_eq!(p.eval_embedded(&f16, &emb, &[g]), f16.add(f16.mul(g, g), g));
    }
}
