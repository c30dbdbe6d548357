//! Artin-Schreier tower rings.
//!
//! A tower adjoins generators g_1, ..., g_m to a base field, each satisfying
//! g_i^p = g_i + a_i with a_i a base-field constant. The result is a quotient
//! ring of rank p^m; it is a field exactly when every layer polynomial stays
//! irreducible, and elements expose `inv` as an `Option` so zero divisors are
//! detected rather than assumed away. Elements are coordinate vectors over
//! the base in the monomial basis g_1^{e_1} ... g_m^{e_m}, 0 <= e_i < p,
//! indexed by the digit encoding sum e_i p^i.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::exactfield::scalar::{FieldDesc, Scalar};
use crate::linalg::Mat;

#[derive(Debug)]
pub struct Tower {
    pub base: FieldDesc,
    /// Layer generators, innermost first: (name, constant a_i).
    pub layers: Vec<(String, Scalar)>,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Tower) -> bool {
        self.base == other.base
            && self.layers.len() == other.layers.len()
            && self
                .layers
                .iter()
                .zip(&other.layers)
                .all(|((n1, a1), (n2, a2))| n1 == n2 && a1 == a2)
    }
}

impl Tower {
    pub fn new(base: FieldDesc, layers: Vec<(String, Scalar)>) -> Arc<Tower> {
        for (name, a) in &layers {
            assert!(a.field() == base, "layer constant for {name} not in the base field");
            assert!(!name.is_empty());
        }
        Arc::new(Tower { base, layers })
    }

    pub fn p(&self) -> u32 {
        self.base.characteristic()
    }

    pub fn rank(&self) -> usize {
        (self.p() as usize).pow(self.layers.len() as u32)
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Digit e_i of basis index ix at layer i.
    fn digit(&self, ix: usize, layer: usize) -> usize {
        let p = self.p() as usize;
        ix / p.pow(layer as u32) % p
    }

    pub fn monomial_name(&self, ix: usize) -> String {
        let mut parts = Vec::new();
        for (i, (name, _)) in self.layers.iter().enumerate() {
            let e = self.digit(ix, i);
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

#[derive(Clone)]
pub struct TowerElem {
    pub tower: Arc<Tower>,
    pub coords: Vec<Scalar>,
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &TowerElem) -> bool {
        debug_assert!(self.tower == other.tower, "comparing elements of different towers");
        self.coords == other.coords
    }
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::exactfield::grammar::print_tower_elem(self))
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::exactfield::grammar::print_tower_elem(self))
    }
}

impl TowerElem {
    pub fn zero(tower: &Arc<Tower>) -> TowerElem {
        TowerElem { tower: tower.clone(), coords: vec![tower.base.zero(); tower.rank()] }
    }

    pub fn one(tower: &Arc<Tower>) -> TowerElem {
        Self::from_base(tower, tower.base.one())
    }

    pub fn from_base(tower: &Arc<Tower>, c: Scalar) -> TowerElem {
        assert!(c.field() == tower.base);
        let mut e = Self::zero(tower);
        e.coords[0] = c;
        e
    }

    /// The layer generator g_i.
    pub fn gen(tower: &Arc<Tower>, layer: usize) -> TowerElem {
        let p = tower.p() as usize;
        let mut e = Self::zero(tower);
        e.coords[p.pow(layer as u32)] = tower.base.one();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// Largest exponent of layer i appearing with a nonzero coefficient.
    pub fn degree_in(&self, layer: usize) -> usize {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(ix, _)| self.tower.digit(ix, layer))
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, rhs: &TowerElem) -> TowerElem {
        debug_assert!(self.tower == rhs.tower);
        TowerElem {
            tower: self.tower.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn neg(&self) -> TowerElem {
        TowerElem {
            tower: self.tower.clone(),
            coords: self.coords.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn sub(&self, rhs: &TowerElem) -> TowerElem {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &Scalar) -> TowerElem {
        TowerElem {
            tower: self.tower.clone(),
            coords: self.coords.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &TowerElem) -> TowerElem {
        debug_assert!(self.tower == rhs.tower);
        let t = &self.tower;
        let p = t.p() as usize;
        let m = t.depth();
        // raw exponent vectors may reach 2p-2 per layer before reduction
        let mut acc: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = a.mul(b);
                let e: Vec<usize> = (0..m).map(|l| t.digit(i, l) + t.digit(j, l)).collect();
                acc_add(&mut acc, e, c, &t.base);
            }
        }
        // reduce g_l^k = g_l^{k-p} * (g_l + a_l) for k >= p; since k <= 2p-2
        // one pass per layer suffices
        for l in 0..m {
            let al = &t.layers[l].1;
            let heavy: Vec<(Vec<usize>, Scalar)> =
                acc.iter().filter(|(e, _)| e[l] >= p).map(|(e, c)| (e.clone(), c.clone())).collect();
            for (e, c) in heavy {
                acc.remove(&e);
                let mut e1 = e.clone();
                e1[l] = e[l] - p + 1;
                acc_add(&mut acc, e1, c.clone(), &t.base);
                let mut e2 = e;
                e2[l] -= p;
                acc_add(&mut acc, e2, c.mul(al), &t.base);
            }
        }
        let mut out = Self::zero(t);
        for (e, c) in acc {
            if c.is_zero() {
                continue;
            }
            let ix: usize = (0..m).map(|l| e[l] * p.pow(l as u32)).sum();
            out.coords[ix] = out.coords[ix].add(&c);
        }
        out
    }

    pub fn pow(&self, e: u64) -> TowerElem {
        let mut acc = Self::one(&self.tower);
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

    /// x^p - x.
    pub fn wp(&self) -> TowerElem {
        self.pow(self.tower.p() as u64).sub(self)
    }

    /// Multiplicative inverse via the regular representation; None for zero
    /// divisors and zero.
    pub fn inv(&self) -> Option<TowerElem> {
        let t = &self.tower;
        let n = t.rank();
        if n == 1 {
            return self.coords[0].inv().map(|c| TowerElem {
                tower: t.clone(),
                coords: vec![c],
            });
        }
        let mut m = Mat::zero(n, n, &t.base);
        for j in 0..n {
            let mut bj = Self::zero(t);
            bj.coords[j] = t.base.one();
            let col = self.mul(&bj);
            for i in 0..n {
                m[(i, j)] = col.coords[i].clone();
            }
        }
        let mut e0 = vec![t.base.zero(); n];
        e0[0] = t.base.one();
        let y = m.solve(&e0)?;
        let cand = TowerElem { tower: t.clone(), coords: y };
        // in a ring with zero divisors a one-sided solve could be spurious
        if cand.mul(self).is_one() && self.mul(&cand).is_one() {
            Some(cand)
        } else {
            None
        }
    }

    pub fn div(&self, rhs: &TowerElem) -> Option<TowerElem> {
        rhs.inv().map(|i| self.mul(&i))
    }

    /// The layer automorphism g_layer -> g_layer + 1, identity on the rest.
    pub fn conj(&self, layer: usize) -> TowerElem {
        let t = &self.tower;
        let p = t.p() as usize;
        let mut out = Self::zero(t);
        for (ix, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = t.digit(ix, layer);
            // (g+1)^e = sum_j C(e,j) g^j
            for j in 0..=e {
                let bc = binom_mod_p(e, j, t.p());
                if bc == 0 {
                    continue;
                }
                let step = p.pow(layer as u32);
                let target = ix - e * step + j * step;
                let mut add = c.clone();
                for _ in 0..bc - 1 {
                    add = add.add(c);
                }
                out.coords[target] = out.coords[target].add(&add);
            }
        }
        out
    }

    /// Product of x with its layer conjugate (p = 2); lands in the subring
    /// with no g_layer component.
    pub fn norm(&self, layer: usize) -> TowerElem {
        assert_eq!(self.tower.p(), 2, "layer norm implemented for p = 2");
        let n = self.mul(&self.conj(layer));
        debug_assert_eq!(n.degree_in(layer), 0);
        n
    }

    /// Sum of x and its layer conjugate (p = 2).
    pub fn trace(&self, layer: usize) -> TowerElem {
        assert_eq!(self.tower.p(), 2, "layer trace implemented for p = 2");
        let n = self.add(&self.conj(layer));
        debug_assert_eq!(n.degree_in(layer), 0);
        n
    }

    /// Reinterpret an element of a prefix tower inside this one.
    pub fn embed_from(tower: &Arc<Tower>, sub: &TowerElem) -> TowerElem {
        assert!(sub.tower.base == tower.base);
        assert!(sub.tower.depth() <= tower.depth());
        assert!(tower.layers[..sub.tower.depth()]
            .iter()
            .zip(&sub.tower.layers)
            .all(|(a, b)| a.0 == b.0 && a.1 == b.1));
        let mut out = Self::zero(tower);
        for (ix, c) in sub.coords.iter().enumerate() {
            out.coords[ix] = c.clone();
        }
        out
    }

    /// The base-field constant part, when no generator appears.
    pub fn as_base(&self) -> Option<Scalar> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }
}

fn acc_add(map: &mut BTreeMap<Vec<usize>, Scalar>, e: Vec<usize>, c: Scalar, fld: &FieldDesc) {
    let slot = map.entry(e).or_insert_with(|| fld.zero());
    *slot = slot.add(&c);
}

fn binom_mod_p(n: usize, k: usize, p: u32) -> u32 {
    // n < 2p in practice; a plain Pascal evaluation mod p is plenty
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= (n - i) as u64;
        den *= (i + 1) as u64;
    }
    ((num / den) % p as u64) as u32
}
