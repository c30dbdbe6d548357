//! Witnessed rewriting calculus for 2-torsion Brauer symbols.
//!
//! A word is a finite multiset of slot pairs {a, b}, each pair standing for
//! the quaternion class [a, b) in characteristic 2. Every rewrite step
//! carries the data that justifies it: splitting steps are bilinearity
//! identities checked by arithmetic, killing and swapping steps carry an
//! explicit norm witness that is re-verified before the word changes. A
//! sequence of steps forms a transcript that can be replayed from scratch,
//! so a claimed decomposition is accepted only if every link in the chain
//! checks out.
//!
//! Slots are [`Value`]s, so the same calculus runs over a plain field and
//! over an adjoined-root ring K[al] with al^2 = al + a; the degree-8 chain
//! in [`rowen_replay`] starts over the extension and descends to the base
//! field at the end.

use std::fmt;
use std::sync::Arc;

use crate::exactfield::scalar::{FieldDesc, Scalar};
use crate::exactfield::tower::{Tower, TowerElem};
use crate::exactfield::value::{RingDesc, Value};
use crate::exactfield::adjoin_root;

#[derive(Debug, Clone, PartialEq)]
pub enum BrauerError {
    WrongCharacteristic { expected: u32, got: u32 },
    RingMismatch { value: String, ring: String },
    TermNotFound { term: String },
    SlotNotInvertible { slot: String },
    WitnessFails { step: String },
    PreconditionFails,
    DegenerateInput { what: String },
    DataMismatch { what: String },
    AtStep { index: usize, inner: Box<BrauerError> },
}

impl fmt::Display for BrauerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BrauerError::WrongCharacteristic { expected, got } => {
                write!(f, "needs characteristic {expected}, field has characteristic {got}")
            }
            BrauerError::RingMismatch { value, ring } => {
                write!(f, "value {value} does not live in {ring}")
            }
            BrauerError::TermNotFound { term } => {
                write!(f, "word does not contain the term {term}")
            }
            BrauerError::SlotNotInvertible { slot } => {
                write!(f, "slot entry {slot} is not invertible")
            }
            BrauerError::WitnessFails { step } => {
                write!(f, "norm witness fails to verify in step {step}")
            }
            BrauerError::PreconditionFails => {
                write!(f, "norm equality precondition fails")
            }
            BrauerError::DegenerateInput { what } => write!(f, "degenerate input: {what}"),
            BrauerError::DataMismatch { what } => write!(f, "inconsistent chain data: {what}"),
            BrauerError::AtStep { index, inner } => write!(f, "step {index}: {inner}"),
        }
    }
}

impl std::error::Error for BrauerError {}

fn values_equal(a: &Value, b: &Value) -> bool {
    a.sub(b).is_zero()
}

/// A pair (x, y) with x^2 + x y + a y^2 = b, certifying that b is a norm
/// from the quadratic ring R[r], r^2 = r + a.
#[derive(Debug, Clone)]
pub struct NormWitness {
    pub x: Value,
    pub y: Value,
}

impl NormWitness {
    pub fn new(x: Value, y: Value) -> NormWitness {
        NormWitness { x, y }
    }

    /// x^2 + x y + a y^2, the value this witness certifies for slot a.
    pub fn value(&self, a: &Value) -> Value {
        let xx = self.x.mul(&self.x);
        let xy = self.x.mul(&self.y);
        let ayy = a.mul(&self.y.mul(&self.y));
        xx.add(&xy).add(&ayy)
    }

    pub fn verify(&self, a: &Value, b: &Value) -> bool {
        values_equal(&self.value(a), b)
    }
}

/// Witness for a product of two witnessed values: multiply x1 + y1 r and
/// x2 + y2 r in R[r], r^2 = r + a, and read off the coordinates.
pub fn witness_mul(a: &Value, w1: &NormWitness, w2: &NormWitness) -> NormWitness {
    let x = w1.x.mul(&w2.x).add(&a.mul(&w1.y.mul(&w2.y)));
    let y = w1.x.mul(&w2.y).add(&w2.x.mul(&w1.y)).add(&w1.y.mul(&w2.y));
    NormWitness { x, y }
}

/// Witness for the inverse of the witnessed value: the conjugate divided by
/// the norm. Fails when the witnessed value is not invertible.
pub fn witness_inv(a: &Value, w: &NormWitness) -> Result<NormWitness, BrauerError> {
    let n = w.value(a);
    let ni = n.inv().ok_or(BrauerError::SlotNotInvertible { slot: format!("{n}") })?;
    Ok(NormWitness { x: w.x.add(&w.y).mul(&ni), y: w.y.mul(&ni) })
}

/// The trivial witness (c, 0) for the square c^2, valid for every slot.
pub fn square_witness(c: &Value) -> NormWitness {
    let zero = c.ring().zero();
    NormWitness { x: c.clone(), y: zero }
}

/// Turn a witness for n over the slot b + d into one over the slot d, given
/// beta with beta^2 - beta = b: replace x by x + beta y. The absorbed b is
/// exactly what the Artin-Schreier relation for beta contributes.
pub fn witness_shift(
    n: &Value,
    b: &Value,
    d: &Value,
    beta: &Value,
    w: &NormWitness,
) -> Result<NormWitness, BrauerError> {
    if !values_equal(&beta.wp(), b) {
        return Err(BrauerError::DataMismatch { what: format!("beta^2 - beta != {b}") });
    }
    if !w.verify(&b.add(d), n) {
        return Err(BrauerError::WitnessFails { step: "shift".to_string() });
    }
    let shifted = NormWitness { x: w.x.add(&beta.mul(&w.y)), y: w.y.clone() };
    debug_assert!(shifted.verify(d, n));
    Ok(shifted)
}

/// A formal sum of symbol pairs {a, b} with coefficients in Z/2. The
/// multiset is kept in a deterministic sorted order; repeated pairs are
/// legitimate and only cancel when [`BrauerWord::normalize`] is applied or
/// a step merges them.
#[derive(Debug, Clone)]
pub struct BrauerWord {
    pub ring: RingDesc,
    terms: Vec<(Value, Value)>,
}

impl BrauerWord {
    pub fn empty(ring: &RingDesc) -> Result<BrauerWord, BrauerError> {
        if ring.characteristic() != 2 {
            return Err(BrauerError::WrongCharacteristic {
                expected: 2,
                got: ring.characteristic(),
            });
        }
        Ok(BrauerWord { ring: ring.clone(), terms: Vec::new() })
    }

    pub fn from_terms(
        ring: &RingDesc,
        terms: Vec<(Value, Value)>,
    ) -> Result<BrauerWord, BrauerError> {
        let mut w = BrauerWord::empty(ring)?;
        for (a, b) in terms {
            w.insert_term(&a, &b)?;
        }
        Ok(w)
    }

    pub fn terms(&self) -> &[(Value, Value)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Re-express a value inside this word's ring: base scalars lift into a
    /// tower, constant tower elements drop to the base field.
    fn lift(&self, v: &Value) -> Result<Value, BrauerError> {
        let fail = || BrauerError::RingMismatch { value: format!("{v}"), ring: self.ring.name() };
        match (&self.ring, v) {
            (RingDesc::Field(f), Value::S(s)) => {
                if s.field() == *f {
                    Ok(v.clone())
                } else {
                    Err(fail())
                }
            }
            (RingDesc::Field(f), Value::T(te)) => {
                if te.tower.base == *f {
                    te.as_base().map(Value::S).ok_or_else(fail)
                } else {
                    Err(fail())
                }
            }
            (RingDesc::Tower(t), Value::S(s)) => {
                if s.field() == t.base {
                    Ok(Value::T(TowerElem::from_base(t, s.clone())))
                } else {
                    Err(fail())
                }
            }
            (RingDesc::Tower(t), Value::T(te)) => {
                if te.tower == *t {
                    Ok(v.clone())
                } else {
                    Err(fail())
                }
            }
        }
    }

    fn sort(&mut self) {
        self.terms
            .sort_by_key(|(a, b)| (a.sort_key(), b.sort_key()));
    }

    fn insert_term(&mut self, a: &Value, b: &Value) -> Result<(), BrauerError> {
        let a = self.lift(a)?;
        let b = self.lift(b)?;
        if b.inv().is_none() {
            return Err(BrauerError::SlotNotInvertible { slot: format!("{b}") });
        }
        self.terms.push((a, b));
        self.sort();
        Ok(())
    }

    fn remove_term(&mut self, a: &Value, b: &Value) -> Result<(), BrauerError> {
        let a = self.lift(a)?;
        let b = self.lift(b)?;
        let pos = self
            .terms
            .iter()
            .position(|(ta, tb)| values_equal(ta, &a) && values_equal(tb, &b));
        match pos {
            Some(i) => {
                self.terms.remove(i);
                Ok(())
            }
            None => Err(BrauerError::TermNotFound { term: format!("{{{a}, {b}}}") }),
        }
    }

    pub fn contains(&self, a: &Value, b: &Value) -> bool {
        match (self.lift(a), self.lift(b)) {
            (Ok(a), Ok(b)) => self
                .terms
                .iter()
                .any(|(ta, tb)| values_equal(ta, &a) && values_equal(tb, &b)),
            _ => false,
        }
    }

    /// Cancel pairs mod 2: a term appearing an even number of times drops
    /// out, an odd number of times survives once. Idempotent.
    pub fn normalize(&self) -> BrauerWord {
        let mut counted: Vec<((Value, Value), usize)> = Vec::new();
        for (a, b) in &self.terms {
            match counted
                .iter_mut()
                .find(|((ca, cb), _)| values_equal(ca, a) && values_equal(cb, b))
            {
                Some((_, n)) => *n += 1,
                None => counted.push(((a.clone(), b.clone()), 1)),
            }
        }
        let mut out = BrauerWord { ring: self.ring.clone(), terms: Vec::new() };
        for ((a, b), n) in counted {
            if n % 2 == 1 {
                out.terms.push((a, b));
            }
        }
        out.sort();
        out
    }
}

impl PartialEq for BrauerWord {
    fn eq(&self, other: &BrauerWord) -> bool {
        self.ring == other.ring
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((a1, b1), (a2, b2))| values_equal(a1, a2) && values_equal(b1, b2))
    }
}

impl fmt::Display for BrauerWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(a, b)| format!("{{{a}, {b}}}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Normalized copy of a word: repeated pairs cancelled mod 2.
pub fn normalize_word(w: &BrauerWord) -> BrauerWord {
    w.normalize()
}

/// One rewrite. Splitting steps are checked arithmetic identities; the
/// witness-bearing steps re-verify their witness before touching the word.
#[derive(Debug, Clone)]
pub enum RewriteStep {
    /// {a, b} + {a, c} <-> {a, b c}. With `merge` the two terms on the left
    /// are replaced by the product term; without it the product term is
    /// split into the two factors.
    BilinearSplit { a: Value, b: Value, c: Value, merge: bool },
    /// {a1 + a2, b} <-> {a1, b} + {a2, b}, same convention for `merge`.
    SlotAdd { a1: Value, a2: Value, b: Value, merge: bool },
    /// Delete {a, b}: the witness certifies b = x^2 + x y + a y^2, so the
    /// symbol is split.
    NormKill { a: Value, b: Value, w: NormWitness },
    /// Replace {a, b} by {a + (s^2 - s), b}: shifting the first slot by an
    /// Artin-Schreier image does not move the class.
    ASShift { a: Value, b: Value, s: Value },
    /// Replace {b, n} by {d, n}: the witness certifies n as a norm for the
    /// slot b + d, so {b + d, n} vanishes and the two symbols agree.
    ChainSwap { b: Value, d: Value, n: Value, w: NormWitness },
    /// Replace {a, old} by {a, new}: the witness certifies the product
    /// old * new as a norm for slot a, so {a, old * new} vanishes.
    ComeeedStep { a: Value, old: Value, new: Value, w: NormWitness },
}

impl RewriteStep {
    pub fn kind(&self) -> &'static str {
        match self {
            RewriteStep::BilinearSplit { .. } => "BilinearSplit",
            RewriteStep::SlotAdd { .. } => "SlotAdd",
            RewriteStep::NormKill { .. } => "NormKill",
            RewriteStep::ASShift { .. } => "ASShift",
            RewriteStep::ChainSwap { .. } => "ChainSwap",
            RewriteStep::ComeeedStep { .. } => "ComeeedStep",
        }
    }
}

/// Apply one step to a word. On any failure the original word is untouched
/// and the error says which check refused the step.
pub fn apply_step(word: &BrauerWord, step: &RewriteStep) -> Result<BrauerWord, BrauerError> {
    let mut out = word.clone();
    match step {
        RewriteStep::BilinearSplit { a, b, c, merge } => {
            let prod = b.mul(c);
            if *merge {
                out.remove_term(a, b)?;
                out.remove_term(a, c)?;
                out.insert_term(a, &prod)?;
            } else {
                out.remove_term(a, &prod)?;
                out.insert_term(a, b)?;
                out.insert_term(a, c)?;
            }
        }
        RewriteStep::SlotAdd { a1, a2, b, merge } => {
            let sum = a1.add(a2);
            if *merge {
                out.remove_term(a1, b)?;
                out.remove_term(a2, b)?;
                out.insert_term(&sum, b)?;
            } else {
                out.remove_term(&sum, b)?;
                out.insert_term(a1, b)?;
                out.insert_term(a2, b)?;
            }
        }
        RewriteStep::NormKill { a, b, w } => {
            if !w.verify(a, b) {
                return Err(BrauerError::WitnessFails { step: "NormKill".to_string() });
            }
            out.remove_term(a, b)?;
        }
        RewriteStep::ASShift { a, b, s } => {
            out.remove_term(a, b)?;
            out.insert_term(&a.add(&s.wp()), b)?;
        }
        RewriteStep::ChainSwap { b, d, n, w } => {
            if !w.verify(&b.add(d), n) {
                return Err(BrauerError::WitnessFails { step: "ChainSwap".to_string() });
            }
            out.remove_term(b, n)?;
            out.insert_term(d, n)?;
        }
        RewriteStep::ComeeedStep { a, old, new, w } => {
            if !w.verify(a, &old.mul(new)) {
                return Err(BrauerError::WitnessFails { step: "ComeeedStep".to_string() });
            }
            out.remove_term(a, old)?;
            out.insert_term(a, new)?;
        }
    }
    Ok(out)
}

/// A replayable rewrite chain: the starting word and every step in order.
#[derive(Debug, Clone)]
pub struct Transcript {
    pub ring: RingDesc,
    pub initial: BrauerWord,
    pub steps: Vec<RewriteStep>,
}

/// Re-run a transcript from its initial word. Fails with the index of the
/// first step that does not verify.
pub fn replay(t: &Transcript) -> Result<BrauerWord, BrauerError> {
    let mut word = t.initial.clone();
    for (i, step) in t.steps.iter().enumerate() {
        word = apply_step(&word, step)
            .map_err(|e| BrauerError::AtStep { index: i, inner: Box::new(e) })?;
    }
    Ok(word)
}

/// Certificate produced by the quadratic-extension rewriting lemma: over
/// T = R[al] with al^2 = al + a, the witness certifies
/// (x + y al)(v + y) as a norm for slot b, licensing the slot replacement
/// {b, x + y al} -> {b, v + y}.
#[derive(Debug, Clone)]
pub struct ComeeedCert {
    pub tower: Arc<Tower>,
    pub witness: NormWitness,
    pub slot_a: Value,
    pub old_slot: Value,
    pub new_slot: Value,
}

impl ComeeedCert {
    pub fn step(&self) -> RewriteStep {
        RewriteStep::ComeeedStep {
            a: self.slot_a.clone(),
            old: self.old_slot.clone(),
            new: self.new_slot.clone(),
            w: self.witness.clone(),
        }
    }
}

/// Build the lemma certificate over a fresh extension R[al], al^2 = al + a.
///
/// Requires x^2 + x y + a y^2 = u^2 + u v + b v^2 in R and v + y
/// invertible. The witness is (x + y al + u, v); the identity
/// (x + y al + u)^2 + (x + y al + u) v + b v^2 = (x + y al)(v + y)
/// is re-verified by expanding it in T before the certificate is returned.
pub fn comeeed_witness(
    ring: &FieldDesc,
    a: &Scalar,
    x: &Scalar,
    y: &Scalar,
    u: &Scalar,
    v: &Scalar,
    b: &Scalar,
) -> Result<ComeeedCert, BrauerError> {
    let tower = adjoin_root(ring, "al", a);
    comeeed_witness_in(&tower, x, y, u, v, b)
}

/// Same as [`comeeed_witness`], but inside an already-built extension; the
/// outermost layer of `tower` provides al and its constant a.
pub fn comeeed_witness_in(
    tower: &Arc<Tower>,
    x: &Scalar,
    y: &Scalar,
    u: &Scalar,
    v: &Scalar,
    b: &Scalar,
) -> Result<ComeeedCert, BrauerError> {
    let base = &tower.base;
    if base.characteristic() != 2 {
        return Err(BrauerError::WrongCharacteristic {
            expected: 2,
            got: base.characteristic(),
        });
    }
    let layer = tower.layers.len() - 1;
    let a = tower.layers[layer].1.clone();
    for s in [x, y, u, v, b] {
        if s.field() != *base {
            return Err(BrauerError::RingMismatch {
                value: format!("{s}"),
                ring: base.name(),
            });
        }
    }
    let vy = v.add(y);
    if vy.inv().is_none() {
        return Err(BrauerError::DegenerateInput { what: "v + y is not invertible".to_string() });
    }
    let lhs = x.mul(x).add(&x.mul(y)).add(&a.mul(&y.mul(y)));
    let rhs = u.mul(u).add(&u.mul(v)).add(&b.mul(&v.mul(v)));
    if !lhs.sub(&rhs).is_zero() {
        return Err(BrauerError::PreconditionFails);
    }

    let lift = |s: &Scalar| Value::T(TowerElem::from_base(tower, s.clone()));
    let alpha = Value::T(TowerElem::gen(tower, layer));
    let old_slot = lift(x).add(&lift(y).mul(&alpha));
    let new_slot = lift(&vy);
    let witness = NormWitness { x: old_slot.add(&lift(u)), y: lift(v) };
    let slot_a = lift(b);
    assert!(
        witness.verify(&slot_a, &old_slot.mul(&new_slot)),
        "lemma identity failed to expand in the extension ring"
    );
    Ok(ComeeedCert { tower: tower.clone(), witness, slot_a, old_slot, new_slot })
}

/// Base data (x, y, u, v) for one application of the quadratic rewriting
/// lemma inside a chain.
#[derive(Debug, Clone)]
pub struct ComeeedData {
    pub x: Scalar,
    pub y: Scalar,
    pub u: Scalar,
    pub v: Scalar,
}

impl ComeeedData {
    /// The element x + y al this block rewrites away.
    fn slot(&self, tower: &Arc<Tower>, layer: usize) -> Value {
        let x = Value::T(TowerElem::from_base(tower, self.x.clone()));
        let y = Value::T(TowerElem::from_base(tower, self.y.clone()));
        let alpha = Value::T(TowerElem::gen(tower, layer));
        x.add(&y.mul(&alpha))
    }

    /// The replacement slot v + y in the base field.
    fn replacement(&self) -> Scalar {
        self.v.add(&self.y)
    }
}

/// Witnessed data behind the degree-8 two-symbol reduction. Over
/// L = K[al], al^2 = al + a, the word {b, s} + {c, t} with s = x_s + y_s al
/// and t = x_t + y_t al rewrites to {b, k} + {c, l} + {d, k l m}, and the
/// descent to K contributes the extra symbol {a, e}.
#[derive(Debug, Clone)]
pub struct RowenChainData {
    pub fld: FieldDesc,
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
    pub e: Scalar,
    /// Rewrites {b + d, s} to {b + d, k} with k = v + y.
    pub cd_s: ComeeedData,
    /// Rewrites {c + d, t} to {c + d, l}.
    pub cd_t: ComeeedData,
    /// Rewrites {d, s t} to {d, m}.
    pub cd_st: ComeeedData,
}

impl RowenChainData {
    pub fn tower(&self) -> Arc<Tower> {
        adjoin_root(&self.fld, "al", &self.a)
    }

    pub fn k(&self) -> Scalar {
        self.cd_s.replacement()
    }

    pub fn l(&self) -> Scalar {
        self.cd_t.replacement()
    }

    pub fn m(&self) -> Scalar {
        self.cd_st.replacement()
    }
}

/// Replay the full reduction chain for [`RowenChainData`].
///
/// Starting from {b, s} + {c, t} over L, each symbol is split against the
/// common slot d, the two d-symbols merge into {d, s t}, three lemma
/// certificates replace the extension slots s, t, s t by the base slots
/// k, l, m, and the splits are undone. The transcript ends at
/// {b, k} + {c, l} + {d, k l m} over L; since every slot now lies in K the
/// word descends, and the output word over K is exactly
/// {a, e} + {b, k} + {c, l} + {d, k l m}.
pub fn rowen_replay(data: &RowenChainData) -> Result<(BrauerWord, Transcript), BrauerError> {
    if data.fld.characteristic() != 2 {
        return Err(BrauerError::WrongCharacteristic {
            expected: 2,
            got: data.fld.characteristic(),
        });
    }
    let tower = data.tower();
    let ring = RingDesc::Tower(tower.clone());
    let s = data.cd_s.slot(&tower, 0);
    let t = data.cd_t.slot(&tower, 0);
    let st = data.cd_st.slot(&tower, 0);
    if !values_equal(&s.mul(&t), &st) {
        return Err(BrauerError::DataMismatch {
            what: "third rewrite block does not encode s t".to_string(),
        });
    }

    let sv = |x: &Scalar| Value::S(x.clone());
    let b = sv(&data.b);
    let c = sv(&data.c);
    let d = sv(&data.d);
    let bd = sv(&data.b.add(&data.d));
    let cd = sv(&data.c.add(&data.d));
    let k = sv(&data.k());
    let l = sv(&data.l());
    let m = sv(&data.m());
    let kl = k.mul(&l);

    let cert_s = comeeed_witness_in(&tower, &data.cd_s.x, &data.cd_s.y, &data.cd_s.u, &data.cd_s.v, &data.b.add(&data.d))?;
    let cert_t = comeeed_witness_in(&tower, &data.cd_t.x, &data.cd_t.y, &data.cd_t.u, &data.cd_t.v, &data.c.add(&data.d))?;
    let cert_st = comeeed_witness_in(&tower, &data.cd_st.x, &data.cd_st.y, &data.cd_st.u, &data.cd_st.v, &data.d)?;

    let initial = BrauerWord::from_terms(&ring, vec![(b.clone(), s.clone()), (c.clone(), t.clone())])?;
    let steps = vec![
        RewriteStep::SlotAdd { a1: bd.clone(), a2: d.clone(), b: s.clone(), merge: false },
        RewriteStep::SlotAdd { a1: cd.clone(), a2: d.clone(), b: t.clone(), merge: false },
        RewriteStep::BilinearSplit { a: d.clone(), b: s.clone(), c: t.clone(), merge: true },
        cert_s.step(),
        cert_t.step(),
        cert_st.step(),
        RewriteStep::SlotAdd { a1: b.clone(), a2: d.clone(), b: k.clone(), merge: false },
        RewriteStep::SlotAdd { a1: c.clone(), a2: d.clone(), b: l.clone(), merge: false },
        RewriteStep::BilinearSplit { a: d.clone(), b: k.clone(), c: l.clone(), merge: true },
        RewriteStep::BilinearSplit { a: d.clone(), b: kl.clone(), c: m.clone(), merge: true },
    ];

    let mut word = initial.clone();
    for (i, step) in steps.iter().enumerate() {
        word = apply_step(&word, step)
            .map_err(|e| BrauerError::AtStep { index: i, inner: Box::new(e) })?;
    }

    let klm = kl.mul(&m);
    let expected =
        BrauerWord::from_terms(&ring, vec![(b, k.clone()), (c, l.clone()), (d, klm.clone())])?;
    if word != expected {
        return Err(BrauerError::DataMismatch {
            what: format!("chain ended at {word}, not the expected three-symbol word"),
        });
    }

    let base_ring = RingDesc::Field(data.fld.clone());
    let final_word = BrauerWord::from_terms(
        &base_ring,
        vec![
            (sv(&data.a), sv(&data.e)),
            (sv(&data.b), k),
            (sv(&data.c), l),
            (sv(&data.d), klm),
        ],
    )?;
    let transcript = Transcript { ring, initial, steps };
    Ok((final_word, transcript))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ff::FieldTable;
    use crate::exactfield::{field, parse_scalar, rf_field};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn el(fld: &Arc<FieldTable>, ix: u8) -> Scalar {
        Scalar::Ff { fld: fld.clone(), ix }
    }

    fn sval(fld: &Arc<FieldTable>, ix: u8) -> Value {
        Value::S(el(fld, ix))
    }

    /// Exhaustive witness search over a finite field.
    fn find_witness(fld: &Arc<FieldTable>, a: &Value, b: &Value) -> Option<NormWitness> {
        for x in 0..fld.q as u8 {
            for y in 0..fld.q as u8 {
                let w = NormWitness::new(sval(fld, x), sval(fld, y));
                if w.verify(a, b) {
                    return Some(w);
                }
            }
        }
        None
    }

    #[test]
    fn normalize_cancels_mod_two() {
        let f4 = field(2, 2).unwrap();
        let ring = RingDesc::Field(FieldDesc::Ff(f4.clone()));
        let g = sval(&f4, f4.gen());
        let one = sval(&f4, 1);
        let w = BrauerWord::from_terms(
            &ring,
            vec![
                (g.clone(), one.clone()),
                (one.clone(), g.clone()),
                (g.clone(), one.clone()),
                (g.clone(), one.clone()),
            ],
        )
        .unwrap();
        let n = normalize_word(&w);
        assert_eq!(n.len(), 2);
        assert!(n.contains(&g, &one));
        assert!(n.contains(&one, &g));
        // idempotent, and a double pair cancels to the empty word
        assert_eq!(n.normalize(), n);
        let d = BrauerWord::from_terms(&ring, vec![(g.clone(), one.clone()), (g, one)]).unwrap();
        assert!(d.normalize().is_empty());
    }

    #[test]
    fn two_torsion_squares_kill() {
        // {a, b} + {a, b} merges to {a, b^2}, which the square witness kills.
        let f4 = field(2, 2).unwrap();
        let ring = RingDesc::Field(FieldDesc::Ff(f4.clone()));
        for a in 0..4u8 {
            for b in 1..4u8 {
                let av = sval(&f4, a);
                let bv = sval(&f4, b);
                let w = BrauerWord::from_terms(
                    &ring,
                    vec![(av.clone(), bv.clone()), (av.clone(), bv.clone())],
                )
                .unwrap();
                let merged = apply_step(
                    &w,
                    &RewriteStep::BilinearSplit {
                        a: av.clone(),
                        b: bv.clone(),
                        c: bv.clone(),
                        merge: true,
                    },
                )
                .unwrap();
                let bb = bv.mul(&bv);
                assert_eq!(merged.len(), 1);
                assert!(merged.contains(&av, &bb));
                let killed = apply_step(
                    &merged,
                    &RewriteStep::NormKill { a: av.clone(), b: bb, w: square_witness(&bv) },
                )
                .unwrap();
                assert!(killed.is_empty());
            }
        }
    }

    #[test]
    fn split_and_merge_roundtrip() {
        let f8 = field(2, 3).unwrap();
        let ring = RingDesc::Field(FieldDesc::Ff(f8.clone()));
        let a = sval(&f8, 5);
        let b = sval(&f8, 3);
        let c = sval(&f8, 7);
        let start = BrauerWord::from_terms(&ring, vec![(a.clone(), b.mul(&c))]).unwrap();
        let split = apply_step(
            &start,
            &RewriteStep::BilinearSplit { a: a.clone(), b: b.clone(), c: c.clone(), merge: false },
        )
        .unwrap();
        assert_eq!(split.len(), 2);
        let back = apply_step(
            &split,
            &RewriteStep::BilinearSplit { a: a.clone(), b: b.clone(), c: c.clone(), merge: true },
        )
        .unwrap();
        assert_eq!(back, start);

        let a2 = sval(&f8, 6);
        let sum_word = BrauerWord::from_terms(&ring, vec![(a.add(&a2), b.clone())]).unwrap();
        let parts = apply_step(
            &sum_word,
            &RewriteStep::SlotAdd { a1: a.clone(), a2: a2.clone(), b: b.clone(), merge: false },
        )
        .unwrap();
        assert!(parts.contains(&a, &b) && parts.contains(&a2, &b));
        let resummed = apply_step(
            &parts,
            &RewriteStep::SlotAdd { a1: a.clone(), a2: a2.clone(), b: b.clone(), merge: true },
        )
        .unwrap();
        assert_eq!(resummed, sum_word);

        // an Artin-Schreier shift moves the slot by s^2 - s and nothing else
        let s = sval(&f8, 2);
        let shifted = apply_step(
            &start,
            &RewriteStep::ASShift { a: a.clone(), b: b.mul(&c), s: s.clone() },
        )
        .unwrap();
        assert!(shifted.contains(&a.add(&s.wp()), &b.mul(&c)));
    }

    #[test]
    fn chain_swap_moves_the_slot() {
        let f4 = field(2, 2).unwrap();
        let ring = RingDesc::Field(FieldDesc::Ff(f4.clone()));
        let g = f4.gen();
        let b = sval(&f4, g);
        let d = sval(&f4, f4.mul(g, g));
        // a witness for n in the norms of the difference slot b + d
        let bd = b.add(&d);
        let n = sval(&f4, 1);
        let w = find_witness(&f4, &bd, &n).expect("norm witness over F_4");
        let start = BrauerWord::from_terms(&ring, vec![(b.clone(), n.clone())]).unwrap();
        let swapped = apply_step(
            &start,
            &RewriteStep::ChainSwap { b: b.clone(), d: d.clone(), n: n.clone(), w },
        )
        .unwrap();
        assert_eq!(swapped.len(), 1);
        assert!(swapped.contains(&d, &n));
    }

    #[test]
    fn bad_witnesses_are_rejected() {
        let f4 = field(2, 2).unwrap();
        let ring = RingDesc::Field(FieldDesc::Ff(f4.clone()));
        let g = sval(&f4, f4.gen());
        let one = sval(&f4, 1);
        let w = BrauerWord::from_terms(&ring, vec![(g.clone(), one.clone())]).unwrap();
        // (1, 1) has norm 1 + 1 + g = g, not 1
        let bogus = NormWitness::new(one.clone(), one.clone());
        let err = apply_step(
            &w,
            &RewriteStep::NormKill { a: g.clone(), b: one.clone(), w: bogus },
        )
        .unwrap_err();
        assert!(matches!(err, BrauerError::WitnessFails { .. }));
        assert!(w.contains(&g, &one));

        // a step aimed at a missing term is refused even with a good witness
        let good = square_witness(&one);
        let err = apply_step(
            &w,
            &RewriteStep::NormKill { a: one.clone(), b: one.clone(), w: good },
        )
        .unwrap_err();
        assert!(matches!(err, BrauerError::TermNotFound { .. }));

        // inserting a zero slot is refused
        let zero = sval(&f4, 0);
        let err = BrauerWord::from_terms(&ring, vec![(g, zero)]).unwrap_err();
        assert!(matches!(err, BrauerError::SlotNotInvertible { .. }));
    }

    #[test]
    fn corrupted_witness_fuzz() {
        // corrupt each witness component in turn; the step must refuse and
        // leave the word alone
        let f16 = field(2, 4).unwrap();
        let ring = RingDesc::Field(FieldDesc::Ff(f16.clone()));
        let mut rng = ChaCha8Rng::seed_from_u64(0xB0B);
        for _ in 0..200 {
            let a = sval(&f16, rng.gen_range(0..16) as u8);
            let x = sval(&f16, rng.gen_range(0..16) as u8);
            let y = sval(&f16, rng.gen_range(0..16) as u8);
            let w = NormWitness::new(x, y);
            let b = w.value(&a);
            if b.is_zero() {
                continue;
            }
            let word = BrauerWord::from_terms(&ring, vec![(a.clone(), b.clone())]).unwrap();
            let noise = sval(&f16, rng.gen_range(1..16) as u8);
            let corrupted = if rng.gen_bool(0.5) {
                NormWitness::new(w.x.add(&noise), w.y.clone())
            } else {
                NormWitness::new(w.x.clone(), w.y.add(&noise))
            };
            // the corruption changes the witnessed value, so the step fails
            if corrupted.verify(&a, &b) {
                continue;
            }
            let err = apply_step(
                &word,
                &RewriteStep::NormKill { a: a.clone(), b: b.clone(), w: corrupted },
            )
            .unwrap_err();
            assert!(matches!(err, BrauerError::WitnessFails { .. }));
            assert!(word.contains(&a, &b));
        }
    }

    #[test]
    fn comeeed_base_example() {
        // over F_2 with a = 1: T = F_2[al], al^2 = al + 1, and the data
        // (x, y, u, v, b) = (0, 1, 1, 0, 1) yields the witness (al + 1, 0)
        let f2 = field(2, 1).unwrap();
        let fd = FieldDesc::Ff(f2.clone());
        let one = el(&f2, 1);
        let zero = el(&f2, 0);
        let cert = comeeed_witness(&fd, &one, &zero, &one, &one, &zero, &one).unwrap();
        let alpha = Value::T(TowerElem::gen(&cert.tower, 0));
        let lift_one = RingDesc::Tower(cert.tower.clone()).one();
        assert!(values_equal(&cert.witness.x, &alpha.add(&lift_one)));
        assert!(cert.witness.y.is_zero());
        assert!(values_equal(&cert.old_slot, &alpha));
        assert!(values_equal(&cert.new_slot, &lift_one));

        // the certificate rewrites {1, al} to {1, 1}
        let ring = RingDesc::Tower(cert.tower.clone());
        let word = BrauerWord::from_terms(&ring, vec![(lift_one.clone(), alpha)]).unwrap();
        let rewritten = apply_step(&word, &cert.step()).unwrap();
        assert!(rewritten.contains(&lift_one, &lift_one));
    }

    #[test]
    fn comeeed_symbolic_identity() {
        // with b solved for rationally, the lemma succeeds over independent
        // indeterminates
        let f2 = field(2, 1).unwrap();
        let fld = rf_field(&f2, &["a", "x", "y", "u", "v"]);
        let p = |s: &str| parse_scalar(s, &fld).unwrap();
        let (a, x, y, u, v) = (p("a"), p("x"), p("y"), p("u"), p("v"));
        let num = x
            .mul(&x)
            .add(&x.mul(&y))
            .add(&a.mul(&y.mul(&y)))
            .add(&u.mul(&u))
            .add(&u.mul(&v));
        let b = num.mul(&v.mul(&v).inv().unwrap());
        let cert = comeeed_witness(&fld, &a, &x, &y, &u, &v, &b).unwrap();
        assert!(cert.witness.verify(&cert.slot_a, &cert.old_slot.mul(&cert.new_slot)));

        // with b fully independent, the two sides differ by exactly the
        // precondition defect
        let fld6 = rf_field(&f2, &["a", "x", "y", "u", "v", "b"]);
        let p6 = |s: &str| parse_scalar(s, &fld6).unwrap();
        let (a, x, y, u, v, b) = (p6("a"), p6("x"), p6("y"), p6("u"), p6("v"), p6("b"));
        let tower = adjoin_root(&fld6, "al", &a);
        let lift = |s: &Scalar| Value::T(TowerElem::from_base(&tower, s.clone()));
        let alpha = Value::T(TowerElem::gen(&tower, 0));
        let xy_al = lift(&x).add(&lift(&y).mul(&alpha));
        let big_x = xy_al.add(&lift(&u));
        let lhs = big_x
            .mul(&big_x)
            .add(&big_x.mul(&lift(&v)))
            .add(&lift(&b).mul(&lift(&v).mul(&lift(&v))));
        let rhs = xy_al.mul(&lift(&v).add(&lift(&y)));
        let defect = x
            .mul(&x)
            .add(&x.mul(&y))
            .add(&a.mul(&y.mul(&y)))
            .add(&u.mul(&u))
            .add(&u.mul(&v))
            .add(&b.mul(&v.mul(&v)));
        assert!(values_equal(&lhs.add(&rhs), &lift(&defect)));
    }

    #[test]
    fn witness_op_examples() {
        // squares multiply coordinate-wise: (x1, 0)(x2, 0) = (x1 x2, 0)
        let f2 = field(2, 1).unwrap();
        let fld = rf_field(&f2, &["a", "x1", "x2"]);
        let p = |s: &str| parse_scalar(s, &fld).unwrap();
        let a = Value::S(p("a"));
        let w1 = square_witness(&Value::S(p("x1")));
        let w2 = square_witness(&Value::S(p("x2")));
        let prod = witness_mul(&a, &w1, &w2);
        assert!(values_equal(&prod.x, &Value::S(p("x1*x2"))));
        assert!(prod.y.is_zero());

        // inverse: (1, 1) witnesses a for slot a, so its inverse witnesses 1/a
        let f4 = field(2, 2).unwrap();
        let g = sval(&f4, f4.gen());
        let one = sval(&f4, 1);
        let w = NormWitness::new(one.clone(), one.clone());
        assert!(w.verify(&g, &g));
        let wi = witness_inv(&g, &w).unwrap();
        assert!(wi.verify(&g, &g.inv().unwrap()));

        // shift: wp(g) = 1 over F_4 moves a witness from slot 1 + d to slot d;
        // (1, 1) always witnesses the slot value itself
        let d = g.clone();
        let bd = one.add(&d);
        let w = NormWitness::new(one.clone(), one.clone());
        assert!(w.verify(&bd, &bd));
        let shifted = witness_shift(&bd, &one, &d, &g, &w).unwrap();
        assert!(shifted.verify(&d, &bd));
    }

    #[test]
    fn norm_multiplicativity_fuzz() {
        for k in 1..=4u32 {
            let fld = field(2, k).unwrap();
            let q = fld.q as u8;
            let mut rng = ChaCha8Rng::seed_from_u64(0x5EED ^ (k as u64) << 8);
            for _ in 0..1000 {
                let a = sval(&fld, rng.gen_range(0..q));
                let w1 = NormWitness::new(
                    sval(&fld, rng.gen_range(0..q)),
                    sval(&fld, rng.gen_range(0..q)),
                );
                let w2 = NormWitness::new(
                    sval(&fld, rng.gen_range(0..q)),
                    sval(&fld, rng.gen_range(0..q)),
                );
                let prod = witness_mul(&a, &w1, &w2);
                assert!(values_equal(
                    &prod.value(&a),
                    &w1.value(&a).mul(&w2.value(&a))
                ));
            }
        }
    }

    /// Search F_8 data satisfying the three lemma preconditions.
    fn sample_chain_data() -> RowenChainData {
        let f8 = field(2, 3).unwrap();
        let fd = FieldDesc::Ff(f8.clone());
        let one = el(&f8, 1);
        let a = one.clone();

        let find_block = |bl: &Scalar, want_y_nonzero: bool| -> Option<ComeeedData> {
            for x in 0..8u8 {
                for y in 0..8u8 {
                    if want_y_nonzero && y == 0 {
                        continue;
                    }
                    if x == 0 && y == 0 {
                        continue;
                    }
                    for u in 0..8u8 {
                        for v in 0..8u8 {
                            let (xs, ys, us, vs) =
                                (el(&f8, x), el(&f8, y), el(&f8, u), el(&f8, v));
                            if vs.add(&ys).is_zero() {
                                continue;
                            }
                            let lhs =
                                xs.mul(&xs).add(&xs.mul(&ys)).add(&a.mul(&ys.mul(&ys)));
                            let rhs =
                                us.mul(&us).add(&us.mul(&vs)).add(&bl.mul(&vs.mul(&vs)));
                            if lhs.sub(&rhs).is_zero() {
                                return Some(ComeeedData { x: xs, y: ys, u: us, v: vs });
                            }
                        }
                    }
                }
            }
            None
        };

        for b_ix in 2..8u8 {
            for c_ix in 2..8u8 {
                if c_ix == b_ix {
                    continue;
                }
                for d_ix in 2..8u8 {
                    if d_ix == b_ix || d_ix == c_ix {
                        continue;
                    }
                    let (b, c, d) = (el(&f8, b_ix), el(&f8, c_ix), el(&f8, d_ix));
                    let cd_s = match find_block(&b.add(&d), true) {
                        Some(x) => x,
                        None => continue,
                    };
                    let cd_t = match find_block(&c.add(&d), true) {
                        Some(x) => x,
                        None => continue,
                    };
                    // the third block's slot is pinned to s t by the chain
                    let tower = adjoin_root(&fd, "al", &a);
                    let s = cd_s.slot(&tower, 0);
                    let t = cd_t.slot(&tower, 0);
                    let st = match s.mul(&t) {
                        Value::T(te) => te,
                        Value::S(_) => unreachable!(),
                    };
                    let xst = st.coords[0].clone();
                    let yst = st.coords[1].clone();
                    let mut cd_st = None;
                    'uv: for u in 0..8u8 {
                        for v in 0..8u8 {
                            let (us, vs) = (el(&f8, u), el(&f8, v));
                            if vs.add(&yst).is_zero() {
                                continue;
                            }
                            let lhs = xst
                                .mul(&xst)
                                .add(&xst.mul(&yst))
                                .add(&a.mul(&yst.mul(&yst)));
                            let rhs =
                                us.mul(&us).add(&us.mul(&vs)).add(&d.mul(&vs.mul(&vs)));
                            if lhs.sub(&rhs).is_zero() {
                                cd_st = Some(ComeeedData {
                                    x: xst.clone(),
                                    y: yst.clone(),
                                    u: us,
                                    v: vs,
                                });
                                break 'uv;
                            }
                        }
                    }
                    let cd_st = match cd_st {
                        Some(x) => x,
                        None => continue,
                    };
                    return RowenChainData {
                        fld: fd.clone(),
                        a: a.clone(),
                        b,
                        c,
                        d,
                        e: el(&f8, f8.gen()),
                        cd_s,
                        cd_t,
                        cd_st,
                    };
                }
            }
        }
        panic!("no consistent chain data over F_8");
    }

    #[test]
    fn rowen_replay_reaches_the_four_symbol_word() {
        let data = sample_chain_data();
        let (word, transcript) = rowen_replay(&data).unwrap();

        let base = RingDesc::Field(data.fld.clone());
        let k = Value::S(data.k());
        let l = Value::S(data.l());
        let klm = k.mul(&l).mul(&Value::S(data.m()));
        let expected = BrauerWord::from_terms(
            &base,
            vec![
                (Value::S(data.a.clone()), Value::S(data.e.clone())),
                (Value::S(data.b.clone()), k.clone()),
                (Value::S(data.c.clone()), l.clone()),
                (Value::S(data.d.clone()), klm.clone()),
            ],
        )
        .unwrap();
        assert_eq!(word, expected);

        // the transcript replays to the three-symbol word over the extension
        let replayed = replay(&transcript).unwrap();
        assert_eq!(replayed.len(), 3);
        assert!(replayed.contains(&Value::S(data.b.clone()), &k));
        assert!(replayed.contains(&Value::S(data.c.clone()), &l));
        assert!(replayed.contains(&Value::S(data.d.clone()), &klm));

        // determinism: a second run prints identically
        let (word2, transcript2) = rowen_replay(&data).unwrap();
        assert_eq!(format!("{word}"), format!("{word2}"));
        assert_eq!(
            format!("{}", replay(&transcript2).unwrap()),
            format!("{replayed}")
        );
    }

    #[test]
    fn corrupted_chain_data_aborts() {
        let data = sample_chain_data();

        // corrupt a lemma block: its precondition now fails
        let mut bad = data.clone();
        bad.cd_st.u = bad.cd_st.u.add(&el(&bad.cd_st.u.as_ff().unwrap().0, 1));
        assert!(rowen_replay(&bad).is_err());

        // corrupt one witness inside a valid transcript: replay stops at it
        let (_, mut transcript) = rowen_replay(&data).unwrap();
        let tampered = match &transcript.steps[3] {
            RewriteStep::ComeeedStep { a, old, new, w } => RewriteStep::ComeeedStep {
                a: a.clone(),
                old: old.clone(),
                new: new.clone(),
                w: NormWitness::new(w.x.add(&transcript.ring.one()), w.y.clone()),
            },
            other => panic!("expected a lemma step at index 3, found {}", other.kind()),
        };
        transcript.steps[3] = tampered;
        match replay(&transcript) {
            Err(BrauerError::AtStep { index, inner }) => {
                assert_eq!(index, 3);
                assert!(matches!(*inner, BrauerError::WitnessFails { .. }));
            }
            other => panic!("tampered transcript must abort, got {other:?}"),
        }
    }
}
