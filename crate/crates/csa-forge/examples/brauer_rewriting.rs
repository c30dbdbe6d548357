//! Witnessed rewriting of 2-torsion Brauer words: every step that changes a
//! word either is a checked arithmetic identity or carries a norm witness
//! that is re-verified first, and a whole chain replays from its transcript.
//!
//! Run with: cargo run --example brauer_rewriting

use csa_forge::brauer::{
    apply_step, comeeed_witness, normalize_word, replay, rowen_replay, square_witness,
    BrauerWord, ComeeedData, NormWitness, RewriteStep, RowenChainData,
};
use csa_forge::exactfield::ff::field;
use csa_forge::exactfield::scalar::{FieldDesc, Scalar};
use csa_forge::exactfield::value::{RingDesc, Value};

fn main() {
    // doubled terms cancel mod 2
    let f4 = field(2, 2).unwrap();
    let ring = RingDesc::Field(FieldDesc::Ff(f4.clone()));
    let el = |ix: u8| Value::S(Scalar::Ff { fld: f4.clone(), ix });
    let (g, one) = (el(f4.gen()), el(1));
    let w = BrauerWord::from_terms(
        &ring,
        vec![(g.clone(), one.clone()), (g.clone(), one.clone()), (one.clone(), g.clone())],
    )
    .unwrap();
    println!("{w}  normalizes to  {}", normalize_word(&w));

    // the witnessed route to the same cancellation: merge the two copies
    // into {a, b^2} and kill it with the square witness (b, 0)
    let dbl =
        BrauerWord::from_terms(&ring, vec![(g.clone(), g.clone()), (g.clone(), g.clone())])
            .unwrap();
    let merged = apply_step(
        &dbl,
        &RewriteStep::BilinearSplit { a: g.clone(), b: g.clone(), c: g.clone(), merge: true },
    )
    .unwrap();
    let killed = apply_step(
        &merged,
        &RewriteStep::NormKill { a: g.clone(), b: g.mul(&g), w: square_witness(&g) },
    )
    .unwrap();
    println!("{dbl}  ->  {merged}  ->  {killed}");

    // the quadratic-extension lemma over F_2: data (x, y, u, v, b) =
    // (0, 1, 1, 0, 1) with a = 1 certifies the rewrite {1, al} -> {1, 1}
    let f2 = field(2, 1).unwrap();
    let f2d = FieldDesc::Ff(f2.clone());
    let cert = comeeed_witness(&f2d, &f2d.one(), &f2d.zero(), &f2d.one(), &f2d.one(), &f2d.zero(), &f2d.one())
        .unwrap();
    println!(
        "lemma witness over {}[al]: ({}, {}) rewrites {{1, {}}} to {{1, {}}}",
        f2d.name(),
        cert.witness.x,
        cert.witness.y,
        cert.old_slot,
        cert.new_slot
    );

    // the full degree-8 chain over F_8: {b, s} + {c, t} over K[al] descends
    // to four symbols over K; the constants were found by exhaustive search
    // and the replay re-verifies every one of them
    let f8 = field(2, 3).unwrap();
    let s8 = |ix: u8| Scalar::Ff { fld: f8.clone(), ix };
    let data = RowenChainData {
        fld: FieldDesc::Ff(f8.clone()),
        a: s8(1),
        b: s8(2),
        c: s8(3),
        d: s8(4),
        e: s8(2),
        cd_s: ComeeedData { x: s8(0), y: s8(1), u: s8(0), v: s8(7) },
        cd_t: ComeeedData { x: s8(0), y: s8(2), u: s8(0), v: s8(4) },
        cd_st: ComeeedData { x: s8(2), y: s8(2), u: s8(0), v: s8(1) },
    };
    let (word, transcript) = rowen_replay(&data).unwrap();
    println!("chain over {}: {}", transcript.ring.name(), transcript.initial);
    for (i, step) in transcript.steps.iter().enumerate() {
        println!("  step {i}: {}", step.kind());
    }
    println!("descends to {word}");

    // tamper with one witness and the replay refuses at exactly that step
    let mut bad = transcript.clone();
    if let RewriteStep::ComeeedStep { a, old, new, w } = &bad.steps[3] {
        bad.steps[3] = RewriteStep::ComeeedStep {
            a: a.clone(),
            old: old.clone(),
            new: new.clone(),
            w: NormWitness::new(w.x.add(&bad.ring.one()), w.y.clone()),
        };
    }
    println!("tampered witness: {}", replay(&bad).unwrap_err());
}
