//! The classifying construction for degree-8, exponent-2 division algebras:
//! sample a point of the 13-coordinate variety (10 coordinates free, three
//! derived), build the 256-dimensional four-quaternion product B', split off
//! a 2x2 matrix factor with a witnessed idempotent, and certify the
//! degree-8 centralizer B. The same point then replays, step by verified
//! step, to the four-symbol word that presents B''s Brauer class.
//!
//! Run with: cargo run --example classifying_points

use csa_forge::brauer::rowen_replay;
use csa_forge::exactfield::ff::field;
use csa_forge::exactfield::scalar::FieldDesc;
use csa_forge::rowen::{
    build_b, chain_data, point_from_decomposition, sample_point_with_stats, validate_point,
    DecompositionData, FREE_COORDS,
};
use csa_forge::textio::{print_certificate, print_point};

fn main() {
    let fld = FieldDesc::Ff(field(2, 4).unwrap());

    // --- sampling: 10 free draws, then b, c, d forced by the relations ---
    let (pt, stats) = sample_point_with_stats(&fld, 7).unwrap();
    println!(
        "sampled a point over {} in {} attempt(s), {} free coordinate draws:",
        fld.name(),
        stats.attempts,
        stats.free_draws
    );
    assert_eq!(stats.free_draws, FREE_COORDS);
    print!("{}", print_point(&pt));

    // corrupting any single relation is caught
    let mut bad: Vec<_> = pt.coords().iter().map(|(_, s)| (*s).clone()).collect();
    bad[1] = bad[1].add(&fld.one());
    match validate_point(&fld, &bad) {
        Err(e) => println!("\ncorrupting b is rejected: {e}"),
        Ok(_) => unreachable!("the corrupted point must not validate"),
    }

    // --- the construction: B' = M_2(B) with everything re-verified ---
    let cert = build_b(&pt).unwrap();
    println!(
        "\nbuilt B' (dim {}) and split off B (dim {}, degree 8)",
        cert.bprime.dim,
        cert.b().dim
    );
    println!("  B' test: {}", cert.bprime_report);
    println!("  B  test: {}", cert.b_report);
    println!("\ncertificate file:\n{}", print_certificate(&cert));

    // --- points come from decompositions, not just samplers ---
    // scale the first two witness rows; normalization divides the scaling
    // back out and lands on the same point
    let lam = pt.fld.one().add(&pt.a);
    let data = DecompositionData {
        fld: pt.fld.clone(),
        a: pt.a.clone(),
        b: pt.b.clone(),
        c: pt.c.clone(),
        d: pt.d.clone(),
        e: pt.e.clone(),
        w: pt.w.mul(&lam),
        x: pt.x.mul(&lam),
        uprime: lam.clone(),
        u: pt.u.mul(&lam),
        y: pt.y.clone(),
        z: pt.z.clone(),
        vprime: fld.one(),
        v: pt.v.clone(),
        m: pt.m.mul(&lam),
        n: pt.n.mul(&lam),
    };
    let recovered = point_from_decomposition(&data).unwrap();
    assert!(recovered.u.sub(&pt.u.mul(&lam.inv().unwrap().mul(&lam))).is_zero());
    println!("a scaled decomposition normalizes back to a valid point");

    // --- the Brauer-class side: replay to the four-symbol word ---
    let (word, transcript) = rowen_replay(&chain_data(&pt)).unwrap();
    println!(
        "\nthe decomposition chain replays in {} verified steps to:\n  {word}",
        transcript.steps.len()
    );
}
