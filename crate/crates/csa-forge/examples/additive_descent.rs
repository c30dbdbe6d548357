//! Descent for decomposable classes: r Artin-Schreier classes a_1, .., a_r
//! attached to an r-dimensional F_p-subspace V collapse into a single
//! parameter x = sum Theta_i(a_i), and recovery operators pi_i extract
//! classes c_i = pi_i(x) congruent to the originals mod wp. A tensor word
//! sum [a_i, b_i) is then presented by x together with the slot entries:
//! r + 1 generators.
//!
//! Run with: cargo run --example additive_descent

use csa_forge::descent::{
    dec_upper_witness, descent_parameter, psi_subspace, subspace_basis, verify_descent,
};
use csa_forge::exactfield::ff::field;
use csa_forge::exactfield::scalar::{FieldDesc, Scalar};
use csa_forge::exactfield::{rf_field, wp_map};
use csa_forge::textio::print_dec_record;

fn main() {
    let f16 = field(2, 4).unwrap();
    let fld = FieldDesc::Ff(f16.clone());
    let el = |ix: u8| Scalar::Ff { fld: f16.clone(), ix };
    let g = el(2);

    // V = span(1, g) inside F_16; psi_V(t) = prod_{v in V} (t - v) is an
    // additive polynomial with kernel exactly V
    let basis = subspace_basis(&fld, &[fld.one(), g.clone()]).unwrap();
    let psi = psi_subspace(&basis);
    println!("V = span(1, g) in F16, psi_V = {psi}");

    // two classes collapse into one parameter
    let classes = [el(7), el(11)];
    let record = descent_parameter(&classes, &basis).unwrap();
    println!("classes (a_1, a_2) = ({}, {})  ->  x = {}", classes[0], classes[1], record.x);
    for (i, th) in record.thetas.iter().enumerate() {
        println!("  Theta_{} = {th}", i + 1);
    }
    let rec = record.recovery.as_ref().unwrap();
    for i in 0..2 {
        println!(
            "  pi_{} = {}  recovers c_{} = {}  with wp({}) = a_{} - c_{}",
            i + 1,
            rec.pis[i],
            i + 1,
            rec.cs[i],
            rec.preimages[i],
            i + 1,
            i + 1
        );
        assert!(wp_map(&rec.preimages[i]).sub(&classes[i].sub(&rec.cs[i])).is_zero());
    }
    assert!(verify_descent(&record, &classes));
    println!("the record verifies against the splitting-ring oracle\n");
    print!("{}", print_dec_record(&record, &classes));

    // a two-symbol tensor word over F16(t) is carried by at most r + 1
    // generators: the slot entries, plus x when it is a transcendental
    // parameter (here x = g is a constant, so the slots alone suffice)
    let kt = rf_field(&f16, &["t"]);
    let t = match &kt {
        FieldDesc::Rf(ctx) => Scalar::Rf(std::sync::Arc::new(
            csa_forge::exactfield::RatFn::var(ctx, 0),
        )),
        _ => unreachable!(),
    };
    let symbols = [(classes[0].clone(), t.clone()), (classes[1].clone(), t.add(&kt.one()))];
    let witness = dec_upper_witness(&symbols, &basis).unwrap();
    println!("\ntensor word [a_1, t) + [a_2, t+1) over F16(t):");
    println!("  generators: {:?}", witness.generators);
    for shift in &witness.shifts {
        println!(
            "  symbol {}: slot shift by wp({}) carries [c_{}, b) to [a_{}, b), iso verified",
            shift.index + 1,
            shift.preimage,
            shift.index + 1,
            shift.index + 1
        );
    }
    assert!(witness.generators.len() <= basis.rank() + 1);
}
