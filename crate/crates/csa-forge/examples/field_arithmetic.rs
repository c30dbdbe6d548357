//! Exact scalar arithmetic: finite fields with precomputed tables, rational
//! function fields over them, and Artin-Schreier tower rings.
//!
//! Run with: cargo run --example field_arithmetic

use csa_forge::exactfield::ff::field;
use csa_forge::exactfield::scalar::{FieldDesc, Scalar};
use csa_forge::exactfield::tower::TowerElem;
use csa_forge::exactfield::{adjoin_root, parse_scalar, rf_field, wp_preimage};

fn main() {
    // F_16 and its byte tables
    let f16 = field(2, 4).unwrap();
    let fd = FieldDesc::Ff(f16.clone());
    let g = Scalar::Ff { fld: f16.clone(), ix: f16.gen() };
    println!("{}: generator g, g^15 = {}", f16.name, g.pow(15));
    println!("frobenius: g^2 = {}", g.mul(&g));

    // the Artin-Schreier map x^2 - x and a preimage
    let one = fd.one();
    match wp_preimage(&one) {
        Some(r) => println!("wp preimage of 1 in {}: {} (check wp = {})", f16.name, r, r.wp()),
        None => println!("1 has no wp preimage in {}", f16.name),
    }

    // expressions parse against a field description
    let e = parse_scalar("(g^2 + g + 1) / (g + 1)", &fd).unwrap();
    println!("(g^2 + g + 1)/(g + 1) = {e}");

    // rational functions over F_2: exact, with cross-multiplied equality
    let rf = rf_field(&field(2, 1).unwrap(), &["t"]);
    let t = parse_scalar("t", &rf).unwrap();
    let lhs = parse_scalar("(t^2 + t) / (t + 1)", &rf).unwrap();
    println!("over {}: (t^2 + t)/(t + 1) = {} (equals t: {})", rf.name(), lhs, lhs == t);

    // adjoin a root of x^2 = x + g to F_4; the result is a field because
    // the trace of g over F_2 is nonzero
    let f4 = field(2, 2).unwrap();
    let f4d = FieldDesc::Ff(f4.clone());
    let a = Scalar::Ff { fld: f4.clone(), ix: f4.gen() };
    let tower = adjoin_root(&f4d, "al", &a);
    let al = TowerElem::gen(&tower, 0);
    println!("tower {}[al], al^2 = al + {a}", f4d.name());
    println!("  wp(al) = {}", al.wp());
    let inv = al.inv().unwrap();
    println!("  al^-1 = {}, product = {}", inv, al.mul(&inv));
    println!("  norm(al) over the base = {}", al.norm(0));
}
