//! Symbol p-algebras [a, b): generated by u, v with u^p = u + a, v^p = b,
//! v u = (u + 1) v. Every one of them is certified central simple.
//!
//! Run with: cargo run --example symbol_algebras

use csa_forge::algcore::csa::csa_test;
use csa_forge::exactfield::ff::field;
use csa_forge::exactfield::scalar::{FieldDesc, Scalar};
use csa_forge::exactfield::{parse_scalar, rf_field};
use csa_forge::symbols::symbol_algebra;

fn main() {
    // a quaternion over F_4
    let f4 = field(2, 2).unwrap();
    let fd = FieldDesc::Ff(f4.clone());
    let g = Scalar::Ff { fld: f4.clone(), ix: f4.gen() };
    let sa = symbol_algebra(&fd, 2, &g, &g.add(&fd.one())).unwrap();
    println!("{} over {}:", sa.alg.name, fd.name());
    let show = |sv: &csa_forge::algcore::SparseVec| -> String {
        sv.iter()
            .map(|(i, c)| {
                if c.is_one() {
                    sa.alg.labels[*i].clone()
                } else {
                    format!("({c}) {}", sa.alg.labels[*i])
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let (u, v) = (sa.u_index(), sa.v_index());
    println!("  u * v = {}", show(sa.alg.basis_product(u, v)));
    println!("  v * u = {}", show(sa.alg.basis_product(v, u)));
    println!("  {}", csa_test(&sa.alg));

    // a degree-3 symbol algebra over F_3
    let f3 = field(3, 1).unwrap();
    let f3d = FieldDesc::Ff(f3.clone());
    let sa3 = symbol_algebra(&f3d, 3, &f3d.one(), &f3d.from_residue(2)).unwrap();
    println!("{} over {} (dim {}):", sa3.alg.name, f3d.name(), sa3.alg.dim);
    println!("  {}", csa_test(&sa3.alg));

    // a symbol algebra over a rational function field
    let rf = rf_field(&field(2, 1).unwrap(), &["t"]);
    let t = parse_scalar("t", &rf).unwrap();
    let wild = symbol_algebra(&rf, 2, &t, &t).unwrap();
    println!("{} over {}:", wild.alg.name, rf.name());
    println!("  {}", csa_test(&wild.alg));
}
