//! Build algebras from structure constants, certify central simplicity, and
//! split off a 2x2 matrix factor from an idempotent.
//!
//! Run with: cargo run --example central_simple

use csa_forge::algcore::csa::csa_test;
use csa_forge::algcore::split::{split_off_matrix_factor, verify_split};
use csa_forge::algcore::{zero_vec, Algebra, SparseVec};
use csa_forge::exactfield::ff::field;
use csa_forge::exactfield::scalar::FieldDesc;

fn m2(fld: &FieldDesc) -> Algebra {
    // basis E11, E12, E21, E22 of 2x2 matrices
    let one = fld.one();
    let e = |k: usize| -> SparseVec { vec![(k, one.clone())] };
    let z = SparseVec::new();
    let table = vec![
        e(0), e(1), z.clone(), z.clone(),
        z.clone(), z.clone(), e(0), e(1),
        e(2), e(3), z.clone(), z.clone(),
        z.clone(), z.clone(), e(2), e(3),
    ];
    let mut unit = zero_vec(fld, 4);
    unit[0] = one.clone();
    unit[3] = one;
    Algebra::build_sc_algebra(
        "M2",
        fld,
        vec!["E11".into(), "E12".into(), "E21".into(), "E22".into()],
        table,
        unit,
        vec![1, 2],
    )
    .expect("the matrix table is associative")
}

fn main() {
    let f4 = FieldDesc::Ff(field(2, 2).expect("F4 is published"));

    let a = m2(&f4);
    println!("{}", csa_test(&a));

    let big = Algebra::tensor("M2xM2", &a, &a);
    println!("{}", csa_test(&big));

    // E11 (x) 1 is a nontrivial idempotent of the tensor square
    let mut e = zero_vec(&f4, big.dim);
    e[0] = f4.one();
    e[3] = f4.one();
    let split = split_off_matrix_factor(&big, &e).expect("idempotent splits");
    verify_split(&big, &split).expect("split certificate checks out");
    println!("split {}: {} has dimension {}", big.name, split.factor.name, split.factor.dim);
    println!("{}", csa_test(&split.factor));

    // a non-example: the field F4 viewed as a 2-dimensional algebra over F2
    let f2 = FieldDesc::Ff(field(2, 1).expect("F2 is published"));
    let one = f2.one();
    let table = vec![
        vec![(0, one.clone())],
        vec![(1, one.clone())],
        vec![(1, one.clone())],
        vec![(0, one.clone()), (1, one.clone())],
    ];
    let mut unit = zero_vec(&f2, 2);
    unit[0] = one;
    let ext = Algebra::build_sc_algebra(
        "F4 over F2",
        &f2,
        vec!["1".into(), "g".into()],
        table,
        unit,
        vec![1],
    )
    .expect("field table is associative");
    println!("{}", csa_test(&ext));
}
