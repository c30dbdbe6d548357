//! Exact scalar arithmetic: small finite fields with precomputed tables,
//! multivariate rational functions over them, Artin-Schreier tower rings,
//! and the expression grammar shared by the file formats.
//!
//! Everything here is exact; no floating point appears anywhere in the
//! crate. Finite fields are capped at 256 elements so every element fits in
//! a byte and every unary map is a table.

pub mod ff;
pub mod grammar;
pub mod poly;
pub mod ratfn;
pub mod scalar;
pub mod tower;
pub mod value;

pub use ff::{field, field_by_name, field_with_modulus, FieldError, FieldTable};
pub use grammar::{parse_scalar, parse_value, print_scalar, print_value, GrammarError};
pub use poly::{MultiPoly, RfCtx};
pub use ratfn::RatFn;
pub use scalar::{FieldDesc, Scalar};
pub use tower::{Tower, TowerElem};
pub use value::{RingDesc, Value};

use std::sync::Arc;

/// The rational function field base(vars...).
pub fn rf_field(base: &Arc<FieldTable>, vars: &[&str]) -> FieldDesc {
    FieldDesc::Rf(RfCtx::new(base.clone(), vars.iter().map(|v| v.to_string()).collect()))
}

/// x^p - x.
pub fn wp_map(x: &Scalar) -> Scalar {
    x.wp()
}

/// Some y with y^p - y = x, when one exists in the same finite field.
pub fn wp_preimage(x: &Scalar) -> Option<Scalar> {
    match x {
        Scalar::Ff { fld, ix } => fld.wp_preimage(*ix).map(|r| Scalar::Ff { fld: fld.clone(), ix: r }),
        Scalar::Rf(_) => None,
    }
}

/// The ring base[name] with name^p = name + a.
pub fn adjoin_root(base: &FieldDesc, name: &str, a: &Scalar) -> Arc<Tower> {
    Tower::new(base.clone(), vec![(name.to_string(), a.clone())])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wp_surface() {
        let f4 = field(2, 2).unwrap();
        let g = Scalar::Ff { fld: f4.clone(), ix: f4.gen() };
        // g^2 + g = 1 in F_4
        assert!(wp_map(&g).is_one());
        // nothing in F_4 maps to g under x^2 + x: its image is the prime field
        assert!(wp_preimage(&g).is_none());
        let one = FieldDesc::Ff(f4.clone()).one();
        let pre = wp_preimage(&one).expect("1 is in the image");
        assert_eq!(wp_map(&pre), one);
    }

    #[test]
    fn adjoin_gives_root() {
        let fd = FieldDesc::Ff(field(2, 1).unwrap());
        let t = adjoin_root(&fd, "al", &fd.one());
        let al = TowerElem::gen(&t, 0);
        assert!(al.wp().is_one());
    }

    #[test]
    fn rf_field_surface() {
        let fd = rf_field(&field(2, 1).unwrap(), &["t"]);
        let t = parse_scalar("t", &fd).unwrap();
        assert_eq!(wp_map(&t), parse_scalar("t^2+t", &fd).unwrap());
    }
}
