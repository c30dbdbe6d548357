//! The unified scalar type: an element of a finite field or of a rational
//! function field over one. Binary operations require both operands to come
//! from the same field and panic otherwise, since mixing fields is a
//! programming error rather than a data error.

use std::fmt;
use std::sync::Arc;

use super::ff::{embedding, FieldTable};
use super::poly::{same_ctx, MultiPoly, RfCtx};
use super::ratfn::RatFn;

/// Descriptor of a supported coefficient field.
#[derive(Clone, Debug)]
pub enum FieldDesc {
    Ff(Arc<FieldTable>),
    Rf(Arc<RfCtx>),
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldDesc::Ff(a), FieldDesc::Ff(b)) => {
                Arc::ptr_eq(a, b) || (a.q == b.q && a.irred == b.irred)
            }
            (FieldDesc::Rf(a), FieldDesc::Rf(b)) => same_ctx(a, b),
            _ => false,
        }
    }
}
impl Eq for FieldDesc {}

impl FieldDesc {
    pub fn characteristic(&self) -> u32 {
        match self {
            FieldDesc::Ff(f) => f.p,
            FieldDesc::Rf(c) => c.base.p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldDesc::Ff(_))
    }

    pub fn name(&self) -> String {
        match self {
            FieldDesc::Ff(f) => f.name.clone(),
            FieldDesc::Rf(c) => format!("{}({})", c.base.name, c.vars.join(",")),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldDesc::Ff(f) => Scalar::Ff { fld: f.clone(), ix: 0 },
            FieldDesc::Rf(c) => Scalar::Rf(Arc::new(RatFn::zero(c))),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldDesc::Ff(f) => Scalar::Ff { fld: f.clone(), ix: 1 },
            FieldDesc::Rf(c) => Scalar::Rf(Arc::new(RatFn::one(c))),
        }
    }

    pub fn from_residue(&self, n: u64) -> Scalar {
        match self {
            FieldDesc::Ff(f) => Scalar::Ff { fld: f.clone(), ix: f.from_residue(n) },
            FieldDesc::Rf(c) => {
                Scalar::Rf(Arc::new(RatFn::constant(c, c.base.from_residue(n))))
            }
        }
    }
}

#[derive(Clone)]
pub enum Scalar {
    Ff { fld: Arc<FieldTable>, ix: u8 },
    Rf(Arc<RatFn>),
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::grammar::print_scalar(self))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Ff { ix: a, .. }, Scalar::Ff { ix: b, .. }) => {
                debug_assert!(self.field() == other.field(), "comparing scalars from different fields");
                a == b
            }
            (Scalar::Rf(a), Scalar::Rf(b)) => a.eq_cross(b),
            _ => panic!("comparing scalars from different field kinds"),
        }
    }
}
impl Eq for Scalar {}

macro_rules! binop {
    ($name:ident, $ff:expr, $rf:ident) => {
        pub fn $name(&self, rhs: &Scalar) -> Scalar {
            match (self, rhs) {
                (Scalar::Ff { fld: fa, ix: a }, Scalar::Ff { ix: b, .. }) => {
                    Scalar::Ff { fld: fa.clone(), ix: $ff(fa.as_ref(), *a, *b) }
                }
                (Scalar::Rf(a), Scalar::Rf(b)) => Scalar::Rf(Arc::new(a.$rf(b))),
                _ => panic!("scalar operation across field kinds"),
            }
        }
    };
}

impl Scalar {
    binop!(add, |f: &FieldTable, a, b| f.add(a, b), add);
    binop!(sub, |f: &FieldTable, a, b| f.sub(a, b), sub);
    binop!(mul, |f: &FieldTable, a, b| f.mul(a, b), mul);

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Ff { fld, ix } => Scalar::Ff { fld: fld.clone(), ix: fld.neg(*ix) },
            Scalar::Rf(r) => Scalar::Rf(Arc::new(r.neg())),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Ff { fld, ix } => fld.inv(*ix).map(|i| Scalar::Ff { fld: fld.clone(), ix: i }),
            Scalar::Rf(r) => r.inv().map(|x| Scalar::Rf(Arc::new(x))),
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inv().map(|i| self.mul(&i))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Ff { ix, .. } => *ix == 0,
            Scalar::Rf(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Ff { ix, .. } => *ix == 1,
            Scalar::Rf(r) => r.is_one(),
        }
    }

    pub fn pow(&self, e: u64) -> Scalar {
        let mut acc = self.field().one();
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

    /// x^p - x in the scalar's field.
    pub fn wp(&self) -> Scalar {
        let p = self.field().characteristic() as u64;
        self.pow(p).sub(self)
    }

    pub fn field(&self) -> FieldDesc {
        match self {
            Scalar::Ff { fld, .. } => FieldDesc::Ff(fld.clone()),
            Scalar::Rf(r) => FieldDesc::Rf(r.ctx().clone()),
        }
    }

    pub fn from_ratfn(r: RatFn) -> Scalar {
        Scalar::Rf(Arc::new(r))
    }

    pub fn as_ff(&self) -> Option<(Arc<FieldTable>, u8)> {
        match self {
            Scalar::Ff { fld, ix } => Some((fld.clone(), *ix)),
            _ => None,
        }
    }

    pub fn as_rf(&self) -> Option<&RatFn> {
        match self {
            Scalar::Rf(r) => Some(r),
            _ => None,
        }
    }

    /// Specialize: finite scalars embed into `target`, rational functions are
    /// evaluated at `point` (one entry per context variable). None when a
    /// denominator vanishes or no embedding exists.
    pub fn specialize(&self, target: &Arc<FieldTable>, point: &[u8]) -> Option<u8> {
        match self {
            Scalar::Ff { fld, ix } => {
                let emb = embedding(fld, target)?;
                Some(emb[*ix as usize])
            }
            Scalar::Rf(r) => {
                let emb = embedding(&r.ctx().base, target)?;
                r.eval_embedded(target, &emb, point)
            }
        }
    }

    /// Total ordering used only for deterministic printing and sorting; it is
    /// consistent with equality on normalized values.
    pub fn sort_key(&self) -> String {
        format!("{}", self)
    }
}

/// Lift a polynomial to a scalar of its fraction field.
pub fn poly_scalar(p: MultiPoly) -> Scalar {
    Scalar::Rf(Arc::new(RatFn::from_poly(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ff::field;

    #[test]
    fn finite_scalar_ops() {
        let f16 = FieldDesc::Ff(field(2, 4).unwrap());
        let g = match &f16 {
            FieldDesc::Ff(f) => Scalar::Ff { fld: f.clone(), ix: f.gen() },
            _ => unreachable!(),
        };
        // wp(g) = g^2 + g
        let w = g.wp();
        assert_eq!(w, g.mul(&g).add(&g));
        assert!(g.mul(&g.inv().unwrap()).is_one());
    }

    #[test]
    fn ratfn_scalar_ops() {
        let c = RfCtx::new(field(2, 1).unwrap(), vec!["t".into()]);
        let fd = FieldDesc::Rf(c.clone());
        let t = Scalar::Rf(Arc::new(RatFn::var(&c, 0)));
        let one = fd.one();
        let r = t.add(&one).div(&t).unwrap();
        assert_eq!(r.mul(&t), t.add(&one));
        // wp over F_2(t): t^2 - t
        assert_eq!(t.wp(), t.pow(2).add(&t));
    }

    #[test]
    #[should_panic]
    fn mixing_fields_panics() {
        let a = FieldDesc::Ff(field(2, 2).unwrap()).one();
        let c = RfCtx::new(field(2, 1).unwrap(), vec!["t".into()]);
        let b = FieldDesc::Rf(c).one();
        let _ = a.add(&b);
    }
}
