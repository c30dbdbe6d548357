//! Ring values: either a plain field scalar or an Artin-Schreier tower
//! element. Symbol slots and witness components range over these, so the
//! same rewriting code works over a field and over an adjoined-root ring.

use std::fmt;
use std::sync::Arc;

use crate::exactfield::scalar::{FieldDesc, Scalar};
use crate::exactfield::tower::{Tower, TowerElem};

#[derive(Clone, Debug)]
pub enum RingDesc {
    Field(FieldDesc),
    Tower(Arc<Tower>),
}

impl PartialEq for RingDesc {
    fn eq(&self, other: &RingDesc) -> bool {
        match (self, other) {
            (RingDesc::Field(a), RingDesc::Field(b)) => a == b,
            (RingDesc::Tower(a), RingDesc::Tower(b)) => a == b,
            _ => false,
        }
    }
}

impl RingDesc {
    pub fn characteristic(&self) -> u32 {
        match self {
            RingDesc::Field(f) => f.characteristic(),
            RingDesc::Tower(t) => t.p(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            RingDesc::Field(f) => f.name(),
            RingDesc::Tower(t) => {
                let gens: Vec<&str> = t.layers.iter().map(|(n, _)| n.as_str()).collect();
                format!("{}[{}]", t.base.name(), gens.join(","))
            }
        }
    }

    pub fn zero(&self) -> Value {
        match self {
            RingDesc::Field(f) => Value::S(f.zero()),
            RingDesc::Tower(t) => Value::T(TowerElem::zero(t)),
        }
    }

    pub fn one(&self) -> Value {
        match self {
            RingDesc::Field(f) => Value::S(f.one()),
            RingDesc::Tower(t) => Value::T(TowerElem::one(t)),
        }
    }

    pub fn from_residue(&self, r: u64) -> Value {
        match self {
            RingDesc::Field(f) => Value::S(f.from_residue(r)),
            RingDesc::Tower(t) => Value::T(TowerElem::from_base(t, t.base.from_residue(r))),
        }
    }

    /// The underlying field when this ring is one.
    pub fn as_field(&self) -> Option<&FieldDesc> {
        match self {
            RingDesc::Field(f) => Some(f),
            RingDesc::Tower(_) => None,
        }
    }

    pub fn as_tower(&self) -> Option<&Arc<Tower>> {
        match self {
            RingDesc::Field(_) => None,
            RingDesc::Tower(t) => Some(t),
        }
    }
}

#[derive(Clone)]
pub enum Value {
    S(Scalar),
    T(TowerElem),
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::exactfield::grammar::print_value(self))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::exactfield::grammar::print_value(self))
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        match Value::promote_pair(self, other) {
            (Value::S(a), Value::S(b)) => a == b,
            (Value::T(a), Value::T(b)) => a == b,
            _ => unreachable!(),
        }
    }
}

macro_rules! value_binop {
    ($name:ident) => {
        pub fn $name(&self, rhs: &Value) -> Value {
            match Value::promote_pair(self, rhs) {
                (Value::S(a), Value::S(b)) => Value::S(a.$name(&b)),
                (Value::T(a), Value::T(b)) => Value::T(a.$name(&b)),
                _ => unreachable!(),
            }
        }
    };
}

impl Value {
    pub fn ring(&self) -> RingDesc {
        match self {
            Value::S(s) => RingDesc::Field(s.field()),
            Value::T(t) => RingDesc::Tower(t.tower.clone()),
        }
    }

    /// Lift a base-field scalar beside a tower element so binary ops can mix
    /// them; anything else must already live in the same ring.
    fn promote_pair(a: &Value, b: &Value) -> (Value, Value) {
        match (a, b) {
            (Value::S(s), Value::T(t)) if s.field() == t.tower.base => {
                (Value::T(TowerElem::from_base(&t.tower, s.clone())), b.clone())
            }
            (Value::T(t), Value::S(s)) if s.field() == t.tower.base => {
                (a.clone(), Value::T(TowerElem::from_base(&t.tower, s.clone())))
            }
            _ => (a.clone(), b.clone()),
        }
    }

    value_binop!(add);
    value_binop!(sub);
    value_binop!(mul);

    pub fn neg(&self) -> Value {
        match self {
            Value::S(s) => Value::S(s.neg()),
            Value::T(t) => Value::T(t.neg()),
        }
    }

    pub fn inv(&self) -> Option<Value> {
        match self {
            Value::S(s) => s.inv().map(Value::S),
            Value::T(t) => t.inv().map(Value::T),
        }
    }

    pub fn div(&self, rhs: &Value) -> Option<Value> {
        rhs.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: u64) -> Value {
        match self {
            Value::S(s) => Value::S(s.pow(e)),
            Value::T(t) => Value::T(t.pow(e)),
        }
    }

    /// x^p - x in the value's ring.
    pub fn wp(&self) -> Value {
        match self {
            Value::S(s) => Value::S(s.wp()),
            Value::T(t) => Value::T(t.wp()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::S(s) => s.is_zero(),
            Value::T(t) => t.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Value::S(s) => s.is_one(),
            Value::T(t) => t.is_one(),
        }
    }

    pub fn as_scalar(&self) -> Option<&Scalar> {
        match self {
            Value::S(s) => Some(s),
            Value::T(_) => None,
        }
    }

    pub fn as_tower_elem(&self) -> Option<&TowerElem> {
        match self {
            Value::T(t) => Some(t),
            Value::S(_) => None,
        }
    }

    /// Stable ordering key: the printed form.
    pub fn sort_key(&self) -> String {
        crate::exactfield::grammar::print_value(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ff::field;

    #[test]
    fn mixed_scalar_tower_ops() {
        let fd = FieldDesc::Ff(field(2, 1).unwrap());
        let t = Tower::new(fd.clone(), vec![("w".into(), fd.one())]);
        let ring = RingDesc::Tower(t.clone());
        let w = Value::T(TowerElem::gen(&t, 0));
        let one = Value::S(fd.one());
        // w^2 = w + 1 with the right-hand side built from a plain scalar
        assert_eq!(w.mul(&w), w.add(&one));
        assert_eq!(ring.one(), one);
        assert!(w.wp().is_one());
        let wi = w.inv().unwrap();
        assert!(w.mul(&wi).is_one());
    }

    #[test]
    fn field_values() {
        let fd = FieldDesc::Ff(field(3, 1).unwrap());
        let ring = RingDesc::Field(fd.clone());
        let two = ring.from_residue(2);
        assert_eq!(two.mul(&two), ring.one());
        assert_eq!(two.add(&ring.one()), ring.zero());
    }
}
