//! Rational functions num/den over a multivariate polynomial ring.
//!
//! Equality is decided by cross-multiplication, which is sound because the
//! polynomial ring is an integral domain. Normalization keeps representatives
//! tidy without insisting on a canonical form: univariate fractions are
//! reduced by gcd with a monic denominator, multivariate fractions only strip
//! the common monomial content and scale the denominator's leading
//! coefficient to 1.

use std::fmt;
use std::sync::Arc;

use super::poly::{same_ctx, MultiPoly, RfCtx};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFn {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RatFn {
    pub fn from_poly(num: MultiPoly) -> RatFn {
        let den = MultiPoly::one(&num.ctx);
        RatFn { num, den }
    }

    pub fn new(num: MultiPoly, den: MultiPoly) -> RatFn {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let mut r = RatFn { num, den };
        r.normalize();
        r
    }

    pub fn ctx(&self) -> &Arc<RfCtx> {
        &self.num.ctx
    }

    pub fn zero(ctx: &Arc<RfCtx>) -> RatFn {
        RatFn { num: MultiPoly::zero(ctx), den: MultiPoly::one(ctx) }
    }

    pub fn one(ctx: &Arc<RfCtx>) -> RatFn {
        RatFn { num: MultiPoly::one(ctx), den: MultiPoly::one(ctx) }
    }

    pub fn constant(ctx: &Arc<RfCtx>, c: u8) -> RatFn {
        RatFn { num: MultiPoly::constant(ctx, c), den: MultiPoly::one(ctx) }
    }

    pub fn var(ctx: &Arc<RfCtx>, i: usize) -> RatFn {
        RatFn { num: MultiPoly::var(ctx, i), den: MultiPoly::one(ctx) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    fn normalize(&mut self) {
        let ctx = self.num.ctx.clone();
        let f = &ctx.base;
        if self.num.is_zero() {
            self.den = MultiPoly::one(&ctx);
            return;
        }
        if ctx.vars.len() == 1 {
            let g = self.num.gcd_univ(&self.den);
            if !g.is_one() {
                self.num = self.num.exact_div(&g).unwrap();
                self.den = self.den.exact_div(&g).unwrap();
            }
        } else {
            let cn = self.num.mono_content();
            let cd = self.den.mono_content();
            let common: Vec<u16> = cn.iter().zip(&cd).map(|(&a, &b)| a.min(b)).collect();
            if common.iter().any(|&e| e > 0) {
                self.num = self.num.shift_down(&common);
                self.den = self.den.shift_down(&common);
            }
        }
        let lc = self.den.leading_coeff();
        if lc != 1 {
            let inv = f.inv(lc).unwrap();
            self.num = self.num.scale(inv);
            self.den = self.den.scale(inv);
        }
    }

    pub fn eq_cross(&self, rhs: &RatFn) -> bool {
        debug_assert!(same_ctx(self.ctx(), rhs.ctx()));
        self.num.mul(&rhs.den) == rhs.num.mul(&self.den)
    }

    pub fn add(&self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFn::new(self.num.add(&rhs.num), self.den.clone());
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        RatFn::new(num, den)
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, rhs: &RatFn) -> RatFn {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero(self.ctx());
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        RatFn::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn inv(&self) -> Option<RatFn> {
        if self.is_zero() {
            return None;
        }
        Some(RatFn::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RatFn) -> Option<RatFn> {
        Some(self.mul(&rhs.inv()?))
    }

    /// Specialize all variables at a point of `target`, with `emb` embedding
    /// the coefficient field. None when the denominator vanishes there.
    pub fn eval_embedded(
        &self,
        target: &super::ff::FieldTable,
        emb: &[u8],
        point: &[u8],
    ) -> Option<u8> {
        let d = self.den.eval_embedded(target, emb, point);
        let n = self.num.eval_embedded(target, emb, point);
        target.inv(d).map(|di| target.mul(n, di))
    }

    /// Degree cap check for coordinate inputs.
    pub fn within_cap(&self, cap: u16) -> bool {
        let n = self.ctx().vars.len();
        (0..n).all(|v| self.num.degree_in(v) <= cap && self.den.degree_in(v) <= cap)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::exactfield::grammar::print_ratfn(self))
    }
}
