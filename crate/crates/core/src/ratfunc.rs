//! Elements of the function field `Q(t)` in canonical form.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::Field;
use crate::poly::Poly;

/// `num / den` with `gcd(num, den) = 1` and `den` monic. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Reduce to canonical form. Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RationalFunction::from_poly(Poly::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let lc = den.leading().recip();
        RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    /// Build from a pair already known to be canonical; used by deserialization
    /// which re-checks via `is_canonical`.
    pub fn from_parts(num: Poly, den: Poly) -> Option<Self> {
        let f = RationalFunction { num, den };
        f.is_canonical().then_some(f)
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        RationalFunction::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_canonical(&self) -> bool {
        self.den.is_monic()
            && (if self.num.is_zero() {
                self.den.is_constant()
            } else {
                self.num.gcd(&self.den).is_constant()
            })
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_polynomial(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    /// Value at `t`, or `None` at a pole.
    pub fn eval(&self, t: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(t);
        if Zero::is_zero(&d) {
            None
        } else {
            Some(self.num.eval(t) / d)
        }
    }

    /// Order of pole at the finite place `t = c` (0 if regular there).
    pub fn pole_order_at(&self, c: &BigRational) -> usize {
        self.den.root_multiplicity(c)
    }

    /// `deg num - deg den`, the negative of the valuation at infinity.
    pub fn degree(&self) -> i64 {
        if self.num.is_zero() {
            return i64::MIN;
        }
        self.num.degree_or_zero() as i64 - self.den.degree_or_zero() as i64
    }

    /// `f(-t)`
    pub fn reflect(&self) -> Self {
        RationalFunction::new(self.num.reflect(), self.den.reflect())
    }

    /// `f(t^2)`
    pub fn compose_square(&self) -> Self {
        RationalFunction::new(self.num.compose_square(), self.den.compose_square())
    }

    /// `u^weight * f(1/u)`: the coordinate change to the chart at infinity.
    pub fn weighted_inversion(&self, weight: usize) -> Self {
        if self.num.is_zero() {
            return self.clone();
        }
        let dn = self.num.degree_or_zero();
        let dd = self.den.degree_or_zero();
        // f(1/u) = u^(dd - dn) * rev(num) / rev(den)
        let num = self.num.reversed(dn);
        let den = self.den.reversed(dd);
        let exponent = weight as i64 + dd as i64 - dn as i64;
        if exponent >= 0 {
            RationalFunction::new(num.shift(exponent as usize), den)
        } else {
            RationalFunction::new(num, den.shift((-exponent) as usize))
        }
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.den.is_one_poly() {
            self.num.display_in(var)
        } else {
            format!("({}) / ({})", self.num.display_in(var), self.den.display_in(var))
        }
    }
}

impl Poly {
    fn is_one_poly(&self) -> bool {
        self.coeffs().len() == 1 && self.coeffs()[0].is_one()
    }
}

impl Field for RationalFunction {
    fn zero() -> Self {
        RationalFunction::from_poly(Poly::zero())
    }
    fn one() -> Self {
        RationalFunction::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_int(n: i64) -> Self {
        RationalFunction::from_poly(Poly::from_ints(&[n]))
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        // cross-cancel first to keep the final gcd small
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (n1, d2) = if g1.is_constant() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.exact_div(&g1), rhs.den.exact_div(&g1))
        };
        let (n2, d1) = if g2.is_constant() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.exact_div(&g2), self.den.exact_div(&g2))
        };
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        if num.is_zero() {
            return <Self as Field>::zero();
        }
        let lc = den.leading().recip();
        RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }
    fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Self {
        assert!(!self.num.is_zero(), "inverse of zero rational function");
        let lc = self.num.leading().recip();
        RationalFunction {
            num: self.den.scale(&lc),
            den: self.num.scale(&lc),
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("t"))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("t"))
    }
}
