//! Chord-tangent group law on a short Weierstrass cubic `y^2 = x^3 + a x + b`
//! over any field implementing [`Field`]. Over `Q` this is the law on a
//! single fiber; over `Q(t)` it is the fiberwise law on sections.

use std::fmt;

use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Point<F> {
    /// The neutral element (point at infinity / zero section).
    Zero,
    Affine { x: F, y: F },
}

impl<F> Point<F> {
    pub fn affine(x: F, y: F) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Point::Zero)
    }

    pub fn coords(&self) -> Option<(&F, &F)> {
        match self {
            Point::Zero => None,
            Point::Affine { x, y } => Some((x, y)),
        }
    }
}

impl<F: fmt::Display> fmt::Display for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Zero => f.write_str("O"),
            Point::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl<F: fmt::Debug> fmt::Debug for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Zero => f.write_str("O"),
            Point::Affine { x, y } => write!(f, "({x:?}, {y:?})"),
        }
    }
}

/// Short Weierstrass cubic over `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cubic<F> {
    pub a: F,
    pub b: F,
}

impl<F: Field> Cubic<F> {
    pub fn new(a: F, b: F) -> Self {
        Cubic { a, b }
    }

    /// `x^3 + a x + b`
    pub fn rhs(&self, x: &F) -> F {
        x.square().mul(x).add(&self.a.mul(x)).add(&self.b)
    }

    /// `-16 (4 a^3 + 27 b^2)`
    pub fn discriminant(&self) -> F {
        let four_a3 = F::from_int(4).mul(&self.a.square().mul(&self.a));
        let b2 = F::from_int(27).mul(&self.b.square());
        F::from_int(-16).mul(&four_a3.add(&b2))
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match p {
            Point::Zero => true,
            Point::Affine { x, y } => y.square() == self.rhs(x),
        }
    }

    pub fn neg(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Zero => Point::Zero,
            Point::Affine { x, y } => Point::affine(x.clone(), y.neg()),
        }
    }

    pub fn add(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Zero, _) => return q.clone(),
            (_, Point::Zero) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if y1.add(y2).is_zero() {
                // vertical line: inverse pair, or doubling a 2-torsion point
                return Point::Zero;
            }
            // tangent: (3 x^2 + a) / (2 y)
            F::from_int(3)
                .mul(&x1.square())
                .add(&self.a)
                .div(&F::from_int(2).mul(y1))
        } else {
            y2.sub(y1).div(&x2.sub(x1))
        };
        let x3 = slope.square().sub(x1).sub(x2);
        let y3 = slope.mul(&x1.sub(&x3)).sub(y1);
        Point::affine(x3, y3)
    }

    pub fn double(&self, p: &Point<F>) -> Point<F> {
        self.add(p, p)
    }

    pub fn sub(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        self.add(p, &self.neg(q))
    }

    /// `n * p` by double-and-add; negative `n` negates.
    pub fn mul(&self, p: &Point<F>, n: i64) -> Point<F> {
        let mut k = n.unsigned_abs();
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut acc = Point::Zero;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.double(&base);
            }
        }
        acc
    }
}
