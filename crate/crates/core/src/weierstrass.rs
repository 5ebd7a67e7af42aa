//! Elliptic surfaces in short Weierstrass form `y^2 = x^3 + A(t) x + B(t)`
//! over `Q(t)`, with `deg A <= 4k`, `deg B <= 6k`. `k = 1` is a rational
//! elliptic surface, `k = 2` a K3 surface.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::curve::{Cubic, Point};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfunc::RationalFunction;

/// A place of the base `P^1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(BigRational),
    Infinity,
}

impl Place {
    pub fn int(n: i64) -> Self {
        Place::Finite(crate::field::q(n))
    }

    /// Image under `s -> -s`.
    pub fn reflect(&self) -> Place {
        match self {
            Place::Finite(s) => Place::Finite(-s),
            Place::Infinity => Place::Infinity,
        }
    }

    /// Fixed by `s -> -s`.
    pub fn is_ramified(&self) -> bool {
        match self {
            Place::Finite(s) => s.is_zero(),
            Place::Infinity => true,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(s) => write!(f, "{s}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "oo") {
            return Ok(Place::Infinity);
        }
        s.parse::<BigRational>()
            .map(Place::Finite)
            .map_err(|e| Error::Parse(format!("place `{s}`: {e}")))
    }
}

/// Reduction type of a fiber, deliberately coarse: smooth, multiplicative
/// `I_n`, or anything additive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiberType {
    Smooth,
    NodalI1,
    Multiplicative(usize),
    Other { ord_delta: usize },
}

impl FiberType {
    fn multiplicative(n: usize) -> Self {
        if n == 1 {
            FiberType::NodalI1
        } else {
            FiberType::Multiplicative(n)
        }
    }

    pub fn ord_delta(&self) -> usize {
        match *self {
            FiberType::Smooth => 0,
            FiberType::NodalI1 => 1,
            FiberType::Multiplicative(n) => n,
            FiberType::Other { ord_delta } => ord_delta,
        }
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::Smooth => f.write_str("smooth"),
            FiberType::NodalI1 => f.write_str("I1"),
            FiberType::Multiplicative(n) => write!(f, "I{n}"),
            FiberType::Other { ord_delta } => write!(f, "additive(ord={ord_delta})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct WeierstrassModel {
    a: Poly,
    b: Poly,
    k: u32,
}

impl WeierstrassModel {
    pub fn new(a: Poly, b: Poly, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::out_of_range("k", 0, "k >= 1"));
        }
        let (abound, bbound) = (4 * k as usize, 6 * k as usize);
        if a.degree_or_zero() > abound {
            return Err(Error::DegreeBound {
                which: "A".into(),
                degree: a.degree_or_zero(),
                bound: abound,
            });
        }
        if b.degree_or_zero() > bbound {
            return Err(Error::DegreeBound {
                which: "B".into(),
                degree: b.degree_or_zero(),
                bound: bbound,
            });
        }
        let m = WeierstrassModel { a, b, k };
        if m.raw_discriminant().is_zero() {
            return Err(Error::DegenerateModel);
        }
        Ok(m)
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    fn raw_discriminant(&self) -> Poly {
        let a3 = self.a.pow(3).scale(&crate::field::q(4));
        let b2 = self.b.pow(2).scale(&crate::field::q(27));
        (&a3 + &b2).scale(&crate::field::q(-16))
    }

    /// `-16 (4 A^3 + 27 B^2)`, nonzero by construction.
    pub fn discriminant(&self) -> Poly {
        self.raw_discriminant()
    }

    /// The same surface in the coordinate `u = 1/t`:
    /// `A~(u) = u^{4k} A(1/u)`, `B~(u) = u^{6k} B(1/u)`.
    pub fn infinity_chart(&self) -> WeierstrassModel {
        WeierstrassModel {
            a: self.a.reversed(4 * self.k as usize),
            b: self.b.reversed(6 * self.k as usize),
            k: self.k,
        }
    }

    /// Order of vanishing of the discriminant at infinity, `12k - deg Delta`.
    pub fn ord_delta_at_infinity(&self) -> usize {
        12 * self.k as usize - self.discriminant().degree_or_zero()
    }

    /// The fiber over a place as a cubic over `Q` (chart coordinates at infinity).
    pub fn fiber(&self, place: &Place) -> Cubic<BigRational> {
        match place {
            Place::Finite(t) => Cubic::new(self.a.eval(t), self.b.eval(t)),
            Place::Infinity => self.infinity_chart().fiber(&Place::int(0)),
        }
    }

    /// The generic fiber as a cubic over `Q(t)`.
    pub fn generic_fiber(&self) -> Cubic<RationalFunction> {
        Cubic::new(
            RationalFunction::from_poly(self.a.clone()),
            RationalFunction::from_poly(self.b.clone()),
        )
    }

    pub fn classify_fiber(&self, place: &Place) -> FiberType {
        match place {
            Place::Infinity => self.infinity_chart().classify_fiber(&Place::int(0)),
            Place::Finite(t) => {
                let delta = self.discriminant();
                if !delta.eval(t).is_zero() {
                    return FiberType::Smooth;
                }
                let n = delta.root_multiplicity(t);
                if self.a.eval(t).is_zero() {
                    FiberType::Other { ord_delta: n }
                } else {
                    FiberType::multiplicative(n)
                }
            }
        }
    }

    /// `y^2 = x^3 + A(t) x + B(t)` exactly.
    pub fn point_on_fiber(&self, place: &Place, x: &BigRational, y: &BigRational) -> bool {
        self.fiber(place).contains(&Point::affine(x.clone(), y.clone()))
    }

    /// Singular fibers grouped into unions of Galois orbits: each affine
    /// group is the root set of a square-free factor of the discriminant,
    /// split according to whether `A` vanishes there.
    pub fn singular_fibers(&self) -> Vec<SingularFiberGroup> {
        let delta = self.discriminant();
        let mut out = Vec::new();
        for (mult, factor) in delta.squarefree_decomposition() {
            let additive = factor.gcd(&self.a);
            let multiplicative = if additive.is_constant() {
                factor.clone()
            } else {
                factor.exact_div(&additive)
            };
            if !multiplicative.is_constant() {
                out.push(SingularFiberGroup {
                    locus: Locus::Roots(multiplicative.clone()),
                    places: multiplicative.degree_or_zero(),
                    fiber: FiberType::multiplicative(mult),
                });
            }
            if !additive.is_constant() {
                out.push(SingularFiberGroup {
                    locus: Locus::Roots(additive.clone()),
                    places: additive.degree_or_zero(),
                    fiber: FiberType::Other { ord_delta: mult },
                });
            }
        }
        if self.ord_delta_at_infinity() > 0 {
            out.push(SingularFiberGroup {
                locus: Locus::Infinity,
                places: 1,
                fiber: self.classify_fiber(&Place::Infinity),
            });
        }
        out
    }

    /// General rational elliptic surface: twelve distinct singular fibers,
    /// all of type `I1`.
    pub fn is_general_rational_elliptic(&self) -> Result<GeneralityReport> {
        if self.k != 1 {
            return Err(Error::Precondition(format!(
                "generality is defined for rational elliptic models (k = 1), got k = {}",
                self.k
            )));
        }
        let groups = self.singular_fibers();
        let total_ord: usize = groups.iter().map(|g| g.places * g.fiber.ord_delta()).sum();
        let distinct: usize = groups.iter().map(|g| g.places).sum();
        let all_nodal = groups.iter().all(|g| g.fiber == FiberType::NodalI1);
        Ok(GeneralityReport {
            general: total_ord == 12 && distinct == 12 && all_nodal,
            total_ord_delta: total_ord,
            distinct_singular_places: distinct,
            groups,
        })
    }
}

impl fmt::Debug for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({}) x + ({})  [k={}]", self.a, self.b, self.k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Locus {
    /// All roots of this monic square-free polynomial.
    Roots(Poly),
    Infinity,
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Roots(p) => write!(f, "roots of {p}"),
            Locus::Infinity => f.write_str("t = inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularFiberGroup {
    pub locus: Locus,
    /// Number of places over `Q-bar` in this group.
    pub places: usize,
    pub fiber: FiberType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralityReport {
    pub general: bool,
    pub total_ord_delta: usize,
    pub distinct_singular_places: usize,
    pub groups: Vec<SingularFiberGroup>,
}

impl fmt::Display for GeneralityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "general={} total_ord_delta={} singular_places={}",
            self.general, self.total_ord_delta, self.distinct_singular_places
        )?;
        for g in &self.groups {
            writeln!(f, "  {}\tplaces={}\ttype={}", g.locus, g.places, g.fiber)?;
        }
        Ok(())
    }
}
