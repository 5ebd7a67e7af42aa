//! Sections of an elliptic surface as `Q(t)`-points of its generic fiber.
//!
//! A section meets the zero section exactly where `x` has a pole, with
//! multiplicity half the pole order. Intersection numbers are computed by
//! counting those poles (including the place at infinity, read off in the
//! chart `x~ = u^{2k} x(1/u)`), and `P.Q = (P - Q).O` by translation.

use num_rational::BigRational;

use crate::curve::Point;
use crate::error::{Error, Result};
use crate::ratfunc::RationalFunction;
use crate::weierstrass::{Place, WeierstrassModel};

pub type Section = Point<RationalFunction>;
pub type FiberPoint = Point<BigRational>;

/// Largest order tried by the bounded torsion scan.
pub const TORSION_SCAN_BOUND: u32 = 12;

/// Validate and build a section `(x, y)`.
pub fn section(model: &WeierstrassModel, x: RationalFunction, y: RationalFunction) -> Result<Section> {
    let p = Point::affine(x, y);
    validate(model, &p)?;
    Ok(p)
}

/// Check the Weierstrass identity and pole-order parity of `x`.
pub fn validate(model: &WeierstrassModel, p: &Section) -> Result<()> {
    let Some((x, _)) = p.coords() else {
        return Ok(());
    };
    if !model.generic_fiber().contains(p) {
        return Err(Error::NotOnCurve);
    }
    // all affine pole orders even  <=>  the monic denominator is a square in Q[t]
    if x.den().sqrt().is_none() {
        return Err(Error::OddPoleOrder {
            place: format!("a root of {}", x.den()),
        });
    }
    if infinity_pole_order(model, x) % 2 == 1 {
        return Err(Error::OddPoleOrder { place: "inf".into() });
    }
    Ok(())
}

fn infinity_pole_order(model: &WeierstrassModel, x: &RationalFunction) -> u64 {
    if x.num().is_zero() {
        return 0;
    }
    (x.degree() - 2 * model.k() as i64).max(0) as u64
}

pub fn add(model: &WeierstrassModel, p: &Section, q: &Section) -> Section {
    model.generic_fiber().add(p, q)
}

pub fn neg(model: &WeierstrassModel, p: &Section) -> Section {
    model.generic_fiber().neg(p)
}

pub fn sub(model: &WeierstrassModel, p: &Section, q: &Section) -> Section {
    model.generic_fiber().sub(p, q)
}

pub fn mul_int(model: &WeierstrassModel, p: &Section, n: i64) -> Section {
    model.generic_fiber().mul(p, n)
}

/// The section expressed on [`WeierstrassModel::infinity_chart`]:
/// `x~ = u^{2k} x(1/u)`, `y~ = u^{3k} y(1/u)`.
pub fn to_infinity_chart(model: &WeierstrassModel, p: &Section) -> Section {
    match p {
        Point::Zero => Point::Zero,
        Point::Affine { x, y } => {
            let k = model.k() as usize;
            Point::affine(x.weighted_inversion(2 * k), y.weighted_inversion(3 * k))
        }
    }
}

/// Total pole degree of `x` over all places of `P^1`, counted over `Q-bar`.
pub fn total_pole_degree(model: &WeierstrassModel, p: &Section) -> Result<u64> {
    match p.coords() {
        None => Err(Error::SelfIntersection("the zero section with itself".into())),
        Some((x, _)) => Ok(x.den().degree_or_zero() as u64 + infinity_pole_order(model, x)),
    }
}

/// `P . O` for `P != O`.
pub fn intersect_zero(model: &WeierstrassModel, p: &Section) -> Result<u64> {
    let total = total_pole_degree(model, p)?;
    debug_assert!(total % 2 == 0);
    Ok(total / 2)
}

/// `P . Q` for distinct sections, as `(P - Q) . O`.
pub fn intersect_sections(model: &WeierstrassModel, p: &Section, q: &Section) -> Result<u64> {
    if p == q {
        return Err(Error::SelfIntersection("P = Q".into()));
    }
    intersect_zero(model, &sub(model, p, q))
}

/// Restriction of a section to the fiber over `place`: `O` at poles of `x`,
/// chart coordinates at infinity.
pub fn evaluate(model: &WeierstrassModel, p: &Section, place: &Place) -> FiberPoint {
    match place {
        Place::Infinity => {
            let chart = model.infinity_chart();
            evaluate(&chart, &to_infinity_chart(model, p), &Place::int(0))
        }
        Place::Finite(t) => match p {
            Point::Zero => Point::Zero,
            Point::Affine { x, y } => match (x.eval(t), y.eval(t)) {
                (Some(xv), Some(yv)) => Point::affine(xv, yv),
                _ => Point::Zero,
            },
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderCertificate {
    TwoTorsion,
    /// `P . (-P)` is positive, so `P` cannot be torsion: distinct torsion
    /// sections of a smooth relatively minimal elliptic surface are disjoint.
    InfiniteOrder { intersection_with_negative: u64 },
    TorsionOfOrder(u32),
    Inconclusive,
}

pub fn infinite_order_certificate(model: &WeierstrassModel, p: &Section) -> Result<OrderCertificate> {
    if p.is_zero() {
        return Err(Error::Precondition("order certificate of the zero section".into()));
    }
    let minus = neg(model, p);
    if minus == *p {
        return Ok(OrderCertificate::TwoTorsion);
    }
    let meet = intersect_sections(model, p, &minus)?;
    if meet >= 1 {
        return Ok(OrderCertificate::InfiniteOrder {
            intersection_with_negative: meet,
        });
    }
    let mut multiple = p.clone();
    for n in 2..=TORSION_SCAN_BOUND {
        multiple = add(model, &multiple, p);
        if multiple.is_zero() {
            return Ok(OrderCertificate::TorsionOfOrder(n));
        }
    }
    Ok(OrderCertificate::Inconclusive)
}

/// `s -> -s` applied to a section: `(x(-s), y(-s))`.
pub fn reflect(p: &Section) -> Section {
    match p {
        Point::Zero => Point::Zero,
        Point::Affine { x, y } => Point::affine(x.reflect(), y.reflect()),
    }
}
