//! Quadratic base change `t = s^2` of a rational elliptic surface, ramified
//! over `t = 0` and `t = inf`, and the involutions living on the resulting
//! K3 surface.
//!
//! The deck involution `iota` sends the fiber over `s` to the fiber over
//! `-s`, acting as the identity on fiber coordinates (the fibers over `s`
//! and `-s` are the same cubic since `A` and `B` only involve `s^2`).
//! For an anti-invariant section `P` the composite `tau = iota o (- P)` is an
//! involution, and it is fixed-point free exactly when `P` avoids the zero
//! section on both ramified fibers.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::curve::Point;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;
use crate::ratfunc::RationalFunction;
use crate::sections::{self, FiberPoint, Section};
use crate::weierstrass::{FiberType, Place, WeierstrassModel};

#[derive(Clone, Debug, PartialEq)]
pub struct BaseChangeData {
    downstairs: WeierstrassModel,
    upstairs: WeierstrassModel,
}

impl BaseChangeData {
    pub fn downstairs(&self) -> &WeierstrassModel {
        &self.downstairs
    }

    pub fn upstairs(&self) -> &WeierstrassModel {
        &self.upstairs
    }
}

/// Pull a rational elliptic surface back along `t = s^2`.
pub fn quadratic_base_change(model: &WeierstrassModel) -> Result<BaseChangeData> {
    if model.k() != 1 {
        return Err(Error::Precondition(format!(
            "quadratic base change expects a rational elliptic model (k = 1), got k = {}",
            model.k()
        )));
    }
    for place in [Place::int(0), Place::Infinity] {
        if model.classify_fiber(&place) != FiberType::Smooth {
            return Err(Error::SingularRamificationFiber {
                place: place.to_string(),
            });
        }
    }
    let upstairs = WeierstrassModel::new(model.a().compose_square(), model.b().compose_square(), 2)?;
    Ok(BaseChangeData {
        downstairs: model.clone(),
        upstairs,
    })
}

/// Move an arbitrary ramification pair `(t0, t_inf)` to `(0, inf)` by a
/// Möbius change of the base coordinate. Returns the model in the new
/// coordinate `w`, with `w = 0` over `t0` and `w = inf` over `t_inf`.
pub fn normalize_ramification(model: &WeierstrassModel, t0: &Place, t_inf: &Place) -> Result<WeierstrassModel> {
    if t0 == t_inf {
        return Err(Error::Precondition("ramification points must be distinct".into()));
    }
    let one = <BigRational as One>::one();
    let zero = <BigRational as Zero>::zero();
    // t = (alpha + beta w) / (gamma + delta w)
    let (alpha, beta, gamma, delta) = match (t0, t_inf) {
        (Place::Finite(a), Place::Finite(b)) => (a.clone(), b.clone(), one.clone(), one),
        (Place::Finite(a), Place::Infinity) => (a.clone(), one.clone(), one, zero),
        (Place::Infinity, Place::Finite(b)) => (one.clone(), b.clone(), zero, one),
        (Place::Infinity, Place::Infinity) => unreachable!(),
    };
    let numer = Poly::new(vec![alpha, beta]);
    let denom = Poly::new(vec![gamma, delta]);
    let k = model.k() as usize;
    let homogenize = |p: &Poly, weight: usize| -> Poly {
        let mut acc = Poly::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            let term = (&numer.pow(i as u32) * &denom.pow((weight - i) as u32)).scale(c);
            acc = &acc + &term;
        }
        acc
    };
    WeierstrassModel::new(homogenize(model.a(), 4 * k), homogenize(model.b(), 6 * k), model.k())
}

/// `iota`: `(s, pt) -> (-s, pt)`.
pub fn deck_involution(place: &Place, point: &FiberPoint) -> (Place, FiberPoint) {
    (place.reflect(), point.clone())
}

/// Pullback of a downstairs section: `(x(s^2), y(s^2))`.
pub fn pullback_section(section: &Section) -> Section {
    match section {
        Point::Zero => Point::Zero,
        Point::Affine { x, y } => Point::affine(x.compose_square(), y.compose_square()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// `iota^* P = P`: a pullback, cutting twin points in twin fibers.
    Invariant,
    /// `iota^* P = -P`: cuts opposite points in twin fibers.
    AntiInvariant,
    /// Neither; not a section arising from the dichotomy of this fibration.
    Neither,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::Invariant => "invariant",
            Symmetry::AntiInvariant => "anti-invariant",
            Symmetry::Neither => "neither",
        })
    }
}

pub fn classify_section_symmetry(_bc: &BaseChangeData, p: &Section) -> Symmetry {
    let Some((x, y)) = p.coords() else {
        return Symmetry::Invariant;
    };
    if x.reflect() != *x {
        return Symmetry::Neither;
    }
    let y_reflected = y.reflect();
    if y_reflected == *y {
        Symmetry::Invariant
    } else if y_reflected == y.neg() {
        Symmetry::AntiInvariant
    } else {
        Symmetry::Neither
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionReport {
    pub symmetry: Symmetry,
    pub at_zero: FiberPoint,
    pub at_infinity: FiberPoint,
    pub failures: Vec<String>,
}

impl CriterionReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "symmetry={} P(0)={} P(inf)={} criterion={}",
            self.symmetry,
            self.at_zero,
            self.at_infinity,
            if self.passes() { "pass" } else { "fail" }
        )?;
        for reason in &self.failures {
            write!(f, "\n  {reason}")?;
        }
        Ok(())
    }
}

/// `tau = iota o (- P)` is an Enriques involution iff `P` is anti-invariant
/// and meets neither ramified fiber in the zero section.
pub fn enriques_criterion(bc: &BaseChangeData, p: &Section) -> CriterionReport {
    let symmetry = classify_section_symmetry(bc, p);
    let at_zero = sections::evaluate(&bc.upstairs, p, &Place::int(0));
    let at_infinity = sections::evaluate(&bc.upstairs, p, &Place::Infinity);
    let mut failures = Vec::new();
    if symmetry != Symmetry::AntiInvariant {
        failures.push(format!("symmetry clause: section is {symmetry}, not anti-invariant"));
    }
    if at_zero.is_zero() {
        failures.push("P meets the zero section on the ramified fiber over t0 = 0".into());
    }
    if at_infinity.is_zero() {
        failures.push("P meets the zero section on the ramified fiber over t_inf = inf".into());
    }
    CriterionReport {
        symmetry,
        at_zero,
        at_infinity,
        failures,
    }
}

/// `m` with `P . O = 2m`.
pub fn specialness_index(bc: &BaseChangeData, p: &Section) -> Result<u64> {
    let report = enriques_criterion(bc, p);
    if !report.passes() {
        return Err(Error::Precondition(format!("Enriques criterion fails: {}", report.failures.join("; "))));
    }
    let meet = sections::intersect_zero(&bc.upstairs, p)?;
    if meet % 2 == 1 {
        return Err(Error::SpecialnessParity { value: meet.into() });
    }
    Ok(meet / 2)
}

/// K3 cover with an anti-invariant section passing the Enriques criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct EnriquesData {
    base: BaseChangeData,
    section: Section,
    m: u64,
}

impl EnriquesData {
    pub fn new(base: BaseChangeData, section: Section) -> Result<Self> {
        sections::validate(&base.upstairs, &section)?;
        let m = specialness_index(&base, &section)?;
        Ok(EnriquesData { base, section, m })
    }

    pub fn base(&self) -> &BaseChangeData {
        &self.base
    }

    pub fn section(&self) -> &Section {
        &self.section
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `tau(Q at s) = iota(Q - P(s))`, landing over `-s`.
    pub fn involution(&self, place: &Place, point: &FiberPoint) -> (Place, FiberPoint) {
        enriques_involution_with(&self.base, &self.section, place, point)
    }
}

/// Pointwise `tau = iota o (- P)` for any section `P` (no validity check).
pub fn enriques_involution_with(bc: &BaseChangeData, p: &Section, place: &Place, point: &FiberPoint) -> (Place, FiberPoint) {
    let fiber = bc.upstairs.fiber(place);
    let p_here = sections::evaluate(&bc.upstairs, p, place);
    deck_involution(place, &fiber.sub(point, &p_here))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Synthesis {
    pub b: Poly,
    pub base: BaseChangeData,
    pub section: Section,
    pub criterion: CriterionReport,
    /// Present when the criterion passes.
    pub m: Option<u64>,
}

/// Solve `t eta^2 = xi^3 + A xi + B` for `B`, build the base change, and the
/// anti-invariant section `P = (xi(s^2), s eta(s^2))`.
pub fn synthesize_anti_invariant(xi: &RationalFunction, eta: &RationalFunction, a: &Poly) -> Result<Synthesis> {
    let t = RationalFunction::from_poly(Poly::var());
    let a_rf = RationalFunction::from_poly(a.clone());
    let b_rf = t
        .mul(&eta.square())
        .sub(&xi.square().mul(xi))
        .sub(&a_rf.mul(xi));
    let b = b_rf
        .as_polynomial()
        .cloned()
        .ok_or_else(|| Error::NotPolynomial(format!("B = t*eta^2 - xi^3 - A*xi = {b_rf}")))?;
    if a.degree_or_zero() > 4 {
        return Err(Error::DegreeBound {
            which: "A".into(),
            degree: a.degree_or_zero(),
            bound: 4,
        });
    }
    if b.degree_or_zero() > 6 {
        return Err(Error::DegreeBound {
            which: "B".into(),
            degree: b.degree_or_zero(),
            bound: 6,
        });
    }
    let downstairs = WeierstrassModel::new(a.clone(), b.clone(), 1)?;
    let base = quadratic_base_change(&downstairs)?;
    let s = RationalFunction::from_poly(Poly::var());
    let section = Point::affine(xi.compose_square(), s.mul(&eta.compose_square()));
    sections::validate(&base.upstairs, &section)?;
    let criterion = enriques_criterion(&base, &section);
    let m = if criterion.passes() {
        Some(specialness_index(&base, &section)?)
    } else {
        None
    };
    Ok(Synthesis {
        b,
        base,
        section,
        criterion,
        m,
    })
}
