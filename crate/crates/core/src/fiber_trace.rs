//! Pointwise checks of how `iota` and `tau` move translates of curves on
//! the K3 cover. A curve is modeled by a finite list of sections; its trace
//! on the fiber over `s` is the set of their values there.

use num_rational::BigRational;
use serde::Serialize;

use crate::base_change::{
    classify_section_symmetry, deck_involution, enriques_criterion, enriques_involution_with, BaseChangeData,
    Symmetry,
};
use crate::curve::Point;
use crate::error::{Error, Result};
use crate::field::q;
use crate::sections::{self, FiberPoint, Section};
use crate::weierstrass::{FiberType, Place};

#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    pub label: String,
    /// Repeated entries stand for multiplicities.
    pub generators: Vec<Section>,
}

impl SampledCurve {
    pub fn new(label: impl Into<String>, generators: Vec<Section>) -> Self {
        SampledCurve {
            label: label.into(),
            generators,
        }
    }

    fn generator_name(&self, j: usize) -> String {
        format!("{}[{j}]", self.label)
    }
}

/// Replace every generator `Q` by `Q + kP`.
pub fn translate(bc: &BaseChangeData, curve: &SampledCurve, p: &Section, k: i64) -> SampledCurve {
    let model = bc.upstairs();
    let shift = sections::mul_int(model, p, k);
    SampledCurve {
        label: curve.label.clone(),
        generators: curve.generators.iter().map(|g| sections::add(model, g, &shift)).collect(),
    }
}

pub fn default_samples() -> Vec<BigRational> {
    (1..=20).map(q).collect()
}

/// One pointwise comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub s: String,
    pub k: i64,
    pub generator: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    pub relation: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceLog {
    pub records: Vec<CheckRecord>,
    pub notices: Vec<String>,
}

impl TraceLog {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// One JSON object per line, in check order.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    fn check(&mut self, s: &BigRational, k: i64, generator: String, relation: &str, lhs: &FiberPoint, rhs: &FiberPoint) {
        self.records.push(CheckRecord {
            s: s.to_string(),
            k,
            generator,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass: lhs == rhs,
            relation: relation.into(),
        });
    }
}

/// Whether `s` is usable: the fibers over `s` and `-s` are smooth and no
/// section in `involved` has a pole there.
fn usable_sample(bc: &BaseChangeData, s: &BigRational, involved: &[&Section]) -> std::result::Result<(), String> {
    let model = bc.upstairs();
    let here = Place::Finite(s.clone());
    if model.classify_fiber(&here) != FiberType::Smooth {
        return Err(format!("skipped s={s}: singular fiber"));
    }
    for place in [here.clone(), here.reflect()] {
        let Place::Finite(t) = &place else { unreachable!() };
        for sec in involved {
            if let Some((x, _)) = sec.coords() {
                if x.eval(t).is_none() {
                    return Err(format!("skipped s={s}: a section has a pole over {place}"));
                }
            }
        }
    }
    Ok(())
}

fn require_criterion(bc: &BaseChangeData, p: &Section) -> Result<()> {
    let report = enriques_criterion(bc, p);
    if !report.passes() {
        return Err(Error::Precondition(format!("P fails the Enriques criterion: {}", report.failures.join("; "))));
    }
    Ok(())
}

/// For invariant generators `Q`, at each sample `s`:
/// `iota((Q + kP)(s)) = (Q - kP)(-s)` and `tau((Q + kP)(s)) = (Q + (1-k)P)(-s)`.
pub fn verify_partenzares(
    bc: &BaseChangeData,
    curve: &SampledCurve,
    p: &Section,
    k: i64,
    samples: &[BigRational],
) -> Result<TraceLog> {
    let model = bc.upstairs();
    for (j, g) in curve.generators.iter().enumerate() {
        sections::validate(model, g)?;
        if classify_section_symmetry(bc, g) != Symmetry::Invariant {
            return Err(Error::Precondition(format!(
                "generator {} is not invariant under iota",
                curve.generator_name(j)
            )));
        }
    }
    require_criterion(bc, p)?;

    let plus_k = translate(bc, curve, p, k);
    let minus_k = translate(bc, curve, p, -k);
    let one_minus_k = translate(bc, curve, p, 1 - k);
    let mut log = TraceLog::default();
    for s in samples {
        let involved: Vec<&Section> = plus_k
            .generators
            .iter()
            .chain(&minus_k.generators)
            .chain(&one_minus_k.generators)
            .chain(std::iter::once(p))
            .collect();
        if let Err(notice) = usable_sample(bc, s, &involved) {
            log.notices.push(notice);
            continue;
        }
        let here = Place::Finite(s.clone());
        let there = here.reflect();
        for j in 0..curve.generators.len() {
            let name = curve.generator_name(j);
            let pt = sections::evaluate(model, &plus_k.generators[j], &here);
            let (_, via_iota) = deck_involution(&here, &pt);
            let expected = sections::evaluate(model, &minus_k.generators[j], &there);
            log.check(s, k, name.clone(), "iota", &via_iota, &expected);
            let (_, via_tau) = enriques_involution_with(bc, p, &here, &pt);
            let expected = sections::evaluate(model, &one_minus_k.generators[j], &there);
            log.check(s, k, name, "tau", &via_tau, &expected);
        }
    }
    Ok(log)
}

/// Index of `iota^*(Q) + P` in the generator list, for each `Q`; `None`
/// when the list is not closed under `tau`.
fn tau_partners(bc: &BaseChangeData, curve: &SampledCurve, p: &Section) -> Option<Vec<usize>> {
    let model = bc.upstairs();
    curve
        .generators
        .iter()
        .map(|g| {
            let image = sections::add(model, &sections::reflect(g), p);
            curve.generators.iter().position(|h| *h == image)
        })
        .collect()
}

/// For a `tau`-closed generator list, at each sample `s`:
/// `tau((Q + kP)(s))` lies in the `(-k)`-translate and `iota((Q + kP)(s))`
/// in the `-(k+1)`-translate, over `-s`.
pub fn verify_partenzaenr(
    bc: &BaseChangeData,
    curve: &SampledCurve,
    p: &Section,
    k: i64,
    samples: &[BigRational],
) -> Result<TraceLog> {
    let model = bc.upstairs();
    for g in &curve.generators {
        sections::validate(model, g)?;
    }
    require_criterion(bc, p)?;
    let partners = tau_partners(bc, curve, p)
        .ok_or_else(|| Error::Precondition(format!("generators of {} are not closed under tau", curve.label)))?;

    let plus_k = translate(bc, curve, p, k);
    let minus_k = translate(bc, curve, p, -k);
    let minus_k1 = translate(bc, curve, p, -(k + 1));
    let mut log = TraceLog::default();
    for s in samples {
        let involved: Vec<&Section> = plus_k
            .generators
            .iter()
            .chain(&minus_k.generators)
            .chain(&minus_k1.generators)
            .chain(std::iter::once(p))
            .collect();
        if let Err(notice) = usable_sample(bc, s, &involved) {
            log.notices.push(notice);
            continue;
        }
        let here = Place::Finite(s.clone());
        let there = here.reflect();
        for (j, &partner) in partners.iter().enumerate() {
            let name = curve.generator_name(j);
            let pt = sections::evaluate(model, &plus_k.generators[j], &here);
            let (_, via_tau) = enriques_involution_with(bc, p, &here, &pt);
            let expected = sections::evaluate(model, &minus_k.generators[partner], &there);
            log.check(s, k, name.clone(), "tau", &via_tau, &expected);
            let (_, via_iota) = deck_involution(&here, &pt);
            let expected = sections::evaluate(model, &minus_k1.generators[partner], &there);
            log.check(s, k, name, "iota", &via_iota, &expected);
        }
    }
    Ok(log)
}

/// Behaviour of `tau` on a ramified fiber: translation by `-P(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RamifiedFiber {
    pub place: Place,
    pub p_value: FiberPoint,
    pub has_fixed_points: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SanityReport {
    pub log: TraceLog,
    pub ramified: Vec<RamifiedFiber>,
}

impl SanityReport {
    /// `iota^2 = tau^2 = id` everywhere and `tau` is fixed-point free on
    /// both ramified fibers.
    pub fn passed(&self) -> bool {
        self.log.passed() && self.ramified.iter().all(|r| !r.has_fixed_points)
    }
}

/// `iota^2 = id` and `tau^2 = id` on the points `O, P, 2P, -P` of each
/// sampled fiber, and the translation description of `tau` over `0`, `inf`.
pub fn involution_sanity(bc: &BaseChangeData, p: &Section, samples: &[BigRational]) -> Result<SanityReport> {
    let model = bc.upstairs();
    sections::validate(model, p)?;
    if classify_section_symmetry(bc, p) != Symmetry::AntiInvariant {
        return Err(Error::Precondition("involution_sanity needs an anti-invariant section".into()));
    }
    let probes = SampledCurve::new(
        "probe",
        vec![
            Point::Zero,
            p.clone(),
            sections::mul_int(model, p, 2),
            sections::neg(model, p),
        ],
    );
    let mut log = TraceLog::default();
    for s in samples {
        let involved: Vec<&Section> = probes.generators.iter().collect();
        if let Err(notice) = usable_sample(bc, s, &involved) {
            log.notices.push(notice);
            continue;
        }
        let here = Place::Finite(s.clone());
        for (j, g) in probes.generators.iter().enumerate() {
            let pt = sections::evaluate(model, g, &here);
            let (mid, once) = deck_involution(&here, &pt);
            let (back, twice) = deck_involution(&mid, &once);
            debug_assert_eq!(back, here);
            log.check(s, 0, probes.generator_name(j), "iota^2", &twice, &pt);
            let (mid, once) = enriques_involution_with(bc, p, &here, &pt);
            let (_, twice) = enriques_involution_with(bc, p, &mid, &once);
            log.check(s, 0, probes.generator_name(j), "tau^2", &twice, &pt);
        }
    }

    let mut ramified = Vec::new();
    for place in [Place::int(0), Place::Infinity] {
        let p_value = sections::evaluate(model, p, &place);
        let fiber = model.fiber(&place);
        // tau restricted to the fiber against translation by -P(place)
        for (j, g) in probes.generators.iter().enumerate() {
            let pt = sections::evaluate(model, g, &place);
            let (_, image) = enriques_involution_with(bc, p, &place, &pt);
            let expected = fiber.sub(&pt, &p_value);
            let label = match &place {
                Place::Infinity => "inf".to_string(),
                Place::Finite(t) => t.to_string(),
            };
            log.records.push(CheckRecord {
                s: label,
                k: 0,
                generator: probes.generator_name(j),
                lhs: image.to_string(),
                rhs: expected.to_string(),
                pass: image == expected,
                relation: "tau=translation".into(),
            });
        }
        ramified.push(RamifiedFiber {
            has_fixed_points: p_value.is_zero(),
            place,
            p_value,
        });
    }
    Ok(SanityReport { log, ramified })
}

/// Invariant sections take the same value over `s` and `-s`.
pub fn twin_points(bc: &BaseChangeData, curve: &SampledCurve, samples: &[BigRational]) -> TraceLog {
    let model = bc.upstairs();
    let mut log = TraceLog::default();
    for s in samples {
        let involved: Vec<&Section> = curve.generators.iter().collect();
        if let Err(notice) = usable_sample(bc, s, &involved) {
            log.notices.push(notice);
            continue;
        }
        let here = Place::Finite(s.clone());
        for (j, g) in curve.generators.iter().enumerate() {
            let a = sections::evaluate(model, g, &here);
            let b = sections::evaluate(model, g, &here.reflect());
            log.check(s, 0, curve.generator_name(j), "twin", &a, &b);
        }
    }
    log
}
