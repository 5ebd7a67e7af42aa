//! JSON forms of models, sections and base-change bundles. Rationals are
//! written as decimal strings `"p/q"` (or `"p"`), coefficients lowest degree
//! first.

use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::base_change::{quadratic_base_change, specialness_index, BaseChangeData};
use crate::curve::Point;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfunc::RationalFunction;
use crate::sections::{self, Section};
use crate::weierstrass::WeierstrassModel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub k: u32,
    #[serde(rename = "A")]
    pub a: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalFunctionJson {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SectionJson {
    Zero { zero: bool },
    Affine { x: RationalFunctionJson, y: RationalFunctionJson },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleJson {
    pub downstairs: ModelJson,
    pub upstairs: ModelJson,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<SectionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
}

pub fn rational_to_string(c: &BigRational) -> String {
    c.to_string()
}

pub fn rational_from_str(s: &str) -> Result<BigRational> {
    let parsed = BigRational::from_str(s.trim()).map_err(|_| Error::Malformed(format!("not a rational number: {s:?}")))?;
    Ok(parsed)
}

pub fn poly_to_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(rational_to_string).collect()
}

pub fn poly_from_strings(coeffs: &[String]) -> Result<Poly> {
    Ok(Poly::new(coeffs.iter().map(|c| rational_from_str(c)).collect::<Result<_>>()?))
}

pub fn model_to_json(model: &WeierstrassModel) -> ModelJson {
    ModelJson {
        k: model.k(),
        a: poly_to_strings(model.a()),
        b: poly_to_strings(model.b()),
    }
}

pub fn model_from_json(json: &ModelJson) -> Result<WeierstrassModel> {
    WeierstrassModel::new(poly_from_strings(&json.a)?, poly_from_strings(&json.b)?, json.k)
}

fn ratfunc_to_json(f: &RationalFunction) -> RationalFunctionJson {
    RationalFunctionJson {
        num: poly_to_strings(f.num()),
        den: poly_to_strings(f.den()),
    }
}

fn ratfunc_from_json(json: &RationalFunctionJson) -> Result<RationalFunction> {
    let den = poly_from_strings(&json.den)?;
    if den.is_zero() {
        return Err(Error::Malformed("zero denominator".into()));
    }
    Ok(RationalFunction::new(poly_from_strings(&json.num)?, den))
}

pub fn section_to_json(p: &Section) -> SectionJson {
    match p {
        Point::Zero => SectionJson::Zero { zero: true },
        Point::Affine { x, y } => SectionJson::Affine {
            x: ratfunc_to_json(x),
            y: ratfunc_to_json(y),
        },
    }
}

/// Parse without validating against a model.
pub fn section_from_json(json: &SectionJson) -> Result<Section> {
    match json {
        SectionJson::Zero { zero: true } => Ok(Point::Zero),
        SectionJson::Zero { zero: false } => Err(Error::Malformed("\"zero\": false is not a section".into())),
        SectionJson::Affine { x, y } => Ok(Point::affine(ratfunc_from_json(x)?, ratfunc_from_json(y)?)),
    }
}

/// Base change with an optional section on the K3 cover.
#[derive(Clone, Debug, PartialEq)]
pub struct Bundle {
    pub base: BaseChangeData,
    pub section: Option<Section>,
    pub m: Option<u64>,
}

impl Bundle {
    pub fn to_json(&self) -> BundleJson {
        BundleJson {
            downstairs: model_to_json(self.base.downstairs()),
            upstairs: model_to_json(self.base.upstairs()),
            p: self.section.as_ref().map(section_to_json),
            m: self.m,
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("bundle serializes");
        s.push('\n');
        s
    }

    /// Rebuild from JSON, checking that `upstairs` is the base change of
    /// `downstairs`, that `P` lies on it, and that `m` agrees.
    pub fn from_json(json: &BundleJson) -> Result<Self> {
        let downstairs = model_from_json(&json.downstairs)?;
        let base = quadratic_base_change(&downstairs)?;
        let upstairs = model_from_json(&json.upstairs)?;
        if &upstairs != base.upstairs() {
            return Err(Error::Malformed("upstairs model is not the base change of downstairs".into()));
        }
        let section = json.p.as_ref().map(section_from_json).transpose()?;
        if let Some(p) = &section {
            sections::validate(base.upstairs(), p)?;
        }
        if let Some(m) = json.m {
            let p = section
                .as_ref()
                .ok_or_else(|| Error::Malformed("m given without a section P".into()))?;
            let actual = specialness_index(&base, p)?;
            if actual != m {
                return Err(Error::Malformed(format!("m = {m} but P meets the zero section with multiplicity {}", 2 * actual)));
            }
        }
        Ok(Bundle {
            base,
            section,
            m: json.m,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: BundleJson = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Bundle::from_json(&json)
    }
}

pub fn model_from_json_str(text: &str) -> Result<WeierstrassModel> {
    let json: ModelJson = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    model_from_json(&json)
}

pub fn section_from_json_str(text: &str) -> Result<Section> {
    let json: SectionJson = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    section_from_json(&json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_change::synthesize_anti_invariant;
    use crate::field::Field;

    const WITNESS: &str = r#"{"k":1,"A":["1","0","0","0","-1"],"B":["-2","0","0","0","1","1"]}"#;

    #[test]
    fn surface_file_round_trip() {
        let m = model_from_json_str(WITNESS).unwrap();
        assert_eq!(m.b(), &Poly::from_ints(&[-2, 0, 0, 0, 1, 1]));
        assert_eq!(serde_json::to_string(&model_to_json(&m)).unwrap(), WITNESS);
    }

    #[test]
    fn rationals_are_p_over_q() {
        let p = poly_from_strings(&["1/2".into(), "-3".into(), "4/6".into()]).unwrap();
        assert_eq!(poly_to_strings(&p), vec!["1/2", "-3", "2/3"]);
        assert!(poly_from_strings(&["x".into()]).is_err());
    }

    #[test]
    fn section_json_forms() {
        assert_eq!(serde_json::to_string(&section_to_json(&Point::Zero)).unwrap(), r#"{"zero":true}"#);
        let p: Section = Point::affine(RationalFunction::one(), RationalFunction::from_poly(Poly::monomial(crate::field::q(1), 5)));
        let text = serde_json::to_string(&section_to_json(&p)).unwrap();
        assert_eq!(
            text,
            r#"{"x":{"num":["1"],"den":["1"]},"y":{"num":["0","0","0","0","0","1"],"den":["1"]}}"#
        );
        assert_eq!(section_from_json_str(&text).unwrap(), p);
    }

    #[test]
    fn bundle_round_trip_and_consistency() {
        let syn = synthesize_anti_invariant(
            &RationalFunction::one(),
            &RationalFunction::from_poly(Poly::from_ints(&[0, 0, 1])),
            &Poly::from_ints(&[1, 0, 0, 0, -1]),
        )
        .unwrap();
        let bundle = Bundle {
            base: syn.base,
            section: Some(syn.section),
            m: syn.m,
        };
        let text = bundle.to_json_string();
        assert_eq!(Bundle::from_json_str(&text).unwrap(), bundle);

        let mut json = bundle.to_json();
        json.m = Some(3);
        assert!(Bundle::from_json(&json).is_err());
        let mut json = bundle.to_json();
        json.upstairs.b[0] = "7".into();
        assert!(Bundle::from_json(&json).is_err());
        assert!(Bundle::from_json_str("{\"downstairs\": 3}").is_err());
    }
}
