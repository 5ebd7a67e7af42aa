//! Genus and dimension bookkeeping for nodal, equigeneric and logarithmic
//! Severi varieties, specialized to the rational elliptic surface `S`, its
//! K3 double cover `X_m` and the Enriques quotient `Y_m`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{
    fiber_class, preset, DivisorClass, SurfaceLattice, ENRIQUES_NUM, RATIONAL_ELLIPTIC,
};

/// Tangency profile `alpha = (alpha_1, alpha_2, ...)`: `alpha_i` contact
/// points of order `i` with the fixed curve.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TangencySequence(Vec<u64>);

impl TangencySequence {
    pub fn new(mut alpha: Vec<u64>) -> Self {
        while alpha.last() == Some(&0) {
            alpha.pop();
        }
        TangencySequence(alpha)
    }

    /// `[0, n]`: `n` points of simple tangency.
    pub fn total_tangency(n: u64) -> Self {
        TangencySequence::new(vec![0, n])
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    /// `|alpha| = sum alpha_i`
    pub fn norm(&self) -> u64 {
        self.0.iter().sum()
    }

    /// `I alpha = sum i * alpha_i`
    pub fn weighted_norm(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, a)| (i as u64 + 1) * a).sum()
    }

    /// `deg D = sum (i - 1) * alpha_i = I alpha - |alpha|`
    pub fn excess(&self) -> u64 {
        self.weighted_norm() - self.norm()
    }
}

impl fmt::Display for TangencySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Regular,
    Nonregular,
    SpecialNonregular,
    Superabundant,
    SpecialSuperabundant,
}

impl Classification {
    pub fn is_special(self) -> bool {
        matches!(self, Classification::SpecialNonregular | Classification::SpecialSuperabundant)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Regular => "regular",
            Classification::Nonregular => "nonregular",
            Classification::SpecialNonregular => "special-nonregular",
            Classification::Superabundant => "superabundant",
            Classification::SpecialSuperabundant => "special-superabundant",
        })
    }
}

/// Numerical summary of a family of curves. Field order is the
/// serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeveriReport {
    pub label: String,
    pub genus: i64,
    pub ambient_dim: Option<i64>,
    pub expected_dim: i64,
    pub actual_dim: i64,
    pub classification: Classification,
    pub splits_in_cover: bool,
    pub nonequivalent_split: bool,
    pub tangency: Option<TangencySequence>,
    pub notes: Vec<String>,
}

impl SeveriReport {
    fn checked(self) -> Result<Self> {
        if self.classification.is_special() && !(self.splits_in_cover && self.nonequivalent_split) {
            return Err(Error::Precondition(format!(
                "{} is classified {} but its members do not split into nonequivalent curves",
                self.label, self.classification
            )));
        }
        Ok(self)
    }

    /// `actual - expected`.
    pub fn gap(&self) -> i64 {
        self.actual_dim - self.expected_dim
    }

    pub const TSV_COLUMNS: [&'static str; 10] = [
        "label",
        "genus",
        "ambient_dim",
        "expected_dim",
        "actual_dim",
        "gap",
        "classification",
        "splits",
        "nonequivalent",
        "tangency",
    ];

    fn tsv_cells(&self) -> Vec<String> {
        vec![
            self.label.clone(),
            self.genus.to_string(),
            self.ambient_dim.map_or("-".into(), |d| d.to_string()),
            self.expected_dim.to_string(),
            self.actual_dim.to_string(),
            self.gap().to_string(),
            self.classification.to_string(),
            self.splits_in_cover.to_string(),
            self.nonequivalent_split.to_string(),
            self.tangency.as_ref().map_or("-".into(), ToString::to_string),
        ]
    }
}

/// Tab-separated table with a header row; each cell is padded to its
/// column width so the output lines up in a terminal.
pub fn reports_to_tsv(reports: &[SeveriReport]) -> String {
    let header: Vec<String> = SeveriReport::TSV_COLUMNS.iter().map(|s| s.to_string()).collect();
    let mut rows = vec![header];
    rows.extend(reports.iter().map(SeveriReport::tsv_cells));
    aligned_tsv(&rows)
}

pub(crate) fn aligned_tsv(rows: &[Vec<String>]) -> String {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| {
                if c + 1 == row.len() {
                    s.clone()
                } else {
                    format!("{s:<width$}", width = widths[c])
                }
            })
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

/// Expected dimension `dim|L| - delta` of the Severi variety of
/// `delta`-nodal curves, for `0 <= delta <= p_a`.
pub fn nodal_expected_dim(dim_linear_system: i64, delta: i64, arithmetic_genus: i64) -> Result<i64> {
    if delta < 0 || delta > arithmetic_genus {
        return Err(Error::out_of_range(
            "delta",
            delta,
            &format!("0 <= delta <= p_a = {arithmetic_genus}"),
        ));
    }
    Ok(dim_linear_system - delta)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystemDim {
    pub value: BigInt,
    /// `false` when `value` is only the Riemann-Roch lower bound.
    pub exact: bool,
}

/// `dim |D|`: `D^2/2 + 1` on K3-type lattices, `D^2/2` on the Enriques
/// lattice, and the Riemann-Roch lower bound `chi - 1 + (D^2 - D.K)/2` on the
/// rational elliptic surface. Effectivity of `D` is the caller's claim.
pub fn dim_complete_linear_system(d: &DivisorClass) -> Result<LinearSystemDim> {
    let lattice = d.lattice();
    let sq = d.self_intersection();
    let k3_type = lattice.chi == 2 && lattice.canonical.iter().all(Zero::is_zero);
    if k3_type {
        return Ok(LinearSystemDim {
            value: half_even(&sq)? + 1,
            exact: true,
        });
    }
    if lattice.name == ENRIQUES_NUM {
        return Ok(LinearSystemDim {
            value: half_even(&sq)?,
            exact: true,
        });
    }
    if lattice.name == RATIONAL_ELLIPTIC {
        let twice = &sq - d.canonical_degree();
        return Ok(LinearSystemDim {
            value: BigInt::from(lattice.chi - 1) + half_even(&twice)?,
            exact: false,
        });
    }
    Err(Error::UnsupportedPreset {
        operation: "dim_complete_linear_system".into(),
        lattice: lattice.name.clone(),
    })
}

fn half_even(x: &BigInt) -> Result<BigInt> {
    if x.is_odd() {
        return Err(Error::AdjunctionParity { value: x.clone() });
    }
    Ok(x / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquigenericDim {
    pub value: i64,
    /// `true` for the non-split branch, where `g - 1` is a lower bound.
    pub lower_bound: bool,
}

/// Dimension of an equigeneric component of genus-`g` curves on an Enriques
/// surface: `g` when members split in the K3 cover, else (at least) `g - 1`.
pub fn equigeneric_dim_enriques(g: i64, splits: bool) -> Result<EquigenericDim> {
    if g < 0 {
        return Err(Error::out_of_range("g", g, "g >= 0"));
    }
    Ok(if splits {
        EquigenericDim {
            value: g,
            lower_bound: false,
        }
    } else {
        EquigenericDim {
            value: g - 1,
            lower_bound: true,
        }
    })
}

/// Expected dimension `-(K + T).L + gamma - 1 + |alpha|` of a logarithmic
/// Severi variety, subject to `I alpha = L.T` and `0 <= gamma <= p_a(L)`.
pub fn log_severi_expected_dim(
    l: &DivisorClass,
    t: &DivisorClass,
    gamma: i64,
    alpha: &TangencySequence,
) -> Result<BigInt> {
    let l_dot_t = l.intersect(t)?;
    let i_alpha = BigInt::from(alpha.weighted_norm());
    if i_alpha != l_dot_t {
        return Err(Error::TangencyBudget { i_alpha, l_dot_t });
    }
    let pa = l.adjunction_genus()?;
    if gamma < 0 || BigInt::from(gamma) > pa {
        return Err(Error::out_of_range("gamma", gamma, &format!("0 <= gamma <= p_a(L) = {pa}")));
    }
    let k_plus_t = DivisorClass::canonical(l.lattice().clone()).add(t)?;
    Ok(-k_plus_t.intersect(l)? + gamma - 1 + alpha.norm())
}

/// Per-component data for the regularity hypotheses: `-K.C_i` and the
/// degree of the tangency divisor `D` supported on `C_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComponentDegrees {
    pub anticanonical_degree: i64,
    pub tangency_excess: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DedieuFlags {
    /// `-K.C_i - deg D|C_i >= 1` for every component: dimension formula holds.
    pub cond_i: bool,
    /// `>= 2` for every component: normalization immersive away from contacts.
    pub cond_ii: bool,
    /// Smallest `-K.C_i - deg D|C_i` over components.
    pub margin: i64,
}

/// Hypotheses of the logarithmic dimension theorem. With no component data
/// the class is treated as irreducible and `-K.L - sum (i-1) alpha_i` is used.
pub fn dedieu_regularity_flags(
    l: &DivisorClass,
    t: &DivisorClass,
    alpha: &TangencySequence,
    components: &[ComponentDegrees],
) -> Result<DedieuFlags> {
    let l_dot_t = l.intersect(t)?;
    let i_alpha = BigInt::from(alpha.weighted_norm());
    if i_alpha != l_dot_t {
        return Err(Error::TangencyBudget { i_alpha, l_dot_t });
    }
    let margin = if components.is_empty() {
        let minus_kl = -l.canonical_degree();
        let m = minus_kl - BigInt::from(alpha.excess());
        i64::try_from(m).map_err(|e| Error::Malformed(e.to_string()))?
    } else {
        components
            .iter()
            .map(|c| c.anticanonical_degree - c.tangency_excess)
            .min()
            .unwrap_or(0)
    };
    Ok(DedieuFlags {
        cond_i: margin >= 1,
        cond_ii: margin >= 2,
        margin,
    })
}

fn rational_elliptic() -> Arc<SurfaceLattice> {
    preset(RATIONAL_ELLIPTIC).expect("rational-elliptic preset")
}

/// Class of the image of the anti-invariant section on `S`:
/// `6(m+1)L - 2(m+1)(E1 + ... + E8) - 2m E9`.
pub fn bisection_class(m: i64) -> Result<DivisorClass> {
    if m < 0 {
        return Err(Error::out_of_range("m", m, "m >= 0"));
    }
    let m = BigInt::from(m);
    let mut coeffs: Vec<BigInt> = vec![(&m + 1) * -2; 10];
    coeffs[0] = (&m + 1) * 6;
    coeffs[9] = &m * -2;
    DivisorClass::new(rational_elliptic(), coeffs)
}

/// Numerical consequences of `g^*(B) = R + (-R)` for the bisection class:
/// `(g^*B)^2 = 2 B^2`, `R^2 = -2` on the K3 cover, so `R.(-R) = B^2 + 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisectionData {
    pub m: i64,
    pub class: Vec<String>,
    pub square: BigInt,
    pub fiber_degree: BigInt,
    pub genus: BigInt,
    pub pullback_square: BigInt,
    pub section_square: BigInt,
    pub section_pair_intersection: BigInt,
}

impl BisectionData {
    /// `(R + (-R))^2 = R^2 + 2 R.(-R) + (-R)^2` against `(g^*B)^2`.
    pub fn decomposition_holds(&self) -> bool {
        self.pullback_square == &self.section_square * 2 + &self.section_pair_intersection * 2
    }

    /// Row in the form `class=12,-4,... square=12 fiberdeg=2 genus=6`.
    pub fn row(&self) -> String {
        format!(
            "class={} square={} fiberdeg={} genus={}",
            self.class.join(","),
            self.square,
            self.fiber_degree,
            self.genus
        )
    }
}

pub fn bisection_data(m: i64) -> Result<BisectionData> {
    let b = bisection_class(m)?;
    let f = fiber_class(b.lattice())?;
    let square = b.self_intersection();
    let pullback_square = b.pullback()?.self_intersection();
    // a section of a K3 elliptic surface is a smooth rational curve
    let section_square = BigInt::from(-2);
    let section_pair_intersection = (&pullback_square - &section_square * 2) / 2;
    Ok(BisectionData {
        m,
        class: b.coeffs().iter().map(ToString::to_string).collect(),
        fiber_degree: b.intersect(&f)?,
        genus: b.adjunction_genus()?,
        square,
        pullback_square,
        section_square,
        section_pair_intersection,
    })
}

/// Class on `S` with `F`-degree `fiber_degree` and arithmetic genus at least
/// `min_genus`: `fiber_degree * E9 + n F` with the least such `n >= 0`.
/// Only its intersection numbers with `K` and `F` enter the logarithmic
/// formulas; adding fibers raises `p_a` by `fiber_degree` per fiber.
pub fn representative_multisection(fiber_degree: i64, min_genus: i64) -> Result<DivisorClass> {
    if fiber_degree < 1 {
        return Err(Error::out_of_range("fiber degree", fiber_degree, ">= 1"));
    }
    let lattice = rational_elliptic();
    let e9 = DivisorClass::basis(lattice.clone(), "E9").expect("E9 label");
    let f = fiber_class(&lattice)?;
    let base = e9.scale(&BigInt::from(fiber_degree));
    let base_genus = base.adjunction_genus()?;
    let deficit = BigInt::from(min_genus) - base_genus;
    let n = if deficit.is_positive() {
        Integer::div_ceil(&deficit, &BigInt::from(fiber_degree))
    } else {
        BigInt::zero()
    };
    base.add(&f.scale(&n))
}

fn superabundance_report(label: String, gamma: i64, l: i64, notes: Vec<String>) -> Result<SeveriReport> {
    if l < 1 {
        return Err(Error::out_of_range("l", l, "l >= 1"));
    }
    // members are 2l-sections totally tangent to the two branch fibers
    let lattice = rational_elliptic();
    let curve = representative_multisection(2 * l, gamma)?;
    let branch = fiber_class(&lattice)?.scale(&BigInt::from(2));
    let alpha = TangencySequence::total_tangency(2 * l as u64);
    let expected = log_severi_expected_dim(&curve, &branch, gamma, &alpha)?;
    let expected = i64::try_from(expected).map_err(|e| Error::Malformed(e.to_string()))?;
    // dim V = dim |C_X + kR| = p_a of the split component on the K3 cover
    let actual = gamma;
    let mut notes = notes;
    let flags = dedieu_regularity_flags(&curve, &branch, &alpha, &[])?;
    notes.push(format!(
        "hypotheses of the logarithmic dimension theorem: cond_i={} cond_ii={} (margin {})",
        flags.cond_i, flags.cond_ii, flags.margin
    ));
    if expected < 0 {
        notes.push("expected family is empty (negative expected dimension)".into());
    }
    SeveriReport {
        label,
        genus: gamma,
        ambient_dim: None,
        expected_dim: expected,
        actual_dim: actual,
        classification: if actual > expected {
            Classification::SpecialSuperabundant
        } else {
            Classification::Regular
        },
        splits_in_cover: true,
        nonequivalent_split: true,
        tangency: Some(alpha),
        notes,
    }
    .checked()
}

/// Family `V_{S,C,k}` on `S` from an irreducible `l`-section `C` of
/// arithmetic genus `p`: logarithmic Severi data along `T = 2F` with
/// `alpha = [0, 2l]`, expected `2p + l - 2`, actual `2p + l - 1`.
pub fn log_superabundance_report(p: i64, l: i64) -> Result<SeveriReport> {
    if p < 0 {
        return Err(Error::out_of_range("p", p, "p >= 0"));
    }
    if l < 1 {
        return Err(Error::out_of_range("l", l, "l >= 1"));
    }
    superabundance_report(format!("V_S,C(p={p},l={l})"), 2 * p + l - 1, l, Vec::new())
}

/// Family `V_{S,L,k}` on `S` from a genus-`g` curve on the Enriques
/// quotient whose image on `S` is a `2l`-section: genus `2g - 1`.
pub fn log_superabundance_report_enriques(g: i64, l: i64) -> Result<SeveriReport> {
    if g < 1 {
        return Err(Error::out_of_range("g", g, "g >= 1"));
    }
    superabundance_report(format!("V_S,L(g={g},l={l})"), 2 * g - 1, l, Vec::new())
}

/// Family `V_{Y,C,k}` on `Y_m` coming from an `l`-section of arithmetic
/// genus `p` on `S`.
pub fn special_family_from_surface_curve(p: i64, l: i64, k: i64) -> Result<SeveriReport> {
    if p < 0 {
        return Err(Error::out_of_range("p", p, "p >= 0"));
    }
    if l < 1 {
        return Err(Error::out_of_range(
            "l",
            l,
            "l >= 1 (elliptic fibers and their components are excluded)",
        ));
    }
    let genus = 2 * p + l - 1;
    let split = equigeneric_dim_enriques(genus, true)?;
    SeveriReport {
        label: format!("V_Y,C(p={p},l={l},k={k})"),
        genus,
        ambient_dim: None,
        expected_dim: genus - 1,
        actual_dim: split.value,
        classification: Classification::SpecialNonregular,
        splits_in_cover: true,
        nonequivalent_split: true,
        tangency: None,
        notes: vec![
            "genus 2p+l-1 from Riemann-Hurwitz on the double cover branched over 2l points; \
             the statement's 2g+l-1 is read as 2p+l-1"
                .into(),
            format!(
                "preimages C+{k}R and C+{}R differ by {}R, and R has infinite order, so they are not linearly equivalent",
                1 - k,
                2 * k - 1
            ),
        ],
    }
    .checked()
}

/// Family `V_{Y,L,k}` on `Y_m` from a curve of arithmetic genus `g` on `Y_m`.
pub fn special_family_from_enriques_curve(g: i64) -> Result<SeveriReport> {
    if g < 1 {
        return Err(Error::out_of_range("g", g, "g >= 1"));
    }
    let genus = 2 * g - 1;
    SeveriReport {
        label: format!("V_Y,L(g={g})"),
        genus,
        ambient_dim: None,
        expected_dim: genus - 1,
        actual_dim: equigeneric_dim_enriques(genus, true)?.value,
        classification: Classification::SpecialNonregular,
        splits_in_cover: true,
        nonequivalent_split: true,
        tangency: None,
        notes: vec!["genus 2g-1 is the arithmetic genus of the pullback to the K3 cover".into()],
    }
    .checked()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenGenusWitness {
    pub n: i64,
    pub class: DivisorClass,
    pub adjunction_genus: BigInt,
    pub fiber_degree: BigInt,
    pub family: SeveriReport,
}

impl EvenGenusWitness {
    pub fn verified(&self) -> bool {
        self.adjunction_genus.is_zero()
            && self.fiber_degree == BigInt::from(self.n + 1)
            && self.family.genus == self.n
    }
}

/// `kL - (k-1)E1` with `k = n/2`: a rational `(2k+1)`-section whose
/// associated special family has genus `n`.
pub fn even_genus_witness(n: i64) -> Result<EvenGenusWitness> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::out_of_range("n", n, "even n >= 2"));
    }
    let k = n / 2;
    let lattice = rational_elliptic();
    let mut coeffs = vec![0i64; 10];
    coeffs[0] = k;
    coeffs[1] = -(k - 1);
    let class = DivisorClass::from_ints(lattice.clone(), &coeffs)?;
    let fiber_degree = class.intersect(&fiber_class(&lattice)?)?;
    let adjunction_genus = class.adjunction_genus()?;
    let p = i64::try_from(&adjunction_genus).map_err(|e| Error::Malformed(e.to_string()))?;
    let l = i64::try_from(&fiber_degree).map_err(|e| Error::Malformed(e.to_string()))?;
    let family = special_family_from_surface_curve(p, l, 1)?;
    Ok(EvenGenusWitness {
        n,
        class,
        adjunction_genus,
        fiber_degree,
        family,
    })
}
