//! Integral divisor-class lattices of the surfaces in play and the
//! intersection calculus on them.
//!
//! Three presets are provided:
//!
//! * `rational-elliptic`: basis `L, E1, ..., E9` of the blow-up of the plane
//!   in the nine base points of a cubic pencil; Gram matrix
//!   `diag(1, -1, ..., -1)`, canonical class `-3L + E1 + ... + E9`, `chi = 1`.
//! * `enriques-num`: `U + E8(-1)` with basis `e, f, a1, ..., a8`, canonical
//!   class zero (the 2-torsion `K` is recorded in `torsion_note`), `chi = 1`.
//! * `k3-very-general`: `U(2) + E8(-2)`, same basis labels, canonical class
//!   zero, `chi = 2`.
//!
//! The `E8` block is the negative of the Cartan matrix in Bourbaki numbering:
//! simple roots `a1 .. a8` with the chain `a1 - a3 - a4 - a5 - a6 - a7 - a8`
//! and `a2` attached to `a4`. Every edge contributes `+1` (resp. `+2` for
//! `E8(-2)`) and every diagonal entry is `-2` (resp. `-4`). See
//! [`E8_EDGES`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edges of the `E8` Dynkin diagram, 0-based over `a1 .. a8`.
pub const E8_EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];

pub const RATIONAL_ELLIPTIC: &str = "rational-elliptic";
pub const ENRIQUES_NUM: &str = "enriques-num";
pub const K3_VERY_GENERAL: &str = "k3-very-general";
/// Image of `Pic(S)` under pullback by the quadratic base change: same basis,
/// Gram matrix doubled, trivial canonical class.
pub const RATIONAL_ELLIPTIC_PULLBACK: &str = "rational-elliptic-pullback";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    RationalElliptic,
    EnriquesNum,
    K3VeryGeneral,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::RationalElliptic => RATIONAL_ELLIPTIC,
            Preset::EnriquesNum => ENRIQUES_NUM,
            Preset::K3VeryGeneral => K3_VERY_GENERAL,
        }
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            RATIONAL_ELLIPTIC => Ok(Preset::RationalElliptic),
            ENRIQUES_NUM => Ok(Preset::EnriquesNum),
            K3_VERY_GENERAL => Ok(Preset::K3VeryGeneral),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceLattice {
    pub name: String,
    pub basis: Vec<String>,
    pub gram: Vec<Vec<BigInt>>,
    pub canonical: Vec<BigInt>,
    pub chi: i64,
    /// Set on Enriques lattices, where `K` is 2-torsion and invisible in `Num`.
    pub torsion_note: Option<String>,
    /// How the covering involution acts on the lattice, when known.
    pub involution_note: Option<String>,
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `U(scale) + E8(-scale)` Gram matrix.
fn u_plus_e8(scale: i64) -> Vec<Vec<BigInt>> {
    let mut g = vec![vec![0i64; 10]; 10];
    g[0][1] = scale;
    g[1][0] = scale;
    for i in 0..8 {
        g[2 + i][2 + i] = -2 * scale;
    }
    for &(i, j) in &E8_EDGES {
        g[2 + i][2 + j] = scale;
        g[2 + j][2 + i] = scale;
    }
    g.iter().map(|row| ints(row)).collect()
}

fn u_e8_labels() -> Vec<String> {
    let mut labels = vec!["e".to_string(), "f".to_string()];
    labels.extend((1..=8).map(|i| format!("a{i}")));
    labels
}

/// Look up one of the three named presets.
pub fn preset(name: &str) -> Result<Arc<SurfaceLattice>> {
    Ok(Arc::new(SurfaceLattice::preset(name.parse()?)))
}

/// Presets plus the derived pullback lattice; used when reading serialized classes.
pub fn lattice_by_name(name: &str) -> Result<Arc<SurfaceLattice>> {
    if name == RATIONAL_ELLIPTIC_PULLBACK {
        return Ok(Arc::new(SurfaceLattice::rational_elliptic_pullback()));
    }
    preset(name)
}

impl SurfaceLattice {
    pub fn preset(which: Preset) -> Self {
        match which {
            Preset::RationalElliptic => {
                let mut gram = vec![vec![BigInt::zero(); 10]; 10];
                gram[0][0] = BigInt::one();
                for (i, row) in gram.iter_mut().enumerate().skip(1) {
                    row[i] = -BigInt::one();
                }
                let mut basis = vec!["L".to_string()];
                basis.extend((1..=9).map(|i| format!("E{i}")));
                let mut canonical = vec![BigInt::one(); 10];
                canonical[0] = BigInt::from(-3);
                SurfaceLattice {
                    name: RATIONAL_ELLIPTIC.into(),
                    basis,
                    gram,
                    canonical,
                    chi: 1,
                    torsion_note: None,
                    involution_note: None,
                }
            }
            Preset::EnriquesNum => SurfaceLattice {
                name: ENRIQUES_NUM.into(),
                basis: u_e8_labels(),
                gram: u_plus_e8(1),
                canonical: vec![BigInt::zero(); 10],
                chi: 1,
                torsion_note: Some("K_Y is 2-torsion: nonzero in NS(Y), zero in Num(Y)".into()),
                involution_note: None,
            },
            Preset::K3VeryGeneral => SurfaceLattice {
                name: K3_VERY_GENERAL.into(),
                basis: u_e8_labels(),
                gram: u_plus_e8(2),
                canonical: vec![BigInt::zero(); 10],
                chi: 2,
                torsion_note: None,
                involution_note: Some("the Enriques quotient involution acts as the identity".into()),
            },
        }
    }

    pub fn rational_elliptic_pullback() -> Self {
        let base = SurfaceLattice::preset(Preset::RationalElliptic);
        SurfaceLattice {
            name: RATIONAL_ELLIPTIC_PULLBACK.into(),
            basis: base.basis.iter().map(|b| format!("g*{b}")).collect(),
            gram: base
                .gram
                .iter()
                .map(|row| row.iter().map(|x| x * 2).collect())
                .collect(),
            canonical: vec![BigInt::zero(); 10],
            chi: 2,
            torsion_note: None,
            involution_note: Some("the deck involution acts as the identity on pulled-back classes".into()),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pairing(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                let g = &self.gram[i][j];
                if !g.is_zero() && !vj.is_zero() {
                    acc += ui * g * vj;
                }
            }
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| (0..n).all(|j| self.gram[i][j] == self.gram[j][i]))
    }

    /// Even lattice: every `v.v` is even, i.e. the diagonal is even.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i].is_even())
    }

    /// Determinant of the Gram matrix by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.rank();
        let mut m = self.gram.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// `(positive, negative)` inertia of the Gram matrix, computed exactly by
    /// symmetric elimination over `Q`.
    pub fn signature(&self) -> (usize, usize) {
        let n = self.rank();
        let mut m: Vec<Vec<BigRational>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        let (mut pos, mut neg) = (0, 0);
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            let pivot = active.iter().copied().find(|&i| !m[i][i].is_zero());
            let p = match pivot {
                Some(p) => p,
                None => {
                    // all diagonal entries vanish: e_i -> e_i + e_j makes one nonzero
                    let found = active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j))).find(|&(i, j)| i != j && !m[i][j].is_zero());
                    let Some((i, j)) = found else { break };
                    let row_j = m[j].clone();
                    for (x, add) in m[i].iter_mut().zip(row_j) {
                        *x += add;
                    }
                    for row in m.iter_mut() {
                        let add = row[j].clone();
                        row[i] += add;
                    }
                    i
                }
            };
            let d = m[p][p].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            active.retain(|&i| i != p);
            for &i in &active {
                let f = &m[i][p] / &d;
                for &j in &active {
                    let sub = &f * &m[p][j];
                    m[i][j] -= sub;
                }
            }
            for &i in &active {
                m[i][p] = BigRational::zero();
                m[p][i] = BigRational::zero();
            }
        }
        (pos, neg)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == label)
    }
}

/// Integer coefficient vector in the basis of a [`SurfaceLattice`].
#[derive(Clone, PartialEq, Eq)]
pub struct DivisorClass {
    lattice: Arc<SurfaceLattice>,
    coeffs: Vec<BigInt>,
}

impl DivisorClass {
    pub fn new(lattice: Arc<SurfaceLattice>, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != lattice.rank() {
            return Err(Error::RankMismatch {
                lattice: lattice.name.clone(),
                expected: lattice.rank(),
                found: coeffs.len(),
            });
        }
        Ok(DivisorClass { lattice, coeffs })
    }

    pub fn from_ints(lattice: Arc<SurfaceLattice>, coeffs: &[i64]) -> Result<Self> {
        DivisorClass::new(lattice, ints(coeffs))
    }

    pub fn zero(lattice: Arc<SurfaceLattice>) -> Self {
        let n = lattice.rank();
        DivisorClass {
            lattice,
            coeffs: vec![BigInt::zero(); n],
        }
    }

    /// The basis vector with the given label.
    pub fn basis(lattice: Arc<SurfaceLattice>, label: &str) -> Option<Self> {
        let i = lattice.index_of(label)?;
        let mut d = DivisorClass::zero(lattice);
        d.coeffs[i] = BigInt::one();
        Some(d)
    }

    pub fn canonical(lattice: Arc<SurfaceLattice>) -> Self {
        let coeffs = lattice.canonical.clone();
        DivisorClass { lattice, coeffs }
    }

    pub fn lattice(&self) -> &Arc<SurfaceLattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn same_surface(&self, other: &DivisorClass) -> Result<()> {
        if self.lattice.name != other.lattice.name {
            return Err(Error::DistinctSurfaces {
                left: self.lattice.name.clone(),
                right: other.lattice.name.clone(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.same_surface(other)?;
        Ok(DivisorClass {
            lattice: self.lattice.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, k: &BigInt) -> DivisorClass {
        DivisorClass {
            lattice: self.lattice.clone(),
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    /// `D1^T * gram * D2`.
    pub fn intersect(&self, other: &DivisorClass) -> Result<BigInt> {
        self.same_surface(other)?;
        Ok(self.lattice.pairing(&self.coeffs, &other.coeffs))
    }

    pub fn self_intersection(&self) -> BigInt {
        self.lattice.pairing(&self.coeffs, &self.coeffs)
    }

    /// `D . K`
    pub fn canonical_degree(&self) -> BigInt {
        self.lattice.pairing(&self.coeffs, &self.lattice.canonical)
    }

    /// Arithmetic genus `D.(D+K)/2 + 1`.
    pub fn adjunction_genus(&self) -> Result<BigInt> {
        let twice = self.self_intersection() + self.canonical_degree();
        if twice.is_odd() {
            return Err(Error::AdjunctionParity { value: twice });
        }
        Ok(twice / 2 + 1)
    }

    /// Class-level pullback along the quadratic base change `X -> S`.
    pub fn pullback(&self) -> Result<DivisorClass> {
        if self.lattice.name != RATIONAL_ELLIPTIC {
            return Err(Error::UnsupportedPreset {
                operation: "pullback".into(),
                lattice: self.lattice.name.clone(),
            });
        }
        Ok(DivisorClass {
            lattice: Arc::new(SurfaceLattice::rational_elliptic_pullback()),
            coeffs: self.coeffs.clone(),
        })
    }

    pub fn to_json(&self) -> DivisorClassJson {
        DivisorClassJson {
            lattice: self.lattice.name.clone(),
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_json(json: &DivisorClassJson) -> Result<Self> {
        let lattice = lattice_by_name(&json.lattice)?;
        let coeffs = json
            .coeffs
            .iter()
            .map(|c| c.parse::<BigInt>().map_err(|e| Error::Parse(format!("coefficient `{c}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        DivisorClass::new(lattice, coeffs)
    }

    /// Comma-separated coefficients, e.g. `12,-4,...,-2`.
    pub fn coeff_string(&self) -> String {
        self.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.lattice.name, self.coeff_string())
    }
}

/// `{"lattice": "...", "coeffs": ["12", "-4", ...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorClassJson {
    pub lattice: String,
    pub coeffs: Vec<String>,
}

/// The elliptic fiber `F = 3L - E1 - ... - E9 = -K_S`.
pub fn fiber_class(lattice: &Arc<SurfaceLattice>) -> Result<DivisorClass> {
    if lattice.name != RATIONAL_ELLIPTIC {
        return Err(Error::UnsupportedPreset {
            operation: "fiber_class".into(),
            lattice: lattice.name.clone(),
        });
    }
    let mut coeffs = vec![-1i64; 10];
    coeffs[0] = 3;
    DivisorClass::from_ints(lattice.clone(), &coeffs)
}

/// Arithmetic genus of the preimage of an `l`-section of genus `p` under the
/// double cover branched along two fibers: `2p + l - 1`.
pub fn pullback_genus_riemann_hurwitz(p: &BigInt, l: &BigInt) -> Result<BigInt> {
    if p.is_negative() {
        return Err(Error::out_of_range("p", p, "p >= 0"));
    }
    if l.is_negative() {
        return Err(Error::out_of_range("l", l, "l >= 0"));
    }
    if p.is_zero() && l.is_zero() {
        return Err(Error::UnramifiedSplit);
    }
    Ok(p * 2 + l - 1)
}
