//! The reproduction suite behind `fibra verify paper` and `fibra selftest`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base_change::{synthesize_anti_invariant, BaseChangeData, Symmetry};
use crate::curve::{Cubic, Point};
use crate::field::{q, Field};
use crate::fiber_trace::{involution_sanity, verify_partenzaenr, verify_partenzares, SampledCurve, TraceLog};
use crate::lattice::{fiber_class, preset, DivisorClass, RATIONAL_ELLIPTIC};
use crate::poly::Poly;
use crate::ratfunc::RationalFunction;
use crate::sections::{self, Section};
use crate::severi::{
    aligned_tsv, bisection_data, dedieu_regularity_flags, even_genus_witness, log_severi_expected_dim,
    log_superabundance_report, representative_multisection, special_family_from_enriques_curve,
    special_family_from_surface_curve, TangencySequence,
};
use crate::weierstrass::{FiberType, Place};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    pub pmax: i64,
    pub lmax: i64,
    pub mmax: i64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            pmax: 5,
            lmax: 6,
            mmax: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl CriterionResult {
    fn new(id: u32, name: &'static str) -> Self {
        CriterionResult {
            id,
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn expect_eq<T: PartialEq + std::fmt::Debug>(&mut self, found: T, wanted: T, what: &str) {
        self.checks += 1;
        if found != wanted {
            self.failures.push(format!("{what}: found {found:?}, expected {wanted:?}"));
        }
    }

    fn absorb(&mut self, log: &TraceLog, context: &str) {
        self.checks += log.records.len();
        for r in log.mismatches() {
            self.failures.push(format!(
                "{context}: {} s={} k={} {}: {} != {}",
                r.relation, r.s, r.k, r.generator, r.lhs, r.rhs
            ));
        }
    }

    fn error(&mut self, context: &str, e: crate::Error) {
        self.checks += 1;
        self.failures.push(format!("{context}: {e}"));
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub results: Vec<CriterionResult>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.results.iter().all(CriterionResult::passed)
    }

    /// Aligned TSV: `id criterion checks failures result`.
    pub fn to_tsv(&self) -> String {
        let mut rows = vec![vec![
            "id".to_string(),
            "criterion".into(),
            "checks".into(),
            "failures".into(),
            "result".into(),
        ]];
        for r in &self.results {
            rows.push(vec![
                r.id.to_string(),
                r.name.to_string(),
                r.checks.to_string(),
                r.failures.len().to_string(),
                if r.passed() { "pass" } else { "FAIL" }.to_string(),
            ]);
        }
        aligned_tsv(&rows)
    }

    /// Failure messages, prefixed by criterion id.
    pub fn failure_lines(&self) -> Vec<String> {
        self.results
            .iter()
            .flat_map(|r| r.failures.iter().map(move |f| format!("[{}] {f}", r.id)))
            .collect()
    }
}

pub fn verify_paper(grid: Grid) -> Summary {
    Summary {
        results: vec![
            bisection_sweep(grid.mmax),
            witness_pipeline(),
            involution_identities(),
            superabundance_grid(grid.pmax, grid.lmax),
            genus_coverage(),
            group_law_suite(DEFAULT_SEED, 1000, 100),
            riemann_hurwitz_agreement(DEFAULT_SEED, 100),
            plane_adjunction(10),
        ],
    }
}

/// Randomized parts only, with a caller-chosen seed.
pub fn selftest(seed: u64) -> Summary {
    Summary {
        results: vec![group_law_suite(seed, 1000, 100), riemann_hurwitz_agreement(seed, 100)],
    }
}

pub fn bisection_sweep(mmax: i64) -> CriterionResult {
    let mut c = CriterionResult::new(1, "bisection-sweep");
    for m in 0..=mmax {
        let data = match bisection_data(m) {
            Ok(d) => d,
            Err(e) => {
                c.error(&format!("m={m}"), e);
                continue;
            }
        };
        c.expect_eq(data.fiber_degree.clone(), BigInt::from(2), &format!("m={m} class.F"));
        c.expect_eq(data.square.clone(), BigInt::from(8 * m + 4), &format!("m={m} class^2"));
        c.expect_eq(data.genus.clone(), BigInt::from(4 * m + 2), &format!("m={m} genus"));
        c.expect_eq(
            data.pullback_square.clone(),
            &data.square * 2,
            &format!("m={m} pullback square"),
        );
        c.expect_eq(
            data.section_pair_intersection.clone(),
            BigInt::from(8 * m + 6),
            &format!("m={m} R.(-R)"),
        );
        c.expect(data.decomposition_holds(), || format!("m={m} decomposition identity"));
    }
    c
}

/// The anti-invariant witness: `xi = 1`, `eta = t^2`, `A = 1 - t^4`.
pub fn witness() -> crate::Result<crate::base_change::Synthesis> {
    synthesize_anti_invariant(
        &RationalFunction::one(),
        &RationalFunction::from_poly(Poly::from_ints(&[0, 0, 1])),
        &Poly::from_ints(&[1, 0, 0, 0, -1]),
    )
}

pub fn witness_pipeline() -> CriterionResult {
    let mut c = CriterionResult::new(2, "witness-pipeline");
    let syn = match witness() {
        Ok(s) => s,
        Err(e) => {
            c.error("synthesize", e);
            return c;
        }
    };
    let bc = &syn.base;
    c.expect_eq(syn.b.clone(), Poly::from_ints(&[-2, 0, 0, 0, 1, 1]), "B");
    for place in [Place::int(0), Place::Infinity] {
        c.expect_eq(bc.downstairs().classify_fiber(&place), FiberType::Smooth, &format!("fiber over {place}"));
    }
    let expected_p: Section = Point::affine(
        RationalFunction::one(),
        RationalFunction::from_poly(Poly::monomial(q(1), 5)),
    );
    c.expect_eq(syn.section.clone(), expected_p, "P");
    c.expect_eq(syn.criterion.symmetry, Symmetry::AntiInvariant, "symmetry");
    c.expect(syn.criterion.passes(), || format!("criterion: {}", syn.criterion));
    c.expect_eq(syn.m, Some(0), "m");
    let up = bc.upstairs();
    match sections::intersect_sections(up, &syn.section, &sections::neg(up, &syn.section)) {
        Ok(n) => c.expect_eq(n, 6, "P.(-P)"),
        Err(e) => c.error("P.(-P)", e),
    }
    c.expect_eq(
        up.discriminant(),
        bc.downstairs().discriminant().compose_square(),
        "upstairs discriminant",
    );
    c
}

/// First `n` positive integers over which the upstairs fiber is smooth.
pub fn smooth_samples(bc: &BaseChangeData, n: usize) -> Vec<BigRational> {
    (1..)
        .map(q)
        .filter(|s| bc.upstairs().classify_fiber(&Place::Finite(s.clone())) == FiberType::Smooth)
        .take(n)
        .collect()
}

pub fn involution_identities() -> CriterionResult {
    let mut c = CriterionResult::new(3, "involution-identities");
    let syn = match witness() {
        Ok(s) => s,
        Err(e) => {
            c.error("synthesize", e);
            return c;
        }
    };
    let (bc, p) = (&syn.base, &syn.section);
    let samples = smooth_samples(bc, 20);
    match involution_sanity(bc, p, &samples) {
        Ok(report) => {
            c.absorb(&report.log, "involutions");
            c.expect(report.passed(), || "tau has fixed points on a ramified fiber".into());
            c.expect(report.log.notices.is_empty(), || format!("skipped: {:?}", report.log.notices));
        }
        Err(e) => c.error("involution_sanity", e),
    }
    let invariant = SampledCurve::new("O", vec![Point::Zero]);
    let closed = SampledCurve::new("L", vec![Point::Zero, p.clone()]);
    for k in -3..=3 {
        match verify_partenzares(bc, &invariant, p, k, &samples) {
            Ok(log) => {
                c.absorb(&log, "pullback curve");
                c.expect(log.notices.is_empty(), || format!("k={k} skipped {:?}", log.notices));
            }
            Err(e) => c.error(&format!("pullback curve k={k}"), e),
        }
        match verify_partenzaenr(bc, &closed, p, k, &samples) {
            Ok(log) => {
                c.absorb(&log, "tau-closed curve");
                c.expect(log.notices.is_empty(), || format!("k={k} skipped {:?}", log.notices));
            }
            Err(e) => c.error(&format!("tau-closed curve k={k}"), e),
        }
    }
    c
}

pub fn superabundance_grid(pmax: i64, lmax: i64) -> CriterionResult {
    let mut c = CriterionResult::new(4, "superabundance-grid");
    let lattice = preset(RATIONAL_ELLIPTIC).expect("preset");
    let branch = fiber_class(&lattice).expect("fiber").scale(&BigInt::from(2));
    for p in 0..=pmax {
        for l in 1..=lmax {
            let tag = format!("p={p} l={l}");
            let gamma = 2 * p + l - 1;
            let alpha = TangencySequence::total_tangency(2 * l as u64);
            let curve = match representative_multisection(2 * l, gamma) {
                Ok(cl) => cl,
                Err(e) => {
                    c.error(&tag, e);
                    continue;
                }
            };
            match log_severi_expected_dim(&curve, &branch, gamma, &alpha) {
                Ok(d) => c.expect_eq(d, BigInt::from(2 * p + l - 2), &format!("{tag} expected dim")),
                Err(e) => c.error(&tag, e),
            }
            match log_superabundance_report(p, l) {
                Ok(r) => {
                    c.expect_eq(r.actual_dim, 2 * p + l - 1, &format!("{tag} actual dim"));
                    c.expect_eq(r.gap(), 1, &format!("{tag} gap"));
                }
                Err(e) => c.error(&tag, e),
            }
            match dedieu_regularity_flags(&curve, &branch, &alpha, &[]) {
                Ok(f) => c.expect_eq((f.cond_i, f.cond_ii, f.margin), (false, false, 0), &format!("{tag} flags")),
                Err(e) => c.error(&tag, e),
            }
        }
    }
    c
}

pub fn genus_coverage() -> CriterionResult {
    let mut c = CriterionResult::new(5, "genus-coverage");
    for n in (2..=40).step_by(2) {
        match even_genus_witness(n) {
            Ok(w) => {
                c.expect_eq(w.adjunction_genus.clone(), BigInt::zero(), &format!("n={n} p_a"));
                c.expect_eq(w.fiber_degree.clone(), BigInt::from(n + 1), &format!("n={n} fiber degree"));
            }
            Err(e) => c.error(&format!("n={n}"), e),
        }
        for k in [-1, 0, 1, 2] {
            match special_family_from_surface_curve(0, n + 1, k) {
                Ok(r) => c.expect_eq(r.genus, n, &format!("n={n} k={k} family genus")),
                Err(e) => c.error(&format!("n={n} k={k}"), e),
            }
        }
    }
    for g in 1..=20 {
        match special_family_from_enriques_curve(g) {
            Ok(r) => c.expect_eq(r.genus, 2 * g - 1, &format!("g={g} family genus")),
            Err(e) => c.error(&format!("g={g}"), e),
        }
    }
    c
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> BigRational {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    BigRational::new(num.into(), den.into())
}

/// A cubic through two random points, or `None` if degenerate.
pub fn random_curve_with_points(rng: &mut ChaCha8Rng) -> Option<(Cubic<BigRational>, Point<BigRational>, Point<BigRational>)> {
    let (x1, y1, x2, y2) = (
        random_rational(rng, 9),
        random_rational(rng, 9),
        random_rational(rng, 9),
        random_rational(rng, 9),
    );
    if x1 == x2 {
        return None;
    }
    let r1 = &y1 * &y1 - &x1 * &x1 * &x1;
    let r2 = &y2 * &y2 - &x2 * &x2 * &x2;
    let a = (&r1 - &r2) / (&x1 - &x2);
    let b = &r1 - &a * &x1;
    let curve = Cubic::new(a, b);
    if Zero::is_zero(&curve.discriminant()) {
        return None;
    }
    Some((curve, Point::affine(x1, y1), Point::affine(x2, y2)))
}

pub fn group_law_suite(seed: u64, triples: usize, lines: usize) -> CriterionResult {
    let mut c = CriterionResult::new(6, "group-law");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < triples {
        let Some((e, p, q1)) = random_curve_with_points(&mut rng) else {
            continue;
        };
        let r = e.sub(&e.double(&q1), &p);
        for pt in [&p, &q1, &r] {
            c.expect(e.contains(pt), || format!("triple {done}: {pt} not on curve"));
        }
        c.expect(e.add(&e.add(&p, &q1), &r) == e.add(&p, &e.add(&q1, &r)), || {
            format!("triple {done}: associativity")
        });
        c.expect(e.add(&p, &q1) == e.add(&q1, &p), || format!("triple {done}: commutativity"));
        c.expect(e.add(&p, &e.neg(&p)).is_zero(), || format!("triple {done}: inverse"));
        c.expect(e.add(&r, &Point::Zero) == r, || format!("triple {done}: identity"));
        done += 1;
    }
    let mut done = 0;
    while done < lines {
        let (x1, x2) = (random_rational(&mut rng, 9), random_rational(&mut rng, 9));
        let (lambda, nu) = (random_rational(&mut rng, 5), random_rational(&mut rng, 5));
        let x3 = &lambda * &lambda - &x1 - &x2;
        if x1 == x2 || x1 == x3 || x2 == x3 {
            continue;
        }
        let e2 = &x1 * &x2 + &x1 * &x3 + &x2 * &x3;
        let a = &lambda * &nu * BigInt::from(2) + e2;
        let b = &nu * &nu - &x1 * &x2 * &x3;
        let e = Cubic::new(a, b);
        if Zero::is_zero(&e.discriminant()) {
            continue;
        }
        let pts: Vec<_> = [x1, x2, x3]
            .into_iter()
            .map(|x| {
                let y = &lambda * &x + &nu;
                Point::affine(x, y)
            })
            .collect();
        let sum = e.add(&e.add(&pts[0], &pts[1]), &pts[2]);
        c.expect(sum.is_zero(), || format!("line {done}: collinear sum is {sum}"));
        done += 1;
    }
    c
}

pub fn riemann_hurwitz_agreement(seed: u64, samples: usize) -> CriterionResult {
    let mut c = CriterionResult::new(7, "riemann-hurwitz");
    let lattice = preset(RATIONAL_ELLIPTIC).expect("preset");
    let f = fiber_class(&lattice).expect("fiber");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7);
    let mut done = 0;
    while done < samples {
        // mostly effective-looking classes so that p >= 0 occurs often
        let coeffs: Vec<i64> = (0..10)
            .map(|i| if i == 0 { rng.gen_range(0..=12) } else { rng.gen_range(-3..=1) })
            .collect();
        let d = DivisorClass::from_ints(lattice.clone(), &coeffs).expect("rank 10");
        let l = d.intersect(&f).expect("same lattice");
        if l < BigInt::from(1) {
            continue;
        }
        let p = d.adjunction_genus().expect("parity");
        let sq = d.self_intersection();
        let tag = d.coeff_string();
        c.expect_eq(&p * 2 + &l - 1, &sq + 1, &format!("D={tag} 2p+l-1"));
        // the cover genus is only meaningful for curves of nonnegative genus
        if p >= BigInt::zero() {
            let up_genus = d.pullback().and_then(|up| up.adjunction_genus());
            match crate::lattice::pullback_genus_riemann_hurwitz(&p, &l) {
                Ok(rh) => c.expect_eq(up_genus.ok(), Some(rh), &format!("D={tag} pullback genus")),
                Err(e) => c.error(&tag, e),
            }
        }
        done += 1;
    }
    c
}

pub fn plane_adjunction(dmax: i64) -> CriterionResult {
    let mut c = CriterionResult::new(8, "plane-adjunction");
    let lattice = preset(RATIONAL_ELLIPTIC).expect("preset");
    let line = DivisorClass::basis(lattice, "L").expect("L");
    for d in 1..=dmax {
        let genus = line.scale(&BigInt::from(d)).adjunction_genus();
        c.expect_eq(genus.ok(), Some(BigInt::from((d - 1) * (d - 2) / 2)), &format!("d={d}"));
    }
    c
}
