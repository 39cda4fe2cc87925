//! Invariant suites run by `charclass verify`, plus the finite-difference
//! residuals of the jet identities they rely on.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra_file;
use crate::catalog;
use crate::chart::{max_abs, Chart, VectorField};
use crate::cohomology::{betti_table, class_report, is_closed, square_is_zero, ClassStatus};
use crate::error::Result;
use crate::forms::{trace_form, w3_killing};
use crate::geometry::{automorphy_check, magnitude_scale, FrameDiagnostics, GroupElement};
use crate::jet::{
    delta_one_form, directional, lie_derivative, spencer_bracket, vector_bracket, Form1J1T, J1TSection,
};
use crate::rational::int;
use crate::sampling::{random_form, random_section, PolynomialField};

pub const SUITES: [&str; 6] = ["lie", "forms", "cohomology", "jet", "geometry", "catalog"];

/// Seed for every randomized check, so runs are reproducible.
pub const SEED: u64 = 0x5eed;
pub const RANDOM_SAMPLES: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn within(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, value <= tolerance, format!("{value:.3e} <= {tolerance:.3e}"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteResult {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }
}

/// `None` for an unknown suite name.
pub fn run_suite(name: &str) -> Option<Result<SuiteResult>> {
    let checks = match name {
        "lie" => lie_suite(),
        "forms" => forms_suite(),
        "cohomology" => cohomology_suite(),
        "jet" => jet_suite(),
        "geometry" => geometry_suite(),
        "catalog" => catalog_suite(),
        _ => return None,
    };
    Some(checks.map(|checks| SuiteResult {
        suite: name.to_string(),
        checks,
    }))
}

fn lie_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, alg) in catalog::algebras() {
        let n = alg.dim();
        let mut ad_ok = true;
        let mut invariant = true;
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (alg.basis_vector(i), alg.basis_vector(j));
                let xy = alg.bracket(&x, &y)?;
                ad_ok &= alg.ad(&xy)? == alg.ad(&x)?.commutator(&alg.ad(&y)?);
                for k in 0..n {
                    let z = alg.basis_vector(k);
                    invariant &=
                        alg.killing_of(&xy, &z)? == alg.killing_of(&x, &alg.bracket(&y, &z)?)?;
                }
            }
        }
        out.push(Check::new(format!("{name}: ad is a representation"), ad_ok, ""));
        out.push(Check::new(format!("{name}: Killing form is invariant"), invariant, ""));
        let sig = alg.killing_signature();
        out.push(Check::new(
            format!("{name}: semisimple iff Killing form nondegenerate"),
            alg.is_semisimple() == (sig.zero == 0),
            format!("signature ({}, {}, {})", sig.positive, sig.negative, sig.zero),
        ));
        out.push(Check::new(
            format!("{name}: nilpotent implies solvable"),
            !alg.is_nilpotent() || alg.is_solvable(),
            "",
        ));
    }
    Ok(out)
}

fn forms_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let sl2 = catalog::algebra("sl2")?;
    let w = trace_form(&sl2, 3)?;
    out.push(Check::new("sl2: w3(X,H,Y) = -8", w.component(&[1, 2, 3])? == int(-8), ""));
    for (name, alg) in catalog::algebras() {
        let n = alg.dim();
        let even_zero = [2, 4]
            .into_iter()
            .filter(|&k| k <= n)
            .map(|k| trace_form(&alg, k).map(|f| f.is_zero()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .all(|z| z);
        out.push(Check::new(format!("{name}: even trace forms vanish"), even_zero, ""));
        if n < 3 {
            continue;
        }
        let w3 = trace_form(&alg, 3)?;
        out.push(Check::new(
            format!("{name}: w3 = 0 iff solvable"),
            w3.is_zero() == alg.is_solvable(),
            "",
        ));
        let mut killing = true;
        for (subset, value) in w3.entries() {
            let v: Vec<_> = subset.iter().map(|&i| alg.basis_vector(i - 1)).collect();
            killing &= w3_killing(&alg, &v[0], &v[1], &v[2])? == value;
        }
        out.push(Check::new(format!("{name}: w3(x,y,z) = κ(x,[y,z])"), killing, ""));
    }
    Ok(out)
}

fn cohomology_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, alg) in catalog::algebras() {
        let n = alg.dim();
        out.push(Check::new(format!("{name}: d∘d = 0"), square_is_zero(&alg), ""));
        let b = betti_table(&alg);
        let euler: i64 = b
            .iter()
            .enumerate()
            .map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) })
            .sum();
        out.push(Check::new(format!("{name}: Euler characteristic is 0"), euler == 0, format!("{b:?}")));
        let mut closed = true;
        for k in [1, 3].into_iter().filter(|&k| k <= n) {
            closed &= is_closed(&alg, &trace_form(&alg, k)?)?;
        }
        out.push(Check::new(format!("{name}: w1 and w3 are closed"), closed, ""));
        let classes = class_report(&alg)?;
        let w1_ok = match classes.get(&1) {
            Some(ClassStatus::ZeroForm) => alg.is_unimodular(),
            Some(_) => !alg.is_unimodular(),
            None => true,
        };
        out.push(Check::new(format!("{name}: [w1] vanishes iff unimodular"), w1_ok, ""));
        if alg.is_semisimple() {
            out.push(Check::new(
                format!("{name}: [w3] is a nonzero class"),
                classes.get(&3) == Some(&ClassStatus::NonzeroClass),
                "",
            ));
        }
    }
    Ok(out)
}

/// Tolerance for trilinear FD identities: `10 h² (1 + m)³`, `m` the input magnitude.
pub fn jet_tolerance(h: f64, magnitude: f64) -> f64 {
    10.0 * h * h * (1.0 + magnitude).powi(3)
}

/// Max entry of the vector and matrix parts of the sections over `points`.
pub fn section_magnitude(sections: &[&J1TSection], points: &[Vec<f64>]) -> f64 {
    max_abs(points.iter().flat_map(|x| {
        sections
            .iter()
            .flat_map(move |s| s.vector_at(x).iter().copied().chain(s.matrix_at(x).iter().copied()).collect::<Vec<_>>())
    }))
}

fn jet_gap(a: &J1TSection, b: &J1TSection, x: &[f64]) -> f64 {
    (a.vector_at(x) - b.vector_at(x)).amax().max((a.matrix_at(x) - b.matrix_at(x)).amax())
}

/// `max |[j₁ξ, j₁η] − j₁[ξ, η]|`.
pub fn prolongation_residual(chart: &Chart, xi: VectorField, eta: VectorField, points: &[Vec<f64>]) -> Result<f64> {
    let lhs = spencer_bracket(&J1TSection::prolong(chart, xi.clone()), &J1TSection::prolong(chart, eta.clone()))?;
    let rhs = J1TSection::prolong(chart, vector_bracket(chart, xi, eta));
    Ok(max_abs(points.iter().map(|x| jet_gap(&lhs, &rhs, x))))
}

/// `max |πX(ω(Y)) − πY(ω(X)) − δω(X,Y) − ω([X,Y])|`.
pub fn cartan_residual(w: &Form1J1T, a: &J1TSection, b: &J1TSection, points: &[Vec<f64>]) -> Result<f64> {
    let chart = w.chart();
    let xy = spencer_bracket(a, b)?;
    let lhs_a = directional(chart, a.vector_field(), w.pairing(b)?);
    let lhs_b = directional(chart, b.vector_field(), w.pairing(a)?);
    let delta = delta_one_form(w, a, b)?;
    Ok(max_abs(points.iter().map(|x| lhs_a(x) - lhs_b(x) - delta(x) - w.pair_at(&xy, x))))
}

/// `max |L_X L_Y ξ − L_Y L_X ξ − L_{[X,Y]} ξ|`.
pub fn representation_residual(a: &J1TSection, b: &J1TSection, xi: VectorField, points: &[Vec<f64>]) -> Result<f64> {
    let ab = lie_derivative(a, lie_derivative(b, xi.clone()));
    let ba = lie_derivative(b, lie_derivative(a, xi.clone()));
    let c = lie_derivative(&spencer_bracket(a, b)?, xi);
    Ok(max_abs(points.iter().map(|x| (ab(x) - ba(x) - c(x)).amax())))
}

fn jet_suite() -> Result<Vec<Check>> {
    let chart = Chart::cube(2);
    let points = chart.lattice_with(3);
    let h = chart.step();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = [0.0f64; 3];
    for _ in 0..RANDOM_SAMPLES {
        let (p, q) = (PolynomialField::random(&mut rng, 2, 3, 0.5), PolynomialField::random(&mut rng, 2, 3, 0.5));
        let (a, b) = (random_section(&mut rng, &chart, 2), random_section(&mut rng, &chart, 2));
        let w = random_form(&mut rng, &chart, 2);
        let xi = PolynomialField::random(&mut rng, 2, 2, 0.5).field();
        let m = section_magnitude(&[&a, &b], &points).max(1.0);
        let tol = jet_tolerance(h, m);
        let values = [
            prolongation_residual(&chart, p.field(), q.field(), &points)?,
            cartan_residual(&w, &a, &b, &points)?,
            representation_residual(&a, &b, xi, &points)?,
        ];
        for (k, v) in values.iter().enumerate() {
            worst[k] = worst[k].max(v / tol);
        }
    }
    let labels = [
        "prolongation commutes with brackets",
        "Cartan formula for the algebroid differential",
        "Lie derivative is a representation",
    ];
    let mut out: Vec<Check> = labels
        .iter()
        .zip(worst)
        .map(|(l, r)| Check::within(format!("{l} (relative to tolerance)"), r, 1.0))
        .collect();
    for (name, frame) in catalog::frames() {
        let omega = frame.omega_form();
        let fp = frame.chart().lattice_with(3);
        let ch = frame.chart().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let n = frame.dim();
        let mut worst: f64 = 0.0;
        for _ in 0..3 {
            let a = random_section(&mut rng, &ch, 2);
            let b = random_section(&mut rng, &ch, 2);
            let d = delta_one_form(&omega, &a, &b)?;
            worst = worst.max(max_abs(fp.iter().map(|x| d(x))));
        }
        let tol = 10.0 * ch.step().powi(2) * magnitude_scale(&frame, 3);
        out.push(Check::within(format!("{name}: δω = 0 for the trace form ω"), worst, tol));
        let minus_identity = fp.iter().all(|x| omega.matrix_at(x) == -DMatrix::<f64>::identity(n, n));
        out.push(Check::new(format!("{name}: matrix part of ω is -I"), minus_identity, ""));
    }
    Ok(out)
}

fn geometry_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, frame) in catalog::frames() {
        let d = FrameDiagnostics::compute(&frame)?;
        out.push(Check::new(
            format!("{name}: R1 vanishes and converges"),
            d.r1_convergence.passed,
            format!("{:.3e} (tol {:.3e})", d.r1, d.tolerance),
        ));
        out.push(Check::new(
            format!("{name}: dw = Tr R2"),
            d.dw_convergence.passed,
            format!("{:.3e} (tol {:.3e})", d.dw_residual, d.tolerance),
        ));
        out.push(Check::new(
            format!("{name}: R2 = 0 iff R(ε) = 0"),
            d.r2_vanishes() == d.r_full_vanishes(),
            format!("R2 {:.3e}, R(ε) {:.3e}", d.r2, d.r_full),
        ));
        out.push(Check::within(format!("{name}: R(ε)(x,x) = 0"), d.r_full_diagonal, d.tolerance));
        out.push(Check::new(
            format!("{name}: R2 vanishes exactly on group frames"),
            d.r2_vanishes() == catalog::is_group_frame(&name),
            "",
        ));
        if let Some(expected) = catalog::matching_algebra(&name) {
            let expected = catalog::algebra(&expected)?;
            let local = frame.local_algebra(&frame.chart().center());
            let same = local.as_ref().is_ok_and(|l| {
                l.is_solvable() == expected.is_solvable()
                    && l.is_unimodular() == expected.is_unimodular()
                    && l.is_nilpotent() == expected.is_nilpotent()
            });
            out.push(Check::new(format!("{name}: invariant fields close into the catalog algebra"), same, ""));
        }
    }
    for (name, mult) in catalog::multiplications() {
        let frame = mult.frame();
        let tol = 10.0 * frame.step().powi(2) * magnitude_scale(&frame, 3);
        out.push(Check::within(
            format!("{name}: -log det Ad is a primitive of w"),
            mult.log_det_ad_primitive_check()?,
            tol,
        ));
    }
    let borel = catalog::multiplication("borel_sl2_group")?;
    let delta = GroupElement::Point(vec![2.0, 0.0]);
    out.push(Check::new(
        "borel_sl2_group: diag(2, 1/2) fails the automorphy test",
        automorphy_check(&borel, &[delta])? == vec![false],
        "",
    ));
    Ok(out)
}

fn catalog_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, alg) in catalog::algebras() {
        out.push(Check::new(format!("{name}: Jacobi identity"), alg.validate().ok, ""));
        let round = algebra_file::parse_algebra(&algebra_file::serialize(&alg))?;
        out.push(Check::new(format!("{name}: file round trip"), round == alg, ""));
    }
    for (name, frame) in catalog::frames() {
        let det = frame.check_invertible();
        out.push(Check::new(
            format!("{name}: frame is invertible on the lattice"),
            det.is_ok(),
            det.map(|d| format!("min |det| {d:.3e}")).unwrap_or_else(|e| e.to_string()),
        ));
    }
    for (name, mult) in catalog::multiplications() {
        out.push(Check::within(format!("{name}: identity law"), mult.identity_residual(), 1e-12));
        out.push(Check::within(
            format!("{name}: associativity"),
            mult.associativity_residual(RANDOM_SAMPLES, SEED),
            1e-10,
        ));
        let e = DVector::from_column_slice(mult.identity());
        let ad = mult.ad_e(e.as_slice())?;
        out.push(Check::within(
            format!("{name}: Ad_e(e) = I"),
            (ad - DMatrix::identity(e.len(), e.len())).amax(),
            1e-8,
        ));
    }
    Ok(out)
}
