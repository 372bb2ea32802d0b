//! The acceptance suite as a library: one function per criterion, each
//! returning a structured pass/fail record. The `verify` CLI subcommand
//! and the acceptance integration test both run these.

use crate::asympt;
use crate::eigen::{self, window_eigenvalues};
use crate::error::Result;
use crate::family::{Alpha, OperatorFamily};
use crate::matrix::truncate;
use crate::regions::{Region, Regions};
use crate::series::Rat;
use crate::surface::{self, monodromy::loop_around, Verdict};
use crate::taylor::{
    self, closed_coefficient, closed_half_alpha, coefficient_bounds, psi_half,
    solve_branch_equation, tail_bound_value,
};
use crate::trace;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub label: String,
    pub passed: bool,
    pub info: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub checks: Vec<CheckLine>,
    pub seconds: f64,
}

struct Recorder {
    checks: Vec<CheckLine>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { checks: Vec::new() }
    }

    fn check(&mut self, label: &str, passed: bool, info: String) {
        self.checks.push(CheckLine { label: label.to_string(), passed, info });
    }

    fn finish(self, id: &str, name: &str, t0: std::time::Instant) -> CriterionResult {
        let passed = self.checks.iter().all(|c| c.passed);
        CriterionResult {
            id: id.to_string(),
            name: name.to_string(),
            passed,
            checks: self.checks,
            seconds: t0.elapsed().as_secs_f64(),
        }
    }
}

fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

fn half() -> Alpha {
    Alpha::Rational(1, 2)
}

fn jc() -> OperatorFamily {
    OperatorFamily::power(half()).unwrap()
}

fn mathieu() -> OperatorFamily {
    OperatorFamily::power(Alpha::Rational(0, 1)).unwrap()
}

/// Criterion 1: exact fixtures of the branch-equation solver.
pub fn criterion_1() -> Result<CriterionResult> {
    let t0 = std::time::Instant::now();
    let mut rec = Recorder::new();

    let ts = solve_branch_equation(&jc(), 1, 3)?;
    let exact = ts.exact.as_ref().unwrap();
    let expect = [rat(-1, 3), rat(1, 108), rat(-1, 1215)];
    let ok = exact[..3] == expect;
    rec.check(
        "solver(alpha=1/2, n=1, k<=3) = -1/3, 1/108, -1/1215 exactly",
        ok,
        format!("{:?}", ts.approx),
    );

    let mut tel_ok = true;
    let mut witness = String::new();
    for n in 2..=50u32 {
        let ts = solve_branch_equation(&jc(), n, 3)?;
        let a6 = &ts.exact.as_ref().unwrap()[2];
        let expect = psi_half(n) - psi_half(n - 1);
        if *a6 != expect {
            tel_ok = false;
            witness = format!("n={n}: {a6} != {expect}");
            break;
        }
    }
    rec.check(
        "a_6(1/2, n) = psi(n) - psi(n-1) exactly, n = 2..50",
        tel_ok,
        witness,
    );
    Ok(rec.finish("1", "exact fixtures", t0))
}

/// Criterion 2: oracle equivalence of walk-sum solver and closed forms.
pub fn criterion_2() -> Result<CriterionResult> {
    let t0 = std::time::Instant::now();
    let mut rec = Recorder::new();

    let mut general_ok = true;
    let mut info = String::new();
    'outer: for alpha in [Alpha::Rational(0, 1), half()] {
        let fam = OperatorFamily::power(alpha)?;
        for n in 1..=20u32 {
            let ts = solve_branch_equation(&fam, n, 3)?;
            let exact = ts.exact.as_ref().unwrap();
            for (k, floor) in [(2u32, 2u32), (4, 3), (6, 4)] {
                if n >= floor || n == 1 {
                    let closed = closed_coefficient(alpha, n, k)?;
                    if &exact[(k / 2 - 1) as usize] != closed.exact().unwrap() {
                        general_ok = false;
                        info = format!("alpha={alpha:?} n={n} k={k}");
                        break 'outer;
                    }
                }
            }
        }
    }
    rec.check(
        "solver == general closed forms (alpha in {0, 1/2}, n = floor..20, k <= 3)",
        general_ok,
        info,
    );

    let mut half_ok = true;
    let mut info = String::new();
    'outer2: for n in 4..=12u32 {
        let ts = solve_branch_equation(&jc(), n, 5)?;
        let exact = ts.exact.as_ref().unwrap();
        for k in [2u32, 4, 6, 8, 10] {
            let closed = closed_half_alpha(n, k)?;
            if exact[(k / 2 - 1) as usize] != closed {
                half_ok = false;
                info = format!("n={n} k={k}");
                break 'outer2;
            }
        }
    }
    rec.check(
        "solver == alpha=1/2 rational forms (n = 4..12, k <= 5)",
        half_ok,
        info,
    );

    let mut odd_ok = true;
    let mut info = String::new();
    'outer3: for alpha in [Alpha::Rational(0, 1), half()] {
        let fam = OperatorFamily::power(alpha)?;
        for n in 1..=6u32 {
            let all = taylor::solve_all_orders(&fam, n, 10)?;
            for (i, c) in all.iter().enumerate() {
                if (i + 1) % 2 == 1 && !Zero::is_zero(c.exact().unwrap()) {
                    odd_ok = false;
                    info = format!("alpha={alpha:?} n={n} order={}", i + 1);
                    break 'outer3;
                }
            }
        }
    }
    rec.check(
        "odd coefficients exactly zero without the evenness shortcut",
        odd_ok,
        info,
    );
    Ok(rec.finish("2", "oracle equivalence", t0))
}

/// Criterion 3: eigensolver/series cross-check under the tail bound.
pub fn criterion_3() -> Result<CriterionResult> {
    let t0 = std::time::Instant::now();
    let mut rec = Recorder::new();
    let fam = jc();
    let z = Complex64::new(0.5, 0.0);
    for n in [5u32, 10, 20] {
        let e = asympt::branch_value(&fam, z, n, 400)?;
        let ts = solve_branch_equation(&fam, n, 5)?;
        let partial = ts.partial_sum_dd(z);
        let tail = ts.tail_bound(0.5, 6)?;
        let diff = (e - partial).abs().to_f64();
        rec.check(
            &format!("|E_{n}(0.5) - partial_5| <= tail_bound(from_k=6), N=400"),
            diff <= tail,
            format!("diff = {diff:.3e}, tail = {tail:.3e}"),
        );
    }
    Ok(rec.finish("3", "eigensolver/series cross-check", t0))
}

/// Criterion 4: trace formula at desk scale via telescoped residuals.
pub fn criterion_4() -> Result<CriterionResult> {
    let t0 = std::time::Instant::now();
    let mut rec = Recorder::new();
    let z = Complex64::new(0.3, 0.0);

    let t50 = trace::telescoped_residual(&jc(), z, 50)?;
    let t100 = trace::telescoped_residual(&jc(), z, 100)?;
    let t200 = trace::telescoped_residual(&jc(), z, 200)?;
    rec.check(
        "telescoped residual halves (or better) from N=50 to 100",
        t100 <= t50 / 2.0,
        format!("T(50) = {t50:.3e}, T(100) = {t100:.3e}"),
    );
    rec.check(
        "telescoped residual halves (or better) from N=100 to 200",
        t200 <= t100 / 2.0,
        format!("T(100) = {t100:.3e}, T(200) = {t200:.3e}"),
    );

    let report = trace::partial_trace(&jc(), z, 0, 200)?;
    let expect = -0.09 * 200.0 / 401.0;
    let diff = (report.partial_sum[0] - expect).abs() + report.partial_sum[1].abs();
    rec.check(
        "partial_trace(200) within 2e-3 of -z^2 * 200/401 at alpha = 1/2",
        diff <= 2e-3,
        format!("sum = {:.8}, target = {expect:.8}", report.partial_sum[0]),
    );

    let fam3 = OperatorFamily::power(Alpha::Real(0.3))?;
    let r3 = trace::partial_trace(&fam3, z, 0, 200)?;
    let mag = (r3.partial_sum[0].powi(2) + r3.partial_sum[1].powi(2)).sqrt();
    rec.check(
        "|partial_trace(200)| <= 1e-2 at alpha = 0.3",
        mag <= 1e-2,
        format!("|sum| = {mag:.3e}"),
    );
    Ok(rec.finish("4", "trace formula at desk scale", t0))
}

/// Criterion 5: asymptotic slope fits, as stated. The Theorem-2 clause at
/// alpha = 0 demands a slope near -5; the residual there actually decays
/// like n^-6 (the stated remainder exponent is not attained at alpha = 0),
/// so that check records an honest failure.
pub fn criterion_5() -> Result<CriterionResult> {
    let t0 = std::time::Instant::now();
    let mut rec = Recorder::new();
    let z = Complex64::new(1.0, 0.0);

    let fit4 = asympt::thm4_slope_fit(z, &asympt::N_LADDER)?;
    rec.check(
        "thm4 residual slope in [-6.5, -5.5] at z = 1",
        (-6.5..=-5.5).contains(&fit4.fitted_slope),
        format!("slope = {:.3}", fit4.fitted_slope),
    );

    let fit2 = asympt::thm2_slope_fit(Alpha::Rational(0, 1), z, &asympt::N_LADDER)?;
    rec.check(
        "thm2 residual slope in [-5.35, -4.65] at alpha = 0, z = 1 (as stated)",
        (-5.35..=-4.65).contains(&fit2.fitted_slope),
        format!(
            "slope = {:.3}; the alpha = 0 residual is O(n^-6), the stated \
             exponent -5 is not attained (see decisions ledger)",
            fit2.fitted_slope
        ),
    );
    Ok(rec.finish("5", "asymptotic slopes", t0))
}

/// Criterion 6: inverse-power coefficient recovery within 2 percent.
pub fn criterion_6() -> Result<CriterionResult> {
    let t0 = std::time::Instant::now();
    let mut rec = Recorder::new();
    let r = asympt::pk_expansion_check(1.0, 16, 64)?;
    for k in 0..3 {
        rec.check(
            &format!(
                "P_{}(1) recovered within 2% (expected {:.6})",
                k + 1,
                r.expected[k]
            ),
            r.rel_errors[k] < 0.02,
            format!("recovered {:.6}, rel err {:.4}", r.recovered[k], r.rel_errors[k]),
        );
    }
    Ok(rec.finish("6", "P_k recovery", t0))
}

/// Criterion 7: localization properties at random z.
pub fn criterion_7(seed: u64) -> Result<CriterionResult> {
    let t0 = std::time::Instant::now();
    let mut rec = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for fam in [jc(), mathieu()] {
        let alpha = fam.growth_alpha();
        let mut count_ok = true;
        let mut k_disk_ok = true;
        let mut info = String::new();
        for n in [3u32, 5, 8] {
            let radius = fam.radius(n);
            for _ in 0..20 {
                let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let r: f64 = rng.gen_range(0.0..radius);
                let z = Complex64::new(r * th.cos(), r * th.sin());
                match window_eigenvalues(&fam, z, n, 1e-9) {
                    Ok(win) => {
                        if win.len() != n as usize {
                            count_ok = false;
                            info = format!("alpha={alpha} n={n} z={z}: got {}", win.len());
                        }
                    }
                    Err(e) => {
                        count_ok = false;
                        info = format!("alpha={alpha} n={n} z={z}: {e}");
                    }
                }
                // one eigenvalue per K_m for n < m <= 32
                let spec = eigen::spectrum(&truncate(&fam, z, 128)?, 1e-9)?;
                for m in n + 1..=32 {
                    let reg = Regions::new(&fam, m);
                    let cnt = spec
                        .eigenvalues
                        .iter()
                        .filter(|lam| reg.contains(**lam, Region::DiskK))
                        .count();
                    if cnt != 1 {
                        k_disk_ok = false;
                        info = format!("alpha={alpha} n={n} z={z} m={m}: {cnt} in K_m");
                    }
                }
            }
        }
        rec.check(
            &format!("window count == n for 20 random z per n in {{3,5,8}}, alpha={alpha}"),
            count_ok,
            info.clone(),
        );
        rec.check(
            &format!("exactly one eigenvalue per K_m, n < m <= 32, alpha={alpha}"),
            k_disk_ok,
            info,
        );
    }

    let mut even_ok = true;
    let mut info = String::new();
    for _ in 0..20 {
        let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r: f64 = rng.gen_range(0.0..2.0);
        let z = Complex64::new(r * th.cos(), r * th.sin());
        let sp = eigen::spectrum(&truncate(&jc(), z, 128)?, 1e-10)?;
        let sm = eigen::spectrum(&truncate(&jc(), -z, 128)?, 1e-10)?;
        let d = eigen_hausdorff(&sp.eigenvalues, &sm.eigenvalues);
        if d > 1e-10 {
            even_ok = false;
            info = format!("z={z}: hausdorff {d:.3e}");
        }
    }
    rec.check("Sp(L+zB) = Sp(L-zB) to 1e-10 on 20 random z, N=128", even_ok, info);
    Ok(rec.finish("7", "localization properties", t0))
}

fn eigen_hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one = |xs: &[Complex64], ys: &[Complex64]| {
        xs.iter()
            .map(|x| ys.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0f64, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// Criterion 8, as-stated clause: branch points inside Delta_2 for the
/// Mathieu family. Sigma_2 does not meet Delta_2 (the first collision
/// sits near +-1.73 i, far outside R_2 = 0.25), so this records an honest
/// failure; the property checks run in `criterion_8_properties` against
/// the exploratory disk.
pub fn criterion_8_as_stated() -> Result<CriterionResult> {
    let t0 = std::time::Instant::now();
    let mut rec = Recorder::new();
    let set = surface::find_branch_points(&mathieu(), 2, 4, 1e-9)?;
    rec.check(
        "find_branch_points nonempty inside Delta_2 (as stated)",
        !set.points.is_empty(),
        format!(
            "{} points found in |z| <= {:.3}; Sigma_2 cap Delta_2 is empty \
             (first collision at |z| ~ 1.73; see decisions ledger)",
            set.points.len(),
            set.search_radius
        ),
    );
    Ok(rec.finish("8a", "branch points in Delta_2 (as stated)", t0))
}

/// Criterion 8, property checks on the exploratory disk |z| <= 2.2.
pub fn criterion_8_properties(seed: u64) -> Result<CriterionResult> {
    let t0 = std::time::Instant::now();
    let mut rec = Recorder::new();
    let fam = mathieu();

    let set = surface::find_branch_points_in(&fam, 2, 2.2, 6, 1e-9)?;
    rec.check(
        "branch-point set nonempty in the exploratory disk |z| <= 2.2",
        !set.points.is_empty(),
        format!("{} points", set.points.len()),
    );
    if set.points.is_empty() {
        return Ok(rec.finish("8b", "surface properties", t0));
    }

    let mut sym_ok = true;
    let mut info = String::new();
    for p in &set.points {
        let z = p.z();
        let has_neg = set.points.iter().any(|q| (q.z() + z).norm() < 1e-5);
        let has_conj = set.points.iter().any(|q| (q.z() - z.conj()).norm() < 1e-5);
        if !has_neg || !has_conj {
            sym_ok = false;
            info = format!("partner missing for {z}");
        }
    }
    rec.check("+- and conjugate symmetry of the computed set", sym_ok, info);

    let gap = |z: Complex64| -> Result<f64> {
        let roots = surface::branch_points::window_roots_extended(&fam, z, 2)?;
        Ok((roots[0] - roots[1]).norm())
    };
    let mut gap_ok = true;
    let mut info = String::new();
    for p in &set.points {
        let g0 = gap(p.z())?;
        let g1 = gap(p.z() * 0.5)?;
        if g0 >= 1e-6 || g1 <= 1e-2 {
            gap_ok = false;
            info = format!("z*={}: gap {g0:.2e}, half-way gap {g1:.2e}", p.z());
        }
    }
    rec.check(
        "minimal eigenvalue gap < 1e-6 at each z*, > 1e-2 at z*/2",
        gap_ok,
        info,
    );

    // transposition around one branch point; identity around none
    let upper = set.points.iter().find(|p| p.z().im > 0.0).unwrap();
    let z_star = upper.z();
    let labels = upper.colliding_labels;
    let path = loop_around(z_star, 0.15, 12)?;
    let m = surface::monodromy(&fam, &path, 4, 1e-9)?;
    let mut expect: Vec<u32> = (1..=4).collect();
    expect.swap((labels.0 - 1) as usize, (labels.1 - 1) as usize);
    rec.check(
        "small loop around z* induces the colliding-label transposition",
        m.permutation == expect,
        format!("pi = {:?}, colliding = {labels:?}", m.permutation),
    );
    let quiet = crate::eigen::PathInC::closed_loop(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, -0.4),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.5, 0.4),
    ])?;
    let mq = surface::monodromy(&fam, &quiet, 4, 1e-9)?;
    rec.check(
        "loop enclosing no branch point is the identity",
        mq.is_identity(),
        format!("pi = {:?}", mq.permutation),
    );

    // group laws on random loop pairs avoiding the branch points
    let stars: Vec<Complex64> = set.points.iter().map(|p| p.z()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x8);
    let mut law_ok = true;
    let mut sv_ok = true;
    let mut info = String::new();
    let mut pairs_done = 0;
    let mut attempts = 0;
    while pairs_done < 5 && attempts < 200 {
        attempts += 1;
        let (a, b) = (random_loop(&mut rng, &stars), random_loop(&mut rng, &stars));
        let (Some(a), Some(b)) = (a, b) else { continue };
        let (Ok(pa), Ok(pb)) = (
            surface::monodromy(&fam, &a, 4, 1e-9),
            surface::monodromy(&fam, &b, 4, 1e-9),
        ) else {
            continue;
        };
        // concatenation: run a then b
        let mut concat = a.waypoints.clone();
        concat.extend_from_slice(&b.waypoints[1..]);
        let Ok(ab) = crate::eigen::PathInC::closed_loop(concat) else { continue };
        let Ok(pab) = surface::monodromy(&fam, &ab, 4, 1e-9) else { continue };
        let composed: Vec<u32> = (0..4)
            .map(|i| pb.permutation[(pa.permutation[i] - 1) as usize])
            .collect();
        if pab.permutation != composed {
            law_ok = false;
            info = format!(
                "composition law failed: {:?} then {:?} gave {:?}, expected {:?}",
                pa.permutation, pb.permutation, pab.permutation, composed
            );
        }
        // reversal gives the inverse
        let rev: Vec<Complex64> = a.waypoints.iter().rev().copied().collect();
        let Ok(ar) = crate::eigen::PathInC::closed_loop(rev) else { continue };
        let Ok(par) = surface::monodromy(&fam, &ar, 4, 1e-9) else { continue };
        if par.permutation != pa.inverse() {
            law_ok = false;
            info = format!("inversion law failed: {:?} vs {:?}", par.permutation, pa.inverse());
        }
        for m in [&pa, &pb, &pab, &par] {
            if m.partial_sum_defect > 1e-8 {
                sv_ok = false;
                info = format!("partial-sum defect {:.2e}", m.partial_sum_defect);
            }
        }
        pairs_done += 1;
    }
    rec.check(
        "composition and inversion laws on 5 random loop pairs",
        law_ok && pairs_done == 5,
        format!("{pairs_done} pairs tested; {info}"),
    );
    rec.check(
        "partial-sum single-valuedness <= 1e-8 along every tested loop",
        sv_ok,
        String::new(),
    );
    Ok(rec.finish("8b", "surface properties (exploratory disk)", t0))
}

fn random_loop(rng: &mut ChaCha8Rng, avoid: &[Complex64]) -> Option<crate::eigen::PathInC> {
    let mut pts = vec![Complex64::new(0.0, 0.0)];
    let count = rng.gen_range(2..4usize);
    for _ in 0..count {
        let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r: f64 = rng.gen_range(0.4..1.9);
        pts.push(Complex64::new(r * th.cos(), r * th.sin()));
    }
    // reject loops whose segments pass near a branch point
    let closed: Vec<Complex64> = pts.iter().copied().chain([pts[0]]).collect();
    for seg in closed.windows(2) {
        for s in avoid {
            if segment_distance(seg[0], seg[1], *s) < 0.3 {
                return None;
            }
        }
    }
    crate::eigen::PathInC::closed_loop(pts).ok()
}

fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let ab = b - a;
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / ab.norm_sqr();
    let t = t.clamp(0.0, 1.0);
    (a + ab * t - p).norm()
}

/// Criterion 9: irreducibility certificates and the gamma-grid signs.
pub fn criterion_9() -> Result<CriterionResult> {
    let t0 = std::time::Instant::now();
    let mut rec = Recorder::new();

    let r = surface::irreducibility_certificate(half(), 6, 200)?;
    rec.check(
        "alpha = 1/2, k = 6, N = 200: certified with one negative sign at n = 1",
        r.verdict == Verdict::CertifiedIrreducible
            && r.exceptional_index == Some(1)
            && r.sign_pattern[0] == -1
            && r.sign_pattern[1..].iter().all(|s| *s == 1),
        format!("verdict {:?}", r.verdict),
    );

    let mut grid_ok = true;
    let mut info = String::new();
    for i in 0..=20 {
        let gamma = 0.05 * i as f64;
        let a1 = surface::irreducibility::a4_tilde(gamma, 1)?;
        let a2 = surface::irreducibility::a4_tilde(gamma, 2)?;
        if !(a1 > 0.0 && a2 < 0.0) {
            grid_ok = false;
            info = format!("gamma={gamma}: a~4(1)={a1:.3e}, a~4(2)={a2:.3e}");
        }
    }
    rec.check("gamma grid: a~4(gamma,1) > 0 and a~4(gamma,2) < 0 on [0,1]", grid_ok, info);

    for (alpha, expect) in [
        (0.05, Verdict::CertifiedIrreducible),
        (0.2, Verdict::CertifiedIrreducible),
        (0.12, Verdict::Inconclusive),
    ] {
        let r = surface::irreducibility_certificate(Alpha::Real(alpha), 4, 50)?;
        rec.check(
            &format!("alpha = {alpha}, k = 4 verdict is {expect:?}"),
            r.verdict == expect,
            format!("got {:?}", r.verdict),
        );
    }
    Ok(rec.finish("9", "irreducibility certificates", t0))
}

/// Criterion 10: every computed coefficient obeys both growth bounds.
pub fn criterion_10() -> Result<CriterionResult> {
    let t0 = std::time::Instant::now();
    let mut rec = Recorder::new();
    let mut ok = true;
    let mut info = String::new();
    for alpha in [Alpha::Rational(0, 1), half()] {
        let fam = OperatorFamily::power(alpha)?;
        for n in 1..=20u32 {
            let ts = solve_branch_equation(&fam, n, 5)?;
            for k in 1..=5u32 {
                let a = ts.coeff_f64(k).abs();
                let (p8, cauchy) = coefficient_bounds(&fam, n, 2 * k);
                if a > p8 * (1.0 + 1e-12) || a > cauchy * (1.0 + 1e-12) {
                    ok = false;
                    info = format!("alpha={alpha:?} n={n} k={k}: |a|={a:.3e} vs ({p8:.3e}, {cauchy:.3e})");
                }
            }
        }
    }
    rec.check(
        "|a_2k(n)| within both growth bounds (alpha in {0,1/2}, n <= 20, k <= 5)",
        ok,
        info,
    );
    // spot value consistency for the bound helper used elsewhere
    let t = tail_bound_value(1.0, 0.5, 100, 1.0, 2)?;
    rec.check(
        "tail bound finite in the convergent regime",
        t.is_finite() && t > 0.0,
        format!("tail(n=100, z=1, from 2) = {t:.3e}"),
    );
    Ok(rec.finish("10", "coefficient bound compliance", t0))
}

/// Every criterion in order; `seed` drives the randomized checks.
pub fn run_all(seed: u64) -> Result<Vec<CriterionResult>> {
    Ok(vec![
        criterion_1()?,
        criterion_2()?,
        criterion_3()?,
        criterion_4()?,
        criterion_5()?,
        criterion_6()?,
        criterion_7(seed)?,
        criterion_8_as_stated()?,
        criterion_8_properties(seed)?,
        criterion_9()?,
        criterion_10()?,
    ])
}

/// Render one pass/fail line per criterion (plus sub-check lines).
pub fn render_table(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "[{status}] criterion {:>2}  {:<46} ({:.1}s)\n",
            r.id, r.name, r.seconds
        ));
        for c in &r.checks {
            let s = if c.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!("       {s} - {}", c.label));
            if !c.info.is_empty() {
                out.push_str(&format!("  [{}]", c.info));
            }
            out.push('\n');
        }
    }
    out
}
