//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so the summary is always printed.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starlab_core::dominants::{
    best_dominant_q, q_closed_mu0, q_closed_mu1, rho_limit, rho_limit_extrapolated, verify_ode4, DominantSpec,
    FormalSolution,
};
use starlab_core::genfun::{koebe_lambda, random_sn_member};
use starlab_core::geometry::{admissibility_margin, membership_estimate};
use starlab_core::integral_ops::{
    apply_j_single, apply_jm, j_power_beta, j_single_power_beta, quadrature_oracle, Family, OperatorParams,
};
use starlab_core::report::{self, Settings, Status};
use starlab_core::salagean::{salagean_ratio, salagean_ratio_normalized};
use starlab_core::series::{NormalizedFunction, TruncatedSeries};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// `max_k |a_k - b_k| / max(1, |b_k|)`.
fn rel_diff(a: &TruncatedSeries, b: &TruncatedSeries) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| (x - y).norm() / y.norm().max(1.0))
        .fold(0.0, f64::max)
}

fn structural_identities() -> Outcome {
    let start = Instant::now();
    let s = Settings {
        order: 256,
        ..Settings::default()
    };
    let r = report::cmd_structural(&s).expect("structural sweep runs");
    let secs = start.elapsed().as_secs_f64();
    let p = &r.payload;
    let r7 = p["max_recurrence_residual"].as_f64().unwrap();
    let r8 = p["max_ratio_relation_residual"].as_f64().unwrap();
    let combos = r.parameters["combos"].as_u64().unwrap();
    let families = r.parameters["families"].as_array().unwrap();
    let complex = r.parameters["complex_gamma_combos"].as_u64().unwrap();
    let ok = r.status == Status::Pass
        && r7 < 1e-9
        && r8 < 1e-9
        && combos >= 200
        && families.iter().all(|v| v.as_u64().unwrap() > 0)
        && complex > 0;
    outcome(
        ok,
        format!("{combos} combos, max recurrence {r7:.2e}, max ratio relation {r8:.2e}, N = 256, {secs:.1} s"),
    )
}

fn family_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut inner = 0.0f64;
    let mut exact_families = true;
    let mut root = 0.0f64;
    for i in 0..30u64 {
        let f = random_sn_member(100 + i, 0.0, (i % 3) as u32, 256).unwrap();
        let alpha = rng.random_range(0.25..3.0);
        let beta = rng.random_range(0.5..3.0);
        let gamma = c(rng.random_range(0.0..2.0));
        let p1 = OperatorParams::new(alpha, beta, gamma, 1, Family::Logarithmic).unwrap();
        let p2 = p1.with_family(Family::Binomial).unwrap();
        let b1 = j_power_beta(&f, &p1, 1).unwrap();
        let b2 = j_power_beta(&f, &p2, 1).unwrap();
        let bs = j_single_power_beta(&f, &p1).unwrap();
        inner = inner
            .max(rel_diff(b1.unit(), b2.unit()))
            .max(rel_diff(b1.unit(), bs.unit()));
        let j1 = apply_jm(&f, &p1).unwrap();
        let j2 = apply_jm(&f, &p2).unwrap();
        let js = apply_j_single(&f, &p1).unwrap();
        exact_families &= j1.series() == j2.series();
        root = root.max(rel_diff(j1.series(), js.series()));
    }
    outcome(
        inner < 1e-11 && exact_families,
        format!(
            "J^beta three-way residual {inner:.2e}; family 1 == family 2 images: {exact_families}; \
             after the 1/beta root, termwise path differs by {root:.2e}"
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut points = 0;
    for m in 1..=3u32 {
        for family in [Family::Logarithmic, Family::Binomial] {
            let f = random_sn_member(rng.random(), 0.3, 0, 256).unwrap();
            let p = OperatorParams::new(
                rng.random_range(0.25..2.5),
                rng.random_range(0.5..3.0),
                c(rng.random_range(0.0..2.0)),
                m,
                family,
            )
            .unwrap();
            let j = apply_jm(&f, &p).unwrap();
            for k in 0..25 {
                let z = Complex64::from_polar(0.5 * ((k + 1) as f64 / 25.0).sqrt(), 2.0 * PI * 0.382 * k as f64);
                let direct = quadrature_oracle(&f, &p, z, 1e-13).unwrap();
                worst = worst.max((direct - j.eval(z)).norm());
                points += 1;
            }
        }
    }
    outcome(
        worst < 1e-6,
        format!("{points} points, max |oracle - series| {worst:.2e}"),
    )
}

fn power_identities() -> Outcome {
    // Dividing by (f/z)^zeta, whose coefficients grow, amplifies rounding per coefficient;
    // the residual is measured against the size of the series being divided, as in C1.
    let (mut worst0, mut worst1, mut coeffwise) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..50u64 {
        let lambda = if i % 2 == 0 { 0.0 } else { 0.4 };
        let f = random_sn_member(300 + i, lambda, 1, 256).unwrap();
        // z f'/f directly from the coefficients
        let star = f.series().z_derivative().shift_down().div(&f.unit()).unwrap();
        let conv = salagean_ratio_normalized(&f, 1).unwrap().ratio_series;
        for &zeta in &[0.5, 1.0, 2.0, 3.7] {
            let fz = f.as_element().pow_real(zeta).unwrap();
            let r0 = salagean_ratio(&fz, 0).unwrap();
            let r1 = salagean_ratio(&fz, 1).unwrap();
            let scale = [&r0.numerator, &r0.denominator, &r1.numerator, &r1.denominator]
                .iter()
                .flat_map(|e| e.unit().coeffs().iter().map(|c| c.norm()))
                .fold(1.0, f64::max);
            let e0 = star.scale(c(zeta));
            let e1 = conv.add(&star.truncate(conv.order()).scale(c(zeta - 1.0)));
            for (got, want, worst) in [
                (&r0.ratio_series, &e0, &mut worst0),
                (&r1.ratio_series, &e1, &mut worst1),
            ] {
                for (a, b) in got.coeffs().iter().zip(want.coeffs()) {
                    *worst = worst.max((a - b).norm() / b.norm().max(scale));
                }
                coeffwise = coeffwise.max(rel_diff(got, want));
            }
        }
    }
    outcome(
        worst0 < 1e-11 && worst1 < 1e-11,
        format!(
            "50 f x 4 zeta, normwise: n = 0 identity {worst0:.2e}, n = 1 expansion {worst1:.2e} \
             (largest single-coefficient relative gap {coeffwise:.2e})"
        ),
    )
}

fn admissibility() -> Outcome {
    let mus = [
        c(0.0),
        c(0.5),
        c(1.0),
        c(3.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -2.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(0.2, -0.7),
        Complex64::new(2.5, 4.0),
        Complex64::new(10.0, -10.0),
    ];
    let mut min = f64::INFINITY;
    let mut count = 0;
    for &mu in &mus {
        for i in 0..10 {
            let l0 = i as f64 / 10.0;
            for j in 0..100 {
                let u2 = -10.0 + 20.0 * j as f64 / 99.0;
                let limit = -0.5 * (1.0 - l0) * (1.0 + u2 * u2);
                for k in 0..10 {
                    let v1 = limit - 0.5 * k as f64;
                    min = min.min(admissibility_margin(mu, l0, u2, v1).unwrap());
                    count += 1;
                }
            }
        }
    }
    // outside Re mu + lambda0 >= 0 the margin turns negative
    let mut witness = None;
    'search: for &mu in &[c(-0.5), Complex64::new(-1.0, 0.5), c(-0.25)] {
        for i in 0..10 {
            let l0 = i as f64 / 20.0;
            if mu.re + l0 >= 0.0 {
                continue;
            }
            let m = admissibility_margin(mu, l0, 0.3, -0.5 * (1.0 - l0) * 1.09 - 0.1).unwrap();
            if m < 0.0 {
                witness = Some((mu, l0, m));
                break 'search;
            }
        }
    }
    let detail = format!("{count} grid points, min margin {min:.3e}; negative witness {witness:?}");
    outcome(count >= 100_000 && min >= 0.0 && witness.is_some(), detail)
}

fn best_dominant() -> Outcome {
    let mut equiv = 0.0f64;
    let mut ode = 0.0f64;
    for &mu in &[0.0, 0.5, 1.0, 2.0] {
        for &l0 in &[0.0, 0.25] {
            let spec = DominantSpec::new(mu, l0).unwrap();
            let formal = FormalSolution::build(spec, 512).unwrap();
            for i in 1..=9 {
                for j in 0..24 {
                    let z = Complex64::from_polar(0.1 * i as f64, 2.0 * PI * j as f64 / 24.0);
                    equiv = equiv.max((best_dominant_q(spec, z).unwrap() - formal.eval(z)).norm());
                }
            }
            ode = ode.max(verify_ode4(spec).unwrap());
        }
    }
    let mut closed = 0.0f64;
    let (s0, s1) = (
        DominantSpec::new(0.0, 0.0).unwrap(),
        DominantSpec::new(1.0, 0.0).unwrap(),
    );
    for i in 1..=19 {
        for j in 0..32 {
            let z = Complex64::from_polar(0.05 * i as f64, 2.0 * PI * j as f64 / 32.0);
            closed = closed
                .max((best_dominant_q(s0, z).unwrap() - q_closed_mu0(z)).norm())
                .max((best_dominant_q(s1, z).unwrap() - q_closed_mu1(z)).norm());
        }
    }
    outcome(
        equiv < 1e-8 && ode < 1e-6 && closed < 1e-9,
        format!("two constructions {equiv:.2e}, ODE residual {ode:.2e}, closed forms {closed:.2e}"),
    )
}

/// `ln 2 = sum_k 1/(k 2^k)`, summed without the library constant.
fn ln2_series() -> f64 {
    (1..=60).rev().map(|k| 1.0 / (k as f64 * 2f64.powi(k))).sum()
}

fn sharp_constants() -> Outcome {
    let l2 = ln2_series();
    let target1 = (3.0 - 4.0 * l2) / (2.0 * (2.0 * l2 - 1.0));
    let bound = (17f64.sqrt() - 3.0) / 4.0;
    let s0 = DominantSpec::new(0.0, 0.0).unwrap();
    let s1 = DominantSpec::new(1.0, 0.0).unwrap();
    let r0 = rho_limit(s0).unwrap().value;
    let r1 = rho_limit(s1).unwrap().value;
    let e0 = rho_limit_extrapolated(s0).unwrap().value;
    let e1 = rho_limit_extrapolated(s1).unwrap().value;
    let ok = (r0 - 0.5).abs() < 1e-9
        && (r1 - target1).abs() < 1e-9
        && (e0 - 0.5).abs() < 1e-9
        && (e1 - target1).abs() < 1e-9
        && r0 > bound
        && r1 > bound;
    outcome(
        ok,
        format!(
            "rho(0) = {r0} (extrapolated {e0:.12}), rho(1) = {r1:.12} vs {target1:.12} (extrapolated {e1:.12}), \
             bound {bound:.6}"
        ),
    )
}

fn theorem1() -> Outcome {
    let r = report::cmd_theorem1(&Settings::default(), &[0.0, 0.3], 2).expect("theorem 1 sweep runs");
    let p = &r.payload;
    outcome(
        r.status == Status::Pass,
        format!(
            "{} draws x {} params, min margin {}, identity exact {}, out-of-regime diagnostics {}",
            r.parameters["draws"],
            r.parameters["sweep"].as_array().unwrap().len(),
            p["min_margin"],
            p["identity_margins_exact"],
            p["out_of_regime_diagnostics"]
                .as_array()
                .unwrap()
                .iter()
                .map(|d| format!("margin {:.3}", d["margin"].as_f64().unwrap()))
                .collect::<Vec<_>>()
                .join(", "),
        ),
    )
}

fn theorem2() -> Outcome {
    let r = report::cmd_theorem2(&Settings::default(), &[0.0, 0.3], 2).expect("theorem 2 sweep runs");
    let p = &r.payload;
    let controls =
        p["control_scaled_1_05"]["verdict"] == "violated" && p["control_stretched_1_05"]["verdict"] == "violated";
    outcome(
        r.status == Status::Pass && controls,
        format!(
            "{} checked, {} violations, {} inconclusive, {} hypothesis not met; controls flagged: {controls}",
            p["checked"],
            p["violations"].as_array().unwrap().len(),
            p["inconclusive"].as_array().unwrap().len(),
            p["hypothesis_not_met"],
        ),
    )
}

fn sharpness_witness() -> Outcome {
    let order = 2048;
    let koebe = koebe_lambda(0.0, order).unwrap();
    let target = NormalizedFunction::new(
        TruncatedSeries::new((0..=order).map(|k| c(if k == 0 { 0.0 } else { 1.0 })).collect()).unwrap(),
    )
    .unwrap();
    let p = OperatorParams::single(1.0, 1.0, c(0.0)).unwrap();
    let termwise = apply_j_single(&koebe, &p).unwrap();
    let weighted = apply_jm(&koebe, &p).unwrap();
    let residual = termwise.max_coeff_diff(&target).max(weighted.max_coeff_diff(&target));
    let est = membership_estimate(&termwise, 0, 0.5, &Settings::default().grid().unwrap()).unwrap();
    outcome(
        residual < 1e-12 && (est.extrapolated - 0.5).abs() < 1e-2,
        format!(
            "coefficient residual {residual:.2e}, estimated order {:.6}",
            est.extrapolated
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, args: &[&str]| -> Vec<u8> {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_starlab"))
            .args(args)
            .arg("--json")
            .arg(&path)
            .stderr(std::process::Stdio::null())
            .status()
            .unwrap();
        assert!(status.code().is_some());
        std::fs::read(&path).unwrap()
    };
    let mut same = true;
    let mut bytes = 0;
    for args in [
        &["structural", "--order", "128", "--seed", "7"][..],
        &["sequences", "--n-max", "2", "--order", "512"][..],
    ] {
        let a = run("a.json", args);
        let b = run("b.json", args);
        same &= !a.is_empty() && a == b;
        bytes += a.len();
    }
    outcome(same, format!("two commands run twice, {bytes} bytes compared"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("structural identities", structural_identities),
        ("family collapse at m = 1", family_collapse),
        ("quadrature oracle equivalence", oracle_equivalence),
        ("power identities", power_identities),
        ("admissibility margin", admissibility),
        ("best dominant", best_dominant),
        ("sharp constants", sharp_constants),
        ("theorem 1 sweep", theorem1),
        ("theorem 2 sweep", theorem2),
        ("sharpness witness", sharpness_witness),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.pass);
        println!(
            "criterion {:>2} {:<30} {}  {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
