//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::time::{Duration, Instant};

use dirac_bounds::bounds::{
    fc_star, functional_fc, gaier_hardy, kovalev_hardy, lambda_audit, verify_chain, ChainConfig,
    FcStarOptions, Relation, EQUALITY_TOL, STRICT_MARGIN,
};
use dirac_bounds::conformal::{conformal_map, hardy_norm_fprime, theodorsen_map};
use dirac_bounds::diskspec::{disk_spectrum, rayleigh_check_disk};
use dirac_bounds::geometry::{geometry_report, DomainSpec};
use dirac_bounds::specfun::{mu_disk, secular_root};
use dirac_bounds::transplant::{h_monotonicity_check, h_prime, transplant_quotient};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn perturbed(eps: f64, k: usize) -> DomainSpec {
    let mut cos = vec![0.0; k];
    cos[k - 1] = eps;
    DomainSpec::polar_fourier(1.0, cos, Vec::new()).unwrap()
}

fn shifted_disk() -> DomainSpec {
    DomainSpec::disk(1.0)
        .unwrap()
        .with_offset([0.5, 0.0])
        .unwrap()
}

fn family_ellipse(x: f64) -> DomainSpec {
    DomainSpec::ellipse(1.0 + x, 1.0 / (1.0 + x)).unwrap()
}

fn test_shapes() -> Vec<(&'static str, DomainSpec)> {
    vec![
        (
            "ellipse(1.2, 1/1.2)",
            DomainSpec::ellipse(1.2, 1.0 / 1.2).unwrap(),
        ),
        (
            "ellipse(1.25, 0.8)",
            DomainSpec::ellipse(1.25, 0.8).unwrap(),
        ),
        ("ellipse(1.3, 1.0)", DomainSpec::ellipse(1.3, 1.0).unwrap()),
        (
            "ellipse(1.35, 0.9)",
            DomainSpec::ellipse(1.35, 0.9).unwrap(),
        ),
        (
            "ellipse(1.1, 0.9) + (0.2, -0.1)",
            DomainSpec::ellipse(1.1, 0.9)
                .unwrap()
                .with_offset([0.2, -0.1])
                .unwrap(),
        ),
        ("1 + 0.1 cos 3t", perturbed(0.1, 3)),
        ("1 + 0.05 cos 2t", perturbed(0.05, 2)),
        (
            "1 + 0.08 cos t + 0.05 sin 2t",
            DomainSpec::polar_fourier(1.0, vec![0.08], vec![0.0, 0.05]).unwrap(),
        ),
        (
            "0.7 (1 + 0.06 cos 4t) + (0.1, 0.05)",
            DomainSpec::polar_fourier(0.7, vec![0.0, 0.0, 0.0, 0.042], vec![])
                .unwrap()
                .with_offset([0.1, 0.05])
                .unwrap(),
        ),
        (
            "1.5 + 0.1 cos 2t - 0.08 sin 3t",
            DomainSpec::polar_fourier(1.5, vec![0.0, 0.1], vec![0.0, 0.0, -0.08]).unwrap(),
        ),
    ]
}

fn criterion_1() -> Outcome {
    let _ = secular_root(1, 1);
    let (root, t) = timed(|| secular_root(0, 1).unwrap());
    let err = (root.mu - 1.434696).abs();
    outcome(
        err < 1e-5 && t < Duration::from_millis(10),
        format!("mu_D = {:.12}, |err| = {err:.2e}, time {t:?}", root.mu),
    )
}

fn criterion_2() -> Outcome {
    let mu = mu_disk();
    let rayleigh = rayleigh_check_disk();
    let map = theodorsen_map(&DomainSpec::disk(1.0).unwrap(), 512).unwrap();
    let t = transplant_quotient(&map, 64).unwrap();
    let e1 = (rayleigh - mu * mu).abs();
    let e2 = (t.bound - mu).abs();
    outcome(
        e1 < 1e-8 && e2 < 1e-7,
        format!("|R - mu_D^2| = {e1:.2e}, |transplant - mu_D| = {e2:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let g = geometry_report(&shifted_disk(), 4096).unwrap();
    let fc = functional_fc(&g).unwrap();
    let exact = 0.125 * 2.5f64.sqrt();
    let err = (fc - exact).abs();
    outcome(
        err < 1e-6,
        format!("F_c = {fc:.12}, exact {exact:.12}, |err| = {err:.2e}"),
    )
}

fn criterion_4() -> Outcome {
    let (slope, t) = timed(|| {
        let s = |x: f64| {
            let g = geometry_report(&family_ellipse(x), 1024).unwrap();
            (functional_fc(&g).unwrap() - 1.0) / x
        };
        let (s1, s2, s3) = (s(1e-2), s(5e-3), s(2.5e-3));
        let (r1, r2) = (2.0 * s2 - s1, 2.0 * s3 - s2);
        (4.0 * r2 - r1) / 3.0
    });
    let rel = (slope + 8.5).abs() / 8.5;
    outcome(
        rel < 1e-2 && t < Duration::from_secs(1),
        format!("slope = {slope:.8}, relative error {rel:.2e}, time {t:?}"),
    )
}

fn criterion_5() -> Outcome {
    let mut worst_area: f64 = 0.0;
    let mut worst_koebe = f64::INFINITY;
    let mut problems = Vec::new();
    for (name, spec) in test_shapes() {
        let g = geometry_report(&spec, 4096).unwrap();
        if g.rho_star > 0.5 {
            problems.push(format!("{name}: rho_star {:.3} > 0.5", g.rho_star));
        }
        let map = match theodorsen_map(&spec, 512) {
            Ok(m) => m,
            Err(e) => {
                problems.push(format!("{name}: {e}"));
                continue;
            }
        };
        let area_err = (g.area - map.area_from_coefficients()).abs() / g.area;
        let koebe = map.derivative_at_origin() - g.r_i;
        worst_area = worst_area.max(area_err);
        worst_koebe = worst_koebe.min(koebe);
        if area_err >= 1e-7 {
            problems.push(format!("{name}: area error {area_err:.2e}"));
        }
        if koebe <= 0.0 {
            problems.push(format!("{name}: |c1| - r_i = {koebe:.2e}"));
        }
    }
    outcome(
        problems.is_empty(),
        format!(
            "worst area error {worst_area:.2e}, smallest |c1| - r_i {worst_koebe:.3e}{}",
            if problems.is_empty() {
                String::new()
            } else {
                format!("; {}", problems.join("; "))
            }
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut violations = Vec::new();
    let (mut kov, mut gai) = (f64::INFINITY, f64::INFINITY);
    let (mut n_kov, mut n_gai) = (0, 0);
    let mut shapes = test_shapes();
    shapes.push((
        "ellipse(1.5, 0.75)",
        DomainSpec::ellipse(1.5, 0.75).unwrap(),
    ));
    shapes.push(("ellipse(2, 0.5)", DomainSpec::ellipse(2.0, 0.5).unwrap()));
    shapes.push(("shifted disk", shifted_disk()));
    shapes.push(("1 + 0.15 cos 5t", perturbed(0.15, 5)));
    for (name, spec) in shapes {
        let g = geometry_report(&spec, 4096).unwrap();
        let map = conformal_map(&spec, 512).unwrap();
        let h = hardy_norm_fprime(&map).value;
        if g.is_convex {
            let m = kovalev_hardy(&g).unwrap() - h;
            kov = kov.min(m);
            n_kov += 1;
            if m < 0.0 {
                violations.push(format!("{name}: kovalev margin {m:.2e}"));
            }
        }
        if g.is_nearly_circular {
            let m = gaier_hardy(&g).unwrap() - h;
            gai = gai.min(m);
            n_gai += 1;
            if m < 0.0 {
                violations.push(format!("{name}: gaier margin {m:.2e}"));
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "{n_kov} convex shapes, min Kovalev margin {kov:.4e}; {n_gai} nearly circular, min Gaier margin {gai:.4e}; {} violations {}",
            violations.len(),
            violations.join("; ")
        ),
    )
}

fn criterion_7() -> Outcome {
    let config = ChainConfig::default();
    let mut shapes: Vec<(String, DomainSpec)> = (0..20)
        .map(|i| {
            let x = if i == 19 {
                1.0
            } else {
                0.01 + 0.99 * i as f64 / 19.0
            };
            (format!("ellipse x = {x:.4}"), family_ellipse(x))
        })
        .collect();
    for (eps, k) in [
        (0.05, 2),
        (0.1, 2),
        (0.2, 2),
        (0.05, 3),
        (0.1, 3),
        (0.2, 3),
        (0.1, 4),
        (0.2, 4),
        (0.1, 5),
        (0.2, 5),
    ] {
        shapes.push((format!("1 + {eps} cos {k}t"), perturbed(eps, k)));
    }
    shapes.push(("unit disk".into(), DomainSpec::disk(1.0).unwrap()));

    let (results, t) = timed(|| {
        shapes
            .iter()
            .map(|(name, spec)| (name.clone(), verify_chain(spec, &config)))
            .collect::<Vec<_>>()
    });
    let mut failures = Vec::new();
    let (mut strict, mut equal): (f64, f64) = (f64::INFINITY, 0.0);
    let mut without_branch = Vec::new();
    for (name, r) in &results {
        match r {
            Ok(report) => {
                if !report.chain_ok {
                    failures.push(name.clone());
                }
                if report.fc_bound.is_none() && report.fs_bound.is_none() {
                    without_branch.push(name.clone());
                }
                for link in &report.links {
                    match link.relation {
                        Relation::Strict => strict = strict.min(link.margin),
                        Relation::Equal => equal = equal.max(link.margin.abs()),
                    }
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let ok = failures.is_empty()
        && strict > STRICT_MARGIN
        && equal <= EQUALITY_TOL
        && t < Duration::from_secs(30);
    outcome(
        ok,
        format!(
            "{} domains in {t:?}, smallest strict margin {strict:.3e}, largest disk deviation {equal:.2e}, failures [{}], no F_c/F_s branch applies to [{}]",
            results.len(),
            failures.join("; "),
            without_branch.join("; ")
        ),
    )
}

fn criterion_8() -> Outcome {
    let spec = disk_spectrum(1.0, 10, 5).unwrap();
    let mus: Vec<f64> = spec.iter().map(|p| p.mu).collect();
    let symmetric = mus
        .iter()
        .zip(mus.iter().rev())
        .all(|(a, b)| (a + b).abs() < 1e-12);
    let no_zero = mus.iter().all(|m| *m != 0.0);
    let least = spec
        .iter()
        .filter(|p| p.mu > 0.0)
        .min_by(|a, b| a.mu.total_cmp(&b.mu))
        .unwrap();
    let residual = spec
        .iter()
        .map(|p| p.secular_residual())
        .fold(0.0, f64::max);
    outcome(
        symmetric && no_zero && least.k == 0 && residual < 1e-12,
        format!(
            "{} eigenvalues, symmetric {symmetric}, zero-free {no_zero}, least positive {:.9} on fiber {}, max residual {residual:.2e}",
            mus.len(),
            least.mu,
            least.k
        ),
    )
}

fn criterion_9() -> Outcome {
    let min = h_monotonicity_check(10_000).unwrap();
    let at_one = h_prime(1.0, mu_disk());
    outcome(
        min > 0.0 && at_one.abs() < 1e-10,
        format!("min over r_j = j/10^4, j < 10^4: {min:.3e}; value at r = 1: {at_one:.2e}"),
    )
}

fn criterion_10() -> Outcome {
    let opts = FcStarOptions::default();
    let e = fc_star(&DomainSpec::ellipse(1.5, 0.75).unwrap(), &opts).unwrap();
    let d = fc_star(&shifted_disk(), &opts).unwrap();
    let ye = e.y[0].hypot(e.y[1]);
    let yd = (d.y[0] - 0.5).hypot(d.y[1]);
    let vd = (d.value - 1.0).abs();
    outcome(
        ye < 1e-6 && yd < 1e-6 && vd < 1e-8,
        format!("ellipse |y*| = {ye:.2e}; shifted disk |y* - c| = {yd:.2e}, |F_c* - 1| = {vd:.2e}"),
    )
}

fn criterion_11() -> Outcome {
    let a = lambda_audit();
    outcome(
        a.j01_residual < 1e-12 && (a.j01 - 2.404826).abs() < 1e-6 && a.discrepancy,
        format!(
            "j01 = {:.9} (|J0| = {:.1e}); quoted sqrt(lambda1) = {} vs j01 = {:.6}; sqrt(j01) = {:.6}; discrepancy flagged: {}",
            a.j01, a.j01_residual, a.quoted_sqrt_lambda1, a.sqrt_lambda1, a.sqrt_j01, a.discrepancy
        ),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("disk principal eigenvalue", criterion_1),
        ("disk Rayleigh identity", criterion_2),
        ("shifted-disk functional", criterion_3),
        ("ellipse expansion slope", criterion_4),
        ("area formula and Koebe", criterion_5),
        ("Hardy sandwich", criterion_6),
        ("inequality chain", criterion_7),
        ("spectrum structure", criterion_8),
        ("H monotonicity", criterion_9),
        ("symmetric optimum", criterion_10),
        ("lambda_1 audit", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.ok {
            failed += 1;
        }
        println!(
            "{} [{:2}] {name}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
