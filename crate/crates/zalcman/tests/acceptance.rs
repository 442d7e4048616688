//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `--nocapture`).  Tolerances are pinned here, not
//! configurable, so a regression anywhere upstream turns a line red.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zalcman::bounds::{
    bound, branch_thresholds, coeff_a, coeff_b, coeff_c, Branch, BoundResult, DomainCode,
    Sharpness,
};
use zalcman::classes::{extremal_series, ClassSpec, ExtremalId, ExtremalSpec};
use zalcman::search::{sweep, SearchConfig};
use zalcman::series::{alexander, eval_functional, rotate, CoefficientSeries, FunctionalQuery};
use zalcman::suite::{continuity_suite, hermitian_suite, oracle_suite, sharpness_suite};
use zalcman::verify::{check_bound, GridSpec};

fn report(criterion: usize, label: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("criterion {criterion} ({label}): PASS"),
        Err(msg) => {
            println!("criterion {criterion} ({label}): FAIL - {msg}");
            panic!("criterion {criterion} failed: {msg}");
        }
    }
}

fn q(n: usize, m: usize, lambda: f64) -> FunctionalQuery {
    FunctionalQuery::new(n, m, lambda).unwrap()
}

#[test]
fn criterion_1_koebe_attains_ma_values() {
    let run = || -> Result<(), String> {
        let koebe = extremal_series(&ExtremalSpec::new(ExtremalId::Koebe), 19)
            .map_err(|e| e.to_string())?;
        for n in 2..=10usize {
            for m in 2..=10usize {
                let phi = eval_functional(&koebe, &q(n, m, 1.0)).map_err(|e| e.to_string())?;
                let expect = ((n - 1) * (m - 1)) as f64;
                if (phi - expect).abs() > 1e-12 {
                    return Err(format!("phi(koebe,{n},{m},1) = {phi}, want {expect}"));
                }
            }
        }
        Ok(())
    };
    report(1, "Koebe values (n-1)(m-1)", run());
}

#[test]
fn criterion_2_sharpness_ledger() {
    let run = || -> Result<(), String> {
        let records = sharpness_suite(1e-9).map_err(|e| e.to_string())?;
        let failures: Vec<_> = records.iter().filter(|r| !r.passed).collect();
        if failures.is_empty() {
            println!("  {} sharpness pairs checked", records.len());
            Ok(())
        } else {
            Err(format!(
                "{} of {} pairs missed, first: {} (gap {})",
                failures.len(),
                records.len(),
                failures[0].name,
                failures[0].observed
            ))
        }
    };
    report(2, "sharpness ledger |gap| <= 1e-9", run());
}

#[test]
fn criterion_3_branch_continuity() {
    let run = || -> Result<(), String> {
        let records = continuity_suite(1e-12).map_err(|e| e.to_string())?;
        let failures: Vec<_> = records.iter().filter(|r| !r.passed).collect();
        if failures.is_empty() {
            println!("  {} thresholds checked", records.len());
            Ok(())
        } else {
            Err(format!(
                "{} thresholds discontinuous, first: {} (diff {})",
                failures.len(),
                failures[0].name,
                failures[0].observed
            ))
        }
    };
    report(3, "branch continuity <= 1e-12", run());
}

/// Which searched cells carry a sharpness claim the optimizer must recover.
fn claimed_sharp(spec: &ClassSpec, branch: Branch, sharpness: Sharpness, n: usize, m: usize, lambda: f64) -> bool {
    match sharpness {
        Sharpness::Sharp => true,
        Sharpness::NotClaimed => false,
        Sharpness::SharpConditional => match spec {
            ClassSpec::StarlikeHull { .. } | ClassSpec::ConvexHull { .. } => {
                branch == Branch::First && n == m
            }
            ClassSpec::TypicallyReal => {
                matches!(branch, Branch::CaseIA | Branch::CaseIIA)
                    && (lambda == 1.0 || (n == 2 && m == 2))
            }
            _ => false,
        },
    }
}

fn lambda_grid(spec: &ClassSpec, n: usize, m: usize) -> Vec<f64> {
    match spec {
        ClassSpec::StarlikeHull { .. }
        | ClassSpec::ConvexHull { .. }
        | ClassSpec::R { .. }
        | ClassSpec::FOverZ { .. } => {
            let t = branch_thresholds(spec, n, m).unwrap()[1];
            vec![
                -2.0,
                -1.0,
                0.0,
                t / 3.0,
                2.0 * t / 3.0,
                t,
                1.25 * t,
                1.5 * t,
                2.0 * t + 0.5,
            ]
        }
        ClassSpec::TypicallyReal => vec![1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0],
        ClassSpec::F1 { .. } | ClassSpec::F2 { .. } => {
            let t = branch_thresholds(spec, n, m).unwrap()[0];
            (0..9).map(|i| t + 0.5 * i as f64).collect()
        }
        ClassSpec::SReal => unreachable!("not representable"),
    }
}

#[test]
fn criterion_4_no_violation_search() {
    let run = || -> Result<(), String> {
        let cfg = SearchConfig {
            atoms: 6,
            restarts: 200,
            max_iters: 500,
            seed: 42,
            ..SearchConfig::default()
        };
        let classes = [
            ClassSpec::StarlikeHull { alpha: 0.0 },
            ClassSpec::ConvexHull { alpha: 0.0 },
            ClassSpec::R { beta: 0.0 },
            ClassSpec::FOverZ { beta: 0.0 },
            ClassSpec::TypicallyReal,
            ClassSpec::F1 { beta: 0.0 },
            ClassSpec::F2 { beta: 0.0 },
        ];
        let mut cells = 0usize;
        let mut sharp_cells = 0usize;
        let mut worst_violation = f64::INFINITY;
        let mut worst_recovery = 0.0f64;
        for spec in &classes {
            for n in 2..=4usize {
                for m in 2..=4usize {
                    if matches!(spec, ClassSpec::F2 { .. }) && n % 2 == 0 && m % 2 == 0 {
                        // Uncovered cells: confirm the sweep tabulates the
                        // hole instead of fabricating a bound.
                        let tiny = SearchConfig {
                            atoms: 2,
                            restarts: 2,
                            max_iters: 40,
                            ..cfg
                        };
                        let rows =
                            sweep(spec, n, m, &[1.0], &tiny).map_err(|e| e.to_string())?;
                        if rows[0].bound.is_some() || rows[0].outside.is_none() {
                            return Err(format!("F2 ({n},{m}) should be outside the domain"));
                        }
                        continue;
                    }
                    let grid = lambda_grid(spec, n, m);
                    let rows = sweep(spec, n, m, &grid, &cfg).map_err(|e| e.to_string())?;
                    for row in &rows {
                        let Some(vb) = row.bound.as_ref() else {
                            return Err(format!("{spec} ({n},{m},{}) unexpectedly n/a", row.lambda));
                        };
                        let gap = row.gap.unwrap();
                        cells += 1;
                        worst_violation = worst_violation.min(gap);
                        if gap < -1e-9 {
                            return Err(format!(
                                "violation: {spec} n={n} m={m} lambda={} best {} above bound {}",
                                row.lambda, row.best_found, vb.value
                            ));
                        }
                        if claimed_sharp(spec, vb.branch, vb.sharpness, n, m, row.lambda) {
                            sharp_cells += 1;
                            worst_recovery = worst_recovery.max(gap);
                            if gap > 1e-4 {
                                return Err(format!(
                                    "sharp cell not recovered: {spec} n={n} m={m} lambda={} gap {gap}",
                                    row.lambda
                                ));
                            }
                        }
                    }
                }
            }
        }
        println!(
            "  {cells} cells searched, {sharp_cells} claimed-sharp; worst soundness margin {worst_violation:e}, worst recovery gap {worst_recovery:e}"
        );
        Ok(())
    };
    report(4, "no-violation search, sharp recovery <= 1e-4", run());
}

#[test]
fn criterion_5_oracle_agreement() {
    let run = || -> Result<(), String> {
        let grid = GridSpec {
            angles: 721,
            weights: 101,
        };
        let records = oracle_suite(&grid);
        let failures: Vec<_> = records.iter().filter(|r| !r.passed).collect();
        if failures.is_empty() {
            println!("  {} oracle checks", records.len());
            Ok(())
        } else {
            Err(format!(
                "{} oracle checks failed, first: {} (observed {})",
                failures.len(),
                failures[0].name,
                failures[0].observed
            ))
        }
    };
    report(5, "grid oracles vs lemma bounds", run());
}

#[test]
fn criterion_6_hermitian_battery() {
    let run = || -> Result<(), String> {
        let records = hermitian_suite(42, 1000, 8, 1e-10).map_err(|e| e.to_string())?;
        let failures: Vec<_> = records.iter().filter(|r| !r.passed).collect();
        if failures.is_empty() {
            for r in &records {
                println!("  {} -> {:e}", r.name, r.observed);
            }
            Ok(())
        } else {
            Err(format!(
                "{}: observed {}",
                failures[0].name, failures[0].observed
            ))
        }
    };
    report(6, "Hermitian/Toeplitz positivity battery", run());
}

#[test]
fn criterion_7_structural_identities() {
    let run = || -> Result<(), String> {
        // Extremal coefficient tables equal the weight tables exactly.
        for &alpha in &[-1.5, -0.5, 0.0, 0.25, 0.5, 0.9] {
            let f1 = extremal_series(&ExtremalSpec::new(ExtremalId::F1Starlike { alpha }), 32)
                .map_err(|e| e.to_string())?;
            for n in 1..=32 {
                if f1.coeff(n).unwrap().re != coeff_a(n, alpha).unwrap()
                    || f1.coeff(n).unwrap().im != 0.0
                {
                    return Err(format!("f1 vs A mismatch at alpha={alpha} n={n}"));
                }
            }
        }
        for &beta in &[-2.0, -1.0, 0.0, 0.5, 0.9] {
            let fb = extremal_series(&ExtremalSpec::new(ExtremalId::F1BetaF1 { beta }), 32)
                .map_err(|e| e.to_string())?;
            let f3 = extremal_series(&ExtremalSpec::new(ExtremalId::F3F2 { beta }), 32)
                .map_err(|e| e.to_string())?;
            for n in 1..=32 {
                if fb.coeff(n).unwrap().re != coeff_b(n, beta).unwrap() {
                    return Err(format!("f1beta vs B mismatch at beta={beta} n={n}"));
                }
                if f3.coeff(n).unwrap().re != coeff_c(n, beta).unwrap() {
                    return Err(format!("f3 vs C mismatch at beta={beta} n={n}"));
                }
            }
        }

        // alexander(f1) = f2 coefficientwise.
        for &alpha in &[-1.0, 0.0, 0.5] {
            let f1 = extremal_series(&ExtremalSpec::new(ExtremalId::F1Starlike { alpha }), 32)
                .map_err(|e| e.to_string())?;
            let f2 = extremal_series(&ExtremalSpec::new(ExtremalId::F2Convex { alpha }), 32)
                .map_err(|e| e.to_string())?;
            let a = alexander(&f1);
            for n in 1..=32 {
                let diff = (a.coeff(n).unwrap() - f2.coeff(n).unwrap()).norm();
                if diff > 1e-12 {
                    return Err(format!("alexander(f1) vs f2 at alpha={alpha} n={n}: {diff}"));
                }
            }
        }

        // Rotation invariance of phi over 100 random triples.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let mut coeffs: Vec<Complex64> = (0..16)
                .map(|_| Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
                .collect();
            coeffs[0] = Complex64::new(1.0, 0.0);
            let f = CoefficientSeries::new(coeffs).unwrap();
            let n = rng.random_range(2..=8usize);
            let m = rng.random_range(2..=(17 - n));
            let lambda = rng.random_range(-4.0..4.0);
            let theta = rng.random_range(-10.0..10.0);
            let query = q(n, m, lambda);
            let a = eval_functional(&f, &query).unwrap();
            let b = eval_functional(&rotate(&f, theta), &query).unwrap();
            if (a - b).abs() > 1e-12 {
                return Err(format!("rotation variance {:e}", (a - b).abs()));
            }
        }
        Ok(())
    };
    report(7, "structural identities", run());
}

#[test]
fn criterion_8_domain_guards() {
    let run = || -> Result<(), String> {
        let checks: [(ClassSpec, usize, usize, f64, DomainCode); 5] = [
            (
                ClassSpec::F1 { beta: 0.0 },
                2,
                2,
                1.0,
                DomainCode::BelowMuThreshold,
            ),
            (
                ClassSpec::F2 { beta: 0.5 },
                3,
                3,
                0.5,
                DomainCode::BelowMuThreshold,
            ),
            (
                ClassSpec::F2 { beta: 0.0 },
                2,
                4,
                3.0,
                DomainCode::BothEvenUnsupported,
            ),
            (
                ClassSpec::TypicallyReal,
                2,
                2,
                0.99,
                DomainCode::LambdaBelowOne,
            ),
            (ClassSpec::SReal, 3, 4, 0.0, DomainCode::LambdaBelowOne),
        ];
        for (spec, n, m, lambda, code) in checks {
            match bound(&spec, &q(n, m, lambda)).map_err(|e| e.to_string())? {
                BoundResult::OutsideDomain(got) if got == code => {}
                other => {
                    return Err(format!(
                        "{spec} n={n} m={m} lambda={lambda}: expected {code}, got {other:?}"
                    ));
                }
            }
            // check_bound must refuse to fabricate a comparison.
            let koebe = extremal_series(&ExtremalSpec::new(ExtremalId::Koebe), n + m)
                .map_err(|e| e.to_string())?;
            if check_bound(&koebe, &spec, &q(n, m, lambda), 1e-9).is_ok() {
                return Err(format!("check_bound accepted uncovered cell for {spec}"));
            }
        }

        // The CLI maps domain holes to exit code 3.
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_zalcman"))
            .args([
                "bound", "--class", "F2", "--beta", "0", "-n", "2", "-m", "4", "--lambda", "3",
            ])
            .output()
            .map_err(|e| e.to_string())?;
        if out.status.code() != Some(3) {
            return Err(format!("CLI exit code {:?}, want 3", out.status.code()));
        }
        let stderr = String::from_utf8_lossy(&out.stderr);
        if !stderr.contains("BOTH_EVEN_UNSUPPORTED") {
            return Err(format!("CLI stderr missing code: {stderr}"));
        }
        Ok(())
    };
    report(8, "domain guards and exit codes", run());
}
