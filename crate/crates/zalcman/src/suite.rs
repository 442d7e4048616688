//! Assembled verification batteries: the sharpness ledger, branch
//! continuity, the Hermitian-form battery, the lemma oracles, and random
//! membership checks.  The CLI `verify` subcommand and the acceptance tests
//! both run these, so they agree by construction.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{bound, branch_formula, branch_thresholds, Branch, BoundResult};
use crate::classes::{
    caratheodory_from_measure, series_from_measure, AtomicMeasure, CaratheodorySeries, ClassSpec,
};
use crate::error::Result;
use crate::series::FunctionalQuery;
use crate::verify::{
    caratheodory_product_bound, check_bound, hermitian_form_p, hermitian_form_t,
    moment_functional_bound, oracle_caratheodory_product, oracle_moment_functional,
    proof_form_replay, sharpness_gap, toeplitz_min_eig, GridSpec,
};

/// One checked fact, suitable for a JSON-lines report.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRecord {
    /// Which battery produced the record.
    pub suite: &'static str,
    /// What exactly was checked.
    pub name: String,
    pub passed: bool,
    /// The measured quantity (gap, margin, minimum, maximum...).
    pub observed: f64,
    /// The tolerance the quantity was held against.
    pub threshold: f64,
}

impl SuiteRecord {
    fn new(suite: &'static str, name: String, passed: bool, observed: f64, threshold: f64) -> Self {
        Self {
            suite,
            name,
            passed,
            observed,
            threshold,
        }
    }
}

/// Uniformly random measure with up to `max_atoms` atoms.
pub fn random_measure(rng: &mut ChaCha8Rng, max_atoms: usize) -> AtomicMeasure {
    let k = rng.random_range(1..=max_atoms.max(1));
    let raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    AtomicMeasure::new(raw.iter().map(|&w| (w / total, rng.random::<f64>() * TAU)))
        .expect("normalized random atoms")
}

/// Random measure invariant under t -> 2pi - t, built from mirrored pairs.
pub fn random_symmetric_measure(rng: &mut ChaCha8Rng, max_pairs: usize) -> AtomicMeasure {
    let k = rng.random_range(1..=max_pairs.max(1));
    let raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let mut atoms = Vec::with_capacity(2 * k);
    for &w in &raw {
        let t = rng.random::<f64>() * std::f64::consts::PI;
        atoms.push((w / total / 2.0, t));
        atoms.push((w / total / 2.0, TAU - t));
    }
    AtomicMeasure::new_symmetric(atoms).expect("mirrored atoms")
}

/// Random complex sequence with |z_k| <= 2^{-k} and 1..=max_len entries.
pub fn random_decaying_zseq(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<Complex64> {
    let len = rng.random_range(1..=max_len.max(1));
    (0..len)
        .map(|k| {
            Complex64::from_polar(
                rng.random::<f64>() * 0.5f64.powi(k as i32),
                rng.random::<f64>() * TAU,
            )
        })
        .collect()
}

fn q(n: usize, m: usize, lambda: f64) -> FunctionalQuery {
    FunctionalQuery::new(n, m, lambda).expect("indices >= 2")
}

fn sharpness_cell_with(
    records: &mut Vec<SuiteRecord>,
    spec: &ClassSpec,
    n: usize,
    m: usize,
    lambda: f64,
    expected: Branch,
    attaining: Option<&crate::classes::ExtremalSpec>,
    tol: f64,
) -> Result<()> {
    let query = q(n, m, lambda);
    let name = format!("{spec} n={n} m={m} lambda={lambda}");
    match bound(spec, &query)? {
        BoundResult::Valid(v) => {
            if v.branch != expected {
                records.push(SuiteRecord::new(
                    "sharpness",
                    format!("{name}: expected branch {expected}, got {}", v.branch),
                    false,
                    f64::NAN,
                    tol,
                ));
                return Ok(());
            }
            let attached = v.attaining_extremal.as_ref();
            let Some(extremal) = attaining.or(attached) else {
                records.push(SuiteRecord::new(
                    "sharpness",
                    format!("{name}: no attaining extremal attached"),
                    false,
                    f64::NAN,
                    tol,
                ));
                return Ok(());
            };
            let gap = sharpness_gap(extremal, spec, &query)?;
            records.push(SuiteRecord::new(
                "sharpness",
                format!("{name} branch {expected} attained by {extremal}"),
                gap.abs() <= tol,
                gap,
                tol,
            ));
        }
        BoundResult::OutsideDomain(code) => {
            records.push(SuiteRecord::new(
                "sharpness",
                format!("{name}: unexpectedly outside domain ({code})"),
                false,
                f64::NAN,
                tol,
            ));
        }
    }
    Ok(())
}

fn sharpness_cell(
    records: &mut Vec<SuiteRecord>,
    spec: &ClassSpec,
    n: usize,
    m: usize,
    lambda: f64,
    expected: Branch,
    tol: f64,
) -> Result<()> {
    sharpness_cell_with(records, spec, n, m, lambda, expected, None, tol)
}

/// Every claimed-sharp (class, branch, extremal) pair: the attaining
/// function listed by the bound must close the gap to within `tol`.
pub fn sharpness_suite(tol: f64) -> Result<Vec<SuiteRecord>> {
    let mut records = Vec::new();

    // Hull second branch: f1 / f2 and rotations.
    for &alpha in &[0.0, -1.0] {
        for n in 2..=5 {
            for m in 2..=5 {
                for &lambda in &[-1.0, 2.0, 3.0] {
                    for spec in [
                        ClassSpec::StarlikeHull { alpha },
                        ClassSpec::ConvexHull { alpha },
                    ] {
                        // At alpha = 0 the convex threshold is exactly 2, so
                        // lambda = 2 sits on the first branch; skip that cell.
                        if matches!(spec, ClassSpec::ConvexHull { .. })
                            && alpha == 0.0
                            && lambda == 2.0
                        {
                            continue;
                        }
                        sharpness_cell(&mut records, &spec, n, m, lambda, Branch::Second, tol)?;
                    }
                }
            }
        }
    }

    // Hull first branch on the diagonal: the rotation mixtures.
    for (alpha, cells) in [
        (0.0, vec![(2, 0.0), (2, 1.0), (3, 0.0), (3, 1.0), (4, 0.0)]),
        (
            0.5,
            vec![(2, 0.0), (2, 1.0), (3, 0.0), (3, 1.0), (4, 0.0), (4, 1.0)],
        ),
    ] {
        for &(n, lambda) in &cells {
            sharpness_cell(
                &mut records,
                &ClassSpec::StarlikeHull { alpha },
                n,
                n,
                lambda,
                Branch::First,
                tol,
            )?;
        }
    }
    for &(n, lambda) in &[(2, 0.0), (2, 1.0), (3, 0.0), (3, 1.0)] {
        sharpness_cell(
            &mut records,
            &ClassSpec::ConvexHull { alpha: 0.5 },
            n,
            n,
            lambda,
            Branch::First,
            tol,
        )?;
    }

    // R(beta), both branches.
    for &beta in &[0.0, -1.0, 0.5] {
        let spec = ClassSpec::R { beta };
        for n in 2..=5 {
            for m in 2..=5 {
                let t = (n * m) as f64 / ((1.0 - beta) * (n + m - 1) as f64);
                for lambda in [-1.0, 1.5 * t, t + 2.0] {
                    sharpness_cell(&mut records, &spec, n, m, lambda, Branch::Second, tol)?;
                }
                for lambda in [0.0, 0.5 * t] {
                    sharpness_cell(&mut records, &spec, n, m, lambda, Branch::First, tol)?;
                }
            }
        }
    }

    // Typically real: Koebe on the (b) cases and the general case.  At
    // lambda = 3/2 exactly the label is (a) by the threshold rule, but the
    // two formulas agree there and Koebe attains the shared value.
    let t_spec = ClassSpec::TypicallyReal;
    let koebe = crate::classes::ExtremalSpec::new(crate::classes::ExtremalId::Koebe);
    for &m in &[2, 4, 6] {
        sharpness_cell_with(&mut records, &t_spec, 2, m, 1.5, Branch::CaseIA, Some(&koebe), tol)?;
        for &lambda in &[2.0, 3.0] {
            sharpness_cell(&mut records, &t_spec, 2, m, lambda, Branch::CaseIB, tol)?;
        }
    }
    for &n in &[4, 6] {
        sharpness_cell_with(&mut records, &t_spec, n, 2, 1.5, Branch::CaseIIA, Some(&koebe), tol)?;
        for &lambda in &[2.0, 3.0] {
            sharpness_cell(&mut records, &t_spec, n, 2, lambda, Branch::CaseIIB, tol)?;
        }
    }
    for &(n, m) in &[(2, 3), (2, 5), (3, 2), (5, 2), (3, 3), (3, 4), (4, 3), (4, 4), (5, 5)] {
        for &lambda in &[1.0, 1.5, 2.0, 3.0] {
            sharpness_cell(&mut records, &t_spec, n, m, lambda, Branch::CaseIII, tol)?;
        }
    }
    // The odd extremal attains the (a) cases at lambda = 1 (and for all
    // lambda in [1, 3/2] when n = m = 2).
    for &m in &[2, 4, 6, 8] {
        sharpness_cell(&mut records, &t_spec, 2, m, 1.0, Branch::CaseIA, tol)?;
    }
    for &n in &[4, 6] {
        sharpness_cell(&mut records, &t_spec, n, 2, 1.0, Branch::CaseIIA, tol)?;
    }
    for &lambda in &[1.2, 1.5] {
        sharpness_cell(&mut records, &t_spec, 2, 2, lambda, Branch::CaseIA, tol)?;
    }

    // Real-coefficient univalent functions: Koebe.
    for n in 2..=5 {
        for m in 2..=5 {
            for &lambda in &[1.0, 2.0] {
                sharpness_cell(&mut records, &ClassSpec::SReal, n, m, lambda, Branch::Only, tol)?;
            }
        }
    }

    // Close-to-convex subclasses at and above their thresholds.
    for &beta in &[0.0, 0.5, -1.0] {
        for n in 2..=5 {
            for m in 2..=5 {
                let base = (n * m) as f64 / (n + m - 1) as f64;
                let t = (base / (1.0 - beta)).max(base);
                for lambda in [t, t + 1.0, 2.0 * t] {
                    sharpness_cell(
                        &mut records,
                        &ClassSpec::F1 { beta },
                        n,
                        m,
                        lambda,
                        Branch::Only,
                        tol,
                    )?;
                }
                if n % 2 == 1 || m % 2 == 1 {
                    for lambda in [t, t + 1.0] {
                        sharpness_cell(
                            &mut records,
                            &ClassSpec::F2 { beta },
                            n,
                            m,
                            lambda,
                            Branch::Only,
                            tol,
                        )?;
                    }
                }
            }
        }
    }

    Ok(records)
}

/// At every interior breakpoint the two adjacent branch formulas must agree.
pub fn continuity_suite(tol: f64) -> Result<Vec<SuiteRecord>> {
    let mut records = Vec::new();
    let two_branch: Vec<ClassSpec> = [-1.0, 0.0, 0.5]
        .iter()
        .flat_map(|&p| {
            vec![
                ClassSpec::StarlikeHull { alpha: p },
                ClassSpec::ConvexHull { alpha: p },
                ClassSpec::R { beta: p },
                ClassSpec::FOverZ { beta: p },
            ]
        })
        .collect();
    for spec in &two_branch {
        for n in 2..=8 {
            for m in 2..=8 {
                for &t in &branch_thresholds(spec, n, m)? {
                    let first = branch_formula(spec, n, m, Branch::First, t)?.expect("two-branch");
                    let second =
                        branch_formula(spec, n, m, Branch::Second, t)?.expect("two-branch");
                    let diff = (first - second).abs();
                    records.push(SuiteRecord::new(
                        "continuity",
                        format!("{spec} n={n} m={m} at lambda={t}"),
                        diff <= tol,
                        diff,
                        tol,
                    ));
                }
            }
        }
    }
    for k in (2..=8).step_by(2) {
        for (a, b, n, m) in [
            (Branch::CaseIA, Branch::CaseIB, 2, k),
            (Branch::CaseIIA, Branch::CaseIIB, k, 2),
        ] {
            let spec = ClassSpec::TypicallyReal;
            let va = branch_formula(&spec, n, m, a, 1.5)?.expect("even case");
            let vb = branch_formula(&spec, n, m, b, 1.5)?.expect("even case");
            let diff = (va - vb).abs();
            records.push(SuiteRecord::new(
                "continuity",
                format!("typically_real n={n} m={m} at lambda=1.5"),
                diff <= tol,
                diff,
                tol,
            ));
        }
    }
    Ok(records)
}

/// Positivity battery: the two Hermitian forms and the Toeplitz minimum
/// eigenvalue over seeded random measures, plus the constructed violator.
pub fn hermitian_suite(
    seed: u64,
    measures: usize,
    zseqs_per_measure: usize,
    tol: f64,
) -> Result<Vec<SuiteRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_form_p = f64::INFINITY;
    let mut min_toeplitz = f64::INFINITY;
    for _ in 0..measures {
        let measure = random_measure(&mut rng, 6);
        let c = caratheodory_from_measure(&measure, 16)?;
        for _ in 0..zseqs_per_measure {
            let z = random_decaying_zseq(&mut rng, 8);
            min_form_p = min_form_p.min(hermitian_form_p(&c, &z)?);
        }
        let short = caratheodory_from_measure(&measure, 8)?;
        min_toeplitz = min_toeplitz.min(toeplitz_min_eig(&short));
    }

    let mut min_form_t = f64::INFINITY;
    let mut min_toeplitz_sym = f64::INFINITY;
    let mut min_replay = f64::INFINITY;
    for i in 0..measures {
        let measure = random_symmetric_measure(&mut rng, 3);
        let series = series_from_measure(&ClassSpec::TypicallyReal, &measure, 16)?;
        for _ in 0..zseqs_per_measure {
            let z: Vec<f64> = random_decaying_zseq(&mut rng, 8)
                .iter()
                .map(|c| c.re)
                .collect();
            min_form_t = min_form_t.min(hermitian_form_t(&series, &z)?);
        }
        let c = caratheodory_from_measure(&measure, 8)?;
        min_toeplitz_sym = min_toeplitz_sym.min(toeplitz_min_eig(&c));
        // Exercise the proof-form replays on a rotating subset.
        if i % 10 == 0 {
            let generic = random_measure(&mut rng, 4);
            let lambda = rng.random_range(-2.0..4.0);
            let n = rng.random_range(2..=4);
            let m = rng.random_range(2..=4);
            for spec in [
                ClassSpec::R { beta: 0.25 },
                ClassSpec::F1 { beta: -0.5 },
                ClassSpec::F2 { beta: 0.1 },
            ] {
                min_replay = min_replay.min(proof_form_replay(&spec, &generic, &q(n, m, lambda))?);
            }
            min_replay = min_replay.min(proof_form_replay(
                &ClassSpec::TypicallyReal,
                &measure,
                &q(n, m, lambda.max(1.0)),
            )?);
        }
    }

    let violator = toeplitz_min_eig(&CaratheodorySeries::from_real(&[3.0]));

    Ok(vec![
        SuiteRecord::new(
            "hermitian",
            format!("form_P minimum over {measures} measures x {zseqs_per_measure} sequences"),
            min_form_p >= -tol,
            min_form_p,
            -tol,
        ),
        SuiteRecord::new(
            "hermitian",
            format!("form_T minimum over {measures} symmetric measures x {zseqs_per_measure} sequences"),
            min_form_t >= -tol,
            min_form_t,
            -tol,
        ),
        SuiteRecord::new(
            "hermitian",
            format!("toeplitz_min_eig minimum over {measures} measures"),
            min_toeplitz >= -tol,
            min_toeplitz,
            -tol,
        ),
        SuiteRecord::new(
            "hermitian",
            format!("toeplitz_min_eig minimum over {measures} symmetric measures"),
            min_toeplitz_sym >= -tol,
            min_toeplitz_sym,
            -tol,
        ),
        SuiteRecord::new(
            "hermitian",
            "proof-form replay minimum over sampled classes".into(),
            min_replay >= -tol,
            min_replay,
            -tol,
        ),
        SuiteRecord::new(
            "hermitian",
            "toeplitz_min_eig rejects the violator c_1 = 3".into(),
            violator < -0.5,
            violator,
            -0.5,
        ),
    ])
}

/// Grid oracles against the two moment lemmas: soundness at several
/// parameters and completeness where point masses or mirrored pairs attain
/// the bound.
pub fn oracle_suite(grid: &GridSpec) -> Vec<SuiteRecord> {
    let mut records = Vec::new();
    for &mu in &[-1.0, 0.0, 0.25, 0.5, 1.0, 2.0] {
        let max = oracle_caratheodory_product(mu, 1, 1, grid);
        let b = caratheodory_product_bound(mu);
        records.push(SuiteRecord::new(
            "oracle",
            format!("|mu c_n c_m - c_(n+m)| soundness at mu={mu}, (n,m)=(1,1)"),
            max <= b + 1e-9,
            max - b,
            1e-9,
        ));
    }
    for &mu in &[0.5, 2.0] {
        let max = oracle_caratheodory_product(mu, 1, 1, grid);
        let b = caratheodory_product_bound(mu);
        records.push(SuiteRecord::new(
            "oracle",
            format!("|mu c_n c_m - c_(n+m)| completeness at mu={mu}, (n,m)=(1,1)"),
            max >= b - 1e-2,
            b - max,
            1e-2,
        ));
    }
    for &(n, m) in &[(1, 2), (2, 3)] {
        let max = oracle_caratheodory_product(2.0, n, m, grid);
        let b = caratheodory_product_bound(2.0);
        records.push(SuiteRecord::new(
            "oracle",
            format!("|mu c_n c_m - c_(n+m)| soundness at mu=2, (n,m)=({n},{m})"),
            max <= b + 1e-9,
            max - b,
            1e-9,
        ));
    }

    for &lambda in &[-2.0, 0.0, 0.5, 1.0, 2.0, 4.0] {
        let max = oracle_moment_functional(lambda, 1, 1, grid);
        let b = moment_functional_bound(lambda);
        records.push(SuiteRecord::new(
            "oracle",
            format!("moment functional soundness at lambda={lambda}, (n,m)=(1,1)"),
            max <= b + 1e-9,
            max - b,
            1e-9,
        ));
    }
    for &lambda in &[1.0, 4.0] {
        let max = oracle_moment_functional(lambda, 1, 1, grid);
        let b = moment_functional_bound(lambda);
        records.push(SuiteRecord::new(
            "oracle",
            format!("moment functional completeness at lambda={lambda}, (n,m)=(1,1)"),
            max >= b - 1e-2,
            b - max,
            1e-2,
        ));
    }
    let max = oracle_moment_functional(1.0, 2, 2, grid);
    records.push(SuiteRecord::new(
        "oracle",
        "moment functional soundness at lambda=1, (n,m)=(2,2)".into(),
        max <= 1.0 + 1e-9,
        max - 1.0,
        1e-9,
    ));
    records
}

/// Random measure-generated members must respect every in-domain bound.
pub fn membership_suite(seed: u64, measures_per_class: usize, tol: f64) -> Result<Vec<SuiteRecord>> {
    let classes = [
        ClassSpec::StarlikeHull { alpha: 0.3 },
        ClassSpec::StarlikeHull { alpha: -0.5 },
        ClassSpec::ConvexHull { alpha: 0.2 },
        ClassSpec::R { beta: 0.1 },
        ClassSpec::R { beta: -1.0 },
        ClassSpec::FOverZ { beta: 0.4 },
        ClassSpec::TypicallyReal,
        ClassSpec::F1 { beta: -0.3 },
        ClassSpec::F2 { beta: 0.25 },
    ];
    let lambdas = [-2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let mut records = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for spec in &classes {
        let mut min_margin = f64::INFINITY;
        let mut checked = 0usize;
        for _ in 0..measures_per_class {
            let measure = if spec.needs_symmetric_measure() {
                random_symmetric_measure(&mut rng, 3)
            } else {
                random_measure(&mut rng, 6)
            };
            let series = series_from_measure(spec, &measure, 11)?;
            for n in 2..=6usize {
                for m in 2..=6usize {
                    for &lambda in &lambdas {
                        let query = q(n, m, lambda);
                        match bound(spec, &query)? {
                            BoundResult::Valid(_) => {
                                let report = check_bound(&series, spec, &query, tol)?;
                                min_margin = min_margin.min(report.margin);
                                checked += 1;
                            }
                            BoundResult::OutsideDomain(_) => {}
                        }
                    }
                }
            }
        }
        records.push(SuiteRecord::new(
            "membership",
            format!("{spec}: min margin over {measures_per_class} members x {checked} in-domain cells"),
            min_margin >= -tol,
            min_margin,
            -tol,
        ));
    }
    Ok(records)
}
