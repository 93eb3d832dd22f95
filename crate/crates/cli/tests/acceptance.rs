//! Acceptance criteria 1–8, each at its stated tolerance and runtime budget.
//!
//! Runs as a plain binary so the PASS/FAIL lines are always printed; the
//! process fails if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gme_core::bounds::{
    bisect, compare_bounds_curve, gao_ghz_closed_form, gme_detect, proposition_lower_bound,
    scan_family, two_qubit_concurrence, zhao_ghz_closed_form, Verdict,
};
use gme_core::concurrence::{
    gme_threshold, pure_bipartite_concurrence, pure_concurrence, purity_via_tensors,
};
use gme_core::states::{
    dct_state, ghz, random_biseparable_mixture, random_biseparable_pure, random_mixed, random_pure,
    w_state, white_noise_family, DensityMatrix, KetVector,
};
use gme_core::tensor::{partial_trace, purity, PartySet, SubsetMask, SystemShape};
use num_complex::Complex64;

type Check = Result<String, String>;

fn close(what: &str, got: f64, want: f64, tol: f64) -> Check {
    let dev = (got - want).abs();
    if dev <= tol {
        Ok(format!("{what}={got:.9}"))
    } else {
        Err(format!(
            "{what}={got:.12}, expected {want:.12} ± {tol:e} (off by {dev:e})"
        ))
    }
}

fn all(checks: impl IntoIterator<Item = Check>) -> Check {
    let mut notes = Vec::new();
    for c in checks {
        notes.push(c?);
    }
    Ok(notes.join(", "))
}

fn shape(n: usize, d: usize) -> SystemShape {
    SystemShape::uniform(n, d).unwrap()
}

fn err(e: gme_core::Error) -> String {
    e.to_string()
}

fn pure_concurrences() -> Check {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    // (|00⟩ + |11⟩)/√2 ⊗ |0⟩ occupies |000⟩ and |110⟩.
    amps[0] = Complex64::new(h, 0.0);
    amps[6] = Complex64::new(h, 0.0);
    let bell_zero = KetVector::new(shape(3, 2), amps).map_err(err)?;
    let c = |k: &KetVector| pure_concurrence(k).map_err(err);
    all([
        close("C3(Bell⊗0)", c(&bell_zero)?, 1.0, 1e-9),
        close("C3(GHZ)", c(&ghz(3, 2).map_err(err)?)?, 1.5f64.sqrt(), 1e-9),
        close(
            "C3(GGHZ33)",
            c(&ghz(3, 3).map_err(err)?)?,
            2f64.sqrt(),
            1e-9,
        ),
        close(
            "C3(W)",
            c(&w_state(3).map_err(err)?)?,
            2.0 / 3f64.sqrt(),
            1e-9,
        ),
    ])
}

fn thresholds() -> Check {
    let t = |n, d| gme_threshold(n, d).map(|t| t.value).map_err(err);
    let t32 = t(3, 2)?;
    if t32 != 1.0 {
        return Err(format!("threshold(3,2)={t32:e} is not exactly 1"));
    }
    all([
        close("T(3,2)", t32, 1.0, 1e-12),
        close("T(3,3)", t(3, 3)?, (4.0f64 / 3.0).sqrt(), 1e-12),
        close("T(4,2)", t(4, 2)?, 0.5 * 7.5f64.sqrt(), 1e-12),
    ])
}

fn family_threshold(d: usize, want: f64) -> Check {
    let family = white_noise_family(ghz(3, d).map_err(err)?.to_density());
    let r = scan_family(&family, 200, 1e-6).map_err(err)?;
    let x = r
        .detection_threshold
        .ok_or("scan found no detection threshold")?;
    close("detection_threshold", x, want, 5e-4)
}

fn closed_forms() -> Check {
    let root = bisect(|x| Ok(zhao_ghz_closed_form(x) > 1.0), 0.0, 1.0 / 3.0, 1e-12).map_err(err)?;
    let crossing = compare_bounds_curve(200).map_err(err)?.zhao_gao_crossover;
    let crossing = match crossing {
        Some(x) => format!("zhao/gao crossover={x:.6} (published 0.190211, documented deviation)"),
        None => "zhao/gao crossover=none (published 0.190211)".to_string(),
    };
    Ok(format!(
        "{}, {crossing}",
        all([
            close("zhao root", root, 0.033674, 1e-5),
            close("gao(0)", gao_ghz_closed_form(0.0), 0.6035534, 1e-6),
        ])?
    ))
}

fn dct() -> Check {
    let rho = dct_state(1.0 / 6.0, 0.5, [1.0 / 18.0; 3]).map_err(err)?;
    let report = proposition_lower_bound(&rho).map_err(err)?;
    for cb in &report.cuts {
        close("cut bound", cb.lower_bound, 2.0 / 9.0, 1e-9)?;
    }
    let floor = 0.272166 - 1e-6;
    if report.lc_n < floor {
        return Err(format!("lc_n={:.9} < {floor}", report.lc_n));
    }
    Ok(format!(
        "lc_n={:.9} >= 0.272166 - 1e-6; published 0.3499, shortfall {:.6} reported",
        report.lc_n,
        0.3499 - report.lc_n
    ))
}

fn suite(name: &str, cases: u64, mut case: impl FnMut(u64) -> Result<(), String>) -> Check {
    let start = Instant::now();
    for i in 0..cases {
        case(i).map_err(|e| format!("{name} case {i}: {e}"))?;
    }
    Ok(format!(
        "{name} {cases} ok ({:.1}s)",
        start.elapsed().as_secs_f64()
    ))
}

fn pair_marginal(psi: &KetVector, pair: &[usize]) -> Result<DensityMatrix, String> {
    let keep = SubsetMask::from_parties(pair, 3).map_err(err)?;
    let m = partial_trace(&psi.projector(), psi.shape(), keep).map_err(err)?;
    DensityMatrix::new(shape(2, 2), m).map_err(err)
}

fn ckw_sides(psi: &KetVector) -> Result<(f64, f64), String> {
    let lhs = pure_concurrence(psi).map_err(err)?.powi(2);
    let mut rhs = 0.0;
    for pair in [[1, 2], [1, 3], [2, 3]] {
        rhs += two_qubit_concurrence(&pair_marginal(psi, &pair)?)
            .map_err(err)?
            .powi(2);
    }
    Ok((lhs, rhs))
}

fn property_suites() -> Check {
    let pure_shapes = [(3, 2), (3, 3), (4, 2), (2, 3), (4, 3)];
    let equality = suite("pure cut-sum identity", 200, |i| {
        let (n, d) = pure_shapes[(i % 5) as usize];
        let psi = random_pure(&shape(n, d), 10_000 + i);
        let c = pure_concurrence(&psi).map_err(err)?;
        let mut sum = 0.0;
        for cut in psi.shape().cuts() {
            sum += pure_bipartite_concurrence(&psi, cut).map_err(err)?.powi(2);
        }
        let rhs = 2f64.powi(1 - n as i32) * sum;
        close("C_N^2", c * c, rhs, 1e-9).map(drop)
    })?;
    let tensors = suite("purity via tensors", 200, |i| {
        let (n, d) = [(2, 2), (3, 2), (2, 3), (3, 3), (4, 2)][(i % 5) as usize];
        let s = shape(n, d);
        let rho = random_mixed(&s, 1 + (i as usize % 4), 11_000 + i);
        let subset = PartySet::new(1 + (i as u32 % ((1 << n) - 1)), n).map_err(err)?;
        let direct = if subset.len() == n {
            purity(rho.matrix()).map_err(err)?
        } else {
            let keep = SubsetMask::new(subset.bits(), n).map_err(err)?;
            purity(&partial_trace(rho.matrix(), &s, keep).map_err(err)?).map_err(err)?
        };
        let via = purity_via_tensors(&rho, subset).map_err(err)?;
        close("purity", via, direct, 1e-9).map(drop)
    })?;
    let bisep_shapes = [(3, 2), (3, 3), (4, 2), (4, 3)];
    let ceiling = suite("biseparable ceiling", 200, |i| {
        let (n, d) = bisep_shapes[(i % 4) as usize];
        let (psi, _) = random_biseparable_pure(&shape(n, d), 12_000 + i);
        let c = pure_concurrence(&psi).map_err(err)?;
        let t = gme_threshold(n, d).map_err(err)?.value;
        if c > t + 1e-9 {
            return Err(format!("C_N={c} exceeds threshold {t}"));
        }
        Ok(())
    })?;
    let soundness = suite("lc_n soundness", 200, |i| {
        // The 81-dimensional (4,3) case dominates the cost, so it is every eighth case.
        let (n, d) = if i % 8 == 7 {
            (4, 3)
        } else {
            [(3, 2), (3, 3), (4, 2)][(i % 3) as usize]
        };
        let psi = random_pure(&shape(n, d), 13_000 + i);
        let lc = proposition_lower_bound(&psi.to_density())
            .map_err(err)?
            .lc_n;
        let c = pure_concurrence(&psi).map_err(err)?;
        if lc > c + 1e-8 {
            return Err(format!("lc_n={lc} exceeds C_N={c}"));
        }
        Ok(())
    })?;
    let no_false = suite("no false GME", 200, |i| {
        let rho = random_biseparable_mixture(&shape(3, 2), 1 + (i as usize % 4), 14_000 + i);
        let (verdict, report) = gme_detect(&rho).map_err(err)?;
        if verdict == Verdict::GmeCertified {
            return Err(format!("certified with lc_n={}", report.lc_n));
        }
        Ok(())
    })?;
    let ckw = suite("CKW", 200, |i| {
        let (lhs, rhs) = ckw_sides(&random_pure(&shape(3, 2), 15_000 + i))?;
        if lhs < rhs - 1e-8 {
            return Err(format!("C_3^2={lhs} < pair sum {rhs}"));
        }
        Ok(())
    })?;
    let (lhs, rhs) = ckw_sides(&w_state(3).map_err(err)?)?;
    close("CKW at W", lhs, rhs, 1e-8)?;
    Ok([
        equality,
        tensors,
        ceiling,
        soundness,
        no_false,
        ckw,
        "W equality ok".into(),
    ]
    .join("; "))
}

fn scan_csv(
    dir: &std::path::Path,
    family: &str,
    tag: &str,
    threads: Option<&str>,
) -> Result<Vec<u8>, String> {
    let input = dir.join(format!("{family}.json"));
    let path = dir.join(format!("{family}-{tag}.csv"));
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gme"));
    cmd.arg("scan").arg(&input).arg("--csv").arg(&path);
    cmd.env_remove("GME_DIM_CAP");
    match threads {
        Some(t) => cmd.env("RAYON_NUM_THREADS", t),
        None => cmd.env_remove("RAYON_NUM_THREADS"),
    };
    let out = cmd.output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "scan exited with {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    std::fs::read(&path).map_err(|e| e.to_string())
}

fn determinism() -> Check {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let docs = [
        (
            "gghz",
            r#"{"kind":"builtin","name":"white-noise","base":{"kind":"builtin","name":"ghz","n":3,"d":3}}"#,
        ),
        (
            "ghz",
            r#"{"kind":"family","base":{"kind":"builtin","name":"ghz","n":3,"d":2}}"#,
        ),
    ];
    let mut notes = Vec::new();
    for (name, doc) in docs {
        std::fs::write(dir.path().join(format!("{name}.json")), doc).map_err(|e| e.to_string())?;
        let first = scan_csv(dir.path(), name, "a", None)?;
        for (tag, threads) in [("b", None), ("t1", Some("1")), ("t4", Some("4"))] {
            let again = scan_csv(dir.path(), name, tag, threads)?;
            if again != first {
                return Err(format!("{name}: run {tag} differs from the first run"));
            }
        }
        notes.push(format!(
            "{name} {} bytes identical over 4 runs",
            first.len()
        ));
    }
    Ok(notes.join(", "))
}

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            title: "pure concurrence values",
            budget: Duration::from_millis(100),
            run: pure_concurrences,
        },
        Criterion {
            id: 2,
            title: "threshold constants",
            budget: Duration::from_millis(100),
            run: thresholds,
        },
        Criterion {
            id: 3,
            title: "GGHZ detection threshold",
            budget: Duration::from_secs(5),
            run: || family_threshold(3, 0.16515),
        },
        Criterion {
            id: 4,
            title: "GHZ detection threshold",
            budget: Duration::from_secs(2),
            run: || family_threshold(2, 0.14680),
        },
        Criterion {
            id: 5,
            title: "closed-form comparators",
            budget: Duration::from_millis(500),
            run: closed_forms,
        },
        Criterion {
            id: 6,
            title: "DCT lower bound",
            budget: Duration::from_millis(500),
            run: dct,
        },
        Criterion {
            id: 7,
            title: "property suites",
            budget: Duration::from_secs(60),
            run: property_suites,
        },
        Criterion {
            id: 8,
            title: "scan CSV determinism",
            budget: Duration::from_secs(60),
            run: determinism,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (
                false,
                format!("{d}; runtime {elapsed:.2?} over budget {:?}", c.budget),
            ),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {}: {} — {} [{elapsed:.2?}] {detail}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
