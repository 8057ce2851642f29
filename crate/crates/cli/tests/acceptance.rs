//! Acceptance run: one line per criterion, exit status nonzero when a gating
//! criterion fails. Conjecture checks are printed and never gate.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qcong_cli::{sweep, Format, RunConfig};
use qcong_core::congruence::{
    max_root_index, verify_case, verify_parametric_generic, verify_parametric_roots, verify_parametric_sampled,
    CheckKind, CongruenceReport,
};
use qcong_core::padic::{dwork_quotient_check, lucas_min_valuation, run_classical, verify_m2, ClassicalKind};
use qcong_core::qseries::{Family, Reading};

const THEOREM_GRID: [(u64, u64); 9] = [(3, 1), (5, 1), (7, 1), (9, 1), (15, 1), (3, 2), (5, 2), (7, 2), (3, 3)];
const PER_CASE_BUDGET: Duration = Duration::from_secs(60);
const GRID_BUDGET: Duration = Duration::from_secs(600);
const LEMMA_BUDGET: Duration = Duration::from_secs(5);
const CLASSICAL_BUDGET: Duration = Duration::from_secs(30);

struct Line {
    id: u32,
    pass: bool,
    gating: bool,
    detail: String,
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Runs `kinds` over the theorem grid; returns (failures, slowest, total).
fn theorem_grid(kinds: &[CheckKind]) -> (Vec<String>, Duration, Duration) {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut total = Duration::ZERO;
    for &kind in kinds {
        for (n, r) in THEOREM_GRID {
            let (rep, t) = timed(|| verify_case(kind, n, r, 1));
            slowest = slowest.max(t);
            total += t;
            match rep {
                Ok(rep) if rep.pass && !rep.conjectural && t < PER_CASE_BUDGET => {}
                Ok(rep) => failures.push(format!("{} ({})", rep.case_label, secs(t))),
                Err(e) => failures.push(format!("{kind} n={n} r={r}: {e}")),
            }
        }
    }
    (failures, slowest, total)
}

fn grid_line(id: u32, kinds: &[CheckKind]) -> Line {
    let (failures, slowest, total) = theorem_grid(kinds);
    let count = kinds.len() * THEOREM_GRID.len();
    let pass = failures.is_empty() && total < GRID_BUDGET;
    Line {
        id,
        pass,
        gating: true,
        detail: if failures.is_empty() {
            format!("{count} cases exact, slowest {}, total {}", secs(slowest), secs(total))
        } else {
            format!("failed: {}", failures.join(", "))
        },
    }
}

fn criterion_3() -> Line {
    let (failures, t) = timed(|| {
        let mut failures = Vec::new();
        for kind in [CheckKind::Lemma22, CheckKind::Lemma31] {
            for n in (3..=21).step_by(2) {
                match verify_case(kind, n, 1, 1) {
                    Ok(rep) if rep.pass && rep.identically_equal => {}
                    Ok(rep) => failures.push(rep.case_label),
                    Err(e) => failures.push(format!("{kind} n={n}: {e}")),
                }
            }
        }
        failures
    });
    Line {
        id: 3,
        pass: failures.is_empty() && t < LEMMA_BUDGET,
        gating: true,
        detail: format!("20 closed forms, {} failed, {}", failures.len(), secs(t)),
    }
}

fn criterion_4() -> Line {
    let mut failures = Vec::new();
    let mut checked = 0;
    let (mut printed_pass, mut printed_total) = (0, 0);
    for n in [3, 5] {
        for r in [1, 2] {
            for d in [1, 2] {
                let Ok(max_j) = max_root_index(n, r, d) else {
                    failures.push(format!("n={n} r={r} d={d}: no root range"));
                    continue;
                };
                for j in 0..=max_j {
                    for (family, reading) in [(Family::CParam, Reading::Consistent), (Family::JParam, Reading::Consistent)] {
                        checked += 1;
                        match verify_parametric_roots(family, n, r, d, j, reading) {
                            Ok(rep) if rep.pass && rep.identically_equal => {}
                            Ok(rep) => failures.push(rep.case_label),
                            Err(e) => failures.push(format!("{family:?} n={n} r={r} d={d} j={j}: {e}")),
                        }
                    }
                    printed_total += 1;
                    if matches!(
                        verify_parametric_roots(Family::JParam, n, r, d, j, Reading::Printed),
                        Ok(ref rep) if rep.pass
                    ) {
                        printed_pass += 1;
                    }
                }
            }
        }
    }
    Line {
        id: 4,
        pass: failures.is_empty(),
        gating: true,
        detail: format!(
            "{checked} root identities, {} failed; J right side verifies under the consistent reading \
             (printed reading {printed_pass}/{printed_total})",
            failures.len()
        ),
    }
}

fn criterion_5() -> Line {
    let mut failures = Vec::new();
    let mut total = 0;
    for family in [Family::CParam, Family::JParam] {
        for (n, r) in [(3, 1), (3, 2), (5, 1)] {
            for t in [3, 5, 7] {
                total += 1;
                match verify_parametric_sampled(family, n, r, 1, t) {
                    Ok(rep) if rep.pass => {}
                    Ok(rep) => failures.push(rep.case_label),
                    Err(e) => failures.push(format!("{family:?} n={n} r={r} t={t}: {e}")),
                }
            }
        }
    }
    let mut generic_fail = 0;
    let mut generic_total = 0;
    for family in [Family::CParam, Family::JParam] {
        for (n, r) in [(3, 1), (3, 2), (5, 1)] {
            for c in [2, 3, -2, 5] {
                generic_total += 1;
                if !matches!(verify_parametric_generic(family, n, r, 1, c), Ok(ref rep) if rep.pass) {
                    generic_fail += 1;
                }
            }
        }
    }
    // a = q^t with n^r not dividing t lands on a pole-cancelling point of the
    // prefactor; the sampled claim is false there (see the decisions ledger).
    Line {
        id: 5,
        pass: failures.is_empty(),
        gating: false,
        detail: format!(
            "a = q^t: {}/{total} hold (e.g. {}); constant a: {}/{generic_total} hold",
            total - failures.len(),
            failures.first().map(String::as_str).unwrap_or("none failing"),
            generic_total - generic_fail
        ),
    }
}

fn criterion_6(conjectures: &mut Vec<String>) -> Line {
    let mut failures = Vec::new();
    for n in (3..=11).step_by(2) {
        match verify_case(CheckKind::Gw, n, 1, 1) {
            Ok(rep) if rep.pass => {}
            Ok(rep) => failures.push(rep.case_label),
            Err(e) => failures.push(format!("gw n={n}: {e}")),
        }
        conjectures.push(conjecture(verify_case(CheckKind::Qj2, n, 1, 1), &format!("qj2 n={n}")));
    }
    Line {
        id: 6,
        pass: failures.is_empty(),
        gating: true,
        detail: format!("gw for n = 3..11 odd, {} failed (qj2 reported below)", failures.len()),
    }
}

fn outcome_line(id: u32, parts: &[(&str, support::Outcome)]) -> Line {
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, outcome) in parts {
        match outcome {
            Ok(count) => detail.push(format!("{name} {count}")),
            Err(e) => {
                pass = false;
                detail.push(format!("{name} FAILED: {e}"));
            }
        }
    }
    Line {
        id,
        pass,
        gating: true,
        detail: detail.join(", "),
    }
}

fn criterion_8(conjectures: &mut Vec<String>) -> Line {
    let (failures, t) = timed(|| {
        let mut failures = Vec::new();
        let mut check = |kind, p, r, s, conjectural: bool| match run_classical(kind, p, r, s, 0) {
            Ok(rep) if conjectural => conjectures.push(format!(
                "{} {} (v = {})",
                rep.case_label,
                if rep.pass { "holds" } else { "fails" },
                rep.valuation
            )),
            Ok(rep) if rep.pass && rep.paths_agree => {}
            Ok(rep) => failures.push(rep.case_label),
            Err(e) => failures.push(format!("{kind} p={p} r={r}: {e}")),
        };
        for kind in [ClassicalKind::C2, ClassicalKind::J2] {
            for p in [5, 7, 11, 13] {
                check(kind, p, 1, 4, false);
            }
        }
        for kind in [ClassicalKind::C3, ClassicalKind::J3, ClassicalKind::Cc, ClassicalKind::Jj] {
            for p in [5, 7, 11] {
                for r in [1, 2] {
                    check(kind, p, r, 3 * r, false);
                    check(kind, p, r, 4 * r, true);
                }
            }
        }
        failures
    });
    Line {
        id: 8,
        pass: failures.is_empty() && t < CLASSICAL_BUDGET,
        gating: true,
        detail: format!("32 asserted valuations, {} failed, {}", failures.len(), secs(t)),
    }
}

fn criterion_9() -> Line {
    let mut failures = Vec::new();
    let mut p3 = String::new();
    for p in [3, 5, 7, 11, 13] {
        match verify_m2(p) {
            Ok(rep) if rep.pass && rep.paths_agree => {
                if p == 3 {
                    p3 = rep
                        .residues
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect::<Vec<_>>()
                        .join(" ");
                    let gamma = rep.residues.iter().find(|(k, _)| k == "gamma_p").map(|(_, v)| v.as_str());
                    if gamma != Some("23") {
                        failures.push(format!("p=3 gamma residue {gamma:?}, expected 23 = -4 mod 27"));
                    }
                }
            }
            Ok(rep) => failures.push(rep.case_label),
            Err(e) => failures.push(format!("m2 p={p}: {e}")),
        }
    }
    Line {
        id: 9,
        pass: failures.is_empty(),
        gating: true,
        detail: format!("p in 3,5,7,11,13, {} failed; p=3 mod 27: {p3}", failures.len()),
    }
}

fn criterion_10() -> Line {
    let mut failures = Vec::new();
    for p in [5, 7] {
        for r in [1, 2] {
            match dwork_quotient_check(p, r, 50) {
                Ok(rep) if rep.pass => {}
                Ok(rep) => failures.push(rep.case_label),
                Err(e) => failures.push(format!("dwork p={p} r={r}: {e}")),
            }
        }
    }
    Line {
        id: 10,
        pass: failures.is_empty(),
        gating: true,
        detail: format!("p in 5,7, r in 1,2, K = 50, {} failed", failures.len()),
    }
}

fn criterion_11() -> Line {
    let mut detail = Vec::new();
    let mut pass = true;
    for p in [5, 7, 11] {
        match lucas_min_valuation(p, 2) {
            Ok(v) => {
                pass &= v.at_least(4);
                detail.push(format!("p={p} min v={v}"));
            }
            Err(e) => {
                pass = false;
                detail.push(format!("p={p}: {e}"));
            }
        }
    }
    Line {
        id: 11,
        pass,
        gating: true,
        detail: detail.join(", "),
    }
}

fn criterion_12() -> Line {
    match verify_case(CheckKind::HalfVsFullM, 3, 1, 1) {
        Ok(rep) => {
            let parts: Vec<String> = rep
                .parts
                .iter()
                .map(|p| format!("Φ{} found {} need {} expected {}", p.d, p.found, p.required, if p.expect_holds { "≡" } else { "≢" }))
                .collect();
            Line {
                id: 12,
                pass: rep.pass,
                gating: true,
                detail: parts.join("; "),
            }
        }
        Err(e) => Line {
            id: 12,
            pass: false,
            gating: true,
            detail: e.to_string(),
        },
    }
}

fn determinism() -> support::Outcome {
    let cfg = RunConfig {
        checks: ["thm1-half", "thm2-full", "param-roots-c", "gw", "lemma31", "c3", "m2", "dwork"]
            .map(String::from)
            .to_vec(),
        n_values: vec![3, 5],
        r_max: 2,
        d_values: vec![1, 2],
        primes: vec![5, 7],
        dwork_k: 20,
        ..RunConfig::default()
    };
    let one = sweep(&cfg, 1).map_err(|e| e.to_string())?.canonical();
    let four = sweep(&cfg, 4).map_err(|e| e.to_string())?.canonical();
    for format in [Format::Json, Format::Csv, Format::Text] {
        if one.emit(format).map_err(|e| e.to_string())? != four.emit(format).map_err(|e| e.to_string())? {
            return Err(format!("{format:?} output differs between 1 and 4 workers"));
        }
    }
    Ok(one.entries.len())
}

fn conjecture(rep: qcong_core::Result<CongruenceReport>, label: &str) -> String {
    match rep {
        Ok(rep) => format!("{} {}", rep.case_label, if rep.pass { "holds" } else { "fails" }),
        Err(e) => format!("{label}: error {e}"),
    }
}

fn main() -> ExitCode {
    let mut conjectures = Vec::new();
    let lines = vec![
        grid_line(1, &[CheckKind::Thm1Half, CheckKind::Thm1Full]),
        grid_line(2, &[CheckKind::Thm2Half, CheckKind::Thm2Full]),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(&mut conjectures),
        outcome_line(
            7,
            &[
                ("specializations", support::jackson_specialization(15)),
                ("random instances", support::jackson_random(100, 7)),
            ],
        ),
        criterion_8(&mut conjectures),
        criterion_9(),
        criterion_10(),
        criterion_11(),
        criterion_12(),
        outcome_line(
            13,
            &[
                ("cyclotomic n <=", support::cyclotomic_product_identity(200)),
                ("divisions", support::division_reconstruction(1000, 13)),
                ("factored products", support::analytic_valuation_agrees(500, 13)),
                ("brute-force sums", support::sums_match_brute_force()),
                ("deterministic entries", determinism()),
            ],
        ),
    ];
    for kind in [CheckKind::Conj41, CheckKind::Conj42, CheckKind::Conj43] {
        for n in [3, 5, 7] {
            conjectures.push(conjecture(verify_case(kind, n, 1, 1), &format!("{kind} n={n}")));
        }
    }

    let mut gating_failures = 0;
    for line in &lines {
        let status = match (line.pass, line.gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (known, non-gating)",
        };
        if !line.pass && line.gating {
            gating_failures += 1;
        }
        println!("criterion {:>2}: {status}  {}", line.id, line.detail);
    }
    println!("conjectures (reported, never gating):");
    for c in &conjectures {
        println!("  {c}");
    }
    if gating_failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{gating_failures} gating criteria failed");
        ExitCode::FAILURE
    }
}
