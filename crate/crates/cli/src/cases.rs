//! Expansion of a run configuration into cases, and their execution.

use std::collections::BTreeMap;

use qcong_core::congruence::{max_root_index, run_case, CaseSpec, CheckKind};
use qcong_core::padic::{run_classical, ClassicalKind};
use qcong_core::qseries::Reading;
use rayon::prelude::*;

use crate::config::{Check, RunConfig};
use crate::report::Entry;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalCase {
    pub kind: ClassicalKind,
    pub p: u64,
    pub r: u64,
    pub exponent: u64,
    pub k_cap: u64,
}

impl ClassicalCase {
    /// Van Hamme's claims are asserted at `p^4`; Swisher's at `p^{3r}` and
    /// conjectural at `p^{4r}`.
    pub fn is_conjectural(&self) -> bool {
        match self.kind {
            ClassicalKind::C2 | ClassicalKind::J2 => self.exponent > 4,
            ClassicalKind::C3 | ClassicalKind::J3 | ClassicalKind::Cc | ClassicalKind::Jj => {
                self.exponent > 3 * self.r
            }
            _ => false,
        }
    }

    pub fn label(&self) -> String {
        let p = self.p;
        match self.kind {
            ClassicalKind::C2 | ClassicalKind::J2 => format!("{} p={p:03} s={}", self.kind, self.exponent),
            ClassicalKind::M2 => format!("m2 p={p:03}"),
            ClassicalKind::Dwork => format!("dwork p={p:03} r={} K={}", self.r, self.k_cap),
            ClassicalKind::Lucas => format!("lucas p={p:03} r={}", self.r),
            _ => format!("{} p={p:03} r={} s={}", self.kind, self.r, self.exponent),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    Q(CaseSpec),
    Classical(ClassicalCase),
}

impl Case {
    pub fn label(&self) -> String {
        match self {
            Case::Q(spec) => spec.label(),
            Case::Classical(c) => c.label(),
        }
    }

    pub fn is_conjectural(&self) -> bool {
        match self {
            Case::Q(spec) => spec.is_conjectural(),
            Case::Classical(c) => c.is_conjectural(),
        }
    }

    pub fn run(&self) -> Entry {
        match self {
            Case::Q(spec) => match run_case(spec) {
                Ok(rep) => Entry::from_congruence(&rep),
                Err(e) => Entry::failed_q(spec, e.to_string()),
            },
            Case::Classical(c) => match run_classical(c.kind, c.p, c.r, c.exponent, c.k_cap) {
                Ok(rep) => Entry::from_residue(&rep, c.is_conjectural()),
                Err(e) => Entry::failed_classical(c, e.to_string()),
            },
        }
    }
}

fn q_cases(kind: CheckKind, cfg: &RunConfig) -> Vec<CaseSpec> {
    let rs: Vec<u64> = if kind.uses_r() { (1..=cfg.r_max).collect() } else { vec![1] };
    let ds: Vec<u64> = if kind.uses_d() { cfg.d_values.clone() } else { vec![1] };
    let mut out = Vec::new();
    for &n in &cfg.n_values {
        for &r in &rs {
            for &d in &ds {
                let base = CaseSpec::new(kind, n, r, d);
                match kind {
                    CheckKind::ParamRootsC | CheckKind::ParamRootsJ => {
                        let Ok(max) = max_root_index(n, r, d) else {
                            out.push(base);
                            continue;
                        };
                        for j in 0..=max {
                            if kind == CheckKind::ParamRootsJ {
                                out.push(base.with_j(j).with_reading(Reading::Consistent));
                                out.push(base.with_j(j).with_reading(Reading::Printed));
                            } else {
                                out.push(base.with_j(j));
                            }
                        }
                    }
                    CheckKind::ParamSampledC | CheckKind::ParamSampledJ => {
                        out.extend(cfg.t_values.iter().map(|&t| base.with_t(t)));
                    }
                    CheckKind::ParamGenericC | CheckKind::ParamGenericJ => {
                        out.extend(cfg.c_values.iter().map(|&c| base.with_c(c)));
                    }
                    _ => out.push(base),
                }
            }
        }
    }
    out
}

fn classical_cases(kind: ClassicalKind, cfg: &RunConfig) -> Vec<ClassicalCase> {
    let mut out = Vec::new();
    let case = |p, r, exponent| ClassicalCase {
        kind,
        p,
        r,
        exponent,
        k_cap: cfg.dwork_k,
    };
    for &p in &cfg.primes {
        match kind {
            ClassicalKind::C2 | ClassicalKind::J2 => {
                out.push(case(p, 1, 3));
                out.push(case(p, 1, 4));
            }
            ClassicalKind::C3 | ClassicalKind::J3 | ClassicalKind::Cc | ClassicalKind::Jj => {
                for r in 1..=cfg.r_max {
                    out.push(case(p, r, 3 * r));
                    out.push(case(p, r, 4 * r));
                }
            }
            ClassicalKind::M2 => out.push(case(p, 1, 3)),
            ClassicalKind::Dwork => out.extend((1..=cfg.r_max).map(|r| case(p, r, r))),
            ClassicalKind::Lucas => out.extend((1..=cfg.r_max).map(|r| case(p, r, 4))),
        }
    }
    out
}

/// All cases of a configuration admitted by its exponent policy, keyed and
/// deduplicated by label.
pub fn expand(cfg: &RunConfig) -> Result<Vec<Case>, CliError> {
    let mut by_label = BTreeMap::new();
    for check in cfg.parsed_checks()? {
        let cases: Vec<Case> = match check {
            Check::Q(kind) => q_cases(kind, cfg).into_iter().map(Case::Q).collect(),
            Check::Classical(kind) => classical_cases(kind, cfg).into_iter().map(Case::Classical).collect(),
        };
        for case in cases {
            if cfg.exponent_policy.admits(case.is_conjectural()) {
                by_label.entry(case.label()).or_insert(case);
            }
        }
    }
    Ok(by_label.into_values().collect())
}

/// Runs every case on a pool of `parallelism` workers; entries come back
/// sorted by label.
pub fn run_all(cases: &[Case], parallelism: usize) -> Result<Vec<Entry>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let mut entries: Vec<Entry> = pool.install(|| cases.par_iter().map(Case::run).collect());
    entries.sort_by(|a, b| a.case_label.cmp(&b.case_label));
    Ok(entries)
}
