//! Report entries, the report set and its JSON / CSV / text forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use qcong_core::congruence::{CaseSpec, CongruenceReport};
use qcong_core::padic::ResidueReport;
use qcong_core::qseries::Reading;
use qcong_core::Valuation;
use serde::{Deserialize, Serialize};

use crate::cases::ClassicalCase;
use crate::config::Format;
use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reading: Option<Reading>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Part {
    pub component: String,
    pub d: u64,
    pub required: u64,
    pub found: Valuation,
    pub margin: Option<i64>,
    pub expect_holds: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Identity {
    pub component: String,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Classical {
    pub p: u64,
    pub exponent: u64,
    pub valuation: Valuation,
    pub paths_agree: bool,
    pub residues: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Entry {
    pub case_label: String,
    pub kind: String,
    pub parameters: Parameters,
    pub conjectural: bool,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identically_equal: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<Part>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<Identity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical: Option<Classical>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

fn q_parameters(spec: &CaseSpec) -> Parameters {
    let p = spec.params();
    Parameters {
        n: p.n,
        r: p.r,
        d: p.d,
        j: p.j,
        t: p.t,
        c: p.c,
        reading: p.reading,
        ..Parameters::default()
    }
}

impl Entry {
    pub fn from_congruence(rep: &CongruenceReport) -> Entry {
        let p = &rep.params;
        Entry {
            case_label: rep.case_label.clone(),
            kind: rep.kind.map(|k| k.name().to_string()).unwrap_or_default(),
            parameters: Parameters {
                n: p.n,
                r: p.r,
                d: p.d,
                j: p.j,
                t: p.t,
                c: p.c,
                reading: p.reading,
                ..Parameters::default()
            },
            conjectural: rep.conjectural,
            pass: rep.pass,
            identically_equal: Some(rep.identically_equal),
            parts: rep
                .parts
                .iter()
                .map(|x| Part {
                    component: x.component.clone(),
                    d: x.d,
                    required: x.required,
                    found: x.found,
                    margin: x.margin,
                    expect_holds: x.expect_holds,
                    ok: x.ok,
                })
                .collect(),
            identities: rep
                .identities
                .iter()
                .map(|i| Identity {
                    component: i.component.clone(),
                    equal: i.equal,
                })
                .collect(),
            classical: None,
            error: None,
            elapsed_ms: rep.elapsed_ms(),
        }
    }

    pub fn from_residue(rep: &ResidueReport, conjectural: bool) -> Entry {
        Entry {
            case_label: rep.case_label.clone(),
            kind: rep.kind.name().to_string(),
            parameters: Parameters {
                r: rep.r,
                p: Some(rep.p),
                exponent: Some(rep.exponent),
                ..Parameters::default()
            },
            conjectural,
            pass: rep.pass,
            identically_equal: None,
            parts: Vec::new(),
            identities: Vec::new(),
            classical: Some(Classical {
                p: rep.p,
                exponent: rep.exponent,
                valuation: rep.valuation,
                paths_agree: rep.paths_agree,
                residues: rep.residues.iter().cloned().collect(),
            }),
            error: None,
            elapsed_ms: rep.elapsed_ms,
        }
    }

    pub fn failed_q(spec: &CaseSpec, error: String) -> Entry {
        Entry {
            case_label: spec.label(),
            kind: spec.kind.name().to_string(),
            parameters: q_parameters(spec),
            conjectural: spec.is_conjectural(),
            pass: false,
            identically_equal: None,
            parts: Vec::new(),
            identities: Vec::new(),
            classical: None,
            error: Some(error),
            elapsed_ms: 0.0,
        }
    }

    pub fn failed_classical(case: &ClassicalCase, error: String) -> Entry {
        Entry {
            case_label: case.label(),
            kind: case.kind.name().to_string(),
            parameters: Parameters {
                r: Some(case.r),
                p: Some(case.p),
                exponent: Some(case.exponent),
                ..Parameters::default()
            },
            conjectural: case.is_conjectural(),
            pass: false,
            identically_equal: None,
            parts: Vec::new(),
            identities: Vec::new(),
            classical: None,
            error: Some(error),
            elapsed_ms: 0.0,
        }
    }

    pub fn asserted_failure(&self) -> bool {
        !self.pass && !self.conjectural
    }

    fn detail(&self) -> String {
        if let Some(e) = &self.error {
            return format!("error: {e}");
        }
        if let Some(c) = &self.classical {
            return format!("v_{}={} need {}", c.p, c.valuation, c.exponent);
        }
        let mut out = Vec::new();
        for p in &self.parts {
            let mark = if p.expect_holds { "" } else { "!" };
            out.push(format!("{mark}Φ{}:{}/{}", p.d, p.found, p.required));
        }
        for i in &self.identities {
            out.push(format!("{}:{}", i.component, if i.equal { "=" } else { "≠" }));
        }
        out.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Meta {
    pub timestamp: String,
    pub engine_version: String,
    pub config_digest: String,
    pub entry_count: usize,
    pub asserted_failures: usize,
    pub conjectural_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportSet {
    pub meta: Meta,
    pub entries: Vec<Entry>,
}

pub const FIXED_TIMESTAMP: &str = "1970-01-01T00:00:00Z";

impl ReportSet {
    /// Sorts entries by label and fills in the counts. With `deterministic`
    /// set, timings are zeroed and the timestamp pinned.
    pub fn new(mut entries: Vec<Entry>, config_digest: String, deterministic: bool) -> ReportSet {
        entries.sort_by(|a, b| a.case_label.cmp(&b.case_label));
        let timestamp = if deterministic {
            FIXED_TIMESTAMP.to_string()
        } else {
            chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
        };
        let mut set = ReportSet {
            meta: Meta {
                timestamp,
                engine_version: qcong_core::VERSION.to_string(),
                config_digest,
                entry_count: entries.len(),
                asserted_failures: entries.iter().filter(|e| e.asserted_failure()).count(),
                conjectural_failures: entries.iter().filter(|e| e.conjectural && !e.pass).count(),
            },
            entries,
        };
        if deterministic {
            set = set.canonical();
        }
        set
    }

    /// Copy with every run-dependent field (timings, timestamp) cleared.
    pub fn canonical(&self) -> ReportSet {
        let mut out = self.clone();
        out.meta.timestamp = FIXED_TIMESTAMP.to_string();
        for e in &mut out.entries {
            e.elapsed_ms = 0.0;
        }
        out
    }

    pub fn emit(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Json => {
                let mut bytes = serde_json::to_vec_pretty(self).map_err(|e| CliError::Runtime(e.to_string()))?;
                bytes.push(b'\n');
                Ok(bytes)
            }
            Format::Csv => self.emit_csv(),
            Format::Text => Ok(self.emit_text().into_bytes()),
        }
    }

    fn emit_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Runtime(e.to_string());
        for e in &self.entries {
            for row in CsvRow::rows(e) {
                w.serialize(row).map_err(err)?;
            }
        }
        w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))
    }

    fn emit_text(&self) -> String {
        let header = ["case", "kind", "conj", "pass", "detail", "ms"];
        let rows: Vec<[String; 6]> = self
            .entries
            .iter()
            .map(|e| {
                [
                    e.case_label.clone(),
                    e.kind.clone(),
                    if e.conjectural { "yes" } else { "no" }.to_string(),
                    if e.pass { "PASS" } else { "FAIL" }.to_string(),
                    e.detail(),
                    format!("{:.1}", e.elapsed_ms),
                ]
            })
            .collect();
        let mut widths = header.map(|h| h.chars().count());
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&mut out, &header.map(String::from));
        for row in &rows {
            line(&mut out, row);
        }
        let _ = writeln!(
            out,
            "{} entries, {} asserted failures, {} conjectural failures",
            self.meta.entry_count, self.meta.asserted_failures, self.meta.conjectural_failures
        );
        out
    }
}

/// One flattened CSV row: one per modulus part, identity or classical claim.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub case_label: String,
    pub kind: String,
    pub conjectural: bool,
    pub pass: bool,
    pub n: Option<u64>,
    pub r: Option<u64>,
    pub d: Option<u64>,
    pub j: Option<u64>,
    pub t: Option<i64>,
    pub c: Option<i64>,
    pub reading: Option<String>,
    pub p: Option<u64>,
    pub exponent: Option<u64>,
    pub component: Option<String>,
    pub cyclotomic: Option<u64>,
    pub required: Option<u64>,
    /// A number, or `inf`.
    pub found: Option<String>,
    pub margin: Option<i64>,
    pub valuation: Option<String>,
    pub expect_holds: Option<bool>,
    pub ok: Option<bool>,
    pub equal: Option<bool>,
    pub elapsed_ms: f64,
    pub error: Option<String>,
}

impl CsvRow {
    fn rows(e: &Entry) -> Vec<CsvRow> {
        let base = CsvRow {
            case_label: e.case_label.clone(),
            kind: e.kind.clone(),
            conjectural: e.conjectural,
            pass: e.pass,
            n: e.parameters.n,
            r: e.parameters.r,
            d: e.parameters.d,
            j: e.parameters.j,
            t: e.parameters.t,
            c: e.parameters.c,
            reading: e.parameters.reading.map(|r| match r {
                Reading::Consistent => "consistent".to_string(),
                Reading::Printed => "printed".to_string(),
            }),
            p: e.parameters.p,
            exponent: e.parameters.exponent,
            elapsed_ms: e.elapsed_ms,
            error: e.error.clone(),
            ..CsvRow::default()
        };
        let mut rows = Vec::new();
        for part in &e.parts {
            rows.push(CsvRow {
                component: Some(part.component.clone()),
                cyclotomic: Some(part.d),
                required: Some(part.required),
                found: Some(part.found.to_string()),
                margin: part.margin,
                expect_holds: Some(part.expect_holds),
                ok: Some(part.ok),
                ..base.clone()
            });
        }
        for identity in &e.identities {
            rows.push(CsvRow {
                component: Some(identity.component.clone()),
                equal: Some(identity.equal),
                ..base.clone()
            });
        }
        if let Some(c) = &e.classical {
            rows.push(CsvRow {
                component: Some(format!("p^{}", c.exponent)),
                valuation: Some(c.valuation.to_string()),
                ok: Some(e.pass),
                ..base.clone()
            });
        }
        if rows.is_empty() {
            rows.push(base);
        }
        rows
    }
}

pub fn parse_csv(bytes: &[u8]) -> Result<Vec<CsvRow>, csv::Error> {
    csv::Reader::from_reader(bytes).deserialize().collect()
}
